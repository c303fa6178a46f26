use std::fmt;

use serde::{Deserialize, Serialize};

use super::SvmError;

/// Kernel family and its shape parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum KernelKind {
    Linear,
    Poly { degree: u32, coef0: f64 },
    Rbf,
    Sigmoid { coef0: f64 },
}

/// Kernel width: `auto` resolves to `1 / n_features` at fit time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Gamma {
    Value(f64),
    #[serde(with = "auto_tag")]
    Auto,
}

mod auto_tag {
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str("auto")
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<(), D::Error> {
        let s = String::deserialize(d)?;
        if s == "auto" {
            Ok(())
        } else {
            Err(D::Error::custom(format!("expected \"auto\" or a number, got {s:?}")))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelSpec {
    #[serde(flatten)]
    pub kind: KernelKind,
    pub gamma: Gamma,
}

impl KernelSpec {
    pub fn linear() -> Self {
        KernelSpec { kind: KernelKind::Linear, gamma: Gamma::Auto }
    }

    /// Cubic polynomial with zero offset.
    pub fn poly() -> Self {
        KernelSpec { kind: KernelKind::Poly { degree: 3, coef0: 0.0 }, gamma: Gamma::Auto }
    }

    pub fn rbf() -> Self {
        KernelSpec { kind: KernelKind::Rbf, gamma: Gamma::Auto }
    }

    pub fn sigmoid() -> Self {
        KernelSpec { kind: KernelKind::Sigmoid { coef0: 0.0 }, gamma: Gamma::Auto }
    }

    pub fn with_gamma(mut self, gamma: f64) -> Self {
        self.gamma = Gamma::Value(gamma);
        self
    }

    /// The four kernels compared for the classical baseline.
    pub fn standard_candidates() -> Vec<KernelSpec> {
        vec![Self::linear(), Self::poly(), Self::rbf(), Self::sigmoid()]
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            KernelKind::Linear => "linear",
            KernelKind::Poly { .. } => "poly",
            KernelKind::Rbf => "rbf",
            KernelKind::Sigmoid { .. } => "sigmoid",
        }
    }

    pub fn validate(&self) -> Result<(), SvmError> {
        if let KernelKind::Poly { degree, .. } = self.kind {
            if degree < 1 {
                return Err(SvmError::InvalidParameter("polynomial degree must be at least 1".into()));
            }
        }
        if let Gamma::Value(g) = self.gamma {
            if !(g.is_finite() && g > 0.0) {
                return Err(SvmError::InvalidParameter(format!("gamma must be positive, got {g}")));
            }
        }
        Ok(())
    }

    /// Fixes `auto` gamma for a given input dimension.
    pub fn resolve(&self, n_features: usize) -> Result<KernelSpec, SvmError> {
        self.validate()?;
        let gamma = match self.gamma {
            Gamma::Auto if n_features == 0 => {
                return Err(SvmError::InvalidParameter("auto gamma needs at least one feature".into()))
            }
            Gamma::Auto => 1.0 / n_features as f64,
            Gamma::Value(g) => g,
        };
        Ok(KernelSpec { kind: self.kind, gamma: Gamma::Value(gamma) })
    }

    /// Evaluates a resolved kernel without dimension checks.
    #[inline]
    pub(crate) fn eval_unchecked(&self, gamma: f64, u: &[f64], v: &[f64]) -> f64 {
        match self.kind {
            KernelKind::Linear => dot(u, v),
            KernelKind::Poly { degree, coef0 } => (gamma * dot(u, v) + coef0).powi(degree as i32),
            KernelKind::Rbf => {
                let d2: f64 = u.iter().zip(v).map(|(a, b)| (a - b) * (a - b)).sum();
                (-gamma * d2).exp()
            }
            KernelKind::Sigmoid { coef0 } => (gamma * dot(u, v) + coef0).tanh(),
        }
    }

    pub(crate) fn gamma_value(&self) -> f64 {
        match self.gamma {
            Gamma::Value(g) => g,
            Gamma::Auto => f64::NAN,
        }
    }
}

impl fmt::Display for KernelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut c = self.name().chars();
        let first = c.next().map(|ch| ch.to_ascii_uppercase()).unwrap_or_default();
        write!(f, "{first}{}", c.as_str())
    }
}

#[inline]
fn dot(u: &[f64], v: &[f64]) -> f64 {
    u.iter().zip(v).map(|(a, b)| a * b).sum()
}

/// K(u, v) for `spec`, resolving `auto` gamma from the input dimension.
pub fn kernel_eval(spec: &KernelSpec, u: &[f64], v: &[f64]) -> Result<f64, SvmError> {
    if u.len() != v.len() {
        return Err(SvmError::DimensionMismatch { expected: u.len(), got: v.len() });
    }
    let r = spec.resolve(u.len())?;
    Ok(r.eval_unchecked(r.gamma_value(), u, v))
}
