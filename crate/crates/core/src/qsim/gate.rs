use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::QsimError;

pub type Matrix2 = [[Complex64; 2]; 2];

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// A gate in the simulator's native set.
///
/// Rotation conventions: `Rx`, `Ry` and `Rz` are the usual half-angle
/// rotations `exp(-i θ P / 2)`. `Rzz(φ)` is `exp(+i φ Z⊗Z)` with no half
/// angle and no minus sign, so that the ZZ data embedding can be written with
/// its phase functions unchanged.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GateRecord", into = "GateRecord")]
pub enum Gate {
    H(usize),
    Rx(usize, f64),
    Ry(usize, f64),
    Rz(usize, f64),
    Rzz(usize, usize, f64),
    Cz(usize, usize),
    Cnot { control: usize, target: usize },
}

/// Serialized gate kinds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GateKind {
    H,
    Rx,
    Ry,
    Rz,
    Rzz,
    Cz,
    Cnot,
}

/// On-disk form of a gate: `{"kind": "rzz", "targets": [0, 1], "angle": 0.3}`.
///
/// `angle` is omitted for `h`, `cz` and `cnot`. For `cnot` the first target is
/// the control.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GateRecord {
    pub kind: GateKind,
    pub targets: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub angle: Option<f64>,
}

impl From<Gate> for GateRecord {
    fn from(g: Gate) -> Self {
        let (kind, targets, angle) = match g {
            Gate::H(q) => (GateKind::H, vec![q], None),
            Gate::Rx(q, a) => (GateKind::Rx, vec![q], Some(a)),
            Gate::Ry(q, a) => (GateKind::Ry, vec![q], Some(a)),
            Gate::Rz(q, a) => (GateKind::Rz, vec![q], Some(a)),
            Gate::Rzz(a, b, t) => (GateKind::Rzz, vec![a, b], Some(t)),
            Gate::Cz(a, b) => (GateKind::Cz, vec![a, b], None),
            Gate::Cnot { control, target } => (GateKind::Cnot, vec![control, target], None),
        };
        GateRecord { kind, targets, angle }
    }
}

impl TryFrom<GateRecord> for Gate {
    type Error = QsimError;

    fn try_from(r: GateRecord) -> Result<Self, Self::Error> {
        let arity = match r.kind {
            GateKind::H | GateKind::Rx | GateKind::Ry | GateKind::Rz => 1,
            GateKind::Rzz | GateKind::Cz | GateKind::Cnot => 2,
        };
        if r.targets.len() != arity {
            return Err(QsimError::MalformedGate(format!(
                "{:?} expects {} target(s), got {}",
                r.kind,
                arity,
                r.targets.len()
            )));
        }
        let needs_angle = matches!(
            r.kind,
            GateKind::Rx | GateKind::Ry | GateKind::Rz | GateKind::Rzz
        );
        let angle = match (needs_angle, r.angle) {
            (true, Some(a)) if a.is_finite() => a,
            (true, Some(_)) => {
                return Err(QsimError::MalformedGate(format!("{:?} angle is not finite", r.kind)))
            }
            (true, None) => {
                return Err(QsimError::MalformedGate(format!("{:?} requires an angle", r.kind)))
            }
            (false, _) => 0.0,
        };
        let t = &r.targets;
        let gate = match r.kind {
            GateKind::H => Gate::H(t[0]),
            GateKind::Rx => Gate::Rx(t[0], angle),
            GateKind::Ry => Gate::Ry(t[0], angle),
            GateKind::Rz => Gate::Rz(t[0], angle),
            GateKind::Rzz => Gate::Rzz(t[0], t[1], angle),
            GateKind::Cz => Gate::Cz(t[0], t[1]),
            GateKind::Cnot => Gate::Cnot { control: t[0], target: t[1] },
        };
        if arity == 2 && t[0] == t[1] {
            return Err(QsimError::DuplicateTarget(t[0]));
        }
        Ok(gate)
    }
}

impl Gate {
    pub fn kind(&self) -> GateKind {
        match self {
            Gate::H(_) => GateKind::H,
            Gate::Rx(..) => GateKind::Rx,
            Gate::Ry(..) => GateKind::Ry,
            Gate::Rz(..) => GateKind::Rz,
            Gate::Rzz(..) => GateKind::Rzz,
            Gate::Cz(..) => GateKind::Cz,
            Gate::Cnot { .. } => GateKind::Cnot,
        }
    }

    /// Qubits the gate acts on. For `Cnot` the control comes first.
    pub fn targets(&self) -> impl Iterator<Item = usize> {
        let (a, b) = match *self {
            Gate::H(q) | Gate::Rx(q, _) | Gate::Ry(q, _) | Gate::Rz(q, _) => (q, None),
            Gate::Rzz(a, b, _) | Gate::Cz(a, b) => (a, Some(b)),
            Gate::Cnot { control, target } => (control, Some(target)),
        };
        std::iter::once(a).chain(b)
    }

    pub fn angle(&self) -> Option<f64> {
        match *self {
            Gate::Rx(_, a) | Gate::Ry(_, a) | Gate::Rz(_, a) | Gate::Rzz(_, _, a) => Some(a),
            _ => None,
        }
    }

    /// Checks target bounds and distinctness against a register width.
    pub fn validate(&self, n_qubits: usize) -> Result<(), QsimError> {
        let mut seen: Option<usize> = None;
        for q in self.targets() {
            if q >= n_qubits {
                return Err(QsimError::QubitOutOfRange { qubit: q, n_qubits });
            }
            if seen == Some(q) {
                return Err(QsimError::DuplicateTarget(q));
            }
            seen = Some(q);
        }
        if let Some(a) = self.angle() {
            if !a.is_finite() {
                return Err(QsimError::MalformedGate(format!("{:?} angle is not finite", self.kind())));
            }
        }
        Ok(())
    }

    /// The 2x2 matrix of a single-qubit gate, `None` for two-qubit gates.
    pub fn single_qubit_matrix(&self) -> Option<Matrix2> {
        match *self {
            Gate::H(_) => {
                let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
                Some([[h, h], [h, -h]])
            }
            Gate::Rx(_, t) => {
                let c = Complex64::new((t / 2.0).cos(), 0.0);
                let s = Complex64::new(0.0, -(t / 2.0).sin());
                Some([[c, s], [s, c]])
            }
            Gate::Ry(_, t) => {
                let c = Complex64::new((t / 2.0).cos(), 0.0);
                let s = Complex64::new((t / 2.0).sin(), 0.0);
                Some([[c, -s], [s, c]])
            }
            Gate::Rz(_, t) => Some([
                [Complex64::from_polar(1.0, -t / 2.0), ZERO],
                [ZERO, Complex64::from_polar(1.0, t / 2.0)],
            ]),
            _ => None,
        }
    }

    /// Dense matrix over the gate's own qubits.
    ///
    /// Local basis index `k` has the bit of the i-th listed target at
    /// position `i` (the first target is the least significant bit), matching
    /// the register-wide ordering used by [`super::StateVector`].
    pub fn matrix(&self) -> Vec<Vec<Complex64>> {
        if let Some(m) = self.single_qubit_matrix() {
            return m.iter().map(|r| r.to_vec()).collect();
        }
        let mut m = vec![vec![ZERO; 4]; 4];
        match *self {
            Gate::Rzz(_, _, phi) => {
                for (k, row) in m.iter_mut().enumerate() {
                    row[k] = Complex64::from_polar(1.0, phi * zz_eigenvalue(k & 1, k >> 1));
                }
            }
            Gate::Cz(..) => {
                for (k, row) in m.iter_mut().enumerate() {
                    row[k] = if k == 3 { -ONE } else { ONE };
                }
            }
            Gate::Cnot { .. } => {
                // control is bit 0, target is bit 1
                for k in 0..4usize {
                    let out = if k & 1 == 1 { k ^ 2 } else { k };
                    m[out][k] = ONE;
                }
            }
            _ => unreachable!("single-qubit gates handled above"),
        }
        m
    }
}

/// Eigenvalue of Z⊗Z on the basis state with the given two bits.
#[inline]
pub(crate) fn zz_eigenvalue(a: usize, b: usize) -> f64 {
    if a == b {
        1.0
    } else {
        -1.0
    }
}
