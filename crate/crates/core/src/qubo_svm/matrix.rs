use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use super::QuboError;

/// Upper-triangular QUBO coefficients; the diagonal carries the linear terms.
///
/// `energy(b) = Σ_{i≤j} Q_ij b_i b_j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuboMatrix {
    dim: usize,
    /// Row-major dense storage; entries below the diagonal stay zero.
    entries: Vec<f64>,
}

impl QuboMatrix {
    pub fn zeros(dim: usize) -> Self {
        QuboMatrix { dim, entries: vec![0.0; dim * dim] }
    }

    /// Builds from a full square matrix, folding `Q_ji` (i<j) onto `Q_ij`.
    pub fn from_dense(rows: &[Vec<f64>]) -> Result<Self, QuboError> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(QuboError::Shape("matrix is not square".into()));
        }
        let mut q = Self::zeros(dim);
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                q.add(i, j, v);
            }
        }
        Ok(q)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.dim + j]
    }

    /// Adds `v` to the coefficient of `b_i b_j`, whichever order is given.
    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        let (a, b) = if i <= j { (i, j) } else { (j, i) };
        self.entries[a * self.dim + b] += v;
    }

    /// Number of stored upper-triangular slots including the diagonal.
    pub fn upper_entries(&self) -> usize {
        self.dim * (self.dim + 1) / 2
    }

    pub fn energy(&self, bits: &[u8]) -> Result<f64, QuboError> {
        if bits.len() != self.dim {
            return Err(QuboError::BitLength { expected: self.dim, got: bits.len() });
        }
        Ok(self.energy_unchecked(bits))
    }

    pub(crate) fn energy_unchecked(&self, bits: &[u8]) -> f64 {
        let mut e = 0.0;
        for i in 0..self.dim {
            if bits[i] == 0 {
                continue;
            }
            let row = &self.entries[i * self.dim..(i + 1) * self.dim];
            for j in i..self.dim {
                if bits[j] != 0 {
                    e += row[j];
                }
            }
        }
        e
    }

    /// Symmetric coupling between `i ≠ j` as seen from either variable.
    #[inline]
    pub(crate) fn coupling(&self, i: usize, j: usize) -> f64 {
        if i < j {
            self.get(i, j)
        } else {
            self.get(j, i)
        }
    }

    /// Plain-text COO export: a `# dim N` header, then one `i j value` line
    /// per nonzero upper-triangular entry, row-major.
    pub fn write_coo<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "# dim {}", self.dim)?;
        for i in 0..self.dim {
            for j in i..self.dim {
                let v = self.get(i, j);
                if v != 0.0 {
                    writeln!(w, "{i} {j} {v}")?;
                }
            }
        }
        Ok(())
    }

    pub fn read_coo<R: BufRead>(r: R) -> Result<Self, QuboError> {
        let mut dim: Option<usize> = None;
        let mut triples = Vec::new();
        for (n, line) in r.lines().enumerate() {
            let line = line.map_err(|e| QuboError::Shape(e.to_string()))?;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('#') {
                let mut it = rest.split_whitespace();
                if it.next() == Some("dim") {
                    dim = it.next().and_then(|d| d.parse().ok());
                }
                continue;
            }
            let bad = || QuboError::Shape(format!("line {}: expected `i j value`", n + 1));
            let mut it = line.split_whitespace();
            let i: usize = it.next().and_then(|s| s.parse().ok()).ok_or_else(bad)?;
            let j: usize = it.next().and_then(|s| s.parse().ok()).ok_or_else(bad)?;
            let v: f64 = it.next().and_then(|s| s.parse().ok()).ok_or_else(bad)?;
            triples.push((i, j, v));
        }
        let dim = dim
            .or_else(|| triples.iter().map(|&(i, j, _)| i.max(j) + 1).max())
            .unwrap_or(0);
        let mut q = Self::zeros(dim);
        for (i, j, v) in triples {
            if i >= dim || j >= dim {
                return Err(QuboError::Shape(format!("entry ({i}, {j}) outside dimension {dim}")));
            }
            q.add(i, j, v);
        }
        Ok(q)
    }
}

pub fn energy(q: &QuboMatrix, bits: &[u8]) -> Result<f64, QuboError> {
    q.energy(bits)
}
