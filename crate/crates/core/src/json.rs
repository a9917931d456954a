//! JSON encodings for matrix entries: a bare number for ℝ, `[re, im]` for ℂ
//! and `[a, b, c, d]` for ℍ.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{Matrix, Quaternion, Ring};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EntryRepr {
    Real(f64),
    Complex([f64; 2]),
    Quaternion([f64; 4]),
}

impl EntryRepr {
    pub fn encode(q: Quaternion, ring: Ring) -> Self {
        match ring {
            Ring::Real => EntryRepr::Real(q.re),
            Ring::Complex => EntryRepr::Complex([q.re, q.i]),
            Ring::Quaternion => EntryRepr::Quaternion(q.components()),
        }
    }

    pub fn decode(self) -> Quaternion {
        match self {
            EntryRepr::Real(x) => Quaternion::real(x),
            EntryRepr::Complex([a, b]) => Quaternion::complex(a, b),
            EntryRepr::Quaternion(c) => Quaternion::from_components(c),
        }
    }

    fn ring(self) -> Ring {
        match self {
            EntryRepr::Real(_) => Ring::Real,
            EntryRepr::Complex(_) => Ring::Complex,
            EntryRepr::Quaternion(_) => Ring::Quaternion,
        }
    }
}

pub fn matrix_rows(m: &Matrix) -> Vec<Vec<EntryRepr>> {
    (0..m.n())
        .map(|i| (0..m.n()).map(|j| EntryRepr::encode(m.get(i, j), m.ring())).collect())
        .collect()
}

/// Decode nested rows; the ring is the widest entry encoding unless given.
pub fn matrix_from_rows(rows: &[Vec<EntryRepr>], ring: Option<Ring>) -> Result<Matrix> {
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return Err(Error::Parse("matrix rows must form a square array".into()));
    }
    let inferred = rows
        .iter()
        .flatten()
        .map(|e| e.ring())
        .max()
        .unwrap_or(Ring::Real);
    let ring = ring.unwrap_or(inferred);
    let data = rows.iter().flatten().map(|e| e.decode()).collect();
    Matrix::from_entries(ring, n, data)
}

/// Flat row-major entry list, as used in state coordinates.
pub fn matrix_entries(m: &Matrix) -> Vec<EntryRepr> {
    m.entries().iter().map(|q| EntryRepr::encode(*q, m.ring())).collect()
}
