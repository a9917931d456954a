//! Concrete state spaces: simplices, polytopes, balls, density matrices over
//! ℝ/ℂ/ℍ and spin factors.
//!
//! Every space fixes canonical coordinates for its states: probability
//! vectors for the simplex, ambient points for polytopes and balls, and the
//! row-major real components of the matrix for density matrices.

mod decompose;
mod faces;
pub mod polytope;

use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

pub use decompose::{decompose, enumerate_orthogonal_decompositions};
pub use faces::{mutually_singular, orthogonal, smallest_face, Face};
pub use polytope::Polytope;

use crate::cone::AffineFunctional;
use crate::error::{Error, Result};
use crate::jordan::{eigen_hermitian, HermitianMatrix};
use crate::linalg::{Matrix, Quaternion, Ring};
use crate::sampling::{
    ball_point, gaussian_entry, probability_vector, random_basis, spectral_matrix, unit_vector, TrialRng,
};

/// Membership tolerance in the max norm of canonical coordinates.
pub const MEMBERSHIP_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SpaceRepr", into = "SpaceRepr")]
pub enum StateSpace {
    Simplex { n: usize },
    Polytope(Polytope),
    Ball { d: usize },
    Density { ring: Ring, n: usize },
    Spin { d: usize },
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
enum SpaceRepr {
    Simplex { n: usize },
    Polytope { vertices: Vec<Vec<f64>> },
    Ball { d: usize },
    Density { ring: Ring, n: usize },
    Spin { d: usize },
}

impl TryFrom<SpaceRepr> for StateSpace {
    type Error = Error;

    fn try_from(r: SpaceRepr) -> Result<Self> {
        let space = match r {
            SpaceRepr::Simplex { n } => StateSpace::Simplex { n },
            SpaceRepr::Polytope { vertices } => StateSpace::Polytope(Polytope::new(vertices)?),
            SpaceRepr::Ball { d } => StateSpace::Ball { d },
            SpaceRepr::Density { ring, n } => StateSpace::Density { ring, n },
            SpaceRepr::Spin { d } => StateSpace::Spin { d },
        };
        space.validate()?;
        Ok(space)
    }
}

impl From<StateSpace> for SpaceRepr {
    fn from(s: StateSpace) -> Self {
        match s {
            StateSpace::Simplex { n } => SpaceRepr::Simplex { n },
            StateSpace::Polytope(p) => SpaceRepr::Polytope {
                vertices: p.vertices().to_vec(),
            },
            StateSpace::Ball { d } => SpaceRepr::Ball { d },
            StateSpace::Density { ring, n } => SpaceRepr::Density { ring, n },
            StateSpace::Spin { d } => SpaceRepr::Spin { d },
        }
    }
}

impl std::fmt::Display for StateSpace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            StateSpace::Simplex { n } => write!(f, "simplex({n})"),
            StateSpace::Polytope(p) => write!(f, "polytope({} vertices)", p.len()),
            StateSpace::Ball { d } => write!(f, "ball({d})"),
            StateSpace::Density { ring, n } => write!(f, "{ring} density matrices (n={n})"),
            StateSpace::Spin { d } => write!(f, "spin factor (d={d})"),
        }
    }
}

impl StateSpace {
    pub fn simplex(n: usize) -> Result<Arc<Self>> {
        Self::checked(StateSpace::Simplex { n })
    }

    pub fn polytope(vertices: Vec<Vec<f64>>) -> Result<Arc<Self>> {
        Self::checked(StateSpace::Polytope(Polytope::new(vertices)?))
    }

    /// The unit square with vertices (0,0), (1,0), (0,1), (1,1).
    pub fn unit_square() -> Arc<Self> {
        Self::polytope(vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 1.0]])
            .expect("square is a polytope")
    }

    pub fn ball(d: usize) -> Result<Arc<Self>> {
        Self::checked(StateSpace::Ball { d })
    }

    pub fn density(ring: Ring, n: usize) -> Result<Arc<Self>> {
        Self::checked(StateSpace::Density { ring, n })
    }

    pub fn spin(d: usize) -> Result<Arc<Self>> {
        Self::checked(StateSpace::Spin { d })
    }

    fn checked(space: StateSpace) -> Result<Arc<Self>> {
        space.validate()?;
        Ok(Arc::new(space))
    }

    fn validate(&self) -> Result<()> {
        let ok = match self {
            StateSpace::Simplex { n } => *n >= 1,
            StateSpace::Polytope(_) => true,
            StateSpace::Ball { d } | StateSpace::Spin { d } => *d >= 1,
            StateSpace::Density { n, .. } => *n >= 1,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidSpace(format!("{self} has no states")))
        }
    }

    /// Named spaces (`simplex3`, `square`, `disc`, `ball3`, `real3`,
    /// `complex2`, `quaternion2`, `spin3`, ...) or an inline JSON descriptor.
    pub fn parse(text: &str) -> Result<Arc<Self>> {
        let t = text.trim();
        if t.starts_with('{') {
            let space: StateSpace = serde_json::from_str(t).map_err(|e| Error::Parse(e.to_string()))?;
            return Ok(Arc::new(space));
        }
        match t {
            "square" => return Ok(Self::unit_square()),
            "disc" | "disk" => return Self::ball(2),
            "triangle" => return Self::simplex(3),
            _ => {}
        }
        let split = t.find(|c: char| c.is_ascii_digit()).unwrap_or(t.len());
        let (kind, size) = t.split_at(split);
        let size: usize = size
            .parse()
            .map_err(|_| Error::Parse(format!("unknown space `{t}`")))?;
        match kind {
            "simplex" => Self::simplex(size),
            "ball" => Self::ball(size),
            "spin" => Self::spin(size),
            "real" => Self::density(Ring::Real, size),
            "complex" => Self::density(Ring::Complex, size),
            "quaternion" => Self::density(Ring::Quaternion, size),
            _ => Err(Error::Parse(format!("unknown space `{t}`"))),
        }
    }

    /// Affine dimension `d` of the state set.
    pub fn dimension(&self) -> usize {
        match self {
            StateSpace::Simplex { n } => n - 1,
            StateSpace::Polytope(p) => p.affine_dim(),
            StateSpace::Ball { d } | StateSpace::Spin { d } => *d,
            StateSpace::Density { ring, n } => ring.hermitian_dimension(*n) - 1,
        }
    }

    /// Length of the canonical coordinate vector.
    pub fn coord_len(&self) -> usize {
        match self {
            StateSpace::Simplex { n } => *n,
            StateSpace::Polytope(p) => p.ambient_dim(),
            StateSpace::Ball { d } | StateSpace::Spin { d } => *d,
            StateSpace::Density { ring, n } => n * n * ring.components(),
        }
    }

    pub fn is_matrix_space(&self) -> bool {
        matches!(self, StateSpace::Density { .. })
    }

    pub fn barycenter(&self) -> Vec<f64> {
        match self {
            StateSpace::Simplex { n } => vec![1.0 / *n as f64; *n],
            StateSpace::Polytope(p) => p.vertex_mean(),
            StateSpace::Ball { d } | StateSpace::Spin { d } => vec![0.0; *d],
            StateSpace::Density { ring, n } => Matrix::identity(*ring, *n).scale(1.0 / *n as f64).coords(),
        }
    }

    /// Matrix of density coordinates, with any asymmetry removed.
    pub fn matrix_of(&self, coords: &[f64]) -> Result<HermitianMatrix> {
        match self {
            StateSpace::Density { ring, n } => Ok(HermitianMatrix::from_computed(Matrix::from_coords(*ring, *n, coords)?)),
            _ => Err(Error::Unsupported {
                space: self.to_string(),
                op: "matrix representation",
            }),
        }
    }

    /// Largest violation of the membership conditions, in the max norm of
    /// canonical coordinates; 0 for members.
    pub fn violation(&self, coords: &[f64]) -> Result<f64> {
        if coords.len() != self.coord_len() {
            return Err(Error::DimensionMismatch {
                expected: self.coord_len(),
                got: coords.len(),
            });
        }
        if coords.iter().any(|x| !x.is_finite()) {
            return Ok(f64::INFINITY);
        }
        Ok(match self {
            StateSpace::Simplex { .. } => {
                let neg = coords.iter().fold(0.0f64, |m, x| m.max(-x));
                neg.max((coords.iter().sum::<f64>() - 1.0).abs())
            }
            StateSpace::Polytope(p) => p.violation(coords),
            StateSpace::Ball { .. } | StateSpace::Spin { .. } => {
                (coords.iter().map(|x| x * x).sum::<f64>().sqrt() - 1.0).max(0.0)
            }
            StateSpace::Density { ring, n } => {
                let raw = Matrix::from_coords(*ring, *n, coords)?;
                let defect = raw.hermitian_defect();
                let m = HermitianMatrix::from_computed(raw);
                let eig = eigen_hermitian(&m)?;
                let min = eig.eigenvalues.last().copied().unwrap_or(0.0);
                defect.max((m.trace() - 1.0).abs()).max((-min).max(0.0))
            }
        })
    }

    pub fn contains(&self, coords: &[f64]) -> Result<bool> {
        Ok(self.violation(coords)? <= MEMBERSHIP_TOL)
    }

    /// Whether the state is an extreme point.
    pub fn is_pure(&self, coords: &[f64]) -> Result<bool> {
        let tol = MEMBERSHIP_TOL;
        Ok(match self {
            StateSpace::Simplex { .. } => coords.iter().any(|x| *x >= 1.0 - tol),
            StateSpace::Polytope(p) => p.nearest_vertex(coords).1 <= tol,
            StateSpace::Ball { .. } | StateSpace::Spin { .. } => {
                coords.iter().map(|x| x * x).sum::<f64>().sqrt() >= 1.0 - tol
            }
            StateSpace::Density { .. } => {
                let eig = eigen_hermitian(&self.matrix_of(coords)?)?;
                eig.eigenvalues[0] >= 1.0 - tol
            }
        })
    }

    /// Orthonormal basis (in canonical coordinates) of the directions of the
    /// affine hull of the state set.
    pub fn tangent_basis(&self) -> Vec<Vec<f64>> {
        match self {
            StateSpace::Simplex { n } => helmert(*n),
            StateSpace::Polytope(p) => p.direction_basis(),
            StateSpace::Ball { d } | StateSpace::Spin { d } => (0..*d)
                .map(|i| {
                    let mut e = vec![0.0; *d];
                    e[i] = 1.0;
                    e
                })
                .collect(),
            StateSpace::Density { ring, n } => {
                let mut basis = Vec::new();
                for diag in helmert(*n) {
                    basis.push(Matrix::diagonal(*ring, &diag).coords());
                }
                let h = std::f64::consts::FRAC_1_SQRT_2;
                for i in 0..*n {
                    for j in (i + 1)..*n {
                        for c in 0..ring.components() {
                            let mut comp = [0.0; 4];
                            comp[c] = h;
                            let q = Quaternion::from_components(comp);
                            let mut m = Matrix::zeros(*ring, *n);
                            m.set(i, j, q);
                            m.set(j, i, q.conj());
                            basis.push(m.coords());
                        }
                    }
                }
                basis
            }
        }
    }

    /// The range `(min, max)` of an affine functional over the state set.
    pub fn functional_range(&self, a: &AffineFunctional) -> Result<(f64, f64)> {
        if a.linear.len() != self.coord_len() {
            return Err(Error::DimensionMismatch {
                expected: self.coord_len(),
                got: a.linear.len(),
            });
        }
        let extremes = |vals: &mut dyn Iterator<Item = f64>| {
            vals.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)))
        };
        Ok(match self {
            StateSpace::Simplex { .. } => extremes(&mut a.linear.iter().map(|c| c + a.offset)),
            StateSpace::Polytope(p) => extremes(&mut p.vertices().iter().map(|v| a.value_at(v))),
            StateSpace::Ball { .. } | StateSpace::Spin { .. } => {
                let r = a.linear.iter().map(|x| x * x).sum::<f64>().sqrt();
                (a.offset - r, a.offset + r)
            }
            StateSpace::Density { .. } => {
                let m = self.matrix_of(&a.linear)?;
                let eig = eigen_hermitian(&m)?;
                (
                    eig.eigenvalues.last().copied().unwrap_or(0.0) + a.offset,
                    eig.eigenvalues[0] + a.offset,
                )
            }
        })
    }

    pub fn sample_state(&self, rng: &mut TrialRng) -> Vec<f64> {
        match self {
            StateSpace::Simplex { n } => probability_vector(rng, *n),
            StateSpace::Polytope(p) => p.combine(&probability_vector(rng, p.len())),
            StateSpace::Ball { d } | StateSpace::Spin { d } => ball_point(rng, *d),
            StateSpace::Density { ring, n } => {
                let basis = random_basis(rng, *ring, *n);
                spectral_matrix(*ring, &basis, &probability_vector(rng, *n)).coords()
            }
        }
    }

    pub fn sample_pure(&self, rng: &mut TrialRng) -> Vec<f64> {
        match self {
            StateSpace::Simplex { n } => {
                let mut e = vec![0.0; *n];
                e[rng.random_range(0..*n)] = 1.0;
                e
            }
            StateSpace::Polytope(p) => p.vertices()[rng.random_range(0..p.len())].clone(),
            StateSpace::Ball { d } | StateSpace::Spin { d } => unit_vector(rng, *d),
            StateSpace::Density { ring, n } => {
                let u = random_unit(rng, *ring, *n);
                Matrix::outer(*ring, &u, &u).hermitian_part().coords()
            }
        }
    }
}

/// A random unit vector in ring^n.
pub(crate) fn random_unit(rng: &mut TrialRng, ring: Ring, n: usize) -> Vec<Quaternion> {
    loop {
        let v: Vec<Quaternion> = (0..n).map(|_| gaussian_entry(rng, ring)).collect();
        let norm = crate::linalg::vector_norm(&v);
        if norm > 1e-8 {
            return v.into_iter().map(|q| q.scale(1.0 / norm)).collect();
        }
    }
}

/// Orthonormal basis of `{x ∈ ℝ^n : Σx = 0}`.
fn helmert(n: usize) -> Vec<Vec<f64>> {
    (1..n)
        .map(|k| {
            let norm = ((k * (k + 1)) as f64).sqrt();
            let mut v = vec![0.0; n];
            for x in v.iter_mut().take(k) {
                *x = 1.0 / norm;
            }
            v[k] = -(k as f64) / norm;
            v
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::trial_rng;

    fn all_spaces() -> Vec<Arc<StateSpace>> {
        vec![
            StateSpace::simplex(4).unwrap(),
            StateSpace::unit_square(),
            StateSpace::ball(3).unwrap(),
            StateSpace::density(Ring::Real, 3).unwrap(),
            StateSpace::density(Ring::Complex, 2).unwrap(),
            StateSpace::density(Ring::Quaternion, 2).unwrap(),
            StateSpace::spin(3).unwrap(),
        ]
    }

    #[test]
    fn descriptors_round_trip_through_json() {
        for text in [
            r#"{"kind":"simplex","n":3}"#,
            r#"{"kind":"polytope","vertices":[[0.0,0.0],[1.0,0.0],[0.0,1.0],[1.0,1.0]]}"#,
            r#"{"kind":"ball","d":2}"#,
            r#"{"kind":"density","ring":"complex","n":2}"#,
            r#"{"kind":"spin","d":3}"#,
        ] {
            let space = StateSpace::parse(text).unwrap();
            assert_eq!(serde_json::to_string(&*space).unwrap(), text);
        }
    }

    #[test]
    fn aliases() {
        assert_eq!(*StateSpace::parse("square").unwrap(), *StateSpace::unit_square());
        assert_eq!(*StateSpace::parse("quaternion2").unwrap(), StateSpace::Density { ring: Ring::Quaternion, n: 2 });
        assert_eq!(StateSpace::parse("disc").unwrap().dimension(), 2);
        assert!(StateSpace::parse("cube").is_err());
        assert!(StateSpace::parse(r#"{"kind":"simplex","n":0}"#).is_err());
        assert!(StateSpace::parse(r#"{"kind":"polytope","vertices":[[0.0],[1.0],[0.5]]}"#).is_err());
    }

    #[test]
    fn dimensions() {
        assert_eq!(StateSpace::simplex(3).unwrap().dimension(), 2);
        assert_eq!(StateSpace::unit_square().dimension(), 2);
        assert_eq!(StateSpace::density(Ring::Real, 3).unwrap().dimension(), 5);
        assert_eq!(StateSpace::density(Ring::Complex, 2).unwrap().dimension(), 3);
        assert_eq!(StateSpace::density(Ring::Quaternion, 2).unwrap().dimension(), 5);
    }

    #[test]
    fn samples_are_members_and_tangent_bases_are_orthonormal() {
        for space in all_spaces() {
            let mut rng = trial_rng(4, 0);
            for _ in 0..10 {
                assert!(space.contains(&space.sample_state(&mut rng)).unwrap(), "{space}");
                let pure = space.sample_pure(&mut rng);
                assert!(space.contains(&pure).unwrap() && space.is_pure(&pure).unwrap(), "{space}");
            }
            assert!(space.contains(&space.barycenter()).unwrap());
            let basis = space.tangent_basis();
            assert_eq!(basis.len(), space.dimension(), "{space}");
            for (i, u) in basis.iter().enumerate() {
                for (j, v) in basis.iter().enumerate() {
                    let ip: f64 = u.iter().zip(v).map(|(a, b)| a * b).sum();
                    assert!((ip - if i == j { 1.0 } else { 0.0 }).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn membership_rejects_exterior_points() {
        assert!(!StateSpace::simplex(3).unwrap().contains(&[0.6, 0.6, -0.2]).unwrap());
        assert!(!StateSpace::unit_square().contains(&[1.1, 0.5]).unwrap());
        assert!(!StateSpace::ball(2).unwrap().contains(&[0.8, 0.8]).unwrap());
        let qubit = StateSpace::density(Ring::Complex, 2).unwrap();
        // diag(1.2, -0.2) has trace one but a negative eigenvalue
        assert!(!qubit.contains(&[1.2, 0.0, 0.0, 0.0, 0.0, 0.0, -0.2, 0.0]).unwrap());
        assert!(qubit.violation(&[1.0]).is_err());
    }

    #[test]
    fn functional_ranges() {
        let disc = StateSpace::ball(2).unwrap();
        let a = AffineFunctional::new(vec![0.3, 0.4], 0.5);
        let (lo, hi) = disc.functional_range(&a).unwrap();
        assert!((lo - 0.0).abs() < 1e-15 && (hi - 1.0).abs() < 1e-15);
        let qubit = StateSpace::density(Ring::Complex, 2).unwrap();
        let p = HermitianMatrix::diagonal(Ring::Complex, &[0.0, 1.0]);
        let (lo, hi) = qubit.functional_range(&AffineFunctional::trace_pairing(&p, 0.0)).unwrap();
        assert!(lo.abs() < 1e-15 && (hi - 1.0).abs() < 1e-15);
    }
}
