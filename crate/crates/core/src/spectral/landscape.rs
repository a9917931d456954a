//! Entropy on a regular grid over a two-dimensional state space.

use std::fmt::Write as _;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use super::entropy;
use crate::cone::{ConeElement, State};
use crate::error::{Error, Result};
use crate::geometry::StateSpace;
use crate::linalg::{Matrix, Ring};

/// A grid point must exceed each present neighbor by this much to count as
/// a strict local maximum.
pub const STRICT_MAX_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Serialize)]
pub struct GridPoint {
    pub x: f64,
    pub y: f64,
    /// `None` outside the state space.
    pub entropy: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LocalMaximum {
    pub coords: [f64; 2],
    pub entropy: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Landscape {
    pub resolution: usize,
    /// `[xmin, xmax, ymin, ymax]`.
    pub bbox: [f64; 4],
    /// Row-major with `x` varying fastest.
    pub points: Vec<GridPoint>,
    pub maxima: Vec<LocalMaximum>,
}

impl Landscape {
    /// `x,y,entropy` rows for the points inside the space.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,y,entropy\n");
        for p in &self.points {
            if let Some(h) = p.entropy {
                // adding 0.0 turns -0.0 into 0.0
                writeln!(out, "{:.16e},{:.16e},{:.16e}", p.x + 0.0, p.y + 0.0, h + 0.0).expect("string write");
            }
        }
        out
    }

    pub fn maxima_json(&self) -> String {
        serde_json::to_string_pretty(&self.maxima).expect("maxima serialize")
    }
}

/// A planar chart `(x, y) ↦ canonical coordinates` and its bounding box.
enum Chart {
    Identity,
    Affine { origin: Vec<f64>, basis: [Vec<f64>; 2] },
    /// `½[[1+x, y], [y, 1−x]]`.
    Bloch,
    /// Triangle with vertices (0,0), (1,½), (½,1).
    Triangle,
}

impl Chart {
    fn coords(&self, x: f64, y: f64) -> Vec<f64> {
        match self {
            Chart::Identity => vec![x, y],
            Chart::Affine { origin, basis } => origin
                .iter()
                .zip(basis[0].iter().zip(&basis[1]))
                .map(|(o, (a, b))| o + x * a + y * b)
                .collect(),
            Chart::Bloch => Matrix::from_real_rows(&[&[(1.0 + x) / 2.0, y / 2.0], &[y / 2.0, (1.0 - x) / 2.0]]).coords(),
            Chart::Triangle => {
                let p2 = (4.0 * x - 2.0 * y) / 3.0;
                let p3 = (4.0 * y - 2.0 * x) / 3.0;
                vec![1.0 - p2 - p3, p2, p3]
            }
        }
    }
}

fn chart_for(space: &StateSpace) -> Result<(Chart, [f64; 4])> {
    let square = [-1.0, 1.0, -1.0, 1.0];
    match space {
        StateSpace::Ball { d: 2 } | StateSpace::Spin { d: 2 } => Ok((Chart::Identity, square)),
        StateSpace::Density { ring: Ring::Real, n: 2 } => Ok((Chart::Bloch, square)),
        StateSpace::Simplex { n: 3 } => Ok((Chart::Triangle, [0.0, 1.0, 0.0, 1.0])),
        StateSpace::Polytope(p) if p.affine_dim() == 2 => {
            let chart = if p.ambient_dim() == 2 {
                Chart::Identity
            } else {
                let basis = p.direction_basis();
                Chart::Affine {
                    origin: p.vertices()[0].clone(),
                    basis: [basis[0].clone(), basis[1].clone()],
                }
            };
            let planar: Vec<[f64; 2]> = p
                .vertices()
                .iter()
                .map(|v| match &chart {
                    Chart::Affine { origin, basis } => {
                        let d: Vec<f64> = v.iter().zip(origin).map(|(a, o)| a - o).collect();
                        let dot = |b: &Vec<f64>| d.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
                        [dot(&basis[0]), dot(&basis[1])]
                    }
                    _ => [v[0], v[1]],
                })
                .collect();
            let mut bbox = [f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY];
            for [x, y] in planar {
                bbox = [bbox[0].min(x), bbox[1].max(x), bbox[2].min(y), bbox[3].max(y)];
            }
            Ok((chart, bbox))
        }
        other => Err(Error::NotTwoDimensional(other.dimension())),
    }
}

/// Entropy at the points of a `resolution × resolution` grid spanning the
/// bounding box of a two-dimensional state space, with the strict local
/// maxima over 8-neighborhoods.
pub fn entropy_landscape(space: &Arc<StateSpace>, resolution: usize) -> Result<Landscape> {
    let (chart, bbox) = chart_for(space)?;
    if resolution < 2 {
        return Err(Error::Parse(format!("grid resolution must be at least 2, got {resolution}")));
    }
    let step = |lo: f64, hi: f64, i: usize| lo + (hi - lo) * i as f64 / (resolution - 1) as f64;
    let points: Vec<GridPoint> = (0..resolution * resolution)
        .into_par_iter()
        .map(|k| {
            let (i, j) = (k % resolution, k / resolution);
            let (x, y) = (step(bbox[0], bbox[1], i), step(bbox[2], bbox[3], j));
            let coords = chart.coords(x, y);
            let entropy = match State::new(space.clone(), coords) {
                Ok(s) => Some(entropy(&ConeElement::from(s))?),
                Err(Error::NotInSpace { .. }) => None,
                Err(e) => return Err(e),
            };
            Ok(GridPoint { x, y, entropy })
        })
        .collect::<Result<_>>()?;
    let at = |i: isize, j: isize| -> Option<f64> {
        if i < 0 || j < 0 || i >= resolution as isize || j >= resolution as isize {
            None
        } else {
            points[j as usize * resolution + i as usize].entropy
        }
    };
    let mut maxima = Vec::new();
    for (k, p) in points.iter().enumerate() {
        let Some(h) = p.entropy else { continue };
        let (i, j) = ((k % resolution) as isize, (k / resolution) as isize);
        let strict = (-1..=1)
            .flat_map(|di| (-1..=1).map(move |dj| (di, dj)))
            .filter(|&d| d != (0, 0))
            .all(|(di, dj)| at(i + di, j + dj).is_none_or(|n| h > n + STRICT_MAX_TOL));
        if strict {
            maxima.push(LocalMaximum { coords: [p.x, p.y], entropy: h });
        }
    }
    Ok(Landscape {
        resolution,
        bbox,
        points,
        maxima,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn disc_has_its_maximum_at_the_center() {
        let l = entropy_landscape(&StateSpace::ball(2).unwrap(), 21).unwrap();
        assert_eq!(l.maxima.len(), 1);
        assert_eq!(l.maxima[0].coords, [0.0, 0.0]);
        assert!((l.maxima[0].entropy - 2f64.ln()).abs() < 1e-12);
        assert!(l.points.iter().any(|p| p.entropy.is_none()));
    }

    #[test]
    fn triangle_peaks_at_the_barycenter() {
        // the barycenter (½, ½) of the chart triangle is the uniform distribution
        let l = entropy_landscape(&StateSpace::simplex(3).unwrap(), 31).unwrap();
        assert_eq!(l.maxima.len(), 1);
        let m = &l.maxima[0];
        assert!((m.coords[0] - 0.5).abs() < 1e-12 && (m.coords[1] - 0.5).abs() < 1e-12);
        assert!((m.entropy - 3f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn real_qubit_matches_the_disc() {
        let l = entropy_landscape(&StateSpace::density(Ring::Real, 2).unwrap(), 11).unwrap();
        assert_eq!(l.maxima.len(), 1);
        assert!((l.maxima[0].entropy - 2f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn square_csv_format() {
        let l = entropy_landscape(&StateSpace::unit_square(), 5).unwrap();
        let csv = l.to_csv();
        assert!(csv.starts_with("x,y,entropy\n"));
        assert_eq!(csv.lines().count(), 26);
        assert!(csv.contains("5.0000000000000000e-1,2.5000000000000000e-1,"));
    }

    #[test]
    fn rejects_other_dimensions() {
        assert!(matches!(
            entropy_landscape(&StateSpace::ball(3).unwrap(), 5),
            Err(Error::NotTwoDimensional(3))
        ));
        assert!(entropy_landscape(&StateSpace::density(Ring::Complex, 2).unwrap(), 5).is_err());
    }
}
