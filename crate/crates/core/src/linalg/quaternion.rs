//! Real quaternions `re + i·1 + j·1 + k·1`, the largest associative real division algebra.

use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Quaternion {
    pub re: f64,
    pub i: f64,
    pub j: f64,
    pub k: f64,
}

impl Quaternion {
    pub const ZERO: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 0.0);
    pub const ONE: Quaternion = Quaternion::new(1.0, 0.0, 0.0, 0.0);

    pub const fn new(re: f64, i: f64, j: f64, k: f64) -> Self {
        Quaternion { re, i, j, k }
    }

    pub const fn real(re: f64) -> Self {
        Quaternion::new(re, 0.0, 0.0, 0.0)
    }

    pub const fn complex(re: f64, im: f64) -> Self {
        Quaternion::new(re, im, 0.0, 0.0)
    }

    pub fn conj(self) -> Self {
        Quaternion::new(self.re, -self.i, -self.j, -self.k)
    }

    pub fn norm_sqr(self) -> f64 {
        self.re * self.re + self.i * self.i + self.j * self.j + self.k * self.k
    }

    pub fn norm(self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn scale(self, s: f64) -> Self {
        Quaternion::new(self.re * s, self.i * s, self.j * s, self.k * s)
    }

    pub fn components(self) -> [f64; 4] {
        [self.re, self.i, self.j, self.k]
    }

    pub fn from_components(c: [f64; 4]) -> Self {
        Quaternion::new(c[0], c[1], c[2], c[3])
    }

    /// Largest absolute component; used for max-norm tolerances.
    pub fn max_abs(self) -> f64 {
        self.re.abs().max(self.i.abs()).max(self.j.abs()).max(self.k.abs())
    }

    /// The 2×2 complex block `[[a+bi, c+di], [−c+di, a−bi]]`, row-major.
    pub fn complex_block(self) -> [Complex64; 4] {
        [
            Complex64::new(self.re, self.i),
            Complex64::new(self.j, self.k),
            Complex64::new(-self.j, self.k),
            Complex64::new(self.re, -self.i),
        ]
    }
}

impl Add for Quaternion {
    type Output = Quaternion;
    fn add(self, o: Quaternion) -> Quaternion {
        Quaternion::new(self.re + o.re, self.i + o.i, self.j + o.j, self.k + o.k)
    }
}

impl AddAssign for Quaternion {
    fn add_assign(&mut self, o: Quaternion) {
        *self = *self + o;
    }
}

impl Sub for Quaternion {
    type Output = Quaternion;
    fn sub(self, o: Quaternion) -> Quaternion {
        Quaternion::new(self.re - o.re, self.i - o.i, self.j - o.j, self.k - o.k)
    }
}

impl Neg for Quaternion {
    type Output = Quaternion;
    fn neg(self) -> Quaternion {
        Quaternion::new(-self.re, -self.i, -self.j, -self.k)
    }
}

impl Mul for Quaternion {
    type Output = Quaternion;
    fn mul(self, o: Quaternion) -> Quaternion {
        let (a1, b1, c1, d1) = (self.re, self.i, self.j, self.k);
        let (a2, b2, c2, d2) = (o.re, o.i, o.j, o.k);
        Quaternion::new(
            a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
            a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
            a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
            a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
        )
    }
}

impl Mul<f64> for Quaternion {
    type Output = Quaternion;
    fn mul(self, s: f64) -> Quaternion {
        self.scale(s)
    }
}
