//! Real-analytic scalar functions with first and second derivative oracles.

use std::fmt;

use crate::error::{Error, Result};

/// Eigenvalues this close below a closed endpoint are rounded onto it.
const ENDPOINT_SLACK: f64 = 1e-12;

#[derive(Clone, Copy)]
pub struct ScalarFunction {
    name: &'static str,
    f: fn(f64) -> f64,
    d1: fn(f64) -> f64,
    d2: fn(f64) -> f64,
    lower: f64,
    upper: f64,
    /// `f` (not its derivatives) extends continuously to `lower`.
    lower_closed: bool,
}

impl fmt::Debug for ScalarFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ScalarFunction")
            .field("name", &self.name)
            .field("domain", &(self.lower, self.upper))
            .finish()
    }
}

fn neg_entropy_value(z: f64) -> f64 {
    if z == 0.0 {
        0.0
    } else {
        -z * z.ln()
    }
}

impl ScalarFunction {
    /// `f` on the open interval `(lower, upper)`.
    pub fn new(
        name: &'static str,
        f: fn(f64) -> f64,
        d1: fn(f64) -> f64,
        d2: fn(f64) -> f64,
        lower: f64,
        upper: f64,
    ) -> Self {
        ScalarFunction {
            name,
            f,
            d1,
            d2,
            lower,
            upper,
            lower_closed: false,
        }
    }

    pub fn identity() -> Self {
        Self::new("identity", |z| z, |_| 1.0, |_| 0.0, f64::NEG_INFINITY, f64::INFINITY)
    }

    pub fn square() -> Self {
        Self::new("square", |z| z * z, |z| 2.0 * z, |_| 2.0, f64::NEG_INFINITY, f64::INFINITY)
    }

    pub fn cube() -> Self {
        Self::new("cube", |z| z * z * z, |z| 3.0 * z * z, |z| 6.0 * z, f64::NEG_INFINITY, f64::INFINITY)
    }

    pub fn exp() -> Self {
        Self::new("exp", f64::exp, f64::exp, f64::exp, f64::NEG_INFINITY, f64::INFINITY)
    }

    pub fn ln() -> Self {
        Self::new("ln", f64::ln, |z| 1.0 / z, |z| -1.0 / (z * z), 0.0, f64::INFINITY)
    }

    /// `−z ln z`; the value extends to `z = 0`, the derivatives do not.
    pub fn neg_entropy() -> Self {
        ScalarFunction {
            lower_closed: true,
            ..Self::new(
                "-z ln z",
                neg_entropy_value,
                |z| -z.ln() - 1.0,
                |z| -1.0 / z,
                0.0,
                f64::INFINITY,
            )
        }
    }

    pub fn name(&self) -> &'static str {
        self.name
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.lower, self.upper)
    }

    fn domain_error(&self, value: f64) -> Error {
        Error::Domain {
            function: self.name.to_string(),
            value,
        }
    }

    fn interior(&self, z: f64) -> Result<f64> {
        if z > self.lower && z < self.upper {
            Ok(z)
        } else {
            Err(self.domain_error(z))
        }
    }

    pub fn value(&self, z: f64) -> Result<f64> {
        if self.lower_closed && z <= self.lower && z >= self.lower - ENDPOINT_SLACK {
            return Ok((self.f)(self.lower));
        }
        self.interior(z).map(self.f)
    }

    pub fn d1(&self, z: f64) -> Result<f64> {
        self.interior(z).map(self.d1)
    }

    pub fn d2(&self, z: f64) -> Result<f64> {
        self.interior(z).map(self.d2)
    }

    /// First divided difference of `f`; the derivative when `a == b`.
    pub fn divided_difference(&self, a: f64, b: f64, same: bool) -> Result<f64> {
        if same {
            self.d1(a)
        } else {
            Ok((self.value(a)? - self.value(b)?) / (a - b))
        }
    }

    /// First divided difference of `f′`; `f″` when `a == b`.
    pub fn derivative_divided_difference(&self, a: f64, b: f64, same: bool) -> Result<f64> {
        if same {
            self.d2(a)
        } else {
            Ok((self.d1(a)? - self.d1(b)?) / (a - b))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn builtins() -> Vec<(ScalarFunction, Vec<f64>)> {
        let pos = vec![0.05, 0.3, 1.0, 2.5];
        let all = vec![-2.0, -0.4, 0.0, 0.7, 1.9];
        vec![
            (ScalarFunction::identity(), all.clone()),
            (ScalarFunction::square(), all.clone()),
            (ScalarFunction::cube(), all.clone()),
            (ScalarFunction::exp(), all),
            (ScalarFunction::ln(), pos.clone()),
            (ScalarFunction::neg_entropy(), pos),
        ]
    }

    #[test]
    fn derivative_oracles_match_finite_differences() {
        let h = 1e-6;
        for (f, points) in builtins() {
            for z in points {
                let fd1 = (f.value(z + h).unwrap() - f.value(z - h).unwrap()) / (2.0 * h);
                let d1 = f.d1(z).unwrap();
                assert!((fd1 - d1).abs() <= 1e-6 * d1.abs().max(1.0), "{} at {z}", f.name());
                let fd2 = (f.d1(z + h).unwrap() - f.d1(z - h).unwrap()) / (2.0 * h);
                let d2 = f.d2(z).unwrap();
                assert!((fd2 - d2).abs() <= 1e-6 * d2.abs().max(1.0), "{} at {z}", f.name());
            }
        }
    }

    #[test]
    fn entropy_domain() {
        let f = ScalarFunction::neg_entropy();
        assert_eq!(f.value(0.0).unwrap(), 0.0);
        assert_eq!(f.value(-1e-14).unwrap(), 0.0);
        assert!(matches!(f.value(-0.1), Err(Error::Domain { .. })));
        assert!(f.d1(0.0).is_err());
        assert!((f.value(0.5).unwrap() - 0.5 * 2f64.ln()).abs() < 1e-15);
    }
}
