use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Edge probabilities of the planted bi-section model at size `n`
/// (`2n` vertices): `p` within classes, `q` between classes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    n: usize,
    p: f64,
    q: f64,
}

impl ModelParams {
    pub fn new(n: usize, p: f64, q: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Parameter("n must be positive".into()));
        }
        for (name, v) in [("p", p), ("q", q)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::Parameter(format!("{name} = {v} is not in [0, 1]")));
            }
        }
        Ok(Self { n, p, q })
    }

    /// Chernoff–Hellinger scaling: `n p = a log n`, `n q = b log n`.
    pub fn from_log_scaling(n: usize, a: f64, b: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::Parameter(
                "log-scaled parametrization needs n >= 2".into(),
            ));
        }
        let scale = (n as f64).ln() / n as f64;
        Self::new(n, a * scale, b * scale)
    }

    /// Kesten–Stigum scaling: `n p = c`, `n q = d`.
    pub fn from_linear_scaling(n: usize, c: f64, d: f64) -> Result<Self> {
        Self::new(n, c / n as f64, d / n as f64)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    /// `n p / log n`; undefined for `n < 2`.
    pub fn a(&self) -> Option<f64> {
        (self.n >= 2).then(|| self.n as f64 * self.p / (self.n as f64).ln())
    }

    pub fn b(&self) -> Option<f64> {
        (self.n >= 2).then(|| self.n as f64 * self.q / (self.n as f64).ln())
    }

    pub fn c(&self) -> f64 {
        self.n as f64 * self.p
    }

    pub fn d(&self) -> f64 {
        self.n as f64 * self.q
    }

    pub fn is_interior(&self) -> bool {
        self.p > 0.0 && self.p < 1.0 && self.q > 0.0 && self.q < 1.0
    }

    /// Number of vertex pairs inside classes, `n(n-1)`.
    pub fn within_pairs(&self) -> u64 {
        (self.n * (self.n - 1)) as u64
    }

    /// Number of vertex pairs across classes, `n^2`.
    pub fn between_pairs(&self) -> u64 {
        (self.n * self.n) as u64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(ModelParams::new(0, 0.5, 0.5).is_err());
        assert!(ModelParams::new(3, 1.1, 0.5).is_err());
        assert!(ModelParams::new(3, 0.5, -0.1).is_err());
        assert!(ModelParams::new(3, f64::NAN, 0.5).is_err());
        assert!(ModelParams::new(3, 1.0, 0.0).is_ok());
    }

    #[test]
    fn sparse_accessors() {
        let m = ModelParams::from_linear_scaling(100, 10.0, 2.0).unwrap();
        assert!((m.c() - 10.0).abs() < 1e-12);
        assert!((m.d() - 2.0).abs() < 1e-12);
        let m = ModelParams::from_log_scaling(50, 3.0, 1.0).unwrap();
        assert!((m.a().unwrap() - 3.0).abs() < 1e-12);
        assert!((m.b().unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(ModelParams::new(1, 0.5, 0.5).unwrap().a(), None);
        assert!(ModelParams::from_log_scaling(1, 1.0, 1.0).is_err());
        assert!(ModelParams::from_linear_scaling(4, 10.0, 1.0).is_err());
    }
}
