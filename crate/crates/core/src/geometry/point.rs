use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// A point of `C^N`. Serialized as a list of `[re, im]` pairs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Complex64>", into = "Vec<Complex64>")]
pub struct CPoint {
    coords: Vec<Complex64>,
}

impl CPoint {
    pub fn new(coords: Vec<Complex64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidParameter("point must have at least one coordinate".into()));
        }
        if coords.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::InvalidParameter("point coordinates must be finite".into()));
        }
        Ok(Self { coords })
    }

    pub fn origin(dim: usize) -> Self {
        assert!(dim > 0);
        Self { coords: vec![Complex64::new(0.0, 0.0); dim] }
    }

    /// Point with real coordinates.
    pub fn real(xs: &[f64]) -> Result<Self> {
        Self::new(xs.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn scalar(z: Complex64) -> Result<Self> {
        Self::new(vec![z])
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Complex64] {
        &self.coords
    }

    pub fn moduli(&self) -> Vec<f64> {
        self.coords.iter().map(|c| c.norm()).collect()
    }

    pub fn norm(&self) -> f64 {
        self.coords.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn is_origin(&self) -> bool {
        self.coords.iter().all(|c| c.re == 0.0 && c.im == 0.0)
    }

    pub fn scale(&self, lambda: Complex64) -> Self {
        Self { coords: self.coords.iter().map(|c| c * lambda).collect() }
    }

    /// `self + t * v`.
    pub fn offset(&self, t: Complex64, v: &CPoint) -> Result<Self> {
        self.expect_dim(v.dim())?;
        Self::new(self.coords.iter().zip(&v.coords).map(|(a, b)| a + t * b).collect())
    }

    pub fn split_at(&self, k: usize) -> (CPoint, CPoint) {
        let (a, b) = self.coords.split_at(k);
        (Self { coords: a.to_vec() }, Self { coords: b.to_vec() })
    }

    pub fn expect_dim(&self, dim: usize) -> Result<()> {
        if self.dim() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: self.dim() });
        }
        Ok(())
    }
}

impl TryFrom<Vec<Complex64>> for CPoint {
    type Error = Error;

    fn try_from(coords: Vec<Complex64>) -> Result<Self> {
        Self::new(coords)
    }
}

impl From<CPoint> for Vec<Complex64> {
    fn from(p: CPoint) -> Self {
        p.coords
    }
}

impl std::fmt::Display for CPoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            if c.im == 0.0 {
                write!(f, "{}", c.re)?;
            } else {
                write!(f, "{}{:+}i", c.re, c.im)?;
            }
        }
        write!(f, ")")
    }
}
