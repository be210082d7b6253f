//! Bergman kernel densities: closed forms, Reinhardt monomial series and a
//! Gram-matrix method, plus the transformation-law and monotonicity checks.
//!
//! Densities are always coefficients of the kernel form with respect to
//! Lebesgue measure in the ambient chart, with the unnormalised `L^2` inner
//! product `(f, g) = ∫ f conj(g) dV`.

mod checks;
mod exact;
mod gram;
mod series;

use serde::{Deserialize, Serialize};

pub use checks::{certify_containment, monotonicity_check, transformation_check, NamedMap, CONTAINMENT_DIRECTIONS};
pub use exact::exact_kernel;
pub use gram::{gram_kernel, GramFactor, GramQuadrature};
pub use series::{monomials, reinhardt_kernel, reinhardt_kernel_with, DEFAULT_SERIES_DEGREE};

use crate::geometry::{CPoint, DomainSpec};
use crate::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KernelMethod {
    Exact,
    ReinhardtSeries,
    Gram,
}

/// Diagonal Bergman kernel density. `err_est` is zero exactly for closed forms.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelValue {
    pub density: f64,
    pub method: KernelMethod,
    pub degree: usize,
    pub err_est: f64,
}

impl KernelValue {
    pub(crate) fn exact(density: f64) -> Self {
        Self { density, method: KernelMethod::Exact, degree: 0, err_est: 0.0 }
    }
}

/// How to evaluate a kernel when the caller does not care which method.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum KernelRequest {
    Exact,
    Reinhardt { degree: usize },
    Gram { degree: usize, quadrature: GramQuadrature },
    /// closed form if one exists, else the Reinhardt series
    Auto,
}

pub fn kernel(spec: &DomainSpec, z: &CPoint, request: &KernelRequest) -> Result<KernelValue> {
    match request {
        KernelRequest::Exact => exact_kernel(spec, z),
        KernelRequest::Reinhardt { degree } => reinhardt_kernel(spec, z, *degree),
        KernelRequest::Gram { degree, quadrature } => gram_kernel(spec, z, *degree, quadrature),
        KernelRequest::Auto => match exact_kernel(spec, z) {
            Err(crate::Error::Unsupported(_)) => reinhardt_kernel(spec, z, DEFAULT_SERIES_DEGREE),
            other => other,
        },
    }
}
