use std::f64::consts::PI;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::domain::DomainSpec;
use super::gauge::GaugeExpr;
use std::f64::consts::FRAC_PI_2;

use crate::quadrature::{adaptive_vec, VecIntegral};
use crate::sampling::map_chunks;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VolumeMethod {
    Exact,
    SphereQuadrature,
    MonteCarlo,
}

/// Euclidean `2N`-volume with its uncertainty. `std_error` is zero exactly
/// when the method is `Exact`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VolumeEstimate {
    pub value: f64,
    pub std_error: f64,
    pub n_samples: usize,
    pub method: VolumeMethod,
    pub seed: u64,
}

impl VolumeEstimate {
    pub fn exact(value: f64) -> Self {
        Self { value, std_error: 0.0, n_samples: 0, method: VolumeMethod::Exact, seed: 0 }
    }

    /// Multiplies value and error by a positive constant.
    pub fn scaled(&self, factor: f64) -> Self {
        Self { value: self.value * factor, std_error: self.std_error * factor, ..self.clone() }
    }
}

/// `n` is the sample count for Monte Carlo and the number of panels per
/// angle for sphere quadrature; it is ignored for `Exact`.
pub fn volume(spec: &DomainSpec, method: VolumeMethod, n: usize, seed: u64) -> Result<VolumeEstimate> {
    if !spec.is_bounded() {
        return Err(Error::Unbounded);
    }
    match method {
        VolumeMethod::Exact => spec
            .exact_volume()
            .map(VolumeEstimate::exact)
            .ok_or_else(|| Error::Unsupported(format!("no closed-form volume for {}", spec.label()))),
        VolumeMethod::SphereQuadrature => {
            if n == 0 {
                return Err(Error::InvalidParameter("panel count must be positive".into()));
            }
            let g = spec.require_gauge()?;
            let (value, err) = reinhardt_moments(&g, spec.dim(), &[vec![0; spec.dim()]], n)?[0];
            Ok(VolumeEstimate { value, std_error: err, n_samples: n, method, seed: 0 })
        }
        VolumeMethod::MonteCarlo => monte_carlo_volume(spec, n, seed),
    }
}

/// Closed form when available, otherwise sphere quadrature with the default
/// panel count.
/// Initial panels per angle for sphere quadrature.
pub const DEFAULT_PANELS: usize = 8;

pub fn best_volume(spec: &DomainSpec) -> Result<VolumeEstimate> {
    match spec.exact_volume() {
        Some(v) => Ok(VolumeEstimate::exact(v)),
        None => volume(spec, VolumeMethod::SphereQuadrature, DEFAULT_PANELS, 0),
    }
}

fn monte_carlo_volume(spec: &DomainSpec, n: usize, seed: u64) -> Result<VolumeEstimate> {
    if n == 0 {
        return Err(Error::InvalidParameter("sample count must be positive".into()));
    }
    let g = spec.require_gauge()?;
    let half = spec.bounding_radii()?;
    let box_volume: f64 = half.iter().map(|b| 4.0 * b * b).product();
    let counts = map_chunks(n, seed, |rng, len| {
        let mut moduli = vec![0.0; half.len()];
        let mut inside = 0usize;
        for _ in 0..len {
            for (m, b) in moduli.iter_mut().zip(&half) {
                let x = rng.random_range(-*b..*b);
                let y = rng.random_range(-*b..*b);
                *m = x.hypot(y);
            }
            if g.eval_moduli(&moduli) < 1.0 {
                inside += 1;
            }
        }
        inside
    });
    let inside: usize = counts.iter().sum();
    let p = inside as f64 / n as f64;
    Ok(VolumeEstimate {
        value: box_volume * p,
        std_error: box_volume * (p * (1.0 - p) / n as f64).sqrt(),
        n_samples: n,
        method: VolumeMethod::MonteCarlo,
        seed,
    })
}

/// Moments `∫_Ω prod_j |z_j|^(2 alpha_j) dV` of the Reinhardt domain
/// `{m < 1}` with error estimates.
///
/// The torus angles integrate out exactly; what remains is
/// `(2pi)^N ∫ theta^(2 alpha + 1) / ((2|alpha| + 2N) m(theta)^(2|alpha| + 2N)) dsigma`
/// over the positive orthant of the unit sphere of `R^N`, computed with nested
/// adaptive Gauss-Kronrod in hyperspherical angles starting from `panels`
/// panels per angle.
pub fn reinhardt_moments(
    gauge: &GaugeExpr,
    dim: usize,
    alphas: &[Vec<u32>],
    panels: usize,
) -> Result<Vec<(f64, f64)>> {
    let mut failure = None;
    let integral = if dim == 1 {
        moment_integrand(gauge, dim, alphas, &[1.0], 1.0, &mut failure)
    } else {
        orthant_integral(gauge, dim, alphas, panels.max(1), Vec::new(), 1.0, &mut failure)
    };
    if let Some(msg) = failure {
        return Err(Error::Quadrature(msg));
    }
    let torus = (2.0 * PI).powi(dim as i32);
    let out: Vec<(f64, f64)> = integral
        .value
        .iter()
        .zip(&integral.error)
        .map(|(v, e)| (v * torus, (e * torus).max(v.abs() * torus * f64::EPSILON * 16.0)))
        .collect();
    if out.iter().any(|(v, e)| !v.is_finite() || !e.is_finite()) {
        return Err(Error::Quadrature("non-finite moment".into()));
    }
    Ok(out)
}

const MOMENT_REL_TOL: f64 = 1e-12;
const MOMENT_MAX_PANELS: usize = 4000;

/// Integrates over the remaining hyperspherical angles. `prefix` holds the
/// already fixed coordinates and `sines` the product of their sines.
fn orthant_integral(
    gauge: &GaugeExpr,
    dim: usize,
    alphas: &[Vec<u32>],
    panels: usize,
    prefix: Vec<f64>,
    sines: f64,
    failure: &mut Option<String>,
) -> VecIntegral {
    let axis = prefix.len();
    let last = axis + 2 == dim;
    let exponent = (dim - 2 - axis) as i32;
    let max_panels = if last { MOMENT_MAX_PANELS } else { MOMENT_MAX_PANELS / 8 };
    adaptive_vec(
        |phi| {
            let (sp, cp) = phi.sin_cos();
            let jac = sp.powi(exponent);
            let mut coords = prefix.clone();
            coords.push(sines * cp);
            let mut r = if last {
                coords.push(sines * sp);
                moment_integrand(gauge, dim, alphas, &coords, 1.0, failure)
            } else {
                orthant_integral(gauge, dim, alphas, panels, coords, sines * sp, failure)
            };
            r.value.iter_mut().for_each(|v| *v *= jac);
            r.error.iter_mut().for_each(|v| *v *= jac);
            r
        },
        0.0,
        FRAC_PI_2,
        alphas.len(),
        panels,
        MOMENT_REL_TOL,
        max_panels,
    )
}

fn moment_integrand(
    gauge: &GaugeExpr,
    dim: usize,
    alphas: &[Vec<u32>],
    theta: &[f64],
    weight: f64,
    failure: &mut Option<String>,
) -> VecIntegral {
    let m = gauge.eval_moduli(theta);
    if !(m.is_finite() && m > 0.0) {
        failure.get_or_insert_with(|| format!("gauge is {m} at sphere node {theta:?}"));
        return VecIntegral { value: vec![0.0; alphas.len()], error: vec![0.0; alphas.len()] };
    }
    let log_m = m.ln();
    let base: f64 = theta.iter().product();
    let value = alphas
        .iter()
        .map(|alpha| {
            let deg: u32 = alpha.iter().sum();
            let expo = 2.0 * f64::from(deg) + 2.0 * dim as f64;
            let mut mono = base;
            for (t, &k) in theta.iter().zip(alpha) {
                mono *= t.powi(2 * k as i32);
            }
            weight * mono * (-expo * log_m).exp() / expo
        })
        .collect();
    VecIntegral { value, error: vec![0.0; alphas.len()] }
}
