//! One function per verified statement. Each returns a single report; checks
//! over several cases fold them with [`CheckReport::combine`].

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;

use super::report::{CheckReport, MarginScale, ReportBuilder};
use crate::bergman::{kernel, monotonicity_check, transformation_check, KernelRequest, NamedMap};
use crate::geometry::{best_volume, sample_direction_moduli, CPoint, DomainSpec, VolumeEstimate};
use crate::green::{asymptotic_limit, blocki_lower_bound, GreenFunction, SublevelEstimator};
use crate::metrics::{
    azukawa, busemann_density, hausdorff_estimate, indicatrix_sandwich_check, indicatrix_volume_best,
    EuclideanDistance, FinslerIndicatrix, Region,
};
use crate::sampling::chunk_rng;
use crate::teich_model::{
    expansion_check, green_identity_check, theorem_comparison_check, volume_growth_check, DiskModelDistance, DiskPoint, PathSpec,
};
use crate::{Error, Result};

/// Tolerance of checks whose quantities are all closed forms or
/// quadratures converged to near machine precision.
pub const EXACT_TOLERANCE: f64 = 1e-12;
/// Tolerance, in standard errors, of sampled checks.
pub const SIGMA_TOLERANCE: f64 = 3.0;

/// Green function of a domain with pole at the origin, or of the disk at `pole`.
pub fn green_for(spec: &DomainSpec, pole: Option<Complex64>) -> Result<GreenFunction> {
    match pole {
        Some(w) if w != Complex64::new(0.0, 0.0) => {
            if *spec != DomainSpec::Disk {
                return Err(Error::Unsupported("poles away from the origin are only available for the disk".into()));
            }
            GreenFunction::disk(w)
        }
        _ => GreenFunction::origin(spec.clone()),
    }
}

fn sampled_or_exact(b: &mut ReportBuilder, tolerance: f64) {
    if b.has_uncertainty() {
        b.set_scale(MarginScale::Sigma, SIGMA_TOLERANCE);
    } else {
        b.set_scale(MarginScale::Relative, tolerance);
    }
}

/// `K(p) >= 1 / (e^{2Na} V({g_p < -a}))` at each depth; with `equality` the
/// two sides must also agree.
pub fn check_blocki(
    spec: &DomainSpec,
    pole: Option<Complex64>,
    depths: &[f64],
    estimator: &SublevelEstimator,
    request: &KernelRequest,
    equality: bool,
    seed: u64,
) -> Result<CheckReport> {
    if depths.is_empty() {
        return Err(Error::InvalidParameter("need at least one depth".into()));
    }
    let green = green_for(spec, pole)?;
    let k = kernel(spec, &green.pole(), request)?;
    let mut b = ReportBuilder::new(
        "blocki_bound",
        "Bergman kernel density at the pole dominates 1/(e^(2Na) V(g < -a))",
        MarginScale::Relative,
        EXACT_TOLERANCE,
    )
    .input("domain", spec)
    .input("pole", green.pole())
    .input("depths", depths)
    .input("estimator", estimator)
    .input("kernel", request)
    .quantity("kernel", k.density, k.err_est);
    for (i, &a) in depths.iter().enumerate() {
        let lb = blocki_lower_bound(&green, a, estimator)?;
        let l = format!("lower_bound_{i}");
        b.push_quantity(&l, lb.value, lb.std_error);
        b.push_le(&format!("bound_{i}"), &l, "kernel");
        if equality {
            b.push_eq(&format!("equality_{i}"), &l, "kernel");
        }
    }
    sampled_or_exact(&mut b, EXACT_TOLERANCE);
    Ok(b.finish(seed))
}

/// Relative tolerance of the balanced-origin identity when the kernel is
/// itself an estimate.
pub const IDENTITY_ESTIMATE_TOLERANCE: f64 = 0.02;

/// `K(0) V(Ω) = 1` at the origin of a balanced pseudoconvex domain.
pub fn check_balanced_identity(spec: &DomainSpec, request: &KernelRequest, seed: u64) -> Result<CheckReport> {
    spec.require_gauge()?;
    let k = kernel(spec, &CPoint::origin(spec.dim()), request)?;
    let v = best_volume(spec)?;
    let product = k.density * v.value;
    let err = product * ((k.err_est / k.density).powi(2) + (v.std_error / v.value).powi(2)).sqrt();
    let tolerance = if k.err_est > 0.0 || v.std_error > 0.0 { IDENTITY_ESTIMATE_TOLERANCE } else { EXACT_TOLERANCE };
    Ok(ReportBuilder::new(
        "balanced_identity",
        "Bergman kernel density at the origin of a balanced domain is 1/volume",
        MarginScale::Relative,
        tolerance,
    )
    .input("domain", spec)
    .input("kernel", request)
    .quantity("kernel", k.density, k.err_est)
    .quantity("volume", v.value, v.std_error)
    .quantity("kernel_times_volume", product, err)
    .quantity("one", 1.0, 0.0)
    .eq("identity", "kernel_times_volume", "one")
    .finish(seed))
}

/// `(1/eps_2N) mu_B <= K(0) <= (3^2N/eps_2N) mu_B` at the origin of a
/// convex balanced domain, where the indicatrix is the domain itself.
pub fn check_kernel_busemann(spec: &DomainSpec, request: &KernelRequest, seed: u64) -> Result<CheckReport> {
    if !spec.is_convex() {
        return Err(Error::InvalidDomain(format!("{} is not convex balanced", spec.label())));
    }
    let ind = FinslerIndicatrix::balanced_origin(spec)?;
    let mu = busemann_density(&ind, indicatrix_volume_best(&ind)?)?;
    let k = kernel(spec, &CPoint::origin(spec.dim()), request)?;
    let mut b = crate::teich_model::comparison_report(
        "kernel_busemann_comparison",
        "Bergman kernel density lies between 1 and 3^(2N) times the Busemann density over eps_2N",
        spec.dim(),
        k.density,
        k.err_est,
        mu.value,
        mu.std_error,
        mu.epsilon,
        EXACT_TOLERANCE,
    )
    .input("domain", spec)
    .input("kernel_request", request);
    sampled_or_exact(&mut b, EXACT_TOLERANCE);
    Ok(b.finish(seed))
}

/// `e^{2Na} V({g < -a}) -> V(indicatrix)`: every depth must match for the
/// closed-form path; the extrapolated limit must match for sampling.
pub fn check_sublevel_limit(spec: &DomainSpec, pole: Option<Complex64>, depths: &[f64], estimator: &SublevelEstimator, seed: u64) -> Result<CheckReport> {
    let green = green_for(spec, pole)?;
    let lim = asymptotic_limit(&green, depths, estimator)?;
    let ind: VolumeEstimate = indicatrix_volume_best(&FinslerIndicatrix::at_pole(&green)?)?;
    let mut b = ReportBuilder::new(
        "sublevel_limit",
        "e^(2Na) times the volume of {g < -a} tends to the indicatrix volume",
        MarginScale::Relative,
        EXACT_TOLERANCE,
    )
    .input("domain", spec)
    .input("pole", green.pole())
    .input("depths", depths)
    .input("estimator", estimator)
    .quantity("indicatrix_volume", ind.value, ind.std_error);
    for (i, (s, e)) in lim.series.scaled.iter().zip(&lim.series.scaled_errors).enumerate() {
        b.push_quantity(&format!("scaled_{i}"), *s, *e);
    }
    if matches!(estimator, SublevelEstimator::MonteCarlo { .. }) {
        b.push_quantity("extrapolated", lim.extrapolated, lim.extrapolated_error);
        b.push_eq("limit", "extrapolated", "indicatrix_volume");
        b.set_scale(MarginScale::Sigma, SIGMA_TOLERANCE);
    } else {
        for i in 0..depths.len() {
            b.push_eq(&format!("depth_{i}"), &format!("scaled_{i}"), "indicatrix_volume");
        }
    }
    Ok(b.finish(seed))
}

/// `g(w, z) = log k0(z, w)` on random pairs of disk points.
pub fn check_green_identity(n_pairs: usize, seed: u64) -> Result<CheckReport> {
    let mut rng = chunk_rng(seed, 0);
    let pairs: Vec<_> = (0..n_pairs).map(|_| (random_disk_point(&mut rng), random_disk_point(&mut rng))).collect();
    let mut r = green_identity_check(&pairs, EXACT_TOLERANCE)?;
    r.seed = seed;
    Ok(r)
}

/// Largest modulus of randomly drawn disk points.
const RANDOM_RADIUS: f64 = 0.99;

fn random_disk_point(rng: &mut impl Rng) -> DiskPoint {
    let r = RANDOM_RADIUS * rng.random::<f64>().sqrt();
    let t = rng.random::<f64>() * std::f64::consts::TAU;
    DiskPoint::new(Complex64::from_polar(r, t)).expect("radius below one")
}

pub const AZUKAWA_TOLERANCE: f64 = 1e-3;

/// Numerical Azukawa limsup equals the indicatrix norm at the pole, on
/// random unit directions with random phases.
pub fn check_azukawa(spec: &DomainSpec, pole: Option<Complex64>, n_directions: usize, t: &[f64], seed: u64) -> Result<CheckReport> {
    let green = green_for(spec, pole)?;
    let ind = FinslerIndicatrix::at_pole(&green)?;
    let dim = spec.dim();
    let mut rng = chunk_rng(seed, 1);
    let mut b = ReportBuilder::new(
        "azukawa_metric",
        "Azukawa metric from the Green function equals the Kobayashi indicatrix norm",
        MarginScale::Relative,
        AZUKAWA_TOLERANCE,
    )
    .input("domain", spec)
    .input("pole", green.pole())
    .input("directions", n_directions)
    .input("t", t);
    for (i, u) in sample_direction_moduli(dim, n_directions, seed).into_iter().enumerate() {
        let v = CPoint::new(u.iter().map(|&m| Complex64::from_polar(m, rng.random::<f64>() * std::f64::consts::TAU)).collect())?;
        let a = azukawa(&green, &v, t)?;
        let (al, nl) = (format!("azukawa_{i}"), format!("indicatrix_norm_{i}"));
        b.push_quantity(&al, a.value, a.spread);
        b.push_quantity(&nl, ind.eval(&v)?, 0.0);
        b.push_eq(&format!("direction_{i}"), &al, &nl);
    }
    Ok(b.finish(seed))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NestedPair {
    pub inner: DomainSpec,
    pub outer: DomainSpec,
    pub point: CPoint,
}

pub const MAPPING_TOLERANCE: f64 = 1e-6;

pub fn check_monotonicity(pairs: &[NestedPair], request: &KernelRequest, seed: u64) -> Result<CheckReport> {
    let parts = pairs
        .iter()
        .map(|p| monotonicity_check(&p.inner, &p.outer, &p.point, request, seed, MAPPING_TOLERANCE))
        .collect::<Result<Vec<_>>>()?;
    let parts = if parts.iter().any(|p| p.scale == MarginScale::Sigma) {
        parts.into_iter().map(|p| p.rescaled(MarginScale::Sigma, SIGMA_TOLERANCE)).collect()
    } else {
        parts
    };
    CheckReport::combine(
        "monotonicity",
        "Bergman kernel density decreases as the domain grows",
        json!({ "pairs": pairs, "kernel": request }),
        parts,
        seed,
    )
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapCase {
    pub map: NamedMap,
    pub point: CPoint,
}

pub fn check_transformation(cases: &[MapCase], seed: u64) -> Result<CheckReport> {
    let parts = cases
        .iter()
        .map(|c| transformation_check(&c.map, &c.point, MAPPING_TOLERANCE))
        .collect::<Result<Vec<_>>>()?;
    CheckReport::combine(
        "transformation_law",
        "Bergman kernel density transforms by |det F'|^2 under biholomorphisms",
        json!({ "cases": cases }),
        parts,
        seed,
    )
}

pub const SANDWICH_TOLERANCE: f64 = 1e-6;

pub fn check_sandwich(specs: &[DomainSpec], n_directions: usize, seed: u64) -> Result<CheckReport> {
    let parts = specs
        .iter()
        .map(|s| indicatrix_sandwich_check(s, n_directions, seed, SANDWICH_TOLERANCE))
        .collect::<Result<Vec<_>>>()?;
    CheckReport::combine(
        "sandwich",
        "Indicatrix at the origin lies between two Euclidean balls",
        json!({ "domains": specs, "directions": n_directions }),
        parts,
        seed,
    )
}

/// Accepted relative deviation of the Euclidean calibration case.
pub const CALIBRATION_SLACK: f64 = 0.05;
/// Accepted relative deviation from the Busemann measure.
pub const HAUSDORFF_SLACK: f64 = 0.10;

/// Covering estimate of the Hausdorff measure of the Kobayashi ball of
/// radius `radius` about 0 in the disk against its Busemann measure
/// `pi sinh^2(radius)`, after a Euclidean calibration on the unit square.
pub fn check_hausdorff(radius: f64, delta: f64, seed: u64) -> Result<CheckReport> {
    if !(radius.is_finite() && radius > 0.0) {
        return Err(Error::InvalidParameter(format!("radius must be positive, got {radius}")));
    }
    let square = Region::Square { x0: 0.0, y0: 0.0, side: 1.0 };
    let cal = hausdorff_estimate(&EuclideanDistance, &square, delta)?;
    let ball = Region::Disk { cx: 0.0, cy: 0.0, radius: radius.tanh() };
    let model = hausdorff_estimate(&DiskModelDistance, &ball, delta)?;
    let busemann = PI * radius.sinh().powi(2);
    Ok(ReportBuilder::new(
        "hausdorff_busemann",
        "Two-dimensional Hausdorff measure of the Kobayashi distance equals the Busemann measure",
        MarginScale::Absolute,
        0.0,
    )
    .input("radius", radius)
    .input("delta", delta)
    .input("calibration_cover", cal.cover_elements)
    .input("model_cover", model.cover_elements)
    .quantity("calibration_estimate", cal.value, 0.0)
    .quantity("calibration_lower", 1.0 - CALIBRATION_SLACK, 0.0)
    .quantity("calibration_upper", 1.0 + CALIBRATION_SLACK, 0.0)
    .quantity("busemann_measure", busemann, 0.0)
    .quantity("hausdorff_estimate", model.value, 0.0)
    .quantity("model_lower", (1.0 - HAUSDORFF_SLACK) * busemann, 0.0)
    .quantity("model_upper", (1.0 + HAUSDORFF_SLACK) * busemann, 0.0)
    .le("calibration_above", "calibration_lower", "calibration_estimate")
    .le("calibration_below", "calibration_estimate", "calibration_upper")
    .le("model_above", "model_lower", "hausdorff_estimate")
    .le("model_below", "hausdorff_estimate", "model_upper")
    .finish(seed))
}

/// Kernel/Busemann comparison at the origin, at `0.7` and at random disk points.
pub fn check_model_comparison(n_points: usize, seed: u64) -> Result<CheckReport> {
    let mut rng = chunk_rng(seed, 0);
    let mut points = vec![DiskPoint::real(0.0)?, DiskPoint::real(0.7)?];
    points.extend((0..n_points).map(|_| random_disk_point(&mut rng)));
    let parts = points.iter().map(|z| theorem_comparison_check(*z, EXACT_TOLERANCE)).collect::<Result<Vec<_>>>()?;
    CheckReport::combine(
        "model_kernel_busemann",
        "In the disk model the kernel equals the Busemann density over eps_2 and stays below 9 times it",
        json!({ "random_points": n_points }),
        parts,
        seed,
    )
}

pub fn check_expansion(paths: &[PathSpec], t: &[f64], seed: u64) -> Result<CheckReport> {
    let parts = paths.iter().map(|p| expansion_check(p, t, EXACT_TOLERANCE)).collect::<Result<Vec<_>>>()?;
    CheckReport::combine(
        "expansion",
        "Distance from the base point along a holomorphic disk is t times the Finsler norm to first order",
        json!({ "paths": paths, "t": t }),
        parts,
        seed,
    )
}

pub const GROWTH_TOLERANCE: f64 = 0.01;

pub fn check_volume_growth(radii: &[f64], seed: u64) -> Result<CheckReport> {
    let mut r = volume_growth_check(radii, GROWTH_TOLERANCE)?;
    r.seed = seed;
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bergman::GramQuadrature;

    #[test]
    fn blocki_equality_on_disk_and_polydisc() {
        for spec in [DomainSpec::Disk, DomainSpec::Polydisc(vec![1.0, 1.0])] {
            let r = check_blocki(&spec, None, &[1.0, 2.0, 3.0], &SublevelEstimator::Exact, &KernelRequest::Exact, true, 1).unwrap();
            assert!(r.passed, "{r:?}");
            assert!(r.min_margin().abs() < 1e-13);
        }
        let r = check_blocki(&DomainSpec::Disk, Some(Complex64::new(0.3, 0.0)), &[1.0], &SublevelEstimator::Exact, &KernelRequest::Exact, false, 1)
            .unwrap();
        assert!(r.passed);
    }

    #[test]
    fn balanced_identity_closed_forms() {
        for spec in [DomainSpec::Disk, DomainSpec::Ball(2), DomainSpec::Polydisc(vec![1.0, 0.5])] {
            let r = check_balanced_identity(&spec, &KernelRequest::Exact, 0).unwrap();
            assert!(r.passed);
            assert!(r.min_margin().abs() < 1e-14, "{r:?}");
        }
    }

    #[test]
    fn balanced_identity_sampled() {
        let req = KernelRequest::Gram { degree: 2, quadrature: GramQuadrature::MonteCarlo { samples: 200_000, seed: 3 } };
        let r = check_balanced_identity(&DomainSpec::kinked_example(), &req, 3).unwrap();
        assert!(r.passed, "{r:?}");
        assert_eq!(r.tolerance, IDENTITY_ESTIMATE_TOLERANCE);
    }

    #[test]
    fn kernel_busemann_polydisc() {
        let r = check_kernel_busemann(&DomainSpec::Polydisc(vec![1.0, 1.0]), &KernelRequest::Exact, 0).unwrap();
        assert!(r.passed);
        let k = r.quantity("kernel").unwrap().value;
        let upper = r.quantity("upper_bound").unwrap().value;
        assert!((upper / k - 81.0).abs() < 1e-12);
        assert!(check_kernel_busemann(&DomainSpec::kinked_example(), &KernelRequest::Auto, 0).is_err());
    }

    #[test]
    fn sublevel_limit_exact_and_sampled() {
        let r = check_sublevel_limit(&DomainSpec::Disk, None, &[1.0, 2.0, 3.0, 4.0, 5.0], &SublevelEstimator::Exact, 0).unwrap();
        assert!(r.passed);
        for i in 0..5 {
            assert!((r.quantity(&format!("scaled_{i}")).unwrap().value - PI).abs() < 1e-12);
        }
        let est = SublevelEstimator::MonteCarlo { samples: 200_000, seed: 11 };
        let r = check_sublevel_limit(&DomainSpec::Disk, Some(Complex64::new(0.3, 0.0)), &[2.0, 3.0, 4.0], &est, 11).unwrap();
        assert!(r.passed, "{r:?}");
        assert_eq!(r.scale, MarginScale::Sigma);
    }

    #[test]
    fn azukawa_and_green_identity() {
        let r = check_azukawa(&DomainSpec::Polydisc(vec![1.0, 1.0]), None, 50, &crate::metrics::AZUKAWA_T, 5).unwrap();
        assert!(r.passed);
        assert_eq!(r.margins.len(), 50);
        let r = check_azukawa(&DomainSpec::Disk, Some(Complex64::new(0.3, 0.2)), 10, &crate::metrics::AZUKAWA_T, 5).unwrap();
        assert!(r.passed, "{r:?}");
        let r = check_green_identity(100, 9).unwrap();
        assert!(r.passed);
        assert_eq!(r.margins.len(), 100);
    }

    #[test]
    fn hausdorff_passes_and_is_bracketed() {
        let r = check_hausdorff(1.0, 2e-2, 0).unwrap();
        assert!(r.passed, "{r:?}");
        assert!((r.quantity("busemann_measure").unwrap().value - 4.338_7).abs() < 1e-3);
    }
}
