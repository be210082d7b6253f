//! The unit disk with its Kobayashi metric `arctanh |(z - w)/(1 - conj(w) z)|`,
//! a one-dimensional model in which distance, Green function, kernel,
//! indicatrix and Busemann density are all closed forms.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bergman::exact_kernel;
use crate::geometry::{CPoint, DomainSpec, VolumeMethod};
use crate::green::green_disk;
use crate::metrics::{busemann_density, indicatrix_volume, Distance2, FinslerIndicatrix};
use crate::quadrature::composite;
use crate::verifier::report::{CheckReport, MarginScale, ReportBuilder};
use crate::{Error, Result};

/// A point strictly inside the unit disk.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Complex64", into = "Complex64")]
pub struct DiskPoint(Complex64);

impl DiskPoint {
    pub fn new(z: Complex64) -> Result<Self> {
        if z.re.is_finite() && z.im.is_finite() && z.norm_sqr() < 1.0 {
            Ok(Self(z))
        } else {
            Err(Error::OutsideDomain(format!("{z} is not inside the unit disk")))
        }
    }

    pub fn real(x: f64) -> Result<Self> {
        Self::new(Complex64::new(x, 0.0))
    }

    pub fn z(&self) -> Complex64 {
        self.0
    }
}

impl TryFrom<Complex64> for DiskPoint {
    type Error = Error;
    fn try_from(z: Complex64) -> Result<Self> {
        Self::new(z)
    }
}

impl From<DiskPoint> for Complex64 {
    fn from(p: DiskPoint) -> Self {
        p.0
    }
}

/// `|(z - w) / (1 - conj(w) z)|`
fn pseudo_hyperbolic(z: Complex64, w: Complex64) -> f64 {
    ((z - w) / (Complex64::new(1.0, 0.0) - w.conj() * z)).norm()
}

pub fn teich_distance(z: DiskPoint, w: DiskPoint) -> f64 {
    pseudo_hyperbolic(z.0, w.0).atanh()
}

/// `tanh` of the distance, computed directly from the Möbius quotient.
pub fn k0(z: DiskPoint, w: DiskPoint) -> f64 {
    pseudo_hyperbolic(z.0, w.0)
}

/// `|v| / (1 - |z|^2)`
pub fn finsler_norm(z: DiskPoint, v: Complex64) -> f64 {
    v.norm() / (1.0 - z.0.norm_sqr())
}

/// `z -> e^{i theta} (z - a) / (1 - conj(a) z)`
pub fn mobius(a: DiskPoint, theta: f64, z: DiskPoint) -> DiskPoint {
    let one = Complex64::new(1.0, 0.0);
    let w = Complex64::from_polar(1.0, theta) * (z.0 - a.0) / (one - a.0.conj() * z.0);
    // |w| < 1 holds in exact arithmetic; clamp the rare rounding overshoot
    if w.norm_sqr() < 1.0 {
        DiskPoint(w)
    } else {
        DiskPoint(w / w.norm() * (1.0 - f64::EPSILON))
    }
}

/// The Kobayashi distance of the disk as a metric on `R^2`; infinite
/// outside the disk.
#[derive(Clone, Copy, Debug, Default)]
pub struct DiskModelDistance;

impl Distance2 for DiskModelDistance {
    fn distance(&self, a: [f64; 2], b: [f64; 2]) -> f64 {
        match (DiskPoint::new(Complex64::new(a[0], a[1])), DiskPoint::new(Complex64::new(b[0], b[1]))) {
            (Ok(p), Ok(q)) => teich_distance(p, q),
            _ => f64::INFINITY,
        }
    }
}

/// Single-pair form of `log k0 = g` with absolute tolerance.
pub fn green_equals_log_k0_check(z: DiskPoint, w: DiskPoint, tolerance: f64) -> Result<CheckReport> {
    green_identity_check(&[(z, w)], tolerance)
}

/// `g(w, z) = log k0(z, w)` on every pair.
pub fn green_identity_check(pairs: &[(DiskPoint, DiskPoint)], tolerance: f64) -> Result<CheckReport> {
    let mut b = ReportBuilder::new(
        "green_identity",
        "Green function of the disk equals log tanh of the Kobayashi distance",
        MarginScale::Absolute,
        tolerance,
    )
    .input("pairs", pairs);
    for (i, &(z, w)) in pairs.iter().enumerate() {
        if z == w {
            return Err(Error::CoincidentPoints);
        }
        let g = green_disk(w.0, z.0)?.0;
        let l = k0(z, w).ln();
        let (gl, ll) = (format!("green_{i}"), format!("log_k0_{i}"));
        b.push_quantity(&gl, g, 0.0);
        b.push_quantity(&ll, l, 0.0);
        b.push_eq(&format!("pair_{i}"), &gl, &ll);
    }
    Ok(b.finish(0))
}

/// Polynomial holomorphic disk `phi(t) = sum_k c_k t^k`; `c_0` is the base
/// point and `c_1` the tangent vector.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PathSpec {
    pub coefficients: Vec<Complex64>,
}

impl PathSpec {
    pub fn new(coefficients: Vec<Complex64>) -> Result<Self> {
        if coefficients.len() < 2 {
            return Err(Error::InvalidParameter("a path needs a base point and a tangent coefficient".into()));
        }
        DiskPoint::new(coefficients[0])?;
        Ok(Self { coefficients })
    }

    pub fn base(&self) -> DiskPoint {
        DiskPoint(self.coefficients[0])
    }

    pub fn tangent(&self) -> Complex64 {
        self.coefficients[1]
    }

    pub fn eval(&self, t: f64) -> Result<DiskPoint> {
        let z = self.coefficients.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * t + c);
        DiskPoint::new(z).map_err(|_| Error::OutsideDomain(format!("path leaves the disk at t = {t}")))
    }

    /// `phi(t) = t v` from the origin
    pub fn is_radial_from_origin(&self) -> bool {
        self.coefficients[0] == Complex64::new(0.0, 0.0) && self.coefficients[2..].iter().all(|c| *c == Complex64::new(0.0, 0.0))
    }
}

/// Slack allowed above the fitted quadratic on the smallest parameters.
pub const QUADRATIC_FIT_SLACK: f64 = 0.1;

/// First-order expansion `k0(x0, phi(t)) = t F(v) + O(t^2)` along a path.
///
/// Reports the error `e(t)`, the least-squares coefficient `c` of
/// `e(t) ≈ c t^2` on the three smallest `t`, and asserts that `e(t)/t`
/// decreases to the smallest `t` and that `e(t) <= (1 + slack) c t^2` there.
/// Radial paths from the origin must have `e(t) = 0`.
pub fn expansion_check(path: &PathSpec, t_list: &[f64], tolerance: f64) -> Result<CheckReport> {
    if t_list.len() < 3 {
        return Err(Error::InvalidParameter("need at least three parameters".into()));
    }
    if t_list.iter().any(|t| !(t.is_finite() && *t > 0.0)) || t_list.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(Error::InvalidParameter("parameters must be positive and strictly decreasing".into()));
    }
    let base = path.base();
    let f = finsler_norm(base, path.tangent());
    let mut errors = Vec::with_capacity(t_list.len());
    for &t in t_list {
        errors.push((k0(base, path.eval(t)?) - t * f).abs());
    }
    let tail = t_list.len() - 3;
    let (num, den) = t_list[tail..]
        .iter()
        .zip(&errors[tail..])
        .fold((0.0, 0.0), |(n, d), (t, e)| (n + e * t * t, d + t.powi(4)));
    let c = num / den;

    let mut b = ReportBuilder::new(
        "expansion",
        "Distance from the base point along a holomorphic disk is t times the Finsler norm to first order",
        MarginScale::Absolute,
        tolerance,
    )
    .input("path", path)
    .input("t", t_list)
    .quantity("finsler_norm", f, 0.0)
    .quantity("quadratic_coefficient", c, 0.0);
    let last = t_list.len() - 1;
    b.push_quantity("first_order_ratio_largest_t", errors[0] / t_list[0], 0.0);
    b.push_quantity("first_order_ratio_smallest_t", errors[last] / t_list[last], 0.0);
    b.push_le("first_order_vanishes", "first_order_ratio_smallest_t", "first_order_ratio_largest_t");
    for i in tail..t_list.len() {
        let (el, bl) = (format!("error_{i}"), format!("quadratic_bound_{i}"));
        b.push_quantity(&el, errors[i], 0.0);
        b.push_quantity(&bl, (1.0 + QUADRATIC_FIT_SLACK) * c * t_list[i] * t_list[i], 0.0);
        b.push_le(&format!("quadratic_{i}"), &el, &bl);
    }
    if path.is_radial_from_origin() {
        b.push_quantity("zero", 0.0, 0.0);
        for (i, e) in errors.iter().enumerate() {
            let l = format!("radial_error_{i}");
            b.push_quantity(&l, *e, 0.0);
            b.push_eq(&format!("radial_exact_{i}"), &l, "zero");
        }
    }
    Ok(b.finish(0))
}

/// `(1/eps_2) mu_B <= K <= (3^2/eps_2) mu_B` at a disk point, with the
/// Busemann density `mu_B` from the exact indicatrix and `K` in closed form.
pub fn theorem_comparison_check(z: DiskPoint, tolerance: f64) -> Result<CheckReport> {
    let ind = FinslerIndicatrix::disk_model(z.0)?;
    let vol = indicatrix_volume(&ind, VolumeMethod::Exact, 0, 0)?;
    let mu = busemann_density(&ind, vol)?;
    let k = exact_kernel(&DomainSpec::Disk, &CPoint::scalar(z.0)?)?.density;
    Ok(comparison_report(
        "kernel_busemann_comparison",
        "Bergman kernel density lies between 1 and 3^(2N) times the Busemann density over eps_2N",
        1,
        k,
        0.0,
        mu.value,
        mu.std_error,
        mu.epsilon,
        tolerance,
    )
    .input("point", z)
    .finish(0))
}

/// Shared body of the two-sided kernel/Busemann comparison, used by the
/// disk model and by balanced domains at the origin.
#[allow(clippy::too_many_arguments)]
pub(crate) fn comparison_report(
    name: &str,
    statement: &str,
    dim: usize,
    kernel: f64,
    kernel_error: f64,
    busemann: f64,
    busemann_error: f64,
    epsilon: f64,
    tolerance: f64,
) -> ReportBuilder {
    let upper_factor = 3f64.powi(2 * dim as i32);
    ReportBuilder::new(name, statement, MarginScale::Relative, tolerance)
        .input("upper_factor", upper_factor)
        .quantity("kernel", kernel, kernel_error)
        .quantity("busemann_density", busemann, busemann_error)
        .quantity("lower_bound", busemann / epsilon, busemann_error / epsilon)
        .quantity("upper_bound", upper_factor * busemann / epsilon, upper_factor * busemann_error / epsilon)
        .le("lower", "lower_bound", "kernel")
        .eq("lower_equality", "lower_bound", "kernel")
        .le("upper", "kernel", "upper_bound")
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VolumeGrowth {
    pub radii: Vec<f64>,
    /// `sinh^2 R`
    pub exact: Vec<f64>,
    pub quadrature: Vec<f64>,
    /// least-squares slope of `log volume` against `R`
    pub rate: f64,
}

const GROWTH_PANELS: usize = 64;
const GROWTH_ORDER: usize = 16;

/// Kernel volume `∫_{d(0,z) < R} K dA` of Kobayashi balls about the origin,
/// by the closed form and by quadrature in the hyperbolic radius where the
/// integrand is `sinh(2 rho)`.
pub fn ball_volume_growth(radii: &[f64]) -> Result<VolumeGrowth> {
    if radii.is_empty() || radii.iter().any(|r| !(r.is_finite() && *r >= 0.0)) || radii.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidParameter("radii must be non-negative and strictly increasing".into()));
    }
    let exact: Vec<f64> = radii.iter().map(|r| r.sinh().powi(2)).collect();
    let mut quadrature = Vec::with_capacity(radii.len());
    for &r in radii {
        if r == 0.0 {
            quadrature.push(0.0);
            continue;
        }
        let nodes = composite(0.0, r, GROWTH_PANELS, GROWTH_ORDER);
        quadrature.push(nodes.iter().map(|(x, w)| w * (2.0 * x).sinh()).sum());
    }
    for (q, e) in quadrature.iter().zip(&exact) {
        if (q - e).abs() > 1e-10 * e.max(1.0) {
            return Err(Error::Quadrature(format!("ball volume quadrature {q} disagrees with {e}")));
        }
    }
    let pts: Vec<(f64, f64)> = radii.iter().zip(&quadrature).filter(|(_, v)| **v > 0.0).map(|(r, v)| (*r, v.ln())).collect();
    let rate = if pts.len() < 2 {
        f64::NAN
    } else {
        let n = pts.len() as f64;
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
        let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
        sxy / sxx
    };
    Ok(VolumeGrowth { radii: radii.to_vec(), exact, quadrature, rate })
}

/// Model growth rate 2 of kernel volume of Kobayashi balls, within a
/// relative tolerance.
pub fn volume_growth_check(radii: &[f64], tolerance: f64) -> Result<CheckReport> {
    let g = ball_volume_growth(radii)?;
    let mut b = ReportBuilder::new(
        "volume_growth",
        "Kernel volume of Kobayashi balls in the disk grows like exp(2R)",
        MarginScale::Relative,
        tolerance,
    )
    .input("radii", radii)
    .quantity("fitted_rate", g.rate, 0.0)
    .quantity("model_rate", 2.0, 0.0)
    .eq("rate", "fitted_rate", "model_rate");
    for (i, (q, e)) in g.quadrature.iter().zip(&g.exact).enumerate() {
        let (ql, el) = (format!("quadrature_{i}"), format!("sinh2_{i}"));
        b.push_quantity(&ql, *q, 0.0);
        b.push_quantity(&el, *e, 0.0);
        b.push_eq(&format!("volume_{i}"), &ql, &el);
    }
    Ok(b.finish(0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(x: f64, y: f64) -> DiskPoint {
        DiskPoint::new(Complex64::new(x, y)).unwrap()
    }

    #[test]
    fn closed_forms() {
        assert_eq!(teich_distance(p(0.0, 0.0), p(0.0, 0.0)), 0.0);
        assert!((teich_distance(p(0.0, 0.0), p(0.5, 0.0)) - 0.549_306_144_334_054_8).abs() < 1e-15);
        assert!((k0(p(0.3, 0.0), p(0.6, 0.0)) - 0.3 / 0.82).abs() < 1e-15);
        assert_eq!(k0(p(0.2, 0.1), p(0.2, 0.1)), 0.0);
        assert_eq!(finsler_norm(p(0.0, 0.0), Complex64::new(1.0, 0.0)), 1.0);
        assert!((finsler_norm(p(0.5, 0.0), Complex64::new(1.0, 0.0)) - 4.0 / 3.0).abs() < 1e-15);
        let rot = Complex64::from_polar(1.0, -std::f64::consts::FRAC_PI_4);
        let (a, b) = (p(0.3, 0.0), p(0.0, 0.3));
        let d = teich_distance(DiskPoint(a.0 * rot), DiskPoint(b.0 * rot));
        assert!((d - teich_distance(a, b)).abs() < 1e-15);
        assert!(DiskPoint::real(1.0).is_err());
    }

    #[test]
    fn green_identity_examples() {
        let r = green_equals_log_k0_check(p(0.0, 0.0), p(0.5, 0.0), 1e-12).unwrap();
        assert!(r.passed);
        assert!((r.quantity("green_0").unwrap().value - 0.5f64.ln()).abs() < 1e-15);
        let r = green_equals_log_k0_check(p(0.3, 0.0), p(0.6, 0.0), 1e-12).unwrap();
        assert!(r.passed);
        assert!((r.quantity("log_k0_0").unwrap().value - (0.3f64 / 0.82).ln()).abs() < 1e-14);
        assert!(matches!(green_equals_log_k0_check(p(0.1, 0.0), p(0.1, 0.0), 1e-12), Err(Error::CoincidentPoints)));
    }

    #[test]
    fn expansion_examples() {
        let ts = [1e-1, 1e-2, 1e-3, 1e-4];
        let c = |x: f64| Complex64::new(x, 0.0);
        let radial = PathSpec::new(vec![c(0.0), c(1.0)]).unwrap();
        let r = expansion_check(&radial, &ts, 1e-12).unwrap();
        assert!(r.passed, "{r:?}");
        assert_eq!(r.quantity("quadratic_coefficient").unwrap().value, 0.0);

        let geodesic = PathSpec::new(vec![c(0.3), c(0.91)]).unwrap();
        let r = expansion_check(&geodesic, &[1e-1, 1e-2, 1e-3], 1e-12).unwrap();
        assert!(r.passed, "{r:?}");
        assert!(r.quantity("first_order_ratio_smallest_t").unwrap().value <= 1e-3);

        let bent = PathSpec::new(vec![c(0.0), c(1.0), c(1.0)]).unwrap();
        let r = expansion_check(&bent, &ts, 1e-12).unwrap();
        assert!(r.passed, "{r:?}");
        assert!((r.quantity("quadratic_coefficient").unwrap().value - 1.0).abs() < 1e-6);

        let exits = PathSpec::new(vec![c(0.9), c(1.0)]).unwrap();
        assert!(expansion_check(&exits, &[0.5, 0.1, 0.01], 1e-12).is_err());
    }

    #[test]
    fn theorem_comparison_examples() {
        let r = theorem_comparison_check(p(0.0, 0.0), 1e-12).unwrap();
        assert!(r.passed);
        assert!((r.quantity("lower_bound").unwrap().value - std::f64::consts::FRAC_1_PI).abs() < 1e-15);
        assert!((r.quantity("upper_bound").unwrap().value - 9.0 * std::f64::consts::FRAC_1_PI).abs() < 1e-14);
        assert!(theorem_comparison_check(p(0.7, 0.0), 1e-12).unwrap().passed);
    }

    #[test]
    fn volume_growth_examples() {
        let g = ball_volume_growth(&[0.0, 1.0]).unwrap();
        assert_eq!(g.quadrature[0], 0.0);
        assert!((g.quadrature[1] - 1.381_097_845_541_816).abs() < 1e-12);
        let g = ball_volume_growth(&[3.0, 4.0, 5.0]).unwrap();
        assert!((g.rate - 2.0).abs() < 0.02);
        assert!(volume_growth_check(&[3.0, 4.0, 5.0], 0.01).unwrap().passed);
        assert!(ball_volume_growth(&[2.0, 1.0]).is_err());
    }

    fn disk_point() -> impl Strategy<Value = DiskPoint> {
        (0.0..0.99f64, 0.0..std::f64::consts::TAU).prop_map(|(r, t)| DiskPoint(Complex64::from_polar(r, t)))
    }

    proptest! {
        #[test]
        fn mobius_invariance(a in disk_point(), theta in 0.0..6.3f64, z in disk_point(), w in disk_point()) {
            let d = teich_distance(z, w);
            let dg = teich_distance(mobius(a, theta, z), mobius(a, theta, w));
            prop_assert!((d - dg).abs() <= 1e-12 * d.max(1.0) * (1.0 / (1.0 - a.0.norm())).max(1.0));
        }

        #[test]
        fn metric_axioms(x in disk_point(), y in disk_point(), z in disk_point()) {
            prop_assert!((teich_distance(x, y) - teich_distance(y, x)).abs() <= 1e-12);
            prop_assert!(teich_distance(x, z) <= teich_distance(x, y) + teich_distance(y, z) + 1e-12);
        }

        #[test]
        fn finsler_homogeneity(z in disk_point(), re in -3.0..3.0f64, im in -3.0..3.0f64, l in 0.0..5.0f64) {
            let v = Complex64::new(re, im);
            let lhs = finsler_norm(z, v * l);
            prop_assert!((lhs - l * finsler_norm(z, v)).abs() <= 1e-12 * lhs.max(1.0));
        }
    }
}
