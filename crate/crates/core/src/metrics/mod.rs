//! Invariant metrics at balanced origins and on the disk, their
//! indicatrices, Busemann densities and a covering estimate of the
//! two-dimensional Hausdorff measure.

mod hausdorff;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub use hausdorff::{hausdorff_estimate, Distance2, EuclideanDistance, HausdorffEstimate, Region, ScaledDistance, MIN_COVER};

use crate::geometry::{sandwich_radii, sample_direction_moduli, volume, CPoint, DomainSpec, GaugeExpr, VolumeEstimate, VolumeMethod};
use crate::green::GreenFunction;
use crate::verifier::report::{CheckReport, MarginScale, ReportBuilder};
use crate::{Error, Result};

pub use crate::special::unit_ball_volume;

/// Kobayashi metric of a balanced pseudoconvex domain at its origin: the
/// gauge applied to the tangent vector.
pub fn kobayashi_origin(spec: &DomainSpec, base: &CPoint, v: &CPoint) -> Result<f64> {
    base.expect_dim(spec.dim())?;
    if !base.is_origin() {
        return Err(Error::Unsupported("the Kobayashi metric is only available at the origin".into()));
    }
    spec.gauge_eval(v)
}

/// Default path parameters for the Azukawa limsup.
pub const AZUKAWA_T: [f64; 3] = [1e-4, 1e-5, 1e-6];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AzukawaEstimate {
    /// max of `exp(g(p, p + t v)) / t` over the three smallest `t`
    pub value: f64,
    /// max minus min over those three ratios
    pub spread: f64,
    pub ratios: Vec<(f64, f64)>,
}

/// Numerical limsup `exp(g(p, p + t v)) / |t|` as `t -> 0` along the
/// straight disk `t -> p + t v`.
pub fn azukawa(green: &GreenFunction, v: &CPoint, t_sequence: &[f64]) -> Result<AzukawaEstimate> {
    if t_sequence.is_empty() {
        return Err(Error::InvalidParameter("empty t sequence".into()));
    }
    if t_sequence.iter().any(|t| !(t.is_finite() && *t > 0.0)) || t_sequence.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(Error::InvalidParameter("t sequence must be positive and strictly decreasing".into()));
    }
    let p = green.pole();
    let mut ratios = Vec::with_capacity(t_sequence.len());
    for &t in t_sequence {
        let z = p.offset(Complex64::new(t, 0.0), v)?;
        let g = green.eval(&z).map_err(|e| match e {
            Error::OutsideDomain(_) => Error::OutsideDomain(format!("path p + t v leaves the domain at t = {t}")),
            other => other,
        })?;
        ratios.push((t, g.0.exp() / t));
    }
    let tail = &ratios[ratios.len().saturating_sub(3)..];
    let value = tail.iter().map(|r| r.1).fold(f64::NEG_INFINITY, f64::max);
    let spread = value - tail.iter().map(|r| r.1).fold(f64::INFINITY, f64::min);
    Ok(AzukawaEstimate { value, spread, ratios })
}

/// Unit ball `{F_x <= 1}` of a Finsler norm at a base point, described by a
/// gauge on tangent coordinates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FinslerIndicatrix {
    pub base: CPoint,
    pub norm: GaugeExpr,
    pub dim: usize,
}

impl FinslerIndicatrix {
    pub fn new(base: CPoint, norm: GaugeExpr) -> Result<Self> {
        let dim = base.dim();
        norm.validate(dim)?;
        Ok(Self { base, norm, dim })
    }

    /// Kobayashi (= Azukawa) indicatrix at the origin of a balanced domain,
    /// which is the domain itself.
    pub fn balanced_origin(spec: &DomainSpec) -> Result<Self> {
        Self::new(CPoint::origin(spec.dim()), spec.require_gauge()?)
    }

    /// Indicatrix of `F_z(v) = |v| / (1 - |z|^2)` on the unit disk: the disk
    /// of radius `1 - |z|^2`.
    pub fn disk_model(z: Complex64) -> Result<Self> {
        let r = 1.0 - z.norm_sqr();
        if !(r > 0.0) {
            return Err(Error::OutsideDomain(format!("{z} is not in the disk")));
        }
        Self::new(CPoint::scalar(z)?, GaugeExpr::leaf(0, r))
    }

    /// Indicatrix of the Azukawa metric at the pole of a Green function.
    pub fn at_pole(green: &GreenFunction) -> Result<Self> {
        match green {
            GreenFunction::Origin { domain } => Self::balanced_origin(domain),
            GreenFunction::Disk { w } => Self::disk_model(*w),
        }
    }

    pub fn eval(&self, v: &CPoint) -> Result<f64> {
        v.expect_dim(self.dim)?;
        Ok(self.norm.eval_moduli(&v.moduli()))
    }

    pub fn as_domain(&self) -> DomainSpec {
        DomainSpec::Balanced { gauge: self.norm.clone(), dim: self.dim }
    }
}

/// `V_E({F_x <= 1})`.
pub fn indicatrix_volume(ind: &FinslerIndicatrix, method: VolumeMethod, n: usize, seed: u64) -> Result<VolumeEstimate> {
    volume(&ind.as_domain(), method, n, seed)
}

/// Closed form when known, else sphere quadrature.
pub fn indicatrix_volume_best(ind: &FinslerIndicatrix) -> Result<VolumeEstimate> {
    crate::geometry::best_volume(&ind.as_domain())
}

/// Coefficient `eps_{2N} / V_E(indicatrix)` of the Busemann volume form.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BusemannDensity {
    pub value: f64,
    pub std_error: f64,
    pub epsilon: f64,
    pub indicatrix_volume: VolumeEstimate,
}

pub fn busemann_density(ind: &FinslerIndicatrix, indicatrix_volume: VolumeEstimate) -> Result<BusemannDensity> {
    if !(indicatrix_volume.value > 0.0 && indicatrix_volume.value.is_finite()) {
        return Err(Error::ZeroVolume(format!("indicatrix volume is {}", indicatrix_volume.value)));
    }
    let epsilon = unit_ball_volume(2 * ind.dim)?;
    let value = epsilon / indicatrix_volume.value;
    Ok(BusemannDensity {
        value,
        std_error: value * indicatrix_volume.std_error / indicatrix_volume.value,
        epsilon,
        indicatrix_volume,
    })
}

pub const SANDWICH_DIRECTIONS: usize = 10_000;

/// `r B ⊂ {F_0 <= 1} ⊂ R B` for the Kobayashi indicatrix at the origin,
/// checked on directions drawn independently of those used for the radii.
pub fn indicatrix_sandwich_check(spec: &DomainSpec, n_directions: usize, seed: u64, tolerance: f64) -> Result<CheckReport> {
    let radii = sandwich_radii(spec, n_directions, seed)?;
    let ind = FinslerIndicatrix::balanced_origin(spec)?;
    let verify_seed = crate::sampling::derive_seed(seed, "verify-directions");
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for u in sample_direction_moduli(spec.dim(), n_directions, verify_seed) {
        let reach = 1.0 / ind.norm.eval_moduli(&u);
        lo = lo.min(reach);
        hi = hi.max(reach);
    }
    Ok(ReportBuilder::new(
        "sandwich",
        "Indicatrix at the origin lies between two Euclidean balls",
        MarginScale::Relative,
        tolerance,
    )
    .input("domain", spec)
    .input("directions", n_directions)
    .quantity("inner_radius", radii.inner, 0.0)
    .quantity("min_boundary_distance", lo, 0.0)
    .quantity("max_boundary_distance", hi, 0.0)
    .quantity("outer_radius", radii.outer, 0.0)
    .le("inner_ball", "inner_radius", "min_boundary_distance")
    .le("outer_ball", "max_boundary_distance", "outer_radius")
    .finish(seed))
}
