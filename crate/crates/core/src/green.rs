//! Pluricomplex Green functions, sublevel-set volumes and the lower bound
//! `K(z) >= 1 / (e^{2Na} V({g(z, .) < -a}))`.
//!
//! Poles are supported where a closed form exists: the origin of a balanced
//! domain (`g = log m`) and any point of the unit disk (Möbius transport).

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::geometry::{best_volume, volume, CPoint, DomainSpec, VolumeEstimate, VolumeMethod};
use crate::sampling::{derive_seed, map_chunks};
use crate::{Error, Result};

/// Green function value in `[-inf, 0)`. Serialized as a number, or as the
/// string `"-inf"` at the pole.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GreenValue(pub f64);

impl GreenValue {
    pub fn is_pole(&self) -> bool {
        self.0 == f64::NEG_INFINITY
    }
}

impl Serialize for GreenValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.is_pole() {
            s.serialize_str("-inf")
        } else {
            s.serialize_f64(self.0)
        }
    }
}

impl<'de> Deserialize<'de> for GreenValue {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Num(f64),
            Str(String),
        }
        match Repr::deserialize(d)? {
            Repr::Num(x) => Ok(Self(x)),
            Repr::Str(s) if s == "-inf" => Ok(Self(f64::NEG_INFINITY)),
            Repr::Str(s) => Err(serde::de::Error::custom(format!("invalid Green value `{s}`"))),
        }
    }
}

/// `log m(z)` for a balanced domain with pole at the origin.
pub fn green_balanced(spec: &DomainSpec, z: &CPoint) -> Result<GreenValue> {
    let m = spec.gauge_eval(z)?;
    if m >= 1.0 {
        return Err(Error::OutsideDomain(format!("{z} is not in {}", spec.label())));
    }
    Ok(GreenValue(m.ln()))
}

/// `log |(z - w) / (1 - conj(w) z)|` on the unit disk.
pub fn green_disk(w: Complex64, z: Complex64) -> Result<GreenValue> {
    if w.norm() >= 1.0 || z.norm() >= 1.0 {
        return Err(Error::OutsideDomain("disk Green function needs |w| < 1 and |z| < 1".into()));
    }
    Ok(GreenValue(mobius_modulus(w, z).ln()))
}

pub(crate) fn mobius_modulus(w: Complex64, z: Complex64) -> f64 {
    ((z - w) / (1.0 - w.conj() * z)).norm()
}

/// A Green function with a fixed pole.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "pole", rename_all = "snake_case")]
pub enum GreenFunction {
    /// pole at the origin of a balanced domain
    Origin { domain: DomainSpec },
    /// pole `w` in the unit disk
    Disk { w: Complex64 },
}

impl GreenFunction {
    pub fn origin(domain: DomainSpec) -> Result<Self> {
        domain.require_gauge()?;
        Ok(Self::Origin { domain })
    }

    pub fn disk(w: Complex64) -> Result<Self> {
        if w.norm() >= 1.0 {
            return Err(Error::OutsideDomain(format!("pole {w} is not in the disk")));
        }
        Ok(Self::Disk { w })
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::Origin { domain } => domain.dim(),
            Self::Disk { .. } => 1,
        }
    }

    pub fn pole(&self) -> CPoint {
        match self {
            Self::Origin { domain } => CPoint::origin(domain.dim()),
            Self::Disk { w } => CPoint::scalar(*w).expect("pole is finite"),
        }
    }

    pub fn domain(&self) -> DomainSpec {
        match self {
            Self::Origin { domain } => domain.clone(),
            Self::Disk { .. } => DomainSpec::Disk,
        }
    }

    pub fn eval(&self, z: &CPoint) -> Result<GreenValue> {
        match self {
            Self::Origin { domain } => green_balanced(domain, z),
            Self::Disk { w } => {
                z.expect_dim(1)?;
                green_disk(*w, z.coords()[0])
            }
        }
    }

    /// `exp(g)` without the domain check; `None` outside the domain.
    fn exp_green_moduli(&self, z: &[Complex64], moduli: &mut [f64]) -> Option<f64> {
        match self {
            Self::Origin { domain } => {
                for (m, c) in moduli.iter_mut().zip(z) {
                    *m = c.norm();
                }
                let g = domain.canonical_gauge()?.eval_moduli(moduli);
                (g < 1.0).then_some(g)
            }
            Self::Disk { w } => (z[0].norm() < 1.0).then(|| mobius_modulus(*w, z[0])),
        }
    }

    /// Axis-aligned box (centre, half-width per coordinate) containing
    /// `{g < -a}`.
    fn sublevel_box(&self, a: f64) -> Result<Vec<(Complex64, f64)>> {
        let s = (-a).exp();
        match self {
            Self::Origin { domain } => {
                Ok(domain.bounding_radii()?.into_iter().map(|b| (Complex64::new(0.0, 0.0), s * b)).collect())
            }
            Self::Disk { w } => {
                let (centre, radius) = disk_sublevel_circle(*w, s);
                Ok(vec![(centre, radius * 1.05)])
            }
        }
    }
}

/// Centre and radius of `{ |(z - w) / (1 - conj(w) z)| < s }`.
fn disk_sublevel_circle(w: Complex64, s: f64) -> (Complex64, f64) {
    let w2 = w.norm_sqr();
    let denom = 1.0 - w2 * s * s;
    (w * (1.0 - s * s) / denom, s * (1.0 - w2) / denom)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SublevelEstimator {
    /// closed forms only
    Exact,
    /// `e^{-2Na} V(Ω)` with `V(Ω)` from sphere quadrature
    Quadrature,
    /// direct sampling of `{g < -a}` through the Green function
    MonteCarlo { samples: usize, seed: u64 },
}

/// `V_E({g < -a})`.
pub fn sublevel_volume(green: &GreenFunction, a: f64, estimator: &SublevelEstimator) -> Result<VolumeEstimate> {
    if !(a.is_finite() && a > 0.0) {
        return Err(Error::InvalidParameter(format!("depth must be positive, got {a}")));
    }
    let n = green.dim() as f64;
    match (estimator, green) {
        (SublevelEstimator::Exact, GreenFunction::Origin { domain }) => {
            Ok(volume(domain, VolumeMethod::Exact, 0, 0)?.scaled((-2.0 * n * a).exp()))
        }
        (SublevelEstimator::Quadrature, GreenFunction::Origin { domain }) => {
            Ok(best_volume(domain)?.scaled((-2.0 * n * a).exp()))
        }
        (SublevelEstimator::Exact, GreenFunction::Disk { w }) => {
            let (_, r) = disk_sublevel_circle(*w, (-a).exp());
            Ok(VolumeEstimate::exact(PI * r * r))
        }
        (SublevelEstimator::Quadrature, GreenFunction::Disk { .. }) => {
            Err(Error::Unsupported("quadrature sublevel volumes need a balanced domain with pole at 0".into()))
        }
        (SublevelEstimator::MonteCarlo { samples, seed }, _) => sublevel_monte_carlo(green, a, *samples, *seed),
    }
}

fn sublevel_monte_carlo(green: &GreenFunction, a: f64, samples: usize, seed: u64) -> Result<VolumeEstimate> {
    if samples == 0 {
        return Err(Error::InvalidParameter("sample count must be positive".into()));
    }
    let bounds = green.sublevel_box(a)?;
    let box_volume: f64 = bounds.iter().map(|(_, h)| 4.0 * h * h).product();
    let level = (-a).exp();
    let counts = map_chunks(samples, seed, |rng, len| {
        let mut z = vec![Complex64::new(0.0, 0.0); bounds.len()];
        let mut moduli = vec![0.0; bounds.len()];
        let mut inside = 0usize;
        for _ in 0..len {
            for (zj, (c, h)) in z.iter_mut().zip(&bounds) {
                *zj = c + Complex64::new(rng.random_range(-*h..*h), rng.random_range(-*h..*h));
            }
            if green.exp_green_moduli(&z, &mut moduli).is_some_and(|e| e < level) {
                inside += 1;
            }
        }
        inside
    });
    let inside: usize = counts.iter().sum();
    if inside == 0 {
        return Err(Error::ZeroVolume(format!("no samples landed in the sublevel set at depth {a}")));
    }
    let p = inside as f64 / samples as f64;
    Ok(VolumeEstimate {
        value: box_volume * p,
        std_error: box_volume * (p * (1.0 - p) / samples as f64).sqrt(),
        n_samples: samples,
        method: VolumeMethod::MonteCarlo,
        seed,
    })
}

/// Sublevel volumes at increasing depths and their rescalings `e^{2Na} V(a)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SublevelSeries {
    pub dim: usize,
    pub depths: Vec<f64>,
    pub volumes: Vec<VolumeEstimate>,
    pub scaled: Vec<f64>,
    pub scaled_errors: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticLimit {
    pub series: SublevelSeries,
    /// scaled value at the deepest level
    pub raw: f64,
    pub raw_error: f64,
    /// fit `L + C e^{-a}` through the last two depths
    pub extrapolated: f64,
    pub extrapolated_error: f64,
}

/// Limit of `e^{2Na} V({g < -a})` as `a -> inf`.
///
/// Monte Carlo depths draw from independent seeds derived from the
/// estimator's seed and the depth index.
pub fn asymptotic_limit(green: &GreenFunction, depths: &[f64], estimator: &SublevelEstimator) -> Result<AsymptoticLimit> {
    if depths.len() < 2 {
        return Err(Error::InvalidParameter("need at least two depths".into()));
    }
    if depths.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidParameter("depths must be strictly increasing".into()));
    }
    let n = green.dim();
    let mut volumes = Vec::with_capacity(depths.len());
    for (i, &a) in depths.iter().enumerate() {
        let est = match estimator {
            SublevelEstimator::MonteCarlo { samples, seed } => SublevelEstimator::MonteCarlo {
                samples: *samples,
                seed: derive_seed(*seed, &format!("depth-{i}")),
            },
            other => other.clone(),
        };
        volumes.push(sublevel_volume(green, a, &est)?);
    }
    let factors: Vec<f64> = depths.iter().map(|a| (2.0 * n as f64 * a).exp()).collect();
    let scaled: Vec<f64> = volumes.iter().zip(&factors).map(|(v, f)| f * v.value).collect();
    let scaled_errors: Vec<f64> = volumes.iter().zip(&factors).map(|(v, f)| f * v.std_error).collect();
    let k = depths.len() - 1;
    let q = (-(depths[k] - depths[k - 1])).exp();
    let extrapolated = (scaled[k] - q * scaled[k - 1]) / (1.0 - q);
    let extrapolated_error = (scaled_errors[k].powi(2) + (q * scaled_errors[k - 1]).powi(2)).sqrt() / (1.0 - q);
    Ok(AsymptoticLimit {
        raw: scaled[k],
        raw_error: scaled_errors[k],
        extrapolated,
        extrapolated_error,
        series: SublevelSeries { dim: n, depths: depths.to_vec(), volumes, scaled, scaled_errors },
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LowerBound {
    pub value: f64,
    pub std_error: f64,
}

/// `1 / (e^{2Na} V({g(z, .) < -a}))`, a lower bound for the kernel density at
/// the pole of any pseudoconvex domain.
pub fn blocki_lower_bound(green: &GreenFunction, a: f64, estimator: &SublevelEstimator) -> Result<LowerBound> {
    let v = sublevel_volume(green, a, estimator)?;
    if !(v.value > 0.0) {
        return Err(Error::ZeroVolume(format!("sublevel volume at depth {a} is {}", v.value)));
    }
    let denom = (2.0 * green.dim() as f64 * a).exp() * v.value;
    let value = 1.0 / denom;
    Ok(LowerBound { value, std_error: value * v.std_error / v.value })
}
