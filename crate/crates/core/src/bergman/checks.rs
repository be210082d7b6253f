use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{exact_kernel, kernel, KernelRequest};
use crate::geometry::{sample_direction_moduli, CPoint, DomainSpec};
use crate::verifier::report::{CheckReport, MarginScale, ReportBuilder};
use crate::{Error, Result};

/// Biholomorphisms between named models with closed-form Jacobians.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "map", rename_all = "snake_case")]
pub enum NamedMap {
    Identity { domain: DomainSpec },
    /// `z -> e^{i rotation} (z + a) / (1 + conj(a) z)` on the disk
    DiskAutomorphism { a: Complex64, rotation: f64 },
    /// `z -> i (1 + z) / (1 - z)`, disk onto the upper half-plane
    Cayley,
    /// `z -> factor * z`, `Ω` onto `factor * Ω`
    Scaling { domain: DomainSpec, factor: f64 },
    /// `z_j -> e^{i phases_j} z_j`
    Rotation { domain: DomainSpec, phases: Vec<f64> },
}

impl NamedMap {
    pub fn source(&self) -> DomainSpec {
        match self {
            Self::Identity { domain } | Self::Scaling { domain, .. } | Self::Rotation { domain, .. } => domain.clone(),
            Self::DiskAutomorphism { .. } | Self::Cayley => DomainSpec::Disk,
        }
    }

    pub fn target(&self) -> Result<DomainSpec> {
        match self {
            Self::Identity { domain } | Self::Rotation { domain, .. } => Ok(domain.clone()),
            Self::Scaling { domain, factor } => domain.dilate(*factor),
            Self::DiskAutomorphism { a, .. } => {
                if a.norm() >= 1.0 {
                    return Err(Error::InvalidParameter(format!("automorphism parameter {a} is not in the disk")));
                }
                Ok(DomainSpec::Disk)
            }
            Self::Cayley => Ok(DomainSpec::HalfPlane),
        }
    }

    pub fn apply(&self, z: &CPoint) -> Result<CPoint> {
        match self {
            Self::Identity { .. } => Ok(z.clone()),
            Self::Scaling { factor, .. } => Ok(z.scale(Complex64::new(*factor, 0.0))),
            Self::Rotation { phases, .. } => {
                z.expect_dim(phases.len())?;
                CPoint::new(z.coords().iter().zip(phases).map(|(c, t)| c * Complex64::from_polar(1.0, *t)).collect())
            }
            Self::DiskAutomorphism { a, rotation } => {
                let w = z.coords()[0];
                CPoint::scalar(Complex64::from_polar(1.0, *rotation) * (w + a) / (1.0 + a.conj() * w))
            }
            Self::Cayley => {
                let w = z.coords()[0];
                CPoint::scalar(Complex64::i() * (1.0 + w) / (1.0 - w))
            }
        }
    }

    /// Complex Jacobian determinant at `z`.
    pub fn jacobian_det(&self, z: &CPoint) -> Complex64 {
        match self {
            Self::Identity { .. } => Complex64::new(1.0, 0.0),
            Self::Scaling { factor, .. } => Complex64::new(factor.powi(z.dim() as i32), 0.0),
            Self::Rotation { phases, .. } => Complex64::from_polar(1.0, phases.iter().sum()),
            Self::DiskAutomorphism { a, rotation } => {
                let w = z.coords()[0];
                let d = 1.0 + a.conj() * w;
                Complex64::from_polar(1.0, *rotation) * (1.0 - a.norm_sqr()) / (d * d)
            }
            Self::Cayley => {
                let w = z.coords()[0];
                2.0 * Complex64::i() / ((1.0 - w) * (1.0 - w))
            }
        }
    }
}

/// `K_target(F(z)) |det F'(z)|^2` against `K_source(z)`, both in closed form.
pub fn transformation_check(map: &NamedMap, z: &CPoint, tolerance: f64) -> Result<CheckReport> {
    let source = map.source();
    source.require_inside(z)?;
    let target = map.target()?;
    let fz = map.apply(z)?;
    let k_source = exact_kernel(&source, z)?.density;
    let k_target = exact_kernel(&target, &fz)?.density;
    let jac = map.jacobian_det(z).norm_sqr();
    Ok(ReportBuilder::new(
        "transformation_law",
        "Bergman kernel density transforms by |det F'|^2 under biholomorphisms",
        MarginScale::Relative,
        tolerance,
    )
    .input("map", map)
    .input("point", z)
    .quantity("pulled_back_kernel", k_target * jac, 0.0)
    .quantity("source_kernel", k_source, 0.0)
    .eq("transformation_law", "pulled_back_kernel", "source_kernel")
    .finish(0))
}

/// Directions used to certify `inner ⊂ outer` through the gauges.
pub const CONTAINMENT_DIRECTIONS: usize = 10_000;

/// Certifies `inner ⊂ outer` by `m_outer <= m_inner` on the coordinate axes,
/// the diagonal and sampled directions (balanced specs are determined by
/// their gauge on the sphere).
pub fn certify_containment(inner: &DomainSpec, outer: &DomainSpec, seed: u64) -> Result<()> {
    if inner == outer {
        return Ok(());
    }
    if inner.dim() != outer.dim() {
        return Err(Error::DimensionMismatch { expected: outer.dim(), found: inner.dim() });
    }
    let (gi, go) = match (inner.canonical_gauge(), outer.canonical_gauge()) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(Error::Containment("only balanced domains can be compared".into())),
    };
    let dim = inner.dim();
    let mut dirs: Vec<Vec<f64>> = (0..dim)
        .map(|j| {
            let mut e = vec![0.0; dim];
            e[j] = 1.0;
            e
        })
        .collect();
    dirs.push(vec![1.0 / (dim as f64).sqrt(); dim]);
    dirs.extend(sample_direction_moduli(dim, CONTAINMENT_DIRECTIONS, seed));
    for u in &dirs {
        let (mi, mo) = (gi.eval_moduli(u), go.eval_moduli(u));
        if mo > mi * (1.0 + 1e-12) {
            return Err(Error::Containment(format!(
                "direction {u:?}: outer gauge {mo} exceeds inner gauge {mi}"
            )));
        }
    }
    Ok(())
}

/// `K_outer(z) <= K_inner(z)` for `inner ⊂ outer`.
pub fn monotonicity_check(
    inner: &DomainSpec,
    outer: &DomainSpec,
    z: &CPoint,
    request: &KernelRequest,
    seed: u64,
    tolerance: f64,
) -> Result<CheckReport> {
    certify_containment(inner, outer, seed)?;
    inner.require_inside(z)?;
    let ki = kernel(inner, z, request)?;
    let ko = kernel(outer, z, request)?;
    let mut b = ReportBuilder::new(
        "monotonicity",
        "Bergman kernel density decreases as the domain grows",
        MarginScale::Relative,
        tolerance,
    )
    .input("inner", inner)
    .input("outer", outer)
    .input("point", z)
    .quantity("outer_kernel", ko.density, ko.err_est)
    .quantity("inner_kernel", ki.density, ki.err_est)
    .le("monotonicity", "outer_kernel", "inner_kernel");
    if b.has_uncertainty() {
        b.set_scale(MarginScale::Sigma, 3.0);
    }
    Ok(b.finish(seed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn disk_automorphism_and_cayley() {
        let auto = NamedMap::DiskAutomorphism { a: Complex64::new(0.5, 0.0), rotation: 0.0 };
        assert_eq!(auto.apply(&CPoint::origin(1)).unwrap().coords()[0], Complex64::new(0.5, 0.0));
        let r = transformation_check(&auto, &CPoint::origin(1), 1e-12).unwrap();
        assert!(r.passed, "{r:?}");
        let r = transformation_check(&NamedMap::Cayley, &CPoint::origin(1), 1e-12).unwrap();
        assert!(r.passed);
        let z = CPoint::scalar(Complex64::new(0.3, -0.5)).unwrap();
        let r = transformation_check(&NamedMap::Identity { domain: DomainSpec::Disk }, &z, 0.0).unwrap();
        assert!(r.passed);
        assert_eq!(r.margins[0].value, 0.0);
        assert!(transformation_check(&NamedMap::Cayley, &CPoint::real(&[1.5]).unwrap(), 1e-12).is_err());
    }

    #[test]
    fn scaling_and_rotation_maps() {
        let z = CPoint::real(&[0.2, 0.1]).unwrap();
        let m = NamedMap::Scaling { domain: DomainSpec::Ball(2), factor: 2.5 };
        assert!(transformation_check(&m, &z, 1e-12).unwrap().passed);
        let m = NamedMap::Rotation { domain: DomainSpec::Ball(2), phases: vec![0.3, -1.1] };
        assert!(transformation_check(&m, &z, 1e-12).unwrap().passed);
    }

    #[test]
    fn monotonicity_examples() {
        let inner = DomainSpec::Disk.dilate(0.5).unwrap();
        let r = monotonicity_check(&inner, &DomainSpec::Disk, &CPoint::origin(1), &KernelRequest::Exact, 1, 1e-12).unwrap();
        assert!(r.passed);
        assert!((r.quantity("inner_kernel").unwrap().value - 4.0 / PI).abs() < 1e-14);
        let poly = DomainSpec::Polydisc(vec![1.0, 1.0]);
        let outer = poly.dilate(2.0).unwrap();
        let r = monotonicity_check(&poly, &outer, &CPoint::origin(2), &KernelRequest::Exact, 1, 1e-12).unwrap();
        assert!((r.quantity("outer_kernel").unwrap().value - 1.0 / (16.0 * PI * PI)).abs() < 1e-15);
        assert!(r.passed);
        assert!(matches!(
            monotonicity_check(&outer, &poly, &CPoint::origin(2), &KernelRequest::Exact, 1, 1e-12),
            Err(Error::Containment(_))
        ));
    }
}
