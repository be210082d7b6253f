use std::f64::consts::PI;

use super::KernelValue;
use crate::geometry::{CPoint, DomainSpec};
use crate::special::gamma;
use crate::{Error, Result};

/// Closed-form kernel densities for the named models and for balanced specs
/// recognised as polydiscs, ellipsoids or discs.
pub fn exact_kernel(spec: &DomainSpec, z: &CPoint) -> Result<KernelValue> {
    spec.require_inside(z)?;
    density(spec, z).map(KernelValue::exact)
}

fn density(spec: &DomainSpec, z: &CPoint) -> Result<f64> {
    match spec {
        DomainSpec::HalfPlane => {
            let y = z.coords()[0].im;
            Ok(1.0 / (4.0 * PI * y * y))
        }
        DomainSpec::Product(a, b) => {
            let (za, zb) = z.split_at(a.dim());
            Ok(density(a, &za)? * density(b, &zb)?)
        }
        _ => {
            let ball = spec
                .lp_ball()
                .ok_or_else(|| Error::Unsupported(format!("no closed-form kernel for {}", spec.label())))?;
            let n = ball.radii.len();
            let scaled: Vec<f64> = z.moduli().iter().zip(&ball.radii).map(|(m, r)| m / r).collect();
            let area: f64 = ball.radii.iter().map(|r| r * r).product();
            match ball.p {
                _ if n == 1 => Ok(disk(scaled[0]) / area),
                None => Ok(scaled.iter().map(|&t| disk(t)).product::<f64>() / area),
                Some(p) if p == 2.0 => {
                    let s: f64 = scaled.iter().map(|t| t * t).sum();
                    let nf = n as f64;
                    Ok(gamma(nf + 1.0) / (PI.powi(n as i32) * area) * (1.0 - s).powf(-(nf + 1.0)))
                }
                Some(p) => Err(Error::Unsupported(format!("no closed-form kernel for the l^{p} ball"))),
            }
        }
    }
}

fn disk(t: f64) -> f64 {
    let d = 1.0 - t * t;
    1.0 / (PI * d * d)
}
