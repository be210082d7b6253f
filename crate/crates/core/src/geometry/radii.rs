use serde::{Deserialize, Serialize};

use super::domain::DomainSpec;
use super::gauge::GaugeExpr;
use crate::sampling::{map_chunks, unit_sphere};
use crate::{Error, Result};

/// Radii with `inner·B ⊂ Ω ⊂ outer·B`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SandwichRadii {
    pub inner: f64,
    pub outer: f64,
}

/// Extremes of the gauge on the unit sphere, from sampled directions plus
/// the coordinate axes and the diagonal, each refined by a local pattern
/// search over the coordinate moduli.
pub fn sandwich_radii(spec: &DomainSpec, n_directions: usize, seed: u64) -> Result<SandwichRadii> {
    if n_directions == 0 {
        return Err(Error::InvalidParameter("need at least one direction".into()));
    }
    let g = spec.require_gauge()?;
    let dim = spec.dim();
    let (max, min) = gauge_extremes(&g, dim, n_directions, seed)?;
    Ok(SandwichRadii { inner: 1.0 / max, outer: 1.0 / min })
}

/// Uniform directions on `S^{2N-1}`, returned as coordinate moduli.
pub fn sample_direction_moduli(dim: usize, n: usize, seed: u64) -> Vec<Vec<f64>> {
    map_chunks(n, seed, |rng, len| {
        let mut u = vec![0.0; 2 * dim];
        (0..len)
            .map(|_| {
                unit_sphere(rng, 2 * dim, &mut u);
                (0..dim).map(|j| u[2 * j].hypot(u[2 * j + 1])).collect::<Vec<f64>>()
            })
            .collect::<Vec<_>>()
    })
    .into_iter()
    .flatten()
    .collect()
}

fn gauge_extremes(g: &GaugeExpr, dim: usize, n: usize, seed: u64) -> Result<(f64, f64)> {
    let mut candidates: Vec<Vec<f64>> = (0..dim)
        .map(|j| {
            let mut e = vec![0.0; dim];
            e[j] = 1.0;
            e
        })
        .collect();
    candidates.push(vec![1.0 / (dim as f64).sqrt(); dim]);
    candidates.extend(sample_direction_moduli(dim, n, seed));

    let mut scored = Vec::with_capacity(candidates.len());
    for c in candidates {
        let m = g.eval_moduli(&c);
        if !(m.is_finite() && m > 0.0) {
            return Err(Error::InvalidGauge(format!("gauge is {m} on the unit direction {c:?}")));
        }
        scored.push((m, c));
    }
    scored.sort_by(|a, b| a.0.total_cmp(&b.0));
    const KEEP: usize = 4;
    let k = KEEP.min(scored.len());
    let max = scored[scored.len() - k..]
        .iter()
        .map(|(_, c)| refine(g, c.clone(), 1.0))
        .fold(f64::NEG_INFINITY, f64::max);
    let min = scored[..k].iter().map(|(_, c)| refine(g, c.clone(), -1.0)).fold(f64::INFINITY, f64::min);
    if !(min > 0.0) {
        return Err(Error::InvalidGauge("gauge vanishes on a unit direction".into()));
    }
    Ok((max, min))
}

/// Pattern search maximising `sign * m` on the positive orthant of the sphere.
fn refine(g: &GaugeExpr, mut x: Vec<f64>, sign: f64) -> f64 {
    let normalize = |v: &mut Vec<f64>| {
        let n = v.iter().map(|t| t * t).sum::<f64>().sqrt();
        v.iter_mut().for_each(|t| *t /= n);
    };
    let mut best = sign * g.eval_moduli(&x);
    let mut h = 0.1;
    let mut iters = 0;
    while h > 1e-13 && iters < 20_000 {
        iters += 1;
        let mut improved = false;
        for j in 0..x.len() {
            for step in [h, -h] {
                let mut y = x.clone();
                y[j] = (y[j] + step).max(0.0);
                if y.iter().all(|t| *t == 0.0) {
                    continue;
                }
                normalize(&mut y);
                let v = sign * g.eval_moduli(&y);
                if v > best {
                    best = v;
                    x = y;
                    improved = true;
                }
            }
        }
        if !improved {
            h *= 0.5;
        }
    }
    sign * best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_radii() {
        let r = sandwich_radii(&DomainSpec::Ball(2), 100, 1).unwrap();
        assert!((r.inner - 1.0).abs() < 1e-12 && (r.outer - 1.0).abs() < 1e-12);
        let r = sandwich_radii(&DomainSpec::Polydisc(vec![1.0, 1.0]), 100, 1).unwrap();
        assert!((r.inner - 1.0).abs() < 1e-12);
        assert!((r.outer - 2f64.sqrt()).abs() < 1e-12);
        let r = sandwich_radii(&DomainSpec::Ball(2).dilate(2.0).unwrap(), 100, 1).unwrap();
        assert!((r.inner - 2.0).abs() < 1e-12 && (r.outer - 2.0).abs() < 1e-12);
    }

    #[test]
    fn refinement_finds_interior_extremes() {
        // ellipsoid with semi-axes 1 and 3: radii are exactly the axes
        let spec = DomainSpec::Polydisc(vec![1.0, 3.0]);
        let r = sandwich_radii(&spec, 10, 2).unwrap();
        assert!((r.inner - 1.0).abs() < 1e-12);
        assert!((r.outer - 10f64.sqrt()).abs() < 1e-9, "{}", r.outer);
    }

    #[test]
    fn rejects_zero_directions() {
        assert!(sandwich_radii(&DomainSpec::Disk, 0, 1).is_err());
        assert!(sandwich_radii(&DomainSpec::HalfPlane, 10, 1).is_err());
    }
}
