//! Bergman kernel from a finite monomial basis: assemble the Gram matrix of
//! the basis in `L^2(Ω)`, take its Cholesky factor `G = L L*`, and evaluate
//! `sum_k |phi_k(z)|^2` for the orthonormal family `phi = L^{-1} (z^alpha)`.
//!
//! The finite basis spans a subspace, so the result approximates the kernel
//! from below up to the assembly error.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::series::monomials;
use super::{KernelMethod, KernelValue};
use crate::geometry::{CPoint, DomainSpec};
use crate::quadrature::{gauss_legendre, OrthantRule};
use crate::sampling::map_chunks;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GramQuadrature {
    /// Uniform samples in the certified bounding polydisc.
    MonteCarlo { samples: usize, seed: u64 },
    /// Tensor rule: orthant-sphere angles x radial Gauss x torus trapezoid.
    Tensor { panels: usize },
}

/// Relative pivot below which a basis element is numerically dependent on
/// the ones before it.
const PIVOT_TOL: f64 = 1e-10;

#[derive(Clone, Debug)]
pub struct GramFactor {
    dim: usize,
    max_degree: usize,
    basis: Vec<Vec<u32>>,
    /// `1 / sqrt(G_kk)`; the factor is of the unit-diagonal matrix `D G D`.
    scales: Vec<f64>,
    /// row-major lower triangle
    lower: Vec<Complex64>,
    /// relative standard error of each diagonal entry
    diag_rel_err: Vec<f64>,
}

impl GramFactor {
    pub fn build(spec: &DomainSpec, max_degree: usize, quadrature: &GramQuadrature) -> Result<Self> {
        if !spec.is_bounded() {
            return Err(Error::Unbounded);
        }
        let dim = spec.dim();
        let basis = monomials(dim, max_degree);
        let (gram, diag_rel_err) = match quadrature {
            GramQuadrature::MonteCarlo { samples, seed } => assemble_monte_carlo(spec, &basis, *samples, *seed)?,
            GramQuadrature::Tensor { panels } => {
                let fine = assemble_tensor(spec, &basis, max_degree, (*panels).max(1))?;
                let coarse = assemble_tensor(spec, &basis, max_degree, (*panels / 2).max(1))?;
                let n = basis.len();
                let rel = (0..n)
                    .map(|k| {
                        let f = fine[k * n + k].re;
                        ((f - coarse[k * n + k].re) / f).abs().max(f64::EPSILON)
                    })
                    .collect();
                (fine, rel)
            }
        };
        let n = basis.len();
        let mut scales = Vec::with_capacity(n);
        for k in 0..n {
            let d = gram[k * n + k].re;
            if !(d.is_finite() && d > 0.0) {
                return Err(singular(max_degree, &basis[k]));
            }
            scales.push(1.0 / d.sqrt());
        }
        let lower = cholesky(&gram, &scales, n).map_err(|k| singular(max_degree, &basis[k]))?;
        Ok(Self { dim, max_degree, basis, scales, lower, diag_rel_err })
    }

    pub fn basis(&self) -> &[Vec<u32>] {
        &self.basis
    }

    /// `sum_k |phi_k(z)|^2` with error from the assembly and the last degree shell.
    pub fn evaluate(&self, z: &CPoint) -> Result<KernelValue> {
        z.expect_dim(self.dim)?;
        let n = self.basis.len();
        let mut phi = Vec::with_capacity(n);
        for k in 0..n {
            let mut v = monomial(z.coords(), &self.basis[k]) * self.scales[k];
            for j in 0..k {
                v -= self.lower[k * n + j] * phi[j];
            }
            phi.push(v / self.lower[k * n + k]);
        }
        let mut density = 0.0;
        let mut sampling = 0.0;
        let mut last_shell = 0.0;
        for (k, p) in phi.iter().enumerate() {
            let w = p.norm_sqr();
            density += w;
            sampling += w * self.diag_rel_err[k];
            if self.basis[k].iter().sum::<u32>() as usize == self.max_degree {
                last_shell += w;
            }
        }
        let err_est = (sampling + last_shell).max(density * f64::EPSILON);
        Ok(KernelValue { density, method: KernelMethod::Gram, degree: self.max_degree, err_est })
    }
}

pub fn gram_kernel(spec: &DomainSpec, z: &CPoint, max_degree: usize, quadrature: &GramQuadrature) -> Result<KernelValue> {
    spec.require_inside(z)?;
    GramFactor::build(spec, max_degree, quadrature)?.evaluate(z)
}

fn singular(requested: usize, alpha: &[u32]) -> Error {
    let failed = alpha.iter().sum::<u32>() as usize;
    Error::SingularGram { requested, failed_degree: failed, usable: failed.checked_sub(1) }
}

fn monomial(z: &[Complex64], alpha: &[u32]) -> Complex64 {
    let mut v = Complex64::new(1.0, 0.0);
    for (c, &k) in z.iter().zip(alpha) {
        v *= c.powu(k);
    }
    v
}

/// Cholesky factor of `D G D`; on failure returns the index of the first
/// dependent basis element.
fn cholesky(gram: &[Complex64], scales: &[f64], n: usize) -> std::result::Result<Vec<Complex64>, usize> {
    let mut l = vec![Complex64::new(0.0, 0.0); n * n];
    for k in 0..n {
        for j in 0..=k {
            let a = gram[k * n + j] * scales[k] * scales[j];
            let mut s = a;
            for i in 0..j {
                s -= l[k * n + i] * l[j * n + i].conj();
            }
            if j == k {
                let d = s.re;
                if !(d > PIVOT_TOL) {
                    return Err(k);
                }
                l[k * n + k] = Complex64::new(d.sqrt(), 0.0);
            } else {
                l[k * n + j] = s / l[j * n + j];
            }
        }
    }
    Ok(l)
}

struct Accum {
    gram: Vec<Complex64>,
    diag_sq: Vec<f64>,
}

/// Full Hermitian Gram matrix (row-major) and relative standard errors of
/// its diagonal.
fn assemble_monte_carlo(spec: &DomainSpec, basis: &[Vec<u32>], samples: usize, seed: u64) -> Result<(Vec<Complex64>, Vec<f64>)> {
    if samples == 0 {
        return Err(Error::InvalidParameter("sample count must be positive".into()));
    }
    let gauge = spec.require_gauge()?;
    let half = spec.bounding_radii()?;
    let dim = half.len();
    let n = basis.len();
    let box_volume: f64 = half.iter().map(|b| 4.0 * b * b).product();
    let parts = map_chunks(samples, seed, |rng, len| {
        let mut acc = Accum { gram: vec![Complex64::new(0.0, 0.0); n * n], diag_sq: vec![0.0; n] };
        let mut z = vec![Complex64::new(0.0, 0.0); dim];
        let mut moduli = vec![0.0; dim];
        let mut v = vec![Complex64::new(0.0, 0.0); n];
        for _ in 0..len {
            for j in 0..dim {
                let b = half[j];
                z[j] = Complex64::new(rng.random_range(-b..b), rng.random_range(-b..b));
                moduli[j] = z[j].norm();
            }
            if gauge.eval_moduli(&moduli) >= 1.0 {
                continue;
            }
            for (vk, alpha) in v.iter_mut().zip(basis) {
                *vk = monomial(&z, alpha);
            }
            for k in 0..n {
                let vk = v[k];
                let row = &mut acc.gram[k * n..k * n + k + 1];
                for (g, vj) in row.iter_mut().zip(&v) {
                    *g += vk * vj.conj();
                }
                let d = vk.norm_sqr();
                acc.diag_sq[k] += d * d;
            }
        }
        acc
    });
    let mut gram = vec![Complex64::new(0.0, 0.0); n * n];
    let mut diag_sq = vec![0.0; n];
    for part in parts {
        for (g, p) in gram.iter_mut().zip(&part.gram) {
            *g += p;
        }
        for (d, p) in diag_sq.iter_mut().zip(&part.diag_sq) {
            *d += p;
        }
    }
    let nf = samples as f64;
    let mut rel = Vec::with_capacity(n);
    for k in 0..n {
        let mean = gram[k * n + k].re / nf;
        let var = (diag_sq[k] / nf - mean * mean).max(0.0) / nf;
        rel.push(if mean > 0.0 { var.sqrt() / mean } else { f64::INFINITY });
    }
    for k in 0..n {
        for j in 0..=k {
            let g = gram[k * n + j] * (box_volume / nf);
            gram[k * n + j] = g;
            gram[j * n + k] = g.conj();
        }
    }
    Ok((gram, rel))
}

/// Tensor quadrature in coordinates `z_j = s theta_j e^{i t_j}` where
/// `dV = s^(2N-1) prod theta_j ds dsigma(theta) dt`. The radial rule is exact
/// for the polynomial degrees that occur and the torus trapezoid rule with
/// `d + 1` points per angle integrates the characters `e^{i(alpha-beta)t}`
/// exactly.
fn assemble_tensor(spec: &DomainSpec, basis: &[Vec<u32>], max_degree: usize, panels: usize) -> Result<Vec<Complex64>> {
    let gauge = spec.require_gauge()?;
    let dim = spec.dim();
    let n = basis.len();
    let rule = OrthantRule::new(dim, panels);
    let (rx, rw) = gauss_legendre(max_degree + dim);
    let phases = max_degree + 1;
    let n_torus = phases.pow(dim as u32);
    let torus_weight = (2.0 * PI / phases as f64).powi(dim as i32);
    let mut gram = vec![Complex64::new(0.0, 0.0); n * n];
    let mut z = vec![Complex64::new(0.0, 0.0); dim];
    let mut v = vec![Complex64::new(0.0, 0.0); n];
    for (theta, w_theta) in rule.points.iter().zip(&rule.weights) {
        let m = gauge.eval_moduli(theta);
        if !(m.is_finite() && m > 0.0) {
            return Err(Error::Quadrature(format!("gauge is {m} at {theta:?}")));
        }
        let s_max = 1.0 / m;
        let theta_prod: f64 = theta.iter().product();
        for (x, wr) in rx.iter().zip(&rw) {
            let s = 0.5 * s_max * (x + 1.0);
            let w_base = w_theta * 0.5 * s_max * wr * s.powi(2 * dim as i32 - 1) * theta_prod * torus_weight;
            for t in 0..n_torus {
                let mut idx = t;
                for j in 0..dim {
                    let angle = 2.0 * PI * (idx % phases) as f64 / phases as f64;
                    idx /= phases;
                    z[j] = Complex64::from_polar(s * theta[j], angle);
                }
                for (vk, alpha) in v.iter_mut().zip(basis) {
                    *vk = monomial(&z, alpha);
                }
                for k in 0..n {
                    for j in 0..=k {
                        gram[k * n + j] += v[k] * v[j].conj() * w_base;
                    }
                }
            }
        }
    }
    for k in 0..n {
        for j in 0..k {
            gram[j * n + k] = gram[k * n + j].conj();
        }
    }
    Ok(gram)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bergman::{exact_kernel, reinhardt_kernel};

    #[test]
    fn tensor_gram_matches_series_on_the_ball() {
        let spec = DomainSpec::Ball(2);
        let z = CPoint::real(&[0.3, 0.1]).unwrap();
        let g = gram_kernel(&spec, &z, 6, &GramQuadrature::Tensor { panels: 16 }).unwrap();
        let s = reinhardt_kernel(&spec, &z, 6).unwrap();
        assert!((g.density / s.density - 1.0).abs() < 1e-9, "{} vs {}", g.density, s.density);
    }

    #[test]
    fn monte_carlo_gram_on_the_disk_origin() {
        let spec = DomainSpec::Disk;
        let q = GramQuadrature::MonteCarlo { samples: 1_000_000, seed: 17 };
        let k = gram_kernel(&spec, &CPoint::origin(1), 6, &q).unwrap();
        assert!((k.density * std::f64::consts::PI - 1.0).abs() < 0.02, "{}", k.density);
        assert!(k.err_est > 0.0);
    }

    #[test]
    fn factor_is_reusable_across_points() {
        let spec = DomainSpec::Polydisc(vec![1.0, 1.0]);
        let f = GramFactor::build(&spec, 5, &GramQuadrature::Tensor { panels: 8 }).unwrap();
        for x in [0.0, 0.2, 0.4] {
            let z = CPoint::real(&[x, 0.1]).unwrap();
            let k = f.evaluate(&z).unwrap();
            let e = exact_kernel(&spec, &z).unwrap();
            assert!(k.density <= e.density * (1.0 + 1e-9));
            assert!((k.density - e.density).abs() <= k.err_est.max(1e-3 * e.density) * 3.0);
        }
    }

    #[test]
    fn too_few_samples_reports_usable_degree() {
        let q = GramQuadrature::MonteCarlo { samples: 4, seed: 1 };
        match GramFactor::build(&DomainSpec::Disk, 8, &q) {
            Err(Error::SingularGram { requested: 8, failed_degree, usable }) => {
                assert!(failed_degree <= 8);
                assert_eq!(usable, failed_degree.checked_sub(1));
            }
            other => panic!("expected singular Gram, got {other:?}"),
        }
    }
}
