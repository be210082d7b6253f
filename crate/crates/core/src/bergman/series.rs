use super::{KernelMethod, KernelValue};
use crate::geometry::{reinhardt_moments, CPoint, DomainSpec, DEFAULT_PANELS};
use crate::{Error, Result};

pub const DEFAULT_SERIES_DEGREE: usize = 20;

/// Multi-indices of total degree `0..=max_degree`, grouped by degree.
pub fn monomials(dim: usize, max_degree: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    for deg in 0..=max_degree {
        let mut current = vec![0u32; dim];
        push_compositions(deg as u32, 0, &mut current, &mut out);
    }
    out
}

fn push_compositions(remaining: u32, slot: usize, current: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if slot + 1 == current.len() {
        current[slot] = remaining;
        out.push(current.clone());
        return;
    }
    for k in (0..=remaining).rev() {
        current[slot] = k;
        push_compositions(remaining - k, slot + 1, current, out);
    }
    current[slot] = 0;
}

pub fn reinhardt_kernel(spec: &DomainSpec, z: &CPoint, max_degree: usize) -> Result<KernelValue> {
    reinhardt_kernel_with(spec, z, max_degree, DEFAULT_PANELS)
}

/// `sum_{|alpha| <= d} |z^alpha|^2 / c_alpha` with `c_alpha = ||z^alpha||^2`.
///
/// Monomials are orthogonal on Reinhardt domains, so the partial sums
/// increase to the kernel. `err_est` adds the last degree shell (tail
/// heuristic) to the propagated quadrature error of the norms.
pub fn reinhardt_kernel_with(spec: &DomainSpec, z: &CPoint, max_degree: usize, panels: usize) -> Result<KernelValue> {
    let gauge = spec
        .canonical_gauge()
        .ok_or_else(|| Error::NotReinhardt(format!("{} is not a bounded Reinhardt domain", spec.label())))?;
    spec.require_inside(z)?;
    let dim = spec.dim();
    let basis = monomials(dim, max_degree);
    let norms = reinhardt_moments(&gauge, dim, &basis, panels)?;
    let moduli = z.moduli();
    let mut density = 0.0;
    let mut last_shell = 0.0;
    let mut quad_err = 0.0;
    for (alpha, (c, dc)) in basis.iter().zip(&norms) {
        if !(c.is_finite() && *c > 0.0) {
            return Err(Error::Quadrature(format!("norm of z^{alpha:?} is {c}")));
        }
        let mut mono = 1.0;
        for (m, &k) in moduli.iter().zip(alpha) {
            mono *= m.powi(2 * k as i32);
        }
        let term = mono / c;
        density += term;
        quad_err += term * dc / c;
        if alpha.iter().sum::<u32>() as usize == max_degree {
            last_shell += term;
        }
    }
    let err_est = (last_shell + quad_err).max(density * f64::EPSILON);
    Ok(KernelValue { density, method: KernelMethod::ReinhardtSeries, degree: max_degree, err_est })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bergman::exact_kernel;
    use std::f64::consts::PI;

    #[test]
    fn monomial_enumeration() {
        assert_eq!(monomials(1, 3), vec![vec![0], vec![1], vec![2], vec![3]]);
        let m = monomials(2, 2);
        assert_eq!(m, vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![2, 0], vec![1, 1], vec![0, 2]]);
        assert_eq!(monomials(3, 4).len(), 35);
    }

    #[test]
    fn disk_series_against_monomial_oracle() {
        // orthonormal basis sqrt((k+1)/pi) z^k
        let z: f64 = 0.5;
        let oracle: f64 = (0..=12).map(|k| (k as f64 + 1.0) / PI * z.powi(2 * k)).sum();
        let k = reinhardt_kernel(&DomainSpec::Disk, &CPoint::real(&[z]).unwrap(), 12).unwrap();
        assert!((k.density - oracle).abs() < 1e-12);
        assert!((k.density - 1.0 / (PI * 0.5625)).abs() < 1e-4);
        let k0 = reinhardt_kernel(&DomainSpec::Disk, &CPoint::origin(1), 0).unwrap();
        assert!((k0.density - 1.0 / PI).abs() < 1e-14);
    }

    #[test]
    fn origin_of_polydisc_for_any_degree() {
        for d in [0, 3, 9] {
            let k = reinhardt_kernel(&DomainSpec::Polydisc(vec![1.0, 1.0]), &CPoint::origin(2), d).unwrap();
            assert!((k.density - 1.0 / (PI * PI)).abs() < 1e-13);
        }
    }

    #[test]
    fn ball_series_converges_to_closed_form() {
        let z = CPoint::real(&[0.3, 0.2]).unwrap();
        let exact = exact_kernel(&DomainSpec::Ball(2), &z).unwrap().density;
        let k = reinhardt_kernel(&DomainSpec::Ball(2), &z, 14).unwrap();
        assert!((k.density - exact).abs() < 1e-4f64.max(k.err_est));
        assert!(k.density <= exact * (1.0 + 1e-12));
    }

    #[test]
    fn half_plane_is_not_reinhardt() {
        let z = CPoint::scalar(num_complex::Complex64::new(0.0, 1.0)).unwrap();
        assert!(matches!(reinhardt_kernel(&DomainSpec::HalfPlane, &z, 3), Err(Error::NotReinhardt(_))));
    }
}
