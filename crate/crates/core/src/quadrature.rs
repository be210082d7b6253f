//! Gauss-Legendre rules and a tensor rule on the positive orthant of the
//! unit sphere, used to integrate Reinhardt-symmetric integrands.

use std::f64::consts::FRAC_PI_2;

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n > 0);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        dp = if d != 0.0 { d } else { dp };
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Composite Gauss-Legendre rule on `[a, b]` with `panels` equal panels.
pub fn composite(a: f64, b: f64, panels: usize, order: usize) -> Vec<(f64, f64)> {
    let (x, w) = gauss_legendre(order);
    let h = (b - a) / panels as f64;
    let mut out = Vec::with_capacity(panels * order);
    for p in 0..panels {
        let mid = a + (p as f64 + 0.5) * h;
        for (xi, wi) in x.iter().zip(&w) {
            out.push((mid + 0.5 * h * xi, 0.5 * h * wi));
        }
    }
    out
}

/// Nodes `theta` on `S^{n-1} ∩ R^n_+` with weights for surface measure.
#[derive(Clone, Debug)]
pub struct OrthantRule {
    pub dim: usize,
    pub points: Vec<Vec<f64>>,
    pub weights: Vec<f64>,
}

pub const ORTHANT_ORDER: usize = 8;

impl OrthantRule {
    /// Tensor rule in hyperspherical angles `phi_1..phi_{n-1}` in `[0, pi/2]`.
    /// For `n = 1` the orthant is the single point `1` with unit weight.
    pub fn new(dim: usize, panels: usize) -> Self {
        Self::with_order(dim, panels, ORTHANT_ORDER)
    }

    pub fn with_order(dim: usize, panels: usize, order: usize) -> Self {
        assert!(dim >= 1 && panels >= 1);
        if dim == 1 {
            return Self { dim, points: vec![vec![1.0]], weights: vec![1.0] };
        }
        let line = composite(0.0, FRAC_PI_2, panels, order);
        let mut points = vec![Vec::with_capacity(dim)];
        let mut weights = vec![1.0];
        // running product of sines for each partial node
        let mut sines = vec![1.0];
        for axis in 0..dim - 1 {
            let exponent = (dim - 2 - axis) as i32;
            let mut np = Vec::with_capacity(points.len() * line.len());
            let mut nw = Vec::with_capacity(np.capacity());
            let mut ns = Vec::with_capacity(np.capacity());
            for ((pt, w), s) in points.iter().zip(&weights).zip(&sines) {
                for &(phi, wphi) in &line {
                    let (sp, cp) = phi.sin_cos();
                    let mut q: Vec<f64> = pt.clone();
                    q.push(s * cp);
                    np.push(q);
                    nw.push(w * wphi * sp.powi(exponent));
                    ns.push(s * sp);
                }
            }
            points = np;
            weights = nw;
            sines = ns;
        }
        for (pt, s) in points.iter_mut().zip(&sines) {
            pt.push(*s);
        }
        Self { dim, points, weights }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }
}

/// Panels per angle keeping the tensor rule near two million nodes.
pub fn default_panels(dim: usize) -> usize {
    match dim {
        0 | 1 => 1,
        2 => 512,
        3 => 96,
        _ => {
            let per_axis = (2.0e6f64).powf(1.0 / (dim - 1) as f64) / ORTHANT_ORDER as f64;
            per_axis.floor().max(1.0) as usize
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_integrates_polynomials_exactly() {
        for n in 1..12 {
            let (x, w) = gauss_legendre(n);
            for deg in 0..2 * n {
                let q: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg as i32)).sum();
                let exact = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
                assert!((q - exact).abs() < 1e-13, "n={n} deg={deg}");
            }
        }
    }

    #[test]
    fn orthant_rule_measures_sphere_fraction() {
        // area of S^{n-1} is n * eps_n; the positive orthant holds 2^-n of it
        for (dim, total) in [(2usize, 2.0 * std::f64::consts::PI), (3, 4.0 * std::f64::consts::PI)] {
            let rule = OrthantRule::new(dim, 4);
            let area: f64 = rule.weights.iter().sum();
            assert!((area - total / 2f64.powi(dim as i32)).abs() < 1e-12);
            for p in &rule.points {
                let n: f64 = p.iter().map(|x| x * x).sum();
                assert!((n - 1.0).abs() < 1e-14);
                assert!(p.iter().all(|&x| x >= 0.0));
            }
        }
    }
}

const GK_NODES: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const GK_WEIGHTS: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
// Gauss weights for the odd-indexed Kronrod nodes 1, 3, 5, 7
const G7_WEIGHTS: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Value and error estimate of a vector-valued integral.
#[derive(Clone, Debug)]
pub struct VecIntegral {
    pub value: Vec<f64>,
    pub error: Vec<f64>,
}

struct Panel {
    a: f64,
    b: f64,
    value: Vec<f64>,
    error: Vec<f64>,
}

fn gk15<F>(f: &mut F, a: f64, b: f64, len: usize) -> Panel
where
    F: FnMut(f64) -> VecIntegral,
{
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut kron = vec![0.0; len];
    let mut gauss = vec![0.0; len];
    let mut inner_err = vec![0.0; len];
    let mut add = |x: f64, wk: f64, wg: f64, kron: &mut Vec<f64>, gauss: &mut Vec<f64>| {
        let r = f(x);
        for i in 0..len {
            kron[i] += wk * r.value[i];
            gauss[i] += wg * r.value[i];
            inner_err[i] += wk * r.error[i];
        }
    };
    for (k, (&x, &wk)) in GK_NODES.iter().zip(&GK_WEIGHTS).enumerate() {
        let wg = if k % 2 == 1 { G7_WEIGHTS[k / 2] } else { 0.0 };
        if x == 0.0 {
            add(c, wk, wg, &mut kron, &mut gauss);
        } else {
            add(c - h * x, wk, wg, &mut kron, &mut gauss);
            add(c + h * x, wk, wg, &mut kron, &mut gauss);
        }
    }
    let value: Vec<f64> = kron.iter().map(|k| k * h).collect();
    let error = kron
        .iter()
        .zip(&gauss)
        .zip(&inner_err)
        .map(|((k, g), e)| ((k - g) * h).abs() + e * h.abs())
        .collect();
    Panel { a, b, value, error }
}

/// Globally adaptive Gauss-Kronrod (7/15) quadrature of a vector-valued
/// integrand on `[a, b]`, starting from `panels` equal panels and bisecting
/// the worst panel until every component's error is below `rel_tol` times
/// its magnitude or `max_panels` is reached. Integrand errors (from nested
/// integrals) are carried into the estimate.
pub fn adaptive_vec<F>(mut f: F, a: f64, b: f64, len: usize, panels: usize, rel_tol: f64, max_panels: usize) -> VecIntegral
where
    F: FnMut(f64) -> VecIntegral,
{
    let h = (b - a) / panels.max(1) as f64;
    let mut list: Vec<Panel> = (0..panels.max(1))
        .map(|i| gk15(&mut f, a + i as f64 * h, a + (i + 1) as f64 * h, len))
        .collect();
    loop {
        let mut total = vec![0.0; len];
        let mut err = vec![0.0; len];
        for p in &list {
            for i in 0..len {
                total[i] += p.value[i];
                err[i] += p.error[i];
            }
        }
        let scale: Vec<f64> = total.iter().map(|t| t.abs().max(f64::MIN_POSITIVE)).collect();
        let converged = err.iter().zip(&scale).all(|(e, s)| *e <= rel_tol * s);
        if converged || list.len() >= max_panels {
            return VecIntegral { value: total, error: err };
        }
        let worst = list
            .iter()
            .enumerate()
            .map(|(k, p)| (k, p.error.iter().zip(&scale).map(|(e, s)| e / s).fold(0.0, f64::max)))
            .max_by(|x, y| x.1.total_cmp(&y.1))
            .map(|(k, _)| k)
            .expect("panel list is never empty");
        let p = list.swap_remove(worst);
        let mid = 0.5 * (p.a + p.b);
        list.push(gk15(&mut f, p.a, mid, len));
        list.push(gk15(&mut f, mid, p.b, len));
    }
}
