//! Minkowski gauges of balanced Reinhardt domains as a closed expression tree.
//!
//! Every leaf is `|z_j| / r_j`, so a gauge is a function of the moduli
//! `(|z_1|, ..., |z_N|)` only. The combinators (weighted p-norms with
//! `p >= 1`, max, weighted geometric means, positive scalings) keep the
//! result positively homogeneous of degree one and keep `log m`
//! plurisubharmonic.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case", deny_unknown_fields)]
pub enum GaugeExpr {
    /// `|z_coord| / radius`
    Leaf { coord: usize, radius: f64 },
    /// `(sum_i w_i t_i^p)^(1/p)`
    Pnorm { p: f64, weights: Vec<f64>, terms: Vec<GaugeExpr> },
    Max { terms: Vec<GaugeExpr> },
    /// `prod_i t_i^(w_i)` with `sum_i w_i = 1`
    Geomean { weights: Vec<f64>, terms: Vec<GaugeExpr> },
    Scale { factor: f64, term: Box<GaugeExpr> },
}

/// A gauge recognised as the weighted complex `l^p` ball
/// `{ sum_j (|z_j| / r_j)^p < 1 }` (`p = None` means the polydisc).
#[derive(Clone, Debug, PartialEq)]
pub struct LpBall {
    pub p: Option<f64>,
    pub radii: Vec<f64>,
}

impl GaugeExpr {
    pub fn leaf(coord: usize, radius: f64) -> Self {
        Self::Leaf { coord, radius }
    }

    /// Euclidean norm of `(z_0/r_0, ..., z_{n-1}/r_{n-1})`.
    pub fn euclidean(radii: &[f64]) -> Self {
        Self::Pnorm {
            p: 2.0,
            weights: vec![1.0; radii.len()],
            terms: radii.iter().enumerate().map(|(j, &r)| Self::leaf(j, r)).collect(),
        }
    }

    pub fn max_of_leaves(radii: &[f64]) -> Self {
        if radii.len() == 1 {
            return Self::leaf(0, radii[0]);
        }
        Self::Max { terms: radii.iter().enumerate().map(|(j, &r)| Self::leaf(j, r)).collect() }
    }

    pub fn scaled(self, factor: f64) -> Self {
        Self::Scale { factor, term: Box::new(self) }
    }

    /// Evaluates the gauge on the coordinate moduli.
    pub fn eval_moduli(&self, moduli: &[f64]) -> f64 {
        match self {
            Self::Leaf { coord, radius } => moduli[*coord] / radius,
            Self::Pnorm { p, weights, terms } => {
                let vals: Vec<f64> = terms.iter().map(|t| t.eval_moduli(moduli)).collect();
                let top = vals.iter().cloned().fold(0.0, f64::max);
                if top == 0.0 {
                    return 0.0;
                }
                let s: f64 = vals.iter().zip(weights).map(|(v, w)| w * (v / top).powf(*p)).sum();
                top * s.powf(1.0 / p)
            }
            Self::Max { terms } => terms.iter().map(|t| t.eval_moduli(moduli)).fold(0.0, f64::max),
            Self::Geomean { weights, terms } => {
                let mut log = 0.0;
                for (t, w) in terms.iter().zip(weights) {
                    let v = t.eval_moduli(moduli);
                    if v == 0.0 {
                        return 0.0;
                    }
                    log += w * v.ln();
                }
                log.exp()
            }
            Self::Scale { factor, term } => factor * term.eval_moduli(moduli),
        }
    }

    /// Checks well-formedness and positive definiteness for `dim` coordinates.
    pub fn validate(&self, dim: usize) -> Result<()> {
        self.validate_node(dim)?;
        let bounds = self.coordinate_bounds(dim);
        if let Some(j) = bounds.iter().position(|&c| c <= 0.0) {
            return Err(Error::InvalidGauge(format!(
                "gauge does not control coordinate {j}; the domain would be unbounded"
            )));
        }
        Ok(())
    }

    fn validate_node(&self, dim: usize) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidGauge(msg));
        match self {
            Self::Leaf { coord, radius } => {
                if *coord >= dim {
                    return bad(format!("leaf coordinate {coord} out of range for dimension {dim}"));
                }
                if !(radius.is_finite() && *radius > 0.0) {
                    return bad(format!("leaf radius must be positive and finite, got {radius}"));
                }
            }
            Self::Pnorm { p, weights, terms } => {
                if !(p.is_finite() && *p >= 1.0) {
                    return bad(format!("p-norm exponent must be finite and >= 1, got {p}"));
                }
                check_weights(weights, terms.len())?;
                for t in terms {
                    t.validate_node(dim)?;
                }
            }
            Self::Max { terms } => {
                if terms.is_empty() {
                    return bad("max needs at least one term".into());
                }
                for t in terms {
                    t.validate_node(dim)?;
                }
            }
            Self::Geomean { weights, terms } => {
                check_weights(weights, terms.len())?;
                let total: f64 = weights.iter().sum();
                if (total - 1.0).abs() > 1e-12 {
                    return bad(format!("geometric-mean weights must sum to 1, got {total}"));
                }
                for t in terms {
                    t.validate_node(dim)?;
                }
            }
            Self::Scale { factor, term } => {
                if !(factor.is_finite() && *factor > 0.0) {
                    return bad(format!("scale factor must be positive and finite, got {factor}"));
                }
                term.validate_node(dim)?;
            }
        }
        Ok(())
    }

    /// Constants `c_j >= 0` with `m(z) >= c_j |z_j|` for every `z`.
    ///
    /// All `c_j > 0` means the domain `{m < 1}` lies in the polydisc with radii
    /// `1 / c_j`.
    pub fn coordinate_bounds(&self, dim: usize) -> Vec<f64> {
        match self {
            Self::Leaf { coord, radius } => {
                let mut c = vec![0.0f64; dim];
                c[*coord] = 1.0 / radius;
                c
            }
            Self::Pnorm { p, weights, terms } => {
                let mut c = vec![0.0f64; dim];
                for (t, w) in terms.iter().zip(weights) {
                    let scale = w.powf(1.0 / p);
                    for (cj, tj) in c.iter_mut().zip(t.coordinate_bounds(dim)) {
                        *cj = cj.max(scale * tj);
                    }
                }
                c
            }
            Self::Max { terms } => {
                let mut c = vec![0.0f64; dim];
                for t in terms {
                    for (cj, tj) in c.iter_mut().zip(t.coordinate_bounds(dim)) {
                        *cj = cj.max(tj);
                    }
                }
                c
            }
            Self::Geomean { weights, terms } => {
                let mut c = vec![1.0; dim];
                for (t, w) in terms.iter().zip(weights) {
                    for (cj, tj) in c.iter_mut().zip(t.coordinate_bounds(dim)) {
                        *cj *= tj.powf(*w);
                    }
                }
                c
            }
            Self::Scale { factor, term } => {
                term.coordinate_bounds(dim).into_iter().map(|c| factor * c).collect()
            }
        }
    }

    /// Conservative structural convexity test of the sublevel set `{m < 1}`.
    pub fn is_convex(&self) -> bool {
        match self {
            Self::Leaf { .. } => true,
            Self::Pnorm { terms, .. } | Self::Max { terms } => terms.iter().all(Self::is_convex),
            Self::Geomean { terms, .. } => terms.len() == 1 && terms[0].is_convex(),
            Self::Scale { term, .. } => term.is_convex(),
        }
    }

    /// Renumbers every leaf coordinate by `offset`.
    pub fn shifted(&self, offset: usize) -> Self {
        match self {
            Self::Leaf { coord, radius } => Self::Leaf { coord: coord + offset, radius: *radius },
            Self::Pnorm { p, weights, terms } => Self::Pnorm {
                p: *p,
                weights: weights.clone(),
                terms: terms.iter().map(|t| t.shifted(offset)).collect(),
            },
            Self::Max { terms } => Self::Max { terms: terms.iter().map(|t| t.shifted(offset)).collect() },
            Self::Geomean { weights, terms } => Self::Geomean {
                weights: weights.clone(),
                terms: terms.iter().map(|t| t.shifted(offset)).collect(),
            },
            Self::Scale { factor, term } => Self::Scale { factor: *factor, term: Box::new(term.shifted(offset)) },
        }
    }

    /// Recognises weighted `l^p` balls (including polydiscs and ellipsoids).
    pub fn as_lp_ball(&self, dim: usize) -> Option<LpBall> {
        match self {
            Self::Scale { factor, term } => {
                let mut inner = term.as_lp_ball(dim)?;
                inner.radii.iter_mut().for_each(|r| *r /= factor);
                Some(inner)
            }
            Self::Leaf { coord, radius } if dim == 1 && *coord == 0 => {
                Some(LpBall { p: None, radii: vec![*radius] })
            }
            Self::Max { terms } if terms.len() == 1 => terms[0].as_lp_ball(dim),
            Self::Max { terms } => {
                let radii = distinct_leaf_radii(terms, dim)?;
                Some(LpBall { p: None, radii })
            }
            Self::Pnorm { p, weights, terms } => {
                if terms.len() == 1 {
                    let mut inner = terms[0].as_lp_ball(dim)?;
                    let s = weights[0].powf(1.0 / p);
                    inner.radii.iter_mut().for_each(|r| *r /= s);
                    return Some(inner);
                }
                let radii = distinct_leaf_radii(terms, dim)?;
                let mut ordered = vec![0.0; dim];
                for (t, w) in terms.iter().zip(weights) {
                    if let Self::Leaf { coord, radius } = t {
                        ordered[*coord] = radius * w.powf(-1.0 / p);
                    }
                }
                debug_assert_eq!(radii.len(), dim);
                Some(LpBall { p: Some(*p), radii: ordered })
            }
            _ => None,
        }
    }
}

fn check_weights(weights: &[f64], n_terms: usize) -> Result<()> {
    if n_terms == 0 {
        return Err(Error::InvalidGauge("combinator needs at least one term".into()));
    }
    if weights.len() != n_terms {
        return Err(Error::InvalidGauge(format!(
            "{} weights for {} terms",
            weights.len(),
            n_terms
        )));
    }
    if weights.iter().any(|w| !(w.is_finite() && *w > 0.0)) {
        return Err(Error::InvalidGauge("weights must be positive and finite".into()));
    }
    Ok(())
}

/// Radii indexed by coordinate when `terms` are leaves on distinct
/// coordinates covering `0..dim`.
fn distinct_leaf_radii(terms: &[GaugeExpr], dim: usize) -> Option<Vec<f64>> {
    if terms.len() != dim {
        return None;
    }
    let mut radii = vec![0.0; dim];
    for t in terms {
        match t {
            GaugeExpr::Leaf { coord, radius } if *coord < dim && radii[*coord] == 0.0 => {
                radii[*coord] = *radius;
            }
            _ => return None,
        }
    }
    Some(radii)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nonconvex() -> GaugeExpr {
        GaugeExpr::Max {
            terms: vec![
                GaugeExpr::leaf(0, 1.0),
                GaugeExpr::leaf(1, 1.0),
                GaugeExpr::Geomean {
                    weights: vec![0.5, 0.5],
                    terms: vec![GaugeExpr::leaf(0, 1.0), GaugeExpr::leaf(1, 1.0)],
                }
                .scaled(2.0),
            ],
        }
    }

    #[test]
    fn evaluates_named_shapes() {
        assert_eq!(GaugeExpr::max_of_leaves(&[1.0, 1.0]).eval_moduli(&[0.5, 0.2]), 0.5);
        assert!((GaugeExpr::euclidean(&[1.0, 1.0]).eval_moduli(&[0.3, 0.4]) - 0.5).abs() < 1e-15);
        assert_eq!(nonconvex().eval_moduli(&[0.0, 0.0]), 0.0);
        // 2 sqrt(0.25 * 0.25) = 0.5 beats both moduli
        assert!((nonconvex().eval_moduli(&[0.25, 0.25]) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn rejects_malformed_gauges() {
        let g = GaugeExpr::Geomean { weights: vec![0.5, 0.6], terms: vec![GaugeExpr::leaf(0, 1.0), GaugeExpr::leaf(1, 1.0)] };
        assert!(g.validate(2).is_err());
        let g = GaugeExpr::Pnorm { p: 0.5, weights: vec![1.0], terms: vec![GaugeExpr::leaf(0, 1.0)] };
        assert!(g.validate(1).is_err());
        assert!(GaugeExpr::leaf(1, 1.0).validate(1).is_err());
        assert!(GaugeExpr::leaf(0, -1.0).validate(1).is_err());
        // only controls coordinate 0
        assert!(GaugeExpr::leaf(0, 1.0).validate(2).is_err());
        // geometric mean alone vanishes on the axes
        let g = GaugeExpr::Geomean { weights: vec![0.5, 0.5], terms: vec![GaugeExpr::leaf(0, 1.0), GaugeExpr::leaf(1, 1.0)] };
        assert!(matches!(g.validate(2), Err(Error::InvalidGauge(_))));
        assert!(nonconvex().validate(2).is_ok());
    }

    #[test]
    fn coordinate_bounds_are_lower_bounds() {
        let g = nonconvex();
        let c = g.coordinate_bounds(2);
        assert_eq!(c, vec![1.0, 1.0]);
        let e = GaugeExpr::Pnorm { p: 2.0, weights: vec![4.0, 1.0], terms: vec![GaugeExpr::leaf(0, 1.0), GaugeExpr::leaf(1, 3.0)] };
        assert_eq!(e.coordinate_bounds(2), vec![2.0, 1.0 / 3.0]);
    }

    #[test]
    fn recognises_lp_balls() {
        assert_eq!(
            GaugeExpr::euclidean(&[1.0, 2.0]).scaled(0.5).as_lp_ball(2),
            Some(LpBall { p: Some(2.0), radii: vec![2.0, 4.0] })
        );
        assert_eq!(GaugeExpr::max_of_leaves(&[1.0, 3.0]).as_lp_ball(2), Some(LpBall { p: None, radii: vec![1.0, 3.0] }));
        assert_eq!(nonconvex().as_lp_ball(2), None);
        assert!(!nonconvex().is_convex());
        assert!(GaugeExpr::euclidean(&[1.0, 1.0]).is_convex());
    }

    #[test]
    fn json_shape() {
        let g = GaugeExpr::leaf(0, 2.0).scaled(3.0);
        let s = serde_json::to_string(&g).unwrap();
        assert_eq!(s, r#"{"op":"scale","factor":3.0,"term":{"op":"leaf","coord":0,"radius":2.0}}"#);
        assert_eq!(serde_json::from_str::<GaugeExpr>(&s).unwrap(), g);
    }
}
