use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::gauge::{GaugeExpr, LpBall};
use super::point::CPoint;
use crate::special::gamma;
use crate::{Error, Result};

/// A domain in `C^N`.
///
/// JSON form: `{"kind": "disk"}`, `{"kind": "ball", "dim": 2}`,
/// `{"kind": "polydisc", "radii": [1.0, 1.0]}`, `{"kind": "half_plane"}`,
/// `{"kind": "balanced", "dim": 2, "gauge": <gauge>}`,
/// `{"kind": "product", "left": <domain>, "right": <domain>}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DomainRepr", into = "DomainRepr")]
pub enum DomainSpec {
    Disk,
    Ball(usize),
    Polydisc(Vec<f64>),
    HalfPlane,
    Balanced { gauge: GaugeExpr, dim: usize },
    Product(Box<DomainSpec>, Box<DomainSpec>),
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum DomainRepr {
    Disk,
    Ball { dim: usize },
    Polydisc { radii: Vec<f64> },
    HalfPlane,
    Balanced { dim: usize, gauge: GaugeExpr },
    Product { left: Box<DomainSpec>, right: Box<DomainSpec> },
}

impl TryFrom<DomainRepr> for DomainSpec {
    type Error = Error;

    fn try_from(r: DomainRepr) -> Result<Self> {
        let spec = match r {
            DomainRepr::Disk => Self::Disk,
            DomainRepr::Ball { dim } => Self::Ball(dim),
            DomainRepr::Polydisc { radii } => Self::Polydisc(radii),
            DomainRepr::HalfPlane => Self::HalfPlane,
            DomainRepr::Balanced { dim, gauge } => Self::Balanced { gauge, dim },
            DomainRepr::Product { left, right } => Self::Product(left, right),
        };
        spec.validate()?;
        Ok(spec)
    }
}

impl From<DomainSpec> for DomainRepr {
    fn from(s: DomainSpec) -> Self {
        match s {
            DomainSpec::Disk => Self::Disk,
            DomainSpec::Ball(dim) => Self::Ball { dim },
            DomainSpec::Polydisc(radii) => Self::Polydisc { radii },
            DomainSpec::HalfPlane => Self::HalfPlane,
            DomainSpec::Balanced { gauge, dim } => Self::Balanced { dim, gauge },
            DomainSpec::Product(left, right) => Self::Product { left, right },
        }
    }
}

impl DomainSpec {
    pub fn balanced(gauge: GaugeExpr, dim: usize) -> Result<Self> {
        let spec = Self::Balanced { gauge, dim };
        spec.validate()?;
        Ok(spec)
    }

    /// `max(|z1|, |z2|, 2 sqrt(|z1| |z2|)) < 1`: balanced and pseudoconvex
    /// but not convex, with volume `pi^2 (1 + 4 ln 2) / 16`.
    pub fn kinked_example() -> Self {
        let geomean = GaugeExpr::Geomean { weights: vec![0.5, 0.5], terms: vec![GaugeExpr::leaf(0, 1.0), GaugeExpr::leaf(1, 1.0)] };
        let gauge = GaugeExpr::Max { terms: vec![GaugeExpr::leaf(0, 1.0), GaugeExpr::leaf(1, 1.0), geomean.scaled(2.0)] };
        Self::Balanced { gauge, dim: 2 }
    }

    pub fn product(left: DomainSpec, right: DomainSpec) -> Self {
        Self::Product(Box::new(left), Box::new(right))
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("domain specs always serialize")
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Self::Disk | Self::HalfPlane => Ok(()),
            Self::Ball(dim) if *dim == 0 => Err(Error::InvalidDomain("ball dimension must be positive".into())),
            Self::Ball(_) => Ok(()),
            Self::Polydisc(radii) => {
                if radii.is_empty() {
                    return Err(Error::InvalidDomain("polydisc needs at least one radius".into()));
                }
                if radii.iter().any(|r| !(r.is_finite() && *r > 0.0)) {
                    return Err(Error::InvalidDomain("polydisc radii must be positive and finite".into()));
                }
                Ok(())
            }
            Self::Balanced { gauge, dim } => {
                if *dim == 0 {
                    return Err(Error::InvalidDomain("dimension must be positive".into()));
                }
                gauge.validate(*dim)
            }
            Self::Product(a, b) => {
                a.validate()?;
                b.validate()
            }
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::Disk | Self::HalfPlane => 1,
            Self::Ball(n) => *n,
            Self::Polydisc(r) => r.len(),
            Self::Balanced { dim, .. } => *dim,
            Self::Product(a, b) => a.dim() + b.dim(),
        }
    }

    pub fn is_bounded(&self) -> bool {
        match self {
            Self::HalfPlane => false,
            Self::Product(a, b) => a.is_bounded() && b.is_bounded(),
            _ => true,
        }
    }

    /// Gauge `m` with `Ω = {m < 1}`; `None` for the half-plane and products
    /// containing it.
    pub fn canonical_gauge(&self) -> Option<GaugeExpr> {
        match self {
            Self::Disk => Some(GaugeExpr::leaf(0, 1.0)),
            Self::Ball(n) => Some(if *n == 1 { GaugeExpr::leaf(0, 1.0) } else { GaugeExpr::euclidean(&vec![1.0; *n]) }),
            Self::Polydisc(radii) => Some(GaugeExpr::max_of_leaves(radii)),
            Self::HalfPlane => None,
            Self::Balanced { gauge, .. } => Some(gauge.clone()),
            Self::Product(a, b) => {
                let ga = a.canonical_gauge()?;
                let gb = b.canonical_gauge()?.shifted(a.dim());
                Some(GaugeExpr::Max { terms: vec![ga, gb] })
            }
        }
    }

    pub fn require_gauge(&self) -> Result<GaugeExpr> {
        self.canonical_gauge()
            .ok_or_else(|| Error::NotBalanced(format!("{} has no gauge", self.label())))
    }

    /// Minkowski gauge at `z`.
    pub fn gauge_eval(&self, z: &CPoint) -> Result<f64> {
        z.expect_dim(self.dim())?;
        Ok(self.require_gauge()?.eval_moduli(&z.moduli()))
    }

    /// Open-domain membership: boundary points are outside.
    pub fn contains(&self, z: &CPoint) -> Result<bool> {
        z.expect_dim(self.dim())?;
        Ok(self.contains_unchecked(z))
    }

    fn contains_unchecked(&self, z: &CPoint) -> bool {
        match self {
            Self::HalfPlane => z.coords()[0].im > 0.0,
            Self::Product(a, b) => {
                let (za, zb) = z.split_at(a.dim());
                a.contains_unchecked(&za) && b.contains_unchecked(&zb)
            }
            _ => self.canonical_gauge().expect("bounded specs have gauges").eval_moduli(&z.moduli()) < 1.0,
        }
    }

    pub fn require_inside(&self, z: &CPoint) -> Result<()> {
        if !self.contains(z)? {
            return Err(Error::OutsideDomain(format!("{z} is not in {}", self.label())));
        }
        Ok(())
    }

    /// `λΩ`. Named models stay named where a named form exists.
    pub fn dilate(&self, lambda: f64) -> Result<Self> {
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(Error::InvalidParameter(format!("dilation factor must be positive, got {lambda}")));
        }
        if lambda == 1.0 {
            return Ok(self.clone());
        }
        Ok(match self {
            Self::Disk => Self::Polydisc(vec![lambda]),
            Self::Polydisc(radii) => Self::Polydisc(radii.iter().map(|r| r * lambda).collect()),
            Self::Ball(n) => Self::Balanced { gauge: self.require_gauge()?.scaled(1.0 / lambda), dim: *n },
            Self::Balanced { gauge, dim } => Self::Balanced { gauge: gauge.clone().scaled(1.0 / lambda), dim: *dim },
            Self::Product(a, b) => Self::product(a.dilate(lambda)?, b.dilate(lambda)?),
            Self::HalfPlane => return Err(Error::NotBalanced("half-plane cannot be dilated about a centre".into())),
        })
    }

    /// Half-widths `b_j` with `Ω ⊂ {|z_j| < b_j}`.
    pub fn bounding_radii(&self) -> Result<Vec<f64>> {
        if !self.is_bounded() {
            return Err(Error::Unbounded);
        }
        let g = self.require_gauge()?;
        Ok(g.coordinate_bounds(self.dim()).into_iter().map(|c| 1.0 / c).collect())
    }

    /// Recognised weighted `l^p` ball form, if any.
    pub fn lp_ball(&self) -> Option<LpBall> {
        match self {
            Self::Disk => Some(LpBall { p: None, radii: vec![1.0] }),
            Self::Ball(n) => Some(LpBall { p: Some(2.0), radii: vec![1.0; *n] }),
            Self::Polydisc(r) => Some(LpBall { p: None, radii: r.clone() }),
            Self::Balanced { gauge, dim } => gauge.as_lp_ball(*dim),
            _ => None,
        }
    }

    /// Closed-form Euclidean `2N`-volume when one is known.
    pub fn exact_volume(&self) -> Option<f64> {
        match self {
            Self::HalfPlane => None,
            Self::Product(a, b) => Some(a.exact_volume()? * b.exact_volume()?),
            _ => self.lp_ball().map(|b| lp_ball_volume(&b)),
        }
    }

    pub fn is_convex(&self) -> bool {
        match self {
            Self::Product(a, b) => a.is_convex() && b.is_convex(),
            _ => self.canonical_gauge().is_some_and(|g| g.is_convex()),
        }
    }

    pub fn label(&self) -> String {
        match self {
            Self::Disk => "disk".into(),
            Self::Ball(n) => format!("ball(C^{n})"),
            Self::Polydisc(r) => format!("polydisc{r:?}"),
            Self::HalfPlane => "half-plane".into(),
            Self::Balanced { dim, .. } => format!("balanced(C^{dim})"),
            Self::Product(a, b) => format!("{} x {}", a.label(), b.label()),
        }
    }
}

/// Volume of `{ sum_j (|z_j|/r_j)^p < 1 }` in `C^N`:
/// `pi^N prod r_j^2 Gamma(1 + 2/p)^N / Gamma(1 + 2N/p)`.
pub fn lp_ball_volume(ball: &LpBall) -> f64 {
    let n = ball.radii.len() as f64;
    let base: f64 = ball.radii.iter().map(|r| PI * r * r).product();
    match ball.p {
        None => base,
        Some(p) if p == 2.0 => base / gamma(n + 1.0),
        Some(p) => base * gamma(1.0 + 2.0 / p).powf(n) / gamma(1.0 + 2.0 * n / p),
    }
}
