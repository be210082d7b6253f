//! Covering estimate of the two-dimensional Hausdorff measure of a region in
//! a 2-real-dimensional metric space given only its distance function.
//!
//! The bounding square of the region is split into a quadtree until every
//! leaf square has all four edges of metric length at most `delta`. Each
//! leaf contributes the product of its mean metric width and height, times
//! the fraction of the leaf lying in the region. For the Euclidean metric
//! this returns the Lebesgue area.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub trait Distance2 {
    fn distance(&self, a: [f64; 2], b: [f64; 2]) -> f64;
}

#[derive(Clone, Copy, Debug, Default)]
pub struct EuclideanDistance;

impl Distance2 for EuclideanDistance {
    fn distance(&self, a: [f64; 2], b: [f64; 2]) -> f64 {
        (a[0] - b[0]).hypot(a[1] - b[1])
    }
}

/// `factor * d`.
#[derive(Clone, Copy, Debug)]
pub struct ScaledDistance<D> {
    pub factor: f64,
    pub inner: D,
}

impl<D: Distance2> Distance2 for ScaledDistance<D> {
    fn distance(&self, a: [f64; 2], b: [f64; 2]) -> f64 {
        self.factor * self.inner.distance(a, b)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum Region {
    /// `[x0, x0 + side] x [y0, y0 + side]`
    Square { x0: f64, y0: f64, side: f64 },
    /// closed disk
    Disk { cx: f64, cy: f64, radius: f64 },
}

impl Region {
    fn bounding_square(&self) -> (f64, f64, f64) {
        match *self {
            Self::Square { x0, y0, side } => (x0, y0, side),
            Self::Disk { cx, cy, radius } => (cx - radius, cy - radius, 2.0 * radius),
        }
    }

    fn contains(&self, p: [f64; 2]) -> bool {
        match *self {
            Self::Square { x0, y0, side } => p[0] >= x0 && p[0] <= x0 + side && p[1] >= y0 && p[1] <= y0 + side,
            Self::Disk { cx, cy, radius } => (p[0] - cx).hypot(p[1] - cy) <= radius,
        }
    }

    fn misses(&self, x: f64, y: f64, h: f64) -> bool {
        match *self {
            Self::Square { .. } => false,
            Self::Disk { cx, cy, radius } => {
                let dx = (cx - cx.clamp(x, x + h)).abs();
                let dy = (cy - cy.clamp(y, y + h)).abs();
                dx.hypot(dy) > radius
            }
        }
    }

    fn validate(&self) -> Result<()> {
        let ok = match *self {
            Self::Square { x0, y0, side } => x0.is_finite() && y0.is_finite() && side.is_finite() && side > 0.0,
            Self::Disk { cx, cy, radius } => cx.is_finite() && cy.is_finite() && radius.is_finite() && radius > 0.0,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!("degenerate region {self:?}")))
        }
    }
}

/// Fewest cover elements for which an estimate is reported.
pub const MIN_COVER: usize = 100;
const MAX_DEPTH: u32 = 40;
/// Region-membership subsamples per leaf side.
const FRACTION_GRID: usize = 4;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HausdorffEstimate {
    pub value: f64,
    pub cover_elements: usize,
    pub delta: f64,
}

pub fn hausdorff_estimate<D: Distance2>(metric: &D, region: &Region, delta: f64) -> Result<HausdorffEstimate> {
    region.validate()?;
    if !(delta.is_finite() && delta > 0.0) {
        return Err(Error::InvalidParameter(format!("mesh scale must be positive, got {delta}")));
    }
    let (x, y, h) = region.bounding_square();
    let mut acc = Cover { value: 0.0, count: 0 };
    cover(metric, region, delta, x, y, h, 0, &mut acc)?;
    if acc.count < MIN_COVER {
        return Err(Error::TooCoarse(format!(
            "delta = {delta} needs only {} cover elements (< {MIN_COVER}); use a smaller delta",
            acc.count
        )));
    }
    Ok(HausdorffEstimate { value: acc.value, cover_elements: acc.count, delta })
}

struct Cover {
    value: f64,
    count: usize,
}

#[allow(clippy::too_many_arguments)]
fn cover<D: Distance2>(metric: &D, region: &Region, delta: f64, x: f64, y: f64, h: f64, depth: u32, acc: &mut Cover) -> Result<()> {
    if region.misses(x, y, h) {
        return Ok(());
    }
    let d = |a: [f64; 2], b: [f64; 2]| metric.distance(a, b);
    let bottom = d([x, y], [x + h, y]);
    let top = d([x, y + h], [x + h, y + h]);
    let left = d([x, y], [x, y + h]);
    let right = d([x + h, y], [x + h, y + h]);
    let edges = [bottom, top, left, right];
    let fine = edges.iter().all(|e| e.is_finite() && *e <= delta);
    if !fine {
        if depth >= MAX_DEPTH {
            return Err(Error::InvalidParameter(format!(
                "metric does not resolve below delta = {delta} near ({x}, {y})"
            )));
        }
        let k = 0.5 * h;
        for (dx, dy) in [(0.0, 0.0), (k, 0.0), (0.0, k), (k, k)] {
            cover(metric, region, delta, x + dx, y + dy, k, depth + 1, acc)?;
        }
        return Ok(());
    }
    let step = h / FRACTION_GRID as f64;
    let mut hits = 0;
    for i in 0..FRACTION_GRID {
        for j in 0..FRACTION_GRID {
            if region.contains([x + (i as f64 + 0.5) * step, y + (j as f64 + 0.5) * step]) {
                hits += 1;
            }
        }
    }
    if hits > 0 {
        let fraction = hits as f64 / (FRACTION_GRID * FRACTION_GRID) as f64;
        acc.value += fraction * 0.25 * (bottom + top) * (left + right);
        acc.count += 1;
    }
    Ok(())
}
