//! Balanced Reinhardt domains in `C^N`: gauges, membership, dilation,
//! inner/outer radii and volumes.

mod domain;
mod gauge;
mod point;
mod radii;
mod volume;

pub use domain::{lp_ball_volume, DomainSpec};
pub use gauge::{GaugeExpr, LpBall};
pub use point::CPoint;
pub use radii::{sample_direction_moduli, sandwich_radii, SandwichRadii};
pub use volume::{best_volume, DEFAULT_PANELS, reinhardt_moments, volume, VolumeEstimate, VolumeMethod};

/// `m(z)` for the domain's canonical gauge.
pub fn gauge_eval(spec: &DomainSpec, z: &CPoint) -> crate::Result<f64> {
    spec.gauge_eval(z)
}

pub fn contains(spec: &DomainSpec, z: &CPoint) -> crate::Result<bool> {
    spec.contains(z)
}

pub fn dilate(spec: &DomainSpec, lambda: f64) -> crate::Result<DomainSpec> {
    spec.dilate(lambda)
}
