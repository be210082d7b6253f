//! Shorthand parsers for domains and points.

use std::path::Path;
use std::str::FromStr;

use bergkern::geometry::{CPoint, DomainSpec};
use num_complex::Complex64;

/// `disk`, `ball:N`, `polydisc:r1,r2,...`, `half-plane`, `kinked`, inline
/// JSON, or a path to a JSON file.
pub fn domain(s: &str) -> Result<DomainSpec, String> {
    let s = s.trim();
    let parsed = match s {
        "disk" => Ok(DomainSpec::Disk),
        "half-plane" | "half_plane" => Ok(DomainSpec::HalfPlane),
        "kinked" => Ok(DomainSpec::kinked_example()),
        _ if s.starts_with("ball:") => {
            let n: usize = s[5..].parse().map_err(|_| format!("bad ball dimension in `{s}`"))?;
            let spec = DomainSpec::Ball(n);
            spec.validate().map(|_| spec).map_err(|e| e.to_string())
        }
        _ if s.starts_with("polydisc:") => {
            let radii = s[9..]
                .split(',')
                .map(|r| r.trim().parse::<f64>().map_err(|_| format!("bad radius `{r}` in `{s}`")))
                .collect::<Result<Vec<_>, _>>()?;
            let spec = DomainSpec::Polydisc(radii);
            spec.validate().map(|_| spec).map_err(|e| e.to_string())
        }
        _ if s.starts_with('{') => DomainSpec::from_json(s).map_err(|e| e.to_string()),
        _ if Path::new(s).is_file() => {
            let text = std::fs::read_to_string(s).map_err(|e| format!("{s}: {e}"))?;
            DomainSpec::from_json(&text).map_err(|e| format!("{s}: {e}"))
        }
        _ => Err(format!("unknown domain `{s}`")),
    };
    parsed
}

/// One complex number: `0.3`, `-0.2i`, `0.3+0.1i`.
pub fn complex(s: &str) -> Result<Complex64, String> {
    let t = s.trim();
    Complex64::from_str(t).map_err(|_| format!("bad complex number `{t}`"))
}

/// Comma-separated complex coordinates.
pub fn point(s: &str) -> Result<CPoint, String> {
    let coords = s.split(',').map(complex).collect::<Result<Vec<_>, _>>()?;
    CPoint::new(coords).map_err(|e| e.to_string())
}
