//! Check reports: named quantities, signed margins and the pass rule.

use serde::{Deserialize, Serialize};
use serde_json::Value;

/// A measured or computed value with its error (0 for closed forms).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Quantity {
    pub label: String,
    pub value: f64,
    pub error: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MarginKind {
    /// `lhs <= rhs`, margin `rhs - lhs`
    Le,
    /// `lhs == rhs`, margin `-|lhs - rhs|`
    Eq,
}

/// Unit in which margins (and the tolerance) are expressed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MarginScale {
    Absolute,
    /// divided by `|rhs|`
    Relative,
    /// divided by the combined standard error of both sides
    Sigma,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Margin {
    pub label: String,
    pub kind: MarginKind,
    pub lhs: String,
    pub rhs: String,
    pub value: f64,
}

/// Combined sigma is floored at this fraction of the larger side, so that
/// closed-form quantities inside a statistical check compare at
/// floating-point resolution instead of dividing by zero.
pub const SIGMA_FLOOR_REL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub name: String,
    pub statement: String,
    pub inputs: Value,
    pub quantities: Vec<Quantity>,
    pub margins: Vec<Margin>,
    pub scale: MarginScale,
    pub tolerance: f64,
    pub passed: bool,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub error: Option<String>,
    /// Wall time; kept out of the per-check JSON so reports are reproducible.
    #[serde(skip)]
    pub runtime_ms: u64,
}

impl CheckReport {
    pub fn quantity(&self, label: &str) -> Option<&Quantity> {
        self.quantities.iter().find(|q| q.label == label)
    }

    /// Recomputes a margin from the stored quantities.
    pub fn recompute_margin(&self, m: &Margin) -> Option<f64> {
        let l = self.quantity(&m.lhs)?;
        let r = self.quantity(&m.rhs)?;
        Some(margin_value(m.kind, self.scale, l, r))
    }

    /// Folds several reports of one statement into a single report. Labels
    /// are prefixed with the case index; all parts must share a scale.
    pub fn combine(name: &str, statement: &str, inputs: Value, parts: Vec<CheckReport>, seed: u64) -> crate::Result<CheckReport> {
        let scale = parts.first().map_or(MarginScale::Absolute, |p| p.scale);
        let tolerance = parts.iter().map(|p| p.tolerance).fold(0.0, f64::max);
        if parts.iter().any(|p| p.scale != scale) {
            return Err(crate::Error::Unsupported(format!("cases of `{name}` use different margin scales")));
        }
        let mut quantities = Vec::new();
        let mut margins = Vec::new();
        let mut error = None;
        for (i, p) in parts.into_iter().enumerate() {
            quantities.extend(p.quantities.into_iter().map(|q| Quantity { label: format!("{i}.{}", q.label), ..q }));
            margins.extend(p.margins.into_iter().map(|m| Margin {
                label: format!("{i}.{}", m.label),
                lhs: format!("{i}.{}", m.lhs),
                rhs: format!("{i}.{}", m.rhs),
                ..m
            }));
            if let Some(e) = p.error {
                error.get_or_insert(format!("case {i}: {e}"));
            }
        }
        let passed = error.is_none() && margins.iter().all(|m| m.value >= -tolerance);
        Ok(CheckReport {
            name: name.into(),
            statement: statement.into(),
            inputs,
            quantities,
            margins,
            scale,
            tolerance,
            passed,
            seed,
            error,
            runtime_ms: 0,
        })
    }

    /// The same report with margins re-expressed in another scale.
    pub fn rescaled(mut self, scale: MarginScale, tolerance: f64) -> Self {
        self.scale = scale;
        let margins = std::mem::take(&mut self.margins);
        self.margins = margins
            .into_iter()
            .map(|m| {
                let value = self.recompute_margin(&m).unwrap_or(m.value);
                Margin { value, ..m }
            })
            .collect();
        self.with_tolerance(tolerance)
    }

    pub fn min_margin(&self) -> f64 {
        self.margins.iter().map(|m| m.value).fold(f64::INFINITY, f64::min)
    }

    /// Same report with a different tolerance; the pass flag is re-derived.
    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self.passed = self.error.is_none() && self.margins.iter().all(|m| m.value >= -tolerance);
        self
    }
}

pub fn margin_value(kind: MarginKind, scale: MarginScale, lhs: &Quantity, rhs: &Quantity) -> f64 {
    let diff = match kind {
        MarginKind::Le => rhs.value - lhs.value,
        MarginKind::Eq => -(lhs.value - rhs.value).abs(),
    };
    let denom = match scale {
        MarginScale::Absolute => 1.0,
        MarginScale::Relative => rhs.value.abs().max(f64::MIN_POSITIVE),
        MarginScale::Sigma => {
            let sigma = lhs.error.hypot(rhs.error);
            let floor = SIGMA_FLOOR_REL * lhs.value.abs().max(rhs.value.abs());
            sigma.max(floor).max(f64::MIN_POSITIVE)
        }
    };
    diff / denom
}

/// Incremental construction of a [`CheckReport`].
pub struct ReportBuilder {
    name: String,
    statement: String,
    inputs: serde_json::Map<String, Value>,
    quantities: Vec<Quantity>,
    pending: Vec<(String, MarginKind, String, String)>,
    scale: MarginScale,
    tolerance: f64,
}

impl ReportBuilder {
    pub fn new(name: &str, statement: &str, scale: MarginScale, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            statement: statement.into(),
            inputs: serde_json::Map::new(),
            quantities: Vec::new(),
            pending: Vec::new(),
            scale,
            tolerance,
        }
    }

    pub fn input(mut self, key: &str, value: impl Serialize) -> Self {
        self.inputs.insert(key.into(), serde_json::to_value(value).unwrap_or(Value::Null));
        self
    }

    pub fn set_scale(&mut self, scale: MarginScale, tolerance: f64) {
        self.scale = scale;
        self.tolerance = tolerance;
    }

    pub fn push_quantity(&mut self, label: &str, value: f64, error: f64) {
        self.quantities.push(Quantity { label: label.into(), value, error });
    }

    pub fn quantity(mut self, label: &str, value: f64, error: f64) -> Self {
        self.push_quantity(label, value, error);
        self
    }

    pub fn push_le(&mut self, label: &str, lhs: &str, rhs: &str) {
        self.pending.push((label.into(), MarginKind::Le, lhs.into(), rhs.into()));
    }

    pub fn push_eq(&mut self, label: &str, lhs: &str, rhs: &str) {
        self.pending.push((label.into(), MarginKind::Eq, lhs.into(), rhs.into()));
    }

    pub fn le(mut self, label: &str, lhs: &str, rhs: &str) -> Self {
        self.push_le(label, lhs, rhs);
        self
    }

    pub fn eq(mut self, label: &str, lhs: &str, rhs: &str) -> Self {
        self.push_eq(label, lhs, rhs);
        self
    }

    /// True when any recorded quantity carries a nonzero error.
    pub fn has_uncertainty(&self) -> bool {
        self.quantities.iter().any(|q| q.error > 0.0)
    }

    pub fn finish(self, seed: u64) -> CheckReport {
        let mut margins = Vec::with_capacity(self.pending.len());
        let mut error = None;
        for (label, kind, lhs, rhs) in self.pending {
            let find = |l: &str| self.quantities.iter().find(|q| q.label == l);
            match (find(&lhs), find(&rhs)) {
                (Some(l), Some(r)) => {
                    let value = margin_value(kind, self.scale, l, r);
                    margins.push(Margin { label, kind, lhs, rhs, value });
                }
                _ => {
                    error.get_or_insert_with(|| format!("margin `{label}` refers to a missing quantity"));
                }
            }
        }
        let passed = error.is_none() && margins.iter().all(|m| m.value >= -self.tolerance);
        CheckReport {
            name: self.name,
            statement: self.statement,
            inputs: Value::Object(self.inputs),
            quantities: self.quantities,
            margins,
            scale: self.scale,
            tolerance: self.tolerance,
            passed,
            seed,
            error,
            runtime_ms: 0,
        }
    }

    /// A failed report carrying the error of a delegated computation.
    pub fn failed(self, seed: u64, err: &crate::Error) -> CheckReport {
        let mut r = Self { pending: Vec::new(), ..self }.finish(seed);
        r.passed = false;
        r.error = Some(err.to_string());
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pass_rule_uses_tolerance() {
        let r = ReportBuilder::new("t", "", MarginScale::Absolute, 0.1)
            .quantity("a", 1.0, 0.0)
            .quantity("b", 0.95, 0.0)
            .le("a<=b", "a", "b")
            .finish(0);
        assert!((r.margins[0].value + 0.05).abs() < 1e-15);
        assert!(r.passed);
        assert!(!r.clone().with_tolerance(0.0).passed);
    }

    #[test]
    fn sigma_margins() {
        let r = ReportBuilder::new("t", "", MarginScale::Sigma, 3.0)
            .quantity("a", 1.0, 0.3)
            .quantity("b", 1.5, 0.4)
            .eq("a=b", "a", "b")
            .finish(0);
        assert!((r.margins[0].value + 1.0).abs() < 1e-15);
        assert_eq!(r.recompute_margin(&r.margins[0]), Some(r.margins[0].value));
    }

    #[test]
    fn missing_quantity_fails_report() {
        let r = ReportBuilder::new("t", "", MarginScale::Absolute, 0.0).le("x", "a", "b").finish(0);
        assert!(!r.passed);
        assert!(r.error.is_some());
    }
}
