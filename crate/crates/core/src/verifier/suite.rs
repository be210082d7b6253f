//! Suite configuration, the default suite and the runner.
//!
//! A suite is JSON:
//!
//! ```json
//! { "seed": 7,
//!   "tolerances": { "blocki_disk": 1e-9 },
//!   "checks": [ { "id": "blocki_disk", "check": "blocki", "params": { ... } } ] }
//! ```
//!
//! Check names and parameters are validated when the suite is parsed. Every
//! check owns the seed `derive_seed(global seed, id)`, so results do not
//! depend on which other checks run or in which order.

use std::collections::BTreeMap;
use std::time::Instant;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::checks::*;
use super::report::{CheckReport, MarginScale, ReportBuilder};
use crate::bergman::{GramQuadrature, KernelRequest, NamedMap};
use crate::geometry::{CPoint, DomainSpec};
use crate::green::SublevelEstimator;
use crate::metrics::{AZUKAWA_T, SANDWICH_DIRECTIONS};
use crate::sampling::derive_seed;
use crate::teich_model::PathSpec;
use crate::{Error, Result};

pub const DEFAULT_SEED: u64 = 7;

/// Kernel method with sampling seeds supplied by the suite.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "snake_case", deny_unknown_fields)]
pub enum KernelParam {
    Exact,
    Reinhardt { degree: usize },
    GramMonteCarlo { degree: usize, samples: usize },
    GramTensor { degree: usize, panels: usize },
    Auto,
}

impl KernelParam {
    pub fn request(&self, seed: u64) -> KernelRequest {
        match *self {
            Self::Exact => KernelRequest::Exact,
            Self::Reinhardt { degree } => KernelRequest::Reinhardt { degree },
            Self::GramMonteCarlo { degree, samples } => {
                KernelRequest::Gram { degree, quadrature: GramQuadrature::MonteCarlo { samples, seed: derive_seed(seed, "kernel") } }
            }
            Self::GramTensor { degree, panels } => KernelRequest::Gram { degree, quadrature: GramQuadrature::Tensor { panels } },
            Self::Auto => KernelRequest::Auto,
        }
    }
}

/// Sublevel-volume estimator with sampling seeds supplied by the suite.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum EstimatorParam {
    Exact,
    Quadrature,
    MonteCarlo { samples: usize },
}

impl EstimatorParam {
    pub fn estimator(&self, seed: u64) -> SublevelEstimator {
        match *self {
            Self::Exact => SublevelEstimator::Exact,
            Self::Quadrature => SublevelEstimator::Quadrature,
            Self::MonteCarlo { samples } => SublevelEstimator::MonteCarlo { samples, seed: derive_seed(seed, "sublevel") },
        }
    }
}

fn default_kernel() -> KernelParam {
    KernelParam::Auto
}

fn default_estimator() -> EstimatorParam {
    EstimatorParam::Exact
}

fn default_azukawa_t() -> Vec<f64> {
    AZUKAWA_T.to_vec()
}

fn default_sandwich_directions() -> usize {
    SANDWICH_DIRECTIONS
}

fn default_hausdorff_radius() -> f64 {
    1.0
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlockiParams {
    pub domain: DomainSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pole: Option<Complex64>,
    pub depths: Vec<f64>,
    #[serde(default = "default_estimator")]
    pub estimator: EstimatorParam,
    #[serde(default = "default_kernel")]
    pub kernel: KernelParam,
    #[serde(default)]
    pub equality: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainKernelParams {
    pub domain: DomainSpec,
    #[serde(default = "default_kernel")]
    pub kernel: KernelParam,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SublevelParams {
    pub domain: DomainSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pole: Option<Complex64>,
    pub depths: Vec<f64>,
    #[serde(default = "default_estimator")]
    pub estimator: EstimatorParam,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CountParams {
    pub count: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AzukawaParams {
    pub domain: DomainSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pole: Option<Complex64>,
    pub directions: usize,
    #[serde(default = "default_azukawa_t")]
    pub t: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonotonicityParams {
    pub pairs: Vec<NestedPair>,
    #[serde(default = "default_kernel")]
    pub kernel: KernelParam,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransformationParams {
    pub cases: Vec<MapCase>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SandwichParams {
    pub domains: Vec<DomainSpec>,
    #[serde(default = "default_sandwich_directions")]
    pub directions: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HausdorffParams {
    #[serde(default = "default_hausdorff_radius")]
    pub radius: f64,
    pub delta: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpansionParams {
    pub paths: Vec<PathSpec>,
    pub t: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GrowthParams {
    pub radii: Vec<f64>,
}

/// A check with its typed parameters.
#[derive(Clone, Debug, PartialEq)]
pub enum Check {
    Blocki(BlockiParams),
    BalancedIdentity(DomainKernelParams),
    KernelBusemann(DomainKernelParams),
    SublevelLimit(SublevelParams),
    GreenIdentity(CountParams),
    Azukawa(AzukawaParams),
    Monotonicity(MonotonicityParams),
    Transformation(TransformationParams),
    Sandwich(SandwichParams),
    Hausdorff(HausdorffParams),
    ModelComparison(CountParams),
    Expansion(ExpansionParams),
    VolumeGrowth(GrowthParams),
}

pub const CHECK_NAMES: [&str; 13] = [
    "blocki",
    "balanced_identity",
    "kernel_busemann",
    "sublevel_limit",
    "green_identity",
    "azukawa",
    "monotonicity",
    "transformation",
    "sandwich",
    "hausdorff",
    "model_comparison",
    "expansion",
    "volume_growth",
];

impl Check {
    pub fn parse(name: &str, params: Value) -> Result<Self> {
        fn p<T: serde::de::DeserializeOwned>(name: &str, v: Value) -> Result<T> {
            serde_json::from_value(v).map_err(|e| Error::MalformedParameters { check: name.into(), reason: e.to_string() })
        }
        Ok(match name {
            "blocki" => Self::Blocki(p(name, params)?),
            "balanced_identity" => Self::BalancedIdentity(p(name, params)?),
            "kernel_busemann" => Self::KernelBusemann(p(name, params)?),
            "sublevel_limit" => Self::SublevelLimit(p(name, params)?),
            "green_identity" => Self::GreenIdentity(p(name, params)?),
            "azukawa" => Self::Azukawa(p(name, params)?),
            "monotonicity" => Self::Monotonicity(p(name, params)?),
            "transformation" => Self::Transformation(p(name, params)?),
            "sandwich" => Self::Sandwich(p(name, params)?),
            "hausdorff" => Self::Hausdorff(p(name, params)?),
            "model_comparison" => Self::ModelComparison(p(name, params)?),
            "expansion" => Self::Expansion(p(name, params)?),
            "volume_growth" => Self::VolumeGrowth(p(name, params)?),
            other => return Err(Error::UnknownCheck(other.into())),
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Blocki(_) => "blocki",
            Self::BalancedIdentity(_) => "balanced_identity",
            Self::KernelBusemann(_) => "kernel_busemann",
            Self::SublevelLimit(_) => "sublevel_limit",
            Self::GreenIdentity(_) => "green_identity",
            Self::Azukawa(_) => "azukawa",
            Self::Monotonicity(_) => "monotonicity",
            Self::Transformation(_) => "transformation",
            Self::Sandwich(_) => "sandwich",
            Self::Hausdorff(_) => "hausdorff",
            Self::ModelComparison(_) => "model_comparison",
            Self::Expansion(_) => "expansion",
            Self::VolumeGrowth(_) => "volume_growth",
        }
    }

    pub fn params(&self) -> Value {
        let v = match self {
            Self::Blocki(p) => serde_json::to_value(p),
            Self::BalancedIdentity(p) | Self::KernelBusemann(p) => serde_json::to_value(p),
            Self::SublevelLimit(p) => serde_json::to_value(p),
            Self::GreenIdentity(p) | Self::ModelComparison(p) => serde_json::to_value(p),
            Self::Azukawa(p) => serde_json::to_value(p),
            Self::Monotonicity(p) => serde_json::to_value(p),
            Self::Transformation(p) => serde_json::to_value(p),
            Self::Sandwich(p) => serde_json::to_value(p),
            Self::Hausdorff(p) => serde_json::to_value(p),
            Self::Expansion(p) => serde_json::to_value(p),
            Self::VolumeGrowth(p) => serde_json::to_value(p),
        };
        v.unwrap_or(Value::Null)
    }

    pub fn run(&self, seed: u64) -> Result<CheckReport> {
        match self {
            Self::Blocki(p) => check_blocki(
                &p.domain,
                p.pole,
                &p.depths,
                &p.estimator.estimator(seed),
                &p.kernel.request(seed),
                p.equality,
                seed,
            ),
            Self::BalancedIdentity(p) => check_balanced_identity(&p.domain, &p.kernel.request(seed), seed),
            Self::KernelBusemann(p) => check_kernel_busemann(&p.domain, &p.kernel.request(seed), seed),
            Self::SublevelLimit(p) => check_sublevel_limit(&p.domain, p.pole, &p.depths, &p.estimator.estimator(seed), seed),
            Self::GreenIdentity(p) => check_green_identity(p.count, seed),
            Self::Azukawa(p) => check_azukawa(&p.domain, p.pole, p.directions, &p.t, seed),
            Self::Monotonicity(p) => check_monotonicity(&p.pairs, &p.kernel.request(seed), seed),
            Self::Transformation(p) => check_transformation(&p.cases, seed),
            Self::Sandwich(p) => check_sandwich(&p.domains, p.directions, seed),
            Self::Hausdorff(p) => check_hausdorff(p.radius, p.delta, seed),
            Self::ModelComparison(p) => check_model_comparison(p.count, seed),
            Self::Expansion(p) => check_expansion(&p.paths, &p.t, seed),
            Self::VolumeGrowth(p) => check_volume_growth(&p.radii, seed),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteEntry {
    pub id: String,
    pub check: Check,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteConfig {
    pub seed: u64,
    /// tolerance overrides keyed by check id or check name
    pub tolerances: BTreeMap<String, f64>,
    pub checks: Vec<SuiteEntry>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSuite {
    #[serde(default = "default_seed")]
    seed: u64,
    #[serde(default)]
    tolerances: BTreeMap<String, f64>,
    #[serde(default)]
    checks: Vec<RawEntry>,
}

fn default_seed() -> u64 {
    DEFAULT_SEED
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEntry {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    id: Option<String>,
    check: String,
    #[serde(default)]
    params: Value,
}

impl SuiteConfig {
    pub fn empty(seed: u64) -> Self {
        Self { seed, tolerances: BTreeMap::new(), checks: Vec::new() }
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let raw: RawSuite = serde_json::from_str(s)?;
        let mut config = Self { seed: raw.seed, tolerances: raw.tolerances, checks: Vec::new() };
        for entry in raw.checks {
            let check = Check::parse(&entry.check, entry.params)?;
            config.push(entry.id, check)?;
        }
        for (key, tol) in &config.tolerances {
            if !(tol.is_finite() && *tol >= 0.0) {
                return Err(Error::InvalidParameter(format!("tolerance for `{key}` must be non-negative, got {tol}")));
            }
            if !config.checks.iter().any(|e| e.id == *key || e.check.name() == key) {
                return Err(Error::UnknownCheck(key.clone()));
            }
        }
        Ok(config)
    }

    pub fn to_json(&self) -> Value {
        let checks: Vec<RawEntry> = self
            .checks
            .iter()
            .map(|e| RawEntry { id: Some(e.id.clone()), check: e.check.name().into(), params: e.check.params() })
            .collect();
        serde_json::to_value(RawSuite { seed: self.seed, tolerances: self.tolerances.clone(), checks }).unwrap_or(Value::Null)
    }

    /// Adds a check; without an explicit id the check name is used, with a
    /// numeric suffix when it repeats.
    pub fn push(&mut self, id: Option<String>, check: Check) -> Result<()> {
        let id = match id {
            Some(id) => id,
            None => {
                let base = check.name().to_string();
                let mut id = base.clone();
                let mut k = 2;
                while self.checks.iter().any(|e| e.id == id) {
                    id = format!("{base}_{k}");
                    k += 1;
                }
                id
            }
        };
        if id.is_empty() || !id.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-') {
            return Err(Error::InvalidParameter(format!("check id `{id}` must be non-empty and use [A-Za-z0-9_-]")));
        }
        if self.checks.iter().any(|e| e.id == id) {
            return Err(Error::InvalidParameter(format!("duplicate check id `{id}`")));
        }
        self.checks.push(SuiteEntry { id, check });
        Ok(())
    }

    fn add(&mut self, id: &str, check: Check) {
        self.push(Some(id.into()), check).expect("default suite ids are unique");
    }

    /// At least one check per verified statement, at the parameters of the
    /// acceptance criteria.
    pub fn default_suite(seed: u64) -> Self {
        let disk = DomainSpec::Disk;
        let ball = DomainSpec::Ball(2);
        let poly = DomainSpec::Polydisc(vec![1.0, 1.0]);
        let kinked = DomainSpec::kinked_example();
        let gram = KernelParam::GramMonteCarlo { degree: 2, samples: 2_000_000 };
        let pole = Complex64::new(0.3, 0.0);
        let c = |x: f64, y: f64| Complex64::new(x, y);
        let pt = |xs: &[f64]| CPoint::real(xs).expect("finite");

        let mut s = Self::empty(seed);
        for (id, domain) in [("blocki_disk", &disk), ("blocki_polydisc", &poly)] {
            s.add(
                id,
                Check::Blocki(BlockiParams {
                    domain: domain.clone(),
                    pole: None,
                    depths: vec![1.0, 2.0, 3.0],
                    estimator: EstimatorParam::Exact,
                    kernel: KernelParam::Exact,
                    equality: true,
                }),
            );
        }
        s.add(
            "blocki_disk_off_center",
            Check::Blocki(BlockiParams {
                domain: disk.clone(),
                pole: Some(pole),
                depths: vec![1.0, 2.0, 3.0],
                estimator: EstimatorParam::Exact,
                kernel: KernelParam::Exact,
                equality: false,
            }),
        );
        s.add(
            "blocki_kinked",
            Check::Blocki(BlockiParams {
                domain: kinked.clone(),
                pole: None,
                depths: vec![2.0],
                estimator: EstimatorParam::Quadrature,
                kernel: gram.clone(),
                equality: false,
            }),
        );
        for (id, domain) in [("identity_disk", &disk), ("identity_ball", &ball), ("identity_polydisc", &poly)] {
            s.add(id, Check::BalancedIdentity(DomainKernelParams { domain: domain.clone(), kernel: KernelParam::Exact }));
        }
        s.add("identity_kinked", Check::BalancedIdentity(DomainKernelParams { domain: kinked.clone(), kernel: gram }));
        for (id, domain) in [("busemann_disk", &disk), ("busemann_ball", &ball), ("busemann_polydisc", &poly)] {
            s.add(id, Check::KernelBusemann(DomainKernelParams { domain: domain.clone(), kernel: KernelParam::Exact }));
        }
        s.add("model_comparison", Check::ModelComparison(CountParams { count: 100 }));
        for (id, domain) in [("sublevel_disk", &disk), ("sublevel_polydisc", &poly)] {
            s.add(
                id,
                Check::SublevelLimit(SublevelParams {
                    domain: domain.clone(),
                    pole: None,
                    depths: vec![1.0, 2.0, 3.0, 4.0, 5.0],
                    estimator: EstimatorParam::Exact,
                }),
            );
        }
        s.add(
            "sublevel_disk_off_center",
            Check::SublevelLimit(SublevelParams {
                domain: disk.clone(),
                pole: Some(pole),
                depths: vec![2.0, 3.0, 4.0],
                estimator: EstimatorParam::MonteCarlo { samples: 1_000_000 },
            }),
        );
        s.add("green_identity", Check::GreenIdentity(CountParams { count: 100 }));
        for (id, domain) in [("azukawa_ball", &ball), ("azukawa_polydisc", &poly), ("azukawa_kinked", &kinked)] {
            s.add(id, Check::Azukawa(AzukawaParams { domain: domain.clone(), pole: None, directions: 50, t: AZUKAWA_T.to_vec() }));
        }
        s.add(
            "azukawa_disk_off_center",
            Check::Azukawa(AzukawaParams { domain: disk.clone(), pole: Some(pole), directions: 50, t: AZUKAWA_T.to_vec() }),
        );
        let ellipse = DomainSpec::balanced(crate::geometry::GaugeExpr::euclidean(&[0.8, 0.6]), 2).expect("valid ellipsoid");
        s.add(
            "monotonicity",
            Check::Monotonicity(MonotonicityParams {
                pairs: vec![
                    NestedPair { inner: ball.clone(), outer: poly.clone(), point: pt(&[0.2, 0.1]) },
                    NestedPair { inner: DomainSpec::Polydisc(vec![0.5, 0.5]), outer: ball.clone(), point: pt(&[0.1, -0.2]) },
                    NestedPair { inner: DomainSpec::Polydisc(vec![0.5]), outer: disk.clone(), point: pt(&[0.3]) },
                    NestedPair { inner: ellipse, outer: ball.clone(), point: pt(&[0.3, 0.2]) },
                    NestedPair { inner: DomainSpec::Polydisc(vec![0.5, 0.8]), outer: poly.clone(), point: pt(&[0.0, 0.6]) },
                ],
                kernel: KernelParam::Exact,
            }),
        );
        s.add(
            "transformation",
            Check::Transformation(TransformationParams {
                cases: vec![
                    MapCase {
                        map: NamedMap::DiskAutomorphism { a: c(0.5, -0.2), rotation: 0.7 },
                        point: CPoint::scalar(c(0.2, 0.1)).expect("finite"),
                    },
                    MapCase { map: NamedMap::Cayley, point: CPoint::scalar(c(0.3, -0.2)).expect("finite") },
                    MapCase { map: NamedMap::Scaling { domain: ball.clone(), factor: 2.0 }, point: pt(&[0.2, 0.1]) },
                ],
            }),
        );
        s.add("sandwich", Check::Sandwich(SandwichParams { domains: vec![ball, poly, kinked], directions: SANDWICH_DIRECTIONS }));
        s.add("hausdorff", Check::Hausdorff(HausdorffParams { radius: 1.0, delta: 1e-2 }));
        let path = |cs: &[Complex64]| PathSpec::new(cs.to_vec()).expect("interior base point");
        s.add(
            "expansion",
            Check::Expansion(ExpansionParams {
                paths: vec![path(&[c(0.0, 0.0), c(1.0, 0.0)]), path(&[c(0.3, 0.0), c(0.91, 0.0)]), path(&[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0)])],
                t: vec![1e-1, 1e-2, 1e-3],
            }),
        );
        s.add("volume_growth", Check::VolumeGrowth(GrowthParams { radii: vec![3.0, 4.0, 5.0] }));
        s
    }

    fn tolerance_for(&self, entry: &SuiteEntry) -> Option<f64> {
        self.tolerances.get(&entry.id).or_else(|| self.tolerances.get(entry.check.name())).copied()
    }
}

#[derive(Clone, Debug)]
pub struct SuiteResult {
    pub id: String,
    pub report: CheckReport,
}

#[derive(Clone, Debug)]
pub struct SuiteRun {
    pub seed: u64,
    pub results: Vec<SuiteResult>,
    pub total_ms: u64,
}

impl SuiteRun {
    pub fn passed(&self) -> usize {
        self.results.iter().filter(|r| r.report.passed).count()
    }

    pub fn all_passed(&self) -> bool {
        self.results.iter().all(|r| r.report.passed)
    }
}

/// Runs every check of the suite. A check whose computation fails yields a
/// failed report carrying the error.
pub fn run_suite(config: &SuiteConfig) -> SuiteRun {
    let start = Instant::now();
    let results = config
        .checks
        .par_iter()
        .map(|entry| {
            let seed = derive_seed(config.seed, &entry.id);
            let t = Instant::now();
            let mut report = entry.check.run(seed).unwrap_or_else(|e| {
                ReportBuilder::new(entry.check.name(), "computation failed", MarginScale::Absolute, 0.0)
                    .input("params", entry.check.params())
                    .failed(seed, &e)
            });
            if let Some(tol) = config.tolerance_for(entry) {
                report = report.with_tolerance(tol);
            }
            report.runtime_ms = t.elapsed().as_millis() as u64;
            SuiteResult { id: entry.id.clone(), report }
        })
        .collect();
    SuiteRun { seed: config.seed, results, total_ms: start.elapsed().as_millis() as u64 }
}

/// Deterministic per-run summary; timing goes only under `timing`.
pub fn summary_json(config: &SuiteConfig, run: &SuiteRun) -> Value {
    let checks: Vec<Value> = run
        .results
        .iter()
        .map(|r| {
            json!({
                "id": r.id,
                "name": r.report.name,
                "passed": r.report.passed,
                "min_margin": r.report.min_margin(),
                "tolerance": r.report.tolerance,
                "scale": r.report.scale,
                "seed": r.report.seed,
                "error": r.report.error,
            })
        })
        .collect();
    let timing: BTreeMap<&str, u64> = run.results.iter().map(|r| (r.id.as_str(), r.report.runtime_ms)).collect();
    json!({
        "schema_version": super::output::SCHEMA_VERSION,
        "tool_version": env!("CARGO_PKG_VERSION"),
        "seed": run.seed,
        "config": config.to_json(),
        "counts": { "total": run.results.len(), "passed": run.passed(), "failed": run.results.len() - run.passed() },
        "checks": checks,
        "timing": { "total_ms": run.total_ms, "checks_ms": timing },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_rejects_unknown_and_malformed() {
        assert!(matches!(SuiteConfig::from_json(r#"{"checks":[{"check":"nope"}]}"#), Err(Error::UnknownCheck(_))));
        assert!(matches!(
            SuiteConfig::from_json(r#"{"checks":[{"check":"green_identity","params":{"cnt":3}}]}"#),
            Err(Error::MalformedParameters { .. })
        ));
        assert!(matches!(SuiteConfig::from_json(r#"{"tolerances":{"x":1.0}}"#), Err(Error::UnknownCheck(_))));
        let c = SuiteConfig::from_json(r#"{"checks":[{"check":"green_identity","params":{"count":3}},{"check":"green_identity","params":{"count":4}}]}"#)
            .unwrap();
        assert_eq!(c.checks[1].id, "green_identity_2");
        assert_eq!(c.seed, DEFAULT_SEED);
    }

    #[test]
    fn default_suite_round_trips() {
        let s = SuiteConfig::default_suite(3);
        let back = SuiteConfig::from_json(&s.to_json().to_string()).unwrap();
        assert_eq!(back, s);
        let names: std::collections::BTreeSet<_> = s.checks.iter().map(|e| e.check.name()).collect();
        assert_eq!(names.len(), CHECK_NAMES.len());
    }

    #[test]
    fn empty_suite_and_forced_failure() {
        let run = run_suite(&SuiteConfig::empty(1));
        assert!(run.results.is_empty() && run.all_passed());

        let cfg = r#"{"seed":5,"tolerances":{"mc":0.0},"checks":[{"id":"mc","check":"sublevel_limit",
            "params":{"domain":{"kind":"disk"},"pole":[0.3,0.0],"depths":[2,3,4],"estimator":{"kind":"monte_carlo","samples":20000}}}]}"#;
        let run = run_suite(&SuiteConfig::from_json(cfg).unwrap());
        assert!(!run.all_passed());
    }

    #[test]
    fn seeds_depend_on_id_only() {
        let cfg = |extra: &str| {
            format!(
                r#"{{"seed":5,"checks":[{extra}{{"id":"g","check":"green_identity","params":{{"count":5}}}}]}}"#
            )
        };
        let a = run_suite(&SuiteConfig::from_json(&cfg("")).unwrap());
        let b = run_suite(&SuiteConfig::from_json(&cfg(r#"{"check":"volume_growth","params":{"radii":[1,2]}},"#)).unwrap());
        assert_eq!(a.results[0].report, b.results.iter().find(|r| r.id == "g").unwrap().report);
    }
}
