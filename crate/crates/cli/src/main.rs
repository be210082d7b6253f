mod parse;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use bergkern::bergman::{kernel, GramQuadrature, KernelRequest, DEFAULT_SERIES_DEGREE};
use bergkern::geometry::{CPoint, DomainSpec};
use bergkern::green::GreenFunction;
use bergkern::metrics::{azukawa, busemann_density, indicatrix_volume_best, kobayashi_origin, FinslerIndicatrix, AZUKAWA_T};
use bergkern::teich_model::{finsler_norm, k0, teich_distance, DiskPoint};
use bergkern::verifier::output::{format_float, to_json_string, write_suite_outputs, SCHEMA_VERSION};
use bergkern::verifier::{run_suite, CheckReport, SuiteConfig, DEFAULT_SEED};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "bergkern", version, about = "Bergman kernels, Green functions and invariant metrics with verified identities")]
struct Cli {
    /// Global seed [default: $BERGKERN_SEED, else 7]
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads [default: available parallelism]
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(clap::Args)]
struct Output {
    /// Machine-readable format; printed to stdout unless --output is given
    #[arg(long = "out", value_enum)]
    format: Option<Format>,
    /// File for machine-readable output (json unless --out csv)
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Exact,
    Reinhardt,
    Gram,
    Auto,
}

#[derive(Clone, Copy, ValueEnum)]
enum MetricKind {
    Kobayashi,
    Azukawa,
    Busemann,
    Distance,
}

#[derive(Clone, Copy, ValueEnum)]
enum Model {
    Disk,
}

#[derive(Subcommand)]
enum Command {
    /// Diagonal Bergman kernel density
    Kernel {
        /// disk | ball:N | polydisc:r1,r2 | half-plane | kinked | JSON | file
        #[arg(long, value_parser = parse::domain)]
        domain: DomainSpec,
        /// Comma-separated complex coordinates, e.g. 0.3+0.1i,0
        #[arg(long, value_parser = parse::point)]
        point: CPoint,
        #[arg(long, value_enum, default_value = "auto")]
        method: Method,
        /// Polynomial degree for the series and Gram methods
        #[arg(long, default_value_t = DEFAULT_SERIES_DEGREE)]
        degree: usize,
        /// Monte Carlo samples for the Gram method (0 selects the tensor rule)
        #[arg(long, default_value_t = 0)]
        samples: usize,
        /// Angular panels of the tensor rule
        #[arg(long, default_value_t = 8)]
        panels: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Pluricomplex Green function
    Green {
        #[arg(long, value_parser = parse::domain)]
        domain: DomainSpec,
        /// Pole; away from the origin only for the disk
        #[arg(long, value_parser = parse::point)]
        pole: Option<CPoint>,
        #[arg(long, value_parser = parse::point)]
        point: CPoint,
        /// Permit evaluation at the pole (value -inf)
        #[arg(long)]
        allow_pole: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Invariant metrics at a point
    Metric {
        #[arg(long, value_parser = parse::domain, conflicts_with = "model")]
        domain: Option<DomainSpec>,
        /// Use the disk model (exact formulas)
        #[arg(long, value_enum)]
        model: Option<Model>,
        #[arg(long, value_enum, default_value = "kobayashi")]
        kind: MetricKind,
        #[arg(long, value_parser = parse::point)]
        point: CPoint,
        /// Tangent vector
        #[arg(long, value_parser = parse::point)]
        vector: Option<CPoint>,
        /// Second point, for --kind distance
        #[arg(long, value_parser = parse::point)]
        to: Option<CPoint>,
        #[command(flatten)]
        out: Output,
    },
    /// Run a verification suite and write per-check reports
    Verify {
        /// `default` or a suite JSON file
        #[arg(long, default_value = "default")]
        suite: String,
        /// Comma-separated id=tolerance pairs, or a JSON object / file of them
        #[arg(long)]
        tol_overrides: Option<String>,
        /// Output directory
        #[arg(long = "out", default_value = "bergkern-out")]
        out: PathBuf,
    },
    /// Summarise and re-check a verify output directory
    Report {
        #[arg(long, default_value = "bergkern-out")]
        input: PathBuf,
    },
}

/// Failure carrying its exit status.
#[derive(Debug)]
struct Fail(u8, String);

impl<E: std::fmt::Display> From<E> for Fail {
    fn from(e: E) -> Self {
        Fail(2, e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Fail(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}

/// Seed from the flag, else from `BERGKERN_SEED`; `None` when neither is set.
fn explicit_seed(cli_seed: Option<u64>) -> Result<Option<u64>, Fail> {
    if cli_seed.is_some() {
        return Ok(cli_seed);
    }
    match std::env::var("BERGKERN_SEED") {
        Ok(v) => v.trim().parse().map(Some).map_err(|_| Fail(2, format!("BERGKERN_SEED must be an unsigned integer, got `{v}`"))),
        Err(_) => Ok(None),
    }
}

fn run(cli: Cli) -> Result<u8, Fail> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(Fail(2, "--threads must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    let explicit = explicit_seed(cli.seed)?;
    let seed = explicit.unwrap_or(DEFAULT_SEED);
    let start = Instant::now();
    match cli.command {
        Command::Kernel { domain, point, method, degree, samples, panels, out } => {
            let request = match method {
                Method::Exact => KernelRequest::Exact,
                Method::Reinhardt => KernelRequest::Reinhardt { degree },
                Method::Gram if samples > 0 => KernelRequest::Gram { degree, quadrature: GramQuadrature::MonteCarlo { samples, seed } },
                Method::Gram => KernelRequest::Gram { degree, quadrature: GramQuadrature::Tensor { panels } },
                Method::Auto => KernelRequest::Auto,
            };
            let k = kernel(&domain, &point, &request)?;
            let human = sig7(k.density);
            let fields = vec![
                ("density", Value::from(k.density)),
                ("err_est", Value::from(k.err_est)),
                ("method", serde_json::to_value(k.method)?),
                ("degree", Value::from(k.degree)),
            ];
            let config = json!({ "domain": domain, "point": point, "request": request, "seed": seed });
            emit("kernel", config, fields, &human, &out, start)
        }
        Command::Green { domain, pole, point, allow_pole, out } => {
            let pole_z = match &pole {
                Some(p) if !p.is_origin() => {
                    if p.dim() != 1 {
                        return Err(Fail(2, "poles away from the origin are only available for the disk".into()));
                    }
                    Some(p.coords()[0])
                }
                _ => None,
            };
            let green = match pole_z {
                Some(w) if domain == DomainSpec::Disk => GreenFunction::disk(w)?,
                Some(_) => return Err(Fail(2, "poles away from the origin are only available for the disk".into())),
                None => GreenFunction::origin(domain.clone())?,
            };
            let g = green.eval(&point)?;
            if g.is_pole() && !allow_pole {
                return Err(Fail(2, "point is the pole (value -inf); pass --allow-pole to report it".into()));
            }
            let human = if g.is_pole() { "-inf".to_string() } else { sig7(g.0) };
            let config = json!({ "domain": domain, "pole": green.pole(), "point": point });
            emit("green", config, vec![("green", serde_json::to_value(g)?)], &human, &out, start)
        }
        Command::Metric { domain, model, kind, point, vector, to, out } => {
            let (fields, human) = metric(domain.as_ref(), model, kind, &point, vector.as_ref(), to.as_ref())?;
            let config = json!({ "domain": domain, "model": model.map(|_| "disk"), "point": point, "vector": vector, "to": to });
            emit("metric", config, fields, &human, &out, start)
        }
        Command::Verify { suite, tol_overrides, out } => verify(&suite, tol_overrides.as_deref(), &out, explicit),
        Command::Report { input } => report(&input),
    }
}

type Fields = Vec<(&'static str, Value)>;

fn metric(
    domain: Option<&DomainSpec>,
    model: Option<Model>,
    kind: MetricKind,
    point: &CPoint,
    vector: Option<&CPoint>,
    to: Option<&CPoint>,
) -> Result<(Fields, String), Fail> {
    let need_vector = || vector.ok_or_else(|| Fail(2, "--vector is required for this metric".into()));
    if model.is_some() || domain == Some(&DomainSpec::Disk) && !point.is_origin() {
        if point.dim() != 1 {
            return Err(Fail(2, "disk model points are one complex number".into()));
        }
        let z = DiskPoint::new(point.coords()[0])?;
        return match kind {
            MetricKind::Distance => {
                let w = to.ok_or_else(|| Fail(2, "--to is required for --kind distance".into()))?;
                let w = DiskPoint::new(w.coords()[0])?;
                let d = teich_distance(z, w);
                Ok((vec![("distance", d.into()), ("k0", k0(z, w).into())], sig7(d)))
            }
            MetricKind::Kobayashi | MetricKind::Azukawa => {
                let v = need_vector()?;
                let f = finsler_norm(z, v.coords()[0]);
                Ok((vec![("norm", f.into())], sig7(f)))
            }
            MetricKind::Busemann => {
                let ind = FinslerIndicatrix::disk_model(z.z())?;
                let b = busemann_density(&ind, indicatrix_volume_best(&ind)?)?;
                Ok((vec![("busemann_density", b.value.into()), ("std_error", b.std_error.into())], sig7(b.value)))
            }
        };
    }
    let domain = domain.ok_or_else(|| Fail(2, "either --domain or --model is required".into()))?;
    match kind {
        MetricKind::Kobayashi => {
            let v = kobayashi_origin(domain, point, need_vector()?)?;
            Ok((vec![("norm", v.into())], sig7(v)))
        }
        MetricKind::Azukawa => {
            if !point.is_origin() {
                return Err(Fail(2, "the Azukawa metric of a general domain is only available at the origin".into()));
            }
            let a = azukawa(&GreenFunction::origin(domain.clone())?, need_vector()?, &AZUKAWA_T)?;
            Ok((vec![("norm", a.value.into()), ("spread", a.spread.into())], sig7(a.value)))
        }
        MetricKind::Busemann => {
            if !point.is_origin() {
                return Err(Fail(2, "Busemann densities of a general domain are only available at the origin".into()));
            }
            let ind = FinslerIndicatrix::balanced_origin(domain)?;
            let b = busemann_density(&ind, indicatrix_volume_best(&ind)?)?;
            Ok((vec![("busemann_density", b.value.into()), ("std_error", b.std_error.into())], sig7(b.value)))
        }
        MetricKind::Distance => Err(Fail(2, "distances are available for --model disk only".into())),
    }
}

/// Seven significant digits, positional when readable.
fn sig7(x: f64) -> String {
    if !x.is_finite() {
        return format_float(x);
    }
    if x == 0.0 {
        return "0".into();
    }
    let e = x.abs().log10().floor() as i32;
    if (-4..7).contains(&e) {
        format!("{:.*}", (6 - e).max(0) as usize, x)
    } else {
        format!("{x:.6e}")
    }
}

fn document(command: &str, config: Value, fields: &Fields, start: Instant) -> Value {
    let results: serde_json::Map<String, Value> = fields.iter().map(|(k, v)| (k.to_string(), v.clone())).collect();
    json!({
        "schema_version": SCHEMA_VERSION,
        "tool_version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "config": config,
        "results": results,
        "timing": { "elapsed_ms": start.elapsed().as_millis() as u64 },
    })
}

fn csv(fields: &Fields) -> String {
    let header: Vec<&str> = fields.iter().map(|f| f.0).collect();
    let row: Vec<String> = fields
        .iter()
        .map(|(_, v)| match v {
            Value::Number(n) => n.as_f64().map_or_else(|| n.to_string(), |x| if n.is_f64() { format_float(x) } else { n.to_string() }),
            Value::String(s) => s.clone(),
            other => other.to_string(),
        })
        .collect();
    format!("{}\n{}\n", header.join(","), row.join(","))
}

fn emit(command: &str, config: Value, fields: Fields, human: &str, out: &Output, start: Instant) -> Result<u8, Fail> {
    let format = out.format.unwrap_or(Format::Json);
    let render = |doc: &Value| -> Result<String, Fail> {
        Ok(match format {
            Format::Json => to_json_string(doc)?,
            Format::Csv => csv(&fields),
        })
    };
    let doc = document(command, config, &fields, start);
    match (&out.output, out.format) {
        (Some(path), _) => {
            std::fs::write(path, render(&doc)?)?;
            println!("{human}");
        }
        (None, Some(_)) => print!("{}", render(&doc)?),
        (None, None) => println!("{human}"),
    }
    Ok(0)
}

fn tolerance_overrides(spec: &str) -> Result<BTreeMap<String, f64>, Fail> {
    let text = if Path::new(spec).is_file() { std::fs::read_to_string(spec)? } else { spec.to_string() };
    if text.trim_start().starts_with('{') {
        return Ok(serde_json::from_str(&text)?);
    }
    text.split(',')
        .map(|kv| {
            let (k, v) = kv.split_once('=').ok_or_else(|| Fail(2, format!("tolerance override `{kv}` is not id=value")))?;
            let v: f64 = v.trim().parse().map_err(|_| Fail(2, format!("bad tolerance in `{kv}`")))?;
            Ok((k.trim().to_string(), v))
        })
        .collect()
}

/// A seed given on the command line or in the environment overrides the
/// seed of a suite file.
fn verify(suite: &str, overrides: Option<&str>, out: &Path, seed: Option<u64>) -> Result<u8, Fail> {
    let mut config = if suite == "default" {
        SuiteConfig::default_suite(seed.unwrap_or(DEFAULT_SEED))
    } else {
        let text = std::fs::read_to_string(suite).map_err(|e| Fail(2, format!("{suite}: {e}")))?;
        let mut config = SuiteConfig::from_json(&text)?;
        if let Some(s) = seed {
            config.seed = s;
        }
        config
    };
    if let Some(spec) = overrides {
        let mut merged = config.to_json();
        let tols = tolerance_overrides(spec)?;
        for (k, v) in tols {
            merged["tolerances"][k] = v.into();
        }
        config = SuiteConfig::from_json(&merged.to_string())?;
    }
    let run = run_suite(&config);
    write_suite_outputs(out, &config, &run)?;
    for r in &run.results {
        let rep = &r.report;
        let status = if rep.passed { "PASS" } else { "FAIL" };
        let detail = rep.error.as_deref().map_or_else(|| format!("min margin {}", sig7(rep.min_margin())), |e| format!("error: {e}"));
        println!("{status} {:<28} {detail} ({} ms)", r.id, rep.runtime_ms);
    }
    println!("{} of {} checks passed; reports in {}", run.passed(), run.results.len(), out.display());
    Ok(if run.all_passed() { 0 } else { 1 })
}

fn report(dir: &Path) -> Result<u8, Fail> {
    let summary: Value = serde_json::from_str(&std::fs::read_to_string(dir.join("summary.json"))?)?;
    let checks = summary["checks"].as_array().ok_or_else(|| Fail(2, "summary.json has no checks".into()))?;
    let mut failures = 0;
    for c in checks {
        let id = c["id"].as_str().unwrap_or_default();
        let text = std::fs::read_to_string(dir.join(format!("{id}.json")))?;
        let rep: CheckReport = serde_json::from_str(&text)?;
        let sound = rep.margins.iter().all(|m| rep.recompute_margin(m).is_some_and(|v| (v - m.value).abs() <= 1e-12));
        let ok = rep.passed && sound;
        if !ok {
            failures += 1;
        }
        println!(
            "{} {:<28} {:<28} margins {:>3}  min {}{}",
            if ok { "PASS" } else { "FAIL" },
            id,
            rep.name,
            rep.margins.len(),
            sig7(rep.min_margin()),
            if sound { "" } else { "  (stored margins do not match quantities)" }
        );
    }
    println!("{} of {} checks passed (seed {})", checks.len() - failures, checks.len(), summary["seed"]);
    Ok(if failures == 0 { 0 } else { 1 })
}
