//! Acceptance criteria 1-10. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any fails.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use bergkern::bergman::{exact_kernel, reinhardt_kernel, GramQuadrature, KernelRequest, NamedMap};
use bergkern::geometry::{CPoint, DomainSpec, GaugeExpr};
use bergkern::green::{blocki_lower_bound, GreenFunction, SublevelEstimator};
use bergkern::metrics::AZUKAWA_T;
use bergkern::verifier::checks::*;
use bergkern::verifier::output::to_json_string;
use bergkern::verifier::suite::summary_json;
use bergkern::verifier::{run_suite, CheckReport, MarginScale, SuiteConfig};
use num_complex::Complex64;

type Outcome = Result<String, String>;

fn require(report: &CheckReport) -> Result<(), String> {
    if report.passed {
        Ok(())
    } else {
        Err(format!("{} failed: min margin {:e}, error {:?}", report.name, report.min_margin(), report.error))
    }
}

fn criterion_1() -> Outcome {
    let k = reinhardt_kernel(&DomainSpec::Disk, &CPoint::real(&[0.5]).unwrap(), 12).map_err(|e| e.to_string())?;
    let expected = 1.0 / (PI * 0.5625);
    let diff = (k.density - expected).abs();
    if diff <= 1e-4 {
        Ok(format!("K = {:.10}, |K - 1/(pi 0.5625)| = {diff:.2e}", k.density))
    } else {
        Err(format!("K = {}, off by {diff:e}", k.density))
    }
}

fn criterion_2() -> Outcome {
    let mut worst: f64 = 0.0;
    for spec in [DomainSpec::Disk, DomainSpec::Polydisc(vec![1.0, 1.0])] {
        let green = GreenFunction::origin(spec.clone()).unwrap();
        let k = exact_kernel(&spec, &CPoint::origin(spec.dim())).unwrap().density;
        for est in [SublevelEstimator::Exact, SublevelEstimator::Quadrature] {
            for a in [1.0, 2.0, 3.0] {
                let lb = blocki_lower_bound(&green, a, &est).map_err(|e| e.to_string())?;
                worst = worst.max(((lb.value - k) / k).abs());
            }
        }
    }
    if worst > 1e-9 {
        return Err(format!("disk/polydisc relative deviation {worst:e}"));
    }
    let request = KernelRequest::Gram { degree: 2, quadrature: GramQuadrature::MonteCarlo { samples: 2_000_000, seed: 21 } };
    let r = check_blocki(&DomainSpec::kinked_example(), None, &[2.0], &SublevelEstimator::Quadrature, &request, false, 21)
        .map_err(|e| e.to_string())?;
    require(&r)?;
    Ok(format!("disk/polydisc max rel deviation {worst:.1e}; kinked margin {:.3} sigma (2e6 samples)", r.min_margin()))
}

fn criterion_3() -> Outcome {
    let depths = [1.0, 2.0, 3.0, 4.0, 5.0];
    for spec in [DomainSpec::Disk, DomainSpec::Polydisc(vec![1.0, 1.0])] {
        require(&check_sublevel_limit(&spec, None, &depths, &SublevelEstimator::Exact, 0).map_err(|e| e.to_string())?)?;
    }
    let est = SublevelEstimator::MonteCarlo { samples: 1_000_000, seed: 33 };
    let r = check_sublevel_limit(&DomainSpec::Disk, Some(Complex64::new(0.3, 0.0)), &[2.0, 3.0, 4.0], &est, 33)
        .map_err(|e| e.to_string())?;
    require(&r)?;
    let e = r.quantity("extrapolated").unwrap();
    Ok(format!(
        "closed forms exact; pole 0.3: limit {:.5} +- {:.5} vs {:.5} ({:.2} sigma)",
        e.value,
        e.error,
        r.quantity("indicatrix_volume").unwrap().value,
        -r.min_margin()
    ))
}

fn criterion_4() -> Outcome {
    let r = check_model_comparison(100, 44).map_err(|e| e.to_string())?;
    require(&r)?;
    let factors_ok = r.margins.iter().filter(|m| m.label.ends_with(".upper")).all(|m| {
        let k = r.quantity(&m.lhs).unwrap().value;
        let u = r.quantity(&m.rhs).unwrap().value;
        ((u / k) - 9.0).abs() <= 1e-12 * 9.0
    });
    if !factors_ok {
        return Err("upper factor differs from 9".into());
    }
    let lower = r.margins.iter().filter(|m| m.label.ends_with(".lower_equality")).map(|m| -m.value).fold(0.0, f64::max);
    Ok(format!("102 points; max relative lower-bound deviation {lower:.1e}; upper factor 9"))
}

fn criterion_5() -> Outcome {
    let r = check_green_identity(100, 55).map_err(|e| e.to_string())?;
    require(&r)?;
    Ok(format!("100 pairs; max |g - log k0| = {:.1e}", -r.min_margin()))
}

fn criterion_6() -> Outcome {
    let mut worst: f64 = 0.0;
    for spec in [DomainSpec::Ball(2), DomainSpec::Polydisc(vec![1.0, 1.0]), DomainSpec::kinked_example()] {
        let r = check_azukawa(&spec, None, 50, &AZUKAWA_T, 66).map_err(|e| e.to_string())?;
        require(&r)?;
        worst = worst.max(-r.min_margin());
    }
    Ok(format!("ball, polydisc, kinked x 50 directions; max rel error {worst:.1e}"))
}

fn criterion_7() -> Outcome {
    let mut worst: f64 = 0.0;
    for spec in [DomainSpec::Disk, DomainSpec::Ball(2), DomainSpec::Ball(3), DomainSpec::Polydisc(vec![1.0, 1.0])] {
        let r = check_balanced_identity(&spec, &KernelRequest::Exact, 0).map_err(|e| e.to_string())?;
        require(&r)?;
        worst = worst.max(-r.min_margin());
    }
    // closed forms agree to round-off in the product K V
    if worst > 4.0 * f64::EPSILON {
        return Err(format!("closed-form identity off by {worst:e}"));
    }
    let request = KernelRequest::Gram { degree: 2, quadrature: GramQuadrature::MonteCarlo { samples: 2_000_000, seed: 77 } };
    let r = check_balanced_identity(&DomainSpec::kinked_example(), &request, 77).map_err(|e| e.to_string())?;
    require(&r)?;
    Ok(format!(
        "closed forms |KV - 1| <= {worst:.1e}; kinked KV = {:.5} (tolerance 2%)",
        r.quantity("kernel_times_volume").unwrap().value
    ))
}

fn criterion_8() -> Outcome {
    let ball = DomainSpec::Ball(2);
    let poly = DomainSpec::Polydisc(vec![1.0, 1.0]);
    let pt = |xs: &[f64]| CPoint::real(xs).unwrap();
    let ellipse = DomainSpec::balanced(GaugeExpr::euclidean(&[0.8, 0.6]), 2).unwrap();
    let pairs = vec![
        NestedPair { inner: ball.clone(), outer: poly.clone(), point: pt(&[0.2, 0.1]) },
        NestedPair { inner: DomainSpec::Polydisc(vec![0.5, 0.5]), outer: ball.clone(), point: pt(&[0.1, -0.2]) },
        NestedPair { inner: DomainSpec::Polydisc(vec![0.5]), outer: DomainSpec::Disk, point: pt(&[0.3]) },
        NestedPair { inner: ellipse, outer: ball.clone(), point: pt(&[0.3, 0.2]) },
        NestedPair { inner: DomainSpec::Polydisc(vec![0.5, 0.8]), outer: poly, point: pt(&[0.0, 0.6]) },
    ];
    let m = check_monotonicity(&pairs, &KernelRequest::Exact, 88).map_err(|e| e.to_string())?;
    require(&m)?;
    let c = |x: f64, y: f64| CPoint::scalar(Complex64::new(x, y)).unwrap();
    let cases = vec![
        MapCase { map: NamedMap::DiskAutomorphism { a: Complex64::new(0.5, -0.2), rotation: 0.7 }, point: c(0.2, 0.1) },
        MapCase { map: NamedMap::Cayley, point: c(0.3, -0.2) },
        MapCase { map: NamedMap::Scaling { domain: ball, factor: 2.0 }, point: pt(&[0.2, 0.1]) },
    ];
    let t = check_transformation(&cases, 88).map_err(|e| e.to_string())?;
    require(&t)?;
    for r in [&m, &t] {
        if r.scale != MarginScale::Relative || r.tolerance != 1e-6 {
            return Err(format!("{} is not checked at relative 1e-6", r.name));
        }
    }
    Ok(format!("5 nested pairs (min rel margin {:.3}); 3 maps (max rel deviation {:.1e})", m.min_margin(), -t.min_margin()))
}

fn criterion_9() -> Outcome {
    let r = check_hausdorff(1.0, 1e-2, 99).map_err(|e| e.to_string())?;
    require(&r)?;
    let q = |l: &str| r.quantity(l).unwrap().value;
    Ok(format!(
        "calibration {:.4} (within 5%); disk model {:.4} vs pi sinh^2(1) = {:.4} ({:+.2}%)",
        q("calibration_estimate"),
        q("hausdorff_estimate"),
        q("busemann_measure"),
        100.0 * (q("hausdorff_estimate") / q("busemann_measure") - 1.0)
    ))
}

fn criterion_10() -> Outcome {
    let config = SuiteConfig::default_suite(7);
    let render = || -> Result<Vec<String>, String> {
        let run = run_suite(&config);
        if !run.all_passed() {
            let failed: Vec<_> = run.results.iter().filter(|r| !r.report.passed).map(|r| r.id.clone()).collect();
            return Err(format!("default suite failures: {failed:?}"));
        }
        let mut out: Vec<String> = run.results.iter().map(|r| to_json_string(&r.report).unwrap()).collect();
        let mut summary = summary_json(&config, &run);
        summary.as_object_mut().unwrap().remove("timing");
        out.push(to_json_string(&summary).unwrap());
        Ok(out)
    };
    let a = render()?;
    let b = render()?;
    if a != b {
        return Err("two runs with seed 7 differ".into());
    }
    Ok(format!("{} checks, byte-identical JSON across two runs", a.len() - 1))
}

fn main() -> ExitCode {
    // (criterion, title, runtime budget in seconds, body)
    let criteria: [(u32, &str, u64, fn() -> Outcome); 10] = [
        (1, "disk kernel oracle", 1, criterion_1),
        (2, "Blocki bound equality", 60, criterion_2),
        (3, "sublevel-volume limit", 60, criterion_3),
        (4, "kernel/Busemann chain in the disk model", 1, criterion_4),
        (5, "Green function = log tanh distance", 1, criterion_5),
        (6, "Azukawa metric = gauge", 10, criterion_6),
        (7, "balanced-origin identity", 120, criterion_7),
        (8, "monotonicity and transformation law", 5, criterion_8),
        (9, "Busemann = Hausdorff", 120, criterion_9),
        (10, "determinism of the default suite", 600, criterion_10),
    ];
    let mut failures = 0;
    for (n, title, budget, body) in criteria {
        let t = Instant::now();
        let outcome = body();
        let elapsed = t.elapsed();
        let outcome = match outcome {
            Ok(msg) if elapsed > Duration::from_secs(budget) => Err(format!("{msg}; over the {budget} s budget")),
            other => other,
        };
        let secs = elapsed.as_secs_f64();
        match outcome {
            Ok(msg) => println!("criterion {n:>2} PASS  {title} [{secs:.2} s] {msg}"),
            Err(msg) => {
                failures += 1;
                println!("criterion {n:>2} FAIL  {title} [{secs:.2} s] {msg}");
            }
        }
    }
    if failures == 0 {
        println!("acceptance: all 10 criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failures} criteria fail");
        ExitCode::FAILURE
    }
}
