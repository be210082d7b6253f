use std::collections::BTreeSet;

use bergkern::verifier::output::{summary_csv, to_json_string, write_suite_outputs, CSV_HEADER};
use bergkern::verifier::suite::{summary_json, CHECK_NAMES};
use bergkern::verifier::{run_suite, CheckReport, SuiteConfig};

#[test]
fn default_suite_passes_soundly_and_covers_every_check() {
    let config = SuiteConfig::default_suite(7);
    let run = run_suite(&config);
    for r in &run.results {
        assert!(r.report.passed, "{} failed: {:?}", r.id, r.report);
        assert!(!r.report.margins.is_empty(), "{} has no margins", r.id);
        for m in &r.report.margins {
            let again = r.report.recompute_margin(m).expect("margin quantities present");
            assert!((again - m.value).abs() <= 1e-12, "{}: {} recomputes to {again}", r.id, m.label);
        }
    }
    let names: BTreeSet<&str> = config.checks.iter().map(|e| e.check.name()).collect();
    assert_eq!(names, CHECK_NAMES.into_iter().collect());
}

#[test]
fn written_reports_reparse_and_match() {
    let config = SuiteConfig::default_suite(3);
    let run = run_suite(&config);
    let dir = std::path::Path::new(env!("CARGO_TARGET_TMPDIR")).join("suite-outputs");
    write_suite_outputs(&dir, &config, &run).unwrap();
    for r in &run.results {
        let text = std::fs::read_to_string(dir.join(format!("{}.json", r.id))).unwrap();
        let back: CheckReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back, CheckReport { runtime_ms: 0, ..r.report.clone() });
        assert_eq!(text, to_json_string(&r.report).unwrap());
    }
    let summary: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["counts"]["total"], run.results.len());
    assert_eq!(summary["counts"]["failed"], 0);
    let reparsed = SuiteConfig::from_json(&summary["config"].to_string()).unwrap();
    assert_eq!(reparsed, config);
    let csv = std::fs::read_to_string(dir.join("summary.csv")).unwrap();
    assert!(csv.starts_with(CSV_HEADER));
    let rows = run.results.iter().map(|r| r.report.margins.len().max(1)).sum::<usize>();
    assert_eq!(csv.lines().count(), rows + 1);
    assert_eq!(csv, summary_csv(&run));
}

#[test]
fn seeds_change_sampled_checks_only() {
    let a = run_suite(&SuiteConfig::default_suite(1));
    let b = run_suite(&SuiteConfig::default_suite(2));
    let by_id = |run: &bergkern::verifier::SuiteRun, id: &str| run.results.iter().find(|r| r.id == id).unwrap().report.clone();
    assert_ne!(by_id(&a, "sublevel_disk_off_center").quantities, by_id(&b, "sublevel_disk_off_center").quantities);
    assert_eq!(by_id(&a, "blocki_disk").quantities, by_id(&b, "blocki_disk").quantities);
    let mut sa = summary_json(&SuiteConfig::default_suite(1), &a);
    sa.as_object_mut().unwrap().remove("timing");
    assert_eq!(sa["seed"], 1);
}
