//! Persistence of suite results: one JSON per check, `summary.json` and
//! `summary.csv`. Floats are written with 17 significant digits.

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter};

use super::suite::{summary_json, SuiteConfig, SuiteRun};
use crate::Result;

pub const SCHEMA_VERSION: u32 = 1;

/// Pretty JSON with floats in `{:.16e}` form.
pub struct ExactFloats<'a>(PrettyFormatter<'a>);

impl Default for ExactFloats<'_> {
    fn default() -> Self {
        Self(PrettyFormatter::new())
    }
}

impl Formatter for ExactFloats<'_> {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        write!(w, "{value:.16e}")
    }
    fn write_f32<W: ?Sized + Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(w, value as f64)
    }
    fn begin_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }
    fn end_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }
    fn begin_array_value<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }
    fn end_array_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }
    fn begin_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }
    fn end_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }
    fn begin_object_key<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }
    fn begin_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }
    fn end_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

pub fn to_json_string<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, ExactFloats::default());
    value.serialize(&mut ser)?;
    buf.push(b'\n');
    Ok(String::from_utf8(buf).expect("serde_json writes UTF-8"))
}

/// `{:.16e}` for finite values, `inf`/`-inf`/`nan` otherwise.
pub fn format_float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "nan".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.into()
    }
}

pub const CSV_HEADER: &str = "id,name,passed,margin,kind,lhs,lhs_value,lhs_error,rhs,rhs_value,rhs_error,value,scale,tolerance,seed,error";

/// One row per margin; checks without margins get one row with empty margin fields.
pub fn summary_csv(run: &SuiteRun) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in &run.results {
        let rep = &r.report;
        let scale = serde_json::to_value(rep.scale).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
        let tail = format!(
            "{},{},{},{}",
            scale,
            format_float(rep.tolerance),
            rep.seed,
            csv_field(rep.error.as_deref().unwrap_or(""))
        );
        let head = format!("{},{},{}", csv_field(&r.id), csv_field(&rep.name), rep.passed);
        if rep.margins.is_empty() {
            out.push_str(&format!("{head},,,,,,,,,,{tail}\n"));
        }
        for m in &rep.margins {
            let q = |l: &str| rep.quantity(l).map_or((String::new(), String::new()), |q| (format_float(q.value), format_float(q.error)));
            let (lv, le) = q(&m.lhs);
            let (rv, re) = q(&m.rhs);
            let kind = if m.kind == super::report::MarginKind::Le { "le" } else { "eq" };
            out.push_str(&format!(
                "{head},{},{kind},{},{lv},{le},{},{rv},{re},{},{tail}\n",
                csv_field(&m.label),
                csv_field(&m.lhs),
                csv_field(&m.rhs),
                format_float(m.value)
            ));
        }
    }
    out
}

/// Writes `<id>.json` per check, `summary.json` and `summary.csv` into `dir`.
pub fn write_suite_outputs(dir: &Path, config: &SuiteConfig, run: &SuiteRun) -> Result<()> {
    fs::create_dir_all(dir)?;
    for r in &run.results {
        fs::write(dir.join(format!("{}.json", r.id)), to_json_string(&r.report)?)?;
    }
    fs::write(dir.join("summary.json"), to_json_string(&summary_json(config, run))?)?;
    fs::write(dir.join("summary.csv"), summary_csv(run))?;
    Ok(())
}
