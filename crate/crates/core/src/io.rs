//! Curve JSON files, trace CSV and snapshot directories.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::flows::{FlowTrace, Snapshot, TraceRecord};
use crate::geometry::CurveSummary;
use crate::support::FourierSupport;

/// Header of the trace CSV.
pub const TRACE_HEADER: &str = "t,L,A,ipd,ipr,entropy,int_inv_k,center_x,center_y,margin";

/// Formats with 17 significant digits.
pub fn fmt_f64(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        // not representable in JSON; only reachable for CSV diagnostics
        v.to_string()
    }
}

fn fmt_list(values: &[f64]) -> String {
    let items: Vec<String> = values.iter().map(|&v| fmt_f64(v)).collect();
    format!("[{}]", items.join(","))
}

/// Serialises a curve as `{"order":N,"a":[...],"b":[...]}`.
pub fn curve_to_json(fs: &FourierSupport) -> String {
    format!(
        "{{\"order\":{},\"a\":{},\"b\":{}}}\n",
        fs.order(),
        fmt_list(fs.cos_coeffs()),
        fmt_list(fs.sin_coeffs())
    )
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CurveFile {
    order: usize,
    a: Vec<f64>,
    b: Vec<f64>,
}

/// Parses the curve JSON format; positions of syntax errors are reported.
pub fn curve_from_json(text: &str) -> Result<FourierSupport> {
    let file: CurveFile = serde_json::from_str(text).map_err(|e| {
        Error::Parse(format!("line {} column {}: {e}", e.line(), e.column()))
    })?;
    let expected = file.order + 1;
    if file.a.len() != expected || file.b.len() != expected {
        return Err(Error::Parse(format!(
            "order {} needs {expected} coefficients in \"a\" and \"b\", found {} and {}",
            file.order,
            file.a.len(),
            file.b.len()
        )));
    }
    FourierSupport::new(file.a, file.b).map_err(|e| Error::Parse(e.to_string()))
}

pub fn read_curve(path: &Path) -> Result<FourierSupport> {
    let text = fs::read_to_string(path)?;
    curve_from_json(&text).map_err(|e| match e {
        Error::Parse(msg) => Error::Parse(format!("{}: {msg}", path.display())),
        other => other,
    })
}

pub fn write_curve(path: &Path, fs: &FourierSupport) -> Result<()> {
    fs::write(path, curve_to_json(fs))?;
    Ok(())
}

fn trace_row(out: &mut String, t: f64, s: &CurveSummary) {
    let entropy = s.entropy.map(fmt_f64).unwrap_or_default();
    let _ = writeln!(
        out,
        "{},{},{},{},{},{},{},{},{},{}",
        fmt_f64(t),
        fmt_f64(s.length),
        fmt_f64(s.area),
        fmt_f64(s.ipd),
        fmt_f64(s.ipr),
        entropy,
        fmt_f64(s.int_inv_k),
        fmt_f64(s.center[0]),
        fmt_f64(s.center[1]),
        fmt_f64(s.margin)
    );
}

/// Trace CSV, one row per record; a missing entropy is an empty field.
pub fn trace_to_csv(records: &[TraceRecord]) -> String {
    let mut out = String::with_capacity(64 * (records.len() + 1));
    out.push_str(TRACE_HEADER);
    out.push('\n');
    for r in records {
        trace_row(&mut out, r.t, &r.summary);
    }
    out
}

/// Parses a trace CSV written by [`trace_to_csv`].
pub fn trace_from_csv(text: &str) -> Result<Vec<TraceRecord>> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h == TRACE_HEADER => {}
        other => {
            return Err(Error::Parse(format!(
                "line 1: expected header {TRACE_HEADER:?}, found {:?}",
                other.unwrap_or("")
            )))
        }
    }
    lines
        .enumerate()
        .map(|(i, line)| {
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 10 {
                return Err(Error::Parse(format!("line {}: expected 10 fields", i + 2)));
            }
            let num = |k: usize| -> Result<f64> {
                fields[k]
                    .parse::<f64>()
                    .map_err(|e| Error::Parse(format!("line {} field {}: {e}", i + 2, k + 1)))
            };
            let entropy = if fields[5].is_empty() { None } else { Some(num(5)?) };
            Ok(TraceRecord {
                t: num(0)?,
                summary: CurveSummary {
                    length: num(1)?,
                    area: num(2)?,
                    ipd: num(3)?,
                    ipr: num(4)?,
                    entropy,
                    int_inv_k: num(6)?,
                    center: [num(7)?, num(8)?],
                    margin: num(9)?,
                },
            })
        })
        .collect()
}

/// `snap_<index>_<t>.json`, index zero-padded so names sort in time order.
pub fn snapshot_file_name(s: &Snapshot) -> String {
    format!("snap_{:06}_{:.6}.json", s.index, s.t)
}

/// Writes every snapshot of `trace` into `dir`, creating it if needed.
pub fn write_snapshots(dir: &Path, trace: &FlowTrace) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    trace
        .snapshots
        .iter()
        .map(|s| {
            let path = dir.join(snapshot_file_name(s));
            write_curve(&path, &s.curve)?;
            Ok(path)
        })
        .collect()
}

/// `*.json` files of a directory in lexicographic order.
pub fn json_files_in(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    Ok(files)
}
