use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;

use super::manifest::{read_manifest, ManifestRow};
use crate::error::Error;
use crate::imgio::{load_image, Rect};
use crate::outline::{EndpointPair, Point};
use crate::pipeline::{autotrace_with_sink, Tier, TraceConfig, TraceRequest, TraceResult};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_FAILURE: i32 = 2;

/// Parses `x,y`.
pub fn parse_point(s: &str) -> Result<Point, String> {
    match parse_ints::<i32>(s, 2)?.as_slice() {
        &[x, y] => Ok(Point::new(x, y)),
        _ => unreachable!(),
    }
}

/// Parses `x,y,w,h`.
pub fn parse_rect(s: &str) -> Result<Rect, String> {
    match parse_ints::<usize>(s, 4)?.as_slice() {
        &[x, y, w, h] => Ok(Rect::new(x, y, w, h)),
        _ => unreachable!(),
    }
}

fn parse_ints<T: std::str::FromStr>(s: &str, n: usize) -> Result<Vec<T>, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != n {
        return Err(format!("expected {n} comma-separated integers, got {s:?}"));
    }
    parts
        .iter()
        .map(|p| p.parse().map_err(|_| format!("not a valid integer: {p:?}")))
        .collect()
}

#[derive(Clone, Debug)]
pub struct TraceOptions {
    pub image: PathBuf,
    pub start: Point,
    pub end: Point,
    pub viewport: Option<Rect>,
    pub tier: Tier,
    /// Outline JSON; defaults to `<image>.outline.json`.
    pub out: Option<PathBuf>,
    pub debug_dir: Option<PathBuf>,
    pub max_dim: Option<usize>,
}

/// `x.outline.json` → `x.diagnostics.json`; other names get the suffix
/// appended.
pub fn diagnostics_path(out: &Path) -> PathBuf {
    let name = out
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    let stem = name
        .strip_suffix(".outline.json")
        .or_else(|| name.strip_suffix(".json"))
        .unwrap_or(&name);
    out.with_file_name(format!("{stem}.diagnostics.json"))
}

fn default_out(image: &Path) -> PathBuf {
    let stem = image
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    image.with_file_name(format!("{stem}.outline.json"))
}

fn write_file(path: &Path, contents: &str) -> Result<(), String> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent)
            .map_err(|e| format!("cannot create {}: {e}", parent.display()))?;
    }
    std::fs::write(path, contents).map_err(|e| format!("cannot write {}: {e}", path.display()))
}

fn config_with(max_dim: Option<usize>) -> TraceConfig {
    let mut config = TraceConfig::default();
    if let Some(m) = max_dim {
        config.max_dim = m;
    }
    config
}

/// Writes the outline (on success) and the diagnostics next to `out`.
fn write_outputs(result: &TraceResult, out: &Path) -> Result<(), String> {
    if let Some(outline) = &result.outline {
        write_file(out, &outline.to_json())?;
    }
    write_file(&diagnostics_path(out), &result.to_json())
}

fn trace_once(
    image: &Path,
    endpoints: EndpointPair,
    viewport: Option<Rect>,
    tier: Tier,
    config: TraceConfig,
    debug_dir: Option<&Path>,
) -> Result<TraceResult, Error> {
    let img = load_image(image)?;
    let req = TraceRequest {
        image: img,
        endpoints,
        viewport,
        tier,
        config,
    };
    let mut dump_error: Option<std::io::Error> = None;
    let mut sink = |name: &str, b: &crate::binarymorph::BinaryImage| {
        if let (Some(dir), None) = (debug_dir, &dump_error) {
            if let Err(e) = std::fs::create_dir_all(dir).and_then(|_| {
                b.write_pbm(std::io::BufWriter::new(std::fs::File::create(
                    dir.join(format!("{name}.pbm")),
                )?))
            }) {
                dump_error = Some(e);
            }
        }
    };
    let result = autotrace_with_sink(&req, &mut sink)?;
    if let Some(e) = dump_error {
        return Err(Error::Io(e));
    }
    Ok(result)
}

/// Traces one image. Prints a one-line summary to stdout and errors to
/// stderr; returns the process exit code.
pub fn cmd_trace(opts: &TraceOptions) -> i32 {
    let endpoints = EndpointPair {
        start: opts.start,
        end: opts.end,
    };
    let result = match trace_once(
        &opts.image,
        endpoints,
        opts.viewport,
        opts.tier,
        config_with(opts.max_dim),
        opts.debug_dir.as_deref(),
    ) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    let out = opts.out.clone().unwrap_or_else(|| default_out(&opts.image));
    if let Err(e) = write_outputs(&result, &out) {
        eprintln!("error: {e}");
        return EXIT_USAGE;
    }
    match &result.outline {
        Some(o) => {
            println!(
                "success: {} threshold {} ({} points) -> {}",
                o.method,
                o.threshold,
                o.points.len(),
                out.display()
            );
            EXIT_OK
        }
        None => {
            eprintln!(
                "failure: {}; diagnostics in {} — supply a manual trace",
                result.diagnostics.reasons().join("; "),
                diagnostics_path(&out).display()
            );
            EXIT_FAILURE
        }
    }
}

#[derive(Clone, Debug)]
pub struct BatchOptions {
    pub manifest: PathBuf,
    pub out_dir: PathBuf,
    pub tier: Tier,
    pub max_dim: Option<usize>,
}

#[derive(Debug, Serialize)]
struct SummaryRow {
    image: String,
    outcome: &'static str,
    method: String,
    threshold: String,
    reason: String,
}

fn batch_row(row: &ManifestRow, opts: &BatchOptions) -> SummaryRow {
    let mut summary = SummaryRow {
        image: row.label.clone(),
        outcome: "error",
        method: String::new(),
        threshold: String::new(),
        reason: String::new(),
    };
    let result = match trace_once(
        &row.image,
        row.endpoints,
        row.viewport,
        opts.tier,
        config_with(opts.max_dim),
        None,
    ) {
        Ok(r) => r,
        Err(e) => {
            summary.reason = e.to_string();
            return summary;
        }
    };
    let stem = row
        .image
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    if let Err(e) = write_outputs(&result, &opts.out_dir.join(format!("{stem}.outline.json"))) {
        summary.reason = e;
        return summary;
    }
    summary.method = result.method.map(|m| m.to_string()).unwrap_or_default();
    summary.threshold = result.threshold.map(|t| t.to_string()).unwrap_or_default();
    if result.is_success() {
        summary.outcome = "success";
    } else {
        summary.outcome = "failure";
        summary.reason = result.diagnostics.reasons().join("; ");
    }
    summary
}

/// Traces every manifest row in parallel and writes `summary.csv` into the
/// output directory, one row per manifest row.
pub fn cmd_batch(opts: &BatchOptions) -> i32 {
    let rows = match read_manifest(&opts.manifest) {
        Ok(rows) => rows,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    if rows.is_empty() {
        eprintln!("error: manifest {} has no rows", opts.manifest.display());
        return EXIT_USAGE;
    }
    if let Err(e) = std::fs::create_dir_all(&opts.out_dir) {
        eprintln!("error: cannot create {}: {e}", opts.out_dir.display());
        return EXIT_USAGE;
    }
    let summary: Vec<SummaryRow> = rows
        .par_iter()
        .map(|row| match row {
            Ok(row) => batch_row(row, opts),
            Err((label, reason)) => SummaryRow {
                image: label.clone(),
                outcome: "error",
                method: String::new(),
                threshold: String::new(),
                reason: reason.clone(),
            },
        })
        .collect();

    let path = opts.out_dir.join("summary.csv");
    let written = csv::Writer::from_path(&path).and_then(|mut w| {
        for row in &summary {
            w.serialize(row)?;
        }
        w.flush().map_err(csv::Error::from)
    });
    if let Err(e) = written {
        eprintln!("error: cannot write {}: {e}", path.display());
        return EXIT_USAGE;
    }
    let successes = summary.iter().filter(|r| r.outcome == "success").count();
    println!(
        "{successes}/{} traced; summary in {}",
        summary.len(),
        path.display()
    );
    if successes > 0 {
        EXIT_OK
    } else {
        EXIT_FAILURE
    }
}
