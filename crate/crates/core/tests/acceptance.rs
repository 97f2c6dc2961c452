//! Acceptance battery: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so the report is always printed:
//! `cargo test -p fintrace --test acceptance`.

mod support;

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use fintrace::binarymorph::{boundary, connected_components, dilate, erode, open};
use fintrace::imgio::histogram;
use fintrace::pipeline::Outcome;
use fintrace::synth::{bimodal_image, fin_scene, hausdorff, Family};
use fintrace::threshold::oracle_support::{long_edges, window_regions};
use fintrace::threshold::{
    find_valley_threshold, pixelarity_curve, select_threshold_from_curve, CurveConfig, ValleyConfig,
};
use fintrace::{autotrace, Connectivity, Method, PixelarityLut, TraceRequest, TraceResult};
use support::*;

const SEEDS: u64 = 20;
const HAUSDORFF_BOUND: f64 = 3.0;

struct Report {
    failed: usize,
}

impl Report {
    fn line(&mut self, name: &str, pass: bool, elapsed: Duration, detail: String) {
        if !pass {
            self.failed += 1;
        }
        let verdict = if pass { "PASS" } else { "FAIL" };
        println!(
            "{verdict} {name:<22} {:>8.2}s  {detail}",
            elapsed.as_secs_f64()
        );
    }
}

fn lut_suite() -> Result<String, String> {
    let lut = PixelarityLut::build();
    let all = 0..512u16;
    if !lut.scores().iter().all(|&s| (1..=21).contains(&s)) {
        return Err("score outside [1,21]".into());
    }
    if lut.score(0) != 1 || lut.score(0x1ff) != 1 {
        return Err("constant window does not score 1".into());
    }
    for idx in [0b101_010_101, 0b010_101_010] {
        if lut.score(idx) != 21
            || window_regions(idx, Connectivity::Four) != 9
            || long_edges(idx) != 12
        {
            return Err(format!("checkerboard {idx:09b} mis-scored"));
        }
    }
    for idx in all {
        if lut.score(idx) != lut.score(!idx & 0x1ff) {
            return Err(format!("complement asymmetry at {idx:09b}"));
        }
        if window_regions(idx, Connectivity::Four) != oracle_regions(idx, false) {
            return Err(format!("region count mismatch at {idx:09b}"));
        }
        if long_edges(idx) != oracle_long_edges(idx) {
            return Err(format!("long-edge mismatch at {idx:09b}"));
        }
    }
    Ok("512 windows".into())
}

fn morphology_suite() -> Result<String, String> {
    for seed in 0..200 {
        let g = random_grid(seed, 16, 16);
        let b = from_grid(&g);
        for n in 1..=8u8 {
            let e = erode(&b, n);
            let d = dilate(&b, n);
            if to_grid(&e) != naive_erode(&g, n as usize) {
                return Err(format!("erode n={n} seed={seed}"));
            }
            if to_grid(&d) != naive_dilate(&g, n as usize) {
                return Err(format!("dilate n={n} seed={seed}"));
            }
            if !e.is_subset_of(&b) || !b.is_subset_of(&d) {
                return Err(format!("extensivity n={n} seed={seed}"));
            }
        }
        if to_grid(&open(&b, 1)) != naive_open(&g, 1) {
            return Err(format!("open seed={seed}"));
        }
        let edge = boundary(&b);
        if to_grid(&edge) != naive_boundary(&g) || !edge.is_subset_of(&b) {
            return Err(format!("boundary seed={seed}"));
        }
        for (conn, eight) in [(Connectivity::Four, false), (Connectivity::Eight, true)] {
            let labels = connected_components(&b, conn);
            let oracle: Vec<u32> = flood_labels(&g, eight).into_iter().flatten().collect();
            if labels.labels() != oracle.as_slice() {
                return Err(format!("components {conn:?} seed={seed}"));
            }
        }
    }
    Ok("200 images".into())
}

fn threshold_suite() -> (bool, String) {
    let lut = PixelarityLut::build();
    let (valley_cfg, curve_cfg) = (ValleyConfig::default(), CurveConfig::default());
    let (mut valley_hits, mut curve_hits) = (0, 0);
    for seed in 0..50 {
        let s = bimodal_image(seed);
        if let Ok(v) = find_valley_threshold(&histogram(&s.image), &valley_cfg) {
            valley_hits += s.in_gap(v.chosen, 10.0) as u32;
        }
        let chosen = pixelarity_curve(&s.image, &lut, &curve_cfg)
            .ok()
            .and_then(|c| select_threshold_from_curve(&c, &curve_cfg));
        if let Some(c) = chosen {
            curve_hits += s.in_gap(c.threshold, 10.0) as u32;
        }
    }
    (
        valley_hits >= 45 && curve_hits >= 45,
        format!("valley {valley_hits}/50, curve {curve_hits}/50 (need 45)"),
    )
}

fn battery() -> Vec<(Family, u64, TraceResult)> {
    let mut out = Vec::new();
    for family in [Family::A, Family::B, Family::C] {
        for seed in 0..SEEDS {
            let s = fin_scene(family, seed);
            let r = autotrace(&TraceRequest::new(s.image, s.endpoints))
                .expect("fixture request is valid");
            out.push((family, seed, r));
        }
    }
    out
}

fn within_bound(r: &TraceResult, family: Family, seed: u64) -> bool {
    let truth = fin_scene(family, seed).truth_arc;
    r.outline
        .as_ref()
        .is_some_and(|o| hausdorff(&o.points, &truth) <= HAUSDORFF_BOUND)
}

fn end_to_end(results: &[(Family, u64, TraceResult)]) -> (bool, String) {
    let count = |family: Family, ok: &dyn Fn(u64, &TraceResult) -> bool| {
        results
            .iter()
            .filter(|(f, seed, r)| *f == family && ok(*seed, r))
            .count()
    };
    let a = count(Family::A, &|seed, r| {
        r.method == Some(Method::Approach1) && within_bound(r, Family::A, seed)
    });
    let b = count(Family::B, &|seed, r| {
        let first_failed = r
            .diagnostics
            .approach1
            .as_ref()
            .is_some_and(|d| d.failure.is_some());
        first_failed && r.method == Some(Method::Approach2) && within_bound(r, Family::B, seed)
    });
    let c = count(Family::C, &|_, r| {
        r.outcome == Outcome::Failure && r.outline.is_none() && !r.diagnostics.reasons().is_empty()
    });
    (
        a >= 18 && b >= 14 && c == 20,
        format!("A {a}/20 (need 18), B {b}/20 (need 14), C {c}/20 (need 20)"),
    )
}

fn determinism(first: &[(Family, u64, TraceResult)]) -> (bool, String) {
    let second = battery();
    let differing: Vec<String> = first
        .iter()
        .zip(&second)
        .filter(|((_, _, a), (_, _, b))| a.to_json() != b.to_json())
        .map(|((f, seed, _), _)| format!("{f:?}{seed}"))
        .collect();
    (
        differing.is_empty(),
        if differing.is_empty() {
            format!("{} results byte-identical", first.len())
        } else {
            format!("differing: {}", differing.join(" "))
        },
    )
}

fn cli_contract() -> (bool, String) {
    let dir = tempfile::tempdir().expect("tempdir");
    let run = |family: Family, swap: bool| -> Option<i32> {
        let s = fin_scene(family, 0);
        let path = dir.path().join(format!("{family:?}.png"));
        s.image.save_png(&path).ok()?;
        let (mut start, mut end) = (s.endpoints.start, s.endpoints.end);
        if swap {
            std::mem::swap(&mut start, &mut end);
        }
        Command::new(env!("CARGO_BIN_EXE_fintrace"))
            .arg("trace")
            .arg("--image")
            .arg(&path)
            .args(["--start", &format!("{},{}", start.x, start.y)])
            .args(["--end", &format!("{},{}", end.x, end.y)])
            .output()
            .ok()?
            .status
            .code()
    };
    let codes = [
        run(Family::A, false),
        run(Family::A, true),
        run(Family::C, false),
    ];
    (
        codes == [Some(0), Some(1), Some(2)],
        format!(
            "success {:?}, orientation {:?}, noise {:?} (want 0/1/2)",
            codes[0], codes[1], codes[2]
        ),
    )
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}

fn main() -> ExitCode {
    let mut report = Report { failed: 0 };

    let (lut, t) = timed(lut_suite);
    report.line(
        "pixelarity-lut",
        lut.is_ok() && t < Duration::from_secs(1),
        t,
        format!("{} (limit 1s)", lut.unwrap_or_else(|e| e)),
    );

    let (morph, t) = timed(morphology_suite);
    report.line(
        "morphology-oracle",
        morph.is_ok() && t < Duration::from_secs(5),
        t,
        format!("{} (limit 5s)", morph.unwrap_or_else(|e| e)),
    );

    let ((ok, detail), t) = timed(threshold_suite);
    report.line(
        "threshold-selection",
        ok && t < Duration::from_secs(60),
        t,
        format!("{detail} (limit 60s)"),
    );

    let (results, t) = timed(battery);
    let (ok, detail) = end_to_end(&results);
    report.line(
        "end-to-end",
        ok && t < Duration::from_secs(180),
        t,
        format!("{detail} (limit 180s)"),
    );

    let ((ok, detail), t) = timed(|| determinism(&results));
    report.line("determinism", ok, t, detail);

    let ((ok, detail), t) = timed(cli_contract);
    report.line("cli-contract", ok, t, detail);

    if report.failed == 0 {
        println!("acceptance: all criteria met");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {} criteria failed", report.failed);
        ExitCode::FAILURE
    }
}
