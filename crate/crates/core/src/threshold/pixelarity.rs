//! The pixelarity metric: a 3×3 window score counting regions and long
//! edges, averaged over a binary image and swept across thresholds.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::binarymorph::{threshold_apply, BinaryImage, Connectivity};
use crate::error::{Error, Result};
use crate::imgio::{GrayImage, MIN_DIM};

pub const CURVE_STEP: u8 = 5;
pub const MIN_SCORE: u8 = 1;
pub const MAX_SCORE: u8 = 21;

/// Scores for all 512 window arrangements, indexed with bit 0 at the
/// top-left pixel and bit 8 at the bottom-right.
#[derive(Clone, PartialEq, Eq)]
pub struct PixelarityLut {
    scores: [u8; 512],
}

impl std::fmt::Debug for PixelarityLut {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PixelarityLut").finish_non_exhaustive()
    }
}

impl PixelarityLut {
    /// The standard table: four-connected regions plus long edges.
    pub fn build() -> Self {
        Self::build_with(Connectivity::Four)
    }

    /// Table with regions counted under `connectivity`; only the
    /// four-connected variant is used for thresholding.
    pub fn build_with(connectivity: Connectivity) -> Self {
        let mut scores = [0u8; 512];
        for (idx, s) in scores.iter_mut().enumerate() {
            *s = (window_regions(idx as u16, connectivity) + long_edges(idx as u16)) as u8;
        }
        Self { scores }
    }

    #[inline]
    pub fn score(&self, idx: u16) -> u8 {
        self.scores[idx as usize & 0x1ff]
    }

    pub fn scores(&self) -> &[u8; 512] {
        &self.scores
    }

    /// `index,score` lines with a header row.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("index,score\n");
        for (i, s) in self.scores.iter().enumerate() {
            out.push_str(&format!("{i},{s}\n"));
        }
        out
    }
}

pub fn build_pixelarity_lut() -> PixelarityLut {
    PixelarityLut::build()
}

pub fn score_window(idx: u16, lut: &PixelarityLut) -> u8 {
    lut.score(idx)
}

#[inline]
fn bit(idx: u16, x: usize, y: usize) -> bool {
    idx >> (y * 3 + x) & 1 == 1
}

/// Connected regions of both colours inside the window.
pub fn window_regions(idx: u16, connectivity: Connectivity) -> u32 {
    let mut seen = [false; 9];
    let mut regions = 0;
    for start in 0..9 {
        if seen[start] {
            continue;
        }
        regions += 1;
        let colour = bit(idx, start % 3, start / 3);
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(p) = stack.pop() {
            let (px, py) = ((p % 3) as i64, (p / 3) as i64);
            for &(dx, dy) in connectivity.offsets() {
                let (qx, qy) = (px + dx, py + dy);
                if !(0..3).contains(&qx) || !(0..3).contains(&qy) {
                    continue;
                }
                let q = (qy * 3 + qx) as usize;
                if !seen[q] && bit(idx, qx as usize, qy as usize) == colour {
                    seen[q] = true;
                    stack.push(q);
                }
            }
        }
    }
    regions
}

/// Long edges: maximal collinear runs of colour changes that keep the same
/// colour on the same side.
pub fn long_edges(idx: u16) -> u32 {
    let mut count = 0;
    // boundaries between columns c and c+1, running down the rows
    for c in 0..2 {
        let mut prev: Option<bool> = None;
        for r in 0..3 {
            let (a, b) = (bit(idx, c, r), bit(idx, c + 1, r));
            let here = (a != b).then_some(a);
            if here.is_some() && here != prev {
                count += 1;
            }
            prev = here;
        }
    }
    // boundaries between rows r and r+1, running along the columns
    for r in 0..2 {
        let mut prev: Option<bool> = None;
        for c in 0..3 {
            let (a, b) = (bit(idx, c, r), bit(idx, c, r + 1));
            let here = (a != b).then_some(a);
            if here.is_some() && here != prev {
                count += 1;
            }
            prev = here;
        }
    }
    count
}

/// Mean window score over all interior 3×3 placements.
pub fn mean_pixelarity(b: &BinaryImage, lut: &PixelarityLut) -> Result<f64> {
    if b.width() < MIN_DIM || b.height() < MIN_DIM {
        return Err(Error::TooSmall {
            width: b.width(),
            height: b.height(),
        });
    }
    let last = b.width() - 1;
    let total: u64 = (1..b.height() - 1)
        .map(|y| {
            let mut row = 0u64;
            b.for_each_window_in_row(y, |x, idx| {
                if x != 0 && x != last {
                    row += lut.score(idx) as u64;
                }
            });
            row
        })
        .sum();
    let windows = ((b.width() - 2) * (b.height() - 2)) as f64;
    Ok(total as f64 / windows)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CurveCategory {
    LocalMinimum,
    Plateau,
    Monotone,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveSample {
    pub threshold: u8,
    pub mean_score: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PixelarityCurve {
    pub samples: Vec<CurveSample>,
    pub category: CurveCategory,
}

impl PixelarityCurve {
    /// Wraps raw samples and classifies them.
    pub fn from_samples(samples: Vec<CurveSample>, cfg: &CurveConfig) -> Self {
        let category = classify(&samples, cfg).map_or(CurveCategory::Monotone, |(c, _)| c);
        Self { samples, category }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveConfig {
    /// Consecutive samples within this relative difference are flat.
    pub plateau_tolerance: f64,
    /// Fewest samples that make a plateau.
    pub min_plateau_len: usize,
}

impl Default for CurveConfig {
    fn default() -> Self {
        Self {
            plateau_tolerance: 0.01,
            min_plateau_len: 3,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveChoice {
    pub threshold: u8,
    pub category: CurveCategory,
    /// Set for the monotone fallback of threshold 0, which downstream
    /// validation is expected to vet.
    pub provisional: bool,
}

pub fn pixelarity_curve(
    g: &GrayImage,
    lut: &PixelarityLut,
    cfg: &CurveConfig,
) -> Result<PixelarityCurve> {
    if g.width() < MIN_DIM || g.height() < MIN_DIM {
        return Err(Error::TooSmall {
            width: g.width(),
            height: g.height(),
        });
    }
    let thresholds: Vec<u8> = (0..=255u8).step_by(CURVE_STEP as usize).collect();
    let samples = thresholds
        .par_iter()
        .map(|&t| {
            let mean = mean_pixelarity(&threshold_apply(g, t), lut)?;
            Ok(CurveSample {
                threshold: t,
                mean_score: mean,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PixelarityCurve::from_samples(samples, cfg))
}

fn round_down_to_step(t: u32) -> u8 {
    (t - t % CURVE_STEP as u32) as u8
}

fn midpoint(a: u8, b: u8) -> u8 {
    round_down_to_step((a as u32 + b as u32) / 2)
}

fn classify(samples: &[CurveSample], cfg: &CurveConfig) -> Option<(CurveCategory, u8)> {
    if samples.is_empty() {
        return None;
    }
    // runs of exactly equal scores: (value, first threshold, last threshold)
    let mut runs: Vec<(f64, u8, u8)> = Vec::new();
    for s in samples {
        match runs.last_mut() {
            Some(r) if r.0 == s.mean_score => r.2 = s.threshold,
            _ => runs.push((s.mean_score, s.threshold, s.threshold)),
        }
    }
    for w in runs.windows(3) {
        if w[1].0 < w[0].0 && w[1].0 < w[2].0 {
            return Some((CurveCategory::LocalMinimum, midpoint(w[1].1, w[1].2)));
        }
    }

    let flat = |a: f64, b: f64| (a - b).abs() <= cfg.plateau_tolerance * a.abs().max(b.abs());
    let rising = |a: f64, b: f64| b > a && !flat(a, b);
    let v: Vec<f64> = samples.iter().map(|s| s.mean_score).collect();
    let first_rise = (0..v.len() - 1).find(|&i| rising(v[i], v[i + 1]))?;
    let mut peak = first_rise + 1;
    while peak + 1 < v.len() && rising(v[peak], v[peak + 1]) {
        peak += 1;
    }
    let mut start = peak;
    while start < v.len() {
        let mut end = start;
        while end + 1 < v.len() && flat(v[end], v[end + 1]) {
            end += 1;
        }
        if end + 1 - start >= cfg.min_plateau_len {
            return Some((
                CurveCategory::Plateau,
                midpoint(samples[start].threshold, samples[end].threshold),
            ));
        }
        start = end + 1;
    }
    None
}

/// Picks a threshold from a pixelarity curve: the first local minimum, else
/// the middle of the first plateau after the initial peak, else a
/// provisional 0. Returns `None` only for an empty curve.
pub fn select_threshold_from_curve(c: &PixelarityCurve, cfg: &CurveConfig) -> Option<CurveChoice> {
    if c.samples.is_empty() {
        return None;
    }
    Some(match classify(&c.samples, cfg) {
        Some((category, threshold)) => CurveChoice {
            threshold,
            category,
            provisional: false,
        },
        None => CurveChoice {
            threshold: 0,
            category: CurveCategory::Monotone,
            provisional: true,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn curve(values: &[(u8, f64)]) -> PixelarityCurve {
        PixelarityCurve::from_samples(
            values
                .iter()
                .map(|&(threshold, mean_score)| CurveSample {
                    threshold,
                    mean_score,
                })
                .collect(),
            &CurveConfig::default(),
        )
    }

    fn full_curve(f: impl Fn(u8) -> f64) -> PixelarityCurve {
        let v: Vec<(u8, f64)> = (0..=255u8).step_by(5).map(|t| (t, f(t))).collect();
        curve(&v)
    }

    #[test]
    fn lut_anchor_scores() {
        let lut = build_pixelarity_lut();
        assert_eq!(score_window(0, &lut), 1);
        assert_eq!(score_window(511, &lut), 1);
        assert_eq!(score_window(0b101_010_101, &lut), 21);
        assert_eq!(score_window(0b010_101_010, &lut), 21);
        // lone centre pixel: two regions and four edges
        assert_eq!(score_window(0b000_010_000, &lut), 6);
        // bottom-right 2x2 block: two regions and two long edges
        assert_eq!(score_window(0b110_110_000, &lut), 4);
    }

    #[test]
    fn diagonal_line_scores() {
        let diag = 0b100_010_001;
        assert_eq!(window_regions(diag, Connectivity::Four), 5);
        assert_eq!(window_regions(diag, Connectivity::Eight), 2);
        assert_eq!(long_edges(diag), 8);
        assert_eq!(PixelarityLut::build().score(diag), 13);
        assert_eq!(
            PixelarityLut::build_with(Connectivity::Eight).score(diag),
            10
        );
    }

    #[test]
    fn mean_pixelarity_examples() {
        let lut = build_pixelarity_lut();
        assert_eq!(mean_pixelarity(&BinaryImage::new(7, 5), &lut).unwrap(), 1.0);
        assert_eq!(
            mean_pixelarity(&BinaryImage::filled(7, 5), &lut).unwrap(),
            1.0
        );

        let checker = BinaryImage::from_fn(9, 8, |x, y| (x + y) % 2 == 0);
        assert_eq!(mean_pixelarity(&checker, &lut).unwrap(), 21.0);

        // vertical split: windows straddling the line score 2 regions + 1 edge
        let split = BinaryImage::from_fn(10, 10, |x, _| x < 5);
        let mut total = 0u64;
        for y in 1..9 {
            for x in 1..9 {
                total += lut.score(split.window_index(x, y)) as u64;
            }
        }
        let mean = mean_pixelarity(&split, &lut).unwrap();
        assert_eq!(mean, total as f64 / 64.0);
        assert!(mean < 2.5, "{mean}");

        assert!(mean_pixelarity(&BinaryImage::new(2, 9), &lut).is_err());
    }

    #[test]
    fn curve_of_constant_image_is_flat() {
        let lut = build_pixelarity_lut();
        let c =
            pixelarity_curve(&GrayImage::filled(8, 8, 77), &lut, &CurveConfig::default()).unwrap();
        assert_eq!(c.samples.len(), 52);
        assert!(c.samples.iter().all(|s| s.mean_score == 1.0));
        assert_eq!(c.category, CurveCategory::Monotone);
        let thresholds: Vec<u8> = c.samples.iter().map(|s| s.threshold).collect();
        assert_eq!(thresholds.first(), Some(&0));
        assert_eq!(thresholds.last(), Some(&255));
        assert!(thresholds.windows(2).all(|w| w[1] == w[0] + 5));
    }

    #[test]
    fn noiseless_two_tone_curve_plateaus() {
        let lut = build_pixelarity_lut();
        let data = (0..40 * 30)
            .map(|i| {
                let (x, y) = (i % 40, i / 40);
                if (10..30).contains(&x) && (8..25).contains(&y) {
                    50
                } else {
                    200
                }
            })
            .collect();
        let g = GrayImage::new(40, 30, data).unwrap();
        let c = pixelarity_curve(&g, &lut, &CurveConfig::default()).unwrap();
        let inside: Vec<f64> = c
            .samples
            .iter()
            .filter(|s| (50..=195).contains(&s.threshold))
            .map(|s| s.mean_score)
            .collect();
        assert!(inside.windows(2).all(|w| w[0] == w[1]));
        assert!(inside[0] > 1.0);
        assert_eq!(c.category, CurveCategory::Plateau);
        let pick = select_threshold_from_curve(&c, &CurveConfig::default()).unwrap();
        assert_eq!(pick.threshold, 120);
        assert!(!pick.provisional);
    }

    #[test]
    fn selection_examples() {
        let cfg = CurveConfig::default();
        // rise to a peak at 30, minimum at 65, rise again, fall toward one
        let c = full_curve(|t| match t {
            0..=30 => 1.0 + t as f64 * 0.2,
            31..=65 => 7.0 - (t as f64 - 30.0) * 0.1,
            66..=120 => 3.5 + (t as f64 - 65.0) * 0.05,
            _ => (6.25 - (t as f64 - 120.0) * 0.04).max(1.0),
        });
        let pick = select_threshold_from_curve(&c, &cfg).unwrap();
        assert_eq!(
            (pick.threshold, pick.category),
            (65, CurveCategory::LocalMinimum)
        );

        let c = full_curve(|t| match t {
            0..=45 => 1.0,
            50..=195 => 3.0,
            _ => 1.0,
        });
        let pick = select_threshold_from_curve(&c, &cfg).unwrap();
        assert_eq!(
            (pick.threshold, pick.category),
            (120, CurveCategory::Plateau)
        );

        let c = full_curve(|t| 20.0 - t as f64 * 0.07);
        let pick = select_threshold_from_curve(&c, &cfg).unwrap();
        assert_eq!(pick.threshold, 0);
        assert!(pick.provisional);
        assert_eq!(pick.category, CurveCategory::Monotone);

        assert!(select_threshold_from_curve(&curve(&[]), &cfg).is_none());
    }

    #[test]
    fn equal_neighbours_merge_before_minimum_search() {
        let c = curve(&[
            (0, 1.0),
            (5, 4.0),
            (10, 2.0),
            (15, 2.0),
            (20, 2.0),
            (25, 5.0),
        ]);
        let pick = select_threshold_from_curve(&c, &CurveConfig::default()).unwrap();
        assert_eq!(pick.threshold, 15);
        assert_eq!(c.category, CurveCategory::LocalMinimum);
    }
}
