//! Histogram concavity analysis: the first valley of a smoothed histogram,
//! with a second-valley rule for two-toned fins.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::imgio::Histogram;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValleyConfig {
    /// Levels on each side of the target position (15 gives a 30-level
    /// symmetric neighbourhood).
    pub half_window: usize,
    /// Half-window sums differing by at most this percentage of the full
    /// neighbourhood count are "level".
    pub level_tolerance_pct: u32,
    /// A second histogram region whose peak lies fewer than this many levels
    /// past the end of the first valley marks the fin as two-toned.
    pub two_tone_gap: usize,
}

impl Default for ValleyConfig {
    fn default() -> Self {
        Self {
            half_window: 15,
            level_tolerance_pct: 2,
            two_tone_gap: 26,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValleyAnalysis {
    pub first_valley: u8,
    pub second_valley: Option<u8>,
    pub chosen: u8,
    pub two_toned: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Trend {
    Increasing,
    Decreasing,
    Level,
}

/// Local trend of the histogram at every intensity, judged by comparing the
/// counts just above and just below the position.
pub(crate) fn trends(h: &Histogram, cfg: &ValleyConfig) -> Vec<Trend> {
    let bins = h.bins();
    let mut prefix = [0u64; 257];
    for i in 0..256 {
        prefix[i + 1] = prefix[i] + bins[i];
    }
    let sum = |lo: usize, hi: usize| prefix[hi.min(256)] - prefix[lo.min(256)];
    (0..256usize)
        .map(|i| {
            let below = sum(i.saturating_sub(cfg.half_window), i);
            let above = sum(i + 1, i + 1 + cfg.half_window);
            let total = below + above + bins[i];
            let diff = below.abs_diff(above) as u128;
            if diff * 100 <= cfg.level_tolerance_pct as u128 * total as u128 {
                Trend::Level
            } else if above > below {
                Trend::Increasing
            } else {
                Trend::Decreasing
            }
        })
        .collect()
}

#[derive(Clone, Copy, Debug)]
struct Run {
    trend: Trend,
    start: usize,
    end: usize,
}

fn runs(trends: &[Trend]) -> Vec<Run> {
    let mut out: Vec<Run> = Vec::new();
    for (i, &t) in trends.iter().enumerate() {
        match out.last_mut() {
            Some(r) if r.trend == t => r.end = i,
            _ => out.push(Run {
                trend: t,
                start: i,
                end: i,
            }),
        }
    }
    out
}

#[derive(Clone, Copy, Debug)]
struct Valley {
    position: usize,
    /// last position of the valley's level run (or the turning point)
    end: usize,
    /// index of the increasing run that closes the valley
    rising_run: usize,
}

/// Finds the first valley at or after run `from`. A valley needs a rise,
/// then a fall (after a peak or plateau), then a rise again.
fn next_valley(runs: &[Run], from: usize, already_rising: bool) -> Option<Valley> {
    let mut seen_rise = already_rising;
    let mut seen_fall = false;
    let mut i = from;
    while i < runs.len() {
        let r = runs[i];
        match r.trend {
            Trend::Increasing if seen_fall => {
                let fall_end = runs[..i]
                    .iter()
                    .rev()
                    .find(|p| p.trend == Trend::Decreasing)
                    .map(|p| p.end)
                    .expect("a fall precedes the valley");
                return Some(Valley {
                    position: (fall_end + r.start) / 2,
                    end: r.start - 1,
                    rising_run: i,
                });
            }
            Trend::Increasing => seen_rise = true,
            Trend::Decreasing if seen_rise => seen_fall = true,
            _ => {}
        }
        i += 1;
    }
    None
}

/// Top of the histogram region that begins at run `rising_run`.
fn region_peak(runs: &[Run], rising_run: usize) -> usize {
    let rise_end = runs[rising_run].end;
    let fall_start = runs[rising_run + 1..]
        .iter()
        .find(|r| r.trend == Trend::Decreasing)
        .map_or(255, |r| r.start);
    (rise_end + fall_start) / 2
}

pub fn find_valley_threshold(h: &Histogram, cfg: &ValleyConfig) -> Result<ValleyAnalysis> {
    if h.is_empty() {
        return Err(Error::NoValley);
    }
    let runs = runs(&trends(h, cfg));
    let first = next_valley(&runs, 0, false).ok_or(Error::NoValley)?;
    let second = next_valley(&runs, first.rising_run, true);

    let (chosen, two_toned) = match second {
        Some(s)
            if region_peak(&runs, first.rising_run).saturating_sub(first.end)
                < cfg.two_tone_gap =>
        {
            (s.position, true)
        }
        _ => (first.position, false),
    };
    Ok(ValleyAnalysis {
        first_valley: first.position as u8,
        second_valley: second.map(|s| s.position as u8),
        chosen: chosen as u8,
        two_toned,
    })
}
