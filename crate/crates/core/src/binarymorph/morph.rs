use std::sync::OnceLock;

use super::BinaryImage;

const CENTER: u16 = 1 << 4;
const RING: [usize; 8] = [0, 1, 2, 3, 5, 6, 7, 8];

/// Per-coefficient decision tables over the 512 possible 3×3 windows.
///
/// `erode_keep[n]` says whether a foreground centre survives erosion with
/// coefficient `n`; `dilate_set[n]` whether a background centre is filled by
/// the non-joining dilation with coefficient `n`.
pub struct NeighborhoodMaps {
    erode_keep: [[bool; 512]; 9],
    dilate_set: [[bool; 512]; 9],
}

impl NeighborhoodMaps {
    pub fn get() -> &'static NeighborhoodMaps {
        static MAPS: OnceLock<NeighborhoodMaps> = OnceLock::new();
        MAPS.get_or_init(NeighborhoodMaps::build)
    }

    fn build() -> Self {
        let mut erode_keep = [[false; 512]; 9];
        let mut dilate_set = [[false; 512]; 9];
        for idx in 0..512u16 {
            let fg = ring_foreground(idx);
            let bg = 8 - fg;
            let single_cluster = ring_clusters(idx) == 1;
            for n in 1..=8 {
                erode_keep[n][idx as usize] = bg < n as u32;
                dilate_set[n][idx as usize] = fg >= n as u32 && single_cluster;
            }
        }
        Self {
            erode_keep,
            dilate_set,
        }
    }

    pub fn erode_keeps(&self, n: u8, idx: u16) -> bool {
        self.erode_keep[n as usize][idx as usize]
    }

    pub fn dilate_sets(&self, n: u8, idx: u16) -> bool {
        self.dilate_set[n as usize][idx as usize]
    }
}

fn ring_foreground(idx: u16) -> u32 {
    (idx & !CENTER & 0x1ff).count_ones()
}

/// Number of 8-connected clusters formed by the foreground ring pixels,
/// with connections restricted to the 3×3 window and not passing through
/// the centre.
fn ring_clusters(idx: u16) -> u32 {
    let set = |i: usize| idx >> i & 1 == 1;
    let mut seen = [false; 9];
    let mut clusters = 0;
    for &start in &RING {
        if !set(start) || seen[start] {
            continue;
        }
        clusters += 1;
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(p) = stack.pop() {
            let (px, py) = ((p % 3) as i32, (p / 3) as i32);
            for &q in &RING {
                let (qx, qy) = ((q % 3) as i32, (q / 3) as i32);
                if !seen[q] && set(q) && (px - qx).abs() <= 1 && (py - qy).abs() <= 1 {
                    seen[q] = true;
                    stack.push(q);
                }
            }
        }
    }
    clusters
}

fn clamp_coefficient(n: u8) -> u8 {
    n.clamp(1, 8)
}

/// A foreground pixel is cleared when at least `n` of its eight neighbours
/// are background. `n = 1` is the standard erosion.
pub fn erode(b: &BinaryImage, n: u8) -> BinaryImage {
    let n = clamp_coefficient(n);
    let maps = NeighborhoodMaps::get();
    let mut out = b.clone();
    for y in 0..b.height() {
        b.for_each_window_in_row(y, |x, idx| {
            if idx & CENTER != 0 && !maps.erode_keeps(n, idx) {
                out.set(x, y, false);
            }
        });
    }
    out
}

/// A background pixel is set when at least `n` neighbours are foreground
/// and those neighbours form one 8-connected cluster inside the window, so
/// a single step never bridges two locally separate regions.
pub fn dilate(b: &BinaryImage, n: u8) -> BinaryImage {
    let n = clamp_coefficient(n);
    let maps = NeighborhoodMaps::get();
    let mut out = b.clone();
    for y in 0..b.height() {
        b.for_each_window_in_row(y, |x, idx| {
            if idx & CENTER == 0 && maps.dilate_sets(n, idx) {
                out.set(x, y, true);
            }
        });
    }
    out
}

pub fn open(b: &BinaryImage, n: u8) -> BinaryImage {
    dilate(&erode(b, n), n)
}

/// One-pixel boundary: foreground pixels with at least one background
/// 8-neighbour, computed as `b XOR erode(b, 1)`.
pub fn boundary(b: &BinaryImage) -> BinaryImage {
    b.xor(&erode(b, 1)).expect("erosion preserves dimensions")
}
