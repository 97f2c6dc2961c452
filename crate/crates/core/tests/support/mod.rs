//! Naive reference implementations shared by the oracle tests and the
//! acceptance suite. Deliberately simple: nested vectors, recursion, no
//! lookup tables.

#![allow(dead_code)]

use fintrace::BinaryImage;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Grid = Vec<Vec<bool>>;

pub fn to_grid(b: &BinaryImage) -> Grid {
    (0..b.height())
        .map(|y| (0..b.width()).map(|x| b.get(x, y)).collect())
        .collect()
}

pub fn from_grid(g: &Grid) -> BinaryImage {
    BinaryImage::from_fn(g[0].len(), g.len(), |x, y| g[y][x])
}

pub fn random_grid(seed: u64, w: usize, h: usize) -> Grid {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let density = rng.random_range(0.2..0.8);
    (0..h)
        .map(|_| (0..w).map(|_| rng.random_bool(density)).collect())
        .collect()
}

fn at(g: &Grid, x: i64, y: i64) -> bool {
    y >= 0
        && x >= 0
        && (y as usize) < g.len()
        && (x as usize) < g[0].len()
        && g[y as usize][x as usize]
}

fn ring(g: &Grid, x: usize, y: usize) -> Vec<(i64, i64, bool)> {
    let mut out = Vec::new();
    for dy in -1..=1i64 {
        for dx in -1..=1i64 {
            if (dx, dy) != (0, 0) {
                out.push((dx, dy, at(g, x as i64 + dx, y as i64 + dy)));
            }
        }
    }
    out
}

pub fn naive_erode(g: &Grid, n: usize) -> Grid {
    let mut out = g.clone();
    for y in 0..g.len() {
        for x in 0..g[0].len() {
            let background = ring(g, x, y).iter().filter(|c| !c.2).count();
            if g[y][x] && background >= n {
                out[y][x] = false;
            }
        }
    }
    out
}

/// Clusters of foreground ring cells, linked when their offsets differ by
/// at most one in each axis (the centre is never a link).
fn ring_cluster_count(cells: &[(i64, i64, bool)]) -> usize {
    let fg: Vec<(i64, i64)> = cells.iter().filter(|c| c.2).map(|c| (c.0, c.1)).collect();
    let mut parent: Vec<usize> = (0..fg.len()).collect();
    fn find(p: &mut Vec<usize>, i: usize) -> usize {
        if p[i] != i {
            let r = find(p, p[i]);
            p[i] = r;
        }
        p[i]
    }
    for i in 0..fg.len() {
        for j in i + 1..fg.len() {
            if (fg[i].0 - fg[j].0).abs() <= 1 && (fg[i].1 - fg[j].1).abs() <= 1 {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a] = b;
            }
        }
    }
    (0..fg.len()).filter(|&i| find(&mut parent, i) == i).count()
}

pub fn naive_dilate(g: &Grid, n: usize) -> Grid {
    let mut out = g.clone();
    for y in 0..g.len() {
        for x in 0..g[0].len() {
            let cells = ring(g, x, y);
            let foreground = cells.iter().filter(|c| c.2).count();
            if !g[y][x] && foreground >= n && ring_cluster_count(&cells) == 1 {
                out[y][x] = true;
            }
        }
    }
    out
}

pub fn naive_open(g: &Grid, n: usize) -> Grid {
    naive_dilate(&naive_erode(g, n), n)
}

pub fn naive_boundary(g: &Grid) -> Grid {
    let mut out = g.clone();
    for y in 0..g.len() {
        for x in 0..g[0].len() {
            out[y][x] = g[y][x] && ring(g, x, y).iter().any(|c| !c.2);
        }
    }
    out
}

fn fill(g: &Grid, labels: &mut Vec<Vec<u32>>, x: i64, y: i64, id: u32, eight: bool) {
    if !at(g, x, y) || labels[y as usize][x as usize] != 0 {
        return;
    }
    labels[y as usize][x as usize] = id;
    for dy in -1..=1i64 {
        for dx in -1..=1i64 {
            let diagonal = dx != 0 && dy != 0;
            if (dx, dy) != (0, 0) && (eight || !diagonal) {
                fill(g, labels, x + dx, y + dy, id, eight);
            }
        }
    }
}

/// Recursive flood-fill labelling, ids in raster order of first pixel.
pub fn flood_labels(g: &Grid, eight: bool) -> Vec<Vec<u32>> {
    let mut labels = vec![vec![0u32; g[0].len()]; g.len()];
    let mut next = 1;
    for y in 0..g.len() {
        for x in 0..g[0].len() {
            if g[y][x] && labels[y][x] == 0 {
                fill(g, &mut labels, x as i64, y as i64, next, eight);
                next += 1;
            }
        }
    }
    labels
}

pub fn window(idx: u16) -> [[bool; 3]; 3] {
    std::array::from_fn(|y| std::array::from_fn(|x| idx >> (3 * y + x) & 1 == 1))
}

fn fill_window(
    w: &[[bool; 3]; 3],
    seen: &mut [[bool; 3]; 3],
    x: i64,
    y: i64,
    colour: bool,
    eight: bool,
) {
    if !(0..3).contains(&x) || !(0..3).contains(&y) {
        return;
    }
    let (ux, uy) = (x as usize, y as usize);
    if seen[uy][ux] || w[uy][ux] != colour {
        return;
    }
    seen[uy][ux] = true;
    for dy in -1..=1i64 {
        for dx in -1..=1i64 {
            if (dx, dy) != (0, 0) && (eight || dx == 0 || dy == 0) {
                fill_window(w, seen, x + dx, y + dy, colour, eight);
            }
        }
    }
}

/// Regions of either colour in a 3×3 window, by recursive flood fill.
pub fn oracle_regions(idx: u16, eight: bool) -> u32 {
    let w = window(idx);
    let mut seen = [[false; 3]; 3];
    let mut count = 0;
    for y in 0..3 {
        for x in 0..3 {
            if !seen[y][x] {
                count += 1;
                fill_window(&w, &mut seen, x as i64, y as i64, w[y][x], eight);
            }
        }
    }
    count
}

/// Long edges by merging unit edges: every unit edge between differently
/// coloured 4-neighbours is a segment with an orientation, a line position
/// and a polarity; segments merge when they lie on the same line, touch end
/// to end, and have the foreground on the same side.
#[allow(clippy::needless_range_loop)]
pub fn oracle_long_edges(idx: u16) -> u32 {
    let w = window(idx);
    // (vertical?, line, offset along line, foreground on low side?)
    let mut segments: Vec<(bool, usize, usize, bool)> = Vec::new();
    for y in 0..3 {
        for x in 0..2 {
            if w[y][x] != w[y][x + 1] {
                segments.push((true, x, y, w[y][x]));
            }
        }
    }
    for y in 0..2 {
        for x in 0..3 {
            if w[y][x] != w[y + 1][x] {
                segments.push((false, y, x, w[y][x]));
            }
        }
    }
    let mut parent: Vec<usize> = (0..segments.len()).collect();
    fn find(p: &mut Vec<usize>, i: usize) -> usize {
        if p[i] != i {
            let r = find(p, p[i]);
            p[i] = r;
        }
        p[i]
    }
    for i in 0..segments.len() {
        for j in 0..segments.len() {
            let (a, b) = (segments[i], segments[j]);
            if a.0 == b.0 && a.1 == b.1 && a.3 == b.3 && a.2 + 1 == b.2 {
                let (ra, rb) = (find(&mut parent, i), find(&mut parent, j));
                parent[ra] = rb;
            }
        }
    }
    (0..segments.len())
        .filter(|&i| find(&mut parent, i) == i)
        .count() as u32
}
