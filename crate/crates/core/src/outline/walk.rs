//! Walks a one-pixel boundary from the top of the secant bisector east and
//! west, then trims the chain to the user's endpoints.
//!
//! Pixels on the bisector column are off limits except for the run hanging
//! directly below the seed. This opens closed outlines (fin joined to the
//! body) exactly as if a one-pixel gap had been cut where the body line
//! crosses the bisector, so open and closed outlines are walked alike.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::{ChainOutline, EndpointPair, Point, SecantGeometry};
use crate::binarymorph::BinaryImage;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WalkConfig {
    /// How many columns either side of the bisector to try when the
    /// bisector itself holds no boundary pixel.
    pub bisector_search: i32,
}

impl Default for WalkConfig {
    fn default() -> Self {
        Self { bisector_search: 5 }
    }
}

const EAST: (i32, i32) = (1, 0);
const SOUTH: (i32, i32) = (0, 1);
const WEST: (i32, i32) = (-1, 0);
const NORTH: (i32, i32) = (0, -1);
/// Screen-clockwise order (y grows downward).
const CLOCKWISE: [(i32, i32); 4] = [EAST, SOUTH, WEST, NORTH];

#[derive(Clone, Copy, PartialEq, Eq)]
enum Side {
    East,
    West,
}

struct Walker<'a> {
    boundary: &'a BinaryImage,
    column: i32,
    seed_run: (i32, i32),
}

impl Walker<'_> {
    fn on(&self, p: Point) -> bool {
        self.boundary.get_or_bg(p.x as i64, p.y as i64)
    }

    fn allowed(&self, p: Point, side: Side) -> bool {
        if !self.on(p) {
            return false;
        }
        match (p.x - self.column).signum() {
            0 => (self.seed_run.0..=self.seed_run.1).contains(&p.y),
            1 => side == Side::East,
            _ => side == Side::West,
        }
    }

    /// Continue straight first, then turn away from the seed: clockwise for
    /// the eastward walk, counter-clockwise for the westward one.
    fn preferences(dir: (i32, i32), side: Side) -> [(i32, i32); 4] {
        let i = CLOCKWISE.iter().position(|&d| d == dir).unwrap_or(0);
        let step: isize = if side == Side::East { 1 } else { -1 };
        std::array::from_fn(|k| CLOCKWISE[(i as isize + step * k as isize).rem_euclid(4) as usize])
    }

    /// Depth-first walk from `seed`; returns the longest path found, so
    /// short spurs entered by the direction preference do not end the walk.
    fn walk(&self, seed: Point, side: Side, excluded: &HashSet<Point>) -> Vec<Point> {
        let initial = if side == Side::East { EAST } else { WEST };
        let mut parent: Vec<usize> = vec![usize::MAX];
        let mut nodes: Vec<Point> = vec![seed];
        let mut depth: Vec<usize> = vec![0];
        let mut visited: HashSet<Point> = HashSet::from([seed]);
        // (node index, incoming direction, next preference to try)
        let mut stack: Vec<(usize, (i32, i32), usize)> = vec![(0, initial, 0)];
        let mut deepest = 0;
        while let Some(top) = stack.last_mut() {
            let (node, dir, k) = *top;
            if k == 4 {
                stack.pop();
                continue;
            }
            top.2 += 1;
            let d = Self::preferences(dir, side)[k];
            let next = Point::new(nodes[node].x + d.0, nodes[node].y + d.1);
            if !self.allowed(next, side) || excluded.contains(&next) || !visited.insert(next) {
                continue;
            }
            nodes.push(next);
            parent.push(node);
            depth.push(depth[node] + 1);
            let idx = nodes.len() - 1;
            if depth[idx] > depth[deepest] {
                deepest = idx;
            }
            stack.push((idx, d, 0));
        }
        let mut path = Vec::with_capacity(depth[deepest] + 1);
        let mut i = deepest;
        while i != usize::MAX {
            path.push(nodes[i]);
            i = parent[i];
        }
        path.reverse();
        path
    }
}

fn northmost_in_column(boundary: &BinaryImage, x: i32) -> Option<Point> {
    if x < 0 || x as usize >= boundary.width() {
        return None;
    }
    (0..boundary.height())
        .find(|&y| boundary.get(x as usize, y))
        .map(|y| Point::new(x, y as i32))
}

fn nearest_index(points: &[Point], target: Point) -> usize {
    let mut best = 0;
    for (i, p) in points.iter().enumerate() {
        if p.distance(target) < points[best].distance(target) {
            best = i;
        }
    }
    best
}

/// Walks `boundary` into an ordered chain from nearest-to-`e.start` to
/// nearest-to-`e.end`.
///
/// The returned outline carries `Method::Manual`, threshold 0 and scale 1;
/// callers fill in the provenance.
pub fn walk_outline(
    boundary: &BinaryImage,
    geo: &SecantGeometry,
    e: &EndpointPair,
    cfg: &WalkConfig,
) -> Result<ChainOutline> {
    e.check_orientation()?;
    let offsets = std::iter::once(0).chain((1..=cfg.bisector_search).flat_map(|d| [-d, d]));
    let seed = offsets
        .filter_map(|d| northmost_in_column(boundary, geo.bisector_x + d))
        .next()
        .ok_or(Error::NoBisectorPixel(geo.bisector_x))?;

    let mut run_end = seed.y;
    while boundary.get_or_bg(seed.x as i64, run_end as i64 + 1) {
        run_end += 1;
    }
    let walker = Walker {
        boundary,
        column: seed.x,
        seed_run: (seed.y, run_end),
    };

    let east = walker.walk(seed, Side::East, &HashSet::new());
    let east_set: HashSet<Point> = east[1..].iter().copied().collect();
    let west = walker.walk(seed, Side::West, &east_set);

    let mut raw: Vec<Point> = west.iter().skip(1).rev().copied().collect();
    raw.extend_from_slice(&east);

    let closed_form = raw.len() > 3 && raw[0].manhattan(raw[raw.len() - 1]) <= 2;

    let i_start = nearest_index(&raw, e.start);
    let i_end = nearest_index(&raw, e.end);
    let points: Vec<Point> = if i_start <= i_end {
        raw[i_start..=i_end].to_vec()
    } else {
        raw[i_end..=i_start].iter().rev().copied().collect()
    };
    if points.len() < 2 {
        return Err(Error::EmptyOutline);
    }
    Ok(ChainOutline {
        closed_form,
        ..ChainOutline::manual(points)
    })
}
