//! Automatic start/end detection from an earlier revision of the tracer.
//! User-supplied endpoints replace it; it remains as a diagnostic fallback.

use std::collections::HashSet;

use super::{EndpointPair, Point};
use crate::binarymorph::BinaryImage;
use crate::error::{Error, Result};

/// Movement priority of the legacy walk: east, north, south, west.
const PRIORITY: [(i32, i32); 4] = [(1, 0), (0, -1), (0, 1), (-1, 0)];

fn legacy_walk(boundary: &BinaryImage) -> Vec<Point> {
    // westmost pixel, lowest (southmost) among ties
    let Some(start) = boundary
        .iter_ones()
        .map(|(x, y)| Point::new(x as i32, y as i32))
        .min_by_key(|p| (p.x, -p.y))
    else {
        return Vec::new();
    };
    let mut path = vec![start];
    let mut seen = HashSet::from([start]);
    let mut here = start;
    loop {
        let next = PRIORITY
            .iter()
            .map(|&(dx, dy)| Point::new(here.x + dx, here.y + dy))
            .find(|p| boundary.get_or_bg(p.x as i64, p.y as i64) && !seen.contains(p));
        match next {
            Some(p) => {
                seen.insert(p);
                path.push(p);
                here = p;
            }
            None => return path,
        }
    }
}

/// Scans the outline with an east-north-south-west walk. The start is the
/// first point that begins three consecutive north-east steps (each step
/// north or east, both directions present); the end is the last point that
/// concludes three consecutive south-east steps.
pub fn detect_endpoints_auto(boundary: &BinaryImage) -> Result<EndpointPair> {
    let path = legacy_walk(boundary);
    if path.is_empty() {
        return Err(Error::EmptyImage);
    }
    let steps: Vec<(i32, i32)> = path
        .windows(2)
        .map(|w| (w[1].x - w[0].x, w[1].y - w[0].y))
        .collect();
    let diagonal_run = |run: &[(i32, i32)], vertical: i32| {
        run.iter().all(|&s| s == (1, 0) || s == (0, vertical))
            && run.contains(&(1, 0))
            && run.contains(&(0, vertical))
    };
    let start = steps
        .windows(3)
        .position(|w| diagonal_run(w, -1))
        .map(|i| path[i])
        .ok_or(Error::NoStepRun("north-east"))?;
    let end = steps
        .windows(3)
        .rposition(|w| diagonal_run(w, 1))
        .map(|i| path[i + 3])
        .ok_or(Error::NoStepRun("south-east"))?;
    Ok(EndpointPair { start, end })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn from_points(w: usize, h: usize, pts: &HashSet<(i32, i32)>) -> BinaryImage {
        BinaryImage::from_fn(w, h, |x, y| pts.contains(&(x as i32, y as i32)))
    }

    /// 4-connected staircase polyline through the given vertices.
    fn polyline(vertices: &[(i32, i32)]) -> HashSet<(i32, i32)> {
        let mut s = HashSet::new();
        for w in vertices.windows(2) {
            let (mut x, mut y) = w[0];
            s.insert((x, y));
            while (x, y) != w[1] {
                let (dx, dy) = (w[1].0 - x, w[1].1 - y);
                if dx.abs() >= dy.abs() {
                    x += dx.signum();
                } else {
                    y += dy.signum();
                }
                s.insert((x, y));
            }
        }
        s
    }

    #[test]
    fn triangle_fin() {
        // flat apex: a pointed one would share pixels between the two
        // staircases and strand the greedy walk at the top
        let pts = polyline(&[(2, 30), (18, 4), (22, 4), (38, 30)]);
        let e = detect_endpoints_auto(&from_points(41, 32, &pts)).unwrap();
        assert!(e.start.x < 20 && e.start.y > 4, "{e:?}");
        assert!(e.end.x > 20 && e.end.y > 4, "{e:?}");
        assert!(e.start.x < e.end.x);
    }

    #[test]
    fn horizontal_line_has_no_rise() {
        let pts = polyline(&[(2, 10), (30, 10)]);
        assert!(matches!(
            detect_endpoints_auto(&from_points(33, 20, &pts)),
            Err(Error::NoStepRun("north-east"))
        ));
    }

    #[test]
    fn semicircle_endpoints_in_outer_quarters() {
        let r = 20.0f64;
        let verts: Vec<(i32, i32)> = (0..=36)
            .map(|k| {
                let a = std::f64::consts::PI * (1.0 - k as f64 / 36.0);
                (
                    (25.0 + r * a.cos()).round() as i32,
                    (25.0 - r * a.sin()).round() as i32,
                )
            })
            .collect();
        let pts = polyline(&verts);
        let e = detect_endpoints_auto(&from_points(50, 30, &pts)).unwrap();
        // quarters of the arc by x extent [5, 45]
        assert!(e.start.x < 15, "{e:?}");
        assert!(e.end.x > 35, "{e:?}");
    }
}
