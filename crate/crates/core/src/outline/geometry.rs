use serde::{Deserialize, Serialize};

use super::Point;
use crate::error::{Error, Result};

/// User-indicated start and end of the fin. The dolphin swims to the left,
/// so the start (leading edge) lies left of the end (trailing edge).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EndpointPair {
    pub start: Point,
    pub end: Point,
}

impl EndpointPair {
    pub fn new(start: Point, end: Point) -> Result<Self> {
        let e = Self { start, end };
        e.check_orientation()?;
        Ok(e)
    }

    pub fn check_orientation(&self) -> Result<()> {
        if self.start.x < self.end.x {
            Ok(())
        } else {
            Err(Error::Orientation {
                start_x: self.start.x,
                end_x: self.end.x,
            })
        }
    }

    pub fn secant_length(&self) -> f64 {
        self.start.distance(self.end)
    }
}

/// Horizontal line at the higher of the two endpoints, its vertical
/// bisector, and the point half a secant length above the endpoints'
/// midpoint where the fin body is expected.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SecantGeometry {
    pub secant_y: i32,
    pub length: f64,
    pub bisector_x: i32,
    pub fin_seed: Point,
}

pub fn compute_secant(e: &EndpointPair, width: usize, height: usize) -> Result<SecantGeometry> {
    for p in [e.start, e.end] {
        if p.x < 0 || p.y < 0 || p.x as usize >= width || p.y as usize >= height {
            return Err(Error::PointOutOfBounds {
                x: p.x as i64,
                y: p.y as i64,
                width,
                height,
            });
        }
    }
    e.check_orientation()?;
    let length = e.secant_length();
    let bisector_x = (e.start.x + e.end.x + 1).div_euclid(2);
    let mid_y = (e.start.y + e.end.y) as f64 / 2.0;
    let seed_y = (mid_y - length / 2.0 + 0.5).floor() as i32;
    Ok(SecantGeometry {
        secant_y: e.start.y.min(e.end.y),
        length,
        bisector_x,
        fin_seed: Point::new(
            bisector_x.clamp(0, width as i32 - 1),
            seed_y.clamp(0, height as i32 - 1),
        ),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair(sx: i32, sy: i32, ex: i32, ey: i32) -> EndpointPair {
        EndpointPair {
            start: Point::new(sx, sy),
            end: Point::new(ex, ey),
        }
    }

    #[test]
    fn level_endpoints() {
        let g = compute_secant(&pair(10, 50, 40, 50), 100, 100).unwrap();
        assert_eq!(g.secant_y, 50);
        assert_eq!(g.length, 30.0);
        assert_eq!(g.bisector_x, 25);
        assert_eq!(g.fin_seed, Point::new(25, 35));
    }

    #[test]
    fn secant_takes_the_higher_endpoint() {
        let g = compute_secant(&pair(10, 60, 40, 50), 100, 100).unwrap();
        assert_eq!(g.secant_y, 50);
    }

    #[test]
    fn seed_is_clamped() {
        let g = compute_secant(&pair(0, 5, 60, 5), 100, 100).unwrap();
        assert_eq!(g.fin_seed, Point::new(30, 0));
    }

    #[test]
    fn orientation_is_enforced() {
        assert!(matches!(
            compute_secant(&pair(40, 50, 10, 50), 100, 100),
            Err(Error::Orientation {
                start_x: 40,
                end_x: 10
            })
        ));
        assert!(EndpointPair::new(Point::new(5, 5), Point::new(5, 9)).is_err());
        assert!(matches!(
            compute_secant(&pair(10, 50, 140, 50), 100, 100),
            Err(Error::PointOutOfBounds { .. })
        ));
    }
}
