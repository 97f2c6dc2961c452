//! Ordered fin outlines: walking a boundary raster between the user's start
//! and end points, validating the result and mapping it back to full
//! resolution.

mod chain;
mod geometry;
mod legacy;
mod validate;
mod walk;

use serde::{Deserialize, Serialize};

pub use chain::{parse_text_points, rescale_outline, ChainOutline, Method};
pub use geometry::{compute_secant, EndpointPair, SecantGeometry};
pub use legacy::detect_endpoints_auto;
pub use validate::{validate_outline, Rejection, ValidationConfig};
pub use walk::{walk_outline, WalkConfig};

/// Pixel coordinate; serialises as `[x, y]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "[i32; 2]", into = "[i32; 2]")]
pub struct Point {
    pub x: i32,
    pub y: i32,
}

impl Point {
    pub const fn new(x: i32, y: i32) -> Self {
        Self { x, y }
    }

    pub fn distance(self, other: Point) -> f64 {
        let (dx, dy) = ((self.x - other.x) as f64, (self.y - other.y) as f64);
        dx.hypot(dy)
    }

    pub fn manhattan(self, other: Point) -> u32 {
        self.x.abs_diff(other.x) + self.y.abs_diff(other.y)
    }

    pub fn is_4_adjacent(self, other: Point) -> bool {
        self.manhattan(other) == 1
    }
}

impl From<[i32; 2]> for Point {
    fn from([x, y]: [i32; 2]) -> Self {
        Self { x, y }
    }
}

impl From<Point> for [i32; 2] {
    fn from(p: Point) -> Self {
        [p.x, p.y]
    }
}

impl std::fmt::Display for Point {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}
