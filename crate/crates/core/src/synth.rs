//! Seeded synthetic scenes with retained ground truth.
//!
//! Family A: dark gray fin on light bluish water (luma separable).
//! Family B: mid gray fin on blue-green water of the same luma (only the
//! cyan channel separates them).
//! Family C: uniform RGB noise; nothing to find.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::binarymorph::{boundary, BinaryImage};
use crate::imgio::{GrayImage, RgbImage};
use crate::outline::{EndpointPair, Point};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    A,
    B,
    C,
}

impl std::str::FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "a" => Ok(Family::A),
            "b" => Ok(Family::B),
            "c" => Ok(Family::C),
            other => Err(format!(
                "unknown fixture family {other:?}: expected a, b or c"
            )),
        }
    }
}

pub const SCENE_WIDTH: usize = 400;
pub const SCENE_HEIGHT: usize = 300;
const BODY_TOP: i32 = 210;

#[derive(Clone, Debug)]
pub struct FinScene {
    pub family: Family,
    pub seed: u64,
    pub image: RgbImage,
    /// Fin plus body, before colouring and noise.
    pub truth: BinaryImage,
    pub endpoints: EndpointPair,
    /// Ground-truth boundary pixels above the body line, plus both endpoints.
    pub truth_arc: Vec<Point>,
}

/// Fin as a union of discs along a curved medial axis, sitting on a body
/// band that fills the image below `BODY_TOP`.
fn fin_mask(rng: &mut ChaCha8Rng) -> BinaryImage {
    let base_x = rng.random_range(170.0..230.0);
    let base_r: f64 = rng.random_range(35.0..50.0);
    let height = rng.random_range(90.0..130.0);
    let sweep = rng.random_range(10.0..40.0);
    let tip_r = rng.random_range(4.0..6.0);

    let body = BODY_TOP as f64;
    let p0 = (base_x, body + 0.3 * base_r);
    let p2 = (base_x + sweep, body - height + tip_r);
    let p1 = (base_x, p2.1 + 0.35 * height);

    let mut mask = BinaryImage::from_fn(SCENE_WIDTH, SCENE_HEIGHT, |_, y| y as i32 >= BODY_TOP);
    let steps = 400;
    for k in 0..=steps {
        let t = k as f64 / steps as f64;
        let u = 1.0 - t;
        let cx = u * u * p0.0 + 2.0 * u * t * p1.0 + t * t * p2.0;
        let cy = u * u * p0.1 + 2.0 * u * t * p1.1 + t * t * p2.1;
        let r = tip_r + (base_r - tip_r) * u.powf(1.3);
        let (x0, x1) = ((cx - r).floor().max(0.0) as usize, (cx + r).ceil() as usize);
        let (y0, y1) = ((cy - r).floor().max(0.0) as usize, (cy + r).ceil() as usize);
        for y in y0..=y1.min(SCENE_HEIGHT - 1) {
            for x in x0..=x1.min(SCENE_WIDTH - 1) {
                let (dx, dy) = (x as f64 - cx, y as f64 - cy);
                if dx * dx + dy * dy <= r * r {
                    mask.set(x, y, true);
                }
            }
        }
    }
    mask
}

/// Endpoints sit on the body line just outside the fin's base.
fn base_endpoints(mask: &BinaryImage) -> EndpointPair {
    let row = (BODY_TOP - 1) as usize;
    let xs: Vec<usize> = (0..mask.width()).filter(|&x| mask.get(x, row)).collect();
    let (lo, hi) = (xs[0] as i32, xs[xs.len() - 1] as i32);
    EndpointPair {
        start: Point::new(lo - 1, BODY_TOP),
        end: Point::new(hi + 1, BODY_TOP),
    }
}

fn clamp_u8(v: f64) -> u8 {
    v.round().clamp(0.0, 255.0) as u8
}

fn paint(
    mask: &BinaryImage,
    fg: [f64; 3],
    bg: [f64; 3],
    sigma: f64,
    rng: &mut ChaCha8Rng,
) -> RgbImage {
    let noise = Normal::new(0.0, sigma).expect("finite sigma");
    let mut img = RgbImage::filled(mask.width(), mask.height(), [0; 3]);
    for y in 0..mask.height() {
        for x in 0..mask.width() {
            let base = if mask.get(x, y) { fg } else { bg };
            let px = std::array::from_fn(|c| clamp_u8(base[c] + noise.sample(rng)));
            img.set(x, y, px);
        }
    }
    img
}

pub fn fin_scene(family: Family, seed: u64) -> FinScene {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let truth = fin_mask(&mut rng);
    let endpoints = base_endpoints(&truth);
    let image = match family {
        Family::A => paint(&truth, [55.0; 3], [150.0, 200.0, 220.0], 8.0, &mut rng),
        Family::B => paint(&truth, [110.0; 3], [60.0, 125.0, 155.0], 8.0, &mut rng),
        Family::C => {
            let mut img = RgbImage::filled(SCENE_WIDTH, SCENE_HEIGHT, [0; 3]);
            for y in 0..SCENE_HEIGHT {
                for x in 0..SCENE_WIDTH {
                    img.set(x, y, rng.random());
                }
            }
            img
        }
    };
    let mut truth_arc: Vec<Point> = boundary(&truth)
        .iter_ones()
        .filter(|&(_, y)| (y as i32) < BODY_TOP)
        .map(|(x, y)| Point::new(x as i32, y as i32))
        .collect();
    truth_arc.extend([endpoints.start, endpoints.end]);
    FinScene {
        family,
        seed,
        image,
        truth,
        endpoints,
        truth_arc,
    }
}

/// Two-tone gray image: a dark ellipse on a light ground, independent
/// Gaussian noise per pixel.
#[derive(Clone, Debug)]
pub struct BimodalImage {
    pub image: GrayImage,
    pub means: [f64; 2],
    pub sigmas: [f64; 2],
}

impl BimodalImage {
    /// Levels between the two modes, two standard deviations in from each.
    pub fn gap(&self) -> (f64, f64) {
        (
            self.means[0] + 2.0 * self.sigmas[0],
            self.means[1] - 2.0 * self.sigmas[1],
        )
    }

    pub fn in_gap(&self, t: u8, slack: f64) -> bool {
        let (lo, hi) = self.gap();
        (lo - slack..=hi + slack).contains(&(t as f64))
    }
}

pub fn bimodal_image(seed: u64) -> BimodalImage {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let means = [
        rng.random_range(40.0..=80.0),
        rng.random_range(160.0..=220.0),
    ];
    let sigmas = [rng.random_range(5.0..=15.0), rng.random_range(5.0..=15.0)];
    let (w, h) = (160usize, 120usize);
    let (cx, cy) = (rng.random_range(60.0..100.0), rng.random_range(45.0..75.0));
    let (ax, ay) = (rng.random_range(30.0..50.0), rng.random_range(22.0..38.0));
    let dark = Normal::new(means[0], sigmas[0]).expect("finite sigma");
    let light = Normal::new(means[1], sigmas[1]).expect("finite sigma");
    let mut image = GrayImage::filled(w, h, 0);
    for y in 0..h {
        for x in 0..w {
            let (dx, dy) = ((x as f64 - cx) / ax, (y as f64 - cy) / ay);
            let v = if dx * dx + dy * dy <= 1.0 {
                dark.sample(&mut rng)
            } else {
                light.sample(&mut rng)
            };
            image.set(x, y, clamp_u8(v));
        }
    }
    BimodalImage {
        image,
        means,
        sigmas,
    }
}

/// Symmetric Hausdorff distance between two point sets; infinite if either
/// is empty.
pub fn hausdorff(a: &[Point], b: &[Point]) -> f64 {
    if a.is_empty() || b.is_empty() {
        return f64::INFINITY;
    }
    let directed = |from: &[Point], to: &[Point]| {
        from.iter()
            .map(|p| {
                to.iter()
                    .map(|q| p.distance(*q))
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0, f64::max)
    };
    directed(a, b).max(directed(b, a))
}
