use serde::{Deserialize, Serialize};

use super::BinaryImage;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Connectivity {
    Four,
    Eight,
}

impl Connectivity {
    pub fn offsets(self) -> &'static [(i64, i64)] {
        const FOUR: [(i64, i64); 4] = [(1, 0), (0, -1), (-1, 0), (0, 1)];
        const EIGHT: [(i64, i64); 8] = [
            (1, 0),
            (1, -1),
            (0, -1),
            (-1, -1),
            (-1, 0),
            (-1, 1),
            (0, 1),
            (1, 1),
        ];
        match self {
            Connectivity::Four => &FOUR,
            Connectivity::Eight => &EIGHT,
        }
    }
}

/// Component labelling of a binary image. Label 0 is background; labels
/// `1..=count` are assigned in raster order of each component's first pixel.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentLabels {
    width: usize,
    height: usize,
    labels: Vec<u32>,
    sizes: Vec<usize>,
}

impl ComponentLabels {
    pub fn count(&self) -> usize {
        self.sizes.len()
    }

    pub fn label(&self, x: usize, y: usize) -> u32 {
        self.labels[y * self.width + x]
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    /// Pixel count of component `id` (1-based).
    pub fn size(&self, id: u32) -> usize {
        self.sizes[id as usize - 1]
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    /// Largest component; the lowest id wins ties.
    pub fn largest(&self) -> Option<u32> {
        let mut best: Option<(u32, usize)> = None;
        for (i, &s) in self.sizes.iter().enumerate() {
            if best.is_none_or(|(_, bs)| s > bs) {
                best = Some((i as u32 + 1, s));
            }
        }
        best.map(|(id, _)| id)
    }

    pub fn mask(&self, id: u32) -> BinaryImage {
        let mut out = BinaryImage::new(self.width, self.height);
        for (i, &l) in self.labels.iter().enumerate() {
            if l == id {
                out.set(i % self.width, i / self.width, true);
            }
        }
        out
    }
}

pub fn connected_components(b: &BinaryImage, connectivity: Connectivity) -> ComponentLabels {
    let (w, h) = (b.width(), b.height());
    let mut labels = vec![0u32; w * h];
    let mut sizes = Vec::new();
    let mut stack = Vec::new();
    for (sx, sy) in b.iter_ones() {
        if labels[sy * w + sx] != 0 {
            continue;
        }
        let id = sizes.len() as u32 + 1;
        let mut size = 0;
        labels[sy * w + sx] = id;
        stack.push((sx, sy));
        while let Some((x, y)) = stack.pop() {
            size += 1;
            for &(dx, dy) in connectivity.offsets() {
                let (nx, ny) = (x as i64 + dx, y as i64 + dy);
                if b.get_or_bg(nx, ny) {
                    let i = ny as usize * w + nx as usize;
                    if labels[i] == 0 {
                        labels[i] = id;
                        stack.push((nx as usize, ny as usize));
                    }
                }
            }
        }
        sizes.push(size);
    }
    ComponentLabels {
        width: w,
        height: h,
        labels,
        sizes,
    }
}

/// Keeps only the largest component (ties go to the one met first in
/// raster order).
pub fn largest_component(b: &BinaryImage, connectivity: Connectivity) -> Result<BinaryImage> {
    let labels = connected_components(b, connectivity);
    let id = labels.largest().ok_or(Error::EmptyImage)?;
    Ok(labels.mask(id))
}

/// Selects the blob nearest a seed point.
///
/// Square windows of radius 4, 8, 16, ... (capped at `max_radius`) are
/// searched around `seed`; the first window holding any foreground yields
/// the largest component that intersects it. With no foreground inside
/// `max_radius` the largest component of the whole image is returned.
pub fn component_at_seed(
    b: &BinaryImage,
    seed: (usize, usize),
    max_radius: usize,
    connectivity: Connectivity,
) -> Result<BinaryImage> {
    if seed.0 >= b.width() || seed.1 >= b.height() {
        return Err(Error::PointOutOfBounds {
            x: seed.0 as i64,
            y: seed.1 as i64,
            width: b.width(),
            height: b.height(),
        });
    }
    let labels = connected_components(b, connectivity);
    if labels.count() == 0 {
        return Err(Error::EmptyImage);
    }
    let mut radius = 4usize.min(max_radius.max(1));
    loop {
        let x0 = seed.0.saturating_sub(radius);
        let y0 = seed.1.saturating_sub(radius);
        let x1 = (seed.0 + radius).min(b.width() - 1);
        let y1 = (seed.1 + radius).min(b.height() - 1);
        let mut best: Option<(u32, usize)> = None;
        for y in y0..=y1 {
            for x in x0..=x1 {
                let id = labels.label(x, y);
                if id == 0 {
                    continue;
                }
                let size = labels.size(id);
                let better = match best {
                    None => true,
                    Some((bid, bsize)) => size > bsize || (size == bsize && id < bid),
                };
                if better {
                    best = Some((id, size));
                }
            }
        }
        if let Some((id, _)) = best {
            return Ok(labels.mask(id));
        }
        if radius >= max_radius {
            break;
        }
        radius = (radius * 2).min(max_radius);
    }
    let id = labels.largest().expect("nonempty labelling");
    Ok(labels.mask(id))
}
