//! Bit-packed binary rasters, 3×3 neighbourhood morphology and connected
//! components.
//!
//! Foreground (bit set) means "dark / candidate fin". Every neighbourhood
//! operation treats pixels outside the image as background.

mod components;
mod morph;

use std::io::Write;

pub use components::{
    component_at_seed, connected_components, largest_component, ComponentLabels, Connectivity,
};
pub use morph::{boundary, dilate, erode, open, NeighborhoodMaps};

use crate::error::{Error, Result};
use crate::imgio::GrayImage;

/// Bit mask of the window columns 0 and 1, used when sliding a 3×3 index
/// one pixel to the right.
const KEEP_LEFT_COLUMNS: u16 = 0b011_011_011;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BinaryImage {
    width: usize,
    height: usize,
    stride: usize,
    words: Vec<u64>,
}

impl std::fmt::Debug for BinaryImage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "BinaryImage {}x{}", self.width, self.height)?;
        for y in 0..self.height.min(64) {
            let row: String = (0..self.width.min(128))
                .map(|x| if self.get(x, y) { '#' } else { '.' })
                .collect();
            writeln!(f, "{row}")?;
        }
        Ok(())
    }
}

impl BinaryImage {
    pub fn new(width: usize, height: usize) -> Self {
        let stride = width.div_ceil(64);
        Self {
            width,
            height,
            stride,
            words: vec![0; stride * height],
        }
    }

    pub fn filled(width: usize, height: usize) -> Self {
        let mut img = Self::new(width, height);
        for y in 0..height {
            for x in 0..width {
                img.set(x, y, true);
            }
        }
        img
    }

    pub fn from_fn(width: usize, height: usize, f: impl Fn(usize, usize) -> bool) -> Self {
        let mut img = Self::new(width, height);
        for y in 0..height {
            for x in 0..width {
                if f(x, y) {
                    img.set(x, y, true);
                }
            }
        }
        img
    }

    /// Parses rows of `#`/`1` (foreground) and `.`/`0` (background).
    /// Whitespace is ignored; all rows must have the same length.
    pub fn from_ascii(rows: &[&str]) -> Self {
        let rows: Vec<Vec<bool>> = rows
            .iter()
            .map(|r| {
                r.chars()
                    .filter(|c| !c.is_whitespace())
                    .map(|c| matches!(c, '#' | '1'))
                    .collect()
            })
            .collect();
        let width = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == width), "ragged ascii raster");
        Self::from_fn(width, rows.len(), |x, y| rows[y][x])
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> bool {
        debug_assert!(x < self.width && y < self.height);
        self.words[y * self.stride + x / 64] >> (x % 64) & 1 == 1
    }

    /// Like [`get`](Self::get) but out-of-image coordinates read as background.
    #[inline]
    pub fn get_or_bg(&self, x: i64, y: i64) -> bool {
        x >= 0
            && y >= 0
            && (x as usize) < self.width
            && (y as usize) < self.height
            && self.get(x as usize, y as usize)
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, v: bool) {
        debug_assert!(x < self.width && y < self.height);
        let word = &mut self.words[y * self.stride + x / 64];
        let mask = 1u64 << (x % 64);
        if v {
            *word |= mask;
        } else {
            *word &= !mask;
        }
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn same_size(&self, other: &BinaryImage) -> bool {
        self.width == other.width && self.height == other.height
    }

    /// Foreground coordinates in raster order.
    pub fn iter_ones(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.height).flat_map(move |y| {
            (0..self.stride).flat_map(move |wi| {
                let mut word = self.words[y * self.stride + wi];
                std::iter::from_fn(move || {
                    if word == 0 {
                        return None;
                    }
                    let bit = word.trailing_zeros() as usize;
                    word &= word - 1;
                    Some((wi * 64 + bit, y))
                })
            })
        })
    }

    /// 9-bit index of the 3×3 window centred on `(x, y)`: bit 0 is the
    /// top-left pixel, bit 8 the bottom-right, in raster order.
    pub fn window_index(&self, x: usize, y: usize) -> u16 {
        let mut idx = 0u16;
        for dy in 0..3i64 {
            for dx in 0..3i64 {
                if self.get_or_bg(x as i64 + dx - 1, y as i64 + dy - 1) {
                    idx |= 1 << (dy * 3 + dx);
                }
            }
        }
        idx
    }

    /// Visits every pixel of row `y` with its window index, sliding the
    /// index instead of recomputing all nine bits.
    #[inline]
    pub(crate) fn for_each_window_in_row(&self, y: usize, mut f: impl FnMut(usize, u16)) {
        let column = |x: i64| -> u16 {
            let yi = y as i64;
            (self.get_or_bg(x, yi - 1) as u16)
                | (self.get_or_bg(x, yi) as u16) << 3
                | (self.get_or_bg(x, yi + 1) as u16) << 6
        };
        let mut idx = column(-1) << 1 | column(0) << 2;
        for x in 0..self.width {
            idx = ((idx >> 1) & KEEP_LEFT_COLUMNS) | column(x as i64 + 1) << 2;
            f(x, idx);
        }
    }

    fn zip_words(&self, other: &BinaryImage, op: impl Fn(u64, u64) -> u64) -> Result<BinaryImage> {
        if !self.same_size(other) {
            return Err(Error::DimensionMismatch(
                self.width,
                self.height,
                other.width,
                other.height,
            ));
        }
        Ok(BinaryImage {
            width: self.width,
            height: self.height,
            stride: self.stride,
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(&a, &b)| op(a, b))
                .collect(),
        })
    }

    pub fn and(&self, other: &BinaryImage) -> Result<BinaryImage> {
        self.zip_words(other, |a, b| a & b)
    }

    pub fn or(&self, other: &BinaryImage) -> Result<BinaryImage> {
        self.zip_words(other, |a, b| a | b)
    }

    pub fn xor(&self, other: &BinaryImage) -> Result<BinaryImage> {
        self.zip_words(other, |a, b| a ^ b)
    }

    pub fn not(&self) -> BinaryImage {
        let mut out = self.clone();
        for y in 0..self.height {
            for wi in 0..self.stride {
                let valid = if wi + 1 == self.stride && !self.width.is_multiple_of(64) {
                    (1u64 << (self.width % 64)) - 1
                } else {
                    u64::MAX
                };
                let w = &mut out.words[y * self.stride + wi];
                *w = !*w & valid;
            }
        }
        out
    }

    /// `true` when every foreground pixel of `self` is also set in `other`.
    pub fn is_subset_of(&self, other: &BinaryImage) -> bool {
        self.same_size(other)
            && self
                .words
                .iter()
                .zip(&other.words)
                .all(|(&a, &b)| a & !b == 0)
    }

    /// Writes the raster as binary PBM (`P4`); foreground is black.
    pub fn write_pbm(&self, mut out: impl Write) -> std::io::Result<()> {
        write!(out, "P4\n{} {}\n", self.width, self.height)?;
        let row_bytes = self.width.div_ceil(8);
        let mut row = vec![0u8; row_bytes];
        for y in 0..self.height {
            row.fill(0);
            for x in 0..self.width {
                if self.get(x, y) {
                    row[x / 8] |= 0x80 >> (x % 8);
                }
            }
            out.write_all(&row)?;
        }
        Ok(())
    }

    pub fn save_pbm(&self, path: impl AsRef<std::path::Path>) -> Result<()> {
        let file = std::fs::File::create(path)?;
        self.write_pbm(std::io::BufWriter::new(file))?;
        Ok(())
    }
}

/// Foreground where intensity is at most `t`.
pub fn threshold_apply(g: &GrayImage, t: u8) -> BinaryImage {
    let mut out = BinaryImage::new(g.width(), g.height());
    for (i, &v) in g.pixels().iter().enumerate() {
        if v <= t {
            out.set(i % g.width(), i / g.width(), true);
        }
    }
    out
}

pub fn bit_and(a: &BinaryImage, b: &BinaryImage) -> Result<BinaryImage> {
    a.and(b)
}

pub fn bit_xor(a: &BinaryImage, b: &BinaryImage) -> Result<BinaryImage> {
    a.xor(b)
}
