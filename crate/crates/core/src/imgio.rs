//! Raster containers, decoding, resampling and intensity transforms.
//!
//! Coordinates are `(x, y)` with the origin at the top-left corner; `y`
//! grows downward, so "north" means decreasing `y`.

use std::path::Path;

use image::{ImageFormat, ImageReader};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Smallest width or height accepted by the pipeline.
pub const MIN_DIM: usize = 3;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RgbImage {
    width: usize,
    height: usize,
    data: Vec<[u8; 3]>,
}

impl RgbImage {
    pub fn new(width: usize, height: usize, data: Vec<[u8; 3]>) -> Result<Self> {
        if data.len() != width * height {
            return Err(Error::BufferSize {
                expected: width * height,
                actual: data.len(),
            });
        }
        Ok(Self {
            width,
            height,
            data,
        })
    }

    pub fn filled(width: usize, height: usize, rgb: [u8; 3]) -> Self {
        Self {
            width,
            height,
            data: vec![rgb; width * height],
        }
    }

    /// Builds an image from a packed `RGBRGB...` byte buffer.
    pub fn from_packed(width: usize, height: usize, bytes: &[u8]) -> Result<Self> {
        if bytes.len() != width * height * 3 {
            return Err(Error::BufferSize {
                expected: width * height * 3,
                actual: bytes.len(),
            });
        }
        let data = bytes.chunks_exact(3).map(|c| [c[0], c[1], c[2]]).collect();
        Ok(Self {
            width,
            height,
            data,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels(&self) -> &[[u8; 3]] {
        &self.data
    }

    pub fn get(&self, x: usize, y: usize) -> [u8; 3] {
        self.data[y * self.width + x]
    }

    pub fn set(&mut self, x: usize, y: usize, rgb: [u8; 3]) {
        self.data[y * self.width + x] = rgb;
    }

    pub fn to_packed(&self) -> Vec<u8> {
        self.data.iter().flatten().copied().collect()
    }

    pub fn ensure_min_size(&self) -> Result<()> {
        if self.width < MIN_DIM || self.height < MIN_DIM {
            return Err(Error::TooSmall {
                width: self.width,
                height: self.height,
            });
        }
        Ok(())
    }

    pub fn bounds(&self) -> Rect {
        Rect::new(0, 0, self.width, self.height)
    }

    pub fn save_png(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.encode_png())?;
        Ok(())
    }

    pub fn encode_png(&self) -> Vec<u8> {
        let buf =
            image::RgbImage::from_raw(self.width as u32, self.height as u32, self.to_packed())
                .expect("buffer length matches dimensions");
        let mut out = std::io::Cursor::new(Vec::new());
        buf.write_to(&mut out, ImageFormat::Png)
            .expect("PNG encoding into memory cannot fail");
        out.into_inner()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrayImage {
    width: usize,
    height: usize,
    data: Vec<u8>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, data: Vec<u8>) -> Result<Self> {
        if data.len() != width * height {
            return Err(Error::BufferSize {
                expected: width * height,
                actual: data.len(),
            });
        }
        Ok(Self {
            width,
            height,
            data,
        })
    }

    pub fn filled(width: usize, height: usize, value: u8) -> Self {
        Self {
            width,
            height,
            data: vec![value; width * height],
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels(&self) -> &[u8] {
        &self.data
    }

    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.data[y * self.width + x]
    }

    pub fn set(&mut self, x: usize, y: usize, v: u8) {
        self.data[y * self.width + x] = v;
    }
}

/// 256-bin intensity histogram.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Histogram {
    bins: [u64; 256],
    total: u64,
}

impl Histogram {
    pub fn from_bins(bins: [u64; 256]) -> Self {
        let total = bins.iter().sum();
        Self { bins, total }
    }

    pub fn bins(&self) -> &[u64; 256] {
        &self.bins
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn is_empty(&self) -> bool {
        self.total == 0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rect {
    pub x: usize,
    pub y: usize,
    pub w: usize,
    pub h: usize,
}

impl Rect {
    pub const fn new(x: usize, y: usize, w: usize, h: usize) -> Self {
        Self { x, y, w, h }
    }

    pub fn right(&self) -> usize {
        self.x + self.w
    }

    pub fn bottom(&self) -> usize {
        self.y + self.h
    }

    pub fn contains(&self, x: i64, y: i64) -> bool {
        x >= self.x as i64
            && y >= self.y as i64
            && x < self.right() as i64
            && y < self.bottom() as i64
    }

    /// Checks that the rectangle lies inside a `width`×`height` image and is
    /// at least 3×3.
    pub fn check_within(&self, width: usize, height: usize) -> Result<()> {
        if self.w < MIN_DIM || self.h < MIN_DIM || self.right() > width || self.bottom() > height {
            return Err(Error::RectOutOfBounds {
                x: self.x as i64,
                y: self.y as i64,
                w: self.w as i64,
                h: self.h as i64,
                width,
                height,
            });
        }
        Ok(())
    }
}

/// Decodes a PNG or JPEG file; alpha is dropped.
pub fn load_image(path: impl AsRef<Path>) -> Result<RgbImage> {
    let path = path.as_ref();
    let reader = ImageReader::open(path)
        .map_err(|source| Error::Read {
            path: path.to_path_buf(),
            source,
        })?
        .with_guessed_format()
        .map_err(|source| Error::Read {
            path: path.to_path_buf(),
            source,
        })?;
    match reader.format() {
        Some(ImageFormat::Png) | Some(ImageFormat::Jpeg) => {}
        _ => return Err(Error::UnsupportedFormat(path.to_path_buf())),
    }
    let decoded = reader.decode().map_err(|e| Error::Decode(e.to_string()))?;
    decode_rgb(decoded)
}

/// Decodes an in-memory PNG or JPEG.
pub fn decode_image(bytes: &[u8]) -> Result<RgbImage> {
    let format = image::guess_format(bytes).map_err(|e| Error::Decode(e.to_string()))?;
    if !matches!(format, ImageFormat::Png | ImageFormat::Jpeg) {
        return Err(Error::Decode(format!("unsupported format {format:?}")));
    }
    let decoded = image::load_from_memory_with_format(bytes, format)
        .map_err(|e| Error::Decode(e.to_string()))?;
    decode_rgb(decoded)
}

fn decode_rgb(decoded: image::DynamicImage) -> Result<RgbImage> {
    let rgb = decoded.into_rgb8();
    let (w, h) = (rgb.width() as usize, rgb.height() as usize);
    if w == 0 || h == 0 {
        return Err(Error::Decode("zero-size image".into()));
    }
    let img = RgbImage::from_packed(w, h, rgb.as_raw())?;
    img.ensure_min_size()?;
    Ok(img)
}

/// Halves the image with a 2×2 box filter until its longer side is at most
/// `max_dim`. Returns the image and the integer factor mapping working
/// coordinates back to the input (a power of two).
///
/// Odd trailing rows and columns are dropped at each halving, so the factor
/// is the exact coordinate scale even when the width ratio is not integral.
/// Halving also stops before either side would fall below 3 pixels.
pub fn downsample(img: &RgbImage, max_dim: usize) -> (RgbImage, u32) {
    let mut current = img.clone();
    let mut scale = 1u32;
    while current.width.max(current.height) > max_dim.max(MIN_DIM)
        && current.width / 2 >= MIN_DIM
        && current.height / 2 >= MIN_DIM
    {
        current = halve(&current);
        scale *= 2;
    }
    (current, scale)
}

fn halve(img: &RgbImage) -> RgbImage {
    let (w, h) = (img.width / 2, img.height / 2);
    let mut data = Vec::with_capacity(w * h);
    for y in 0..h {
        for x in 0..w {
            let quad = [
                img.get(2 * x, 2 * y),
                img.get(2 * x + 1, 2 * y),
                img.get(2 * x, 2 * y + 1),
                img.get(2 * x + 1, 2 * y + 1),
            ];
            let mut px = [0u8; 3];
            for (c, out) in px.iter_mut().enumerate() {
                let sum: u32 = quad.iter().map(|p| p[c] as u32).sum();
                *out = ((sum + 2) / 4) as u8;
            }
            data.push(px);
        }
    }
    RgbImage {
        width: w,
        height: h,
        data,
    }
}

pub fn crop(img: &RgbImage, r: Rect) -> Result<RgbImage> {
    r.check_within(img.width, img.height)?;
    let mut data = Vec::with_capacity(r.w * r.h);
    for y in r.y..r.bottom() {
        let row = y * img.width;
        data.extend_from_slice(&img.data[row + r.x..row + r.right()]);
    }
    Ok(RgbImage {
        width: r.w,
        height: r.h,
        data,
    })
}

fn round_half_up(v: f64) -> u8 {
    (v + 0.5).floor().clamp(0.0, 255.0) as u8
}

/// Perceptual luma `0.299 R + 0.587 G + 0.114 B`, rounded half up.
pub fn luma(rgb: [u8; 3]) -> u8 {
    // integer form of the weights avoids 0.5 ties drifting in floating point
    let weighted = 299 * rgb[0] as u32 + 587 * rgb[1] as u32 + 114 * rgb[2] as u32;
    ((weighted + 500) / 1000) as u8
}

/// Cyan component of a naive CMYK transform: `c = 1 - r`, `k = min(c, m, y)`,
/// `c - k` (no division by `1 - k`), or 0 when `k == 1`.
pub fn cyan(rgb: [u8; 3]) -> u8 {
    let [r, g, b] = rgb.map(|v| v as f64 / 255.0);
    let (c, m, y) = (1.0 - r, 1.0 - g, 1.0 - b);
    let k = c.min(m).min(y);
    let c = if k == 1.0 { 0.0 } else { c - k };
    round_half_up(c * 255.0)
}

pub fn rgb_to_luma(img: &RgbImage) -> GrayImage {
    map_gray(img, luma)
}

pub fn rgb_to_cyan(img: &RgbImage) -> GrayImage {
    map_gray(img, cyan)
}

fn map_gray(img: &RgbImage, f: impl Fn([u8; 3]) -> u8) -> GrayImage {
    GrayImage {
        width: img.width,
        height: img.height,
        data: img.data.iter().map(|&p| f(p)).collect(),
    }
}

pub fn histogram(g: &GrayImage) -> Histogram {
    let mut bins = [0u64; 256];
    for &v in &g.data {
        bins[v as usize] += 1;
    }
    Histogram {
        bins,
        total: g.data.len() as u64,
    }
}
