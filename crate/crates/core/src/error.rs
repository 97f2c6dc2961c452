use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("failed to read image {path}: {source}")]
    Read {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("unsupported image format for {0}: only PNG and JPEG are accepted")]
    UnsupportedFormat(PathBuf),

    #[error("failed to decode image: {0}")]
    Decode(String),

    #[error("image is {width}x{height}; at least 3x3 pixels are required")]
    TooSmall { width: usize, height: usize },

    #[error("pixel buffer holds {actual} values, expected {expected}")]
    BufferSize { expected: usize, actual: usize },

    #[error("rectangle ({x},{y},{w},{h}) does not fit inside a {width}x{height} image")]
    RectOutOfBounds {
        x: i64,
        y: i64,
        w: i64,
        h: i64,
        width: usize,
        height: usize,
    },

    #[error("binary images differ in size: {0}x{1} vs {2}x{3}")]
    DimensionMismatch(usize, usize, usize, usize),

    #[error("image contains no foreground pixels")]
    EmptyImage,

    #[error("point ({x},{y}) lies outside the {width}x{height} image")]
    PointOutOfBounds {
        x: i64,
        y: i64,
        width: usize,
        height: usize,
    },

    #[error("the dolphin must be swimming to the user's left: click the start of the fin, then its end (start x {start_x} is not left of end x {end_x})")]
    Orientation { start_x: i32, end_x: i32 },

    #[error("histogram has no valley")]
    NoValley,

    #[error("no boundary pixel lies on or near bisector column {0}")]
    NoBisectorPixel(i32),

    #[error("trimmed outline is empty")]
    EmptyOutline,

    #[error("no qualifying {0} step run found in outline")]
    NoStepRun(&'static str),

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}
