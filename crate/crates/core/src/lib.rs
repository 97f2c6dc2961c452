//! Unsupervised extraction of dolphin dorsal-fin outlines from field photographs.
//!
//! The user supplies the start and end of the fin; the library returns an
//! ordered chain of boundary pixels running from one to the other. Two
//! segmentation tiers are tried in turn:
//!
//! 1. luma intensity, thresholded at the first histogram valley;
//! 2. the cyan channel of a CMYK transform, thresholded where the mean
//!    3×3 "pixelarity" score of the binary image is best.
//!
//! Both tiers share the same morphological clean-up, blob selection,
//! boundary extraction, outline walk and validation.

pub mod binarymorph;
pub mod error;
pub mod imgio;
pub mod interface;
pub mod outline;
pub mod pipeline;
pub mod synth;
pub mod threshold;

pub use binarymorph::{BinaryImage, ComponentLabels, Connectivity};
pub use error::{Error, Result};
pub use imgio::{GrayImage, Histogram, Rect, RgbImage};
pub use outline::{ChainOutline, EndpointPair, Method, Point, SecantGeometry};
pub use pipeline::{autotrace, Tier, TraceConfig, TraceRequest, TraceResult};
pub use threshold::{PixelarityCurve, PixelarityLut, ValleyAnalysis};
