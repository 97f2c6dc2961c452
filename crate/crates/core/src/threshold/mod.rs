//! Unsupervised threshold selection.

mod pixelarity;
mod valley;

pub use pixelarity::{
    build_pixelarity_lut, mean_pixelarity, pixelarity_curve, score_window,
    select_threshold_from_curve, CurveCategory, CurveChoice, CurveConfig, CurveSample,
    PixelarityCurve, PixelarityLut, CURVE_STEP, MAX_SCORE, MIN_SCORE,
};
pub use valley::{find_valley_threshold, ValleyAnalysis, ValleyConfig};

#[doc(hidden)]
pub mod oracle_support {
    //! Internal pieces exposed so integration tests can check them against
    //! independent implementations.
    pub use super::pixelarity::{long_edges, window_regions};
}
