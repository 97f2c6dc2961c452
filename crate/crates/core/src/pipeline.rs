//! Tiered autotrace: crop and downsample, try luma + histogram valley, fall
//! back to cyan + pixelarity, validate, and map the outline back to full
//! resolution.

use serde::{Deserialize, Serialize};

use crate::binarymorph::{
    boundary, component_at_seed, dilate, erode, largest_component, open, threshold_apply,
    BinaryImage, Connectivity,
};
use crate::error::{Error, Result};
use crate::imgio::{self, Rect, RgbImage};
use crate::outline::{
    compute_secant, rescale_outline, validate_outline, walk_outline, ChainOutline, EndpointPair,
    Method, Point, Rejection, ValidationConfig, WalkConfig,
};
use crate::threshold::{
    find_valley_threshold, pixelarity_curve, select_threshold_from_curve, CurveChoice, CurveConfig,
    PixelarityCurve, PixelarityLut, ValleyAnalysis, ValleyConfig,
};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tier {
    #[default]
    Auto,
    Approach1,
    Approach2,
}

impl std::str::FromStr for Tier {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "auto" => Ok(Tier::Auto),
            "1" | "approach1" => Ok(Tier::Approach1),
            "2" | "approach2" => Ok(Tier::Approach2),
            other => Err(format!("unknown tier {other:?}: expected auto, 1 or 2")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TraceConfig {
    /// Longest side of the working image.
    pub max_dim: usize,
    /// Standard (coefficient 1) openings applied first.
    pub open_iterations: usize,
    pub strong_erosion_coefficient: u8,
    /// Upper bound on strong erosions when no fixpoint is reached.
    pub strong_erosion_cap: usize,
    /// Dilations after the strong erosions; matches the standard erosions.
    pub dilations: usize,
    /// Padding around the endpoints when no viewport is given.
    pub crop_padding: usize,
    /// Crop height as a multiple of its width when no viewport is given.
    pub crop_height_ratio: f64,
    pub valley: ValleyConfig,
    pub curve: CurveConfig,
    pub walk: WalkConfig,
    pub validation: ValidationConfig,
}

impl Default for TraceConfig {
    fn default() -> Self {
        Self {
            max_dim: 600,
            open_iterations: 2,
            strong_erosion_coefficient: 5,
            strong_erosion_cap: 10,
            dilations: 2,
            crop_padding: 100,
            crop_height_ratio: 1.5,
            valley: ValleyConfig::default(),
            curve: CurveConfig::default(),
            walk: WalkConfig::default(),
            validation: ValidationConfig::default(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct TraceRequest {
    pub image: RgbImage,
    /// Full-resolution coordinates.
    pub endpoints: EndpointPair,
    pub viewport: Option<Rect>,
    pub tier: Tier,
    pub config: TraceConfig,
}

impl TraceRequest {
    pub fn new(image: RgbImage, endpoints: EndpointPair) -> Self {
        Self {
            image,
            endpoints,
            viewport: None,
            tier: Tier::Auto,
            config: TraceConfig::default(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Success,
    Failure,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    Threshold,
    Refine,
    Blob,
    Walk,
    Validate,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StageFailure {
    pub stage: Stage,
    pub reason: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rejection: Option<Rejection>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ApproachDiagnostics {
    pub threshold: Option<u8>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub valley: Option<ValleyAnalysis>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub curve: Option<PixelarityCurve>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub curve_choice: Option<CurveChoice>,
    pub thresholded_pixels: usize,
    pub refined_pixels: usize,
    pub blob_pixels: usize,
    pub boundary_pixels: usize,
    pub outline_points: usize,
    pub closed_form: Option<bool>,
    pub failure: Option<StageFailure>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub crop: Rect,
    pub scale: u32,
    pub working_width: usize,
    pub working_height: usize,
    pub working_endpoints: EndpointPair,
    pub approach1: Option<ApproachDiagnostics>,
    pub approach2: Option<ApproachDiagnostics>,
}

impl Diagnostics {
    /// Failure reasons of every approach that ran, in order.
    pub fn reasons(&self) -> Vec<String> {
        [
            ("approach1", &self.approach1),
            ("approach2", &self.approach2),
        ]
        .into_iter()
        .filter_map(|(name, d)| {
            let f = d.as_ref()?.failure.as_ref()?;
            Some(format!("{name}: {}", f.reason))
        })
        .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceResult {
    pub outcome: Outcome,
    /// Full-resolution outline, present on success.
    pub outline: Option<ChainOutline>,
    /// Last approach attempted.
    pub method: Option<Method>,
    pub threshold: Option<u8>,
    pub diagnostics: Diagnostics,
}

impl TraceResult {
    pub fn is_success(&self) -> bool {
        self.outcome == Outcome::Success
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("trace result serialises")
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Preprocessed {
    pub working: RgbImage,
    pub scale: u32,
    /// Full-resolution position of the working image's origin.
    pub offset: Point,
    pub crop: Rect,
    pub endpoints: EndpointPair,
}

/// Crop used when the caller gives no viewport: the endpoints' horizontal
/// span padded on both sides, extended upward to `ratio` times its width
/// from a padded bottom edge, then clamped to the image.
pub fn padded_crop(e: &EndpointPair, width: usize, height: usize, pad: usize, ratio: f64) -> Rect {
    let pad = pad as i64;
    let x0 = (e.start.x.min(e.end.x) as i64 - pad).max(0);
    let x1 = (e.start.x.max(e.end.x) as i64 + pad).min(width as i64);
    let span = (e.start.x.max(e.end.x) - e.start.x.min(e.end.x)) as i64 + 2 * pad;
    let tall = (span as f64 * ratio).round() as i64;
    let y1 = (e.start.y.max(e.end.y) as i64 + pad).min(height as i64);
    let y0 = (y1 - tall).max(0);
    Rect::new(
        x0 as usize,
        y0 as usize,
        (x1 - x0) as usize,
        (y1 - y0) as usize,
    )
}

pub fn preprocess(req: &TraceRequest) -> Result<Preprocessed> {
    let (w, h) = (req.image.width(), req.image.height());
    req.image.ensure_min_size()?;
    let e = req.endpoints;
    for p in [e.start, e.end] {
        if p.x < 0 || p.y < 0 || p.x as usize >= w || p.y as usize >= h {
            return Err(Error::PointOutOfBounds {
                x: p.x as i64,
                y: p.y as i64,
                width: w,
                height: h,
            });
        }
    }
    e.check_orientation()?;
    let crop = match req.viewport {
        Some(v) => {
            v.check_within(w, h)?;
            for p in [e.start, e.end] {
                if !v.contains(p.x as i64, p.y as i64) {
                    return Err(Error::PointOutOfBounds {
                        x: p.x as i64,
                        y: p.y as i64,
                        width: v.w,
                        height: v.h,
                    });
                }
            }
            v
        }
        None => padded_crop(
            &e,
            w,
            h,
            req.config.crop_padding,
            req.config.crop_height_ratio,
        ),
    };
    let cropped = imgio::crop(&req.image, crop)?;
    let (working, scale) = imgio::downsample(&cropped, req.config.max_dim);
    let offset = Point::new(crop.x as i32, crop.y as i32);
    let s = scale as i32;
    let to_working = |p: Point| {
        Point::new(
            ((p.x - offset.x) / s).min(working.width() as i32 - 1),
            ((p.y - offset.y) / s).min(working.height() as i32 - 1),
        )
    };
    let endpoints = EndpointPair {
        start: to_working(e.start),
        end: to_working(e.end),
    };
    // halving can merge endpoints that were one pixel apart
    endpoints.check_orientation()?;
    Ok(Preprocessed {
        working,
        scale,
        offset,
        crop,
        endpoints,
    })
}

/// Receives intermediate rasters (`name`, image) for debugging dumps.
pub type StageSink<'a> = &'a mut dyn FnMut(&str, &BinaryImage);

fn no_sink(_: &str, _: &BinaryImage) {}

/// Opening, strong erosions to a fixpoint, dilations, then AND with the
/// unprocessed binary image so nothing new is added.
pub fn refine(initial: &BinaryImage, cfg: &TraceConfig) -> BinaryImage {
    let mut b = initial.clone();
    for _ in 0..cfg.open_iterations {
        b = open(&b, 1);
    }
    for _ in 0..cfg.strong_erosion_cap {
        let next = erode(&b, cfg.strong_erosion_coefficient);
        if next == b {
            break;
        }
        b = next;
    }
    for _ in 0..cfg.dilations {
        b = dilate(&b, 1);
    }
    b.and(initial).expect("same dimensions")
}

struct Extraction<'a> {
    method: Method,
    working: &'a RgbImage,
    endpoints: &'a EndpointPair,
    cfg: &'a TraceConfig,
}

impl Extraction<'_> {
    fn fail(diag: &mut ApproachDiagnostics, stage: Stage, reason: impl ToString) {
        diag.failure = Some(StageFailure {
            stage,
            reason: reason.to_string(),
            rejection: None,
        });
    }

    /// Shared tail of both approaches: threshold through validation.
    fn extract(
        &self,
        intensity: &imgio::GrayImage,
        threshold: u8,
        diag: &mut ApproachDiagnostics,
        sink: StageSink<'_>,
    ) -> Option<ChainOutline> {
        let mut dump = |name: &str, b: &BinaryImage| {
            sink(&format!("{}_{name}", self.method), b);
        };
        let initial = threshold_apply(intensity, threshold);
        diag.thresholded_pixels = initial.count_ones();
        dump("c_threshold", &initial);

        let refined = refine(&initial, self.cfg);
        diag.refined_pixels = refined.count_ones();
        dump("d_refined", &refined);
        if refined.is_empty() {
            Self::fail(
                diag,
                Stage::Refine,
                "no foreground left after morphological refinement",
            );
            return None;
        }

        let (w, h) = (self.working.width(), self.working.height());
        let geo = compute_secant(self.endpoints, w, h).ok()?;
        let radius = ((geo.length / 2.0).round() as usize).max(8);
        let seed = (geo.fin_seed.x as usize, geo.fin_seed.y as usize);
        let blob = match component_at_seed(&refined, seed, radius, Connectivity::Four) {
            Ok(b) => b,
            Err(e) => {
                Self::fail(diag, Stage::Blob, e);
                return None;
            }
        };
        diag.blob_pixels = blob.count_ones();
        dump("e_blob", &blob);

        let edge = boundary(&blob);
        let edge = match largest_component(&edge, Connectivity::Four) {
            Ok(b) => b,
            Err(e) => {
                Self::fail(diag, Stage::Blob, e);
                return None;
            }
        };
        diag.boundary_pixels = edge.count_ones();
        dump("f_boundary", &edge);

        let mut outline = match walk_outline(&edge, &geo, self.endpoints, &self.cfg.walk) {
            Ok(o) => o,
            Err(e) => {
                Self::fail(diag, Stage::Walk, e);
                return None;
            }
        };
        outline.method = self.method;
        outline.threshold = threshold;
        diag.outline_points = outline.points.len();
        diag.closed_form = Some(outline.closed_form);
        let mut walked = BinaryImage::new(w, h);
        for p in &outline.points {
            walked.set(p.x as usize, p.y as usize, true);
        }
        dump("g_outline", &walked);

        if let Err(rejection) = validate_outline(&outline, self.endpoints, &self.cfg.validation) {
            diag.failure = Some(StageFailure {
                stage: Stage::Validate,
                reason: rejection.to_string(),
                rejection: Some(rejection),
            });
            return None;
        }
        Some(outline)
    }
}

/// Luma intensity, first histogram valley.
pub fn approach1(
    working: &RgbImage,
    e: &EndpointPair,
    cfg: &TraceConfig,
    sink: StageSink<'_>,
) -> (Option<ChainOutline>, ApproachDiagnostics) {
    let mut diag = ApproachDiagnostics::default();
    let luma = imgio::rgb_to_luma(working);
    let valley = match find_valley_threshold(&imgio::histogram(&luma), &cfg.valley) {
        Ok(v) => v,
        Err(e) => {
            Extraction::fail(&mut diag, Stage::Threshold, e);
            return (None, diag);
        }
    };
    diag.valley = Some(valley);
    diag.threshold = Some(valley.chosen);
    let x = Extraction {
        method: Method::Approach1,
        working,
        endpoints: e,
        cfg,
    };
    let outline = x.extract(&luma, valley.chosen, &mut diag, sink);
    (outline, diag)
}

/// Cyan intensity, pixelarity-selected threshold. The fin is cyan-poor, so
/// `cyan <= t` already marks the fin as foreground.
pub fn approach2(
    working: &RgbImage,
    e: &EndpointPair,
    cfg: &TraceConfig,
    lut: &PixelarityLut,
    sink: StageSink<'_>,
) -> (Option<ChainOutline>, ApproachDiagnostics) {
    let mut diag = ApproachDiagnostics::default();
    let cyan = imgio::rgb_to_cyan(working);
    let curve = match pixelarity_curve(&cyan, lut, &cfg.curve) {
        Ok(c) => c,
        Err(e) => {
            Extraction::fail(&mut diag, Stage::Threshold, e);
            return (None, diag);
        }
    };
    let choice = select_threshold_from_curve(&curve, &cfg.curve).expect("curve has samples");
    diag.curve = Some(curve);
    diag.curve_choice = Some(choice);
    diag.threshold = Some(choice.threshold);
    let x = Extraction {
        method: Method::Approach2,
        working,
        endpoints: e,
        cfg,
    };
    let outline = x.extract(&cyan, choice.threshold, &mut diag, sink);
    if outline.is_none() && choice.provisional {
        if let Some(f) = diag.failure.as_mut() {
            f.reason = format!(
                "provisional threshold 0 did not yield a valid outline ({}); supply a manual trace",
                f.reason
            );
        }
    }
    (outline, diag)
}

pub fn autotrace(req: &TraceRequest) -> Result<TraceResult> {
    autotrace_with_sink(req, &mut no_sink)
}

/// [`autotrace`] that also hands every intermediate raster to `sink`.
pub fn autotrace_with_sink(req: &TraceRequest, sink: StageSink<'_>) -> Result<TraceResult> {
    let pre = preprocess(req)?;
    let cfg = &req.config;
    let mut diagnostics = Diagnostics {
        crop: pre.crop,
        scale: pre.scale,
        working_width: pre.working.width(),
        working_height: pre.working.height(),
        working_endpoints: pre.endpoints,
        approach1: None,
        approach2: None,
    };
    let mut found: Option<ChainOutline> = None;
    let mut method = None;
    let mut threshold = None;

    if req.tier != Tier::Approach2 {
        let (outline, diag) = approach1(&pre.working, &pre.endpoints, cfg, &mut *sink);
        method = Some(Method::Approach1);
        threshold = diag.threshold;
        diagnostics.approach1 = Some(diag);
        found = outline;
    }
    if found.is_none() && req.tier != Tier::Approach1 {
        let lut = PixelarityLut::build();
        let (outline, diag) = approach2(&pre.working, &pre.endpoints, cfg, &lut, &mut *sink);
        method = Some(Method::Approach2);
        threshold = diag.threshold;
        diagnostics.approach2 = Some(diag);
        found = outline;
    }

    let outline = found.map(|o| rescale_outline(&o, pre.scale, pre.offset));
    Ok(TraceResult {
        outcome: if outline.is_some() {
            Outcome::Success
        } else {
            Outcome::Failure
        },
        outline,
        method,
        threshold,
        diagnostics,
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
    fn padded_crop_without_viewport() {
        let r = padded_crop(&pair(200, 300, 500, 310), 1000, 800, 100, 1.5);
        assert_eq!((r.x, r.w), (100, 500));
        // 750 px tall above a bottom edge 100 px below the lower endpoint,
        // clamped at the top of the image
        assert_eq!(r.bottom(), 410);
        assert_eq!(r.y, 0);

        let r = padded_crop(&pair(200, 900, 500, 910), 1000, 1200, 100, 1.5);
        assert_eq!((r.x, r.y, r.w, r.h), (100, 260, 500, 750));

        let r = padded_crop(&pair(20, 50, 80, 50), 100, 60, 100, 1.5);
        assert_eq!((r.x, r.y, r.w, r.h), (0, 0, 100, 60));
    }

    #[test]
    fn preprocess_uses_viewport_and_skips_resampling_small_crops() {
        let img = RgbImage::filled(800, 600, [90, 90, 90]);
        let mut req = TraceRequest::new(img, pair(300, 299, 500, 299));
        req.viewport = Some(Rect::new(250, 100, 300, 200));
        let pre = preprocess(&req).unwrap();
        assert_eq!(pre.crop, Rect::new(250, 100, 300, 200));
        assert_eq!(pre.scale, 1);
        assert_eq!((pre.working.width(), pre.working.height()), (300, 200));
        assert_eq!(pre.endpoints, pair(50, 199, 250, 199));
    }

    #[test]
    fn preprocess_rejects_bad_requests() {
        let img = RgbImage::filled(100, 100, [0; 3]);
        let req = TraceRequest::new(img.clone(), pair(60, 50, 20, 50));
        assert!(matches!(preprocess(&req), Err(Error::Orientation { .. })));

        let req = TraceRequest::new(img.clone(), pair(10, 50, 120, 50));
        assert!(matches!(
            preprocess(&req),
            Err(Error::PointOutOfBounds { .. })
        ));

        let mut req = TraceRequest::new(img, pair(10, 50, 60, 50));
        req.viewport = Some(Rect::new(20, 0, 50, 100));
        assert!(preprocess(&req).is_err());
    }

    #[test]
    fn refinement_never_adds_pixels() {
        let b = BinaryImage::from_fn(40, 40, |x, y| {
            (x * 7 + y * 3) % 5 != 0 || (10..30).contains(&x)
        });
        let r = refine(&b, &TraceConfig::default());
        assert!(r.is_subset_of(&b));
    }

    #[test]
    fn uniform_gray_fails_approach1_without_valley() {
        let img = RgbImage::filled(120, 90, [128, 128, 128]);
        let (outline, diag) = approach1(
            &img,
            &pair(30, 70, 90, 70),
            &TraceConfig::default(),
            &mut no_sink,
        );
        assert!(outline.is_none());
        let f = diag.failure.unwrap();
        assert_eq!(f.stage, Stage::Threshold);
        assert!(f.reason.contains("valley"));
    }

    #[test]
    fn tier_parsing() {
        assert_eq!("auto".parse::<Tier>().unwrap(), Tier::Auto);
        assert_eq!("1".parse::<Tier>().unwrap(), Tier::Approach1);
        assert_eq!("approach2".parse::<Tier>().unwrap(), Tier::Approach2);
        assert!("3".parse::<Tier>().is_err());
    }
}
