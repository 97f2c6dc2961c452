//! C ABI over `fintrace`.
//!
//! Handles are opaque and owned by the caller once returned; free them with
//! the matching `*_free`. Every fallible call returns an [`FtStatus`]; on a
//! non-zero status [`ft_last_error`] describes what went wrong. A trace
//! that runs but finds no acceptable outline is not an error: it returns
//! `FT_STATUS_OK` with a result whose outcome is failure.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use fintrace::synth::{fin_scene, Family};
use fintrace::{
    autotrace, EndpointPair, Error, Method, Point, Rect, RgbImage, Tier, TraceRequest, TraceResult,
};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FtStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Io = 3,
    Decode = 4,
    /// End point is not right of the start point.
    Orientation = 5,
    OutOfBounds = 6,
    Panic = 99,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FtTier {
    Auto = 0,
    Approach1 = 1,
    Approach2 = 2,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FtMethod {
    None = 0,
    Approach1 = 1,
    Approach2 = 2,
    Manual = 3,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FtFamily {
    A = 0,
    B = 1,
    C = 2,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct FtRect {
    pub x: u32,
    pub y: u32,
    pub w: u32,
    pub h: u32,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct FtEndpoints {
    pub start_x: i32,
    pub start_y: i32,
    pub end_x: i32,
    pub end_y: i32,
}

/// Opaque RGB image.
pub struct FtImage {
    inner: RgbImage,
}

/// Opaque trace result.
pub struct FtResult {
    inner: TraceResult,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: impl ToString) {
    let msg = CString::new(msg.to_string().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn status_of(e: &Error) -> FtStatus {
    match e {
        Error::Read { .. } | Error::Io(_) => FtStatus::Io,
        Error::UnsupportedFormat(_) | Error::Decode(_) => FtStatus::Decode,
        Error::Orientation { .. } => FtStatus::Orientation,
        Error::PointOutOfBounds { .. } | Error::RectOutOfBounds { .. } => FtStatus::OutOfBounds,
        _ => FtStatus::InvalidArgument,
    }
}

/// Runs `f`, recording errors and converting panics into `FtStatus::Panic`.
fn guard(f: impl FnOnce() -> Result<(), (FtStatus, String)>) -> FtStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_last_error("");
            FtStatus::Ok
        }
        Ok(Err((status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(_) => {
            set_last_error("internal panic");
            FtStatus::Panic
        }
    }
}

fn fail(e: Error) -> (FtStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(name: &str) -> (FtStatus, String) {
    (FtStatus::NullPointer, format!("{name} is null"))
}

/// Message for the last non-OK status on this thread; empty after success.
/// Valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn ft_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn ft_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Loads a PNG or JPEG file.
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ft_image_load(path: *const c_char, out: *mut *mut FtImage) -> FtStatus {
    guard(|| {
        if path.is_null() {
            return Err(null("path"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let path = CStr::from_ptr(path)
            .to_str()
            .map_err(|_| (FtStatus::InvalidArgument, "path is not UTF-8".to_string()))?;
        let inner = fintrace::imgio::load_image(path).map_err(fail)?;
        *out = Box::into_raw(Box::new(FtImage { inner }));
        Ok(())
    })
}

/// Copies a packed 8-bit RGB buffer of `width * height * 3` bytes.
///
/// # Safety
/// `data` must point to `len` readable bytes; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ft_image_from_rgb(
    data: *const u8,
    len: usize,
    width: u32,
    height: u32,
    out: *mut *mut FtImage,
) -> FtStatus {
    guard(|| {
        if data.is_null() {
            return Err(null("data"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let bytes = std::slice::from_raw_parts(data, len);
        let inner = RgbImage::from_packed(width as usize, height as usize, bytes).map_err(fail)?;
        inner.ensure_min_size().map_err(fail)?;
        *out = Box::into_raw(Box::new(FtImage { inner }));
        Ok(())
    })
}

/// # Safety
/// `img` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ft_image_width(img: *const FtImage) -> u32 {
    img.as_ref().map_or(0, |i| i.inner.width() as u32)
}

/// # Safety
/// `img` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ft_image_height(img: *const FtImage) -> u32 {
    img.as_ref().map_or(0, |i| i.inner.height() as u32)
}

/// # Safety
/// `img` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ft_image_free(img: *mut FtImage) {
    if !img.is_null() {
        drop(Box::from_raw(img));
    }
}

/// Generates a seeded synthetic fin scene and its ground-truth endpoints.
///
/// # Safety
/// `out` and `endpoints` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ft_synth_scene(
    family: FtFamily,
    seed: u64,
    out: *mut *mut FtImage,
    endpoints: *mut FtEndpoints,
) -> FtStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        if endpoints.is_null() {
            return Err(null("endpoints"));
        }
        let family = match family {
            FtFamily::A => Family::A,
            FtFamily::B => Family::B,
            FtFamily::C => Family::C,
        };
        let scene = fin_scene(family, seed);
        let e = scene.endpoints;
        *endpoints = FtEndpoints {
            start_x: e.start.x,
            start_y: e.start.y,
            end_x: e.end.x,
            end_y: e.end.y,
        };
        *out = Box::into_raw(Box::new(FtImage { inner: scene.image }));
        Ok(())
    })
}

/// Traces the fin between the endpoints (full-resolution pixels).
/// `viewport` may be null. `FT_STATUS_OK` only means the request was
/// valid; check [`ft_result_succeeded`].
///
/// # Safety
/// `img` must be a live handle, `viewport` null or readable, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ft_trace(
    img: *const FtImage,
    endpoints: FtEndpoints,
    viewport: *const FtRect,
    tier: FtTier,
    out: *mut *mut FtResult,
) -> FtStatus {
    guard(|| {
        let img = img.as_ref().ok_or_else(|| null("img"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let mut req = TraceRequest::new(
            img.inner.clone(),
            EndpointPair {
                start: Point::new(endpoints.start_x, endpoints.start_y),
                end: Point::new(endpoints.end_x, endpoints.end_y),
            },
        );
        req.viewport = viewport
            .as_ref()
            .map(|v| Rect::new(v.x as usize, v.y as usize, v.w as usize, v.h as usize));
        req.tier = match tier {
            FtTier::Auto => Tier::Auto,
            FtTier::Approach1 => Tier::Approach1,
            FtTier::Approach2 => Tier::Approach2,
        };
        let inner = autotrace(&req).map_err(fail)?;
        *out = Box::into_raw(Box::new(FtResult { inner }));
        Ok(())
    })
}

/// # Safety
/// `res` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ft_result_succeeded(res: *const FtResult) -> bool {
    res.as_ref().is_some_and(|r| r.inner.is_success())
}

/// Method of the last approach attempted.
///
/// # Safety
/// `res` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ft_result_method(res: *const FtResult) -> FtMethod {
    match res.as_ref().and_then(|r| r.inner.method) {
        None => FtMethod::None,
        Some(Method::Approach1) => FtMethod::Approach1,
        Some(Method::Approach2) => FtMethod::Approach2,
        Some(Method::Manual) => FtMethod::Manual,
    }
}

/// Threshold of the last approach attempted, or -1 if none was chosen.
///
/// # Safety
/// `res` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ft_result_threshold(res: *const FtResult) -> i32 {
    res.as_ref()
        .and_then(|r| r.inner.threshold)
        .map_or(-1, i32::from)
}

/// Number of outline points (0 on failure).
///
/// # Safety
/// `res` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ft_result_point_count(res: *const FtResult) -> usize {
    res.as_ref()
        .and_then(|r| r.inner.outline.as_ref())
        .map_or(0, |o| o.points.len())
}

/// Copies up to `capacity` points as interleaved `x, y` pairs into `xy`
/// (which must hold `2 * capacity` ints). Returns the number copied.
///
/// # Safety
/// `res` must be a live handle and `xy` writable for `2 * capacity` ints.
#[no_mangle]
pub unsafe extern "C" fn ft_result_points(
    res: *const FtResult,
    xy: *mut i32,
    capacity: usize,
) -> usize {
    let Some(outline) = res.as_ref().and_then(|r| r.inner.outline.as_ref()) else {
        return 0;
    };
    if xy.is_null() {
        return 0;
    }
    let n = outline.points.len().min(capacity);
    let dst = std::slice::from_raw_parts_mut(xy, 2 * n);
    for (pair, p) in dst.chunks_exact_mut(2).zip(&outline.points) {
        pair[0] = p.x;
        pair[1] = p.y;
    }
    n
}

/// Full result, diagnostics included, as JSON. Free with
/// [`ft_string_free`]. Null if `res` is null.
///
/// # Safety
/// `res` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ft_result_json(res: *const FtResult) -> *mut c_char {
    match res.as_ref() {
        Some(r) => CString::new(r.inner.to_json()).map_or(ptr::null_mut(), CString::into_raw),
        None => ptr::null_mut(),
    }
}

/// # Safety
/// `res` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ft_result_free(res: *mut FtResult) {
    if !res.is_null() {
        drop(Box::from_raw(res));
    }
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ft_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
