//! C ABI for rangesets.
//!
//! Objects cross the boundary as opaque handles created by `rs_*_new` /
//! `rs_*_compute` functions and released with the matching `rs_*_free`.
//! Every fallible call returns an [`RsStatus`]; on failure a description is
//! available from [`rs_last_error_message`] on the same thread until the next
//! failing call. Strings handed out by the library must be released with
//! [`rs_string_free`]. Panics never unwind into the caller; they surface as
//! `RS_STATUS_INTERNAL`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;

use rangesets::binning::{bin_assign, AttributeSpec};
use rangesets::filtration::FilterMode;
use rangesets::geometry::{delaunay_triangulate, GeometryError, Point2D, PointSet2D, Triangulation};
use rangesets::pipeline::{compute_rangeset, suggest_epsilon, PipelineError, Rangeset};
use rangesets::service::{rangeset_json, run_pipeline, SessionConfig};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    TooFewPoints = 3,
    AllCollinear = 4,
    NonFinite = 5,
    Io = 6,
    Pipeline = 7,
    Internal = 99,
}

/// Immutable set of 2D points.
pub struct RsPointSet {
    points: PointSet2D,
}

/// Delaunay triangulation of a point set.
pub struct RsTriangulation {
    inner: Triangulation,
}

/// Rangeset of one attribute.
pub struct RsRangeset {
    inner: Rangeset,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: impl Into<String>) {
    let text = message.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(text).ok());
}

fn fail(status: RsStatus, message: impl Into<String>) -> RsStatus {
    set_error(message);
    status
}

fn geometry_status(e: &GeometryError) -> RsStatus {
    match e {
        GeometryError::TooFewPoints(_) => RsStatus::TooFewPoints,
        GeometryError::AllCollinear => RsStatus::AllCollinear,
        GeometryError::NonFinite { .. } => RsStatus::NonFinite,
    }
}

fn pipeline_status(e: &PipelineError) -> RsStatus {
    match e {
        PipelineError::Geometry(g) => geometry_status(g),
        PipelineError::Filtration(_) | PipelineError::LengthMismatch { .. } => RsStatus::InvalidArgument,
        _ => RsStatus::Pipeline,
    }
}

/// Runs `f`, converting panics into `Internal`.
fn guarded(f: impl FnOnce() -> RsStatus) -> RsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => fail(RsStatus::Internal, "internal panic"),
    }
}

fn give_string(text: String, out: *mut *mut c_char) -> RsStatus {
    match CString::new(text) {
        Ok(s) => {
            // SAFETY: caller checked `out` for null
            unsafe { *out = s.into_raw() };
            RsStatus::Ok
        }
        Err(_) => fail(RsStatus::Internal, "string contains NUL"),
    }
}

/// Message of the last failed call on this thread, or NULL. The pointer stays
/// valid until the next failing call on the same thread; do not free it.
#[no_mangle]
pub extern "C" fn rs_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(std::ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn rs_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Releases a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and must not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn rs_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Copies `n` points from the coordinate arrays `xs` and `ys`.
///
/// # Safety
/// `xs` and `ys` must point to `n` readable doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rs_pointset_new(
    xs: *const f64,
    ys: *const f64,
    n: usize,
    out: *mut *mut RsPointSet,
) -> RsStatus {
    if out.is_null() || (n > 0 && (xs.is_null() || ys.is_null())) {
        return fail(RsStatus::NullPointer, "null argument to rs_pointset_new");
    }
    guarded(|| {
        let (xs, ys) = if n == 0 {
            (&[][..], &[][..])
        } else {
            (std::slice::from_raw_parts(xs, n), std::slice::from_raw_parts(ys, n))
        };
        let pts: Vec<Point2D> = xs.iter().zip(ys).map(|(&x, &y)| Point2D::new(x, y)).collect();
        match PointSet2D::new(pts) {
            Ok(points) => {
                *out = Box::into_raw(Box::new(RsPointSet { points }));
                RsStatus::Ok
            }
            Err(e) => fail(geometry_status(&e), e.to_string()),
        }
    })
}

/// # Safety
/// `ps` must be NULL or a handle from `rs_pointset_new` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn rs_pointset_free(ps: *mut RsPointSet) {
    if !ps.is_null() {
        drop(Box::from_raw(ps));
    }
}

/// Number of points; 0 for NULL.
///
/// # Safety
/// `ps` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rs_pointset_len(ps: *const RsPointSet) -> usize {
    ps.as_ref().map_or(0, |p| p.points.len())
}

/// Suggested filter threshold from the spanning-tree edge lengths.
///
/// # Safety
/// `ps` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn rs_suggest_epsilon(ps: *const RsPointSet, out: *mut f64) -> RsStatus {
    let (Some(ps), false) = (ps.as_ref(), out.is_null()) else {
        return fail(RsStatus::NullPointer, "null argument to rs_suggest_epsilon");
    };
    guarded(|| match suggest_epsilon(&ps.points) {
        Ok(eps) => {
            *out = eps;
            RsStatus::Ok
        }
        Err(e) => fail(pipeline_status(&e), e.to_string()),
    })
}

/// Delaunay triangulation of `ps`.
///
/// # Safety
/// `ps` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn rs_triangulate(ps: *const RsPointSet, out: *mut *mut RsTriangulation) -> RsStatus {
    let (Some(ps), false) = (ps.as_ref(), out.is_null()) else {
        return fail(RsStatus::NullPointer, "null argument to rs_triangulate");
    };
    guarded(|| match delaunay_triangulate(ps.points.as_slice()) {
        Ok(inner) => {
            *out = Box::into_raw(Box::new(RsTriangulation { inner }));
            RsStatus::Ok
        }
        Err(e) => fail(geometry_status(&e), e.to_string()),
    })
}

/// # Safety
/// `t` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rs_triangulation_free(t: *mut RsTriangulation) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

/// # Safety
/// `t` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rs_triangulation_triangle_count(t: *const RsTriangulation) -> usize {
    t.as_ref().map_or(0, |t| t.inner.triangles().len())
}

/// Copies up to `capacity` triangles into `buf` as consecutive vertex-id
/// triples (counter-clockwise). Writes the number of triangles copied to
/// `written`.
///
/// # Safety
/// `t` must be a live handle; `buf` must hold `3 * capacity` values.
#[no_mangle]
pub unsafe extern "C" fn rs_triangulation_triangles(
    t: *const RsTriangulation,
    buf: *mut usize,
    capacity: usize,
    written: *mut usize,
) -> RsStatus {
    let Some(t) = t.as_ref() else {
        return fail(RsStatus::NullPointer, "null triangulation");
    };
    if written.is_null() || (capacity > 0 && buf.is_null()) {
        return fail(RsStatus::NullPointer, "null output buffer");
    }
    let tris = t.inner.triangles();
    let count = tris.len().min(capacity);
    if count > 0 {
        let out = std::slice::from_raw_parts_mut(buf, 3 * count);
        for (chunk, tri) in out.chunks_exact_mut(3).zip(tris) {
            chunk.copy_from_slice(tri);
        }
    }
    *written = count;
    RsStatus::Ok
}

/// Longest Delaunay edge; 0 for NULL.
///
/// # Safety
/// `t` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rs_triangulation_max_edge_length(t: *const RsTriangulation) -> f64 {
    t.as_ref().map_or(0.0, |t| t.inner.max_edge_length())
}

/// Rangeset of a continuous attribute: `values` (one per point) are cut into
/// `bins` equal-width bins over their range and every bin is filtered at
/// `epsilon`. A negative `epsilon` selects the suggested value. Missing values
/// are NaN.
///
/// # Safety
/// `ps` must be a live handle, `values` must point to `rs_pointset_len(ps)`
/// doubles, and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rs_rangeset_compute(
    ps: *const RsPointSet,
    values: *const f64,
    bins: usize,
    epsilon: f64,
    out: *mut *mut RsRangeset,
) -> RsStatus {
    let Some(ps) = ps.as_ref() else {
        return fail(RsStatus::NullPointer, "null point set");
    };
    if out.is_null() || (values.is_null() && !ps.points.is_empty()) {
        return fail(RsStatus::NullPointer, "null argument to rs_rangeset_compute");
    }
    if epsilon.is_nan() {
        return fail(RsStatus::InvalidArgument, "epsilon is NaN");
    }
    guarded(|| {
        let values = if ps.points.is_empty() { &[][..] } else { std::slice::from_raw_parts(values, ps.points.len()) };
        let spec = match AttributeSpec::continuous("value", values).and_then(|s| s.with_bins(bins)) {
            Ok(s) => s,
            Err(e) => return fail(RsStatus::InvalidArgument, e.to_string()),
        };
        let binned = match bin_assign(values, &spec) {
            Ok(b) => b,
            Err(e) => return fail(RsStatus::InvalidArgument, e.to_string()),
        };
        let epsilon = if epsilon < 0.0 {
            match suggest_epsilon(&ps.points) {
                Ok(e) => e,
                Err(e) => return fail(pipeline_status(&e), e.to_string()),
            }
        } else {
            epsilon
        };
        match compute_rangeset(&ps.points, &binned, &spec, epsilon, FilterMode::EdgeLength) {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(RsRangeset { inner }));
                RsStatus::Ok
            }
            Err(e) => fail(pipeline_status(&e), e.to_string()),
        }
    })
}

/// # Safety
/// `r` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rs_rangeset_free(r: *mut RsRangeset) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// Threshold the rangeset was computed at; NaN for NULL.
///
/// # Safety
/// `r` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rs_rangeset_epsilon(r: *const RsRangeset) -> f64 {
    r.as_ref().map_or(f64::NAN, |r| r.inner.epsilon)
}

/// # Safety
/// `r` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rs_rangeset_bin_count(r: *const RsRangeset) -> usize {
    r.as_ref().map_or(0, |r| r.inner.bins.len())
}

/// Total number of contours over all bins.
///
/// # Safety
/// `r` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rs_rangeset_polygon_count(r: *const RsRangeset) -> usize {
    r.as_ref().map_or(0, |r| r.inner.polygon_count())
}

/// Outliers in bin `bin`; 0 when out of range.
///
/// # Safety
/// `r` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rs_rangeset_outlier_count(r: *const RsRangeset, bin: usize) -> usize {
    r.as_ref().and_then(|r| r.inner.bins.get(bin)).map_or(0, |b| b.outlier_ids.len())
}

/// JSON serialization of the rangeset. Free the result with `rs_string_free`.
///
/// # Safety
/// `r` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn rs_rangeset_to_json(r: *const RsRangeset, out: *mut *mut c_char) -> RsStatus {
    let (Some(r), false) = (r.as_ref(), out.is_null()) else {
        return fail(RsStatus::NullPointer, "null argument to rs_rangeset_to_json");
    };
    guarded(|| give_string(rangeset_json(&r.inner), out))
}

/// Runs the batch pipeline for the TOML config at `config_path` and returns
/// the rangeset document as JSON. Free the result with `rs_string_free`.
///
/// # Safety
/// `config_path` must be a NUL-terminated UTF-8 path and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn rs_pipeline_run(config_path: *const c_char, out: *mut *mut c_char) -> RsStatus {
    if config_path.is_null() || out.is_null() {
        return fail(RsStatus::NullPointer, "null argument to rs_pipeline_run");
    }
    let Ok(path) = CStr::from_ptr(config_path).to_str() else {
        return fail(RsStatus::InvalidArgument, "config path is not UTF-8");
    };
    guarded(|| {
        let path = Path::new(path);
        let config = match SessionConfig::load(path) {
            Ok(c) => c,
            Err(e) => return fail(RsStatus::Io, e.to_string()),
        };
        let base = path.parent().unwrap_or(Path::new(""));
        match run_pipeline(&config.resolve(base)) {
            Ok(doc) => give_string(doc.to_json(), out),
            Err(e) => fail(RsStatus::Pipeline, e.to_string()),
        }
    })
}
