//! C ABI for `carnot-steer`.
//!
//! Every fallible function returns a [`CsStatus`]; on failure the message is
//! available from [`cs_last_error_message`] on the same thread. Objects are
//! opaque handles released with their `_free` function. Multivector
//! coefficients are indexed by blade bitmask (bit `i` set when `e_{i+1}` is
//! a factor), so `G_3` uses 8 and `G_4` 16 coefficients.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use carnot_steer::align::{align_bases, FramePair};
use carnot_steer::ga::Multivector;
use carnot_steer::{steer, verify, Error, Model, Point, SteerOptions, SteerReport};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    DimensionMismatch = 3,
    NearZeroNorm = 4,
    AntipodalVectors = 5,
    DegenerateConfiguration = 6,
    InfeasibleTarget = 7,
    EndpointMismatch = 8,
    Parse = 9,
    Io = 10,
    BufferTooSmall = 11,
    Panic = 12,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CsModel {
    M36 = 36,
    M47 = 47,
}

impl From<CsModel> for Model {
    fn from(m: CsModel) -> Self {
        match m {
            CsModel::M36 => Model::M36,
            CsModel::M47 => Model::M47,
        }
    }
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CsSteerOptions {
    pub samples: usize,
    pub k_max: f64,
    pub t_max: f64,
    pub tolerance: f64,
    pub starts: usize,
    pub seed: u64,
    pub acceptance: f64,
}

impl From<CsSteerOptions> for SteerOptions {
    fn from(o: CsSteerOptions) -> Self {
        SteerOptions {
            samples: o.samples,
            k_max: o.k_max,
            t_max: o.t_max,
            tolerance: o.tolerance,
            starts: o.starts,
            seed: o.seed,
            acceptance: o.acceptance,
        }
    }
}

/// Opaque multivector handle.
pub struct CsMultivector(Multivector);

/// Opaque steering report handle.
pub struct CsReport(SteerReport);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> CsStatus {
    match e {
        Error::DimensionMismatch { .. }
        | Error::UnsupportedDimension(_)
        | Error::CoefficientCount { .. } => CsStatus::DimensionMismatch,
        Error::NearZeroNorm(_) | Error::DependentVectors { .. } => CsStatus::NearZeroNorm,
        Error::AntipodalVectors => CsStatus::AntipodalVectors,
        Error::DegenerateConfiguration(_) => CsStatus::DegenerateConfiguration,
        Error::InfeasibleTarget { .. } => CsStatus::InfeasibleTarget,
        Error::EndpointMismatch { .. } => CsStatus::EndpointMismatch,
        Error::Parse(_) | Error::Json(_) | Error::Csv(_) => CsStatus::Parse,
        Error::Io(_) => CsStatus::Io,
        _ => CsStatus::InvalidArgument,
    }
}

fn fail(status: CsStatus, msg: impl Into<String>) -> CsStatus {
    set_error(msg.into());
    status
}

/// Runs `f`, turning errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), CsStatus>) -> CsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => CsStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => fail(CsStatus::Panic, "internal panic"),
    }
}

fn lift<T>(r: carnot_steer::Result<T>) -> Result<T, CsStatus> {
    r.map_err(|e| fail(status_of(&e), e.to_string()))
}

unsafe fn input<'a>(data: *const f64, len: usize) -> Result<&'a [f64], CsStatus> {
    if len == 0 {
        return Ok(&[]);
    }
    if data.is_null() {
        return Err(fail(CsStatus::NullPointer, "null input buffer"));
    }
    Ok(slice::from_raw_parts(data, len))
}

unsafe fn output<'a>(data: *mut f64, len: usize, needed: usize) -> Result<&'a mut [f64], CsStatus> {
    if data.is_null() {
        return Err(fail(CsStatus::NullPointer, "null output buffer"));
    }
    if len < needed {
        return Err(fail(
            CsStatus::BufferTooSmall,
            format!("output buffer holds {len} values, {needed} needed"),
        ));
    }
    Ok(slice::from_raw_parts_mut(data, needed))
}

unsafe fn handle<'a, T>(p: *const T) -> Result<&'a T, CsStatus> {
    p.as_ref()
        .ok_or_else(|| fail(CsStatus::NullPointer, "null handle"))
}

fn out_ptr<T>(out: *mut *mut T) -> Result<(), CsStatus> {
    if out.is_null() {
        Err(fail(CsStatus::NullPointer, "null output handle"))
    } else {
        Ok(())
    }
}

/// Last error message on this thread, or NULL. Valid until the next failing
/// call on the same thread.
#[no_mangle]
pub extern "C" fn cs_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Frees a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn cs_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Creates a multivector of `G_dim` from `2^dim` coefficients.
///
/// # Safety
/// `coeffs` must point to `len` readable doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cs_multivector_new(
    dim: usize,
    coeffs: *const f64,
    len: usize,
    out: *mut *mut CsMultivector,
) -> CsStatus {
    guard(|| {
        out_ptr(out)?;
        let c = input(coeffs, len)?;
        let mv = lift(Multivector::from_coeffs(dim, c))?;
        *out = Box::into_raw(Box::new(CsMultivector(mv)));
        Ok(())
    })
}

/// # Safety
/// `mv` must come from this library and not have been freed. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn cs_multivector_free(mv: *mut CsMultivector) {
    if !mv.is_null() {
        drop(Box::from_raw(mv));
    }
}

/// Algebra dimension of `mv`, 0 for NULL.
///
/// # Safety
/// `mv` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cs_multivector_dim(mv: *const CsMultivector) -> usize {
    mv.as_ref().map_or(0, |m| m.0.dim())
}

/// Copies the `2^dim` coefficients into `out`.
///
/// # Safety
/// `mv` must be a live handle; `out` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn cs_multivector_coeffs(
    mv: *const CsMultivector,
    out: *mut f64,
    len: usize,
) -> CsStatus {
    guard(|| {
        let m = handle(mv)?;
        output(out, len, m.0.len())?.copy_from_slice(m.0.coeffs());
        Ok(())
    })
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CsProduct {
    Geometric = 0,
    Outer = 1,
    Inner = 2,
}

/// `out = a ∘ b` for the chosen product.
///
/// # Safety
/// `a`, `b` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cs_multivector_product(
    kind: CsProduct,
    a: *const CsMultivector,
    b: *const CsMultivector,
    out: *mut *mut CsMultivector,
) -> CsStatus {
    guard(|| {
        out_ptr(out)?;
        let (a, b) = (&handle(a)?.0, &handle(b)?.0);
        let r = lift(match kind {
            CsProduct::Geometric => a.geometric_product(b),
            CsProduct::Outer => a.outer_product(b),
            CsProduct::Inner => a.inner_product(b),
        })?;
        *out = Box::into_raw(Box::new(CsMultivector(r)));
        Ok(())
    })
}

/// `out = mv I`.
///
/// # Safety
/// `mv` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cs_multivector_dual(
    mv: *const CsMultivector,
    out: *mut *mut CsMultivector,
) -> CsStatus {
    guard(|| {
        out_ptr(out)?;
        let r = handle(mv)?.0.dual();
        *out = Box::into_raw(Box::new(CsMultivector(r)));
        Ok(())
    })
}

/// Euclidean norm of the coefficients.
///
/// # Safety
/// `mv` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cs_multivector_norm(mv: *const CsMultivector, out: *mut f64) -> CsStatus {
    guard(|| {
        let m = handle(mv)?;
        output(out, 1, 1)?[0] = m.0.norm();
        Ok(())
    })
}

/// Invariants of a point given by coefficients (8 for `M36`, 16 for
/// `M47`): 3 values for `M36`, 4 for `M47`.
///
/// # Safety
/// `coeffs` must hold `len` doubles and `out` `out_len` doubles.
#[no_mangle]
pub unsafe extern "C" fn cs_invariants(
    model: CsModel,
    coeffs: *const f64,
    len: usize,
    out: *mut f64,
    out_len: usize,
) -> CsStatus {
    guard(|| {
        let model = Model::from(model);
        let q = lift(Multivector::from_coeffs(model.algebra_dim(), input(coeffs, len)?))?;
        let inv = lift(Point::from_multivector(model, q))?.invariants().to_vec();
        output(out, out_len, inv.len())?.copy_from_slice(&inv);
        Ok(())
    })
}

/// Rotor taking the frame `xs` to `ys`. Both are `dim` vectors of `dim`
/// components, row-major; the rotor's `2^dim` coefficients go to `out`.
///
/// # Safety
/// `xs`, `ys` must each hold `dim * dim` doubles and `out` `out_len`.
#[no_mangle]
pub unsafe extern "C" fn cs_align_bases(
    dim: usize,
    xs: *const f64,
    ys: *const f64,
    out: *mut f64,
    out_len: usize,
) -> CsStatus {
    guard(|| {
        if !(1..=carnot_steer::ga::MAX_DIM).contains(&dim) {
            return Err(fail(CsStatus::DimensionMismatch, format!("unsupported dimension {dim}")));
        }
        let frame = |data: &[f64]| -> Vec<Multivector> {
            data.chunks(dim).map(|c| Multivector::vector(dim, c)).collect()
        };
        let xs = frame(input(xs, dim * dim)?);
        let ys = frame(input(ys, dim * dim)?);
        let rotor = lift(FramePair::new(xs, ys).and_then(|p| align_bases(&p)))?;
        let c = rotor.as_multivector().coeffs();
        output(out, out_len, c.len())?.copy_from_slice(c);
        Ok(())
    })
}

/// Defaults matching the command-line tool.
#[no_mangle]
pub extern "C" fn cs_steer_options_default() -> CsSteerOptions {
    let d = SteerOptions::default();
    CsSteerOptions {
        samples: d.samples,
        k_max: d.k_max,
        t_max: d.t_max,
        tolerance: d.tolerance,
        starts: d.starts,
        seed: d.seed,
        acceptance: d.acceptance,
    }
}

/// Steers from the origin to the point given by coefficients.
/// `options` may be NULL for defaults.
///
/// # Safety
/// `coeffs` must hold `len` doubles, `options` be NULL or readable, and
/// `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cs_steer(
    model: CsModel,
    coeffs: *const f64,
    len: usize,
    options: *const CsSteerOptions,
    out: *mut *mut CsReport,
) -> CsStatus {
    guard(|| {
        out_ptr(out)?;
        let model = Model::from(model);
        let q = lift(Multivector::from_coeffs(model.algebra_dim(), input(coeffs, len)?))?;
        let target = lift(Point::from_multivector(model, q))?;
        let opts = options
            .as_ref()
            .map_or_else(SteerOptions::default, |o| SteerOptions::from(*o));
        let report = lift(steer(&target, &opts))?;
        *out = Box::into_raw(Box::new(CsReport(report)));
        Ok(())
    })
}

/// # Safety
/// `report` must come from this library and not have been freed. NULL is
/// ignored.
#[no_mangle]
pub unsafe extern "C" fn cs_report_free(report: *mut CsReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// Arrival time, NaN for NULL.
///
/// # Safety
/// `report` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cs_report_t_final(report: *const CsReport) -> f64 {
    report.as_ref().map_or(f64::NAN, |r| r.0.t_final)
}

/// Endpoint error, NaN for NULL.
///
/// # Safety
/// `report` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cs_report_endpoint_error(report: *const CsReport) -> f64 {
    report.as_ref().map_or(f64::NAN, |r| r.0.endpoint_error)
}

/// Number of trajectory samples.
///
/// # Safety
/// `report` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cs_report_sample_count(report: *const CsReport) -> usize {
    report.as_ref().map_or(0, |r| r.0.samples.len())
}

/// Values per sample row: `t` followed by the coordinates (7 for `M36`,
/// 8 for `M47`).
///
/// # Safety
/// `report` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cs_report_row_width(report: *const CsReport) -> usize {
    report
        .as_ref()
        .map_or(0, |r| 1 + r.0.model.coordinate_names().len())
}

/// Copies the sampled trajectory, row-major, into `out`.
///
/// # Safety
/// `report` must be a live handle; `out` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn cs_report_samples(
    report: *const CsReport,
    out: *mut f64,
    len: usize,
) -> CsStatus {
    guard(|| {
        let r = &handle(report)?.0;
        let width = 1 + r.model.coordinate_names().len();
        let buf = output(out, len, width * r.samples.len())?;
        for (row, s) in buf.chunks_mut(width).zip(&r.samples) {
            row[0] = s.t;
            row[1..].copy_from_slice(&s.coords);
        }
        Ok(())
    })
}

/// Copies the alignment rotor's coefficients into `out`.
///
/// # Safety
/// `report` must be a live handle; `out` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn cs_report_rotor(
    report: *const CsReport,
    out: *mut f64,
    len: usize,
) -> CsStatus {
    guard(|| {
        let r = &handle(report)?.0;
        output(out, len, r.rotor.len())?.copy_from_slice(&r.rotor);
        Ok(())
    })
}

/// Geodesic constants: `(K, D, C3, t)` for `M36`, `(K, C1, C2, C, t)` for
/// `M47`.
///
/// # Safety
/// `report` must be a live handle; `out` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn cs_report_params(
    report: *const CsReport,
    out: *mut f64,
    len: usize,
) -> CsStatus {
    guard(|| {
        let u = handle(report)?.0.params.to_unknowns();
        output(out, len, u.len())?.copy_from_slice(&u);
        Ok(())
    })
}

/// The report as JSON; free with [`cs_string_free`]. NULL on failure.
///
/// # Safety
/// `report` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cs_report_to_json(report: *const CsReport) -> *mut c_char {
    let Some(r) = report.as_ref() else {
        set_error("null handle".to_string());
        return ptr::null_mut();
    };
    match serde_json::to_string(&r.0) {
        Ok(s) => CString::new(s).map_or(ptr::null_mut(), CString::into_raw),
        Err(e) => {
            set_error(e.to_string());
            ptr::null_mut()
        }
    }
}

/// Re-checks a JSON report; `passed` receives 1 when every check passes.
///
/// # Safety
/// `json` must be a NUL-terminated string; `passed` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cs_verify_report_json(json: *const c_char, passed: *mut i32) -> CsStatus {
    guard(|| {
        if json.is_null() || passed.is_null() {
            return Err(fail(CsStatus::NullPointer, "null argument"));
        }
        let text = CStr::from_ptr(json)
            .to_str()
            .map_err(|e| fail(CsStatus::Parse, e.to_string()))?;
        let report: SteerReport =
            serde_json::from_str(text).map_err(|e| fail(CsStatus::Parse, e.to_string()))?;
        let v = verify(&report);
        if let Some(c) = v.checks.iter().find(|c| !c.passed) {
            set_error(format!("{}: {}", c.name, c.detail));
        }
        *passed = i32::from(v.passed());
        Ok(())
    })
}
