//! C ABI for the jspec library: opaque handles, integer status codes, and
//! JSON bridging, so other languages can drive the joint-spectrum pipeline.
//!
//! Conventions:
//! - Every function returns a [`JspecStatus`]; outputs go through out
//!   pointers, which are written only on `Ok`.
//! - Handles created here must be released with the matching `_free`
//!   function; strings returned through `char**` must be released with
//!   [`jspec_string_free`].
//! - On any non-`Ok` status, [`jspec_last_error_message`] returns a
//!   human-readable description of the most recent error on this thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};

use jspec::bounds::{verify_bound, BoundKind, BoundReport};
use jspec::clifford::CliffordOperator;
use jspec::error::Error;
use jspec::generators::{
    extremal_shift_example, perturb_within_class, random_commuting_diagonalizable_tuple,
    random_commuting_normal_tuple, GeneratorConfig, PerturbationClass,
};
use jspec::io::{to_json_string, ReportFile, TupleFile};
use jspec::matrix::ComplexMatrix;
use jspec::spectrum::{diagonalize_general, simultaneous_diagonalize, JointSpectrum};
use jspec::tuple::{MatrixTuple, Tolerances};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Status codes returned by every FFI entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JspecStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidArgument = 4,
    DimensionMismatch = 5,
    SingularMatrix = 6,
    NotCommuting = 7,
    NotNormal = 8,
    NotDiagonalizable = 9,
    DiagonalizationFailed = 10,
    TriangularizationFailed = 11,
    ZeroEigenvalue = 12,
    CapacityExceeded = 13,
    KindMismatch = 14,
    NotDoublyStochastic = 15,
    MatchingNotFound = 16,
    Io = 17,
    Internal = 18,
}

/// Bound kinds accepted by [`jspec_verify_bound`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JspecBoundKind {
    Normal = 0,
    Remark = 1,
    Diagonalizable = 2,
}

/// Joint-spectrum methods accepted by [`jspec_joint_spectrum`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JspecMethod {
    Normal = 0,
    General = 1,
}

/// Generator families accepted by [`jspec_generate_pair`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JspecGeneratorKind {
    Normal = 0,
    Diagonalizable = 1,
}

/// Perturbation classes accepted by [`jspec_generate_pair`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JspecPerturbationClass {
    Normal = 0,
    ArbitraryCommuting = 1,
}

/// Opaque handle to an m-tuple of n×n complex matrices.
pub struct JspecTuple {
    inner: MatrixTuple,
}

/// Opaque handle to a computed joint spectrum.
pub struct JspecSpectrum {
    inner: JointSpectrum,
}

/// Opaque handle to a bound-verification report.
pub struct JspecReport {
    inner: BoundReport,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn record_error(message: String) {
    let sanitized = message.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).ok();
    });
}

fn status_for(error: &Error) -> JspecStatus {
    match error {
        Error::DimensionMismatch { .. }
        | Error::NonFiniteEntry { .. }
        | Error::GeneratorCountMismatch { .. }
        | Error::InvalidBlade { .. } => JspecStatus::DimensionMismatch,
        Error::SingularMatrix { .. } => JspecStatus::SingularMatrix,
        Error::NotCommuting { .. } => JspecStatus::NotCommuting,
        Error::NotNormal { .. } => JspecStatus::NotNormal,
        Error::NotDiagonalizable => JspecStatus::NotDiagonalizable,
        Error::DiagonalizationFailed => JspecStatus::DiagonalizationFailed,
        Error::TriangularizationFailed => JspecStatus::TriangularizationFailed,
        Error::ZeroEigenvalue { .. } => JspecStatus::ZeroEigenvalue,
        Error::CapacityExceeded { .. } => JspecStatus::CapacityExceeded,
        Error::KindMismatch => JspecStatus::KindMismatch,
        Error::NotDoublyStochastic { .. } => JspecStatus::NotDoublyStochastic,
        Error::MatchingNotFound => JspecStatus::MatchingNotFound,
        Error::NotOrdered | Error::InvalidArgument(_) => JspecStatus::InvalidArgument,
        Error::Factorization { .. } => JspecStatus::Internal,
        Error::SchemaVersion { .. } | Error::Json(_) | Error::FileFormat(_) => JspecStatus::Parse,
        Error::Io(_) => JspecStatus::Io,
    }
}

fn fail(error: Error) -> JspecStatus {
    let status = status_for(&error);
    record_error(error.to_string());
    status
}

fn fail_with(status: JspecStatus, message: &str) -> JspecStatus {
    record_error(message.to_string());
    status
}

/// Message for the most recent error on this thread, or null when no error
/// has been recorded. The caller owns the string and must release it with
/// [`jspec_string_free`].
#[no_mangle]
pub extern "C" fn jspec_last_error_message() -> *mut c_char {
    LAST_ERROR.with(|slot| match &*slot.borrow() {
        Some(message) => message.clone().into_raw(),
        None => std::ptr::null_mut(),
    })
}

/// Releases a string returned by this library.
///
/// # Safety
/// `string` must be null or a pointer previously returned by a jspec
/// function, and must not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn jspec_string_free(string: *mut c_char) {
    if !string.is_null() {
        drop(CString::from_raw(string));
    }
}

/// Parses a `jspec-1` tuple JSON document.
///
/// # Safety
/// `json` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn jspec_tuple_from_json(
    json: *const c_char,
    out: *mut *mut JspecTuple,
) -> JspecStatus {
    if json.is_null() || out.is_null() {
        return fail_with(JspecStatus::NullPointer, "null pointer argument");
    }
    let text = match CStr::from_ptr(json).to_str() {
        Ok(text) => text,
        Err(_) => return fail_with(JspecStatus::InvalidUtf8, "input is not valid UTF-8"),
    };
    let file: TupleFile = match serde_json::from_str(text) {
        Ok(file) => file,
        Err(e) => return fail(Error::Json(e)),
    };
    match file.into_tuple() {
        Ok(tuple) => {
            *out = Box::into_raw(Box::new(JspecTuple { inner: tuple }));
            JspecStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Builds a tuple from `m` row-major n×n matrices of interleaved
/// `[re, im]` entry pairs (`2 * m * n * n` doubles total).
///
/// # Safety
/// `entries` must point to `2 * m * n * n` doubles; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn jspec_tuple_from_parts(
    n: usize,
    m: usize,
    entries: *const f64,
    out: *mut *mut JspecTuple,
) -> JspecStatus {
    if entries.is_null() || out.is_null() {
        return fail_with(JspecStatus::NullPointer, "null pointer argument");
    }
    if n == 0 || m == 0 {
        return fail_with(JspecStatus::InvalidArgument, "n and m must be positive");
    }
    let raw = std::slice::from_raw_parts(entries, 2 * m * n * n);
    let mut members = Vec::with_capacity(m);
    for k in 0..m {
        let base = 2 * k * n * n;
        let data: Vec<Complex64> = (0..n * n)
            .map(|idx| Complex64::new(raw[base + 2 * idx], raw[base + 2 * idx + 1]))
            .collect();
        match ComplexMatrix::new(n, n, data) {
            Ok(matrix) => members.push(matrix),
            Err(e) => return fail(e),
        }
    }
    match MatrixTuple::new(members) {
        Ok(tuple) => {
            *out = Box::into_raw(Box::new(JspecTuple { inner: tuple }));
            JspecStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Serializes a tuple to `jspec-1` JSON (17-significant-digit floats).
///
/// # Safety
/// `tuple` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn jspec_tuple_to_json(
    tuple: *const JspecTuple,
    out: *mut *mut c_char,
) -> JspecStatus {
    if tuple.is_null() || out.is_null() {
        return fail_with(JspecStatus::NullPointer, "null pointer argument");
    }
    let file = TupleFile::from_tuple(&(*tuple).inner, None);
    match to_json_string(&file) {
        Ok(json) => match CString::new(json) {
            Ok(cstring) => {
                *out = cstring.into_raw();
                JspecStatus::Ok
            }
            Err(_) => fail_with(JspecStatus::Internal, "serialized JSON contained NUL"),
        },
        Err(e) => fail(e),
    }
}

/// Matrix dimension of the tuple.
///
/// # Safety
/// `tuple` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn jspec_tuple_n(tuple: *const JspecTuple, out: *mut usize) -> JspecStatus {
    if tuple.is_null() || out.is_null() {
        return fail_with(JspecStatus::NullPointer, "null pointer argument");
    }
    *out = (*tuple).inner.n();
    JspecStatus::Ok
}

/// Number of matrices in the tuple.
///
/// # Safety
/// `tuple` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn jspec_tuple_m(tuple: *const JspecTuple, out: *mut usize) -> JspecStatus {
    if tuple.is_null() || out.is_null() {
        return fail_with(JspecStatus::NullPointer, "null pointer argument");
    }
    *out = (*tuple).inner.m();
    JspecStatus::Ok
}

/// Reads entry (i, j) of member k.
///
/// # Safety
/// `tuple` must be a live handle; `out_re`/`out_im` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn jspec_tuple_entry(
    tuple: *const JspecTuple,
    k: usize,
    i: usize,
    j: usize,
    out_re: *mut f64,
    out_im: *mut f64,
) -> JspecStatus {
    if tuple.is_null() || out_re.is_null() || out_im.is_null() {
        return fail_with(JspecStatus::NullPointer, "null pointer argument");
    }
    let inner = &(*tuple).inner;
    if k >= inner.m() || i >= inner.n() || j >= inner.n() {
        return fail_with(JspecStatus::InvalidArgument, "index out of range");
    }
    let z = inner.member(k).get(i, j);
    *out_re = z.re;
    *out_im = z.im;
    JspecStatus::Ok
}

/// Releases a tuple handle.
///
/// # Safety
/// `tuple` must be null or a live handle, and must not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn jspec_tuple_free(tuple: *mut JspecTuple) {
    if !tuple.is_null() {
        drop(Box::from_raw(tuple));
    }
}

/// Generates a seeded (tuple, perturbed tuple) pair.
///
/// # Safety
/// `out_a` and `out_b` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn jspec_generate_pair(
    n: usize,
    m: usize,
    seed: u64,
    kind: JspecGeneratorKind,
    class: JspecPerturbationClass,
    perturbation_scale: f64,
    out_a: *mut *mut JspecTuple,
    out_b: *mut *mut JspecTuple,
) -> JspecStatus {
    if out_a.is_null() || out_b.is_null() {
        return fail_with(JspecStatus::NullPointer, "null pointer argument");
    }
    let mut cfg = GeneratorConfig::new(n, m, seed);
    cfg.perturbation_scale = perturbation_scale;
    let generated = match kind {
        JspecGeneratorKind::Normal => random_commuting_normal_tuple(&cfg),
        JspecGeneratorKind::Diagonalizable => random_commuting_diagonalizable_tuple(&cfg),
    };
    let generated = match generated {
        Ok(g) => g,
        Err(e) => return fail(e),
    };
    let class = match class {
        JspecPerturbationClass::Normal => PerturbationClass::Normal,
        JspecPerturbationClass::ArbitraryCommuting => PerturbationClass::ArbitraryCommuting,
    };
    match perturb_within_class(&generated, &cfg, class) {
        Ok(perturbed) => {
            *out_a = Box::into_raw(Box::new(JspecTuple {
                inner: generated.tuple,
            }));
            *out_b = Box::into_raw(Box::new(JspecTuple {
                inner: perturbed.tuple,
            }));
            JspecStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Builds the extremal shift pair with the dimension-factor equality.
///
/// # Safety
/// `out_a` and `out_b` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn jspec_extremal_pair(
    n: usize,
    m: usize,
    out_a: *mut *mut JspecTuple,
    out_b: *mut *mut JspecTuple,
) -> JspecStatus {
    if out_a.is_null() || out_b.is_null() {
        return fail_with(JspecStatus::NullPointer, "null pointer argument");
    }
    match extremal_shift_example(n, m) {
        Ok((a, b)) => {
            *out_a = Box::into_raw(Box::new(JspecTuple { inner: a }));
            *out_b = Box::into_raw(Box::new(JspecTuple { inner: b }));
            JspecStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Computes a joint spectrum with the requested method and seed.
///
/// # Safety
/// `tuple` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn jspec_joint_spectrum(
    tuple: *const JspecTuple,
    method: JspecMethod,
    seed: u64,
    out: *mut *mut JspecSpectrum,
) -> JspecStatus {
    if tuple.is_null() || out.is_null() {
        return fail_with(JspecStatus::NullPointer, "null pointer argument");
    }
    let tol = Tolerances::default();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let spectrum = match method {
        JspecMethod::Normal => simultaneous_diagonalize(&(*tuple).inner, &mut rng, &tol),
        JspecMethod::General => diagonalize_general(&(*tuple).inner, &mut rng, &tol),
    };
    match spectrum {
        Ok(spectrum) => {
            *out = Box::into_raw(Box::new(JspecSpectrum { inner: spectrum }));
            JspecStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Spectrum dimensions.
///
/// # Safety
/// `spectrum` must be a live handle; out pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn jspec_spectrum_size(
    spectrum: *const JspecSpectrum,
    out_n: *mut usize,
    out_m: *mut usize,
) -> JspecStatus {
    if spectrum.is_null() || out_n.is_null() || out_m.is_null() {
        return fail_with(JspecStatus::NullPointer, "null pointer argument");
    }
    *out_n = (*spectrum).inner.n();
    *out_m = (*spectrum).inner.m();
    JspecStatus::Ok
}

/// Coordinate `coord` of joint eigenvalue `row`, rows in canonical order.
///
/// # Safety
/// `spectrum` must be a live handle; out pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn jspec_spectrum_eigenvalue(
    spectrum: *const JspecSpectrum,
    row: usize,
    coord: usize,
    out_re: *mut f64,
    out_im: *mut f64,
) -> JspecStatus {
    if spectrum.is_null() || out_re.is_null() || out_im.is_null() {
        return fail_with(JspecStatus::NullPointer, "null pointer argument");
    }
    let inner = &(*spectrum).inner;
    if row >= inner.n() || coord >= inner.m() {
        return fail_with(JspecStatus::InvalidArgument, "index out of range");
    }
    let z = inner.eigenvalue_rows()[row][coord];
    *out_re = z.re;
    *out_im = z.im;
    JspecStatus::Ok
}

/// Diagonalization residual of the spectrum.
///
/// # Safety
/// `spectrum` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn jspec_spectrum_residual(
    spectrum: *const JspecSpectrum,
    out: *mut f64,
) -> JspecStatus {
    if spectrum.is_null() || out.is_null() {
        return fail_with(JspecStatus::NullPointer, "null pointer argument");
    }
    *out = (*spectrum).inner.residual();
    JspecStatus::Ok
}

/// Releases a spectrum handle.
///
/// # Safety
/// `spectrum` must be null or a live handle, and must not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn jspec_spectrum_free(spectrum: *mut JspecSpectrum) {
    if !spectrum.is_null() {
        drop(Box::from_raw(spectrum));
    }
}

/// Runs the full bound-verification pipeline on a tuple pair.
///
/// # Safety
/// `a` and `b` must be live handles and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn jspec_verify_bound(
    a: *const JspecTuple,
    b: *const JspecTuple,
    kind: JspecBoundKind,
    seed: u64,
    out: *mut *mut JspecReport,
) -> JspecStatus {
    if a.is_null() || b.is_null() || out.is_null() {
        return fail_with(JspecStatus::NullPointer, "null pointer argument");
    }
    let kind = match kind {
        JspecBoundKind::Normal => BoundKind::Normal,
        JspecBoundKind::Remark => BoundKind::Remark,
        JspecBoundKind::Diagonalizable => BoundKind::Diagonalizable,
    };
    match verify_bound(&(*a).inner, &(*b).inner, kind, seed, &Tolerances::default()) {
        Ok(report) => {
            *out = Box::into_raw(Box::new(JspecReport { inner: report }));
            JspecStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// lhs, rhs and slack of a verification report.
///
/// # Safety
/// `report` must be a live handle; out pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn jspec_report_values(
    report: *const JspecReport,
    out_lhs: *mut f64,
    out_rhs: *mut f64,
    out_slack: *mut f64,
) -> JspecStatus {
    if report.is_null() || out_lhs.is_null() || out_rhs.is_null() || out_slack.is_null() {
        return fail_with(JspecStatus::NullPointer, "null pointer argument");
    }
    let inner = &(*report).inner;
    *out_lhs = inner.lhs;
    *out_rhs = inner.rhs;
    *out_slack = inner.slack;
    JspecStatus::Ok
}

/// Whether the bound held (lhs ≤ rhs up to the verification tolerance).
///
/// # Safety
/// `report` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn jspec_report_holds(
    report: *const JspecReport,
    out: *mut bool,
) -> JspecStatus {
    if report.is_null() || out.is_null() {
        return fail_with(JspecStatus::NullPointer, "null pointer argument");
    }
    *out = (*report).inner.holds;
    JspecStatus::Ok
}

/// Copies the 1-indexed minimizing permutation into `buffer`.
///
/// # Safety
/// `report` must be a live handle; `buffer` must hold at least `length`
/// elements, with `length` at least the tuple dimension n.
#[no_mangle]
pub unsafe extern "C" fn jspec_report_permutation(
    report: *const JspecReport,
    buffer: *mut usize,
    length: usize,
) -> JspecStatus {
    if report.is_null() || buffer.is_null() {
        return fail_with(JspecStatus::NullPointer, "null pointer argument");
    }
    let permutation = &(*report).inner.permutation;
    if length < permutation.len() {
        return fail_with(JspecStatus::InvalidArgument, "buffer too small");
    }
    let slice = std::slice::from_raw_parts_mut(buffer, permutation.len());
    for (dst, &src) in slice.iter_mut().zip(permutation) {
        *dst = src + 1;
    }
    JspecStatus::Ok
}

/// Serializes a report to JSON (same schema as the CLI report file).
///
/// # Safety
/// `report` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn jspec_report_to_json(
    report: *const JspecReport,
    out: *mut *mut c_char,
) -> JspecStatus {
    if report.is_null() || out.is_null() {
        return fail_with(JspecStatus::NullPointer, "null pointer argument");
    }
    let file = ReportFile::from_report(&(*report).inner);
    match to_json_string(&file) {
        Ok(json) => match CString::new(json) {
            Ok(cstring) => {
                *out = cstring.into_raw();
                JspecStatus::Ok
            }
            Err(_) => fail_with(JspecStatus::Internal, "serialized JSON contained NUL"),
        },
        Err(e) => fail(e),
    }
}

/// Releases a report handle.
///
/// # Safety
/// `report` must be null or a live handle, and must not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn jspec_report_free(report: *mut JspecReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// Frobenius norm of the tuple's Clifford operator through both routes: the
/// structured identity (always written to `out_structured`) and the
/// materialized-matrix oracle (written to `out_materialized` when the
/// dimension 2^m·n fits within `materialize_limit`; otherwise the call
/// returns `CapacityExceeded` and only the structured value is written).
///
/// # Safety
/// `tuple` must be a live handle; out pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn jspec_clifford_frobenius(
    tuple: *const JspecTuple,
    materialize_limit: usize,
    out_structured: *mut f64,
    out_materialized: *mut f64,
) -> JspecStatus {
    if tuple.is_null() || out_structured.is_null() || out_materialized.is_null() {
        return fail_with(JspecStatus::NullPointer, "null pointer argument");
    }
    let op = CliffordOperator::from_tuple(&(*tuple).inner);
    *out_structured = op.frobenius_norm_structured();
    match op.frobenius_norm_materialized(materialize_limit) {
        Ok(value) => {
            *out_materialized = value;
            JspecStatus::Ok
        }
        Err(e) => fail(e),
    }
}
