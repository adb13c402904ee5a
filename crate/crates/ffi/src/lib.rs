//! C ABI for the Hankel symbol library.
//!
//! Conventions:
//! * All functions return an [`HslStatus`] code; `HSL_STATUS_OK` (0) means
//!   success. On failure a thread-local message is retrievable with
//!   [`hsl_last_error_message`].
//! * Measures and symbols are opaque handles created by `*_new`/`*_builtin`
//!   constructors and released with the matching `*_free`. Passing a handle
//!   to any function after freeing it is undefined behavior.
//! * Matrices cross the boundary as row-major `f64` buffers; complex
//!   matrices as separate real and imaginary buffers of `dim * dim` entries
//!   each, allocated by the caller.
//! * All functions are panic-safe: panics are caught and surfaced as
//!   `HSL_STATUS_INTERNAL`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};

use hankel_symbol_lab::classify::{classify, Verdict};
use hankel_symbol_lab::hankel::{
    default_kernel_points, default_sample_pairs, gram_matrix, verify_symbol, GramSource,
};
use hankel_symbol_lab::measure::{builtin_measure, CarlesonMeasure};
use hankel_symbol_lab::numerics::{ComplexMatrix, QuadratureSpec};
use hankel_symbol_lab::symbol::{beta_symbol, builtin_symbol, ProjectionSpec, Symbol};

/// Status codes returned by every FFI function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HslStatus {
    /// Success.
    HslStatusOk = 0,
    /// A required pointer argument was null.
    HslStatusNullPointer = 1,
    /// An argument failed validation (bad name, bad dimension, bad value).
    HslStatusInvalidArgument = 2,
    /// A numerical routine failed (non-convergence, singular system).
    HslStatusNumerical = 3,
    /// Internal panic; a bug, please report.
    HslStatusInternal = 4,
}

/// Classification verdicts, mirroring the library's hierarchy.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HslVerdict {
    HslVerdictInvalidSymbol = 0,
    HslVerdictRpOnly = 1,
    HslVerdictStandard = 2,
    HslVerdictBorchers = 3,
}

/// Opaque handle to an operator-valued measure on the positive half-line.
pub struct HslMeasure(CarlesonMeasure);

/// Opaque handle to a matrix-valued Hankel symbol.
pub struct HslSymbol(Symbol);

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(message: impl Into<String>) {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = message.into());
}

fn fail(status: HslStatus, message: impl Into<String>) -> HslStatus {
    set_error(message);
    status
}

fn from_lib_error(err: hankel_symbol_lab::Error) -> HslStatus {
    use hankel_symbol_lab::Error as E;
    let status = match err {
        E::NonConvergence { .. } | E::SingularGram { .. } => HslStatus::HslStatusNumerical,
        _ => HslStatus::HslStatusInvalidArgument,
    };
    fail(status, err.to_string())
}

fn guarded(body: impl FnOnce() -> HslStatus) -> HslStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(_) => fail(HslStatus::HslStatusInternal, "internal panic"),
    }
}

/// Copies the last error message for this thread into `buf` (NUL-terminated,
/// truncated to `len` bytes). Returns the full message length in bytes,
/// excluding the terminator. Safe to call with `buf = NULL, len = 0` to
/// query the length.
///
/// # Safety
/// `buf` must be valid for writes of `len` bytes, or null with `len == 0`.
#[no_mangle]
pub unsafe extern "C" fn hsl_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|slot| {
        let message = slot.borrow();
        let bytes = message.as_bytes();
        if !buf.is_null() && len > 0 {
            let n = bytes.len().min(len - 1);
            std::ptr::copy_nonoverlapping(bytes.as_ptr(), buf.cast(), n);
            *buf.add(n) = 0;
        }
        bytes.len()
    })
}

unsafe fn read_name(name: *const c_char) -> Result<String, HslStatus> {
    if name.is_null() {
        return Err(fail(HslStatus::HslStatusNullPointer, "name is null"));
    }
    CStr::from_ptr(name)
        .to_str()
        .map(str::to_owned)
        .map_err(|_| fail(HslStatus::HslStatusInvalidArgument, "name is not UTF-8"))
}

unsafe fn read_params(params: *const f64, n_params: usize) -> Result<Vec<f64>, HslStatus> {
    if n_params == 0 {
        return Ok(Vec::new());
    }
    if params.is_null() {
        return Err(fail(
            HslStatus::HslStatusNullPointer,
            "params is null but n_params > 0",
        ));
    }
    Ok(std::slice::from_raw_parts(params, n_params).to_vec())
}

unsafe fn read_real_matrix(data: *const f64, dim: usize) -> Result<ComplexMatrix, HslStatus> {
    if data.is_null() {
        return Err(fail(HslStatus::HslStatusNullPointer, "matrix buffer is null"));
    }
    let rows: Vec<Vec<f64>> = std::slice::from_raw_parts(data, dim * dim)
        .chunks(dim)
        .map(|r| r.to_vec())
        .collect();
    Ok(ComplexMatrix::from_real_rows(&rows))
}

/// Creates a built-in measure (`"lebesgue2"`, `"example_t"`, `"atoms"`, ...).
///
/// # Safety
/// `out` must be a valid pointer; `params` must point to `n_params` doubles.
#[no_mangle]
pub unsafe extern "C" fn hsl_measure_builtin(
    name: *const c_char,
    params: *const f64,
    n_params: usize,
    dim: usize,
    out: *mut *mut HslMeasure,
) -> HslStatus {
    guarded(|| {
        if out.is_null() {
            return fail(HslStatus::HslStatusNullPointer, "out is null");
        }
        let name = match read_name(name) {
            Ok(n) => n,
            Err(status) => return status,
        };
        let params = match read_params(params, n_params) {
            Ok(p) => p,
            Err(status) => return status,
        };
        match builtin_measure(&name, &params, dim) {
            Ok(mu) => {
                *out = Box::into_raw(Box::new(HslMeasure(mu)));
                HslStatus::HslStatusOk
            }
            Err(e) => from_lib_error(e),
        }
    })
}

/// Releases a measure handle. Null is a no-op.
///
/// # Safety
/// `measure` must come from `hsl_measure_builtin` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn hsl_measure_free(measure: *mut HslMeasure) {
    if !measure.is_null() {
        drop(Box::from_raw(measure));
    }
}

/// Dimension of the coefficient space of the measure.
///
/// # Safety
/// `measure` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn hsl_measure_dim(
    measure: *const HslMeasure,
    out: *mut usize,
) -> HslStatus {
    guarded(|| {
        if measure.is_null() || out.is_null() {
            return fail(HslStatus::HslStatusNullPointer, "measure/out is null");
        }
        *out = (*measure).0.dim();
        HslStatus::HslStatusOk
    })
}

/// Creates a built-in symbol (`"i_sgn"`, `"example_beta_closed"`, ...).
///
/// # Safety
/// `out` must be a valid pointer; `params` must point to `n_params` doubles.
#[no_mangle]
pub unsafe extern "C" fn hsl_symbol_builtin(
    name: *const c_char,
    params: *const f64,
    n_params: usize,
    dim: usize,
    out: *mut *mut HslSymbol,
) -> HslStatus {
    guarded(|| {
        if out.is_null() {
            return fail(HslStatus::HslStatusNullPointer, "out is null");
        }
        let name = match read_name(name) {
            Ok(n) => n,
            Err(status) => return status,
        };
        let params = match read_params(params, n_params) {
            Ok(p) => p,
            Err(status) => return status,
        };
        match builtin_symbol(&name, &params, dim) {
            Ok(symbol) => {
                *out = Box::into_raw(Box::new(HslSymbol(symbol)));
                HslStatus::HslStatusOk
            }
            Err(e) => from_lib_error(e),
        }
    })
}

/// Builds the quadrature-defined symbol β(μ, p, C) for a measure and a real
/// projection / coupling pair, both row-major `dim × dim`.
///
/// # Safety
/// All pointers must be valid; the matrix buffers must hold `dim²` doubles
/// where `dim` is the measure dimension.
#[no_mangle]
pub unsafe extern "C" fn hsl_symbol_beta(
    measure: *const HslMeasure,
    projection: *const f64,
    coupling: *const f64,
    out: *mut *mut HslSymbol,
) -> HslStatus {
    guarded(|| {
        if measure.is_null() || out.is_null() {
            return fail(HslStatus::HslStatusNullPointer, "measure/out is null");
        }
        let mu = &(*measure).0;
        let d = mu.dim();
        let p = match read_real_matrix(projection, d) {
            Ok(m) => m,
            Err(status) => return status,
        };
        let c = match read_real_matrix(coupling, d) {
            Ok(m) => m,
            Err(status) => return status,
        };
        let ps = match ProjectionSpec::new(p, c) {
            Ok(ps) => ps,
            Err(e) => return from_lib_error(e),
        };
        match beta_symbol(mu, &ps, &QuadratureSpec::default()) {
            Ok(symbol) => {
                *out = Box::into_raw(Box::new(HslSymbol(symbol)));
                HslStatus::HslStatusOk
            }
            Err(e) => from_lib_error(e),
        }
    })
}

/// Releases a symbol handle. Null is a no-op.
///
/// # Safety
/// `symbol` must come from an `hsl_symbol_*` constructor, freed once.
#[no_mangle]
pub unsafe extern "C" fn hsl_symbol_free(symbol: *mut HslSymbol) {
    if !symbol.is_null() {
        drop(Box::from_raw(symbol));
    }
}

/// Dimension of the symbol's matrix values.
///
/// # Safety
/// `symbol` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn hsl_symbol_dim(symbol: *const HslSymbol, out: *mut usize) -> HslStatus {
    guarded(|| {
        if symbol.is_null() || out.is_null() {
            return fail(HslStatus::HslStatusNullPointer, "symbol/out is null");
        }
        *out = (*symbol).0.dim();
        HslStatus::HslStatusOk
    })
}

/// Evaluates the symbol at a nonzero real `x`, writing the `dim × dim`
/// value row-major into `out_re` / `out_im`.
///
/// # Safety
/// `out_re` and `out_im` must each be valid for `dim²` doubles.
#[no_mangle]
pub unsafe extern "C" fn hsl_symbol_eval(
    symbol: *const HslSymbol,
    x: f64,
    out_re: *mut f64,
    out_im: *mut f64,
) -> HslStatus {
    guarded(|| {
        if symbol.is_null() || out_re.is_null() || out_im.is_null() {
            return fail(HslStatus::HslStatusNullPointer, "symbol/out is null");
        }
        let h = &(*symbol).0;
        match h.eval(x) {
            Ok(m) => {
                let d = h.dim();
                for j in 0..d {
                    for k in 0..d {
                        let c = m.get(j, k);
                        *out_re.add(j * d + k) = c.re;
                        *out_im.add(j * d + k) = c.im;
                    }
                }
                HslStatus::HslStatusOk
            }
            Err(e) => from_lib_error(e),
        }
    })
}

/// Compares the symbol-side and measure-side Hankel forms on `pairs`
/// default kernel sample pairs; writes the worst absolute defect.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn hsl_verify_symbol(
    measure: *const HslMeasure,
    symbol: *const HslSymbol,
    pairs: usize,
    out_defect: *mut f64,
) -> HslStatus {
    guarded(|| {
        if measure.is_null() || symbol.is_null() || out_defect.is_null() {
            return fail(HslStatus::HslStatusNullPointer, "null argument");
        }
        let mu = &(*measure).0;
        let samples = default_sample_pairs(mu.dim(), pairs.max(1));
        match verify_symbol(mu, &(*symbol).0, &samples, &QuadratureSpec::default()) {
            Ok(worst) => {
                *out_defect = worst;
                HslStatus::HslStatusOk
            }
            Err(e) => from_lib_error(e),
        }
    })
}

/// Smallest eigenvalue of the Hankel-form Gram matrix of the measure on
/// `points` default kernel vectors.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn hsl_gram_min_eig(
    measure: *const HslMeasure,
    points: usize,
    out_min_eig: *mut f64,
) -> HslStatus {
    guarded(|| {
        if measure.is_null() || out_min_eig.is_null() {
            return fail(HslStatus::HslStatusNullPointer, "null argument");
        }
        let mu = &(*measure).0;
        let kps = default_kernel_points(mu.dim(), points.max(1));
        match gram_matrix(&GramSource::Measure(mu), &kps, &QuadratureSpec::default()) {
            Ok(g) => {
                *out_min_eig = g.min_eig;
                HslStatus::HslStatusOk
            }
            Err(e) => from_lib_error(e),
        }
    })
}

/// Classifies the reflection-positive quadruple induced by `(symbol, p)`.
/// `projection` is a row-major real `dim × dim` projection; `measure` may
/// be null (positivity evidence then comes from the symbol-side Gram,
/// which is slower). `x_grid` must hold `n_grid` nonzero reals.
///
/// # Safety
/// Non-null pointers must be valid for the documented lengths.
#[no_mangle]
pub unsafe extern "C" fn hsl_classify(
    symbol: *const HslSymbol,
    projection: *const f64,
    measure: *const HslMeasure,
    x_grid: *const f64,
    n_grid: usize,
    out_verdict: *mut HslVerdict,
) -> HslStatus {
    guarded(|| {
        if symbol.is_null() || out_verdict.is_null() {
            return fail(HslStatus::HslStatusNullPointer, "symbol/out is null");
        }
        let h = &(*symbol).0;
        let p = match read_real_matrix(projection, h.dim()) {
            Ok(m) => m,
            Err(status) => return status,
        };
        let grid: Vec<f64> = if x_grid.is_null() || n_grid == 0 {
            [-10.0, -1.0, -0.1, 0.1, 1.0, 10.0].to_vec()
        } else {
            std::slice::from_raw_parts(x_grid, n_grid).to_vec()
        };
        let mu = measure.as_ref().map(|m| &m.0);
        match classify(h, &p, mu, &grid, 1e-8, &QuadratureSpec::default()) {
            Ok(result) => {
                *out_verdict = match result.verdict {
                    Verdict::InvalidSymbol => HslVerdict::HslVerdictInvalidSymbol,
                    Verdict::RpOnly => HslVerdict::HslVerdictRpOnly,
                    Verdict::Standard => HslVerdict::HslVerdictStandard,
                    Verdict::Borchers => HslVerdict::HslVerdictBorchers,
                };
                HslStatus::HslStatusOk
            }
            Err(e) => from_lib_error(e),
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ffi::CString;

    #[test]
    fn builtin_roundtrip_and_eval() {
        unsafe {
            let name = CString::new("i_sgn").unwrap();
            let mut symbol: *mut HslSymbol = std::ptr::null_mut();
            assert_eq!(
                hsl_symbol_builtin(name.as_ptr(), std::ptr::null(), 0, 1, &mut symbol),
                HslStatus::HslStatusOk
            );
            let mut dim = 0usize;
            assert_eq!(hsl_symbol_dim(symbol, &mut dim), HslStatus::HslStatusOk);
            assert_eq!(dim, 1);
            let (mut re, mut im) = (0.0f64, 0.0f64);
            assert_eq!(
                hsl_symbol_eval(symbol, 2.0, &mut re, &mut im),
                HslStatus::HslStatusOk
            );
            assert_eq!((re, im), (0.0, 1.0));
            // x = 0 is outside the domain.
            assert_eq!(
                hsl_symbol_eval(symbol, 0.0, &mut re, &mut im),
                HslStatus::HslStatusInvalidArgument
            );
            let mut buf = [0i8; 128];
            let len = hsl_last_error_message(buf.as_mut_ptr(), buf.len());
            assert!(len > 0);
            hsl_symbol_free(symbol);
        }
    }

    #[test]
    fn verify_and_classify_via_ffi() {
        unsafe {
            let mname = CString::new("lebesgue2").unwrap();
            let mut measure: *mut HslMeasure = std::ptr::null_mut();
            assert_eq!(
                hsl_measure_builtin(mname.as_ptr(), std::ptr::null(), 0, 1, &mut measure),
                HslStatus::HslStatusOk
            );
            let sname = CString::new("i_sgn").unwrap();
            let mut symbol: *mut HslSymbol = std::ptr::null_mut();
            assert_eq!(
                hsl_symbol_builtin(sname.as_ptr(), std::ptr::null(), 0, 1, &mut symbol),
                HslStatus::HslStatusOk
            );

            let mut defect = f64::NAN;
            assert_eq!(
                hsl_verify_symbol(measure, symbol, 4, &mut defect),
                HslStatus::HslStatusOk
            );
            assert!(defect < 1e-6, "defect = {defect}");

            let p = [1.0f64];
            let mut verdict = HslVerdict::HslVerdictInvalidSymbol;
            assert_eq!(
                hsl_classify(
                    symbol,
                    p.as_ptr(),
                    measure,
                    std::ptr::null(),
                    0,
                    &mut verdict
                ),
                HslStatus::HslStatusOk
            );
            assert_eq!(verdict, HslVerdict::HslVerdictBorchers);

            let mut min_eig = f64::NAN;
            assert_eq!(
                hsl_gram_min_eig(measure, 4, &mut min_eig),
                HslStatus::HslStatusOk
            );
            assert!(min_eig > -1e-9);

            hsl_symbol_free(symbol);
            hsl_measure_free(measure);
        }
    }

    #[test]
    fn null_arguments_are_rejected() {
        unsafe {
            let mut out: *mut HslMeasure = std::ptr::null_mut();
            assert_eq!(
                hsl_measure_builtin(std::ptr::null(), std::ptr::null(), 0, 1, &mut out),
                HslStatus::HslStatusNullPointer
            );
            let bad = CString::new("no_such_density").unwrap();
            assert_eq!(
                hsl_measure_builtin(bad.as_ptr(), std::ptr::null(), 0, 1, &mut out),
                HslStatus::HslStatusInvalidArgument
            );
        }
    }
}
