//! C ABI over the `idemnorm` library.
//!
//! Groups live behind an opaque [`IdemGroup`] handle created from a JSON group
//! description and released with [`idem_group_free`]. Every fallible call returns an
//! [`IdemStatus`] and writes its result through an out-pointer. Strings handed
//! out by the library are freed with [`idem_string_free`]. After a failure,
//! [`idem_last_error_message`] describes it on the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;

use idemnorm::fourier::{a_norm, a_norm_abelian_oracle, GroupFunction, NormError, DEFAULT_SVD_TOL};
use idemnorm::group::{is_coset, normalize_subset, FiniteGroup, GroupError};
use idemnorm::groupspec::GroupSpec;
use idemnorm::report::to_json_string;
use idemnorm::search::{brute_force_max, gap_audit, SearchError};
use idemnorm::zline::{dirichlet_norm, QuadratureConfig, ZlineError};
use num_complex::Complex64;

/// Result codes shared by every function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IdemStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidJson = 3,
    InvalidGroup = 4,
    InvalidInput = 5,
    Numerical = 6,
    Panic = 7,
}

/// Opaque handle to a validated finite group.
pub struct IdemGroup {
    inner: Arc<FiniteGroup>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Fail(IdemStatus, String);

impl From<GroupError> for Fail {
    fn from(e: GroupError) -> Self {
        Fail(IdemStatus::InvalidGroup, e.to_string())
    }
}

impl From<NormError> for Fail {
    fn from(e: NormError) -> Self {
        let status = if e.is_numerical() { IdemStatus::Numerical } else { IdemStatus::InvalidInput };
        Fail(status, e.to_string())
    }
}

impl From<SearchError> for Fail {
    fn from(e: SearchError) -> Self {
        match e {
            SearchError::Norm(n) => n.into(),
            other => Fail(IdemStatus::InvalidInput, other.to_string()),
        }
    }
}

impl From<ZlineError> for Fail {
    fn from(e: ZlineError) -> Self {
        let status = match e {
            ZlineError::NoConvergence { .. } => IdemStatus::Numerical,
            _ => IdemStatus::InvalidInput,
        };
        Fail(status, e.to_string())
    }
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

/// Runs `f`, turning errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> IdemStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => IdemStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_last_error(&msg);
            status
        }
        Err(_) => {
            set_last_error("internal panic");
            IdemStatus::Panic
        }
    }
}

fn null() -> Fail {
    Fail(IdemStatus::NullPointer, "null pointer argument".into())
}

unsafe fn group_ref<'a>(g: *const IdemGroup) -> Result<&'a IdemGroup, Fail> {
    g.as_ref().ok_or_else(null)
}

unsafe fn slice<'a, T>(ptr: *const T, len: usize) -> Result<&'a [T], Fail> {
    if len == 0 {
        return Ok(&[]);
    }
    if ptr.is_null() {
        return Err(null());
    }
    Ok(std::slice::from_raw_parts(ptr, len))
}

unsafe fn write<T>(out: *mut T, value: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null());
    }
    out.write(value);
    Ok(())
}

fn owned_string(s: String) -> *mut c_char {
    CString::new(s).expect("JSON has no nul bytes").into_raw()
}

/// Message for the most recent failure on this thread, or null. Owned by the library.
#[no_mangle]
pub extern "C" fn idem_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(std::ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static nul-terminated string.
#[no_mangle]
pub extern "C" fn idem_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Builds a group from JSON such as `{"type":"cyclic","n":12}`.
///
/// # Safety
/// `json` must be a nul-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn idem_group_from_json(json: *const c_char, out: *mut *mut IdemGroup) -> IdemStatus {
    guard(|| {
        if json.is_null() || out.is_null() {
            return Err(null());
        }
        let text = CStr::from_ptr(json).to_str().map_err(|e| Fail(IdemStatus::InvalidUtf8, e.to_string()))?;
        let spec = GroupSpec::from_json(text).map_err(|e| Fail(IdemStatus::InvalidJson, e.to_string()))?;
        let g = spec.build()?;
        write(out, Box::into_raw(Box::new(IdemGroup { inner: Arc::new(g) })))
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `g` must come from [`idem_group_from_json`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn idem_group_free(g: *mut IdemGroup) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// # Safety
/// `g` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn idem_group_order(g: *const IdemGroup, out: *mut usize) -> IdemStatus {
    guard(|| write(out, group_ref(g)?.inner.order()))
}

/// Norm of the indicator of `elems[0..len]`.
///
/// # Safety
/// `elems` must point to `len` readable values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn idem_subset_norm(
    g: *const IdemGroup,
    elems: *const usize,
    len: usize,
    out: *mut f64,
) -> IdemStatus {
    guard(|| {
        let g = &group_ref(g)?.inner;
        let set = normalize_subset(g, slice(elems, len)?)?;
        let u = GroupFunction::indicator(g, &set)?;
        write(out, a_norm(&u, DEFAULT_SVD_TOL)?.value)
    })
}

unsafe fn function(g: &Arc<FiniteGroup>, re: *const f64, im: *const f64, len: usize) -> Result<GroupFunction, Fail> {
    let re = slice(re, len)?;
    let values: Vec<Complex64> = if im.is_null() {
        re.iter().map(|&x| Complex64::new(x, 0.0)).collect()
    } else {
        re.iter().zip(slice(im, len)?).map(|(&a, &b)| Complex64::new(a, b)).collect()
    };
    Ok(GroupFunction::new(g, values)?)
}

/// Norm of the function with real parts `re` and imaginary parts `im` (may be null).
///
/// # Safety
/// `re` (and `im` when non-null) must point to `len` values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn idem_function_norm(
    g: *const IdemGroup,
    re: *const f64,
    im: *const f64,
    len: usize,
    out: *mut f64,
) -> IdemStatus {
    guard(|| {
        let u = function(&group_ref(g)?.inner, re, im, len)?;
        write(out, a_norm(&u, DEFAULT_SVD_TOL)?.value)
    })
}

/// Same as [`idem_function_norm`] through characters; abelian groups only.
///
/// # Safety
/// As for [`idem_function_norm`].
#[no_mangle]
pub unsafe extern "C" fn idem_oracle_norm(
    g: *const IdemGroup,
    re: *const f64,
    im: *const f64,
    len: usize,
    out: *mut f64,
) -> IdemStatus {
    guard(|| {
        let u = function(&group_ref(g)?.inner, re, im, len)?;
        write(out, a_norm_abelian_oracle(&u)?.value)
    })
}

/// Whether `elems[0..len]` is a left or right coset. The empty set is not.
///
/// # Safety
/// `elems` must point to `len` values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn idem_is_coset(
    g: *const IdemGroup,
    elems: *const usize,
    len: usize,
    out: *mut bool,
) -> IdemStatus {
    guard(|| {
        let g = &group_ref(g)?.inner;
        write(out, is_coset(g, slice(elems, len)?)?.is_coset())
    })
}

/// Normalized `L^1` norm of the Dirichlet kernel of order `k`.
///
/// # Safety
/// `out_value` must be writable; `out_points` may be null.
#[no_mangle]
pub unsafe extern "C" fn idem_dirichlet_norm(
    k: u64,
    abs_tol: f64,
    out_value: *mut f64,
    out_points: *mut usize,
) -> IdemStatus {
    guard(|| {
        let q = dirichlet_norm(k, &QuadratureConfig::with_tol(abs_tol))?;
        if !out_points.is_null() {
            out_points.write(q.points);
        }
        write(out_value, q.value)
    })
}

/// Gap audit report as JSON; free with [`idem_string_free`].
///
/// # Safety
/// `g` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn idem_gap_audit_json(g: *const IdemGroup, out: *mut *mut c_char) -> IdemStatus {
    guard(|| {
        let report = gap_audit(&group_ref(g)?.inner)?;
        let text = to_json_string(&report).map_err(|e| Fail(IdemStatus::InvalidInput, e.to_string()))?;
        write(out, owned_string(text))
    })
}

/// Exhaustive search result as JSON; free with [`idem_string_free`].
///
/// # Safety
/// `g` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn idem_brute_force_max_json(g: *const IdemGroup, out: *mut *mut c_char) -> IdemStatus {
    guard(|| {
        let result = brute_force_max(&group_ref(g)?.inner)?;
        let text = to_json_string(&result).map_err(|e| Fail(IdemStatus::InvalidInput, e.to_string()))?;
        write(out, owned_string(text))
    })
}

/// Frees a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn idem_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
