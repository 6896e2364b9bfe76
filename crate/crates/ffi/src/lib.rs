//! C ABI over the `tensornorm` library.
//!
//! Every fallible function returns a [`TnStatus`] and writes its result through
//! an out-pointer. On failure, [`tn_last_error_message`] describes the error of
//! the most recent failed call on the calling thread. Handles are opaque and
//! must be released with the matching `*_free` function. Party subsets are
//! passed as bitmasks with party `p` (1-based) at bit `p - 1`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use tensornorm::bounds::{self, BoundValue, CriterionTemplate};
use tensornorm::correlations::norm_table_moebius;
use tensornorm::detect::{default_criteria, evaluate};
use tensornorm::spec::{read_matrix_file, StateSpec};
use tensornorm::stabilizer::Graph;
use tensornorm::{DensityMatrix, Error, Limits, NormTable, Parties};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TnStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InvalidDimension = 3,
    DimensionCap = 4,
    InvalidState = 5,
    NumericalIntegrity = 6,
    Parse = 7,
    Io = 8,
    Panic = 9,
}

/// Opaque density matrix handle.
pub struct TnState(DensityMatrix);

/// Opaque table of squared full-body norms.
pub struct TnNormTable(NormTable);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> TnStatus {
    match e {
        Error::InvalidDimension(_) => TnStatus::InvalidDimension,
        Error::DimensionCap(_) => TnStatus::DimensionCap,
        Error::InvalidSubset(_) | Error::InvalidCutoff { .. } | Error::InvalidParameter(_) => TnStatus::InvalidArgument,
        Error::InvalidState(_) => TnStatus::InvalidState,
        Error::NumericalIntegrity(_) => TnStatus::NumericalIntegrity,
        Error::Parse(_) | Error::Json(_) | Error::Csv(_) => TnStatus::Parse,
        Error::Io(_) => TnStatus::Io,
    }
}

enum Failure {
    Null(&'static str),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type FfiResult<T> = std::result::Result<T, Failure>;

/// Runs `f`, converting errors and panics into a status code.
fn guard<F: FnOnce() -> FfiResult<()>>(f: F) -> TnStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => TnStatus::Ok,
        Ok(Err(Failure::Null(what))) => {
            set_error(format!("null pointer passed for {what}"));
            TnStatus::NullPointer
        }
        Ok(Err(Failure::Lib(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Err(panic) => {
            let msg = panic
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| panic.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("internal panic: {msg}"));
            TnStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &'static str) -> FfiResult<&'a T> {
    p.as_ref().ok_or(Failure::Null(what))
}

unsafe fn out<'a, T>(p: *mut T, what: &'static str) -> FfiResult<&'a mut T> {
    p.as_mut().ok_or(Failure::Null(what))
}

unsafe fn c_str<'a>(p: *const c_char, what: &'static str) -> FfiResult<&'a str> {
    if p.is_null() {
        return Err(Failure::Null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure::Lib(Error::Parse(format!("{what} is not valid UTF-8"))))
}

fn boxed_state(out_state: &mut *mut TnState, rho: DensityMatrix) {
    *out_state = Box::into_raw(Box::new(TnState(rho)));
}

fn into_c_string(s: String) -> FfiResult<*mut c_char> {
    CString::new(s)
        .map(CString::into_raw)
        .map_err(|_| Failure::Lib(Error::InvalidParameter("string contains NUL".into())))
}

/// Message for the last failed call on this thread, or NULL. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn tn_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must be NULL or a string obtained from this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn tn_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// # Safety
/// `out_state` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tn_state_ghz(n: usize, d: usize, out_state: *mut *mut TnState) -> TnStatus {
    guard(|| {
        let o = out(out_state, "out_state")?;
        boxed_state(o, DensityMatrix::ghz(n, d)?);
        Ok(())
    })
}

/// # Safety
/// `out_state` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tn_state_w(n: usize, out_state: *mut *mut TnState) -> TnStatus {
    guard(|| {
        let o = out(out_state, "out_state")?;
        boxed_state(o, DensityMatrix::w(n)?);
        Ok(())
    })
}

/// Four-qutrit absolutely maximally entangled state.
///
/// # Safety
/// `out_state` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tn_state_ame43(out_state: *mut *mut TnState) -> TnStatus {
    guard(|| {
        let o = out(out_state, "out_state")?;
        boxed_state(o, DensityMatrix::ame43()?);
        Ok(())
    })
}

/// Graph state from an edge list such as `"1-2,2-3"`. `n = 0` infers the
/// vertex count from the largest label.
///
/// # Safety
/// `edges` must be a NUL-terminated string and `out_state` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tn_state_graph(edges: *const c_char, n: usize, out_state: *mut *mut TnState) -> TnStatus {
    guard(|| {
        let edges = c_str(edges, "edges")?;
        let o = out(out_state, "out_state")?;
        let graph = Graph::parse_edge_list(edges, (n > 0).then_some(n))?;
        boxed_state(o, DensityMatrix::graph_state(&graph)?);
        Ok(())
    })
}

/// State from StateSpec JSON. Relative matrix-file paths resolve against
/// `base_dir`, which may be NULL.
///
/// # Safety
/// `json` must be a NUL-terminated string, `base_dir` NULL or NUL-terminated,
/// and `out_state` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tn_state_from_spec_json(
    json: *const c_char,
    base_dir: *const c_char,
    out_state: *mut *mut TnState,
) -> TnStatus {
    guard(|| {
        let json = c_str(json, "json")?;
        let base = if base_dir.is_null() {
            None
        } else {
            Some(c_str(base_dir, "base_dir")?)
        };
        let o = out(out_state, "out_state")?;
        let spec = StateSpec::from_json(json)?;
        boxed_state(o, spec.build(&Limits::default(), base.map(Path::new))?);
        Ok(())
    })
}

/// # Safety
/// `path` must be a NUL-terminated string and `out_state` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tn_state_from_matrix_file(path: *const c_char, out_state: *mut *mut TnState) -> TnStatus {
    guard(|| {
        let path = c_str(path, "path")?;
        let o = out(out_state, "out_state")?;
        boxed_state(o, read_matrix_file(Path::new(path), &Limits::default())?);
        Ok(())
    })
}

/// New state `p·ρ + (1-p)·I/d^n`; `state` is left untouched.
///
/// # Safety
/// `state` must be a live handle and `out_state` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tn_state_mix(state: *const TnState, p: f64, out_state: *mut *mut TnState) -> TnStatus {
    guard(|| {
        let s = deref(state, "state")?;
        let o = out(out_state, "out_state")?;
        boxed_state(o, s.0.mix_with_white_noise(p)?);
        Ok(())
    })
}

/// # Safety
/// `state` must be NULL or a handle from this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn tn_state_free(state: *mut TnState) {
    if !state.is_null() {
        drop(Box::from_raw(state));
    }
}

/// # Safety
/// `state` must be a live handle; `out_n` and `out_d` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn tn_state_shape(state: *const TnState, out_n: *mut usize, out_d: *mut usize) -> TnStatus {
    guard(|| {
        let s = deref(state, "state")?;
        *out(out_n, "out_n")? = s.0.n();
        *out(out_d, "out_d")? = s.0.d();
        Ok(())
    })
}

/// # Safety
/// `state` must be a live handle and `out_value` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tn_state_purity(state: *const TnState, out_value: *mut f64) -> TnStatus {
    guard(|| {
        let s = deref(state, "state")?;
        *out(out_value, "out_value")? = s.0.purity();
        Ok(())
    })
}

/// Squared full-body norms of every nonempty subset.
///
/// # Safety
/// `state` must be a live handle and `out_table` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tn_norm_table_new(state: *const TnState, out_table: *mut *mut TnNormTable) -> TnStatus {
    guard(|| {
        let s = deref(state, "state")?;
        let o = out(out_table, "out_table")?;
        *o = Box::into_raw(Box::new(TnNormTable(norm_table_moebius(&s.0)?)));
        Ok(())
    })
}

/// # Safety
/// `table` must be NULL or a handle from this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn tn_norm_table_free(table: *mut TnNormTable) {
    if !table.is_null() {
        drop(Box::from_raw(table));
    }
}

/// `‖τ_α‖²` for the subset with bitmask `parties`.
///
/// # Safety
/// `table` must be a live handle and `out_value` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tn_norm_table_get(table: *const TnNormTable, parties: u32, out_value: *mut f64) -> TnStatus {
    guard(|| {
        let t = deref(table, "table")?;
        let o = out(out_value, "out_value")?;
        let alpha = Parties(parties);
        alpha.check_within(t.0.n())?;
        *o = t.0.get(alpha);
        Ok(())
    })
}

/// `C_x`, the sum of squared full-body norms over subsets of size at least `x`.
///
/// # Safety
/// `table` must be a live handle and `out_value` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tn_norm_table_cx(table: *const TnNormTable, x: usize, out_value: *mut f64) -> TnStatus {
    guard(|| {
        let t = deref(table, "table")?;
        *out(out_value, "out_value")? = t.0.cx(x)?.value;
        Ok(())
    })
}

/// JSON form of the table; release with [`tn_string_free`].
///
/// # Safety
/// `table` must be a live handle and `out_json` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tn_norm_table_to_json(table: *const TnNormTable, out_json: *mut *mut c_char) -> TnStatus {
    guard(|| {
        let t = deref(table, "table")?;
        let o = out(out_json, "out_json")?;
        *o = into_c_string(t.0.to_json_pretty()?)?;
        Ok(())
    })
}

unsafe fn write_bound(out_value: *mut f64, f: impl FnOnce() -> tensornorm::Result<BoundValue>) -> TnStatus {
    guard(|| {
        let o = out(out_value, "out_value")?;
        *o = f()?.value;
        Ok(())
    })
}

/// # Safety
/// `out_value` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tn_bound_purity_ksep(n: usize, d: usize, k: usize, out_value: *mut f64) -> TnStatus {
    write_bound(out_value, || bounds::bound_purity_ksep(n, d, k))
}

/// # Safety
/// `out_value` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tn_bound_improved_ksep(n: usize, d: usize, k: usize, out_value: *mut f64) -> TnStatus {
    write_bound(out_value, || bounds::bound_improved_ksep(n, d, k))
}

/// # Safety
/// `out_value` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tn_bound_fullbody_single(n: usize, d: usize, out_value: *mut f64) -> TnStatus {
    write_bound(out_value, || bounds::bound_fullbody_single(n, d))
}

/// # Safety
/// `out_value` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tn_bound_cutoff_partition(
    n: usize,
    d: usize,
    x: usize,
    k1: usize,
    out_value: *mut f64,
) -> TnStatus {
    write_bound(out_value, || bounds::bound_cutoff_partition(n, d, x, k1))
}

/// # Safety
/// `out_value` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tn_bound_cutoff_bisep_max(n: usize, d: usize, x: usize, out_value: *mut f64) -> TnStatus {
    write_bound(out_value, || bounds::bound_cutoff_bisep_max(n, d, x))
}

/// # Safety
/// `out_value` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tn_bound_cutoff_half(n: usize, d: usize, out_value: *mut f64) -> TnStatus {
    write_bound(out_value, || bounds::bound_cutoff_half(n, d))
}

/// # Safety
/// `out_value` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tn_bound_cutoff_nminus1(n: usize, d: usize, out_value: *mut f64) -> TnStatus {
    write_bound(out_value, || bounds::bound_cutoff_nminus1(n, d))
}

/// # Safety
/// `ranks` must point to `n` values and `out_value` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tn_bound_dim_vector(n: usize, d: usize, ranks: *const usize, out_value: *mut f64) -> TnStatus {
    guard(|| {
        if ranks.is_null() {
            return Err(Failure::Null("ranks"));
        }
        let r = std::slice::from_raw_parts(ranks, n);
        *out(out_value, "out_value")? = bounds::bound_dim_vector(n, d, r)?.value;
        Ok(())
    })
}

/// Detection report JSON for `state`. `criteria` is a `;`-separated list such
/// as `"purity-ksep:2;cutoff-bisep-max:3"`, or NULL for the default set.
///
/// # Safety
/// `state` must be a live handle, `criteria` NULL or NUL-terminated, and
/// `out_json` a valid pointer. Release the result with [`tn_string_free`].
#[no_mangle]
pub unsafe extern "C" fn tn_evaluate_json(
    state: *const TnState,
    criteria: *const c_char,
    out_json: *mut *mut c_char,
) -> TnStatus {
    guard(|| {
        let s = deref(state, "state")?;
        let o = out(out_json, "out_json")?;
        let (n, d) = (s.0.n(), s.0.d());
        let specs = if criteria.is_null() {
            default_criteria(n, d, None)?
        } else {
            c_str(criteria, "criteria")?
                .split(';')
                .filter(|t| !t.trim().is_empty())
                .map(|t| t.parse::<CriterionTemplate>()?.instantiate(n, d, None, None))
                .collect::<tensornorm::Result<Vec<_>>>()?
        };
        let report = evaluate("ffi", &s.0, &specs)?;
        *o = into_c_string(serde_json::to_string_pretty(&report).map_err(Error::from)?)?;
        Ok(())
    })
}
