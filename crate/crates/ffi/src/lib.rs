//! C interface. Systems and joints are opaque handles owned by the caller
//! and released with their `*_free` function. Every fallible call returns an
//! [`SrStatus`]; on failure `sr_last_error` holds a message for the calling
//! thread. Strings handed out by the library are freed with `sr_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use secrecy_regions::dist::{compose_joint, Binding, FactorizationSpec, JointPmf};
use secrecy_regions::dsl;
use secrecy_regions::info::eval_expr;
use secrecy_regions::poly::{IneqSystem, Mode};
use secrecy_regions::regions::{
    builtin_system, derive, evaluate, evaluate_system, Params, RegionId,
};
use secrecy_regions::sim::{run_lemma1_counting, run_osrb_tv, BinningConfig, Lemma1Config};
use secrecy_regions::Error;

/// Result of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SrStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidInput = 4,
    UnknownRegion = 5,
    ResourceLimit = 6,
    Solver = 7,
    Panic = 8,
}

/// Opaque inequality system.
pub struct SrSystem(IneqSystem);

/// Opaque joint distribution.
pub struct SrJoint(JointPmf);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> SrStatus {
    match e {
        Error::Parse { .. } | Error::Json(_) => SrStatus::Parse,
        Error::UnknownRegion(_) => SrStatus::UnknownRegion,
        Error::ResourceLimit(_) => SrStatus::ResourceLimit,
        Error::Solver(_) => SrStatus::Solver,
        _ => SrStatus::InvalidInput,
    }
}

struct Fail(SrStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

impl From<serde_json::Error> for Fail {
    fn from(e: serde_json::Error) -> Self {
        Fail(SrStatus::Parse, e.to_string())
    }
}

/// Runs `f`, records any failure or panic and returns its status.
fn guard<F: FnOnce() -> Result<(), Fail>>(f: F) -> SrStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SrStatus::Ok,
        Ok(Err(Fail(s, msg))) => {
            set_error(msg);
            s
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("internal error: {msg}"));
            SrStatus::Panic
        }
    }
}

unsafe fn utf8<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail(SrStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail(SrStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn opt_text<'a>(p: *const c_char, what: &str) -> Result<Option<&'a str>, Fail> {
    if p.is_null() {
        Ok(None)
    } else {
        utf8(p, what).map(Some)
    }
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref()
        .ok_or_else(|| Fail(SrStatus::NullPointer, format!("{what} is null")))
}

unsafe fn put<T>(out: *mut T, v: T, what: &str) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail(SrStatus::NullPointer, format!("{what} is null")));
    }
    out.write(v);
    Ok(())
}

fn c_string(s: String) -> Result<*mut c_char, Fail> {
    CString::new(s)
        .map(CString::into_raw)
        .map_err(|_| Fail(SrStatus::InvalidInput, "output contains a NUL byte".into()))
}

fn names(csv: &str) -> Vec<String> {
    csv.split(',')
        .map(|s| s.trim().to_string())
        .filter(|s| !s.is_empty())
        .collect()
}

/// Message of the last failure on this thread, or null. Valid until the
/// next failing call on the same thread; do not free.
#[no_mangle]
pub extern "C" fn sr_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static string; do not free.
#[no_mangle]
pub extern "C" fn sr_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `s` must come from this library and not have been freed; null is a no-op.
#[no_mangle]
pub unsafe extern "C" fn sr_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

// ---------------------------------------------------------------------------

/// Parses a system in the text format.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn sr_system_parse(text: *const c_char, out: *mut *mut SrSystem) -> SrStatus {
    guard(|| {
        let sys = dsl::parse_system(utf8(text, "text")?)?;
        put(out, Box::into_raw(Box::new(SrSystem(sys))), "out")
    })
}

/// Builtin system by id; parameterized regions also need `tau1`, `tau2`
/// (pass NaN otherwise).
///
/// # Safety
/// `id` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn sr_system_builtin(
    id: *const c_char,
    tau1: f64,
    tau2: f64,
    out: *mut *mut SrSystem,
) -> SrStatus {
    guard(|| {
        let id: RegionId = utf8(id, "id")?.parse()?;
        let spec = builtin_system(id);
        let sys = if spec.is_parameterized() {
            let p = |t: f64| (!t.is_nan()).then_some(t);
            spec.instantiate(&Params {
                tau1: p(tau1),
                tau2: p(tau2),
            })?
        } else {
            spec.system
        };
        put(out, Box::into_raw(Box::new(SrSystem(sys))), "out")
    })
}

/// # Safety
/// `sys` must come from this library and not have been freed; null is a no-op.
#[no_mangle]
pub unsafe extern "C" fn sr_system_free(sys: *mut SrSystem) {
    if !sys.is_null() {
        drop(Box::from_raw(sys));
    }
}

/// Number of rate inequalities and of assumptions.
///
/// # Safety
/// `sys` must be a live handle; the outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn sr_system_counts(
    sys: *const SrSystem,
    n_ineqs: *mut usize,
    n_assumptions: *mut usize,
) -> SrStatus {
    guard(|| {
        let s = &handle(sys, "sys")?.0;
        put(n_ineqs, s.ineqs.len(), "n_ineqs")?;
        put(n_assumptions, s.assumptions.len(), "n_assumptions")
    })
}

/// Canonical text form; free the result with `sr_string_free`.
///
/// # Safety
/// `sys` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sr_system_format(sys: *const SrSystem, out: *mut *mut c_char) -> SrStatus {
    guard(|| {
        let s = dsl::format_system(&handle(sys, "sys")?.0);
        put(out, c_string(s)?, "out")
    })
}

/// JSON form; free the result with `sr_string_free`.
///
/// # Safety
/// `sys` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sr_system_to_json(
    sys: *const SrSystem,
    out: *mut *mut c_char,
) -> SrStatus {
    guard(|| {
        let s = serde_json::to_string(&handle(sys, "sys")?.0)?;
        put(out, c_string(s)?, "out")
    })
}

/// Eliminates the comma separated `eliminate` variables from `raw`.
/// `mode` is `"farkas"` or `"farkas+shannon"` (null selects the latter).
/// When `target` is non-null the result is compared with it and
/// `equal` receives 1 or 0; otherwise `equal` is left untouched and may be null.
///
/// # Safety
/// Handles must be live or null where allowed; strings NUL-terminated;
/// `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sr_derive(
    raw: *const SrSystem,
    eliminate: *const c_char,
    mode: *const c_char,
    target: *const SrSystem,
    out: *mut *mut SrSystem,
    equal: *mut i32,
) -> SrStatus {
    guard(|| {
        let raw = &handle(raw, "raw")?.0;
        let order = names(utf8(eliminate, "eliminate")?);
        let mode: Mode = opt_text(mode, "mode")?
            .unwrap_or("farkas+shannon")
            .parse()?;
        let target = target.as_ref().map(|t| ("target", &t.0));
        let d = derive(raw, &order, mode, target)?;
        if let Some(v) = &d.verdict {
            put(equal, v.equal as i32, "equal")?;
        }
        put(out, Box::into_raw(Box::new(SrSystem(d.system))), "out")
    })
}

// ---------------------------------------------------------------------------

/// Joint from JSON, either `{variables, probs}` or a factorization
/// `{variables, factors}`.
///
/// # Safety
/// `json` must be NUL-terminated and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sr_joint_from_json(
    json: *const c_char,
    out: *mut *mut SrJoint,
) -> SrStatus {
    guard(|| {
        let v: serde_json::Value = serde_json::from_str(utf8(json, "json")?)?;
        let joint = if v.get("factors").is_some() {
            compose_joint(&serde_json::from_value::<FactorizationSpec>(v)?)?
        } else {
            serde_json::from_value(v)?
        };
        put(out, Box::into_raw(Box::new(SrJoint(joint))), "out")
    })
}

/// # Safety
/// `joint` must come from this library and not have been freed; null is a no-op.
#[no_mangle]
pub unsafe extern "C" fn sr_joint_free(joint: *mut SrJoint) {
    if !joint.is_null() {
        drop(Box::from_raw(joint));
    }
}

/// Value in bits of an information expression such as `I(X;Y|Z) - H(X)`.
///
/// # Safety
/// `joint` must be a live handle, `expr` NUL-terminated and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sr_info_eval(
    joint: *const SrJoint,
    expr: *const c_char,
    out: *mut f64,
) -> SrStatus {
    guard(|| {
        let j = &handle(joint, "joint")?.0;
        let e = dsl::parse_info_expr(utf8(expr, "expr")?)?;
        put(out, eval_expr(&e, j)?, "out")
    })
}

/// Evaluates a region on a joint. `region` is a builtin id or system text;
/// `binding_json` maps region symbols to joint variables and may be null.
/// Writes the evaluation as JSON and sets `assumptions_hold` to 1 or 0.
///
/// # Safety
/// Handles live, strings NUL-terminated or null where allowed, outputs writable.
#[no_mangle]
pub unsafe extern "C" fn sr_evaluate(
    region: *const c_char,
    joint: *const SrJoint,
    binding_json: *const c_char,
    tau1: f64,
    tau2: f64,
    out_json: *mut *mut c_char,
    assumptions_hold: *mut i32,
) -> SrStatus {
    guard(|| {
        let region = utf8(region, "region")?;
        let j = &handle(joint, "joint")?.0;
        let binding: Binding = match opt_text(binding_json, "binding")? {
            Some(b) => serde_json::from_str(b)?,
            None => Binding::new(),
        };
        let p = |t: f64| (!t.is_nan()).then_some(t);
        let ev = match region.parse::<RegionId>() {
            Ok(id) => evaluate(
                &builtin_system(id),
                j,
                &binding,
                &Params {
                    tau1: p(tau1),
                    tau2: p(tau2),
                },
            )?,
            Err(_) => {
                let sys = dsl::parse_system(region)?;
                evaluate_system(&sys, sys.template.as_ref(), j, &binding)?
            }
        };
        put(
            assumptions_hold,
            ev.assumptions_hold as i32,
            "assumptions_hold",
        )?;
        put(out_json, c_string(serde_json::to_string(&ev)?)?, "out_json")
    })
}

// ---------------------------------------------------------------------------

/// Codebook counting experiment; configuration and result are JSON.
///
/// # Safety
/// `config_json` NUL-terminated, `out_json` writable.
#[no_mangle]
pub unsafe extern "C" fn sr_simulate_lemma1(
    config_json: *const c_char,
    out_json: *mut *mut c_char,
) -> SrStatus {
    guard(|| {
        let cfg: Lemma1Config = serde_json::from_str(utf8(config_json, "config")?)?;
        let r = run_lemma1_counting(&cfg)?;
        put(out_json, c_string(serde_json::to_string(&r)?)?, "out_json")
    })
}

/// Random binning experiment; configuration and result are JSON.
///
/// # Safety
/// `config_json` NUL-terminated, `out_json` writable.
#[no_mangle]
pub unsafe extern "C" fn sr_simulate_osrb(
    config_json: *const c_char,
    out_json: *mut *mut c_char,
) -> SrStatus {
    guard(|| {
        let cfg: BinningConfig = serde_json::from_str(utf8(config_json, "config")?)?;
        let r = run_osrb_tv(&cfg)?;
        put(out_json, c_string(serde_json::to_string(&r)?)?, "out_json")
    })
}
