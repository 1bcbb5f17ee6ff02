//! C ABI over `regcat`.
//!
//! Every fallible call returns a [`RegcatStatus`] and writes its result
//! through an out-pointer. On failure the message is available from
//! [`regcat_last_error`] on the same thread until the next failing call.
//! Workspaces are opaque handles owned by the caller and released with
//! [`regcat_workspace_free`]; strings returned by the library are released
//! with [`regcat_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use regcat::braiding::{solve_ybe, ObstructorChoice, YbeMode, YbeProblem};
use regcat::diagrams::{is_commutative, is_semicommutative, obstruction_number};
use regcat::dsl::{parse_workspace, render_workspace, Workspace};
use regcat::error::Error;
use regcat::inverses::inner_inverse_count;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegcatStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    NotFound = 4,
    Invalid = 5,
    ResourceLimit = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegcatDiagramMode {
    Commutative = 0,
    Semicommutative = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegcatYbeMode {
    Classical = 0,
    Regular = 1,
}

/// Properties of a map. `idempotent` is -1 when the map is not an endomap.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RegcatMapClass {
    pub injective: bool,
    pub surjective: bool,
    pub bijective: bool,
    pub idempotent: i8,
}

/// A parsed workspace.
pub struct RegcatWorkspace {
    inner: Workspace,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(RegcatStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let status = match e {
            Error::SearchSpaceTooLarge { .. } | Error::CarrierTooLarge { .. } => RegcatStatus::ResourceLimit,
            _ => RegcatStatus::Invalid,
        };
        Failure(status, e.to_string())
    }
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior nul removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn guard(body: impl FnOnce() -> Result<(), Failure>) -> RegcatStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => RegcatStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            RegcatStatus::Panic
        }
    }
}

fn null() -> Failure {
    Failure(RegcatStatus::NullArgument, "null argument".into())
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null());
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| Failure(RegcatStatus::InvalidUtf8, e.to_string()))
}

unsafe fn workspace<'a>(ws: *const RegcatWorkspace) -> Result<&'a Workspace, Failure> {
    ws.as_ref().map(|w| &w.inner).ok_or_else(null)
}

unsafe fn out<'a, T>(p: *mut T) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or_else(null)
}

fn lookup<'a, T>(items: &'a std::collections::BTreeMap<String, T>, kind: &str, name: &str) -> Result<&'a T, Failure> {
    items
        .get(name)
        .ok_or_else(|| Failure(RegcatStatus::NotFound, format!("no {kind} named `{name}`")))
}

/// Message of the last failed call on this thread, or null. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn regcat_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static nul-terminated string.
#[no_mangle]
pub extern "C" fn regcat_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `src` must be a nul-terminated string and `out_ws` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn regcat_workspace_parse(src: *const c_char, out_ws: *mut *mut RegcatWorkspace) -> RegcatStatus {
    guard(|| {
        let slot = out(out_ws)?;
        *slot = ptr::null_mut();
        let w = parse_workspace(text(src)?).map_err(|e| Failure(RegcatStatus::Parse, e.to_string()))?;
        *slot = Box::into_raw(Box::new(RegcatWorkspace { inner: w }));
        Ok(())
    })
}

/// # Safety
/// `ws` must come from [`regcat_workspace_parse`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn regcat_workspace_free(ws: *mut RegcatWorkspace) {
    if !ws.is_null() {
        drop(Box::from_raw(ws));
    }
}

/// Canonical text of the workspace; free with [`regcat_string_free`].
///
/// # Safety
/// `ws` must be a live workspace and `out_text` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn regcat_workspace_render(ws: *const RegcatWorkspace, out_text: *mut *mut c_char) -> RegcatStatus {
    guard(|| {
        let slot = out(out_text)?;
        *slot = ptr::null_mut();
        let s = render_workspace(workspace(ws)?);
        *slot = CString::new(s).expect("rendered text has no nul").into_raw();
        Ok(())
    })
}

/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn regcat_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// # Safety
/// Pointers must be valid; `map` nul-terminated.
#[no_mangle]
pub unsafe extern "C" fn regcat_map_classify(
    ws: *const RegcatWorkspace,
    map: *const c_char,
    out_class: *mut RegcatMapClass,
) -> RegcatStatus {
    guard(|| {
        let f = lookup(&workspace(ws)?.maps, "map", text(map)?)?;
        let c = regcat::classify_map(f);
        *out(out_class)? = RegcatMapClass {
            injective: c.injective,
            surjective: c.surjective,
            bijective: c.bijective,
            idempotent: c.idempotent.map_or(-1, i8::from),
        };
        Ok(())
    })
}

/// Number of inner inverses of a map. Fails with `ResourceLimit` when the
/// count does not fit in 64 bits.
///
/// # Safety
/// Pointers must be valid; `map` nul-terminated.
#[no_mangle]
pub unsafe extern "C" fn regcat_map_inner_inverse_count(
    ws: *const RegcatWorkspace,
    map: *const c_char,
    out_count: *mut u64,
) -> RegcatStatus {
    guard(|| {
        let f = lookup(&workspace(ws)?.maps, "map", text(map)?)?;
        let n = inner_inverse_count(f);
        *out(out_count)? = u64::try_from(n)
            .map_err(|_| Failure(RegcatStatus::ResourceLimit, format!("{n} inner inverses overflow 64 bits")))?;
        Ok(())
    })
}

/// Whether a diagram is commutative or semicommutative over cycles of
/// length up to `max_len`.
///
/// # Safety
/// Pointers must be valid; `diagram` nul-terminated.
#[no_mangle]
pub unsafe extern "C" fn regcat_diagram_check(
    ws: *const RegcatWorkspace,
    diagram: *const c_char,
    mode: RegcatDiagramMode,
    max_len: usize,
    out_holds: *mut bool,
) -> RegcatStatus {
    guard(|| {
        let d = lookup(&workspace(ws)?.diagrams, "diagram", text(diagram)?)?;
        let v = match mode {
            RegcatDiagramMode::Commutative => is_commutative(d, max_len),
            RegcatDiagramMode::Semicommutative => is_semicommutative(d, max_len),
        };
        *out(out_holds)? = v.holds;
        Ok(())
    })
}

/// Least cycle length at `object` whose obstructor is not the identity, or
/// 0 when there is none up to `max_n`.
///
/// # Safety
/// Pointers must be valid; strings nul-terminated.
#[no_mangle]
pub unsafe extern "C" fn regcat_obstruction_number(
    ws: *const RegcatWorkspace,
    diagram: *const c_char,
    object: *const c_char,
    max_n: usize,
    out_n: *mut usize,
) -> RegcatStatus {
    guard(|| {
        let d = lookup(&workspace(ws)?.diagrams, "diagram", text(diagram)?)?;
        let n = obstruction_number(d, text(object)?, max_n)?;
        *out(out_n)? = n.n_obstr.unwrap_or(0);
        Ok(())
    })
}

/// Number of braidings on `X*X`, `|X| = size`, satisfying the braid
/// equation. In regular mode `all_obstructors` ranges over every idempotent
/// on `X`; otherwise the identity is used. `jobs = 0` uses all cores.
///
/// # Safety
/// `out_count` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn regcat_ybe_count(
    size: usize,
    mode: RegcatYbeMode,
    all_obstructors: bool,
    bijective: bool,
    symmetric: bool,
    jobs: usize,
    out_count: *mut u64,
) -> RegcatStatus {
    guard(|| {
        let slot = out(out_count)?;
        let mode = match mode {
            RegcatYbeMode::Classical => YbeMode::Classical,
            RegcatYbeMode::Regular => YbeMode::Regular,
        };
        let mut p = YbeProblem::new(size, mode);
        if all_obstructors {
            p.obstructor = ObstructorChoice::All;
        }
        p.require_bijective = bijective;
        p.require_symmetric = symmetric;
        p.limit = Some(0);
        p.jobs = jobs;
        *slot = solve_ybe(&p)?.count;
        Ok(())
    })
}
