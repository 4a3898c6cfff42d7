//! C ABI over the `veltman` crate.
//!
//! Formulas and models cross the boundary as opaque handles created by
//! `*_parse` / `*_from_json` and released by the matching `*_free`. Every
//! call returns a [`VtStatus`]; on failure [`vt_last_error`] describes the
//! most recent error on the calling thread. Strings returned by the library
//! are released with [`vt_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use veltman::conditions::FrameClass;
use veltman::construct::{construct_model_with, ConstructOptions};
use veltman::model::FrameFile;
use veltman::search::{find_countermodel_with, satisfiable_with, SearchOptions};
use veltman::{Formula, Model};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VtStatus {
    /// Affirmative: no counterexample, satisfiable, forced, constructed.
    Ok = 0,
    /// Negative verdict: countermodel, unsatisfiable, not forced, aborted.
    No = 1,
    NullArgument = 2,
    InvalidUtf8 = 3,
    ParseError = 4,
    ModelError = 5,
    InvalidArgument = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VtClass {
    Il = 0,
    IlM0 = 1,
    IlW = 2,
    IlWStar = 3,
}

impl From<VtClass> for FrameClass {
    fn from(c: VtClass) -> FrameClass {
        match c {
            VtClass::Il => FrameClass::IL,
            VtClass::IlM0 => FrameClass::ILM0,
            VtClass::IlW => FrameClass::ILW,
            VtClass::IlWStar => FrameClass::ILWstar,
        }
    }
}

/// Opaque parsed formula.
pub struct VtFormula(Formula);

/// Opaque model: a frame with a valuation.
pub struct VtModel(Model);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let text = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(text).expect("nul bytes removed"));
}

fn fail(status: VtStatus, msg: impl Into<String>) -> VtStatus {
    set_error(msg);
    status
}

/// Runs `body`, turning a panic into [`VtStatus::Panic`].
fn guard(body: impl FnOnce() -> VtStatus) -> VtStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(_) => fail(VtStatus::Panic, "internal panic"),
    }
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, VtStatus> {
    if p.is_null() {
        return Err(fail(VtStatus::NullArgument, "null string argument"));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| fail(VtStatus::InvalidUtf8, "string argument is not UTF-8"))
}

unsafe fn handle<'a, T>(p: *const T) -> Result<&'a T, VtStatus> {
    p.as_ref().ok_or_else(|| fail(VtStatus::NullArgument, "null handle"))
}

fn owned(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).map_or(ptr::null_mut(), CString::into_raw)
}

macro_rules! try_ffi {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(status) => return status,
        }
    };
}

/// Message for the last failing call on this thread. Valid until the next
/// call into the library from the same thread; never null.
#[no_mangle]
pub extern "C" fn vt_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// # Safety
/// `s` is null or was returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn vt_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses `src`; on success stores a new handle in `*out`.
///
/// # Safety
/// `src` is a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn vt_formula_parse(src: *const c_char, out: *mut *mut VtFormula) -> VtStatus {
    guard(|| {
        if out.is_null() {
            return fail(VtStatus::NullArgument, "null output pointer");
        }
        let src = try_ffi!(text(src));
        match veltman::parse(src) {
            Ok(f) => {
                *out = Box::into_raw(Box::new(VtFormula(f)));
                VtStatus::Ok
            }
            Err(e) => fail(VtStatus::ParseError, e.to_string()),
        }
    })
}

/// Canonical text of a formula, or null. Free with [`vt_string_free`].
///
/// # Safety
/// `f` is a live formula handle.
#[no_mangle]
pub unsafe extern "C" fn vt_formula_print(f: *const VtFormula) -> *mut c_char {
    match f.as_ref() {
        Some(f) => owned(f.0.to_string()),
        None => ptr::null_mut(),
    }
}

/// # Safety
/// `f` is null or a formula handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn vt_formula_free(f: *mut VtFormula) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// Reads a model from its JSON file format.
///
/// # Safety
/// `json` is a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn vt_model_from_json(json: *const c_char, out: *mut *mut VtModel) -> VtStatus {
    guard(|| {
        if out.is_null() {
            return fail(VtStatus::NullArgument, "null output pointer");
        }
        let json = try_ffi!(text(json));
        match Model::from_json(json) {
            Ok(m) => {
                *out = Box::into_raw(Box::new(VtModel(m)));
                VtStatus::Ok
            }
            Err(e) => fail(VtStatus::ModelError, e.to_string()),
        }
    })
}

/// JSON text of a model, or null. Free with [`vt_string_free`].
///
/// # Safety
/// `m` is a live model handle.
#[no_mangle]
pub unsafe extern "C" fn vt_model_to_json(m: *const VtModel) -> *mut c_char {
    match m.as_ref() {
        Some(m) => owned(m.0.to_json()),
        None => ptr::null_mut(),
    }
}

/// # Safety
/// `m` is null or a model handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn vt_model_free(m: *mut VtModel) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// `Ok` if `world` forces `f` in `m`, `No` if not.
///
/// # Safety
/// Handles are live and `world` is a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn vt_model_forces(m: *const VtModel, world: *const c_char, f: *const VtFormula) -> VtStatus {
    guard(|| {
        let m = try_ffi!(handle(m));
        let f = try_ffi!(handle(f));
        let world = try_ffi!(text(world));
        match m.0.forces(world, &f.0) {
            Ok(true) => VtStatus::Ok,
            Ok(false) => VtStatus::No,
            Err(e) => fail(VtStatus::ModelError, e.to_string()),
        }
    })
}

fn bound_ok(n: usize) -> Result<(), VtStatus> {
    if (1..=veltman::search::MAX_WORLDS).contains(&n) {
        Ok(())
    } else {
        Err(fail(VtStatus::InvalidArgument, "world bound out of range"))
    }
}

/// Bounded countermodel search. `Ok` when none exists up to `max_worlds`;
/// `No` when one does, in which case it is stored in `*countermodel` if
/// that pointer is non-null. `workers == 1` is deterministic.
///
/// # Safety
/// `f` is a live handle; `countermodel` is null or writable.
#[no_mangle]
pub unsafe extern "C" fn vt_decide(
    f: *const VtFormula,
    class: VtClass,
    max_worlds: usize,
    workers: usize,
    countermodel: *mut *mut VtModel,
) -> VtStatus {
    guard(|| {
        let f = try_ffi!(handle(f));
        try_ffi!(bound_ok(max_worlds));
        let v = find_countermodel_with(&f.0, class.into(), max_worlds, SearchOptions { workers });
        match v.countermodel() {
            None => VtStatus::Ok,
            Some((model, _)) => {
                if !countermodel.is_null() {
                    *countermodel = Box::into_raw(Box::new(VtModel(model.clone())));
                }
                VtStatus::No
            }
        }
    })
}

/// Bounded satisfiability of one formula; the witness model, rooted at its
/// first world, goes to `*model` when non-null.
///
/// # Safety
/// `f` is a live handle; `model` is null or writable.
#[no_mangle]
pub unsafe extern "C" fn vt_satisfiable(
    f: *const VtFormula,
    class: VtClass,
    max_worlds: usize,
    model: *mut *mut VtModel,
) -> VtStatus {
    guard(|| {
        let f = try_ffi!(handle(f));
        try_ffi!(bound_ok(max_worlds));
        let v = satisfiable_with(std::slice::from_ref(&f.0), class.into(), max_worlds, SearchOptions::deterministic());
        match v.witness {
            None => fail(VtStatus::No, v.to_string()),
            Some((m, _)) => {
                if !model.is_null() {
                    *model = Box::into_raw(Box::new(VtModel(m)));
                }
                VtStatus::Ok
            }
        }
    })
}

/// Step-by-step construction of a model of `f`. On success `*json`
/// receives an object with the root, the step log and the labeled frame;
/// free it with [`vt_string_free`].
///
/// # Safety
/// `f` is a live handle and `json` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn vt_construct(
    f: *const VtFormula,
    logic: VtClass,
    budget: usize,
    bound: usize,
    json: *mut *mut c_char,
) -> VtStatus {
    guard(|| {
        let f = try_ffi!(handle(f));
        if json.is_null() {
            return fail(VtStatus::NullArgument, "null output pointer");
        }
        try_ffi!(bound_ok(bound));
        if logic == VtClass::IlW {
            return fail(VtStatus::InvalidArgument, "construction supports IL, ILM0 and ILWstar");
        }
        let opts = ConstructOptions { debug: false, search: SearchOptions::deterministic() };
        match construct_model_with(&f.0, logic.into(), budget, bound, opts) {
            Ok(c) => {
                let body = serde_json::json!({
                    "root": c.root,
                    "steps": c.steps.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
                    "frame": FrameFile::from_labeled(&c.frame),
                });
                *json = owned(body.to_string());
                VtStatus::Ok
            }
            Err(e) => fail(VtStatus::No, e.to_string()),
        }
    })
}
