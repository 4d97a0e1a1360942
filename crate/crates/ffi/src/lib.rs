//! C ABI over `zpartial-core`.
//!
//! Objects cross the boundary as opaque handles owned by the caller and
//! released with the matching `*_free`. Every fallible call returns a status
//! code; on failure `zp_last_error` describes it until the next call on the
//! same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use zpartial_core::exactcat::{is_pure_mono, ExactStructure};
use zpartial_core::hulls::structural_injective_hull;
use zpartial_core::modcat::{FpModule, Morphism};
use zpartial_core::partial::{check_partial, PartialMorphism};
use zpartial_core::workspace::Workspace;
use zpartial_core::Error;

pub const ZP_OK: i32 = 0;
pub const ZP_NULL: i32 = 1;
pub const ZP_INPUT: i32 = 2;
pub const ZP_CAP: i32 = 3;
pub const ZP_INTERNAL: i32 = 4;
pub const ZP_PANIC: i32 = 5;

pub const ZP_ABELIAN: i32 = 0;
pub const ZP_PURE: i32 = 1;

/// A finite ℤ/m-module.
pub struct ZpModule(FpModule);

/// A module homomorphism.
pub struct ZpMorphism(Morphism);

/// A validated workspace document.
pub struct ZpWorkspace(Workspace);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', "")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn code_of(e: &Error) -> i32 {
    match e {
        e if e.is_resource() => ZP_CAP,
        Error::Violation(_) => ZP_INTERNAL,
        _ => ZP_INPUT,
    }
}

/// Runs `f`, mapping errors and panics to status codes.
fn guard(f: impl FnOnce() -> Result<(), (i32, String)>) -> i32 {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => ZP_OK,
        Ok(Err((code, msg))) => {
            set_error(msg);
            code
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("panic: {msg}"));
            ZP_PANIC
        }
    }
}

fn lift(e: Error) -> (i32, String) {
    (code_of(&e), e.to_string())
}

fn null(what: &str) -> (i32, String) {
    (ZP_NULL, format!("{what} is null"))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, (i32, String)> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn out<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, (i32, String)> {
    p.as_mut().ok_or_else(|| null(what))
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, (i32, String)> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| (ZP_INPUT, format!("{what} is not UTF-8")))
}

fn leak_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', "")).expect("nul bytes removed").into_raw()
}

/// Message for the last failed call on this thread, or null. Owned by the library.
#[no_mangle]
pub extern "C" fn zp_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn zp_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// ⊕ ℤ/factors[i] over ℤ/modulus; factors must form a divisibility chain.
///
/// # Safety
/// `factors` must point to `n` integers (or be null when `n` is 0).
#[no_mangle]
pub unsafe extern "C" fn zp_module_new(modulus: i64, factors: *const i64, n: usize, result: *mut *mut ZpModule) -> i32 {
    guard(|| {
        let result = out(result, "result")?;
        let fs = if n == 0 {
            Vec::new()
        } else {
            if factors.is_null() {
                return Err(null("factors"));
            }
            std::slice::from_raw_parts(factors, n).to_vec()
        };
        let m = FpModule::new(modulus, fs).map_err(lift)?;
        *result = Box::into_raw(Box::new(ZpModule(m)));
        Ok(())
    })
}

/// # Safety
/// `m` must be null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn zp_module_free(m: *mut ZpModule) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Number of cyclic factors.
///
/// # Safety
/// `m` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn zp_module_ngens(m: *const ZpModule, result: *mut usize) -> i32 {
    guard(|| {
        *out(result, "result")? = handle(m, "module")?.0.ngens();
        Ok(())
    })
}

/// Order of the module, saturating at `u64::MAX`.
///
/// # Safety
/// `m` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn zp_module_order(m: *const ZpModule, result: *mut u64) -> i32 {
    guard(|| {
        *out(result, "result")? = u64::try_from(handle(m, "module")?.0.order()).unwrap_or(u64::MAX);
        Ok(())
    })
}

/// Writes up to `cap` invariant factors into `buf`; `len` receives the full count.
///
/// # Safety
/// `buf` must have room for `cap` integers.
#[no_mangle]
pub unsafe extern "C" fn zp_module_factors(m: *const ZpModule, buf: *mut i64, cap: usize, len: *mut usize) -> i32 {
    guard(|| {
        let fs = handle(m, "module")?.0.factors();
        *out(len, "len")? = fs.len();
        if cap > 0 {
            if buf.is_null() {
                return Err(null("buf"));
            }
            let dst = std::slice::from_raw_parts_mut(buf, cap.min(fs.len()));
            dst.copy_from_slice(&fs[..dst.len()]);
        }
        Ok(())
    })
}

/// Map given by a row-major matrix: row i is the image of generator i of `source`.
///
/// # Safety
/// `entries` must hold ngens(source) × ngens(target) integers.
#[no_mangle]
pub unsafe extern "C" fn zp_morphism_new(
    source: *const ZpModule,
    target: *const ZpModule,
    entries: *const i64,
    result: *mut *mut ZpMorphism,
) -> i32 {
    guard(|| {
        let result = out(result, "result")?;
        let (s, t) = (&handle(source, "source")?.0, &handle(target, "target")?.0);
        let (r, c) = (s.ngens(), t.ngens());
        let flat = if r * c == 0 {
            &[][..]
        } else {
            if entries.is_null() {
                return Err(null("entries"));
            }
            std::slice::from_raw_parts(entries, r * c)
        };
        let rows = (0..r).map(|i| flat[i * c..(i + 1) * c].to_vec()).collect();
        let f = Morphism::from_rows(s.clone(), t.clone(), rows).map_err(lift)?;
        *result = Box::into_raw(Box::new(ZpMorphism(f)));
        Ok(())
    })
}

/// # Safety
/// `f` must be null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn zp_morphism_free(f: *mut ZpMorphism) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// New handle for the target module of `f`.
///
/// # Safety
/// `f` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn zp_morphism_target(f: *const ZpMorphism, result: *mut *mut ZpModule) -> i32 {
    guard(|| {
        let t = handle(f, "morphism")?.0.target().clone();
        *out(result, "result")? = Box::into_raw(Box::new(ZpModule(t)));
        Ok(())
    })
}

/// Copies the matrix (row-major) into `buf` when it has room; `len` receives its size.
///
/// # Safety
/// `buf` must have room for `cap` integers.
#[no_mangle]
pub unsafe extern "C" fn zp_morphism_matrix(f: *const ZpMorphism, buf: *mut i64, cap: usize, len: *mut usize) -> i32 {
    guard(|| {
        let e = handle(f, "morphism")?.0.matrix().entries();
        *out(len, "len")? = e.len();
        if cap > 0 {
            if buf.is_null() {
                return Err(null("buf"));
            }
            let dst = std::slice::from_raw_parts_mut(buf, cap.min(e.len()));
            dst.copy_from_slice(&e[..dst.len()]);
        }
        Ok(())
    })
}

fn structure(code: i32) -> Result<ExactStructure, (i32, String)> {
    match code {
        ZP_ABELIAN => Ok(ExactStructure::Abelian),
        ZP_PURE => Ok(ExactStructure::Pure),
        other => Err((ZP_INPUT, format!("unknown structure code {other}"))),
    }
}

/// Partial and partial-iso verdicts for `f` defined on the subobject `u`.
///
/// # Safety
/// `u` and `f` must be live handles; outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn zp_partial_check(
    u: *const ZpMorphism,
    f: *const ZpMorphism,
    structure_code: i32,
    is_partial: *mut bool,
    is_partial_iso: *mut bool,
) -> i32 {
    guard(|| {
        let pm = PartialMorphism::new(handle(u, "u")?.0.clone(), handle(f, "f")?.0.clone()).map_err(lift)?;
        let v = check_partial(&pm, &structure(structure_code)?).map_err(lift)?;
        *out(is_partial, "is_partial")? = v.is_partial;
        *out(is_partial_iso, "is_partial_iso")? = v.is_partial_iso;
        Ok(())
    })
}

/// Whether the monomorphism `i` is pure.
///
/// # Safety
/// `i` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn zp_is_pure(i: *const ZpMorphism, result: *mut bool) -> i32 {
    guard(|| {
        *out(result, "result")? = is_pure_mono(&handle(i, "i")?.0).map_err(lift)?.pure;
        Ok(())
    })
}

/// The injective hull M → E as a new morphism handle.
///
/// # Safety
/// `m` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn zp_injective_hull(m: *const ZpModule, result: *mut *mut ZpMorphism) -> i32 {
    guard(|| {
        let h = structural_injective_hull(&handle(m, "module")?.0).map_err(lift)?;
        *out(result, "result")? = Box::into_raw(Box::new(ZpMorphism(h.embedding)));
        Ok(())
    })
}

/// Parses and validates a workspace document.
///
/// # Safety
/// `json` must be a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn zp_workspace_load(json: *const c_char, result: *mut *mut ZpWorkspace) -> i32 {
    guard(|| {
        let ws = Workspace::from_json(text(json, "json")?).map_err(lift)?;
        *out(result, "result")? = Box::into_raw(Box::new(ZpWorkspace(ws)));
        Ok(())
    })
}

/// # Safety
/// `ws` must be null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn zp_workspace_free(ws: *mut ZpWorkspace) {
    if !ws.is_null() {
        drop(Box::from_raw(ws));
    }
}

/// Canonical JSON of the workspace; release with `zp_string_free`.
///
/// # Safety
/// `ws` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn zp_workspace_to_json(ws: *const ZpWorkspace, result: *mut *mut c_char) -> i32 {
    guard(|| {
        let s = handle(ws, "workspace")?.0.to_json();
        *out(result, "result")? = leak_string(s);
        Ok(())
    })
}

/// A named morphism of the workspace as a new handle.
///
/// # Safety
/// `ws` must be a live handle and `name` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn zp_workspace_morphism(
    ws: *const ZpWorkspace,
    name: *const c_char,
    result: *mut *mut ZpMorphism,
) -> i32 {
    guard(|| {
        let f = handle(ws, "workspace")?
            .0
            .morphism(text(name, "name")?)
            .map_err(lift)?
            .clone();
        *out(result, "result")? = Box::into_raw(Box::new(ZpMorphism(f)));
        Ok(())
    })
}

/// Runs one command line of the `zpartial` tool. `json` receives the printed
/// document (release with `zp_string_free`), `exit_code` the tool's exit code.
///
/// # Safety
/// `argv` must hold `argc` NUL-terminated strings.
#[no_mangle]
pub unsafe extern "C" fn zp_cli_run(
    argv: *const *const c_char,
    argc: usize,
    json: *mut *mut c_char,
    exit_code: *mut i32,
) -> i32 {
    guard(|| {
        let json = out(json, "json")?;
        let exit_code = out(exit_code, "exit_code")?;
        let mut args = vec!["zpartial".to_string()];
        if argc > 0 {
            if argv.is_null() {
                return Err(null("argv"));
            }
            for &a in std::slice::from_raw_parts(argv, argc) {
                args.push(text(a, "argument")?.to_string());
            }
        }
        let mut buf = Vec::new();
        *exit_code = zpartial_core::cli::run(args, &mut buf);
        *json = leak_string(String::from_utf8_lossy(&buf).into_owned());
        Ok(())
    })
}
