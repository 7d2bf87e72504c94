//! C ABI over the bcube-pef library.
//!
//! Fault sets are held behind the opaque [`BcpFaultSet`] handle. Every
//! fallible function returns a [`BcpStatus`]; on failure a thread-local
//! message is set and can be read with [`bcp_last_error_message`]. Paths and
//! path covers are returned as JSON strings in the same document formats the
//! `bcube` CLI emits; free them with [`bcp_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use bcube_pef::dpc::{self, EndpointQuad};
use bcube_pef::files::{DpcDoc, FaultFile, PathDoc};
use bcube_pef::hampath;
use bcube_pef::pef::{self, FaultSet};
use bcube_pef::topology::{Dims, Edge, NodeId};
use bcube_pef::Error;

/// Opaque fault-set handle; create with the `bcp_fault_set_*` constructors
/// and release with `bcp_fault_set_free`.
pub struct BcpFaultSet {
    set: FaultSet,
}

/// Result codes for every fallible function in this interface.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BcpStatus {
    /// Success.
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// Arguments describe an invalid topology, node, edge, or quadruple.
    InvalidArgument = 2,
    /// A node string or JSON document failed to parse.
    ParseError = 3,
    /// No Hamiltonian path was found.
    NoPath = 4,
    /// No paired 2-disjoint path cover was found.
    NoDpc = 5,
    /// Unexpected internal failure.
    Internal = 6,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(status: BcpStatus, msg: &str) -> BcpStatus {
    set_error(msg);
    status
}

fn status_of(err: &Error) -> BcpStatus {
    match err {
        Error::NoPath | Error::ExitPairNotFound | Error::EscapeNotFound | Error::BridgeNotFound => {
            BcpStatus::NoPath
        }
        Error::NoDpc => BcpStatus::NoDpc,
        Error::ParseNode(_) | Error::Json(_) => BcpStatus::ParseError,
        Error::Io(_) => BcpStatus::Internal,
        _ => BcpStatus::InvalidArgument,
    }
}

fn from_err(err: &Error) -> BcpStatus {
    fail(status_of(err), &err.to_string())
}

/// Run `body` with panics converted to `BcpStatus::Internal`.
fn guarded(body: impl FnOnce() -> BcpStatus) -> BcpStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(s) => s,
        Err(_) => fail(BcpStatus::Internal, "internal panic"),
    }
}

/// # Safety: `s` must be a valid NUL-terminated string or null.
unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, BcpStatus> {
    if s.is_null() {
        return Err(fail(BcpStatus::NullArgument, "null string argument"));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| fail(BcpStatus::ParseError, "string is not valid UTF-8"))
}

unsafe fn read_handle<'a>(fs: *const BcpFaultSet) -> Result<&'a FaultSet, BcpStatus> {
    if fs.is_null() {
        return Err(fail(BcpStatus::NullArgument, "null fault-set handle"));
    }
    Ok(&(*fs).set)
}

fn emit_handle(set: FaultSet, out: *mut *mut BcpFaultSet) -> BcpStatus {
    if out.is_null() {
        return fail(BcpStatus::NullArgument, "null output pointer");
    }
    unsafe { *out = Box::into_raw(Box::new(BcpFaultSet { set })) };
    BcpStatus::Ok
}

fn emit_string(s: String, out: *mut *mut c_char) -> BcpStatus {
    if out.is_null() {
        return fail(BcpStatus::NullArgument, "null output pointer");
    }
    match CString::new(s) {
        Ok(c) => {
            unsafe { *out = c.into_raw() };
            BcpStatus::Ok
        }
        Err(_) => fail(BcpStatus::Internal, "output contains a NUL byte"),
    }
}

fn parse_node(dims: Dims, s: &str) -> Result<NodeId, BcpStatus> {
    dims.parse_node(s).map_err(|e| from_err(&e))
}

/// Last error message for the current thread, or null if none has been set.
/// The pointer stays valid until the next failing call on this thread.
#[no_mangle]
pub extern "C" fn bcp_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Free a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must have been returned by a `bcp_*` function and not freed before.
#[no_mangle]
pub unsafe extern "C" fn bcp_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Create an empty fault set over BC(n, k).
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bcp_fault_set_new(n: u8, k: u8, out: *mut *mut BcpFaultSet) -> BcpStatus {
    guarded(|| match Dims::new(n, k) {
        Ok(dims) => emit_handle(FaultSet::empty(dims), out),
        Err(e) => from_err(&e),
    })
}

/// Generate a random fault set within the per-dimension budgets. `fill` in
/// [0, 1] scales each budget; the draw is deterministic in `seed`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bcp_fault_set_generate(
    n: u8,
    k: u8,
    fill: f64,
    seed: u64,
    out: *mut *mut BcpFaultSet,
) -> BcpStatus {
    guarded(|| {
        let dims = match Dims::new(n, k) {
            Ok(d) => d,
            Err(e) => return from_err(&e),
        };
        match pef::gen_random_pef(dims, fill, seed) {
            Ok(set) => emit_handle(set, out),
            Err(e) => from_err(&e),
        }
    })
}

/// Parse a fault set from its JSON document form
/// `{"n": .., "k": .., "edges": [["u", "v"], ..]}`.
///
/// # Safety
/// `json` must be a valid NUL-terminated string; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bcp_fault_set_from_json(
    json: *const c_char,
    out: *mut *mut BcpFaultSet,
) -> BcpStatus {
    guarded(|| {
        let text = match read_str(json) {
            Ok(t) => t,
            Err(s) => return s,
        };
        let file: FaultFile = match serde_json::from_str(text) {
            Ok(f) => f,
            Err(e) => return fail(BcpStatus::ParseError, &e.to_string()),
        };
        match file.to_fault_set() {
            Ok(set) => emit_handle(set, out),
            Err(e) => from_err(&e),
        }
    })
}

/// Serialize a fault set to its JSON document form.
///
/// # Safety
/// `fs` must be a live handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bcp_fault_set_to_json(
    fs: *const BcpFaultSet,
    out: *mut *mut c_char,
) -> BcpStatus {
    guarded(|| {
        let set = match read_handle(fs) {
            Ok(s) => s,
            Err(s) => return s,
        };
        match serde_json::to_string(&FaultFile::from_fault_set(set)) {
            Ok(text) => emit_string(text, out),
            Err(e) => fail(BcpStatus::Internal, &e.to_string()),
        }
    })
}

/// Add the faulty edge (a, b), given as digit-string node names.
///
/// # Safety
/// `fs` must be a live handle; `a` and `b` valid NUL-terminated strings.
#[no_mangle]
pub unsafe extern "C" fn bcp_fault_set_add(
    fs: *mut BcpFaultSet,
    a: *const c_char,
    b: *const c_char,
) -> BcpStatus {
    guarded(|| {
        if fs.is_null() {
            return fail(BcpStatus::NullArgument, "null fault-set handle");
        }
        let handle = &mut *fs;
        let dims = handle.set.dims();
        let (a, b) = match (read_str(a), read_str(b)) {
            (Ok(a), Ok(b)) => (a, b),
            (Err(s), _) | (_, Err(s)) => return s,
        };
        let (u, v) = match (parse_node(dims, a), parse_node(dims, b)) {
            (Ok(u), Ok(v)) => (u, v),
            (Err(s), _) | (_, Err(s)) => return s,
        };
        let edge = match Edge::new(u, v) {
            Ok(e) => e,
            Err(e) => return from_err(&e),
        };
        let edges: Vec<Edge> = handle.set.iter().cloned().chain([edge]).collect();
        match FaultSet::new(dims, edges) {
            Ok(set) => {
                handle.set = set;
                BcpStatus::Ok
            }
            Err(e) => from_err(&e),
        }
    })
}

/// Number of faulty edges in the set, or 0 for a null handle.
///
/// # Safety
/// `fs` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn bcp_fault_set_len(fs: *const BcpFaultSet) -> usize {
    if fs.is_null() {
        0
    } else {
        (*fs).set.len()
    }
}

/// Whether the fault set satisfies the partitioned-edge-fault budgets.
///
/// # Safety
/// `fs` must be a live handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bcp_fault_set_is_f_pef(
    fs: *const BcpFaultSet,
    out: *mut bool,
) -> BcpStatus {
    guarded(|| {
        let set = match read_handle(fs) {
            Ok(s) => s,
            Err(s) => return s,
        };
        if out.is_null() {
            return fail(BcpStatus::NullArgument, "null output pointer");
        }
        match pef::is_f_pef(set) {
            Ok(v) => {
                *out = v;
                BcpStatus::Ok
            }
            Err(e) => from_err(&e),
        }
    })
}

/// Release a fault-set handle. Null is ignored.
///
/// # Safety
/// `fs` must have been returned by a constructor and not freed before.
#[no_mangle]
pub unsafe extern "C" fn bcp_fault_set_free(fs: *mut BcpFaultSet) {
    if !fs.is_null() {
        drop(Box::from_raw(fs));
    }
}

/// Fault-avoiding Hamiltonian path from `s` to `t`. On success `*out_json`
/// holds a path document `{"n", "k", "nodes"}`.
///
/// # Safety
/// `fs` must be a live handle; `s`, `t` valid strings; `out_json` a valid
/// pointer.
#[no_mangle]
pub unsafe extern "C" fn bcp_ham_path(
    fs: *const BcpFaultSet,
    s: *const c_char,
    t: *const c_char,
    out_json: *mut *mut c_char,
) -> BcpStatus {
    guarded(|| {
        let set = match read_handle(fs) {
            Ok(v) => v,
            Err(st) => return st,
        };
        let dims = set.dims();
        let (s, t) = match (read_str(s), read_str(t)) {
            (Ok(a), Ok(b)) => (a, b),
            (Err(st), _) | (_, Err(st)) => return st,
        };
        let (s, t) = match (parse_node(dims, s), parse_node(dims, t)) {
            (Ok(a), Ok(b)) => (a, b),
            (Err(st), _) | (_, Err(st)) => return st,
        };
        match hampath::ham_path_bcube(dims, set, &s, &t) {
            Ok(p) => match serde_json::to_string(&PathDoc::new(dims, &p)) {
                Ok(text) => emit_string(text, out_json),
                Err(e) => fail(BcpStatus::Internal, &e.to_string()),
            },
            Err(e) => from_err(&e),
        }
    })
}

/// Fault-avoiding paired 2-disjoint path cover for (s1, t1, s2, t2). On
/// success `*out_json` holds a cover document `{"n", "k", "p1", "p2",
/// "case_trace"}`.
///
/// # Safety
/// `fs` must be a live handle; endpoint arguments valid strings; `out_json`
/// a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bcp_dpc(
    fs: *const BcpFaultSet,
    s1: *const c_char,
    t1: *const c_char,
    s2: *const c_char,
    t2: *const c_char,
    out_json: *mut *mut c_char,
) -> BcpStatus {
    guarded(|| {
        let set = match read_handle(fs) {
            Ok(v) => v,
            Err(st) => return st,
        };
        let dims = set.dims();
        let mut nodes = Vec::with_capacity(4);
        for raw in [s1, t1, s2, t2] {
            let text = match read_str(raw) {
                Ok(t) => t,
                Err(st) => return st,
            };
            match parse_node(dims, text) {
                Ok(u) => nodes.push(u),
                Err(st) => return st,
            }
        }
        let q = match EndpointQuad::new(
            nodes[0].clone(),
            nodes[1].clone(),
            nodes[2].clone(),
            nodes[3].clone(),
        ) {
            Ok(q) => q,
            Err(e) => return from_err(&e),
        };
        match dpc::dpc_bcube_traced(dims, set, &q) {
            Ok((d, trace)) => match serde_json::to_string(&DpcDoc::new(dims, &d, trace)) {
                Ok(text) => emit_string(text, out_json),
                Err(e) => fail(BcpStatus::Internal, &e.to_string()),
            },
            Err(e) => from_err(&e),
        }
    })
}
