//! C interface to `fvs-core`.
//!
//! Objects are opaque handles created and destroyed through this API. Every
//! fallible function returns an [`FvsStatus`]; on anything other than
//! `FVS_STATUS_OK` or `FVS_STATUS_NO`, [`fvs_last_error`] describes the
//! problem. Vertex ids are 0-based. Strings returned by the library must be
//! released with [`fvs_string_free`].

use std::cell::RefCell;
use std::collections::BTreeSet;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use fvs_core::instances;
use fvs_core::measure::MeasureParams;
use fvs_core::oracle::{brute_force_min_fvs, OracleError};
use fvs_core::reduction::Instance;
use fvs_core::solver::{self, PruneMode, SearchStats, SolverConfig};
use fvs_core::verifier;
use fvs_core::{MultiGraph, Vertex};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FvsStatus {
    Ok = 0,
    /// The instance has no solution within the requested budget.
    No = 1,
    NullPointer = 2,
    InvalidArgument = 3,
    Parse = 4,
    TooLarge = 5,
    Panic = 6,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FvsPrune {
    Off = 0,
    Weak = 1,
    Strong = 2,
}

/// A multigraph together with its set of undeletable vertices.
pub struct FvsGraph {
    graph: MultiGraph,
    undeletable: BTreeSet<Vertex>,
}

pub struct FvsSolution {
    vertices: Vec<Vertex>,
    stats: SearchStats,
}

pub struct FvsParams {
    params: MeasureParams,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: impl Into<String>) {
    let message = message.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(message).unwrap_or_default());
}

type Outcome = Result<FvsStatus, (FvsStatus, String)>;

fn guard(body: impl FnOnce() -> Outcome) -> FvsStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(status)) => status,
        Ok(Err((status, message))) => {
            set_error(message);
            status
        }
        Err(_) => {
            set_error("internal panic");
            FvsStatus::Panic
        }
    }
}

fn invalid(message: impl ToString) -> (FvsStatus, String) {
    (FvsStatus::InvalidArgument, message.to_string())
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, (FvsStatus, String)> {
    // SAFETY: the caller guarantees `p` is null or a live handle from this library.
    unsafe { p.as_ref() }.ok_or_else(|| (FvsStatus::NullPointer, format!("{what} is null")))
}

unsafe fn deref_mut<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, (FvsStatus, String)> {
    // SAFETY: as for `deref`, with exclusive access.
    unsafe { p.as_mut() }.ok_or_else(|| (FvsStatus::NullPointer, format!("{what} is null")))
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, (FvsStatus, String)> {
    if p.is_null() {
        return Err((FvsStatus::NullPointer, format!("{what} is null")));
    }
    // SAFETY: non-null and NUL-terminated per the API contract.
    unsafe { CStr::from_ptr(p) }
        .to_str()
        .map_err(|_| invalid(format!("{what} is not UTF-8")))
}

unsafe fn store<T>(out: *mut *mut T, value: T) -> Result<(), (FvsStatus, String)> {
    if out.is_null() {
        return Err((FvsStatus::NullPointer, "output pointer is null".into()));
    }
    // SAFETY: `out` is non-null and writable per the API contract.
    unsafe { *out = Box::into_raw(Box::new(value)) };
    Ok(())
}

/// Message for the most recent failure on this thread. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn fvs_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fvs_string_free(s: *mut c_char) {
    if !s.is_null() {
        // SAFETY: produced by `CString::into_raw` in this library.
        drop(unsafe { CString::from_raw(s) });
    }
}

/// A graph with vertices `0..n` and no edges, or null if `n` is too large.
#[no_mangle]
pub extern "C" fn fvs_graph_new(n: u32) -> *mut FvsGraph {
    if n == u32::MAX {
        set_error("vertex count too large");
        return ptr::null_mut();
    }
    Box::into_raw(Box::new(FvsGraph {
        graph: MultiGraph::with_vertices(n),
        undeletable: BTreeSet::new(),
    }))
}

/// Parses the text graph format (`p fvs n m`, `e u v`, `f v`, 1-based ids).
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn fvs_graph_parse(
    text: *const c_char,
    out: *mut *mut FvsGraph,
) -> FvsStatus {
    guard(|| {
        let text = unsafe { read_str(text, "text") }?;
        let file = instances::parse(text).map_err(|e| (FvsStatus::Parse, e.to_string()))?;
        unsafe {
            store(
                out,
                FvsGraph {
                    graph: file.graph,
                    undeletable: file.undeletable,
                },
            )
        }?;
        Ok(FvsStatus::Ok)
    })
}

/// # Safety
/// `g` must be null or a graph handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fvs_graph_free(g: *mut FvsGraph) {
    if !g.is_null() {
        // SAFETY: produced by `Box::into_raw` in this library.
        drop(unsafe { Box::from_raw(g) });
    }
}

/// Adds one copy of edge `{u, v}`; `u == v` adds a self-loop.
///
/// # Safety
/// `g` must be a live graph handle.
#[no_mangle]
pub unsafe extern "C" fn fvs_graph_add_edge(g: *mut FvsGraph, u: u32, v: u32) -> FvsStatus {
    guard(|| {
        let g = unsafe { deref_mut(g, "graph") }?;
        g.graph.add_edge(u, v).map_err(invalid)?;
        Ok(FvsStatus::Ok)
    })
}

/// Marks `v` as undeletable.
///
/// # Safety
/// `g` must be a live graph handle.
#[no_mangle]
pub unsafe extern "C" fn fvs_graph_set_undeletable(g: *mut FvsGraph, v: u32) -> FvsStatus {
    guard(|| {
        let g = unsafe { deref_mut(g, "graph") }?;
        if !g.graph.contains(v) {
            return Err(invalid(format!("unknown vertex {v}")));
        }
        g.undeletable.insert(v);
        Ok(FvsStatus::Ok)
    })
}

/// # Safety
/// `g` must be a live graph handle.
#[no_mangle]
pub unsafe extern "C" fn fvs_graph_vertex_count(g: *const FvsGraph) -> usize {
    unsafe { g.as_ref() }.map_or(0, |g| g.graph.vertex_count())
}

/// # Safety
/// `g` must be a live graph handle.
#[no_mangle]
pub unsafe extern "C" fn fvs_graph_edge_count(g: *const FvsGraph) -> usize {
    unsafe { g.as_ref() }.map_or(0, |g| g.graph.edge_count())
}

fn config(prune: FvsPrune) -> SolverConfig {
    SolverConfig {
        prune: match prune {
            FvsPrune::Off => PruneMode::Off,
            FvsPrune::Weak => PruneMode::Weak,
            FvsPrune::Strong => PruneMode::Strong,
        },
        ..SolverConfig::default()
    }
}

fn finish(
    found: Option<solver::Solution>,
    stats: SearchStats,
    out: *mut *mut FvsSolution,
) -> Outcome {
    match found {
        Some(solution) => {
            let vertices = solution.vertices.into_iter().collect();
            unsafe { store(out, FvsSolution { vertices, stats }) }?;
            Ok(FvsStatus::Ok)
        }
        None => Ok(FvsStatus::No),
    }
}

/// Minimum solution avoiding the undeletable vertices. Returns `FVS_STATUS_NO` when
/// the undeletable vertices already contain a cycle; `*out` is then untouched.
///
/// # Safety
/// `g` must be a live graph handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn fvs_solve_minimum(
    g: *const FvsGraph,
    prune: FvsPrune,
    out: *mut *mut FvsSolution,
) -> FvsStatus {
    guard(|| {
        let g = unsafe { deref(g, "graph") }?;
        let (found, stats) =
            solver::solve_minimum(&g.graph, &g.undeletable, &config(prune)).map_err(invalid)?;
        finish(found, stats, out)
    })
}

/// A solution of size at most `k`, or `FVS_STATUS_NO` if none exists.
///
/// # Safety
/// `g` must be a live graph handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn fvs_solve_decision(
    g: *const FvsGraph,
    k: i64,
    prune: FvsPrune,
    out: *mut *mut FvsSolution,
) -> FvsStatus {
    guard(|| {
        let g = unsafe { deref(g, "graph") }?;
        let inst = Instance::new(g.graph.clone(), g.undeletable.clone(), k).map_err(invalid)?;
        let (found, stats) = solver::solve_decision(inst, &config(prune));
        finish(found, stats, out)
    })
}

/// Minimum solution by exhaustive enumeration; `FVS_STATUS_TOO_LARGE` above 24
/// deletable vertices.
///
/// # Safety
/// `g` must be a live graph handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn fvs_oracle_minimum(
    g: *const FvsGraph,
    out: *mut *mut FvsSolution,
) -> FvsStatus {
    guard(|| {
        let g = unsafe { deref(g, "graph") }?;
        let found = brute_force_min_fvs(&g.graph, &g.undeletable).map_err(|e| match e {
            OracleError::TooLarge(_) => (FvsStatus::TooLarge, e.to_string()),
        })?;
        finish(found, SearchStats::default(), out)
    })
}

/// # Safety
/// `s` must be a live solution handle.
#[no_mangle]
pub unsafe extern "C" fn fvs_solution_len(s: *const FvsSolution) -> usize {
    unsafe { s.as_ref() }.map_or(0, |s| s.vertices.len())
}

/// Copies up to `cap` vertex ids in ascending order into `buf` and returns
/// the solution size.
///
/// # Safety
/// `s` must be a live solution handle and `buf` valid for `cap` writes.
#[no_mangle]
pub unsafe extern "C" fn fvs_solution_vertices(
    s: *const FvsSolution,
    buf: *mut u32,
    cap: usize,
) -> usize {
    let Some(s) = (unsafe { s.as_ref() }) else {
        return 0;
    };
    if !buf.is_null() {
        let n = cap.min(s.vertices.len());
        // SAFETY: `buf` holds at least `cap >= n` elements.
        unsafe { ptr::copy_nonoverlapping(s.vertices.as_ptr(), buf, n) };
    }
    s.vertices.len()
}

/// Branch nodes visited by the search that produced `s`; 0 for oracle results.
///
/// # Safety
/// `s` must be a live solution handle.
#[no_mangle]
pub unsafe extern "C" fn fvs_solution_branch_nodes(s: *const FvsSolution) -> u64 {
    unsafe { s.as_ref() }.map_or(0, |s| s.stats.branch_nodes)
}

/// # Safety
/// `s` must be null or a solution handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fvs_solution_free(s: *mut FvsSolution) {
    if !s.is_null() {
        // SAFETY: produced by `Box::into_raw` in this library.
        drop(unsafe { Box::from_raw(s) });
    }
}

/// Measure parameters by preset name: `"mc"` or `"simple"`.
///
/// # Safety
/// `name` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn fvs_params_preset(
    name: *const c_char,
    out: *mut *mut FvsParams,
) -> FvsStatus {
    guard(|| {
        let name = unsafe { read_str(name, "name") }?;
        let params = MeasureParams::preset(name).map_err(invalid)?;
        unsafe { store(out, FvsParams { params }) }?;
        Ok(FvsStatus::Ok)
    })
}

/// Parameters from the text format (`alpha=`, `c=`, `beta <d> <value>`).
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn fvs_params_parse(
    text: *const c_char,
    out: *mut *mut FvsParams,
) -> FvsStatus {
    guard(|| {
        let text = unsafe { read_str(text, "text") }?;
        let params =
            MeasureParams::parse("custom", text).map_err(|e| (FvsStatus::Parse, e.to_string()))?;
        unsafe { store(out, FvsParams { params }) }?;
        Ok(FvsStatus::Ok)
    })
}

/// # Safety
/// `p` must be null or a parameter handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fvs_params_free(p: *mut FvsParams) {
    if !p.is_null() {
        // SAFETY: produced by `Box::into_raw` in this library.
        drop(unsafe { Box::from_raw(p) });
    }
}

/// Runs every certificate check. `*passed` receives the overall verdict; if
/// `report_json` is non-null it receives the full report as JSON, to be
/// released with [`fvs_string_free`].
///
/// # Safety
/// `p` must be a live parameter handle, `passed` writable, and `report_json`
/// null or writable.
#[no_mangle]
pub unsafe extern "C" fn fvs_verify(
    p: *const FvsParams,
    passed: *mut bool,
    report_json: *mut *mut c_char,
) -> FvsStatus {
    guard(|| {
        let p = unsafe { deref(p, "params") }?;
        let passed = unsafe { deref_mut(passed, "passed") }?;
        let report = verifier::verify_all(&p.params);
        *passed = report.passed;
        if !report_json.is_null() {
            let text = serde_json::to_string(&report).map_err(invalid)?;
            let text = CString::new(text).map_err(invalid)?;
            // SAFETY: non-null and writable per the API contract.
            unsafe { *report_json = text.into_raw() };
        }
        Ok(FvsStatus::Ok)
    })
}
