//! C ABI over `hcplace`.
//!
//! Graphs and solve results are opaque heap handles owned by the caller and
//! released with the matching `*_free`. Every fallible call returns an
//! [`HcpStatus`]; on failure the reason is available from
//! [`hcp_last_error_message`] on the same thread. Placements cross the boundary
//! as `uint8_t` arrays with one 0/1 entry per service.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use hcplace::exact::{exact_solve, exact_solve_bnb, SolveResult};
use hcplace::instances::read_graph;
use hcplace::metaheuristics::{bpso_solve, ga_solve, greedy_solve, BpsoConfig, GaConfig};
use hcplace::model::{CostBreakdown, CostParams, Placement, SbaGraph};
use hcplace::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HcpStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidInput = 2,
    InstanceTooLarge = 3,
    Infeasible = 4,
    Io = 5,
    Parse = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HcpSolver {
    Exact = 0,
    ExactBnb = 1,
    Bpso = 2,
    Ga = 3,
    Greedy = 4,
}

/// Pricing coefficients and offload threshold, in hosting units.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct HcpParams {
    pub alpha: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub hq: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct HcpCost {
    pub hosting: f64,
    pub public_comm: f64,
    pub hybrid_comm: f64,
    pub total: f64,
}

/// Opaque service graph.
pub struct HcpGraph {
    graph: SbaGraph,
}

/// Opaque solver outcome.
pub struct HcpResult {
    result: SolveResult,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: String) {
    let message = CString::new(message.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(message));
}

fn status_of(error: &Error) -> HcpStatus {
    match error {
        Error::InvalidInput(_) | Error::Validation(_) => HcpStatus::InvalidInput,
        Error::InstanceTooLarge { .. } => HcpStatus::InstanceTooLarge,
        Error::Infeasible { .. } => HcpStatus::Infeasible,
        Error::Io { .. } | Error::Csv { .. } => HcpStatus::Io,
        Error::Parse { .. } => HcpStatus::Parse,
    }
}

struct Failure(HcpStatus, String);

impl From<Error> for Failure {
    fn from(error: Error) -> Self {
        Failure(status_of(&error), error.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(HcpStatus::NullPointer, format!("{what} is null"))
}

/// Runs `body`, converting errors and panics into a status plus last-error message.
fn guard(body: impl FnOnce() -> Result<(), Failure>) -> HcpStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => HcpStatus::Ok,
        Ok(Err(Failure(status, message))) => {
            set_last_error(message);
            status
        }
        Err(panic) => {
            let message = panic
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "unknown panic".to_string());
            set_last_error(format!("internal panic: {message}"));
            HcpStatus::Panic
        }
    }
}

unsafe fn slice<'a, T>(data: *const T, len: usize, what: &str) -> Result<&'a [T], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if data.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(data, len))
}

unsafe fn graph_ref<'a>(graph: *const HcpGraph) -> Result<&'a SbaGraph, Failure> {
    graph
        .as_ref()
        .map(|g| &g.graph)
        .ok_or_else(|| null("graph"))
}

unsafe fn result_ref<'a>(result: *const HcpResult) -> Result<&'a SolveResult, Failure> {
    result
        .as_ref()
        .map(|r| &r.result)
        .ok_or_else(|| null("result"))
}

unsafe fn params_from(params: *const HcpParams) -> Result<CostParams, Failure> {
    let p = params.as_ref().ok_or_else(|| null("params"))?;
    Ok(CostParams::new(p.alpha, p.beta1, p.beta2, p.hq)?)
}

unsafe fn placement_from(bits: *const u8, len: usize) -> Result<Placement, Failure> {
    Ok(Placement::from_bits(slice(bits, len, "placement")?)?)
}

fn cost_from(b: &CostBreakdown) -> HcpCost {
    HcpCost {
        hosting: b.hosting,
        public_comm: b.public_comm,
        hybrid_comm: b.hybrid_comm,
        total: b.total,
    }
}

unsafe fn write_out<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

/// Message for the most recent failure on this thread, or NULL if none.
/// The pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn hcp_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |m| m.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn hcp_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Builds a graph from `n_nodes` hosting values and `n_edges` edges given as
/// parallel arrays of endpoints and rates.
///
/// # Safety
/// Every non-null array must hold at least the stated number of elements, and
/// `out` must be valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn hcp_graph_new(
    hosting: *const f64,
    n_nodes: usize,
    edge_a: *const usize,
    edge_b: *const usize,
    rates: *const f64,
    n_edges: usize,
    out: *mut *mut HcpGraph,
) -> HcpStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let hosting = slice(hosting, n_nodes, "hosting")?;
        let a = slice(edge_a, n_edges, "edge_a")?;
        let b = slice(edge_b, n_edges, "edge_b")?;
        let rates = slice(rates, n_edges, "rates")?;
        let edges: Vec<(usize, usize, f64)> =
            (0..n_edges).map(|i| (a[i], b[i], rates[i])).collect();
        let graph = SbaGraph::from_parts(hosting, &edges)?;
        out.write(Box::into_raw(Box::new(HcpGraph { graph })));
        Ok(())
    })
}

/// Reads a graph file (JSON or edge list).
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn hcp_graph_from_file(
    path: *const c_char,
    out: *mut *mut HcpGraph,
) -> HcpStatus {
    guard(|| {
        if path.is_null() {
            return Err(null("path"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let path = CStr::from_ptr(path).to_str().map_err(|_| {
            Failure(
                HcpStatus::InvalidInput,
                "path is not valid UTF-8".to_string(),
            )
        })?;
        let graph = read_graph(path)?;
        out.write(Box::into_raw(Box::new(HcpGraph { graph })));
        Ok(())
    })
}

/// Releases a graph. NULL is ignored.
///
/// # Safety
/// `graph` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn hcp_graph_free(graph: *mut HcpGraph) {
    if !graph.is_null() {
        drop(Box::from_raw(graph));
    }
}

/// Node count, or 0 for NULL.
///
/// # Safety
/// `graph` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn hcp_graph_node_count(graph: *const HcpGraph) -> usize {
    graph.as_ref().map_or(0, |g| g.graph.node_count())
}

/// Edge count, or 0 for NULL.
///
/// # Safety
/// `graph` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn hcp_graph_edge_count(graph: *const HcpGraph) -> usize {
    graph.as_ref().map_or(0, |g| g.graph.edge_count())
}

/// Sum of hosting units, or 0 for NULL.
///
/// # Safety
/// `graph` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn hcp_graph_total_hosting(graph: *const HcpGraph) -> f64 {
    graph.as_ref().map_or(0.0, |g| g.graph.total_hosting())
}

/// Cost breakdown of `placement` (length `len`, which must equal the node count).
///
/// # Safety
/// Pointers must be live and `placement` must hold `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn hcp_evaluate_cost(
    graph: *const HcpGraph,
    params: *const HcpParams,
    placement: *const u8,
    len: usize,
    out: *mut HcpCost,
) -> HcpStatus {
    guard(|| {
        let graph = graph_ref(graph)?;
        let params = params_from(params)?;
        let placement = placement_from(placement, len)?;
        let cost = hcplace::evaluate_cost(graph, &placement, &params)?;
        write_out(out, cost_from(&cost), "out")
    })
}

/// Whether `placement` offloads at least `params->hq` hosting units.
///
/// # Safety
/// Pointers must be live and `placement` must hold `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn hcp_is_feasible(
    graph: *const HcpGraph,
    params: *const HcpParams,
    placement: *const u8,
    len: usize,
    out: *mut bool,
) -> HcpStatus {
    guard(|| {
        let graph = graph_ref(graph)?;
        let params = params_from(params)?;
        let placement = placement_from(placement, len)?;
        let feasible = hcplace::is_feasible(graph, &placement, &params)?;
        write_out(out, feasible, "out")
    })
}

/// Solves with the chosen solver using its default configuration. `seed` is
/// ignored by the deterministic solvers.
///
/// # Safety
/// Pointers must be live and `out` valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn hcp_solve(
    graph: *const HcpGraph,
    params: *const HcpParams,
    solver: HcpSolver,
    seed: u64,
    out: *mut *mut HcpResult,
) -> HcpStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let graph = graph_ref(graph)?;
        let params = params_from(params)?;
        let result = match solver {
            HcpSolver::Exact => exact_solve(graph, &params)?,
            HcpSolver::ExactBnb => exact_solve_bnb(graph, &params)?,
            HcpSolver::Bpso => bpso_solve(graph, &params, &BpsoConfig::default().with_seed(seed))?,
            HcpSolver::Ga => ga_solve(graph, &params, &GaConfig::default().with_seed(seed))?,
            HcpSolver::Greedy => greedy_solve(graph, &params)?,
        };
        out.write(Box::into_raw(Box::new(HcpResult { result })));
        Ok(())
    })
}

/// Releases a result. NULL is ignored.
///
/// # Safety
/// `result` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn hcp_result_free(result: *mut HcpResult) {
    if !result.is_null() {
        drop(Box::from_raw(result));
    }
}

/// # Safety
/// `result` must be live and `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn hcp_result_cost(result: *const HcpResult, out: *mut HcpCost) -> HcpStatus {
    guard(|| write_out(out, cost_from(&result_ref(result)?.breakdown), "out"))
}

/// Copies the placement into `buf`, which must hold exactly the node count.
///
/// # Safety
/// `result` must be live and `buf` writable for `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn hcp_result_placement(
    result: *const HcpResult,
    buf: *mut u8,
    len: usize,
) -> HcpStatus {
    guard(|| {
        let result = result_ref(result)?;
        let bits = result.placement.to_u8();
        if len != bits.len() {
            return Err(Failure(
                HcpStatus::InvalidInput,
                format!(
                    "buffer holds {len} entries but the placement has {}",
                    bits.len()
                ),
            ));
        }
        if len > 0 && buf.is_null() {
            return Err(null("buf"));
        }
        ptr::copy_nonoverlapping(bits.as_ptr(), buf, len);
        Ok(())
    })
}

/// Placement length, or 0 for NULL.
///
/// # Safety
/// `result` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn hcp_result_node_count(result: *const HcpResult) -> usize {
    result.as_ref().map_or(0, |r| r.result.placement.len())
}

/// False for NULL and for results on infeasible instances.
///
/// # Safety
/// `result` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn hcp_result_feasible(result: *const HcpResult) -> bool {
    result.as_ref().is_some_and(|r| r.result.feasible)
}

/// Cost evaluations the solver performed, or 0 for NULL.
///
/// # Safety
/// `result` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn hcp_result_evaluations(result: *const HcpResult) -> u64 {
    result.as_ref().map_or(0, |r| r.result.evaluations)
}

/// Solve time in seconds, or 0 for NULL.
///
/// # Safety
/// `result` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn hcp_result_wall_time(result: *const HcpResult) -> f64 {
    result.as_ref().map_or(0.0, |r| r.result.wall_time)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn panics_become_status() {
        let status = guard(|| panic!("boom"));
        assert_eq!(status, HcpStatus::Panic);
        let msg = unsafe { CStr::from_ptr(hcp_last_error_message()) }
            .to_str()
            .unwrap();
        assert!(msg.contains("boom"));
    }

    #[test]
    fn error_kinds_map_to_codes() {
        assert_eq!(
            status_of(&Error::InstanceTooLarge {
                nodes: 40,
                limit: 30
            }),
            HcpStatus::InstanceTooLarge
        );
        assert_eq!(
            status_of(&Error::Infeasible {
                hq: 5.0,
                total_hosting: 1.0
            }),
            HcpStatus::Infeasible
        );
        assert_eq!(
            status_of(&Error::Validation("x".into())),
            HcpStatus::InvalidInput
        );
    }

    #[test]
    fn version_is_terminated() {
        let v = unsafe { CStr::from_ptr(hcp_version()) };
        assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
    }
}
