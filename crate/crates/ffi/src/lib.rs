//! C ABI over `spectral-forge`.
//!
//! Graphs cross the boundary as opaque `SgfGraph` handles owned by the
//! caller and released with [`sgf_graph_free`]. Every fallible call returns
//! an [`SgfStatus`]; on failure a description is available from
//! [`sgf_last_error_message`] on the same thread. Strings returned by the
//! library are released with [`sgf_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use spectral_forge::eval::{compare, dv_attack, AttackConfig};
use spectral_forge::{
    load_edge_list, louvain_maximize, normalized_entropy, write_edge_list, Alpha, Error, Forge, Graph,
    NormalizationRule, Transformation,
};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SgfStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    InvalidArgument = 4,
    /// The input has no edges or the rule's range collapsed.
    Degenerate = 5,
    Infeasible = 6,
    /// A panic was caught at the boundary.
    Internal = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SgfRule {
    Truncate = 0,
    Logistic = 1,
    Scale = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SgfTransformation {
    Modularity = 0,
    Adjacency = 1,
}

/// Generation settings. `logistic_k` is only read by the logistic rule.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct SgfParams {
    pub alpha: f64,
    pub rule: SgfRule,
    pub logistic_k: f64,
    pub transformation: SgfTransformation,
    pub seed: u64,
}

/// Output-versus-input comparison. Undefined values are NaN.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct SgfMetrics {
    pub modularity_ratio: f64,
    pub partition_number_ratio: f64,
    pub clustering_ratio: f64,
    pub degree_correlation: f64,
}

/// Opaque graph handle.
pub struct SgfGraph(Graph);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).expect("interior nul bytes were replaced");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn status_of(err: &Error) -> SgfStatus {
    match err {
        Error::Parse { .. } | Error::SelfLoop { .. } | Error::DuplicateAttributeRow { .. } | Error::Csv(_) => {
            SgfStatus::ParseError
        }
        Error::EmptyGraph | Error::DegenerateRange(_) => SgfStatus::Degenerate,
        Error::Infeasible(_) | Error::TooLarge { .. } => SgfStatus::Infeasible,
        Error::Io(_) => SgfStatus::Internal,
        _ => SgfStatus::InvalidArgument,
    }
}

/// Runs `body`, converting errors and panics into a status code.
fn guard(body: impl FnOnce() -> Result<(), (SgfStatus, String)>) -> SgfStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => SgfStatus::Ok,
        Ok(Err((status, message))) => {
            set_error(message);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            SgfStatus::Internal
        }
    }
}

fn core(err: Error) -> (SgfStatus, String) {
    (status_of(&err), err.to_string())
}

fn null(what: &str) -> (SgfStatus, String) {
    (SgfStatus::NullPointer, format!("{what} is null"))
}

unsafe fn graph_ref<'a>(g: *const SgfGraph, what: &str) -> Result<&'a Graph, (SgfStatus, String)> {
    g.as_ref().map(|g| &g.0).ok_or_else(|| null(what))
}

unsafe fn write_out<T>(out: *mut T, value: T, what: &str) -> Result<(), (SgfStatus, String)> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

unsafe fn emit_graph(out: *mut *mut SgfGraph, graph: Graph) -> Result<(), (SgfStatus, String)> {
    if out.is_null() {
        return Err(null("out"));
    }
    out.write(Box::into_raw(Box::new(SgfGraph(graph))));
    Ok(())
}

fn forge_settings(params: &SgfParams) -> Result<(Alpha, NormalizationRule, Transformation), (SgfStatus, String)> {
    let alpha = Alpha::new(params.alpha).map_err(core)?;
    let rule = match params.rule {
        SgfRule::Truncate => NormalizationRule::Truncate,
        SgfRule::Scale => NormalizationRule::Scale,
        SgfRule::Logistic => NormalizationRule::logistic(params.logistic_k).map_err(core)?,
    };
    let transformation = match params.transformation {
        SgfTransformation::Modularity => Transformation::Modularity,
        SgfTransformation::Adjacency => Transformation::Adjacency,
    };
    Ok((alpha, rule, transformation))
}

/// Description of the last failure on this thread, or NULL. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn sgf_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Default generation settings: alpha 0.9, truncate, k = 6, modularity, seed 0.
#[no_mangle]
pub extern "C" fn sgf_params_default() -> SgfParams {
    SgfParams {
        alpha: 0.9,
        rule: SgfRule::Truncate,
        logistic_k: spectral_forge::DEFAULT_LOGISTIC_K,
        transformation: SgfTransformation::Modularity,
        seed: 0,
    }
}

/// Parses an edge list (`#nodes N` directive optional, one `i j` pair per line).
///
/// # Safety
/// `text` must be a nul-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn sgf_graph_from_edge_list(text: *const c_char, out: *mut *mut SgfGraph) -> SgfStatus {
    guard(|| {
        if text.is_null() {
            return Err(null("text"));
        }
        let text = CStr::from_ptr(text)
            .to_str()
            .map_err(|e| (SgfStatus::InvalidUtf8, e.to_string()))?;
        let graph = load_edge_list(text).map_err(core)?;
        emit_graph(out, graph)
    })
}

/// Builds a graph on `n` nodes from `edge_count` pairs stored flat in `edges`
/// (`edges[2k]`, `edges[2k + 1]`). Duplicate pairs are ignored.
///
/// # Safety
/// `edges` must point to `2 * edge_count` readable values (or be NULL when
/// `edge_count` is 0) and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sgf_graph_from_edges(
    n: usize,
    edges: *const usize,
    edge_count: usize,
    out: *mut *mut SgfGraph,
) -> SgfStatus {
    guard(|| {
        let flat: &[usize] = if edge_count == 0 {
            &[]
        } else if edges.is_null() {
            return Err(null("edges"));
        } else {
            std::slice::from_raw_parts(edges, 2 * edge_count)
        };
        let graph = Graph::from_edges(n, flat.chunks_exact(2).map(|p| (p[0], p[1]))).map_err(core)?;
        emit_graph(out, graph)
    })
}

/// Releases a graph. NULL is ignored.
///
/// # Safety
/// `graph` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn sgf_graph_free(graph: *mut SgfGraph) {
    if !graph.is_null() {
        drop(Box::from_raw(graph));
    }
}

/// Node count, or 0 for NULL.
///
/// # Safety
/// `graph` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sgf_graph_node_count(graph: *const SgfGraph) -> usize {
    graph.as_ref().map_or(0, |g| g.0.node_count())
}

/// Edge count, or 0 for NULL.
///
/// # Safety
/// `graph` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sgf_graph_edge_count(graph: *const SgfGraph) -> usize {
    graph.as_ref().map_or(0, |g| g.0.edge_count())
}

/// Copies the edges `i < j` in lexicographic order into `buffer` as flat
/// pairs. `capacity` counts pairs; `written` receives the pairs copied.
///
/// # Safety
/// `buffer` must hold `2 * capacity` writable values; `written` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sgf_graph_edges(
    graph: *const SgfGraph,
    buffer: *mut usize,
    capacity: usize,
    written: *mut usize,
) -> SgfStatus {
    guard(|| {
        let g = graph_ref(graph, "graph")?;
        if capacity > 0 && buffer.is_null() {
            return Err(null("buffer"));
        }
        let mut count = 0;
        for (i, j) in g.edges().take(capacity) {
            buffer.add(2 * count).write(i);
            buffer.add(2 * count + 1).write(j);
            count += 1;
        }
        write_out(written, count, "written")
    })
}

/// Serializes a graph as an edge list. Release the string with [`sgf_string_free`].
///
/// # Safety
/// `graph` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sgf_graph_to_edge_list(graph: *const SgfGraph, out: *mut *mut c_char) -> SgfStatus {
    guard(|| {
        let g = graph_ref(graph, "graph")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let text = CString::new(write_edge_list(g)).expect("edge lists contain no nul bytes");
        out.write(text.into_raw());
        Ok(())
    })
}

/// Releases a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn sgf_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Draws one synthetic graph from `input`.
///
/// # Safety
/// `input` and `params` must be valid; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sgf_generate(
    input: *const SgfGraph,
    params: *const SgfParams,
    out: *mut *mut SgfGraph,
) -> SgfStatus {
    guard(|| {
        let g = graph_ref(input, "input")?;
        let params = params.as_ref().ok_or_else(|| null("params"))?;
        let (alpha, rule, transformation) = forge_settings(params)?;
        let forge = Forge::new(g, transformation).map_err(core)?;
        let generated = forge.sample(alpha, rule, params.seed).map_err(core)?;
        emit_graph(out, generated)
    })
}

/// Normalized entropy of the edge-probability matrix `generate` samples from.
///
/// # Safety
/// `input` and `params` must be valid; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sgf_expected_entropy(
    input: *const SgfGraph,
    params: *const SgfParams,
    out: *mut f64,
) -> SgfStatus {
    guard(|| {
        let g = graph_ref(input, "input")?;
        let params = params.as_ref().ok_or_else(|| null("params"))?;
        let (alpha, rule, transformation) = forge_settings(params)?;
        let p = Forge::new(g, transformation)
            .and_then(|f| f.expected(alpha, rule))
            .map_err(core)?;
        write_out(out, normalized_entropy(&p).normalized, "out")
    })
}

/// Louvain modularity maximum and its community count.
///
/// # Safety
/// `graph` must be a live handle; `q` and `communities` writable.
#[no_mangle]
pub unsafe extern "C" fn sgf_modularity_max(
    graph: *const SgfGraph,
    seed: u64,
    q: *mut f64,
    communities: *mut usize,
) -> SgfStatus {
    guard(|| {
        let g = graph_ref(graph, "graph")?;
        let (partition, best) = louvain_maximize(g, seed).map_err(core)?;
        write_out(q, best, "q")?;
        write_out(communities, partition.community_count(), "communities")
    })
}

/// Compares `output` against `input`, aligned by node index.
///
/// # Safety
/// Both handles must be live; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sgf_compare(
    input: *const SgfGraph,
    output: *const SgfGraph,
    seed: u64,
    out: *mut SgfMetrics,
) -> SgfStatus {
    guard(|| {
        let a = graph_ref(input, "input")?;
        let b = graph_ref(output, "output")?;
        let r = compare(a, b, seed).map_err(core)?;
        let nan = |v: Option<f64>| v.unwrap_or(f64::NAN);
        let metrics = SgfMetrics {
            modularity_ratio: nan(r.modularity_ratio),
            partition_number_ratio: nan(r.partition_number_ratio),
            clustering_ratio: nan(r.clustering_ratio),
            degree_correlation: nan(r.degree_correlation),
        };
        write_out(out, metrics, "out")
    })
}

/// Fraction of non-seed nodes the distance-vector attack maps correctly.
///
/// # Safety
/// Both handles must be live; `rate` writable.
#[no_mangle]
pub unsafe extern "C" fn sgf_dv_attack(
    original: *const SgfGraph,
    anonymized: *const SgfGraph,
    seed_fraction: f64,
    seed: u64,
    rate: *mut f64,
) -> SgfStatus {
    guard(|| {
        let a = graph_ref(original, "original")?;
        let b = graph_ref(anonymized, "anonymized")?;
        let config = AttackConfig {
            seed_fraction,
            rng_seed: seed,
        };
        write_out(rate, dv_attack(a, b, &config).map_err(core)?, "rate")
    })
}
