//! Simple undirected graphs, degree vectors, dense symmetric matrices and
//! the plain-text formats used to move graphs in and out of the toolkit.

use std::collections::{BTreeMap, VecDeque};
use std::fmt::Write as _;

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Category assigned to nodes that have no row in an attribute file.
pub const MISSING_CATEGORY: &str = "__missing__";

/// Absolute tolerance used when checking matrix symmetry.
pub const SYMMETRY_TOLERANCE: f64 = 1e-9;

/// Simple undirected graph on nodes `0..n` with optional categorical
/// node attributes.
///
/// Neighbour lists are kept sorted, so iteration order (and everything
/// seeded downstream of it) is deterministic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    neighbors: Vec<Vec<usize>>,
    edge_count: usize,
    attributes: BTreeMap<String, Vec<String>>,
}

impl Graph {
    /// Graph with `n` isolated nodes.
    pub fn empty(n: usize) -> Self {
        Self {
            neighbors: vec![Vec::new(); n],
            edge_count: 0,
            attributes: BTreeMap::new(),
        }
    }

    /// Builds a graph from an edge iterator. Duplicate and reversed
    /// duplicate pairs collapse to one edge.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut graph = Self::empty(n);
        for (i, j) in edges {
            graph.add_edge(i, j)?;
        }
        Ok(graph)
    }

    /// Inserts `{i, j}`. Returns `Ok(false)` if the edge was already present.
    pub fn add_edge(&mut self, i: usize, j: usize) -> Result<bool> {
        let n = self.node_count();
        for node in [i, j] {
            if node >= n {
                return Err(Error::NodeOutOfRange { node, n });
            }
        }
        if i == j {
            return Err(Error::SelfLoop { node: i, line: None });
        }
        match self.neighbors[i].binary_search(&j) {
            Ok(_) => Ok(false),
            Err(pos) => {
                self.neighbors[i].insert(pos, j);
                let pos = self.neighbors[j].binary_search(&i).unwrap_err();
                self.neighbors[j].insert(pos, i);
                self.edge_count += 1;
                Ok(true)
            }
        }
    }

    /// Removes `{i, j}`. Returns `false` if it was absent.
    pub fn remove_edge(&mut self, i: usize, j: usize) -> bool {
        if i >= self.node_count() || j >= self.node_count() {
            return false;
        }
        match self.neighbors[i].binary_search(&j) {
            Ok(pos) => {
                self.neighbors[i].remove(pos);
                let pos = self.neighbors[j].binary_search(&i).expect("adjacency out of sync");
                self.neighbors[j].remove(pos);
                self.edge_count -= 1;
                true
            }
            Err(_) => false,
        }
    }

    pub fn node_count(&self) -> usize {
        self.neighbors.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        i < self.node_count() && self.neighbors[i].binary_search(&j).is_ok()
    }

    /// Sorted neighbours of `node`.
    pub fn neighbors(&self, node: usize) -> &[usize] {
        &self.neighbors[node]
    }

    pub fn degree(&self, node: usize) -> usize {
        self.neighbors[node].len()
    }

    /// Edges as `(i, j)` with `i < j`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.neighbors
            .iter()
            .enumerate()
            .flat_map(|(i, row)| row.iter().copied().filter(move |&j| j > i).map(move |j| (i, j)))
    }

    pub fn attributes(&self) -> &BTreeMap<String, Vec<String>> {
        &self.attributes
    }

    /// Attaches a categorical attribute; `values` must have one entry per node.
    pub fn with_attribute(mut self, name: impl Into<String>, values: Vec<String>) -> Result<Self> {
        if values.len() != self.node_count() {
            return Err(Error::DimensionMismatch {
                expected: self.node_count(),
                found: values.len(),
            });
        }
        self.attributes.insert(name.into(), values);
        Ok(self)
    }

    /// Same topology with no attributes attached.
    pub fn without_attributes(&self) -> Self {
        Self {
            neighbors: self.neighbors.clone(),
            edge_count: self.edge_count,
            attributes: BTreeMap::new(),
        }
    }

    /// Copies `other`'s attributes onto this graph by node index.
    pub fn inherit_attributes(mut self, other: &Graph) -> Result<Self> {
        if other.node_count() != self.node_count() {
            return Err(Error::DimensionMismatch {
                expected: self.node_count(),
                found: other.node_count(),
            });
        }
        self.attributes = other.attributes.clone();
        Ok(self)
    }

    /// Dense 0/1 adjacency matrix (symmetric, zero diagonal).
    pub fn adjacency_matrix(&self) -> RealMatrix {
        let n = self.node_count();
        let mut m = DMatrix::zeros(n, n);
        for (i, j) in self.edges() {
            m[(i, j)] = 1.0;
            m[(j, i)] = 1.0;
        }
        RealMatrix(m)
    }

    /// Breadth-first hop distances from `source`; `None` marks unreachable nodes.
    pub fn bfs_distances(&self, source: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.node_count()];
        let mut queue = VecDeque::new();
        dist[source] = Some(0);
        queue.push_back(source);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap_or_default();
            for &v in &self.neighbors[u] {
                if dist[v].is_none() {
                    dist[v] = Some(du + 1);
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    /// Connected-component label per node, labels numbered by first appearance.
    pub fn connected_components(&self) -> Vec<usize> {
        let n = self.node_count();
        let mut label = vec![usize::MAX; n];
        let mut next = 0;
        for start in 0..n {
            if label[start] != usize::MAX {
                continue;
            }
            let mut stack = vec![start];
            label[start] = next;
            while let Some(u) = stack.pop() {
                for &v in &self.neighbors[u] {
                    if label[v] == usize::MAX {
                        label[v] = next;
                        stack.push(v);
                    }
                }
            }
            next += 1;
        }
        label
    }

    pub fn is_connected(&self) -> bool {
        self.node_count() == 0 || self.connected_components().iter().all(|&c| c == 0)
    }
}

/// Node degrees `k_i` and their sum `|K|`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeVector {
    degrees: Vec<usize>,
    total: usize,
}

impl DegreeVector {
    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    /// `|K|`, twice the edge count.
    pub fn total(&self) -> usize {
        self.total
    }

    pub fn len(&self) -> usize {
        self.degrees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.degrees.is_empty()
    }

    pub fn as_f64(&self) -> Vec<f64> {
        self.degrees.iter().map(|&k| k as f64).collect()
    }
}

pub fn degree_vector(graph: &Graph) -> DegreeVector {
    let degrees: Vec<usize> = (0..graph.node_count()).map(|i| graph.degree(i)).collect();
    let total = degrees.iter().sum();
    DegreeVector { degrees, total }
}

/// Mean local clustering coefficient. Nodes of degree below two contribute 0.
pub fn average_clustering(graph: &Graph) -> f64 {
    let n = graph.node_count();
    if n == 0 {
        return 0.0;
    }
    let total: f64 = (0..n).map(|i| local_clustering(graph, i)).sum();
    total / n as f64
}

pub fn local_clustering(graph: &Graph, node: usize) -> f64 {
    let nbrs = graph.neighbors(node);
    let d = nbrs.len();
    if d < 2 {
        return 0.0;
    }
    let mut closed = 0usize;
    for (a, &u) in nbrs.iter().enumerate() {
        // count neighbours of u among the later neighbours of `node`
        let rest = &nbrs[a + 1..];
        closed += count_sorted_intersection(graph.neighbors(u), rest);
    }
    closed as f64 / (d * (d - 1) / 2) as f64
}

fn count_sorted_intersection(a: &[usize], b: &[usize]) -> usize {
    let (mut i, mut j, mut count) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                count += 1;
                i += 1;
                j += 1;
            }
        }
    }
    count
}

/// Dense real symmetric matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct RealMatrix(pub(crate) DMatrix<f64>);

impl RealMatrix {
    /// Wraps `m` after checking it is square and symmetric within
    /// [`SYMMETRY_TOLERANCE`].
    pub fn new(m: DMatrix<f64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::DimensionMismatch {
                expected: m.nrows(),
                found: m.ncols(),
            });
        }
        let n = m.nrows();
        for i in 0..n {
            for j in (i + 1)..n {
                let diff = (m[(i, j)] - m[(j, i)]).abs();
                if diff > SYMMETRY_TOLERANCE || diff.is_nan() {
                    return Err(Error::NotSymmetric { row: i, col: j, diff });
                }
            }
        }
        Ok(Self(m))
    }

    /// Builds a matrix from the upper triangle of `f`, mirrored.
    pub fn from_symmetric_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let v = f(i, j);
                m[(i, j)] = v;
                m[(j, i)] = v;
            }
        }
        Self(m)
    }

    /// Symmetrizes `m` as `(m + mᵀ) / 2` without checking.
    pub(crate) fn symmetrized(m: DMatrix<f64>) -> Self {
        let t = m.transpose();
        Self((m + t) * 0.5)
    }

    pub fn zeros(n: usize) -> Self {
        Self(DMatrix::zeros(n, n))
    }

    pub fn order(&self) -> usize {
        self.0.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0[(i, j)]
    }

    pub fn as_matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.0
    }

    /// Largest absolute entry difference with `other`.
    pub fn max_abs_diff(&self, other: &RealMatrix) -> f64 {
        (&self.0 - &other.0).abs().max()
    }
}

/// Parses the edge-list format: `#`-prefixed comments, an optional
/// `#nodes N` directive and one whitespace-separated `i j` pair per line.
pub fn load_edge_list(text: &str) -> Result<Graph> {
    let mut declared: Option<usize> = None;
    let mut pairs = Vec::new();
    let mut max_id: Option<usize> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            let mut tokens = comment.split_whitespace();
            if tokens.next() == Some("nodes") {
                let value = tokens.next().ok_or_else(|| Error::Parse {
                    line: line_no,
                    message: "`#nodes` directive without a count".into(),
                })?;
                let n: usize = value.parse().map_err(|_| Error::Parse {
                    line: line_no,
                    message: format!("invalid node count `{value}`"),
                })?;
                if tokens.next().is_some() {
                    return Err(Error::Parse {
                        line: line_no,
                        message: "trailing tokens after `#nodes N`".into(),
                    });
                }
                if declared.is_some_and(|d| d != n) {
                    return Err(Error::Parse {
                        line: line_no,
                        message: "conflicting `#nodes` directives".into(),
                    });
                }
                declared = Some(n);
            }
            continue;
        }

        let mut tokens = line.split_whitespace();
        let mut endpoint = || -> Result<usize> {
            let tok = tokens.next().ok_or_else(|| Error::Parse {
                line: line_no,
                message: "expected two node ids".into(),
            })?;
            tok.parse().map_err(|_| Error::Parse {
                line: line_no,
                message: format!("invalid node id `{tok}`"),
            })
        };
        let i = endpoint()?;
        let j = endpoint()?;
        if tokens.next().is_some() {
            return Err(Error::Parse {
                line: line_no,
                message: "expected exactly two node ids".into(),
            });
        }
        if i == j {
            return Err(Error::SelfLoop {
                node: i,
                line: Some(line_no),
            });
        }
        max_id = Some(max_id.map_or(i.max(j), |m: usize| m.max(i).max(j)));
        pairs.push((line_no, i, j));
    }

    let n = match (declared, max_id) {
        (Some(n), _) => n,
        (None, Some(m)) => m + 1,
        (None, None) => 0,
    };
    let mut graph = Graph::empty(n);
    for (line, i, j) in pairs {
        if i.max(j) >= n {
            return Err(Error::Parse {
                line,
                message: format!("node {} exceeds declared node count {n}", i.max(j)),
            });
        }
        graph.add_edge(i, j)?;
    }
    Ok(graph)
}

/// Emits `#nodes N` followed by one sorted `i j` line per edge (`i < j`).
pub fn write_edge_list(graph: &Graph) -> String {
    let mut out = format!("#nodes {}\n", graph.node_count());
    for (i, j) in graph.edges() {
        let _ = writeln!(out, "{i} {j}");
    }
    out
}

/// Loads a CSV of categorical node attributes (`node,attr1,attr2,...`)
/// onto `graph`. Nodes without a row get [`MISSING_CATEGORY`].
pub fn load_attributes(text: &str, graph: Graph) -> Result<Graph> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers = reader.headers()?.clone();
    if headers.get(0) != Some("node") {
        return Err(Error::Parse {
            line: 1,
            message: "attribute header must start with `node`".into(),
        });
    }
    let names: Vec<String> = headers.iter().skip(1).map(str::to_owned).collect();
    let n = graph.node_count();
    let mut columns = vec![vec![MISSING_CATEGORY.to_owned(); n]; names.len()];
    let mut seen = vec![false; n];

    for (row_idx, record) in reader.records().enumerate() {
        let record = record?;
        let line = row_idx + 2;
        let field = record.get(0).unwrap_or_default();
        let node: usize = field.parse().map_err(|_| Error::Parse {
            line,
            message: format!("invalid node id `{field}`"),
        })?;
        if node >= n {
            return Err(Error::NodeOutOfRange { node, n });
        }
        if std::mem::replace(&mut seen[node], true) {
            return Err(Error::DuplicateAttributeRow { node });
        }
        for (col, column) in columns.iter_mut().enumerate() {
            match record.get(col + 1) {
                Some(v) if !v.is_empty() => column[node] = v.to_owned(),
                _ => {}
            }
        }
    }

    let mut graph = graph;
    for (name, column) in names.into_iter().zip(columns) {
        graph = graph.with_attribute(name, column)?;
    }
    Ok(graph)
}
