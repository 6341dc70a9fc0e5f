//! Partitions, modularity and its maximization.
//!
//! Modularity sums over *ordered* node pairs including `i = j`:
//!
//! ```text
//! Q = (1/|K|) Σ_{i,j} (A_ij − k_i k_j / |K|) δ(c_i, c_j)
//!   = Σ_c [ 2·L_c / |K| − (D_c / |K|)² ]
//! ```
//!
//! where `L_c` is the number of edges inside community `c` and `D_c` the
//! sum of its degrees.

use std::collections::HashMap;
use std::hash::Hash;

use rand::seq::SliceRandom;

use crate::error::{Error, Result};
use crate::graph::{degree_vector, Graph};
use crate::rng::rng_from_seed;

/// Largest graph accepted by [`brute_force_max_modularity`].
pub const BRUTE_FORCE_MAX_NODES: usize = 12;

/// A full pass of local moves gaining less than this ends a Louvain level.
const MIN_PASS_GAIN: f64 = 1e-9;
const GAIN_TIE: f64 = 1e-12;
const MAX_PASSES: usize = 1000;
/// Cap on dissolve-and-rerun attempts.
const PERTURBATION_ROUNDS: usize = 64;

/// Assignment of nodes to communities `0..m`, every id used.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    assignment: Vec<usize>,
    count: usize,
}

impl Partition {
    pub fn new(assignment: Vec<usize>) -> Result<Self> {
        let count = assignment.iter().max().map_or(0, |&m| m + 1);
        let mut used = vec![false; count];
        for &c in &assignment {
            used[c] = true;
        }
        if let Some(missing) = used.iter().position(|&u| !u) {
            return Err(Error::InvalidParameter(format!("community id {missing} is unused")));
        }
        Ok(Self { assignment, count })
    }

    /// Relabels arbitrary labels to `0..m` in order of first appearance.
    pub fn from_labels<T: Eq + Hash>(labels: &[T]) -> Self {
        let mut ids: HashMap<&T, usize> = HashMap::new();
        let assignment = labels
            .iter()
            .map(|l| {
                let next = ids.len();
                *ids.entry(l).or_insert(next)
            })
            .collect();
        let count = ids.len();
        Self { assignment, count }
    }

    /// Everyone in community 0.
    pub fn single(n: usize) -> Self {
        Self {
            assignment: vec![0; n],
            count: usize::from(n > 0),
        }
    }

    /// Every node on its own.
    pub fn singletons(n: usize) -> Self {
        Self {
            assignment: (0..n).collect(),
            count: n,
        }
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn community_of(&self, node: usize) -> usize {
        self.assignment[node]
    }

    pub fn community_count(&self) -> usize {
        self.count
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }

    /// Members of each community, in node order.
    pub fn members(&self) -> Vec<Vec<usize>> {
        let mut groups = vec![Vec::new(); self.count];
        for (node, &c) in self.assignment.iter().enumerate() {
            groups[c].push(node);
        }
        groups
    }
}

/// Number of communities `m`.
pub fn partition_count(partition: &Partition) -> usize {
    partition.community_count()
}

pub fn modularity(graph: &Graph, partition: &Partition) -> Result<f64> {
    if partition.len() != graph.node_count() {
        return Err(Error::DimensionMismatch {
            expected: graph.node_count(),
            found: partition.len(),
        });
    }
    let dv = degree_vector(graph);
    if dv.total() == 0 {
        return Err(Error::EmptyGraph);
    }
    let m = partition.community_count();
    let mut internal = vec![0usize; m];
    let mut degree_sum = vec![0usize; m];
    for (i, &k) in dv.degrees().iter().enumerate() {
        degree_sum[partition.community_of(i)] += k;
    }
    for (i, j) in graph.edges() {
        if partition.community_of(i) == partition.community_of(j) {
            internal[partition.community_of(i)] += 1;
        }
    }
    Ok(community_sums_modularity(&internal, &degree_sum, dv.total()))
}

fn community_sums_modularity(internal: &[usize], degree_sum: &[usize], total: usize) -> f64 {
    let total = total as f64;
    internal
        .iter()
        .zip(degree_sum)
        .map(|(&l, &d)| 2.0 * l as f64 / total - (d as f64 / total).powi(2))
        .sum()
}

/// Weighted graph used at each Louvain level. `self_weight[i]` counts
/// ordered pairs inside super-node `i`, so `degree[i]` stays the sum of the
/// original degrees it contains.
struct LevelGraph {
    adjacency: Vec<Vec<(usize, f64)>>,
    self_weight: Vec<f64>,
    degree: Vec<f64>,
    total: f64,
}

impl LevelGraph {
    fn from_graph(graph: &Graph) -> Self {
        let n = graph.node_count();
        let adjacency: Vec<Vec<(usize, f64)>> = (0..n)
            .map(|i| graph.neighbors(i).iter().map(|&j| (j, 1.0)).collect())
            .collect();
        let degree: Vec<f64> = (0..n).map(|i| graph.degree(i) as f64).collect();
        let total = degree.iter().sum();
        Self {
            adjacency,
            self_weight: vec![0.0; n],
            degree,
            total,
        }
    }

    fn len(&self) -> usize {
        self.degree.len()
    }

    /// Collapses each community (ids `0..count`) into one node.
    fn aggregate(&self, community: &[usize], count: usize) -> Self {
        let mut self_weight = vec![0.0; count];
        let mut degree = vec![0.0; count];
        let mut links: Vec<Vec<(usize, f64)>> = vec![Vec::new(); count];
        for i in 0..self.len() {
            let ci = community[i];
            self_weight[ci] += self.self_weight[i];
            degree[ci] += self.degree[i];
            for &(j, w) in &self.adjacency[i] {
                let cj = community[j];
                if ci == cj {
                    self_weight[ci] += w;
                } else {
                    links[ci].push((cj, w));
                }
            }
        }
        let adjacency = links
            .into_iter()
            .map(|mut row| {
                row.sort_by_key(|&(j, _)| j);
                let mut merged: Vec<(usize, f64)> = Vec::with_capacity(row.len());
                for (j, w) in row {
                    match merged.last_mut() {
                        Some((last, acc)) if *last == j => *acc += w,
                        _ => merged.push((j, w)),
                    }
                }
                merged
            })
            .collect();
        Self {
            adjacency,
            self_weight,
            degree,
            total: self.total,
        }
    }
}

/// Local moving on one level, starting from `initial` (ids below the level
/// size). Returns the compacted community ids, their count, and whether any
/// node changed community.
fn local_moving(level: &LevelGraph, initial: Vec<usize>, rng: &mut crate::rng::Rng) -> (Vec<usize>, usize, bool) {
    let n = level.len();
    let mut community = initial;
    let mut community_degree = vec![0.0; n];
    for (i, &c) in community.iter().enumerate() {
        community_degree[c] += level.degree[i];
    }
    let mut link_weight = vec![0.0; n];
    let mut touched: Vec<usize> = Vec::new();
    let mut size = vec![0usize; n];
    for &c in &community {
        size[c] += 1;
    }
    let mut empty: Vec<usize> = (0..n).filter(|&c| size[c] == 0).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut moved_any = false;

    for _ in 0..MAX_PASSES {
        let mut pass_gain = 0.0;
        for &i in &order {
            let home = community[i];
            let ki = level.degree[i];
            for &(j, w) in &level.adjacency[i] {
                let c = community[j];
                if link_weight[c] == 0.0 {
                    touched.push(c);
                }
                link_weight[c] += w;
            }
            community_degree[home] -= ki;
            let score = |c: usize| link_weight[c] - community_degree[c] * ki / level.total;

            // a move needs a strict gain over staying; among equal
            // alternatives the lowest community id wins
            let home_score = score(home);
            let (mut best, mut best_score) = (home, home_score);
            for &c in &touched {
                let s = score(c);
                let better = s > best_score + GAIN_TIE;
                let tie = best != home && (s - best_score).abs() <= GAIN_TIE && c < best;
                if c != home && (better || tie) {
                    best = c;
                    best_score = s;
                }
            }
            // splitting off alone scores 0; only worth it on a strict gain
            if size[home] > 1 && best_score < -GAIN_TIE {
                if let Some(&c) = empty.iter().min() {
                    best = c;
                    best_score = 0.0;
                }
            }

            community_degree[best] += ki;
            if best != home {
                size[home] -= 1;
                if size[home] == 0 {
                    empty.push(home);
                }
                if size[best] == 0 {
                    empty.retain(|&c| c != best);
                }
                size[best] += 1;
                community[i] = best;
                moved_any = true;
                pass_gain += 2.0 * (best_score - home_score) / level.total;
            }
            for &c in &touched {
                link_weight[c] = 0.0;
            }
            touched.clear();
        }
        if pass_gain < MIN_PASS_GAIN {
            break;
        }
    }

    let mut remap = vec![usize::MAX; n];
    let mut count = 0;
    for c in community.iter_mut() {
        if remap[*c] == usize::MAX {
            remap[*c] = count;
            count += 1;
        }
        *c = remap[*c];
    }
    (community, count, moved_any)
}

/// Coarsens by local moving and aggregation, then refines: the partition
/// is projected back down one level at a time and local moving resumes
/// from it, so nodes merged early can still leave their community. The
/// first level starts from `initial`; coarser levels start from singletons.
fn multilevel(graph: &Graph, initial: Vec<usize>, rng: &mut crate::rng::Rng) -> Vec<usize> {
    let mut levels = vec![LevelGraph::from_graph(graph)];
    // maps[l][v] is the level-(l+1) node that level-l node v collapsed into
    let mut maps: Vec<Vec<usize>> = Vec::new();
    let mut start = Some(initial);
    loop {
        let level = levels.last().expect("at least one level");
        let init = start.take().unwrap_or_else(|| (0..level.len()).collect());
        let (community, count, _) = local_moving(level, init, rng);
        if count == level.len() {
            break;
        }
        let next = level.aggregate(&community, count);
        maps.push(community);
        levels.push(next);
    }

    let mut assignment: Vec<usize> = (0..levels.last().expect("at least one level").len()).collect();
    for l in (0..maps.len()).rev() {
        let projected = maps[l].iter().map(|&c| assignment[c]).collect();
        assignment = local_moving(&levels[l], projected, rng).0;
    }
    assignment
}

/// Kernighan–Lin style fine-tuning on the node level. Each pass moves
/// every node exactly once, always taking the best single move still
/// available even when it lowers Q, then rolls back to the best prefix of
/// the sequence. Passes repeat while that prefix gains. This escapes local
/// optima where several nodes have to change sides together.
fn fine_tune(graph: &Graph, mut community: Vec<usize>) -> Vec<usize> {
    let n = graph.node_count();
    let total = 2.0 * graph.edge_count() as f64;
    let degree: Vec<f64> = (0..n).map(|i| graph.degree(i) as f64).collect();
    let mut community_degree = vec![0.0; n];
    let mut size = vec![0usize; n];
    for (i, &c) in community.iter().enumerate() {
        community_degree[c] += degree[i];
        size[c] += 1;
    }
    let mut link_weight = vec![0.0; n];
    let mut touched: Vec<usize> = Vec::new();

    // best (gain, target) for node i; gains are in units of total/2
    let mut best_move = |i: usize, community: &[usize], community_degree: &[f64], size: &[usize]| {
        let home = community[i];
        let ki = degree[i];
        for &j in graph.neighbors(i) {
            let c = community[j];
            if link_weight[c] == 0.0 {
                touched.push(c);
            }
            link_weight[c] += 1.0;
        }
        let score = |c: usize, link: f64| {
            let d = if c == home {
                community_degree[c] - ki
            } else {
                community_degree[c]
            };
            link - d * ki / total
        };
        let home_score = score(home, link_weight[home]);
        touched.sort_unstable();
        let mut best: Option<(f64, usize)> = None;
        for &c in &touched {
            if c == home {
                continue;
            }
            let gain = score(c, link_weight[c]) - home_score;
            if best.is_none_or(|(g, _)| gain > g + GAIN_TIE) {
                best = Some((gain, c));
            }
        }
        if size[home] > 1 {
            if let Some(empty) = size.iter().position(|&s| s == 0) {
                let gain = -home_score;
                if best.is_none_or(|(g, _)| gain > g + GAIN_TIE) {
                    best = Some((gain, empty));
                }
            }
        }
        for &c in &touched {
            link_weight[c] = 0.0;
        }
        touched.clear();
        best
    };

    for _ in 0..MAX_PASSES {
        let mut locked = vec![false; n];
        let mut log: Vec<(usize, usize)> = Vec::with_capacity(n);
        let (mut running, mut best_gain, mut best_len) = (0.0, 0.0, 0);
        for _ in 0..n {
            let mut pick: Option<(f64, usize, usize)> = None;
            for i in (0..n).filter(|&i| !locked[i]) {
                if let Some((gain, target)) = best_move(i, &community, &community_degree, &size) {
                    if pick.is_none_or(|(g, _, _)| gain > g + GAIN_TIE) {
                        pick = Some((gain, i, target));
                    }
                }
            }
            let Some((gain, i, target)) = pick else { break };
            let home = community[i];
            community_degree[home] -= degree[i];
            size[home] -= 1;
            community_degree[target] += degree[i];
            size[target] += 1;
            community[i] = target;
            locked[i] = true;
            log.push((i, home));
            running += gain;
            if running > best_gain + GAIN_TIE {
                best_gain = running;
                best_len = log.len();
            }
        }
        for &(i, home) in log[best_len..].iter().rev() {
            let c = community[i];
            community_degree[c] -= degree[i];
            size[c] -= 1;
            community_degree[home] += degree[i];
            size[home] += 1;
            community[i] = home;
        }
        if 2.0 * best_gain / total < MIN_PASS_GAIN {
            break;
        }
    }
    community
}

/// Multi-level Louvain modularity maximization with node-level
/// Kernighan–Lin fine-tuning, then a perturbation search: each community in
/// turn is dissolved into singletons and both phases rerun from there,
/// keeping the result only on a strict gain. The node visiting order of each
/// level is a shuffle seeded by `rng_seed`; equal gains go to the lowest
/// community id.
pub fn louvain_maximize(graph: &Graph, rng_seed: u64) -> Result<(Partition, f64)> {
    if graph.edge_count() == 0 {
        return Err(Error::EmptyGraph);
    }
    let n = graph.node_count();
    let mut rng = rng_from_seed(rng_seed);
    let mut best = Partition::from_labels(&fine_tune(graph, multilevel(graph, (0..n).collect(), &mut rng)));
    let mut best_q = modularity(graph, &best)?;

    // dissolve each community in turn into singletons and redo both phases
    let mut target = 0;
    for _ in 0..PERTURBATION_ROUNDS {
        if target >= best.community_count() {
            break;
        }
        let mut fresh = best.community_count();
        let start: Vec<usize> = best
            .assignment()
            .iter()
            .map(|&c| {
                if c == target {
                    fresh += 1;
                    fresh - 1
                } else {
                    c
                }
            })
            .collect();
        let start = Partition::from_labels(&start).assignment().to_vec();
        let candidate = Partition::from_labels(&fine_tune(graph, multilevel(graph, start, &mut rng)));
        let q = modularity(graph, &candidate)?;
        if q > best_q + MIN_PASS_GAIN {
            best = candidate;
            best_q = q;
            target = 0;
        } else {
            target += 1;
        }
    }
    Ok((best, best_q))
}

/// Exact modularity maximum by enumerating every set partition.
/// Ties keep the first partition found in restricted-growth order.
pub fn brute_force_max_modularity(graph: &Graph) -> Result<(Partition, f64)> {
    let n = graph.node_count();
    if n > BRUTE_FORCE_MAX_NODES {
        return Err(Error::TooLarge {
            n,
            max: BRUTE_FORCE_MAX_NODES,
        });
    }
    let dv = degree_vector(graph);
    if dv.total() == 0 {
        return Err(Error::EmptyGraph);
    }

    struct Search<'a> {
        graph: &'a Graph,
        degrees: &'a [usize],
        total: usize,
        assignment: Vec<usize>,
        internal: Vec<usize>,
        degree_sum: Vec<usize>,
        best: Option<(Vec<usize>, f64)>,
    }

    impl Search<'_> {
        fn visit(&mut self, node: usize, used: usize) {
            if node == self.assignment.len() {
                let q = community_sums_modularity(&self.internal[..used], &self.degree_sum[..used], self.total);
                if self.best.as_ref().is_none_or(|(_, b)| q > *b + 1e-15) {
                    self.best = Some((self.assignment.clone(), q));
                }
                return;
            }
            for c in 0..=used {
                let links = self
                    .graph
                    .neighbors(node)
                    .iter()
                    .filter(|&&u| u < node && self.assignment[u] == c)
                    .count();
                self.assignment[node] = c;
                self.internal[c] += links;
                self.degree_sum[c] += self.degrees[node];
                self.visit(node + 1, used.max(c + 1));
                self.internal[c] -= links;
                self.degree_sum[c] -= self.degrees[node];
            }
        }
    }

    let mut search = Search {
        graph,
        degrees: dv.degrees(),
        total: dv.total(),
        assignment: vec![0; n],
        internal: vec![0; n],
        degree_sum: vec![0; n],
        best: None,
    };
    search.visit(0, 0);
    let (assignment, q) = search.best.expect("at least one partition exists");
    Ok((Partition::new(assignment)?, q))
}
