//! Synthetic input graphs: planted partitions (including the 128-node
//! four-community "Girvan" preset), Lancichinetti-style networks with
//! geometric degrees and community sizes, and the Erdős–Rényi /
//! Barabási–Albert families used by the normalization study.

use rand::Rng as _;
use rand_distr::{Distribution, Geometric};

use crate::community::Partition;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::rng::{rng_from_seed, Rng};

/// Node count of the Girvan preset.
pub const GIRVAN_NODES: usize = 128;
/// Community count of the Girvan preset.
pub const GIRVAN_COMMUNITIES: usize = 4;
/// Expected degree of the Girvan preset.
pub const GIRVAN_MEAN_DEGREE: f64 = 16.0;
/// Default expected number of a node's edges leaving its community.
pub const GIRVAN_DEFAULT_OUT_DEGREE: f64 = 5.0;

/// Largest fraction of stubs that may be dropped before the configuration
/// is declared infeasible.
const MAX_DROPPED_STUB_FRACTION: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlantedPartitionConfig {
    pub n: usize,
    pub communities: usize,
    pub p_in: f64,
    pub p_out: f64,
    pub rng_seed: u64,
}

impl PlantedPartitionConfig {
    /// 128 nodes in four equal communities with the given probabilities.
    pub fn girvan(p_in: f64, p_out: f64, rng_seed: u64) -> Self {
        Self {
            n: GIRVAN_NODES,
            communities: GIRVAN_COMMUNITIES,
            p_in,
            p_out,
            rng_seed,
        }
    }

    /// Girvan preset parameterized by expected out-of-community degree,
    /// keeping the expected total degree at 16.
    pub fn girvan_with_out_degree(out_degree: f64, rng_seed: u64) -> Self {
        let size = (GIRVAN_NODES / GIRVAN_COMMUNITIES) as f64;
        let p_in = (GIRVAN_MEAN_DEGREE - out_degree) / (size - 1.0);
        let p_out = out_degree / (GIRVAN_NODES as f64 - size);
        Self::girvan(p_in, p_out, rng_seed)
    }

    fn validate(&self) -> Result<()> {
        if self.communities == 0 || !self.n.is_multiple_of(self.communities) {
            return Err(Error::InvalidParameter(format!(
                "{} communities must evenly divide {} nodes",
                self.communities, self.n
            )));
        }
        if !(0.0 <= self.p_out && self.p_out <= self.p_in && self.p_in <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "need 0 <= p_out <= p_in <= 1, got p_in = {}, p_out = {}",
                self.p_in, self.p_out
            )));
        }
        Ok(())
    }
}

/// Equal-size communities of consecutive node ids; each dyad is drawn
/// independently with `p_in` or `p_out`, in row-major order.
pub fn planted_partition(config: &PlantedPartitionConfig) -> Result<(Graph, Partition)> {
    config.validate()?;
    let size = config.n / config.communities;
    let assignment: Vec<usize> = (0..config.n).map(|i| i / size).collect();
    let mut rng = rng_from_seed(config.rng_seed);
    let mut graph = Graph::empty(config.n);
    for i in 0..config.n {
        for j in (i + 1)..config.n {
            let p = if assignment[i] == assignment[j] {
                config.p_in
            } else {
                config.p_out
            };
            if rng.random::<f64>() < p {
                graph.add_edge(i, j)?;
            }
        }
    }
    Ok((graph, Partition::new(assignment)?))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LancichinettiConfig {
    pub n: usize,
    pub mean_degree: f64,
    pub mean_community_size: f64,
    /// Fraction of each node's edges that leave its community.
    pub mixing: f64,
    pub rng_seed: u64,
}

impl Default for LancichinettiConfig {
    fn default() -> Self {
        Self {
            n: 1000,
            mean_degree: 15.0,
            mean_community_size: 50.0,
            mixing: 0.2,
            rng_seed: 0,
        }
    }
}

impl LancichinettiConfig {
    fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::InvalidParameter("need at least two nodes".into()));
        }
        if !(0.0..1.0).contains(&self.mixing) {
            return Err(Error::InvalidParameter(format!(
                "mixing must lie in [0, 1), got {}",
                self.mixing
            )));
        }
        if !(self.mean_degree >= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "mean degree must be >= 1, got {}",
                self.mean_degree
            )));
        }
        if !(self.mean_community_size >= self.mean_degree) {
            return Err(Error::InvalidParameter(format!(
                "mean community size {} is smaller than mean degree {}",
                self.mean_community_size, self.mean_degree
            )));
        }
        Ok(())
    }
}

/// Geometric draw on `{1, 2, …}` with the given mean.
fn geometric_at_least_one(mean: f64, rng: &mut Rng) -> usize {
    let geo = Geometric::new(1.0 / mean).expect("mean >= 1 gives a valid success probability");
    1 + geo.sample(rng) as usize
}

/// Pairs stubs into simple edges. The node with the most unmatched stubs is
/// served first and its partner is drawn with probability proportional to
/// the partner's unmatched stubs among pairs accepted by `allowed`; this
/// rarely gets stuck on dense communities. Returns the number of stubs left
/// unmatched.
fn match_stubs(
    remaining: &mut [usize],
    nodes: &[usize],
    graph: &mut Graph,
    rng: &mut Rng,
    allowed: impl Fn(usize, usize) -> bool,
) -> usize {
    let mut dropped = 0;
    let mut candidates = Vec::with_capacity(nodes.len());
    loop {
        let Some(&u) = nodes
            .iter()
            .filter(|&&v| remaining[v] > 0)
            .max_by_key(|&&v| (remaining[v], std::cmp::Reverse(v)))
        else {
            break;
        };
        candidates.clear();
        candidates.extend(
            nodes
                .iter()
                .copied()
                .filter(|&v| v != u && remaining[v] > 0 && allowed(u, v) && !graph.has_edge(u, v)),
        );
        let total: usize = candidates.iter().map(|&v| remaining[v]).sum();
        if total == 0 {
            dropped += remaining[u];
            remaining[u] = 0;
            continue;
        }
        let mut pick = rng.random_range(0..total);
        let v = *candidates
            .iter()
            .find(|&&v| {
                if pick < remaining[v] {
                    true
                } else {
                    pick -= remaining[v];
                    false
                }
            })
            .expect("pick is below the total");
        graph.add_edge(u, v).expect("checked endpoints");
        remaining[u] -= 1;
        remaining[v] -= 1;
    }
    dropped
}

/// Lancichinetti-style benchmark: geometric community sizes and degrees,
/// with about `1 − mixing` of each node's stubs matched inside its community.
///
/// Intra-community stubs beyond what a community can hold are moved to the
/// inter-community pool so the degree sequence is kept.
pub fn lancichinetti(config: &LancichinettiConfig) -> Result<(Graph, Partition)> {
    config.validate()?;
    let n = config.n;
    let mut rng = rng_from_seed(config.rng_seed);

    let mut sizes = Vec::new();
    let mut covered = 0;
    while covered < n {
        let s = geometric_at_least_one(config.mean_community_size, &mut rng).min(n - covered);
        sizes.push(s);
        covered += s;
    }
    if sizes.len() > 1 && *sizes.last().unwrap() == 1 {
        sizes.pop();
        *sizes.last_mut().unwrap() += 1;
    }
    let assignment: Vec<usize> = sizes
        .iter()
        .enumerate()
        .flat_map(|(c, &s)| std::iter::repeat_n(c, s))
        .collect();

    let mut intra = vec![0usize; n];
    let mut inter = vec![0usize; n];
    for (node, &c) in assignment.iter().enumerate() {
        let degree = geometric_at_least_one(config.mean_degree, &mut rng).min(n - 1);
        let want_in = ((1.0 - config.mixing) * degree as f64).round() as usize;
        intra[node] = want_in.min(sizes[c] - 1);
        inter[node] = (degree - intra[node]).min(n - sizes[c]);
    }

    let total_stubs: usize = intra.iter().chain(&inter).sum();
    let mut graph = Graph::empty(n);
    let mut dropped = 0;
    let mut start = 0;
    for &s in &sizes {
        let members: Vec<usize> = (start..start + s).collect();
        dropped += match_stubs(&mut intra, &members, &mut graph, &mut rng, |_, _| true);
        start += s;
    }
    let everyone: Vec<usize> = (0..n).collect();
    dropped += match_stubs(&mut inter, &everyone, &mut graph, &mut rng, |u, v| {
        assignment[u] != assignment[v]
    });

    if total_stubs > 0 && dropped as f64 > MAX_DROPPED_STUB_FRACTION * total_stubs as f64 {
        return Err(Error::Infeasible(format!(
            "{dropped} of {total_stubs} stubs could not be matched into a simple graph"
        )));
    }
    Ok((graph, Partition::new(assignment)?))
}

/// `G(n, p)`, dyads drawn in row-major order.
pub fn erdos_renyi(n: usize, p: f64, rng_seed: u64) -> Result<Graph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!(
            "edge probability must lie in [0, 1], got {p}"
        )));
    }
    let mut rng = rng_from_seed(rng_seed);
    let mut graph = Graph::empty(n);
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.random::<f64>() < p {
                graph.add_edge(i, j)?;
            }
        }
    }
    Ok(graph)
}

/// Preferential attachment with a fractional number of links per new node,
/// so the expected mean degree approaches `mean_degree`.
pub fn barabasi_albert(n: usize, mean_degree: f64, rng_seed: u64) -> Result<Graph> {
    let links = mean_degree / 2.0;
    if !(links >= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "mean degree must be >= 2, got {mean_degree}"
        )));
    }
    let seed_size = links.ceil() as usize + 1;
    if n < seed_size {
        return Err(Error::InvalidParameter(format!(
            "need at least {seed_size} nodes, got {n}"
        )));
    }
    let mut rng = rng_from_seed(rng_seed);
    let mut graph = Graph::empty(n);
    // each edge endpoint appears once, so uniform picks are degree-proportional
    let mut endpoints = Vec::new();
    for i in 0..seed_size {
        for j in (i + 1)..seed_size {
            graph.add_edge(i, j)?;
            endpoints.extend([i, j]);
        }
    }
    let (base, frac) = (links.floor() as usize, links.fract());
    for node in seed_size..n {
        let m = base + usize::from(rng.random::<f64>() < frac);
        let mut targets: Vec<usize> = Vec::with_capacity(m);
        while targets.len() < m {
            let t = endpoints[rng.random_range(0..endpoints.len())];
            if !targets.contains(&t) {
                targets.push(t);
            }
        }
        for t in targets {
            graph.add_edge(node, t)?;
            endpoints.extend([node, t]);
        }
    }
    Ok(graph)
}
