use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;

use crate::community::Partition;
use crate::error::{Error, Result};
use crate::graph::{degree_vector, Graph};
use crate::rng::rng_from_seed;

/// Endpoint redraws allowed per edge before a block is declared too dense.
const EDGE_RETRIES: usize = 100;

/// Degree-corrected stochastic block model inputs with exact block edge
/// counts. `block_edges[r][s]` counts edges between groups `r` and `s`
/// (each edge once, also on the diagonal).
#[derive(Debug, Clone, PartialEq)]
pub struct DcsbmConfig {
    degrees: Vec<usize>,
    partition: Partition,
    block_edges: Vec<Vec<usize>>,
    pub rng_seed: u64,
}

impl DcsbmConfig {
    pub fn new(degrees: Vec<usize>, partition: Partition, block_edges: Vec<Vec<usize>>, rng_seed: u64) -> Result<Self> {
        if degrees.len() != partition.len() {
            return Err(Error::DimensionMismatch {
                expected: partition.len(),
                found: degrees.len(),
            });
        }
        let m = partition.community_count();
        if block_edges.len() != m || block_edges.iter().any(|row| row.len() != m) {
            return Err(Error::InvalidParameter(format!("block edge matrix must be {m} x {m}")));
        }
        let mut group_degree = vec![0usize; m];
        for (node, &k) in degrees.iter().enumerate() {
            group_degree[partition.community_of(node)] += k;
        }
        for r in 0..m {
            for s in 0..m {
                if block_edges[r][s] != block_edges[s][r] {
                    return Err(Error::InvalidParameter(format!(
                        "block edge matrix asymmetric at ({r}, {s})"
                    )));
                }
            }
            let stubs: usize = (0..m)
                .map(|s| {
                    if s == r {
                        2 * block_edges[r][r]
                    } else {
                        block_edges[r][s]
                    }
                })
                .sum();
            if stubs != group_degree[r] {
                return Err(Error::InvalidParameter(format!(
                    "group {r} degree sum {} does not match its block edge stubs {stubs}",
                    group_degree[r]
                )));
            }
        }
        Ok(Self {
            degrees,
            partition,
            block_edges,
            rng_seed,
        })
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn block_edges(&self) -> &[Vec<usize>] {
        &self.block_edges
    }

    pub fn with_seed(mut self, rng_seed: u64) -> Self {
        self.rng_seed = rng_seed;
        self
    }
}

/// Extracts degrees, group assignment and block edge counts from `graph`.
pub fn dcsbm_config_from(graph: &Graph, partition: &Partition) -> Result<DcsbmConfig> {
    if partition.len() != graph.node_count() {
        return Err(Error::DimensionMismatch {
            expected: graph.node_count(),
            found: partition.len(),
        });
    }
    let m = partition.community_count();
    let mut block_edges = vec![vec![0usize; m]; m];
    for (i, j) in graph.edges() {
        let (r, s) = (partition.community_of(i), partition.community_of(j));
        block_edges[r][s] += 1;
        if r != s {
            block_edges[s][r] += 1;
        }
    }
    DcsbmConfig::new(
        degree_vector(graph).degrees().to_vec(),
        partition.clone(),
        block_edges,
        0,
    )
}

/// Places exactly `block_edges[r][s]` edges per group pair, choosing each
/// endpoint within its group with probability proportional to degree.
/// Self-loops and repeated edges are redrawn.
pub fn dcsbm_generate(config: &DcsbmConfig) -> Result<Graph> {
    let n = config.degrees.len();
    let groups = config.partition.members();
    let samplers: Vec<Option<WeightedIndex<usize>>> = groups
        .iter()
        .map(|members| WeightedIndex::new(members.iter().map(|&v| config.degrees[v])).ok())
        .collect();
    let mut rng = rng_from_seed(config.rng_seed);
    let mut graph = Graph::empty(n);

    for r in 0..groups.len() {
        for s in r..groups.len() {
            let count = config.block_edges[r][s];
            if count == 0 {
                continue;
            }
            let (Some(pick_r), Some(pick_s)) = (&samplers[r], &samplers[s]) else {
                return Err(Error::Infeasible(format!(
                    "block ({r}, {s}) has edges but zero group degree"
                )));
            };
            for _ in 0..count {
                let placed = (0..EDGE_RETRIES).any(|_| {
                    let u = groups[r][pick_r.sample(&mut rng)];
                    let v = groups[s][pick_s.sample(&mut rng)];
                    u != v && graph.add_edge(u, v).unwrap_or(false)
                });
                if !placed {
                    return Err(Error::Infeasible(format!(
                        "block ({r}, {s}) too dense: no simple edge found in {EDGE_RETRIES} draws"
                    )));
                }
            }
        }
    }
    Ok(graph)
}
