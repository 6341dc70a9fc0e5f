//! Rewiring generator that lowers modularity towards a target against a
//! frozen partition.
//!
//! Initialization builds `m` near-equal communities, each connected by a
//! random spanning tree, joined by a tree of `m − 1` inter-community links,
//! and spreads the remaining links so community degree sums are as equal as
//! possible (this maximizes `Q` for the skeleton). Rewiring then applies
//! three move families, each accepted only if `Q` does not increase:
//!
//! * migration: an intra-community edge becomes an inter-community edge;
//! * endpoint swap: one end of an inter-community edge moves to another
//!   node outside the fixed end's community;
//! * relocation: an intra-community edge moves to a free pair inside the
//!   same community.

use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng as _;

use crate::community::Partition;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::rng::{rng_from_seed, Rng};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajanovskiConfig {
    pub q_target: f64,
    pub communities: usize,
    pub n: usize,
    pub links: usize,
    pub rng_seed: u64,
}

#[derive(Debug, Clone)]
pub struct TrajanovskiOutcome {
    pub graph: Graph,
    /// The frozen partition the rewiring is measured against.
    pub partition: Partition,
    pub initial_q: f64,
    pub final_q: f64,
    /// Set when the target lies above the initialization's modularity or the
    /// rewiring ran out of admissible moves before reaching it.
    pub target_unreachable: bool,
    pub accepted_moves: usize,
    /// Largest `|ΔQ|` among accepted moves.
    pub max_step: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Move {
    Migrate,
    SwapEndpoint,
    Relocate,
}

/// Incremental rewiring state. [`Rewirer::step`] performs one accepted move.
#[derive(Debug, Clone)]
pub struct Rewirer {
    graph: Graph,
    community: Vec<usize>,
    members: Vec<Vec<usize>>,
    internal: Vec<usize>,
    degree_sum: Vec<usize>,
    links: usize,
    rng: Rng,
}

impl Rewirer {
    pub fn new(config: &TrajanovskiConfig) -> Result<Self> {
        let TrajanovskiConfig {
            communities: m,
            n,
            links,
            ..
        } = *config;
        if m == 0 || m > n {
            return Err(Error::InvalidParameter(format!(
                "need 1 <= m <= n, got m = {m}, n = {n}"
            )));
        }
        if links + 1 < n {
            return Err(Error::Infeasible(format!("{links} links cannot connect {n} nodes")));
        }
        let sizes: Vec<usize> = (0..m).map(|c| n / m + usize::from(c < n % m)).collect();
        let capacity: usize = sizes.iter().map(|s| s * (s - 1) / 2).sum::<usize>() + (m - 1);
        if links > capacity {
            return Err(Error::Infeasible(format!(
                "{links} links exceed the {capacity} a {m}-community tree skeleton can hold"
            )));
        }

        let mut rng = rng_from_seed(config.rng_seed);
        let mut community = Vec::with_capacity(n);
        let mut members = Vec::with_capacity(m);
        for (c, &s) in sizes.iter().enumerate() {
            let start = community.len();
            community.extend(std::iter::repeat_n(c, s));
            members.push((start..start + s).collect::<Vec<_>>());
        }

        let mut graph = Graph::empty(n);
        let mut degree_sum = vec![0usize; m];
        let mut internal = vec![0usize; m];
        for (c, group) in members.iter().enumerate() {
            for t in 1..group.len() {
                let parent = group[rng.random_range(0..t)];
                graph.add_edge(group[t], parent)?;
            }
            internal[c] = group.len() - 1;
            degree_sum[c] = 2 * internal[c];
        }
        for c in 1..m {
            let other = rng.random_range(0..c);
            let u = members[c][rng.random_range(0..members[c].len())];
            let v = members[other][rng.random_range(0..members[other].len())];
            graph.add_edge(u, v)?;
            degree_sum[c] += 1;
            degree_sum[other] += 1;
        }

        // equalize degree sums greedily: each extra link goes to the
        // community with the smallest degree sum that still has room
        let mut extra = vec![0usize; m];
        let mut remaining = links - (n - m) - (m - 1);
        while remaining > 0 {
            let c = (0..m)
                .filter(|&c| internal[c] + extra[c] < sizes[c] * (sizes[c] - 1) / 2)
                .min_by_key(|&c| (degree_sum[c] + 2 * extra[c], c))
                .expect("capacity checked above");
            extra[c] += 1;
            remaining -= 1;
        }
        for (c, group) in members.iter().enumerate() {
            let mut free: Vec<(usize, usize)> = group
                .iter()
                .enumerate()
                .flat_map(|(a, &u)| group[a + 1..].iter().map(move |&v| (u, v)))
                .filter(|&(u, v)| !graph.has_edge(u, v))
                .collect();
            free.shuffle(&mut rng);
            for &(u, v) in free.iter().take(extra[c]) {
                graph.add_edge(u, v)?;
            }
            internal[c] += extra[c];
            degree_sum[c] += 2 * extra[c];
        }

        Ok(Self {
            graph,
            community,
            members,
            internal,
            degree_sum,
            links,
            rng,
        })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn partition(&self) -> Partition {
        Partition::new(self.community.clone()).expect("community ids are contiguous")
    }

    /// Modularity of the current graph under the frozen partition.
    pub fn modularity(&self) -> f64 {
        Self::q(&self.internal, &self.degree_sum, self.links)
    }

    fn q(internal: &[usize], degree_sum: &[usize], links: usize) -> f64 {
        let l = links as f64;
        internal
            .iter()
            .zip(degree_sum)
            .map(|(&i, &d)| i as f64 / l - (d as f64 / (2.0 * l)).powi(2))
            .sum()
    }

    /// `ΔQ` from changing the degree sums of the listed communities by the
    /// given amounts and the internal count of one community by `d_internal`.
    fn delta(&self, internal_change: Option<(usize, isize)>, degree_change: &[(usize, isize)]) -> f64 {
        let l = self.links as f64;
        let mut dq = internal_change.map_or(0.0, |(_, d)| d as f64 / l);
        let mut adjusted: Vec<(usize, isize)> = Vec::new();
        for &(c, d) in degree_change {
            match adjusted.iter_mut().find(|(x, _)| *x == c) {
                Some((_, acc)) => *acc += d,
                None => adjusted.push((c, d)),
            }
        }
        for (c, d) in adjusted {
            let before = self.degree_sum[c] as f64;
            let after = before + d as f64;
            dq -= (after * after - before * before) / (4.0 * l * l);
        }
        dq
    }

    fn random_intra_edge(&mut self) -> Option<(usize, usize)> {
        let candidates: Vec<usize> = (0..self.members.len()).filter(|&c| self.internal[c] > 0).collect();
        let &c = candidates.choose(&mut self.rng)?;
        let group = &self.members[c];
        for _ in 0..1000 {
            let u = group[self.rng.random_range(0..group.len())];
            let inside: Vec<usize> = self
                .graph
                .neighbors(u)
                .iter()
                .copied()
                .filter(|&v| self.community[v] == c)
                .collect();
            if let Some(&v) = inside.choose(&mut self.rng) {
                return Some((u, v));
            }
        }
        None
    }

    fn random_inter_edge(&mut self) -> Option<(usize, usize)> {
        let n = self.graph.node_count();
        for _ in 0..1000 {
            let u = self.rng.random_range(0..n);
            let outside: Vec<usize> = self
                .graph
                .neighbors(u)
                .iter()
                .copied()
                .filter(|&v| self.community[v] != self.community[u])
                .collect();
            if let Some(&v) = outside.choose(&mut self.rng) {
                return Some((u, v));
            }
        }
        None
    }

    fn random_free_pair(&mut self, same_community: Option<usize>) -> Option<(usize, usize)> {
        let n = self.graph.node_count();
        for _ in 0..1000 {
            let (u, v) = match same_community {
                Some(c) => {
                    let g = &self.members[c];
                    (
                        g[self.rng.random_range(0..g.len())],
                        g[self.rng.random_range(0..g.len())],
                    )
                }
                None => (self.rng.random_range(0..n), self.rng.random_range(0..n)),
            };
            let ok = u != v
                && !self.graph.has_edge(u, v)
                && match same_community {
                    Some(_) => true,
                    None => self.community[u] != self.community[v],
                };
            if ok {
                return Some((u, v));
            }
        }
        None
    }

    /// Proposes one move of the given family; returns the rewiring and ΔQ.
    fn propose(&mut self, kind: Move) -> Option<((usize, usize), (usize, usize), f64)> {
        match kind {
            Move::Migrate => {
                let (u, v) = self.random_intra_edge()?;
                let (x, y) = self.random_free_pair(None)?;
                let c = self.community[u];
                let dq = self.delta(
                    Some((c, -1)),
                    &[(c, -2), (self.community[x], 1), (self.community[y], 1)],
                );
                Some(((u, v), (x, y), dq))
            }
            Move::SwapEndpoint => {
                let (x, y) = self.random_inter_edge()?;
                let n = self.graph.node_count();
                let z = (0..100)
                    .map(|_| self.rng.random_range(0..n))
                    .find(|&z| z != y && self.community[z] != self.community[x] && !self.graph.has_edge(x, z))?;
                let dq = self.delta(None, &[(self.community[y], -1), (self.community[z], 1)]);
                Some(((x, y), (x, z), dq))
            }
            Move::Relocate => {
                let (u, v) = self.random_intra_edge()?;
                let (x, y) = self.random_free_pair(Some(self.community[u]))?;
                Some(((u, v), (x, y), 0.0))
            }
        }
    }

    /// Tries up to `attempts` proposals and applies the first one with
    /// `ΔQ ≤ 0`. Returns that `ΔQ`, or `None` if nothing was accepted.
    pub fn step(&mut self, attempts: usize) -> Option<f64> {
        const KINDS: [Move; 3] = [Move::Migrate, Move::SwapEndpoint, Move::Relocate];
        for _ in 0..attempts {
            let kind = KINDS[self.rng.random_range(0..KINDS.len())];
            let Some(((u, v), (x, y), dq)) = self.propose(kind) else {
                continue;
            };
            if dq > 1e-15 {
                continue;
            }
            self.graph.remove_edge(u, v);
            self.graph.add_edge(x, y).expect("proposed pair is free");
            for (a, b, sign) in [(u, v, -1isize), (x, y, 1)] {
                let (ca, cb) = (self.community[a], self.community[b]);
                self.degree_sum[ca] = self.degree_sum[ca].wrapping_add_signed(sign);
                self.degree_sum[cb] = self.degree_sum[cb].wrapping_add_signed(sign);
                if ca == cb {
                    self.internal[ca] = self.internal[ca].wrapping_add_signed(sign);
                }
            }
            return Some(dq);
        }
        None
    }
}

/// Builds the maximum-modularity skeleton and rewires it until the frozen
/// partition's modularity first drops to `q_target` or below.
pub fn trajanovski_generate(config: &TrajanovskiConfig) -> Result<TrajanovskiOutcome> {
    let mut rewirer = Rewirer::new(config)?;
    let initial_q = rewirer.modularity();
    let mut outcome = TrajanovskiOutcome {
        graph: Graph::empty(0),
        partition: rewirer.partition(),
        initial_q,
        final_q: initial_q,
        target_unreachable: config.q_target > initial_q + 1e-12,
        accepted_moves: 0,
        max_step: 0.0,
    };
    if outcome.target_unreachable {
        log::warn!(
            "target modularity {} exceeds the initialization's {initial_q}; returning the initialization",
            config.q_target
        );
    } else {
        let budget = 50 * config.links + 1000;
        while rewirer.modularity() > config.q_target + 1e-12 {
            if outcome.accepted_moves >= budget {
                outcome.target_unreachable = true;
                break;
            }
            match rewirer.step(1000) {
                Some(dq) => {
                    outcome.accepted_moves += 1;
                    outcome.max_step = outcome.max_step.max(dq.abs());
                }
                None => {
                    outcome.target_unreachable = true;
                    break;
                }
            }
        }
    }
    outcome.final_q = rewirer.modularity();
    outcome.graph = rewirer.graph;
    Ok(outcome)
}
