use rand::seq::index::sample;
use rand::Rng as _;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::rng::rng_from_seed;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AttackConfig {
    /// Fraction of nodes whose mapping the attacker knows, in `(0, 1]`.
    pub seed_fraction: f64,
    pub rng_seed: u64,
}

impl Default for AttackConfig {
    fn default() -> Self {
        Self {
            seed_fraction: 0.05,
            rng_seed: 0,
        }
    }
}

impl AttackConfig {
    pub fn seed_count(&self, n: usize) -> usize {
        ((self.seed_fraction * n as f64 - 1e-9).ceil().max(0.0) as usize).min(n)
    }

    fn validate(&self) -> Result<()> {
        if !(self.seed_fraction > 0.0 && self.seed_fraction <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "seed fraction must lie in (0, 1], got {}",
                self.seed_fraction
            )));
        }
        Ok(())
    }
}

/// Distance to each seed; unreachable seeds count as `n`, more than any
/// real distance.
fn signatures(graph: &Graph, seeds: &[usize]) -> Vec<Vec<u64>> {
    let n = graph.node_count();
    let mut sig = vec![Vec::with_capacity(seeds.len()); n];
    for &s in seeds {
        for (v, d) in graph.bfs_distances(s).into_iter().enumerate() {
            sig[v].push(d.unwrap_or(n) as u64);
        }
    }
    sig
}

/// Seed-based distance-vector de-anonymization. A uniformly sampled seed set
/// of `⌈seed_fraction·n⌉` nodes is known to the attacker; every other node
/// is described by its shortest-path distances to the seeds in each graph,
/// and pairs are matched greedily by ascending Euclidean distance between
/// descriptions (exact ties broken by a seeded random key). Returns the
/// fraction of non-seed nodes matched to themselves, or 1 when every node
/// is a seed.
pub fn dv_attack(original: &Graph, anonymized: &Graph, config: &AttackConfig) -> Result<f64> {
    config.validate()?;
    let n = original.node_count();
    if anonymized.node_count() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: anonymized.node_count(),
        });
    }
    let mut rng = rng_from_seed(config.rng_seed);
    let seeds = sample(&mut rng, n, config.seed_count(n)).into_vec();
    dv_attack_with_seeds(original, anonymized, &seeds, rng.random())
}

/// [`dv_attack`] with an explicit seed set; `tie_seed` drives tie-breaking.
pub fn dv_attack_with_seeds(original: &Graph, anonymized: &Graph, seeds: &[usize], tie_seed: u64) -> Result<f64> {
    let n = original.node_count();
    if anonymized.node_count() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: anonymized.node_count(),
        });
    }
    if let Some(&bad) = seeds.iter().find(|&&s| s >= n) {
        return Err(Error::NodeOutOfRange { node: bad, n });
    }
    let mut seeds = seeds.to_vec();
    seeds.sort_unstable();
    seeds.dedup();
    let mut rng = rng_from_seed(tie_seed);
    let mut is_seed = vec![false; n];
    for &s in &seeds {
        is_seed[s] = true;
    }
    let others: Vec<usize> = (0..n).filter(|&v| !is_seed[v]).collect();
    if others.is_empty() {
        return Ok(1.0);
    }

    let sig_a = signatures(original, &seeds);
    let sig_b = signatures(anonymized, &seeds);
    // squared distances are integers, so ties are exact
    let mut pairs: Vec<(u64, u64, u32, u32)> = Vec::with_capacity(others.len() * others.len());
    for (a, &u) in others.iter().enumerate() {
        for (b, &v) in others.iter().enumerate() {
            let d: u64 = sig_a[u].iter().zip(&sig_b[v]).map(|(x, y)| x.abs_diff(*y).pow(2)).sum();
            pairs.push((d, rng.random(), a as u32, b as u32));
        }
    }
    pairs.sort_unstable();

    let mut used_a = vec![false; others.len()];
    let mut used_b = vec![false; others.len()];
    let (mut matched, mut correct) = (0, 0);
    for (_, _, a, b) in pairs {
        let (a, b) = (a as usize, b as usize);
        if used_a[a] || used_b[b] {
            continue;
        }
        used_a[a] = true;
        used_b[b] = true;
        correct += usize::from(a == b);
        matched += 1;
        if matched == others.len() {
            break;
        }
    }
    Ok(correct as f64 / others.len() as f64)
}

/// Expected rate of guessing each non-seed node's counterpart uniformly.
pub fn random_guess_rate(n: usize, config: &AttackConfig) -> f64 {
    let others = n - config.seed_count(n);
    if others == 0 {
        1.0
    } else {
        1.0 / others as f64
    }
}
