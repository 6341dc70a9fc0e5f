//! Reference computations written independently of the library code, used
//! as oracles by the integration and acceptance tests.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use spectral_forge::{Graph, Partition};

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations.
pub fn jacobi_eigenvalues(m: &[Vec<f64>]) -> Vec<f64> {
    let n = m.len();
    let mut a: Vec<Vec<f64>> = m.to_vec();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        let scale: f64 = a.iter().flatten().map(|x| x * x).sum::<f64>().max(f64::MIN_POSITIVE);
        if off <= 1e-30 * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                if a[p][q] == 0.0 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    (0..n).map(|i| a[i][i]).collect()
}

/// Largest eigenvalue modulus of a symmetric matrix.
pub fn symmetric_spectral_norm(m: &[Vec<f64>]) -> f64 {
    jacobi_eigenvalues(m).iter().fold(0.0, |acc, v| acc.max(v.abs()))
}

/// `(1/|K|) Σ_i Σ_j (A_ij − k_i k_j/|K|) δ(c_i, c_j)` by direct double sum.
pub fn modularity_double_sum(graph: &Graph, assignment: &[usize]) -> f64 {
    let n = graph.node_count();
    let k: Vec<f64> = (0..n).map(|i| graph.degree(i) as f64).collect();
    let total: f64 = k.iter().sum();
    let mut q = 0.0;
    for i in 0..n {
        for j in 0..n {
            if assignment[i] == assignment[j] {
                let a = if graph.has_edge(i, j) { 1.0 } else { 0.0 };
                q += a - k[i] * k[j] / total;
            }
        }
    }
    q / total
}

/// Every set partition of `0..n` as restricted-growth strings.
pub fn all_partitions(n: usize) -> Vec<Vec<usize>> {
    fn grow(prefix: &mut Vec<usize>, max: usize, n: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        for c in 0..=max + 1 {
            if prefix.is_empty() && c > 0 {
                break;
            }
            prefix.push(c);
            let next_max = if prefix.len() == 1 { 0 } else { max.max(c) };
            grow(prefix, next_max, n, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        out.push(Vec::new());
    } else {
        grow(&mut Vec::new(), 0, n, &mut out);
    }
    out
}

/// Exhaustive maximum of the double-sum modularity.
pub fn oracle_max_modularity(graph: &Graph) -> f64 {
    all_partitions(graph.node_count())
        .iter()
        .map(|p| modularity_double_sum(graph, p))
        .fold(f64::NEG_INFINITY, f64::max)
}

pub fn partition(assignment: &[usize]) -> Partition {
    Partition::from_labels(assignment)
}

/// Spearman rank correlation with average ranks for ties.
pub fn spearman(x: &[f64], y: &[f64]) -> f64 {
    fn ranks(v: &[f64]) -> Vec<f64> {
        let mut idx: Vec<usize> = (0..v.len()).collect();
        idx.sort_by(|&a, &b| v[a].partial_cmp(&v[b]).unwrap());
        let mut r = vec![0.0; v.len()];
        let mut i = 0;
        while i < idx.len() {
            let mut j = i;
            while j + 1 < idx.len() && v[idx[j + 1]] == v[idx[i]] {
                j += 1;
            }
            let avg = (i + j) as f64 / 2.0 + 1.0;
            for &k in &idx[i..=j] {
                r[k] = avg;
            }
            i = j + 1;
        }
        r
    }
    let (rx, ry) = (ranks(x), ranks(y));
    let n = x.len() as f64;
    let (mx, my) = (rx.iter().sum::<f64>() / n, ry.iter().sum::<f64>() / n);
    let cov: f64 = rx.iter().zip(&ry).map(|(a, b)| (a - mx) * (b - my)).sum();
    let vx: f64 = rx.iter().map(|a| (a - mx).powi(2)).sum();
    let vy: f64 = ry.iter().map(|b| (b - my).powi(2)).sum();
    cov / (vx * vy).sqrt()
}

/// Random simple graph with independent edges, drawn from a generator
/// unrelated to the library's.
pub fn random_graph(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let edges: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
        .filter(|_| rng.random::<f64>() < p)
        .collect();
    Graph::from_edges(n, edges).unwrap()
}

/// Random connected graph: a random tree plus extra random edges.
pub fn random_connected_graph(n: usize, extra_p: f64, seed: u64) -> Graph {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for v in 1..n {
        edges.push((rng.random_range(0..v), v));
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.random::<f64>() < extra_p {
                edges.push((i, j));
            }
        }
    }
    Graph::from_edges(n, edges).unwrap()
}

/// `k` disjoint cliques of `size` nodes.
pub fn disjoint_cliques(k: usize, size: usize) -> Graph {
    let mut edges = Vec::new();
    for c in 0..k {
        let base = c * size;
        for i in 0..size {
            for j in (i + 1)..size {
                edges.push((base + i, base + j));
            }
        }
    }
    Graph::from_edges(k * size, edges).unwrap()
}

pub fn dense(m: &nalgebra::DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
        .collect()
}

#[test]
fn oracle_self_checks() {
    assert_eq!(all_partitions(4).len(), 15);
    assert_eq!(all_partitions(6).len(), 203);
    let mut ev = jacobi_eigenvalues(&[vec![2.0, 1.0], vec![1.0, 2.0]]);
    ev.sort_by(f64::total_cmp);
    assert!((ev[0] - 1.0).abs() < 1e-14 && (ev[1] - 3.0).abs() < 1e-14);
    assert!((spearman(&[1.0, 2.0, 3.0], &[3.0, 2.0, 1.0]) + 1.0).abs() < 1e-15);
}
