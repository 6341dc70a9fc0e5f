//! Modularity matrix, modulus-ordered symmetric eigendecomposition and the
//! rank-truncated reconstruction built on it.
//!
//! For a real symmetric `M = Σ λᵢ vᵢ vᵢᵀ` with `|λ₁| ≥ … ≥ |λₙ|`, keeping the
//! first `r = ⌈α·n⌉` terms gives `M̃`, and the spectral norm of the residual
//! `M − M̃` is exactly `|λ_{r+1}|` (zero when `r = n`).

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::graph::{degree_vector, Graph, RealMatrix};

/// Moduli closer than this (relative to the largest modulus) are treated
/// as ties when ordering eigenpairs.
const TIE_TOLERANCE: f64 = 1e-12;

/// Fraction of eigenpairs retained by the low-rank approximation.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Alpha(f64);

impl Alpha {
    pub const ONE: Alpha = Alpha(1.0);

    pub fn new(value: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&value) {
            Ok(Self(value))
        } else {
            Err(Error::InvalidParameter(format!(
                "alpha must lie in [0, 1], got {value}"
            )))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// Retained rank `⌈α·n⌉`.
    pub fn retained(self, n: usize) -> usize {
        // 0.3 * 10 = 3.0000000000000004 in binary; shave the representation error
        let scaled = self.0 * n as f64;
        ((scaled - 1e-9).ceil().max(0.0) as usize).min(n)
    }
}

impl std::fmt::Display for Alpha {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// `B[i][j] = A[i][j] − kᵢkⱼ/|K|`.
pub fn modularity_matrix(graph: &Graph) -> Result<RealMatrix> {
    let dv = degree_vector(graph);
    if dv.total() == 0 {
        return Err(Error::EmptyGraph);
    }
    let k = dv.as_f64();
    let total = dv.total() as f64;
    Ok(RealMatrix::from_symmetric_fn(graph.node_count(), |i, j| {
        let a = if graph.has_edge(i, j) { 1.0 } else { 0.0 };
        a - k[i] * k[j] / total
    }))
}

/// Eigenpairs of a symmetric matrix, ordered by descending `|λ|`.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    values: Vec<f64>,
    /// Column `i` is the unit eigenvector paired with `values[i]`.
    vectors: DMatrix<f64>,
}

impl EigenDecomposition {
    pub fn order(&self) -> usize {
        self.values.len()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.values
    }

    pub fn eigenvectors(&self) -> &DMatrix<f64> {
        &self.vectors
    }

    /// `M̃ = Σ_{i ≤ ⌈αn⌉} λᵢ vᵢ vᵢᵀ`.
    pub fn low_rank_approx(&self, alpha: Alpha) -> RealMatrix {
        let n = self.order();
        let r = alpha.retained(n);
        if r == 0 {
            return RealMatrix::zeros(n);
        }
        let basis = self.vectors.columns(0, r);
        let mut scaled = basis.clone_owned();
        for (c, mut col) in scaled.column_iter_mut().enumerate() {
            col *= self.values[c];
        }
        RealMatrix::symmetrized(scaled * basis.transpose())
    }

    /// `|λ_{⌈αn⌉+1}|`, or 0 when every eigenpair is retained.
    pub fn approx_error_bound(&self, alpha: Alpha) -> f64 {
        let r = alpha.retained(self.order());
        self.values.get(r).map_or(0.0, |v| v.abs())
    }
}

/// Dense symmetric eigendecomposition with deterministic ordering and signs.
///
/// Eigenpairs are sorted by descending modulus; equal moduli put the more
/// positive eigenvalue first, then the solver's original index. Each
/// eigenvector is flipped so its largest-magnitude component is positive.
pub fn eigendecompose(matrix: &RealMatrix) -> Result<EigenDecomposition> {
    // re-validate: callers may have built the matrix through unchecked paths
    let checked = RealMatrix::new(matrix.as_matrix().clone())?;
    let n = checked.order();
    if n == 0 {
        return Ok(EigenDecomposition {
            values: Vec::new(),
            vectors: DMatrix::zeros(0, 0),
        });
    }
    let eig = SymmetricEigen::new(checked.into_matrix());

    let mut order: Vec<usize> = (0..n).collect();
    let vals = &eig.eigenvalues;
    order.sort_by(|&a, &b| {
        vals[b]
            .abs()
            .total_cmp(&vals[a].abs())
            .then(vals[b].total_cmp(&vals[a]))
            .then(a.cmp(&b))
    });
    // regroup near-equal moduli so tie-breaking is not at the mercy of round-off
    let scale = vals.iter().fold(0.0_f64, |m, v| m.max(v.abs())).max(1.0);
    let mut start = 0;
    while start < n {
        let head = vals[order[start]].abs();
        let mut end = start + 1;
        while end < n && head - vals[order[end]].abs() <= TIE_TOLERANCE * scale {
            end += 1;
        }
        order[start..end].sort_by(|&a, &b| vals[b].total_cmp(&vals[a]).then(a.cmp(&b)));
        start = end;
    }

    let mut values = Vec::with_capacity(n);
    let mut vectors = DMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        values.push(vals[src]);
        let col = eig.eigenvectors.column(src);
        let norm = col.norm();
        let pivot = col
            .iter()
            .enumerate()
            .fold(
                (0, 0.0_f64),
                |best, (i, &x)| if x.abs() > best.1.abs() + 1e-14 { (i, x) } else { best },
            )
            .0;
        let sign = if col[pivot] < 0.0 { -1.0 } else { 1.0 };
        vectors.set_column(dst, &(col * (sign / norm)));
    }
    Ok(EigenDecomposition { values, vectors })
}

/// Spectral norm of a symmetric matrix (largest eigenvalue modulus).
pub fn spectral_norm(matrix: &DMatrix<f64>) -> f64 {
    if matrix.is_empty() {
        return 0.0;
    }
    matrix
        .clone()
        .symmetric_eigenvalues()
        .iter()
        .fold(0.0_f64, |m, v| m.max(v.abs()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag(values: &[f64]) -> RealMatrix {
        RealMatrix::new(DMatrix::from_diagonal(&nalgebra::DVector::from_row_slice(values))).unwrap()
    }

    fn k3() -> Graph {
        Graph::from_edges(3, [(0, 1), (0, 2), (1, 2)]).unwrap()
    }

    #[test]
    fn modularity_matrix_of_triangle() {
        let b = modularity_matrix(&k3()).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let expected = if i == j { -2.0 / 3.0 } else { 1.0 / 3.0 };
                assert!((b.get(i, j) - expected).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn modularity_matrix_of_single_edge() {
        let g = Graph::from_edges(2, [(0, 1)]).unwrap();
        let b = modularity_matrix(&g).unwrap();
        assert_eq!(b.as_matrix(), &DMatrix::from_row_slice(2, 2, &[-0.5, 0.5, 0.5, -0.5]));
    }

    #[test]
    fn modularity_matrix_rejects_empty_graph() {
        assert!(matches!(modularity_matrix(&Graph::empty(3)), Err(Error::EmptyGraph)));
    }

    #[test]
    fn diagonal_eigenvalues_sorted_by_modulus() {
        let e = eigendecompose(&diag(&[2.0, -3.0, 1.0])).unwrap();
        assert_eq!(e.eigenvalues(), &[-3.0, 2.0, 1.0]);
        // sign-normalized unit vectors e1, e0, e2
        assert_eq!(e.eigenvectors().column(0)[1], 1.0);
        assert_eq!(e.eigenvectors().column(1)[0], 1.0);
    }

    #[test]
    fn equal_moduli_put_positive_first() {
        let e = eigendecompose(&diag(&[-2.0, 2.0, 1.0])).unwrap();
        assert_eq!(e.eigenvalues(), &[2.0, -2.0, 1.0]);
    }

    #[test]
    fn zero_matrix_has_zero_spectrum() {
        let e = eigendecompose(&RealMatrix::zeros(3)).unwrap();
        assert!(e.eigenvalues().iter().all(|&v| v == 0.0));
        let v = e.eigenvectors();
        assert!((v.transpose() * v - DMatrix::identity(3, 3)).abs().max() < 1e-12);
    }

    #[test]
    fn triangle_modularity_spectrum_matches_characteristic_polynomial() {
        // B = J/3 - I, so det(B - tI) has roots {-1, -1, 0}; the cubic's
        // coefficients are built from B's entries, not from the solver
        let b = modularity_matrix(&k3()).unwrap();
        let m = b.as_matrix();
        let trace = m.trace();
        let minors: f64 = (0..3)
            .flat_map(|i| ((i + 1)..3).map(move |j| (i, j)))
            .map(|(i, j)| m[(i, i)] * m[(j, j)] - m[(i, j)] * m[(j, i)])
            .sum();
        let det = m.determinant();
        let char_poly = |t: f64| -t * t * t + trace * t * t - minors * t + det;
        let e = eigendecompose(&b).unwrap();
        for &lambda in e.eigenvalues() {
            assert!(char_poly(lambda).abs() < 1e-12);
        }
        let mut vals = e.eigenvalues().to_vec();
        vals.sort_by(f64::total_cmp);
        assert!((vals[0] + 1.0).abs() < 1e-12 && (vals[1] + 1.0).abs() < 1e-12);
        assert!(vals[2].abs() < 1e-12);
    }

    #[test]
    fn non_symmetric_input_is_rejected() {
        let m = RealMatrix(DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 0.0, 0.0]));
        assert!(matches!(eigendecompose(&m), Err(Error::NotSymmetric { .. })));
    }

    #[test]
    fn low_rank_boundaries() {
        let m = diag(&[3.0, 1.0]);
        let e = eigendecompose(&m).unwrap();
        assert!(e.low_rank_approx(Alpha::ONE).max_abs_diff(&m) < 1e-12);
        assert_eq!(e.low_rank_approx(Alpha::new(0.0).unwrap()), RealMatrix::zeros(2));
        let half = e.low_rank_approx(Alpha::new(0.5).unwrap());
        assert!(half.max_abs_diff(&diag(&[3.0, 0.0])) < 1e-12);
    }

    #[test]
    fn error_bound_examples() {
        let e = eigendecompose(&diag(&[3.0, 1.0])).unwrap();
        assert_eq!(e.approx_error_bound(Alpha::ONE), 0.0);
        assert_eq!(e.approx_error_bound(Alpha::new(0.5).unwrap()), 1.0);
    }

    #[test]
    fn retained_rank_rounds_up() {
        assert_eq!(Alpha::new(0.3).unwrap().retained(10), 3);
        assert_eq!(Alpha::new(0.9).unwrap().retained(128), 116);
        assert_eq!(Alpha::new(0.0).unwrap().retained(5), 0);
        assert_eq!(Alpha::new(0.01).unwrap().retained(5), 1);
        assert!(Alpha::new(1.2).is_err());
        assert!(Alpha::new(f64::NAN).is_err());
    }
}
