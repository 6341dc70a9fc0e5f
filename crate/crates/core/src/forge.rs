//! The generation pipeline: transform the input graph, keep a fraction of
//! its eigenpairs, transform back, squash into edge probabilities and draw
//! an inhomogeneous Bernoulli graph.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{degree_vector, DegreeVector, Graph, RealMatrix, SYMMETRY_TOLERANCE};
use crate::rng::rng_from_seed;
use crate::spectral::{eigendecompose, modularity_matrix, Alpha, EigenDecomposition};

/// Default steepness of the logistic rule.
pub const DEFAULT_LOGISTIC_K: f64 = 6.0;

/// Reconstructed entries this close to an integer are rounded to it, so a
/// full-rank reconstruction reproduces the 0/1 adjacency bit for bit.
pub const ROUNDOFF_SNAP: f64 = 1e-9;

/// Matrix the spectral filter acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Transformation {
    /// `B = A − KKᵀ/|K|`
    #[default]
    Modularity,
    /// `A` itself
    Adjacency,
}

impl FromStr for Transformation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "modularity" => Ok(Self::Modularity),
            "adjacency" => Ok(Self::Adjacency),
            other => Err(Error::InvalidParameter(format!("unknown transformation `{other}`"))),
        }
    }
}

impl fmt::Display for Transformation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Modularity => "modularity",
            Self::Adjacency => "adjacency",
        })
    }
}

/// Maps reconstructed adjacency values onto `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum NormalizationRule {
    /// `1 / (1 + e^{(0.5 − x)·k})`, `k ∈ [2, 10]`
    Logistic { k: f64 },
    /// clamp to `[0, 1]`
    #[default]
    Truncate,
    /// affine map of the off-diagonal range onto `[0, 1]`
    Scale,
}

impl NormalizationRule {
    pub fn logistic(k: f64) -> Result<Self> {
        if (2.0..=10.0).contains(&k) {
            Ok(Self::Logistic { k })
        } else {
            Err(Error::InvalidParameter(format!(
                "logistic steepness must lie in [2, 10], got {k}"
            )))
        }
    }

    /// Parses `logistic`, `truncate` or `scale`; `logistic_k` only applies to the first.
    pub fn parse(name: &str, logistic_k: f64) -> Result<Self> {
        match name {
            "logistic" => Self::logistic(logistic_k),
            "truncate" => Ok(Self::Truncate),
            "scale" => Ok(Self::Scale),
            other => Err(Error::InvalidParameter(format!("unknown normalization rule `{other}`"))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Logistic { .. } => "logistic",
            Self::Truncate => "truncate",
            Self::Scale => "scale",
        }
    }
}

impl fmt::Display for NormalizationRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Logistic { k } => write!(f, "logistic({k})"),
            other => f.write_str(other.name()),
        }
    }
}

/// Symmetric matrix of edge probabilities with zero diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityMatrix(DMatrix<f64>);

impl ProbabilityMatrix {
    /// Validates entries in `[0, 1]` and symmetry; the diagonal is zeroed.
    pub fn new(mut m: DMatrix<f64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::DimensionMismatch {
                expected: m.nrows(),
                found: m.ncols(),
            });
        }
        let n = m.nrows();
        for i in 0..n {
            m[(i, i)] = 0.0;
            for j in (i + 1)..n {
                let (a, b) = (m[(i, j)], m[(j, i)]);
                if !(0.0..=1.0).contains(&a) || !(0.0..=1.0).contains(&b) {
                    return Err(Error::InvalidParameter(format!(
                        "probability out of [0, 1] at ({i}, {j}): {a}"
                    )));
                }
                let diff = (a - b).abs();
                if diff > SYMMETRY_TOLERANCE {
                    return Err(Error::NotSymmetric { row: i, col: j, diff });
                }
            }
        }
        Ok(Self(m))
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

    fn upper(&self) -> impl Iterator<Item = f64> + '_ {
        let n = self.order();
        (0..n).flat_map(move |i| ((i + 1)..n).map(move |j| self.0[(i, j)]))
    }
}

/// Entropy of the Bernoulli graph distribution defined by a probability matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyReport {
    /// `raw_bits / normalizer`; 0 when the expected density is 0 or 1.
    pub normalized: f64,
    /// Sum of dyad entropies in bits.
    pub raw_bits: f64,
    /// Expected density `δ` over off-diagonal dyads.
    pub density: f64,
    /// `S = −(n(n−1)/2)(log₂δ + log₂(1−δ))`; 0 when undefined.
    pub normalizer: f64,
    /// `raw_bits` divided by the entropy of a uniform-density Bernoulli
    /// graph, `(n(n−1)/2)·h(δ)`; `None` when that is undefined.
    pub density_weighted: Option<f64>,
}

/// `M` for the chosen transformation.
pub fn transform(graph: &Graph, transformation: Transformation) -> Result<RealMatrix> {
    match transformation {
        Transformation::Modularity => modularity_matrix(graph),
        Transformation::Adjacency => Ok(graph.adjacency_matrix()),
    }
}

/// `Ã = M̃ + KKᵀ/|K|` in modularity mode, `Ã = M̃` in adjacency mode.
pub fn back_transform(
    m_tilde: &RealMatrix,
    degrees: &DegreeVector,
    transformation: Transformation,
) -> Result<RealMatrix> {
    if m_tilde.order() != degrees.len() {
        return Err(Error::DimensionMismatch {
            expected: degrees.len(),
            found: m_tilde.order(),
        });
    }
    match transformation {
        Transformation::Adjacency => Ok(m_tilde.clone()),
        Transformation::Modularity => {
            if degrees.total() == 0 {
                return Err(Error::EmptyGraph);
            }
            let k = degrees.as_f64();
            let total = degrees.total() as f64;
            Ok(RealMatrix::from_symmetric_fn(m_tilde.order(), |i, j| {
                m_tilde.get(i, j) + k[i] * k[j] / total
            }))
        }
    }
}

/// Applies `rule` entrywise. The diagonal of the result is zero.
pub fn normalize(a_tilde: &RealMatrix, rule: NormalizationRule) -> Result<ProbabilityMatrix> {
    let n = a_tilde.order();
    let m = a_tilde.as_matrix();
    let f: Box<dyn Fn(f64) -> f64> = match rule {
        NormalizationRule::Truncate => Box::new(|x: f64| x.clamp(0.0, 1.0)),
        NormalizationRule::Logistic { k } => Box::new(move |x: f64| 1.0 / (1.0 + ((0.5 - x) * k).exp())),
        NormalizationRule::Scale => {
            let (lo, hi) = (0..n)
                .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), (i, j)| {
                    (lo.min(m[(i, j)]), hi.max(m[(i, j)]))
                });
            if n >= 2 && hi <= lo {
                return Err(Error::DegenerateRange(lo));
            }
            let span = hi - lo;
            Box::new(move |x: f64| ((x - lo) / span).clamp(0.0, 1.0))
        }
    };
    let mut out = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in (i + 1)..n {
            let p = f(m[(i, j)]);
            out[(i, j)] = p;
            out[(j, i)] = p;
        }
    }
    ProbabilityMatrix::new(out)
}

/// Draws each dyad `j > i` independently, in row-major order, from one
/// seeded stream.
pub fn sample_bernoulli(probabilities: &ProbabilityMatrix, rng_seed: u64) -> Graph {
    let n = probabilities.order();
    let mut rng = rng_from_seed(rng_seed);
    let mut graph = Graph::empty(n);
    for i in 0..n {
        for j in (i + 1)..n {
            let u: f64 = rng.random();
            if u < probabilities.get(i, j) {
                graph.add_edge(i, j).expect("dyad indices are in range and distinct");
            }
        }
    }
    graph
}

fn binary_entropy(p: f64) -> f64 {
    let term = |x: f64| if x <= 0.0 { 0.0 } else { -x * x.log2() };
    term(p) + term(1.0 - p)
}

pub fn normalized_entropy(probabilities: &ProbabilityMatrix) -> EntropyReport {
    let n = probabilities.order();
    let pairs = (n * n.saturating_sub(1) / 2) as f64;
    let raw_bits: f64 = probabilities.upper().map(binary_entropy).sum();
    if pairs == 0.0 {
        return EntropyReport {
            normalized: 0.0,
            raw_bits,
            density: 0.0,
            normalizer: 0.0,
            density_weighted: None,
        };
    }
    let density = (probabilities.upper().sum::<f64>() / pairs).clamp(0.0, 1.0);
    if density <= 0.0 || density >= 1.0 {
        return EntropyReport {
            normalized: 0.0,
            raw_bits,
            density,
            normalizer: 0.0,
            density_weighted: None,
        };
    }
    let normalizer = -pairs * (density.log2() + (1.0 - density).log2());
    let max_at_density = pairs * binary_entropy(density);
    EntropyReport {
        normalized: raw_bits / normalizer,
        raw_bits,
        density,
        normalizer,
        density_weighted: Some(raw_bits / max_at_density),
    }
}

/// Full pipeline configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SgfConfig {
    pub alpha: Alpha,
    pub rule: NormalizationRule,
    pub rng_seed: u64,
    pub transformation: Transformation,
}

impl SgfConfig {
    /// Modularity transformation, truncate rule, seed 0.
    pub fn new(alpha: Alpha) -> Self {
        Self {
            alpha,
            rule: NormalizationRule::Truncate,
            rng_seed: 0,
            transformation: Transformation::Modularity,
        }
    }

    pub fn with_rule(mut self, rule: NormalizationRule) -> Self {
        self.rule = rule;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.rng_seed = seed;
        self
    }

    pub fn with_transformation(mut self, transformation: Transformation) -> Self {
        self.transformation = transformation;
        self
    }
}

/// Pipeline state for one input graph: the transformation's
/// eigendecomposition is computed once and reused for any number of
/// `(α, rule, seed)` draws.
#[derive(Debug, Clone)]
pub struct Forge {
    degrees: DegreeVector,
    transformation: Transformation,
    eigen: EigenDecomposition,
}

impl Forge {
    pub fn new(graph: &Graph, transformation: Transformation) -> Result<Self> {
        let m = transform(graph, transformation)?;
        Ok(Self {
            degrees: degree_vector(graph),
            transformation,
            eigen: eigendecompose(&m)?,
        })
    }

    pub fn order(&self) -> usize {
        self.degrees.len()
    }

    pub fn eigen(&self) -> &EigenDecomposition {
        &self.eigen
    }

    pub fn transformation(&self) -> Transformation {
        self.transformation
    }

    /// Back-transformed low-rank reconstruction `Ã`.
    pub fn approximate(&self, alpha: Alpha) -> Result<RealMatrix> {
        let m_tilde = self.eigen.low_rank_approx(alpha);
        let a_tilde = back_transform(&m_tilde, &self.degrees, self.transformation)?;
        let mut m = a_tilde.into_matrix();
        m.apply(|x| {
            let r = x.round();
            if (*x - r).abs() <= ROUNDOFF_SNAP {
                *x = r;
            }
        });
        Ok(RealMatrix::symmetrized(m))
    }

    /// The probability matrix `A†` sampled by [`Forge::sample`].
    pub fn expected(&self, alpha: Alpha, rule: NormalizationRule) -> Result<ProbabilityMatrix> {
        normalize(&self.approximate(alpha)?, rule)
    }

    pub fn sample(&self, alpha: Alpha, rule: NormalizationRule, rng_seed: u64) -> Result<Graph> {
        Ok(sample_bernoulli(&self.expected(alpha, rule)?, rng_seed))
    }
}

/// The probability matrix the pipeline samples from.
pub fn expected_matrix(graph: &Graph, config: &SgfConfig) -> Result<ProbabilityMatrix> {
    Forge::new(graph, config.transformation)?.expected(config.alpha, config.rule)
}

/// One synthetic graph with the same node count as `graph`.
pub fn sgf(graph: &Graph, config: &SgfConfig) -> Result<Graph> {
    Ok(sample_bernoulli(&expected_matrix(graph, config)?, config.rng_seed))
}
