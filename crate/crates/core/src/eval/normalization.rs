use std::io::Write;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::forge::{normalize, normalized_entropy, Forge, NormalizationRule, Transformation};
use crate::graph::Graph;
use crate::spectral::{spectral_norm, Alpha};

/// One input of the normalization study.
#[derive(Debug, Clone)]
pub struct StudyGraph {
    pub name: String,
    pub family: String,
    pub graph: Graph,
}

/// Distances and entropy for one (graph, α, rule).
#[derive(Debug, Clone, PartialEq)]
pub struct NormalizationRow {
    pub graph: String,
    pub family: String,
    pub alpha: f64,
    pub rule: String,
    /// `‖A − Ã‖₂`.
    pub dist_spectral: f64,
    /// `‖A − norm(Ã)‖₂`; `None` when the rule is degenerate for `Ã`.
    pub dist_normed: Option<f64>,
    /// Normalized entropy of `norm(Ã)`; `None` when degenerate.
    pub entropy: Option<f64>,
}

/// Evaluates every rule at every α on the adjacency-mode reconstruction of
/// each graph. Rows are ordered by graph, then α, then rule.
pub fn normalization_study(
    graphs: &[StudyGraph],
    alphas: &[Alpha],
    rules: &[NormalizationRule],
) -> Result<Vec<NormalizationRow>> {
    let per_graph: Vec<Vec<NormalizationRow>> = graphs
        .par_iter()
        .map(|input| {
            let forge = Forge::new(&input.graph, Transformation::Adjacency)?;
            let a = input.graph.adjacency_matrix();
            let mut rows = Vec::with_capacity(alphas.len() * rules.len());
            for &alpha in alphas {
                let a_tilde = forge.approximate(alpha)?;
                let dist_spectral = spectral_norm(&(a.as_matrix() - a_tilde.as_matrix()));
                for &rule in rules {
                    let (dist_normed, entropy) = match normalize(&a_tilde, rule) {
                        Ok(p) => (
                            Some(spectral_norm(&(a.as_matrix() - p.as_matrix()))),
                            Some(normalized_entropy(&p).normalized),
                        ),
                        Err(Error::DegenerateRange(_)) => (None, None),
                        Err(e) => return Err(e),
                    };
                    rows.push(NormalizationRow {
                        graph: input.name.clone(),
                        family: input.family.clone(),
                        alpha: alpha.value(),
                        rule: rule.name().to_string(),
                        dist_spectral,
                        dist_normed,
                        entropy,
                    });
                }
            }
            Ok(rows)
        })
        .collect::<Result<_>>()?;
    Ok(per_graph.into_iter().flatten().collect())
}

/// Writes `graph,family,alpha,rule,dist_spectral,dist_normed,entropy`;
/// degenerate cells are `NA`.
pub fn write_normalization_csv<W: Write>(rows: &[NormalizationRow], out: W) -> Result<()> {
    let na = |v: Option<f64>| v.map_or_else(|| "NA".to_string(), |v| v.to_string());
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "graph",
        "family",
        "alpha",
        "rule",
        "dist_spectral",
        "dist_normed",
        "entropy",
    ])?;
    for r in rows {
        w.write_record([
            r.graph.as_str(),
            r.family.as_str(),
            &r.alpha.to_string(),
            r.rule.as_str(),
            &r.dist_spectral.to_string(),
            &na(r.dist_normed),
            &na(r.entropy),
        ])?;
    }
    w.flush()?;
    Ok(())
}
