use std::collections::BTreeMap;

use crate::community::{louvain_maximize, modularity, Partition};
use crate::error::{Error, Result};
use crate::graph::{average_clustering, degree_vector, Graph};

/// Structural comparison of an output graph against its input.
/// `None` marks a ratio or correlation that is undefined for this pair.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricsReport {
    /// `Qₒ*/Qᵢ*` of the Louvain maxima.
    pub modularity_ratio: Option<f64>,
    /// `mₒ/mᵢ` of the Louvain community counts.
    pub partition_number_ratio: Option<f64>,
    pub clustering_ratio: Option<f64>,
    /// Pearson correlation of the degree sequences aligned by node index.
    pub degree_correlation: Option<f64>,
    /// Per attribute, `Qₒ/Qᵢ` for the partition the attribute induces.
    pub attribute_modularity_ratios: BTreeMap<String, Option<f64>>,
}

impl MetricsReport {
    /// Scalar metrics in a fixed order, attributes last as `attr:<name>`.
    pub fn entries(&self) -> Vec<(String, Option<f64>)> {
        let mut out = vec![
            ("modularity_ratio".to_string(), self.modularity_ratio),
            ("partition_number_ratio".to_string(), self.partition_number_ratio),
            ("clustering_ratio".to_string(), self.clustering_ratio),
            ("degree_correlation".to_string(), self.degree_correlation),
        ];
        out.extend(
            self.attribute_modularity_ratios
                .iter()
                .map(|(name, v)| (format!("attr:{name}"), *v)),
        );
        out
    }
}

/// Everything about the input side of a comparison, computed once and
/// reused across many outputs.
#[derive(Debug, Clone)]
pub struct InputSummary {
    /// Louvain maximum and partition; `None` for an edgeless input.
    pub louvain: Option<(Partition, f64)>,
    pub clustering: f64,
    pub degrees: Vec<f64>,
    /// Attribute name, induced partition and the input's modularity for it.
    pub attributes: Vec<(String, Partition, Option<f64>)>,
}

impl InputSummary {
    pub fn new(input: &Graph, rng_seed: u64) -> Result<Self> {
        let louvain = match louvain_maximize(input, rng_seed) {
            Ok(found) => Some(found),
            Err(Error::EmptyGraph) => None,
            Err(e) => return Err(e),
        };
        let attributes = input
            .attributes()
            .iter()
            .map(|(name, values)| {
                let p = Partition::from_labels(values);
                let q = modularity_or_none(input, &p)?;
                Ok((name.clone(), p, q))
            })
            .collect::<Result<_>>()?;
        Ok(Self {
            louvain,
            clustering: average_clustering(input),
            degrees: degree_vector(input).as_f64(),
            attributes,
        })
    }

    pub fn node_count(&self) -> usize {
        self.degrees.len()
    }
}

fn modularity_or_none(graph: &Graph, partition: &Partition) -> Result<Option<f64>> {
    match modularity(graph, partition) {
        Ok(q) => Ok(Some(q)),
        Err(Error::EmptyGraph) => Ok(None),
        Err(e) => Err(e),
    }
}

fn ratio(numerator: f64, denominator: f64) -> Option<f64> {
    let r = numerator / denominator;
    (denominator != 0.0 && r.is_finite()).then_some(r)
}

/// Pearson correlation; `None` when either side has zero variance.
pub fn pearson(x: &[f64], y: &[f64]) -> Option<f64> {
    if x.len() != y.len() || x.len() < 2 {
        return None;
    }
    let n = x.len() as f64;
    let (mx, my) = (x.iter().sum::<f64>() / n, y.iter().sum::<f64>() / n);
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return None;
    }
    Some((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

/// Compares `output` against a precomputed input summary. An edgeless
/// output has modularity 0 and no Louvain partition.
pub fn compare_with_summary(summary: &InputSummary, output: &Graph, rng_seed: u64) -> Result<MetricsReport> {
    if output.node_count() != summary.node_count() {
        return Err(Error::DimensionMismatch {
            expected: summary.node_count(),
            found: output.node_count(),
        });
    }
    let out_louvain = match louvain_maximize(output, rng_seed) {
        Ok(found) => Some(found),
        Err(Error::EmptyGraph) => None,
        Err(e) => return Err(e),
    };
    let (modularity_ratio, partition_number_ratio) = match (&summary.louvain, &out_louvain) {
        (Some((pi, qi)), Some((po, qo))) => (
            ratio(*qo, *qi),
            ratio(po.community_count() as f64, pi.community_count() as f64),
        ),
        (Some((_, qi)), None) => (ratio(0.0, *qi), None),
        (None, _) => (None, None),
    };
    let mut attribute_modularity_ratios = BTreeMap::new();
    for (name, partition, qi) in &summary.attributes {
        let qo = modularity_or_none(output, partition)?.unwrap_or(0.0);
        attribute_modularity_ratios.insert(name.clone(), qi.and_then(|qi| ratio(qo, qi)));
    }
    Ok(MetricsReport {
        modularity_ratio,
        partition_number_ratio,
        clustering_ratio: ratio(average_clustering(output), summary.clustering),
        degree_correlation: pearson(&summary.degrees, &degree_vector(output).as_f64()),
        attribute_modularity_ratios,
    })
}

/// Compares two graphs aligned by node index. Both sides are maximized with
/// the same Louvain seed, so comparing a graph with itself gives ratios of
/// exactly 1. Attributes are taken from `input`.
pub fn compare(input: &Graph, output: &Graph, rng_seed: u64) -> Result<MetricsReport> {
    compare_with_summary(&InputSummary::new(input, rng_seed)?, output, rng_seed)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_k4() -> Graph {
        let mut edges = Vec::new();
        for base in [0, 4] {
            for i in 0..4 {
                for j in (i + 1)..4 {
                    edges.push((base + i, base + j));
                }
            }
        }
        Graph::from_edges(8, edges).unwrap()
    }

    fn lollipop() -> Graph {
        Graph::from_edges(7, [(0, 1), (0, 2), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (4, 6)]).unwrap()
    }

    #[test]
    fn self_comparison_is_identity() {
        let g = lollipop();
        let r = compare(&g, &g, 3).unwrap();
        assert_eq!(r.modularity_ratio, Some(1.0));
        assert_eq!(r.partition_number_ratio, Some(1.0));
        assert_eq!(r.clustering_ratio, Some(1.0));
        assert!((r.degree_correlation.unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn regular_graph_has_undefined_correlation() {
        let g = two_k4();
        let r = compare(&g, &g, 0).unwrap();
        assert_eq!(r.degree_correlation, None);
        assert_eq!(r.modularity_ratio, Some(1.0));
    }

    #[test]
    fn empty_output() {
        let g = lollipop();
        let r = compare(&g, &Graph::empty(7), 0).unwrap();
        assert_eq!(r.clustering_ratio, Some(0.0));
        assert_eq!(r.degree_correlation, None);
        assert_eq!(r.modularity_ratio, Some(0.0));
        assert_eq!(r.partition_number_ratio, None);
    }

    #[test]
    fn attribute_ratio_for_planted_labels() {
        let labels = (0..8).map(|i| if i < 4 { "a" } else { "b" }.to_string()).collect();
        let g = two_k4().with_attribute("group", labels).unwrap();
        let r = compare(&g, &two_k4(), 1).unwrap();
        assert_eq!(r.attribute_modularity_ratios["group"], Some(1.0));
    }

    #[test]
    fn zero_input_clustering_is_undefined() {
        let path = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        assert_eq!(compare(&path, &path, 0).unwrap().clustering_ratio, None);
    }

    #[test]
    fn size_mismatch_errors() {
        assert!(compare(&lollipop(), &Graph::empty(3), 0).is_err());
    }

    #[test]
    fn pearson_examples() {
        assert!((pearson(&[1.0, 2.0, 3.0], &[2.0, 4.0, 6.0]).unwrap() - 1.0).abs() < 1e-15);
        assert!((pearson(&[1.0, 2.0, 3.0], &[3.0, 2.0, 1.0]).unwrap() + 1.0).abs() < 1e-15);
        // hand value: x = (1,2,3,4), y = (1,3,2,4) → sxy = 4, sxx = syy = 5
        assert!((pearson(&[1.0, 2.0, 3.0, 4.0], &[1.0, 3.0, 2.0, 4.0]).unwrap() - 0.8).abs() < 1e-15);
        assert_eq!(pearson(&[1.0, 1.0], &[0.0, 1.0]), None);
    }
}
