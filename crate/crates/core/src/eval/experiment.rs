use std::fmt;
use std::io::Write;

use rayon::prelude::*;

use crate::baselines::{dcsbm_config_from, dcsbm_generate, trajanovski_generate, DcsbmConfig, TrajanovskiConfig};
use crate::error::{Error, Result};
use crate::eval::metrics::{compare_with_summary, InputSummary, MetricsReport};
use crate::forge::{Forge, NormalizationRule, Transformation};
use crate::graph::Graph;
use crate::rng::{derive_seed, label};
use crate::spectral::Alpha;

/// z-value of the two-sided 99% normal interval.
pub const Z_99: f64 = 2.576;

/// A graph generator under evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Strategy {
    Sgf {
        alpha: Alpha,
        rule: NormalizationRule,
        transformation: Transformation,
    },
    /// Degree-corrected block model fed the input's Louvain partition.
    Dcsbm,
    /// Rewiring towards the input's Louvain modularity with its community count.
    Trajanovski,
}

impl Strategy {
    pub fn sgf(alpha: Alpha) -> Self {
        Strategy::Sgf {
            alpha,
            rule: NormalizationRule::Truncate,
            transformation: Transformation::Modularity,
        }
    }

    /// Parses `sgf:<alpha>[:<rule>][:<transformation>]`, `dcsbm` or
    /// `trajanovski`.
    pub fn parse(text: &str, logistic_k: f64) -> Result<Self> {
        let mut parts = text.trim().split(':');
        match parts.next().unwrap_or_default() {
            "dcsbm" if parts.next().is_none() => Ok(Strategy::Dcsbm),
            "trajanovski" if parts.next().is_none() => Ok(Strategy::Trajanovski),
            "sgf" => {
                let alpha = parts.next().ok_or_else(|| {
                    Error::InvalidParameter(format!("strategy `{text}` needs an alpha, e.g. sgf:0.9"))
                })?;
                let alpha = alpha
                    .parse::<f64>()
                    .map_err(|_| Error::InvalidParameter(format!("bad alpha `{alpha}` in strategy `{text}`")))
                    .and_then(Alpha::new)?;
                let mut strategy = Strategy::sgf(alpha);
                for extra in parts {
                    if let Strategy::Sgf {
                        rule, transformation, ..
                    } = &mut strategy
                    {
                        if let Ok(t) = extra.parse::<Transformation>() {
                            *transformation = t;
                        } else {
                            *rule = NormalizationRule::parse(extra, logistic_k)?;
                        }
                    }
                }
                Ok(strategy)
            }
            _ => Err(Error::InvalidParameter(format!(
                "unknown strategy `{text}`; expected sgf:<alpha>, dcsbm or trajanovski"
            ))),
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Strategy::Sgf {
                alpha,
                rule,
                transformation,
            } => {
                write!(f, "sgf:{}", alpha.value())?;
                if *rule != NormalizationRule::Truncate {
                    write!(f, ":{}", rule.name())?;
                }
                if *transformation != Transformation::Modularity {
                    write!(f, ":{transformation}")?;
                }
                Ok(())
            }
            Strategy::Dcsbm => f.write_str("dcsbm"),
            Strategy::Trajanovski => f.write_str("trajanovski"),
        }
    }
}

/// Named collection of input graphs.
#[derive(Debug, Clone)]
pub struct Dataset {
    pub name: String,
    pub graphs: Vec<Graph>,
}

enum Prepared {
    Sgf(Box<Forge>, Alpha, NormalizationRule),
    Dcsbm(DcsbmConfig),
    Trajanovski(TrajanovskiConfig),
}

impl Prepared {
    fn new(strategy: &Strategy, graph: &Graph, summary: &InputSummary) -> Result<Self> {
        match *strategy {
            Strategy::Sgf {
                alpha,
                rule,
                transformation,
            } => Ok(Prepared::Sgf(Box::new(Forge::new(graph, transformation)?), alpha, rule)),
            Strategy::Dcsbm => {
                let (partition, _) = summary.louvain.as_ref().ok_or(Error::EmptyGraph)?;
                Ok(Prepared::Dcsbm(dcsbm_config_from(graph, partition)?))
            }
            Strategy::Trajanovski => {
                let (partition, q) = summary.louvain.as_ref().ok_or(Error::EmptyGraph)?;
                Ok(Prepared::Trajanovski(TrajanovskiConfig {
                    q_target: *q,
                    communities: partition.community_count(),
                    n: graph.node_count(),
                    links: graph.edge_count(),
                    rng_seed: 0,
                }))
            }
        }
    }

    fn generate(&self, input: &Graph, rng_seed: u64) -> Result<Graph> {
        let out = match self {
            Prepared::Sgf(forge, alpha, rule) => forge.sample(*alpha, *rule, rng_seed)?,
            Prepared::Dcsbm(config) => dcsbm_generate(&config.clone().with_seed(rng_seed))?,
            Prepared::Trajanovski(config) => trajanovski_generate(&TrajanovskiConfig { rng_seed, ..*config })?.graph,
        };
        out.inherit_attributes(input)
    }
}

/// Metrics of one generated graph, or the reason generation failed.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub strategy: String,
    pub dataset: String,
    pub graph: usize,
    pub run: usize,
    pub outcome: std::result::Result<MetricsReport, String>,
}

/// Aggregate of one metric over the runs where it was defined.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricSummary {
    pub metric: String,
    pub mean: Option<f64>,
    /// Sample standard deviation; needs at least two values.
    pub std: Option<f64>,
    /// Half-width of the normal-approximation 99% interval.
    pub ci99: Option<f64>,
    /// Number of runs contributing a defined value.
    pub runs: usize,
}

impl MetricSummary {
    pub fn from_values(metric: impl Into<String>, values: &[f64]) -> Self {
        let count = values.len();
        let mean = (count > 0).then(|| values.iter().sum::<f64>() / count as f64);
        let std = match (mean, count) {
            (Some(m), c) if c >= 2 => {
                Some((values.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (c - 1) as f64).sqrt())
            }
            _ => None,
        };
        Self {
            metric: metric.into(),
            mean,
            std,
            ci99: std.map(|s| Z_99 * s / (count as f64).sqrt()),
            runs: count,
        }
    }
}

/// All metrics of one strategy on one dataset.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentRow {
    pub strategy: String,
    pub dataset: String,
    /// Runs attempted.
    pub runs: usize,
    /// Runs whose generation or comparison failed; excluded from `metrics`.
    pub failures: usize,
    pub metrics: Vec<MetricSummary>,
}

impl ExperimentRow {
    pub fn metric(&self, name: &str) -> Option<&MetricSummary> {
        self.metrics.iter().find(|m| m.metric == name)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentOutput {
    pub rows: Vec<ExperimentRow>,
    pub records: Vec<RunRecord>,
}

/// Runs every strategy `runs_per_pair` times on every graph of every
/// dataset and aggregates the metrics per (strategy, dataset).
///
/// Each run's seed is derived from the master seed, the strategy and
/// dataset names and the graph and run indices, so the result does not
/// depend on the thread schedule.
pub fn run_experiment(
    strategies: &[Strategy],
    datasets: &[Dataset],
    runs_per_pair: usize,
    rng_seed: u64,
) -> Result<ExperimentOutput> {
    if runs_per_pair < 2 {
        return Err(Error::InvalidParameter(format!(
            "need at least 2 runs per pair for a standard deviation, got {runs_per_pair}"
        )));
    }
    let inputs: Vec<(usize, usize)> = datasets
        .iter()
        .enumerate()
        .flat_map(|(d, ds)| (0..ds.graphs.len()).map(move |g| (d, g)))
        .collect();
    let summaries: Vec<InputSummary> = inputs
        .par_iter()
        .map(|&(d, g)| {
            let seed = derive_seed(rng_seed, &[label("input"), label(&datasets[d].name), g as u64]);
            InputSummary::new(&datasets[d].graphs[g], seed)
        })
        .collect::<Result<_>>()?;

    let names: Vec<String> = strategies.iter().map(Strategy::to_string).collect();
    let jobs: Vec<(usize, usize)> = (0..strategies.len())
        .flat_map(|s| (0..inputs.len()).map(move |i| (s, i)))
        .collect();
    let per_job: Vec<Vec<RunRecord>> = jobs
        .par_iter()
        .map(|&(s, i)| {
            let (d, g) = inputs[i];
            let graph = &datasets[d].graphs[g];
            let prepared = Prepared::new(&strategies[s], graph, &summaries[i]);
            (0..runs_per_pair)
                .into_par_iter()
                .map(|run| {
                    let seed = derive_seed(
                        rng_seed,
                        &[label(&names[s]), label(&datasets[d].name), g as u64, run as u64],
                    );
                    let outcome = prepared
                        .as_ref()
                        .map_err(Error::to_string)
                        .and_then(|p| p.generate(graph, derive_seed(seed, &[0])).map_err(|e| e.to_string()))
                        .and_then(|out| {
                            compare_with_summary(&summaries[i], &out, derive_seed(seed, &[1]))
                                .map_err(|e| e.to_string())
                        });
                    if let Err(reason) = &outcome {
                        log::warn!(
                            "{} on {} graph {g} run {run} failed: {reason}",
                            names[s],
                            datasets[d].name
                        );
                    }
                    RunRecord {
                        strategy: names[s].clone(),
                        dataset: datasets[d].name.clone(),
                        graph: g,
                        run,
                        outcome,
                    }
                })
                .collect()
        })
        .collect();
    let records: Vec<RunRecord> = per_job.into_iter().flatten().collect();
    Ok(ExperimentOutput {
        rows: aggregate(&records),
        records,
    })
}

/// Groups records by (strategy, dataset) in order of first appearance and
/// summarizes each metric.
pub fn aggregate(records: &[RunRecord]) -> Vec<ExperimentRow> {
    let mut rows: Vec<ExperimentRow> = Vec::new();
    let mut values: Vec<Vec<(String, Vec<f64>)>> = Vec::new();
    for record in records {
        let idx = match rows
            .iter()
            .position(|r| r.strategy == record.strategy && r.dataset == record.dataset)
        {
            Some(idx) => idx,
            None => {
                rows.push(ExperimentRow {
                    strategy: record.strategy.clone(),
                    dataset: record.dataset.clone(),
                    runs: 0,
                    failures: 0,
                    metrics: Vec::new(),
                });
                values.push(Vec::new());
                rows.len() - 1
            }
        };
        rows[idx].runs += 1;
        match &record.outcome {
            Ok(report) => {
                for (name, value) in report.entries() {
                    let slot = match values[idx].iter().position(|(n, _)| *n == name) {
                        Some(p) => p,
                        None => {
                            values[idx].push((name, Vec::new()));
                            values[idx].len() - 1
                        }
                    };
                    if let Some(v) = value {
                        values[idx][slot].1.push(v);
                    }
                }
            }
            Err(_) => rows[idx].failures += 1,
        }
    }
    for (row, vals) in rows.iter_mut().zip(values) {
        row.metrics = vals
            .iter()
            .map(|(name, v)| MetricSummary::from_values(name, v))
            .collect();
    }
    rows
}

fn fmt_opt(value: Option<f64>) -> String {
    value.map_or_else(|| "NA".to_string(), |v| v.to_string())
}

/// Writes `strategy,dataset,metric,mean,std,ci99,runs`, one line per metric,
/// plus a `failures` line whose mean is the failure count and whose `runs`
/// is the number of attempted runs.
pub fn write_experiment_csv<W: Write>(rows: &[ExperimentRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["strategy", "dataset", "metric", "mean", "std", "ci99", "runs"])?;
    for row in rows {
        for m in &row.metrics {
            w.write_record([
                row.strategy.as_str(),
                row.dataset.as_str(),
                m.metric.as_str(),
                &fmt_opt(m.mean),
                &fmt_opt(m.std),
                &fmt_opt(m.ci99),
                &m.runs.to_string(),
            ])?;
        }
        w.write_record([
            row.strategy.as_str(),
            row.dataset.as_str(),
            "failures",
            &row.failures.to_string(),
            "NA",
            "NA",
            &row.runs.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{planted_partition, PlantedPartitionConfig};

    fn small_dataset(graphs: usize) -> Dataset {
        Dataset {
            name: "planted".into(),
            graphs: (0..graphs)
                .map(|s| {
                    let cfg = PlantedPartitionConfig {
                        n: 40,
                        communities: 2,
                        p_in: 0.4,
                        p_out: 0.05,
                        rng_seed: s as u64,
                    };
                    planted_partition(&cfg).unwrap().0
                })
                .collect(),
        }
    }

    #[test]
    fn strategy_names_round_trip() {
        for text in [
            "sgf:0.9",
            "sgf:0.5:scale",
            "sgf:0.3:logistic:adjacency",
            "dcsbm",
            "trajanovski",
        ] {
            assert_eq!(Strategy::parse(text, 6.0).unwrap().to_string(), text);
        }
        assert!(Strategy::parse("sgf", 6.0).is_err());
        assert!(Strategy::parse("sgf:1.5", 6.0).is_err());
        assert!(Strategy::parse("dcsbm:1", 6.0).is_err());
        assert!(Strategy::parse("nope", 6.0).is_err());
    }

    #[test]
    fn single_pair_gives_one_row() {
        let out = run_experiment(&[Strategy::sgf(Alpha::new(0.9).unwrap())], &[small_dataset(1)], 2, 5).unwrap();
        assert_eq!(out.rows.len(), 1);
        assert_eq!(out.rows[0].runs, 2);
        assert_eq!(out.rows[0].failures, 0);
        assert_eq!(out.rows[0].metric("modularity_ratio").unwrap().runs, 2);
    }

    #[test]
    fn rejects_single_run() {
        assert!(run_experiment(&[Strategy::Dcsbm], &[small_dataset(1)], 1, 0).is_err());
    }

    #[test]
    fn all_strategies_and_reaggregation() {
        let strategies = [Strategy::sgf(Alpha::ONE), Strategy::Dcsbm, Strategy::Trajanovski];
        let out = run_experiment(&strategies, &[small_dataset(2)], 3, 11).unwrap();
        assert_eq!(out.rows.len(), 3);
        assert_eq!(out.records.len(), 18);
        assert_eq!(aggregate(&out.records), out.rows);
        let exact = out.rows[0].metric("modularity_ratio").unwrap();
        assert_eq!(exact.mean, Some(1.0));
        assert_eq!(exact.std, Some(0.0));
    }

    #[test]
    fn summary_statistics() {
        let m = MetricSummary::from_values("x", &[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(m.mean, Some(2.5));
        let std = (5.0f64 / 3.0).sqrt();
        assert!((m.std.unwrap() - std).abs() < 1e-15);
        assert!((m.ci99.unwrap() - 2.576 * std / 2.0).abs() < 1e-15);
        let one = MetricSummary::from_values("x", &[1.0]);
        assert_eq!((one.std, one.ci99), (None, None));
    }

    #[test]
    fn csv_layout() {
        let out = run_experiment(&[Strategy::Dcsbm], &[small_dataset(1)], 2, 0).unwrap();
        let mut buf = Vec::new();
        write_experiment_csv(&out.rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("strategy,dataset,metric,mean,std,ci99,runs"));
        assert!(lines.next().unwrap().starts_with("dcsbm,planted,modularity_ratio,"));
        assert_eq!(text.lines().last(), Some("dcsbm,planted,failures,0,NA,NA,2"));
    }
}
