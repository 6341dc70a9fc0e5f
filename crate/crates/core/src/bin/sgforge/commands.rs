use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use spectral_forge::eval::{
    compare, compare_with_summary, dv_attack, normalization_study, random_guess_rate, run_experiment,
    write_experiment_csv, write_normalization_csv, AttackConfig, Dataset, InputSummary, MetricSummary, Strategy,
    StudyGraph,
};
use spectral_forge::generators::{barabasi_albert, erdos_renyi};
use spectral_forge::rng::{derive_seed, label};
use spectral_forge::{
    load_attributes, load_edge_list, normalized_entropy, write_edge_list, Alpha, Forge, Graph, NormalizationRule,
    Transformation, DEFAULT_LOGISTIC_K,
};

use crate::config::{self, CliConfig};
use crate::presets::PresetSpec;
use crate::{AttackArgs, BenchArgs, CliError, Common, EvalArgs, GenerateArgs, RuleName, SgfArgs, SweepArgs};

const DEFAULT_SEED: u64 = 0;
const DEFAULT_ALPHA: f64 = 0.9;
const DEFAULT_ALPHA_GRID: &str = "0.1:1.0:0.1";
const DEFAULT_RUNS: usize = 10;
const DEFAULT_SEED_FRACTION: f64 = 0.05;
const STUDY_NODES: usize = 100;
const STUDY_MEAN_DEGREE: f64 = 4.5;

struct Context {
    config: CliConfig,
    seed: u64,
    output: Option<PathBuf>,
    output_dir: Option<PathBuf>,
}

impl Context {
    fn new(common: &Common) -> Result<Self, CliError> {
        let config = match &common.config {
            Some(path) => config::load(path)?,
            None => CliConfig::default(),
        };
        Ok(Self {
            seed: common.seed.or(config.seed).unwrap_or(DEFAULT_SEED),
            output: common.output.clone(),
            output_dir: common.output_dir.clone().or_else(|| config.output_dir.clone()),
            config,
        })
    }

    /// Writes to `--output`, else `<output-dir>/<default_name>`, else stdout.
    fn emit(&self, default_name: &str, bytes: &[u8]) -> Result<(), CliError> {
        let path = match (&self.output, &self.output_dir) {
            (Some(path), _) => Some(path.clone()),
            (None, Some(dir)) => {
                fs::create_dir_all(dir).map_err(|source| CliError::Io {
                    path: dir.clone(),
                    source,
                })?;
                Some(dir.join(default_name))
            }
            (None, None) => None,
        };
        match path {
            Some(path) => fs::write(&path, bytes).map_err(|source| CliError::Io { path, source }),
            None => std::io::stdout().write_all(bytes).map_err(|source| CliError::Io {
                path: "<stdout>".into(),
                source,
            }),
        }
    }

    fn rule(&self, args: &SgfArgs) -> Result<NormalizationRule, CliError> {
        let k = args
            .logistic_k
            .or(self.config.sgf.logistic_k)
            .unwrap_or(DEFAULT_LOGISTIC_K);
        let name = match args.rule {
            Some(RuleName::Logistic) => "logistic",
            Some(RuleName::Truncate) => "truncate",
            Some(RuleName::Scale) => "scale",
            None => self.config.sgf.rule.as_deref().unwrap_or("truncate"),
        };
        Ok(NormalizationRule::parse(name, k)?)
    }

    fn transformation(&self, args: &SgfArgs) -> Transformation {
        args.transformation
            .map(Transformation::from)
            .or(self.config.sgf.transformation)
            .unwrap_or_default()
    }

    fn alpha(&self, args: &SgfArgs) -> Result<Alpha, CliError> {
        Ok(Alpha::new(
            args.alpha.or(self.config.sgf.alpha).unwrap_or(DEFAULT_ALPHA),
        )?)
    }

    fn runs(&self, flag: Option<usize>) -> usize {
        flag.or(self.config.experiment.runs).unwrap_or(DEFAULT_RUNS)
    }

    fn attack_config(&self, flag: Option<f64>, rng_seed: u64) -> AttackConfig {
        AttackConfig {
            seed_fraction: flag
                .or(self.config.experiment.seed_fraction)
                .unwrap_or(DEFAULT_SEED_FRACTION),
            rng_seed,
        }
    }
}

fn read_graph(path: &Path) -> Result<Graph, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    load_edge_list(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn read_with_attrs(path: &Path, attrs: Option<&Path>) -> Result<Graph, CliError> {
    let graph = read_graph(path)?;
    match attrs {
        Some(attr_path) => {
            let text = fs::read_to_string(attr_path).map_err(|source| CliError::Io {
                path: attr_path.to_path_buf(),
                source,
            })?;
            load_attributes(&text, graph).map_err(|e| CliError::Usage(format!("{}: {e}", attr_path.display())))
        }
        None => Ok(graph),
    }
}

/// Parses `start:stop:step` (inclusive of `stop` up to rounding) or a
/// comma-separated list. Grid points are rounded to 12 decimals.
pub fn parse_alpha_grid(text: &str) -> Result<Vec<Alpha>, CliError> {
    let bad = || CliError::Usage(format!("bad alpha grid `{text}`; use start:stop:step or a comma list"));
    let values: Vec<f64> = if text.contains(':') {
        let parts: Vec<f64> = text
            .split(':')
            .map(|p| p.trim().parse::<f64>().map_err(|_| bad()))
            .collect::<Result<_, _>>()?;
        let [start, stop, step] = parts[..] else {
            return Err(bad());
        };
        if !(step > 0.0) || stop < start {
            return Err(bad());
        }
        let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
        (0..count)
            .map(|i| ((start + i as f64 * step) * 1e12).round() / 1e12)
            .collect()
    } else {
        text.split(',')
            .map(|p| p.trim().parse::<f64>().map_err(|_| bad()))
            .collect::<Result<_, _>>()?
    };
    Ok(values.into_iter().map(Alpha::new).collect::<Result<_, _>>()?)
}

fn na(value: Option<f64>) -> String {
    value.map_or_else(|| "NA".to_string(), |v| v.to_string())
}

fn csv_bytes(header: &[&str], rows: &[Vec<String>]) -> Result<Vec<u8>, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).map_err(spectral_forge::Error::from)?;
    for row in rows {
        w.write_record(row).map_err(spectral_forge::Error::from)?;
    }
    w.into_inner()
        .map_err(|e| CliError::Usage(format!("cannot finish CSV output: {e}")))
}

pub fn generate(args: GenerateArgs) -> Result<(), CliError> {
    let ctx = Context::new(&args.common)?;
    let graph = read_graph(&args.input)?;
    let forge = Forge::new(&graph, ctx.transformation(&args.sgf))?;
    let out = forge.sample(ctx.alpha(&args.sgf)?, ctx.rule(&args.sgf)?, ctx.seed)?;
    ctx.emit("generated.el", write_edge_list(&out).as_bytes())
}

pub fn eval(args: EvalArgs) -> Result<(), CliError> {
    let ctx = Context::new(&args.common)?;
    let input = read_with_attrs(&args.input, args.attrs.as_deref())?;
    let output = read_graph(&args.compare_to)?;
    let report = compare(&input, &output, ctx.seed)?;
    let rows: Vec<Vec<String>> = report
        .entries()
        .into_iter()
        .map(|(name, value)| vec![name, na(value)])
        .collect();
    ctx.emit("metrics.csv", &csv_bytes(&["metric", "value"], &rows)?)
}

pub fn attack(args: AttackArgs) -> Result<(), CliError> {
    let ctx = Context::new(&args.common)?;
    let original = read_graph(&args.input)?;
    let anonymized = read_graph(&args.compare_to)?;
    let config = ctx.attack_config(args.seed_fraction, ctx.seed);
    let rate = dv_attack(&original, &anonymized, &config)?;
    let n = original.node_count();
    let row = vec![
        rate.to_string(),
        random_guess_rate(n, &config).to_string(),
        config.seed_count(n).to_string(),
    ];
    ctx.emit(
        "attack.csv",
        &csv_bytes(&["identification_rate", "random_guess_rate", "seed_nodes"], &[row])?,
    )
}

pub fn sweep(args: SweepArgs) -> Result<(), CliError> {
    let ctx = Context::new(&args.common)?;
    let grid_text = args
        .alphas
        .clone()
        .or_else(|| ctx.config.experiment.alphas.clone())
        .unwrap_or_else(|| DEFAULT_ALPHA_GRID.to_string());
    let alphas = parse_alpha_grid(&grid_text)?;
    match args.study.as_deref() {
        None => {}
        Some("normalization") => return normalization(&ctx, &args, &alphas),
        Some(other) => {
            return Err(CliError::Usage(format!(
                "unknown study `{other}`; expected normalization"
            )))
        }
    }

    let graph = match (
        &args.input,
        PresetSpec::merge(&args.preset, &ctx.config.preset, None, 1),
    ) {
        (Some(path), _) => read_graph(path)?,
        (None, Some(spec)) => spec
            .build(ctx.seed)?
            .graphs
            .into_iter()
            .next()
            .ok_or_else(|| CliError::Usage("preset produced no graph".into()))?,
        (None, None) => return Err(CliError::Usage("sweep needs --input or --preset".into())),
    };
    let runs = ctx.runs(args.runs);
    if runs == 0 {
        return Err(CliError::Usage("--runs must be at least 1".into()));
    }
    let rule = ctx.rule(&args.sgf)?;
    let forge = Forge::new(&graph, ctx.transformation(&args.sgf))?;
    let summary = InputSummary::new(&graph, derive_seed(ctx.seed, &[label("input")]))?;
    let guess = random_guess_rate(graph.node_count(), &ctx.attack_config(args.seed_fraction, 0));

    let rows = alphas
        .par_iter()
        .enumerate()
        .map(|(a, &alpha)| -> Result<Vec<String>, CliError> {
            let entropy = normalized_entropy(&forge.expected(alpha, rule)?).normalized;
            let per_run: Vec<(Option<f64>, f64)> = (0..runs)
                .into_par_iter()
                .map(|r| -> Result<_, CliError> {
                    let seed = derive_seed(ctx.seed, &[label("sweep"), a as u64, r as u64]);
                    let out = forge.sample(alpha, rule, derive_seed(seed, &[0]))?;
                    let report = compare_with_summary(&summary, &out, derive_seed(seed, &[1]))?;
                    let rate = dv_attack(
                        &graph,
                        &out,
                        &ctx.attack_config(args.seed_fraction, derive_seed(seed, &[2])),
                    )?;
                    Ok((report.modularity_ratio, rate))
                })
                .collect::<Result<_, _>>()?;
            let ratios: Vec<f64> = per_run.iter().filter_map(|(q, _)| *q).collect();
            let rates: Vec<f64> = per_run.iter().map(|(_, r)| *r).collect();
            let q = MetricSummary::from_values("modularity_ratio", &ratios);
            let rate = MetricSummary::from_values("attack_rate", &rates);
            Ok(vec![
                alpha.value().to_string(),
                entropy.to_string(),
                na(q.mean),
                na(q.ci99),
                na(rate.mean),
                na(rate.ci99),
                guess.to_string(),
                runs.to_string(),
            ])
        })
        .collect::<Result<Vec<_>, _>>()?;
    let header = [
        "alpha",
        "entropy",
        "modularity_ratio_mean",
        "modularity_ratio_ci99",
        "attack_rate_mean",
        "attack_rate_ci99",
        "random_guess_rate",
        "runs",
    ];
    ctx.emit("sweep.csv", &csv_bytes(&header, &rows)?)
}

fn normalization(ctx: &Context, args: &SweepArgs, alphas: &[Alpha]) -> Result<(), CliError> {
    let count = args.preset.graphs.or(ctx.config.experiment.graphs).unwrap_or(10);
    let n = args.preset.nodes.unwrap_or(STUDY_NODES);
    let mean_degree = args.preset.mean_degree.unwrap_or(STUDY_MEAN_DEGREE);
    let mut graphs = Vec::with_capacity(2 * count);
    for i in 0..count {
        let seed = derive_seed(ctx.seed, &[label("er"), i as u64]);
        graphs.push(StudyGraph {
            name: format!("er{i}"),
            family: "er".into(),
            graph: erdos_renyi(n, mean_degree / (n as f64 - 1.0), seed)?,
        });
    }
    for i in 0..count {
        let seed = derive_seed(ctx.seed, &[label("ba"), i as u64]);
        graphs.push(StudyGraph {
            name: format!("ba{i}"),
            family: "ba".into(),
            graph: barabasi_albert(n, mean_degree, seed)?,
        });
    }
    let k = args
        .sgf
        .logistic_k
        .or(ctx.config.sgf.logistic_k)
        .unwrap_or(DEFAULT_LOGISTIC_K);
    let rules = [
        NormalizationRule::logistic(k)?,
        NormalizationRule::Truncate,
        NormalizationRule::Scale,
    ];
    let rows = normalization_study(&graphs, alphas, &rules)?;
    let mut buf = Vec::new();
    write_normalization_csv(&rows, &mut buf)?;
    ctx.emit("normalization.csv", &buf)
}

pub fn bench(args: BenchArgs) -> Result<(), CliError> {
    let ctx = Context::new(&args.common)?;
    let k = args
        .logistic_k
        .or(ctx.config.sgf.logistic_k)
        .unwrap_or(DEFAULT_LOGISTIC_K);
    let strategy_names: Vec<String> = match (&args.strategies, &ctx.config.experiment.strategies) {
        (Some(text), _) => text.split(',').map(str::to_string).collect(),
        (None, Some(list)) => list.clone(),
        (None, None) => vec![format!("sgf:{DEFAULT_ALPHA}")],
    };
    let strategies: Vec<Strategy> = strategy_names
        .iter()
        .map(|s| Strategy::parse(s, k))
        .collect::<Result<_, _>>()?;

    let mut datasets = Vec::new();
    for path in &args.input {
        let name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| path.display().to_string());
        datasets.push(Dataset {
            name,
            graphs: vec![read_with_attrs(path, args.attrs.as_deref())?],
        });
    }
    if let Some(spec) = PresetSpec::merge(&args.preset, &ctx.config.preset, ctx.config.experiment.graphs, 10) {
        datasets.push(spec.build(ctx.seed)?);
    }
    if datasets.is_empty() {
        return Err(CliError::Usage("bench needs --input or --preset".into()));
    }
    let out = run_experiment(&strategies, &datasets, ctx.runs(args.runs), ctx.seed)?;
    let mut buf = Vec::new();
    write_experiment_csv(&out.rows, &mut buf)?;
    ctx.emit("bench.csv", &buf)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alpha_grid_syntax() {
        let grid = parse_alpha_grid("0.1:1.0:0.1").unwrap();
        assert_eq!(grid.len(), 10);
        assert_eq!(grid[2].value(), 0.3);
        assert_eq!(grid[9].value(), 1.0);
        let list = parse_alpha_grid("0.9, 0.5").unwrap();
        assert_eq!(list.iter().map(|a| a.value()).collect::<Vec<_>>(), vec![0.9, 0.5]);
        assert!(parse_alpha_grid("0.1:1.0").is_err());
        assert!(parse_alpha_grid("0.5:0.1:0.1").is_err());
        assert!(parse_alpha_grid("0:1.5:0.5").is_err());
    }
}
