//! Named synthetic datasets.

use spectral_forge::eval::Dataset;
use spectral_forge::generators::{
    lancichinetti, planted_partition, LancichinettiConfig, PlantedPartitionConfig, GIRVAN_DEFAULT_OUT_DEGREE,
};
use spectral_forge::rng::{derive_seed, label};

use crate::config::PresetSection;
use crate::{CliError, PresetArgs};

pub const PLANTED_NODES: usize = 500;
pub const PLANTED_COMMUNITIES: usize = 5;
pub const PLANTED_P_IN: f64 = 0.1;
pub const PLANTED_P_OUT: f64 = 0.005;

/// Flag values with config-file fallbacks.
pub struct PresetSpec {
    pub name: String,
    pub graphs: usize,
    nodes: Option<usize>,
    communities: Option<usize>,
    p_in: Option<f64>,
    p_out: Option<f64>,
    out_degree: Option<f64>,
    mean_degree: Option<f64>,
    mean_community_size: Option<f64>,
    mixing: Option<f64>,
}

impl PresetSpec {
    pub fn merge(
        args: &PresetArgs,
        file: &PresetSection,
        graphs_fallback: Option<usize>,
        default_graphs: usize,
    ) -> Option<Self> {
        let name = args.preset.clone().or_else(|| file.name.clone())?;
        Some(Self {
            name,
            graphs: args.graphs.or(graphs_fallback).unwrap_or(default_graphs),
            nodes: args.nodes.or(file.nodes),
            communities: args.communities.or(file.communities),
            p_in: args.p_in.or(file.p_in),
            p_out: args.p_out.or(file.p_out),
            out_degree: args.out_degree.or(file.out_degree),
            mean_degree: args.mean_degree.or(file.mean_degree),
            mean_community_size: args.mean_community_size.or(file.mean_community_size),
            mixing: args.mixing.or(file.mixing),
        })
    }

    /// Graph `g` of the preset uses seed `derive_seed(master, [label(name), g])`.
    pub fn build(&self, master_seed: u64) -> Result<Dataset, CliError> {
        let seed = |g: usize| derive_seed(master_seed, &[label(&self.name), g as u64]);
        let graphs = (0..self.graphs)
            .map(|g| -> Result<_, CliError> {
                let graph = match self.name.as_str() {
                    "girvan" => {
                        let cfg = match (self.p_in, self.p_out) {
                            (Some(p_in), Some(p_out)) => PlantedPartitionConfig::girvan(p_in, p_out, seed(g)),
                            (None, None) => PlantedPartitionConfig::girvan_with_out_degree(
                                self.out_degree.unwrap_or(GIRVAN_DEFAULT_OUT_DEGREE),
                                seed(g),
                            ),
                            _ => return Err(CliError::Usage("girvan preset needs both --p-in and --p-out".into())),
                        };
                        planted_partition(&cfg)?.0
                    }
                    "planted" => {
                        let cfg = PlantedPartitionConfig {
                            n: self.nodes.unwrap_or(PLANTED_NODES),
                            communities: self.communities.unwrap_or(PLANTED_COMMUNITIES),
                            p_in: self.p_in.unwrap_or(PLANTED_P_IN),
                            p_out: self.p_out.unwrap_or(PLANTED_P_OUT),
                            rng_seed: seed(g),
                        };
                        planted_partition(&cfg)?.0
                    }
                    "lancichinetti" => {
                        let d = LancichinettiConfig::default();
                        let cfg = LancichinettiConfig {
                            n: self.nodes.unwrap_or(d.n),
                            mean_degree: self.mean_degree.unwrap_or(d.mean_degree),
                            mean_community_size: self.mean_community_size.unwrap_or(d.mean_community_size),
                            mixing: self.mixing.unwrap_or(d.mixing),
                            rng_seed: seed(g),
                        };
                        lancichinetti(&cfg)?.0
                    }
                    other => {
                        return Err(CliError::Usage(format!(
                            "unknown preset `{other}`; expected girvan, lancichinetti or planted"
                        )))
                    }
                };
                Ok(graph)
            })
            .collect::<Result<_, _>>()?;
        Ok(Dataset {
            name: self.name.clone(),
            graphs,
        })
    }
}
