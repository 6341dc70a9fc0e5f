//! Competing modularity-targeting generators used as baselines.

mod dcsbm;
mod trajanovski;

pub use dcsbm::{dcsbm_config_from, dcsbm_generate, DcsbmConfig};
pub use trajanovski::{trajanovski_generate, Rewirer, TrajanovskiConfig, TrajanovskiOutcome};
