//! Exact and sampled posteriors over `Θ_n` under the uniform prior, with
//! point estimators.

mod estimate;
mod mcmc;
mod table;

pub use estimate::{
    cut_size, kernighan_lin, map_estimate, map_from_table, min_bisection_estimate, overlap,
    BisectionMode, Engine,
};
pub use mcmc::{mh_sampler, run_chain, swap_log_ratio, ChainConfig, SampleSet};
pub use table::{
    exact_posterior, exact_posterior_capped, posterior_mass, posterior_mass_of, PosteriorTable,
    TableSource,
};
