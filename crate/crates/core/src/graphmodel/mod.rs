//! Assignments, the pair-exchange distance, ring combinatorics, graph
//! sampling and likelihood evaluation for the planted bi-section model.

mod assignment;
mod graph;
mod likelihood;
mod params;

pub(crate) use assignment::valid_mask as valid_mask_for;
pub use assignment::{
    diameter, enumerate_assignments, enumerate_assignments_capped, enumerate_ball, enumerate_ring,
    enumeration_feasible, k_distance, ring_size, ClassAssignment, DEFAULT_ENUMERATION_CAP,
};
pub use graph::{sample_graph, suff_stats, Graph, SuffStats};
pub use likelihood::{
    exchange_sets, log_likelihood, log_likelihood_from_counts, log_likelihood_ratio, log_odds_gap,
    ExchangeSets,
};
pub use params::ModelParams;
