//! Bayesian community detection in the planted bi-section model.
//!
//! A graph on `2n` vertices is split into two hidden classes of `n`
//! vertices; edges appear independently with probability `p` inside a class
//! and `q` across classes. The crate provides
//!
//! * [`graphmodel`]: assignments modulo label flip, the pair-exchange
//!   distance, rings, graph sampling and likelihoods;
//! * [`posterior`]: exact posteriors by enumeration, a Metropolis–Hastings
//!   sampler, MAP and min-bisection estimators, overlap;
//! * [`uncertainty`]: minimal-order and minimal-diameter credible sets and
//!   their enlargement into confidence sets;
//! * [`bounds`]: closed-form recovery, detection, contiguity and minimax
//!   bounds;
//! * [`harness`]: experiment configuration, Monte Carlo runs and file I/O.
//!
//! Runnable walkthroughs live in the crate's `examples/` directory.

pub mod bounds;
pub mod error;
pub mod graphmodel;
pub mod harness;
pub mod numeric;
pub mod posterior;
pub mod uncertainty;

pub use error::{Error, Result};
pub use graphmodel::{ClassAssignment, Graph, ModelParams};
