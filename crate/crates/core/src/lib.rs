//! Strategic network formation among individuals partitioned into groups.
//!
//! Individuals earn a distance-discounted benefit from every reachable
//! individual, weighted by how often their groups need to coordinate, and pay
//! a fixed cost per link they maintain. The crate evaluates payoffs, decides
//! pairwise stability, searches for welfare-maximising networks, runs the
//! pairwise formation dynamics, and evaluates the closed-form regime bounds
//! that predict which structures arise.

pub mod dynamics;
pub mod efficiency;
pub mod model;
pub mod search;
pub mod stability;
pub mod thresholds;

pub use dynamics::{Action, DynamicsTrace, PairSelector, TraceStep};
pub use efficiency::{consolidate_representatives, efficient_search, EfficientSet};
pub use model::{
    CoordinationMatrix, GroupPartition, IndividualMatrix, ModelError, ModelParams, Network, Society,
};
pub use search::SearchSpace;
pub use stability::{enumerate_stable, is_pairwise_stable, price_of_anarchy};
pub use thresholds::{GroupGraph, Regime, RegimePrediction};
