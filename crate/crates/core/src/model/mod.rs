//! Society data model: group partition, coordination matrices, networks,
//! and the distance-based payoff and welfare arithmetic.

mod matrix;
mod network;
mod partition;
mod payoff;

pub use matrix::{expand_matrix, CoordinationMatrix, IndividualMatrix};
pub use network::{
    all_pairs_distances, pair_count, pair_from_index, pair_index, DistanceMatrix, Network,
    MAX_MASK_NODES, MAX_NODES, UNREACHABLE,
};
pub use partition::GroupPartition;
pub use payoff::{in_invariant_set, payoff, welfare, ModelParams, Society, DEFAULT_EPSILON};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("partition must contain at least one group")]
    NoGroups,
    #[error("group {group} has {size} members; every group needs at least 3")]
    GroupTooSmall { group: usize, size: usize },
    #[error("invalid membership: {0}")]
    InvalidMembership(String),
    #[error("coordination matrix needs {expected} entries, got {got}")]
    MatrixShape { expected: usize, got: usize },
    #[error("coordination matrix is not symmetric at ({row}, {col})")]
    NotSymmetric { row: usize, col: usize },
    #[error("coordination matrix diagonal entry {index} is {value}, must be exactly 1")]
    DiagonalNotOne { index: usize, value: f64 },
    #[error("coordination entry ({row}, {col}) = {value} outside [0, 1]")]
    EntryOutOfRange { row: usize, col: usize, value: f64 },
    #[error("coordination matrix has {matrix} groups but the partition has {partition}")]
    DimensionMismatch { matrix: usize, partition: usize },
    #[error("delta must lie strictly between 0 and 1, got {0}")]
    InvalidDelta(f64),
    #[error("link cost must be positive, got {0}")]
    InvalidCost(f64),
    #[error("epsilon must be a non-negative number, got {0}")]
    InvalidEpsilon(f64),
    #[error("network of {0} nodes exceeds the supported maximum of {MAX_NODES}")]
    TooManyNodes(usize),
    #[error("node {node} out of range for a network on {n} nodes")]
    NodeOutOfRange { node: usize, n: usize },
    #[error("self-loop at node {0}")]
    SelfLoop(usize),
}
