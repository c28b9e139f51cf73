//! Undirected communication graphs and their consensus weight matrices.

// `!(x > 0.0)` guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod error;
mod topology;
mod weights;

pub use error::{NetworkError, Result};
pub use topology::{build_topology, is_connected, EdgeSet, TopologyKind};
pub use weights::{sigma_of, WeightMatrix, STOCHASTIC_TOLERANCE};
