//! Aggregative games: cost and pseudo-gradient evaluation, Cournot instances,
//! and exact Euclidean projection onto per-player action sets.

// `!(x > 0.0)` guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cournot;
pub mod error;
pub mod feasible;
pub mod game;
pub mod players;
pub mod sampling;

pub use cournot::{build_cournot, CournotFirm, CournotParams, CournotRanges};
pub use error::{CoreError, Result};
pub use feasible::{FeasibleSet, Hyperplane};
pub use game::{
    average_blocks, AffineMap, AffineStructure, GameInstance, MonotonicityConstants, Player,
    PlayerCost,
};
pub use players::{FnPlayer, SeparableQuadratic};
pub use sampling::UniformStream;
