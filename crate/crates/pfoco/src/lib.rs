//! Projection-free online convex optimization.
//!
//! Learners only touch the feasible set through a linear optimization oracle.
//! On strongly convex sets the two-expert algorithm in [`learners::MainAlg`]
//! makes two oracle calls per round; on general sets [`approx_set`] builds a
//! strongly convex inner approximation and answers linear optimization on it.

// `!(x > 0.0)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod approx_set;
pub mod error;
pub mod geometry;
pub mod harness;
pub mod learners;
pub mod oracles;
pub mod par;
pub mod point;
pub mod rng;

pub use error::{Error, Result};
pub use point::Point;
