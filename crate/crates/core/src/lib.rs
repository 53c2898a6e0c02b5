//! Exact decision procedures for weak lower semicontinuity conditions.
//!
//! The crate has two executable model backends (finite topological spaces and
//! piecewise affine functions on the real line), checkers for all 27 conditions,
//! a guarded implication graph with a counterexample corpus, and exhaustive
//! finite-model sweeps that test the graph against the checkers.

pub mod conditions;
pub mod corpus;
pub mod data;
pub mod error;
pub mod extreal;
pub mod graph;
pub mod model;
pub mod piecewise;
pub mod search;
pub mod topology;

pub use conditions::{Condition, Verdict, Witness};
pub use error::{CheckError, NameError, ParseError};
pub use extreal::{ExtendedReal, Interval, ValueSet};
