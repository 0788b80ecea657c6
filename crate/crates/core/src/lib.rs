//! Exact computations on resolution dual graphs of normal surface
//! singularities.
//!
//! The crate works with the weighted dual graph of the exceptional divisor of
//! a resolution: vertices are exceptional curves decorated with their
//! self-intersection, edges record intersection points. On top of that it
//! provides
//!
//! * the fundamental cycle, computed by Laufer's incremental algorithm and by
//!   a brute-force minimum oracle ([`fundcycle`]),
//! * generators for the dual graphs of the five families of quotient surface
//!   singularities together with reference fundamental-cycle tables
//!   ([`hj`], [`catalog`]),
//! * exceptional log pullbacks, minimal log discrepancies over the singular
//!   point and lc thresholds of the maximal ideal ([`discrepancy`]),
//! * Newton-polygon computations for monomial boundaries on the smooth plane
//!   germ ([`monomial`]),
//! * sweep harnesses that verify the quantitative bounds the crate is built
//!   around: every fundamental-cycle coefficient of a quotient singularity is
//!   at most 6, and an mld-ε germ always admits the lc threshold ε²/24 for
//!   its maximal ideal ([`sweep`]).
//!
//! All arithmetic is exact: quantities are arbitrary-precision rationals,
//! never floats.

pub mod catalog;
pub mod discrepancy;
pub mod files;
pub mod fundcycle;
pub mod graph;
pub mod hj;
pub mod matrix;
pub mod monomial;
pub mod rational;
pub mod sweep;

pub use graph::{Cycle, ResolutionGraph};
pub use rational::Rational;
