//! LTLf realizability via MTBDD-encoded automata.
//!
//! Modules, bottom-up:
//!
//! * [`ltlf`]: hash-consed formulas, parsing, finite-trace semantics,
//!   rewriting, propositional canonicalization and one-step abstractions.
//! * [`mtbdd`]: reduced ordered multi-terminal BDDs whose terminals are
//!   Boolean leaves or tagged integers.
//! * [`mtdfa`]: translation of formulas into automata storing one MTBDD per
//!   state, and Boolean operations on them.
//! * [`game`]: incremental reachability games, on-the-fly realizability,
//!   an offline attractor and strategy extraction.
//! * [`preprocess`]: polarity pruning and output-disjoint decomposition.
//! * [`oracle`]: explicit-alphabet reference implementations for testing.

pub mod error;
pub mod game;
pub mod ltlf;
pub mod mtbdd;
pub mod mtdfa;
pub mod oracle;
pub mod preprocess;
mod var;

pub use error::{Error, Result};
pub use var::VarId;
