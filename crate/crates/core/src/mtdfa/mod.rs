//! Deterministic finite automata whose transitions are multi-terminal decision diagrams.

mod automaton;
mod context;
mod dump;

pub use automaton::{Mtdfa, RunOutcome};
pub use context::{decode, encode, Context, Label, LabelRegistry, Options};
