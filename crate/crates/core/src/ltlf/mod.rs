//! LTLf formulas over named atomic propositions.

mod canonical;
mod formula;
mod nnf;
mod onestep;
mod parse;
mod semantics;
mod simplify;
mod vars;

pub use canonical::{absorb, Canonicalizer};
pub use formula::{interned_count, Formula, Kind};
pub use nnf::{is_nnf, to_nnf};
pub use onestep::{
    bool_realizable, formula_to_bdd, one_step_real, one_step_unreal, quantified_realizable,
    BoolContext,
};
pub use parse::{parse, ParseError};
pub use semantics::{eval_word, Evaluator};
pub use simplify::{simplify, MAX_PASSES};
pub(crate) use vars::check_word;
pub use vars::{Assignment, Partition, Semantics, Vocabulary, Word};
