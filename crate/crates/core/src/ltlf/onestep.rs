//! Boolean abstractions that can settle realizability after one step.
//!
//! `one_step_real(f)` holds on a letter exactly when the one-letter word made
//! of it satisfies `f`: if the controller can always make it true, it wins
//! by stopping immediately. `one_step_unreal(f)` is a condition every word
//! satisfying `f` imposes on its first letter: if the environment can always
//! falsify it, no play satisfies `f`.

use rustc_hash::FxHashMap;

use super::formula::{Formula, Kind};
use super::nnf::is_nnf;
use super::vars::{Partition, Semantics, Vocabulary};
use crate::mtbdd::{BoolOp, Mtbdd, NodeRef, OpCache};
use crate::{Error, Result, VarId};

/// Boolean formula true on exactly the letters forming one-letter models.
pub fn one_step_real(f: Formula) -> Formula {
    let mut memo = FxHashMap::default();
    real(f, &mut memo)
}

fn real(f: Formula, memo: &mut FxHashMap<Formula, Formula>) -> Formula {
    if !f.has_temporal() {
        return f;
    }
    if let Some(&r) = memo.get(&f) {
        return r;
    }
    let r = match f.kind() {
        Kind::StrongNext(_) => Formula::ff(),
        Kind::Next(_) => Formula::tt(),
        Kind::Globally(a) | Kind::Finally(a) => real(a, memo),
        Kind::Until(_, b) | Kind::Release(_, b) => real(b, memo),
        _ => {
            let children: Vec<Formula> = f.children().into_iter().map(|c| real(c, memo)).collect();
            f.rebuild(&children)
        }
    };
    memo.insert(f, r);
    r
}

/// Boolean formula implied, on the first letter, by every model of `f`.
/// `f` must be in negation normal form.
pub fn one_step_unreal(f: Formula) -> Result<Formula> {
    if !is_nnf(f) {
        return Err(Error::NotNnf(f.to_string()));
    }
    let mut memo = FxHashMap::default();
    Ok(unreal(f, &mut memo))
}

fn unreal(f: Formula, memo: &mut FxHashMap<Formula, Formula>) -> Formula {
    if !f.has_temporal() {
        return f;
    }
    if let Some(&r) = memo.get(&f) {
        return r;
    }
    let r = match f.kind() {
        Kind::Next(_) | Kind::StrongNext(_) => Formula::tt(),
        // The argument may first hold at a later position.
        Kind::Finally(_) => Formula::tt(),
        Kind::Globally(a) => unreal(a, memo),
        Kind::Until(a, b) => Formula::or2(unreal(a, memo), unreal(b, memo)),
        // Only the right operand is required at the first position.
        Kind::Release(_, b) => unreal(b, memo),
        Kind::And(xs) => Formula::and(xs.iter().map(|&x| unreal(x, memo))),
        Kind::Or(xs) => Formula::or(xs.iter().map(|&x| unreal(x, memo))),
        _ => unreachable!("NNF formula with temporal operator under {f}"),
    };
    memo.insert(f, r);
    r
}

/// Builds the BDD of a propositional formula in `bdd`.
pub fn formula_to_bdd(
    bdd: &mut Mtbdd,
    cache: &mut OpCache,
    vocab: &Vocabulary,
    f: Formula,
) -> Result<NodeRef> {
    let mut memo = FxHashMap::default();
    to_bdd(bdd, cache, vocab, f, &mut memo)
}

fn to_bdd(
    bdd: &mut Mtbdd,
    cache: &mut OpCache,
    vocab: &Vocabulary,
    f: Formula,
    memo: &mut FxHashMap<Formula, NodeRef>,
) -> Result<NodeRef> {
    if let Some(&r) = memo.get(&f) {
        return Ok(r);
    }
    let mut sub = |g: Formula, bdd: &mut Mtbdd, cache: &mut OpCache| to_bdd(bdd, cache, vocab, g, memo);
    let r = match f.kind() {
        Kind::True => NodeRef::TRUE,
        Kind::False => NodeRef::FALSE,
        Kind::Var(name) => bdd.var_node(vocab.lookup(name)?),
        Kind::Not(a) => {
            let a = sub(a, bdd, cache)?;
            bdd.bdd_not(a, cache)?
        }
        Kind::And(xs) | Kind::Or(xs) => {
            let op = if matches!(f.kind(), Kind::And(_)) {
                BoolOp::And
            } else {
                BoolOp::Or
            };
            let mut acc = sub(xs[0], bdd, cache)?;
            for &x in &xs[1..] {
                let b = sub(x, bdd, cache)?;
                acc = bdd.bdd_apply(op, acc, b, cache)?;
            }
            acc
        }
        Kind::Implies(a, b) | Kind::Iff(a, b) | Kind::Xor(a, b) => {
            let op = match f.kind() {
                Kind::Implies(..) => BoolOp::Implies,
                Kind::Iff(..) => BoolOp::Iff,
                _ => BoolOp::Xor,
            };
            let a = sub(a, bdd, cache)?;
            let b = sub(b, bdd, cache)?;
            bdd.bdd_apply(op, a, b, cache)?
        }
        _ => {
            return Err(Error::Payload(format!(
                "temporal formula {f} has no Boolean encoding"
            )))
        }
    };
    memo.insert(f, r);
    Ok(r)
}

/// Decides a one-step game on a Boolean formula: Mealy asks for
/// `∀inputs ∃outputs g`, Moore for `∃outputs ∀inputs g`.
pub fn quantified_realizable(
    bdd: &mut Mtbdd,
    cache: &mut OpCache,
    g: NodeRef,
    is_input: &dyn Fn(VarId) -> bool,
    sem: Semantics,
) -> Result<bool> {
    let is_output = |v: VarId| !is_input(v);
    let r = match sem {
        Semantics::Mealy => {
            let inner = bdd.exists(g, &is_output, cache)?;
            bdd.forall(inner, is_input, cache)?
        }
        Semantics::Moore => {
            let inner = bdd.forall(g, is_input, cache)?;
            bdd.exists(inner, &is_output, cache)?
        }
    };
    debug_assert!(bdd.is_terminal(r));
    Ok(r == NodeRef::TRUE)
}

/// Standalone BDD workspace for one-step checks.
pub struct BoolContext {
    pub bdd: Mtbdd,
    pub cache: OpCache,
    pub vocab: Vocabulary,
    inputs: usize,
    sem: Semantics,
}

impl BoolContext {
    /// Variables ordered as the partition prescribes for `sem`.
    pub fn new(part: &Partition, sem: Semantics) -> Result<Self> {
        let vocab = part.vocabulary(sem)?;
        Ok(BoolContext {
            bdd: Mtbdd::new(),
            cache: OpCache::lossless(),
            vocab,
            inputs: part.inputs.len(),
            sem,
        })
    }

    pub fn to_bdd(&mut self, f: Formula) -> Result<NodeRef> {
        formula_to_bdd(&mut self.bdd, &mut self.cache, &self.vocab, f)
    }

    pub fn realizable(&mut self, g: NodeRef) -> Result<bool> {
        let (inputs, total, sem) = (self.inputs, self.vocab.len(), self.sem);
        let is_input = move |v: VarId| match sem {
            Semantics::Mealy => v.index() < inputs,
            Semantics::Moore => v.index() >= total - inputs,
        };
        quantified_realizable(&mut self.bdd, &mut self.cache, g, &is_input, sem)
    }
}

/// Whether the controller wins the one-step game on propositional `g`.
pub fn bool_realizable(g: Formula, part: &Partition, sem: Semantics) -> Result<bool> {
    let mut ctx = BoolContext::new(part, sem)?;
    let b = ctx.to_bdd(g)?;
    ctx.realizable(b)
}
