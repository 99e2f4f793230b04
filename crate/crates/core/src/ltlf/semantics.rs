//! Finite-trace semantics.
//!
//! Evaluation is a dynamic program over positions: every subformula gets a
//! truth vector filled from the last position backwards.

use rustc_hash::FxHashMap;

use super::formula::{Formula, Kind};
use super::vars::{check_word, Assignment, Vocabulary};
use crate::{Error, Result, VarId};

#[derive(Clone, Copy, Debug)]
enum Op {
    True,
    False,
    Var(VarId),
    Not(usize),
    And(usize, usize),
    Or(usize, usize),
    Implies(usize, usize),
    Iff(usize, usize),
    Xor(usize, usize),
    Next(usize),
    StrongNext(usize),
    Until(usize, usize),
    Release(usize, usize),
    Finally(usize),
    Globally(usize),
}

/// A formula compiled for repeated evaluation against words.
#[derive(Clone, Debug)]
pub struct Evaluator {
    ops: Vec<Op>,
    vars: usize,
}

impl Evaluator {
    pub fn new(f: Formula, vocab: &Vocabulary) -> Result<Self> {
        let mut ops = Vec::new();
        let mut slot = FxHashMap::default();
        compile(f, vocab, &mut ops, &mut slot)?;
        Ok(Evaluator {
            ops,
            vars: vocab.len(),
        })
    }

    /// Truth of the formula at position `i` of `word`.
    pub fn eval(&self, word: &[Assignment], i: usize) -> Result<bool> {
        if i >= word.len() {
            return Err(Error::PositionOutOfRange {
                position: i,
                len: word.len(),
            });
        }
        check_word(word, self.vars)?;
        Ok(self.table(word)[(self.ops.len() - 1) * word.len() + i])
    }

    /// Truth values of the root at every position.
    pub fn eval_all(&self, word: &[Assignment]) -> Result<Vec<bool>> {
        check_word(word, self.vars)?;
        let n = word.len();
        let t = self.table(word);
        Ok(t[(self.ops.len() - 1) * n..].to_vec())
    }

    fn table(&self, word: &[Assignment]) -> Vec<bool> {
        let n = word.len();
        let mut t = vec![false; self.ops.len() * n];
        for (k, op) in self.ops.iter().enumerate() {
            let base = k * n;
            for i in (0..n).rev() {
                let at = |j: usize, pos: usize| t[j * n + pos];
                let last = i + 1 == n;
                let v = match *op {
                    Op::True => true,
                    Op::False => false,
                    Op::Var(var) => word[i].get(var),
                    Op::Not(a) => !at(a, i),
                    Op::And(a, b) => at(a, i) && at(b, i),
                    Op::Or(a, b) => at(a, i) || at(b, i),
                    Op::Implies(a, b) => !at(a, i) || at(b, i),
                    Op::Iff(a, b) => at(a, i) == at(b, i),
                    Op::Xor(a, b) => at(a, i) != at(b, i),
                    Op::Next(a) => last || at(a, i + 1),
                    Op::StrongNext(a) => !last && at(a, i + 1),
                    Op::Until(a, b) => at(b, i) || (at(a, i) && !last && t[base + i + 1]),
                    Op::Release(a, b) => at(b, i) && (at(a, i) || last || t[base + i + 1]),
                    Op::Finally(a) => at(a, i) || (!last && t[base + i + 1]),
                    Op::Globally(a) => at(a, i) && (last || t[base + i + 1]),
                };
                t[base + i] = v;
            }
        }
        t
    }
}

fn compile(
    f: Formula,
    vocab: &Vocabulary,
    ops: &mut Vec<Op>,
    slot: &mut FxHashMap<Formula, usize>,
) -> Result<usize> {
    if let Some(&k) = slot.get(&f) {
        return Ok(k);
    }
    let mut sub = |g: Formula, ops: &mut Vec<Op>| compile(g, vocab, ops, slot);
    let op = match f.kind() {
        Kind::True => Op::True,
        Kind::False => Op::False,
        Kind::Var(name) => Op::Var(vocab.lookup(name)?),
        Kind::Not(a) => Op::Not(sub(a, ops)?),
        Kind::Next(a) => Op::Next(sub(a, ops)?),
        Kind::StrongNext(a) => Op::StrongNext(sub(a, ops)?),
        Kind::Finally(a) => Op::Finally(sub(a, ops)?),
        Kind::Globally(a) => Op::Globally(sub(a, ops)?),
        Kind::Implies(a, b) => Op::Implies(sub(a, ops)?, sub(b, ops)?),
        Kind::Iff(a, b) => Op::Iff(sub(a, ops)?, sub(b, ops)?),
        Kind::Xor(a, b) => Op::Xor(sub(a, ops)?, sub(b, ops)?),
        Kind::Until(a, b) => Op::Until(sub(a, ops)?, sub(b, ops)?),
        Kind::Release(a, b) => Op::Release(sub(a, ops)?, sub(b, ops)?),
        Kind::And(xs) | Kind::Or(xs) => {
            let is_and = matches!(f.kind(), Kind::And(_));
            let mut acc = sub(xs[0], ops)?;
            for &x in &xs[1..] {
                let rhs = sub(x, ops)?;
                ops.push(if is_and {
                    Op::And(acc, rhs)
                } else {
                    Op::Or(acc, rhs)
                });
                acc = ops.len() - 1;
            }
            slot.insert(f, acc);
            return Ok(acc);
        }
    };
    ops.push(op);
    let k = ops.len() - 1;
    slot.insert(f, k);
    Ok(k)
}

/// Whether `word` satisfies `f` at position `i`.
pub fn eval_word(f: Formula, vocab: &Vocabulary, word: &[Assignment], i: usize) -> Result<bool> {
    Evaluator::new(f, vocab)?.eval(word, i)
}
