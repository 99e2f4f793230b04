//! Explicit-alphabet automata built by formula progression, and the
//! brute-force realizability game played on them.

use rustc_hash::FxHashMap;

use crate::ltlf::{Assignment, Canonicalizer, Formula, Kind, Partition, Semantics, Vocabulary};
use crate::{Error, Result};

/// Most variables the explicit construction accepts.
pub const MAX_VARS: usize = 6;
/// Most states the explicit construction accepts.
pub const MAX_STATES: usize = 4096;

/// Letter-by-letter progression with propositional-equivalence merging of
/// the results.
pub struct Progression {
    canon: Canonicalizer,
}

impl Default for Progression {
    fn default() -> Self {
        Progression {
            canon: Canonicalizer::new(false),
        }
    }
}

impl Progression {
    pub fn new() -> Self {
        Self::default()
    }

    /// What remains of `f` after reading `letter`, and whether the word
    /// ending with `letter` satisfies `f`.
    pub fn progress(&mut self, f: Formula, vocab: &Vocabulary, letter: &Assignment) -> Result<(Formula, bool)> {
        let (g, acc) = step(f, vocab, letter)?;
        Ok((self.canon.canonical(g), acc))
    }

    pub fn canonical(&mut self, f: Formula) -> Formula {
        self.canon.canonical(f)
    }
}

fn step(f: Formula, vocab: &Vocabulary, w: &Assignment) -> Result<(Formula, bool)> {
    let go = |g: Formula| step(g, vocab, w);
    Ok(match f.kind() {
        Kind::True => (Formula::tt(), true),
        Kind::False => (Formula::ff(), false),
        Kind::Var(name) => {
            let v = w.get(vocab.lookup(name)?);
            (Formula::constant(v), v)
        }
        Kind::Not(a) => {
            let (a, x) = go(a)?;
            (Formula::not(a), !x)
        }
        Kind::And(xs) => {
            let mut fs = Vec::with_capacity(xs.len());
            let mut acc = true;
            for &x in xs {
                let (g, b) = go(x)?;
                fs.push(g);
                acc &= b;
            }
            (Formula::and(fs), acc)
        }
        Kind::Or(xs) => {
            let mut fs = Vec::with_capacity(xs.len());
            let mut acc = false;
            for &x in xs {
                let (g, b) = go(x)?;
                fs.push(g);
                acc |= b;
            }
            (Formula::or(fs), acc)
        }
        Kind::Implies(a, b) => {
            let ((a, x), (b, y)) = (go(a)?, go(b)?);
            (Formula::implies(a, b), !x || y)
        }
        Kind::Iff(a, b) => {
            let ((a, x), (b, y)) = (go(a)?, go(b)?);
            (Formula::iff(a, b), x == y)
        }
        Kind::Xor(a, b) => {
            let ((a, x), (b, y)) = (go(a)?, go(b)?);
            (Formula::xor(a, b), x != y)
        }
        Kind::Next(a) => (a, true),
        Kind::StrongNext(a) => (a, false),
        Kind::Until(a, b) => {
            let ((a, _), (b, y)) = (go(a)?, go(b)?);
            (Formula::or2(b, Formula::and2(a, f)), y)
        }
        Kind::Release(a, b) => {
            let ((a, _), (b, y)) = (go(a)?, go(b)?);
            (Formula::and2(b, Formula::or2(a, f)), y)
        }
        Kind::Finally(a) => {
            let (a, x) = go(a)?;
            (Formula::or2(a, f), x)
        }
        Kind::Globally(a) => {
            let (a, x) = go(a)?;
            (Formula::and2(a, f), x)
        }
    })
}

/// One-shot [`Progression::progress`].
pub fn progress(f: Formula, vocab: &Vocabulary, letter: &Assignment) -> Result<(Formula, bool)> {
    Progression::new().progress(f, vocab, letter)
}

/// Deterministic automaton over the explicit alphabet `2^vars`. Letters are
/// indexed by their bits in vocabulary order.
#[derive(Clone, Debug)]
pub struct ExplicitDfa {
    pub vocab: Vocabulary,
    pub states: Vec<Formula>,
    /// `moves[q][letter] = (successor, accepting)`.
    pub moves: Vec<Vec<(usize, bool)>>,
}

impl ExplicitDfa {
    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    /// Whether the non-empty `word` is accepted from the initial state 0.
    pub fn accepts(&self, word: &[Assignment]) -> bool {
        let mut q = 0;
        let mut acc = false;
        for a in word {
            (q, acc) = self.moves[q][a.to_bits() as usize];
        }
        acc
    }
}

/// Closure of `f` under progression by every letter over `vocab`.
pub fn build_explicit(f: Formula, vocab: &Vocabulary) -> Result<ExplicitDfa> {
    if vocab.len() > MAX_VARS {
        return Err(Error::OracleGuard(format!(
            "{} variables, at most {MAX_VARS} allowed",
            vocab.len()
        )));
    }
    let letters: Vec<Assignment> = Assignment::enumerate(vocab.len()).collect();
    let mut prog = Progression::new();
    let init = prog.canonical(f);
    let mut states = vec![init];
    let mut index = FxHashMap::default();
    index.insert(init, 0);
    let mut moves = Vec::new();
    let mut q = 0;
    while q < states.len() {
        let mut row = Vec::with_capacity(letters.len());
        for a in &letters {
            let (g, acc) = prog.progress(states[q], vocab, a)?;
            let next = *index.entry(g).or_insert_with(|| {
                states.push(g);
                states.len() - 1
            });
            row.push((next, acc));
        }
        if states.len() > MAX_STATES {
            return Err(Error::OracleGuard(format!(
                "more than {MAX_STATES} explicit states"
            )));
        }
        moves.push(row);
        q += 1;
    }
    Ok(ExplicitDfa {
        vocab: vocab.clone(),
        states,
        moves,
    })
}

/// Whether the controller can force acceptance from the initial state.
///
/// Mealy: every input letter must be answered by some output letter that
/// accepts or moves to a winning state. Moore: some output letter must
/// work against every input letter.
pub fn solve_explicit_game(d: &ExplicitDfa, part: &Partition, sem: Semantics) -> Result<bool> {
    let mut input_bits = Vec::new();
    let mut output_bits = Vec::new();
    for (k, name) in d.vocab.names().iter().enumerate() {
        if part.is_input(name) {
            input_bits.push(k);
        } else if part.is_output(name) {
            output_bits.push(k);
        } else {
            return Err(Error::Partition(format!("`{name}` is neither an input nor an output")));
        }
    }
    let spread = |bits: &[usize], value: u64| -> u64 {
        bits.iter()
            .enumerate()
            .map(|(j, &k)| (value >> j & 1) << k)
            .sum()
    };
    let ins: Vec<u64> = (0..1u64 << input_bits.len()).map(|v| spread(&input_bits, v)).collect();
    let outs: Vec<u64> = (0..1u64 << output_bits.len()).map(|v| spread(&output_bits, v)).collect();
    let mut win = vec![false; d.num_states()];
    loop {
        let mut changed = false;
        for q in 0..d.num_states() {
            if win[q] {
                continue;
            }
            let good = |i: u64, o: u64| {
                let (n, acc) = d.moves[q][(i | o) as usize];
                acc || win[n]
            };
            let w = match sem {
                Semantics::Mealy => ins.iter().all(|&i| outs.iter().any(|&o| good(i, o))),
                Semantics::Moore => outs.iter().any(|&o| ins.iter().all(|&i| good(i, o))),
            };
            if w {
                win[q] = true;
                changed = true;
            }
        }
        if !changed {
            return Ok(win[0]);
        }
    }
}

/// Explicit verdict for `f` under `part`.
pub fn explicit_realizable(f: Formula, part: &Partition, sem: Semantics) -> Result<bool> {
    part.validate(f)?;
    let vocab = Vocabulary::from_names(part.inputs.iter().chain(&part.outputs))?;
    solve_explicit_game(&build_explicit(f, &vocab)?, part, sem)
}
