//! Controllers extracted from solved games.

use std::fmt;

use rustc_hash::FxHashMap;

use super::realize::Solved;
use crate::ltlf::{eval_word, Assignment, Formula, Partition, Semantics, Vocabulary};
use crate::mtbdd::NodeRef;
use crate::mtdfa::{decode, LabelRegistry};
use crate::{Error, Result};

/// Upper bound on the number of inputs for which a transition table is
/// built.
pub const MAX_STRATEGY_INPUTS: usize = 16;

/// What the controller does on one input letter.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    /// Values of the outputs, in the order of [`MealyMachine::outputs`].
    pub outputs: Vec<bool>,
    /// Next state, or `None` once the specification is satisfied.
    pub next: Option<usize>,
}

/// Finite-state controller. Transitions are indexed by the input letter
/// encoded as bits: bit `k` is the value of `inputs[k]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MealyMachine {
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    /// Formula each state stands for.
    pub states: Vec<Formula>,
    pub initial: usize,
    pub transitions: Vec<Vec<Step>>,
}

impl MealyMachine {
    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn step(&self, state: usize, input: u64) -> &Step {
        &self.transitions[state][input as usize]
    }

    /// Outputs produced on `inputs`, stopping at acceptance. The flag tells
    /// whether the run stopped.
    pub fn run(&self, inputs: &[u64]) -> (Vec<Vec<bool>>, bool) {
        let mut q = self.initial;
        let mut out = Vec::new();
        for &i in inputs {
            let s = self.step(q, i);
            out.push(s.outputs.clone());
            match s.next {
                Some(n) => q = n,
                None => return (out, true),
            }
        }
        (out, false)
    }

    /// Fails if some input sequence could go on forever without reaching
    /// acceptance, i.e. if a cycle is reachable.
    pub fn check_terminates(&self) -> Result<()> {
        // 0 = unvisited, 1 = on stack, 2 = done
        let mut mark = vec![0u8; self.num_states()];
        let mut stack = vec![(self.initial, 0usize)];
        mark[self.initial] = 1;
        while let Some(&mut (q, ref mut k)) = stack.last_mut() {
            let row = &self.transitions[q];
            if *k == row.len() {
                mark[q] = 2;
                stack.pop();
                continue;
            }
            let next = row[*k].next;
            *k += 1;
            if let Some(n) = next {
                match mark[n] {
                    0 => {
                        mark[n] = 1;
                        stack.push((n, 0));
                    }
                    1 => return Err(Error::Strategy(format!("cycle through state {n}"))),
                    _ => {}
                }
            }
        }
        Ok(())
    }

    /// Runs every input sequence until acceptance and checks the produced
    /// word against `f`. At most `max_words` words are checked.
    pub fn verify(&self, f: Formula, max_words: usize) -> Result<usize> {
        self.check_terminates()?;
        let vocab = Vocabulary::from_names(self.inputs.iter().chain(&self.outputs))?;
        let letters = 1u64 << self.inputs.len();
        let mut checked = 0;
        let mut stack: Vec<(usize, Vec<Assignment>)> = vec![(self.initial, Vec::new())];
        while let Some((q, word)) = stack.pop() {
            for i in 0..letters {
                let s = self.step(q, i);
                let mut bits: Vec<bool> = (0..self.inputs.len()).map(|k| i >> k & 1 == 1).collect();
                bits.extend(&s.outputs);
                let mut w = word.clone();
                w.push(Assignment::new(bits));
                match s.next {
                    Some(n) => stack.push((n, w)),
                    None => {
                        if !eval_word(f, &vocab, &w, 0)? {
                            return Err(Error::Strategy(format!(
                                "a run of length {} violates the specification",
                                w.len()
                            )));
                        }
                        checked += 1;
                        if checked >= max_words {
                            return Ok(checked);
                        }
                    }
                }
            }
        }
        Ok(checked)
    }

    /// Whether outputs never depend on the current input.
    pub fn is_moore(&self) -> bool {
        self.transitions
            .iter()
            .all(|row| row.iter().all(|s| s.outputs == row[0].outputs))
    }
}

impl fmt::Display for MealyMachine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "inputs: {}", self.inputs.join(" "))?;
        writeln!(f, "outputs: {}", self.outputs.join(" "))?;
        writeln!(f, "initial: {}", self.initial)?;
        let valuation = |names: &[String], value: &dyn Fn(usize) -> bool| {
            if names.is_empty() {
                return "tt".to_owned();
            }
            names
                .iter()
                .enumerate()
                .map(|(k, n)| if value(k) { n.clone() } else { format!("!{n}") })
                .collect::<Vec<_>>()
                .join(" & ")
        };
        for (q, row) in self.transitions.iter().enumerate() {
            writeln!(f, "state {q}: {}", self.states[q])?;
            for (i, s) in row.iter().enumerate() {
                let input = valuation(&self.inputs, &|k| i >> k & 1 == 1);
                let output = valuation(&self.outputs, &|k| s.outputs[k]);
                match s.next {
                    Some(n) => writeln!(f, "  {input} / {output} -> {n}")?,
                    None => writeln!(f, "  {input} / {output} -> accept")?,
                }
            }
        }
        Ok(())
    }
}

/// How the choices inside one state's diagram are made.
enum Guide {
    /// Follow vertices won by `Output` with decreasing determination rank.
    Ranked,
    /// The state was settled by the one-step check: the controller can win
    /// within one letter, found by a local search of the diagram.
    OneStep(FxHashMap<NodeRef, bool>),
}

impl Solved {
    /// A controller for a realizable specification. Choices prefer
    /// accepting terminals, then the lowest node handle.
    pub fn strategy(&mut self) -> Result<MealyMachine> {
        if !self.result.is_realizable() {
            return Err(Error::Strategy("the specification is unrealizable".into()));
        }
        let part: Partition = self.part.clone();
        if part.inputs.len() > MAX_STRATEGY_INPUTS {
            return Err(Error::Strategy(format!(
                "more than {MAX_STRATEGY_INPUTS} inputs"
            )));
        }
        let var_of = |name: &String| self.ctx.vocab.lookup(name);
        let inputs = part.inputs.iter().map(var_of).collect::<Result<Vec<_>>>()?;
        let outputs = part.outputs.iter().map(var_of).collect::<Result<Vec<_>>>()?;
        let mut output_pos = vec![usize::MAX; self.ctx.vocab.len()];
        for (k, v) in outputs.iter().enumerate() {
            output_pos[v.index()] = k;
        }
        let mut input_pos = vec![usize::MAX; self.ctx.vocab.len()];
        for (k, v) in inputs.iter().enumerate() {
            input_pos[v.index()] = k;
        }

        let init = self.ctx.formula_label(self.formula);
        let mut labels = vec![init];
        let mut index = FxHashMap::default();
        index.insert(init, 0usize);
        let mut transitions = Vec::new();
        let mut q = 0;
        while q < labels.len() {
            let label = labels[q];
            let (root, mut guide) = match self.roots.get(&label) {
                Some(&r) if self.rank.contains_key(&r) => (r, Guide::Ranked),
                _ => {
                    let f = self.ctx.labels().formula(label).expect("formula label");
                    let r = self.ctx.tr(f)?;
                    (r, Guide::OneStep(FxHashMap::default()))
                }
            };
            let mut row = Vec::with_capacity(1 << inputs.len());
            for letter in 0..1u64 << inputs.len() {
                let mut n = root;
                let mut out = vec![false; outputs.len()];
                while let Some(v) = self.ctx.bdd.var(n) {
                    let (lo, hi) = (self.ctx.bdd.low(n), self.ctx.bdd.high(n));
                    let k = input_pos[v.index()];
                    n = if k != usize::MAX {
                        if letter >> k & 1 == 1 {
                            hi
                        } else {
                            lo
                        }
                    } else {
                        let c = self.choose(n, lo, hi, &mut guide)?;
                        out[output_pos[v.index()]] = c == hi;
                        c
                    };
                }
                let (next, acc) = decode(self.ctx.bdd.payload(n).expect("terminal"));
                let next = if acc {
                    None
                } else if next == LabelRegistry::FF || matches!(guide, Guide::OneStep(_)) {
                    return Err(Error::Strategy("reached a losing terminal".into()));
                } else {
                    Some(*index.entry(next).or_insert_with(|| {
                        labels.push(next);
                        labels.len() - 1
                    }))
                };
                row.push(Step { outputs: out, next });
            }
            transitions.push(row);
            q += 1;
        }
        let states = labels
            .iter()
            .map(|&l| self.ctx.labels().formula(l).expect("formula label"))
            .collect();
        let m = MealyMachine {
            inputs: part.inputs.clone(),
            outputs: part.outputs.clone(),
            states,
            initial: 0,
            transitions,
        };
        m.check_terminates()?;
        if self.sem == Semantics::Moore && !m.is_moore() {
            return Err(Error::Strategy("outputs depend on the current input".into()));
        }
        Ok(m)
    }

    fn choose(&self, n: NodeRef, lo: NodeRef, hi: NodeRef, guide: &mut Guide) -> Result<NodeRef> {
        let good: Vec<NodeRef> = match guide {
            Guide::Ranked => {
                let bound = self.rank[&n];
                [lo, hi]
                    .into_iter()
                    .filter(|c| self.rank.get(c).is_some_and(|&r| r < bound))
                    .collect()
            }
            Guide::OneStep(memo) => [lo, hi]
                .into_iter()
                .filter(|&c| self.wins_now(c, memo))
                .collect(),
        };
        let accepting = |c: &NodeRef| {
            self.ctx
                .bdd
                .payload(*c)
                .is_some_and(|p| decode(p).1)
        };
        good.into_iter()
            .min_by_key(|c| (!accepting(c), c.raw()))
            .ok_or_else(|| Error::Strategy("no winning choice".into()))
    }

    /// Whether `Output` can reach an accepting terminal of the diagram below
    /// `n` without leaving it.
    fn wins_now(&self, n: NodeRef, memo: &mut FxHashMap<NodeRef, bool>) -> bool {
        if let Some(&w) = memo.get(&n) {
            return w;
        }
        let w = match self.ctx.bdd.var(n) {
            None => decode(self.ctx.bdd.payload(n).expect("terminal")).1,
            Some(v) => {
                let (lo, hi) = (self.ctx.bdd.low(n), self.ctx.bdd.high(n));
                let input = self.part.is_input(self.ctx.vocab.name(v));
                let (a, b) = (self.wins_now(lo, memo), self.wins_now(hi, memo));
                if input {
                    a && b
                } else {
                    a || b
                }
            }
        };
        memo.insert(n, w);
        w
    }
}
