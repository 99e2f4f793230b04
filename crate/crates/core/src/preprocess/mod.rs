//! Formula-level reductions applied before solving, and the solving
//! pipeline that uses them.

mod decompose;
mod polarity;

use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Mutex;

pub use decompose::{conjuncts, decompose, is_extension_closed, Decomposition};
pub use polarity::polarity_prune;

use crate::game::{solve, MealyMachine, SolveOptions, SolveResult, SolveStats, Status, Step, MAX_STRATEGY_INPUTS};
use crate::ltlf::{bool_realizable, one_step_real, simplify, Formula, Partition, Semantics};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PipelineOptions {
    pub solve: SolveOptions,
    /// Simplification and polarity pruning.
    pub preprocess: bool,
    /// Split into output-disjoint parts.
    pub decompose: bool,
    /// Parts solved concurrently; 0 or 1 solves them in order.
    pub threads: usize,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions {
            solve: SolveOptions::default(),
            preprocess: true,
            decompose: true,
            threads: 1,
        }
    }
}

fn unrealizable(stats: SolveStats) -> SolveResult {
    SolveResult {
        status: Status::Unrealizable,
        winner: Some(crate::game::Player::Input),
        stats,
    }
}

/// A part after pruning, and whether a realizable verdict on it can be
/// combined with the others without further checks.
struct Prepared {
    formula: Formula,
    part: Partition,
    closed: bool,
    one_step: bool,
}

fn prepare(f: Formula, part: &Partition, sem: Semantics, preprocess: bool) -> Result<Prepared> {
    let (formula, part) = if preprocess {
        let (g, p, _) = polarity_prune(f, part);
        (g, p)
    } else {
        (f, part.clone())
    };
    Ok(Prepared {
        formula,
        closed: is_extension_closed(formula),
        one_step: bool_realizable(one_step_real(formula), &part, sem)?,
        part,
    })
}

/// Decides realizability of `f`, optionally simplifying, pruning and
/// splitting it first.
///
/// An unrealizable part makes the whole specification unrealizable. When
/// every part is realizable, the parts' controllers can only be run side by
/// side if they agree on when to stop: this is guaranteed when every part
/// is closed under extension or every part can be won in one step.
/// Otherwise the undivided formula is solved.
pub fn solve_decomposed(f: Formula, part: &Partition, sem: Semantics, opts: &PipelineOptions) -> Result<SolveResult> {
    part.validate(f)?;
    let f = if opts.preprocess { simplify(f) } else { f };
    let pieces = if opts.decompose {
        decompose(f, part).parts
    } else {
        vec![(f, part.clone())]
    };
    if pieces.len() == 1 {
        let p = prepare(f, part, sem, opts.preprocess)?;
        let mut r = solve(p.formula, &p.part, sem, &opts.solve)?.result;
        r.stats.parts = 1;
        return Ok(r);
    }
    let mut prepared = Vec::with_capacity(pieces.len());
    for (g, p) in &pieces {
        let q = prepare(*g, p, sem, opts.preprocess)?;
        if q.formula.is_false() {
            return Ok(unrealizable(SolveStats {
                parts: 1,
                ..SolveStats::default()
            }));
        }
        prepared.push(q);
    }
    let results = solve_parts(&prepared, sem, opts);
    let mut stats = SolveStats::default();
    let mut error = None;
    let mut lost = false;
    for r in results.into_iter().flatten() {
        match r {
            Ok(r) => {
                stats.absorb(&r.stats);
                stats.parts += 1;
                lost |= !r.is_realizable();
            }
            Err(e) => {
                error.get_or_insert(e);
            }
        }
    }
    if lost {
        return Ok(unrealizable(stats));
    }
    if let Some(e) = error {
        return Err(e);
    }
    if prepared.iter().all(|p| p.closed) || prepared.iter().all(|p| p.one_step) {
        return Ok(SolveResult {
            status: Status::Realizable,
            winner: Some(crate::game::Player::Output),
            stats,
        });
    }
    let whole = prepare(f, part, sem, opts.preprocess)?;
    let mut r = solve(whole.formula, &whole.part, sem, &opts.solve)?.result;
    stats.absorb(&r.stats);
    stats.parts += 1;
    r.stats = stats;
    Ok(r)
}

/// Solves the parts, skipping the ones not started yet once some part is
/// found unrealizable. Slot `k` holds the outcome of part `k`, if solved.
fn solve_parts(parts: &[Prepared], sem: Semantics, opts: &PipelineOptions) -> Vec<Option<Result<SolveResult>>> {
    let one = |p: &Prepared| -> Result<SolveResult> {
        let mut r = solve(p.formula, &p.part, sem, &opts.solve)?.result;
        r.stats.parts = 0;
        Ok(r)
    };
    if opts.threads <= 1 {
        let mut out = Vec::with_capacity(parts.len());
        let mut stop = false;
        for p in parts {
            if stop {
                out.push(None);
                continue;
            }
            let r = one(p);
            stop = matches!(&r, Ok(r) if !r.is_realizable());
            out.push(Some(r));
        }
        return out;
    }
    let slots: Vec<Mutex<Option<Result<SolveResult>>>> = parts.iter().map(|_| Mutex::new(None)).collect();
    let next = Mutex::new(0usize);
    let stop = AtomicBool::new(false);
    std::thread::scope(|s| {
        for _ in 0..opts.threads.min(parts.len()) {
            s.spawn(|| loop {
                if stop.load(Ordering::SeqCst) {
                    return;
                }
                let k = {
                    let mut n = next.lock().unwrap();
                    let k = *n;
                    *n += 1;
                    k
                };
                if k >= parts.len() {
                    return;
                }
                let r = one(&parts[k]);
                if matches!(&r, Ok(r) if !r.is_realizable()) {
                    stop.store(true, Ordering::SeqCst);
                }
                *slots[k].lock().unwrap() = Some(r);
            });
        }
    });
    slots.into_iter().map(|m| m.into_inner().unwrap()).collect()
}

/// Solves `f` without decomposition and extracts a controller over the
/// full partition. Variables removed by pruning are fixed to their
/// constant (outputs) or ignored (inputs).
pub fn synthesize(
    f: Formula,
    part: &Partition,
    sem: Semantics,
    opts: &PipelineOptions,
) -> Result<(SolveResult, Option<MealyMachine>)> {
    part.validate(f)?;
    if part.inputs.len() > MAX_STRATEGY_INPUTS {
        return Err(Error::Strategy(format!(
            "{} inputs, at most {MAX_STRATEGY_INPUTS} supported",
            part.inputs.len()
        )));
    }
    let (g, reduced, removed) = if opts.preprocess {
        polarity_prune(simplify(f), part)
    } else {
        (f, part.clone(), Vec::new())
    };
    let mut solved = solve(g, &reduced, sem, &opts.solve)?;
    solved.result.stats.parts = 1;
    if !solved.result.is_realizable() {
        return Ok((solved.result, None));
    }
    let m = solved.strategy()?;
    Ok((solved.result, Some(widen(&m, part, &removed))))
}

/// Re-expresses `m` over every variable of `part`.
fn widen(m: &MealyMachine, part: &Partition, constants: &[(String, bool)]) -> MealyMachine {
    let positions: Vec<Option<usize>> = m
        .inputs
        .iter()
        .map(|n| part.inputs.iter().position(|p| p == n))
        .collect();
    let output = |name: &str, step: &Step| -> bool {
        match m.outputs.iter().position(|o| o == name) {
            Some(k) => step.outputs[k],
            None => constants.iter().find(|(n, _)| n == name).is_some_and(|&(_, b)| b),
        }
    };
    let transitions = m
        .transitions
        .iter()
        .map(|row| {
            (0..1u64 << part.inputs.len())
                .map(|letter| {
                    let reduced: u64 = positions
                        .iter()
                        .enumerate()
                        .map(|(k, p)| p.map_or(0, |p| (letter >> p & 1) << k))
                        .sum();
                    let s = &row[reduced as usize];
                    Step {
                        outputs: part.outputs.iter().map(|o| output(o, s)).collect(),
                        next: s.next,
                    }
                })
                .collect()
        })
        .collect();
    MealyMachine {
        inputs: part.inputs.clone(),
        outputs: part.outputs.clone(),
        states: m.states.clone(),
        initial: m.initial,
        transitions,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ltlf::parse;
    use crate::oracle::explicit_realizable;

    const MUX: &str = "G((i0 -> (o1 <-> i1)) & (!i0 -> (o1 <-> i2)))";
    const REC: &str = "(G F o2) <-> (F i0)";

    fn part() -> Partition {
        Partition::new(["i0", "i1", "i2"], ["o1", "o2"])
    }

    fn all_options() -> Vec<PipelineOptions> {
        let mut out = Vec::new();
        for bits in 0..16u32 {
            let mut o = PipelineOptions::default();
            o.preprocess = bits & 1 != 0;
            o.decompose = bits & 2 != 0;
            o.solve.one_step = bits & 4 != 0;
            o.threads = if bits & 8 != 0 { 2 } else { 1 };
            out.push(o);
        }
        out
    }

    #[test]
    fn running_example_under_every_option() {
        let f = parse(&format!("({MUX}) & ({REC})")).unwrap();
        for o in all_options() {
            let mealy = solve_decomposed(f, &part(), Semantics::Mealy, &o).unwrap();
            assert!(mealy.is_realizable(), "{o:?}");
            let moore = solve_decomposed(f, &part(), Semantics::Moore, &o).unwrap();
            assert!(!moore.is_realizable(), "{o:?}");
        }
    }

    #[test]
    fn parts_that_stop_at_different_times_are_not_combined_blindly() {
        // Each conjunct alone is won by stopping at once, yet the
        // conjunction asks for two incompatible lengths.
        let p = Partition::new(["i"], ["o1", "o2"]);
        for text in ["X[!] o1 & o2 & X ff", "G(o1 -> X[!] tt) & F o1 & G(o2 -> !X tt) & F o2"] {
            let f = parse(text).unwrap();
            for sem in [Semantics::Mealy, Semantics::Moore] {
                let expected = explicit_realizable(f, &p, sem).unwrap();
                for o in all_options() {
                    let r = solve_decomposed(f, &p, sem, &o).unwrap();
                    assert_eq!(r.is_realizable(), expected, "{text} {sem:?} {o:?}");
                }
            }
        }
    }

    #[test]
    fn decomposition_counts_parts() {
        let f = parse(&format!("({MUX}) & ({REC})")).unwrap();
        let r = solve_decomposed(f, &part(), Semantics::Mealy, &PipelineOptions::default()).unwrap();
        assert!(r.stats.parts >= 1);
        let mut o = PipelineOptions::default();
        o.decompose = false;
        assert_eq!(solve_decomposed(f, &part(), Semantics::Mealy, &o).unwrap().stats.parts, 1);
    }

    #[test]
    fn pruned_strategy_covers_every_variable() {
        let f = parse("G(o1 <-> X i1) & F o2 & G(i2 -> F o1)").unwrap();
        let p = Partition::new(["i1", "i2"], ["o1", "o2"]);
        for sem in [Semantics::Mealy, Semantics::Moore] {
            let expected = explicit_realizable(f, &p, sem).unwrap();
            let (r, m) = synthesize(f, &p, sem, &PipelineOptions::default()).unwrap();
            assert_eq!(r.is_realizable(), expected);
            if let Some(m) = m {
                assert_eq!(m.inputs, p.inputs);
                assert_eq!(m.outputs, p.outputs);
                assert!(m.verify(f, 10_000).unwrap() > 0);
            }
        }
        let g = parse(MUX).unwrap();
        let (_, m) = synthesize(g, &part(), Semantics::Mealy, &PipelineOptions::default()).unwrap();
        let m = m.unwrap();
        assert_eq!(m.transitions[m.initial].len(), 8);
        m.verify(g, 10_000).unwrap();
    }
}
