//! Exhaustive enumeration of words and formulas.

use rustc_hash::FxHashSet;

use crate::ltlf::{Assignment, Formula, Word};

/// Every word over `vars` variables of length `1..=max_len`, shorter words
/// first.
pub fn words(vars: usize, max_len: usize) -> Vec<Word> {
    let letters: Vec<Assignment> = Assignment::enumerate(vars).collect();
    let mut out = Vec::new();
    let mut layer: Vec<Word> = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::with_capacity(layer.len() * letters.len());
        for w in &layer {
            for a in &letters {
                let mut v = w.clone();
                v.push(a.clone());
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

pub(crate) const UNARY: [fn(Formula) -> Formula; 5] = [
    Formula::not,
    Formula::next,
    Formula::strong_next,
    Formula::finally,
    Formula::globally,
];

pub(crate) const BINARY: [fn(Formula, Formula) -> Formula; 7] = [
    Formula::and2,
    Formula::or2,
    Formula::implies,
    Formula::iff,
    Formula::xor,
    Formula::until,
    Formula::release,
];

/// Number of syntax trees with at most `max_size` nodes over `atoms`
/// atoms plus the two constants, before any normalization.
pub fn syntax_tree_count(atoms: usize, max_size: usize) -> u128 {
    let mut count = vec![0u128; max_size + 1];
    for s in 1..=max_size {
        count[s] = if s == 1 {
            atoms as u128 + 2
        } else {
            let unary = UNARY.len() as u128 * count[s - 1];
            let binary: u128 = (1..s - 1).map(|a| count[a] * count[s - 1 - a]).sum();
            unary + BINARY.len() as u128 * binary
        };
    }
    count.iter().sum()
}

/// Distinct formulas denoted by syntax trees with at most `max_size` nodes
/// over `atoms`, `tt` and `ff`, using every operator. Trees that normalize
/// to the same formula are reported once.
pub fn formulas(atoms: &[&str], max_size: usize) -> Vec<Formula> {
    let mut layers: Vec<Vec<Formula>> = vec![Vec::new()];
    let mut all = FxHashSet::default();
    let mut out = Vec::new();
    for s in 1..=max_size {
        let mut layer = FxHashSet::default();
        if s == 1 {
            layer.insert(Formula::tt());
            layer.insert(Formula::ff());
            layer.extend(atoms.iter().map(|a| Formula::var(a)));
        } else {
            for &g in &layers[s - 1] {
                for op in UNARY {
                    layer.insert(op(g));
                }
            }
            for a in 1..s.saturating_sub(1) {
                let b = s - 1 - a;
                for &x in &layers[a] {
                    for &y in &layers[b] {
                        for op in BINARY {
                            layer.insert(op(x, y));
                        }
                    }
                }
            }
        }
        let mut layer: Vec<Formula> = layer.into_iter().collect();
        layer.sort();
        for &f in &layer {
            if all.insert(f) {
                out.push(f);
            }
        }
        layers.push(layer);
    }
    out
}
