//! Brute-force ground truth for testing: explicit automata built by
//! progression, explicit games, and enumerators and random generators of
//! words, formulas, arenas and diagrams.

mod enumerate;
mod explicit;
mod random;

pub use enumerate::{formulas, syntax_tree_count, words};
pub use explicit::{
    build_explicit, explicit_realizable, progress, solve_explicit_game, ExplicitDfa, Progression,
    MAX_STATES, MAX_VARS,
};
pub use random::{
    random_arena, random_diagram, random_formula, random_formulas, rng, seed_from_env, ArenaEvent,
};

use crate::ltlf::{Assignment, Vocabulary, Word};
use crate::{Error, Result};

/// Pointwise union of an input word and an output word over disjoint
/// vocabularies, laid out over `target`.
pub fn combine_words(
    inputs: (&Vocabulary, &[Assignment]),
    outputs: (&Vocabulary, &[Assignment]),
    target: &Vocabulary,
) -> Result<Word> {
    let ((iv, iw), (ov, ow)) = (inputs, outputs);
    if iw.len() != ow.len() {
        return Err(Error::Partition(format!(
            "words of different lengths {} and {}",
            iw.len(),
            ow.len()
        )));
    }
    if let Some(n) = iv.names().iter().find(|n| ov.get(n).is_some()) {
        return Err(Error::Partition(format!("`{n}` is both an input and an output")));
    }
    let mut word = Vec::with_capacity(iw.len());
    for (a, b) in iw.iter().zip(ow) {
        let mut letter = Assignment::all(false, target.len());
        for (vocab, part) in [(iv, a), (ov, b)] {
            for v in vocab.ids() {
                letter.set(target.lookup(vocab.name(v))?, part.get(v));
            }
        }
        word.push(letter);
    }
    Ok(word)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn combined_words() {
        let i = Vocabulary::from_names(["i"]).unwrap();
        let o = Vocabulary::from_names(["o"]).unwrap();
        let t = Vocabulary::from_names(["o", "i"]).unwrap();
        let iw = vec![Assignment::from_bits(1, 1), Assignment::from_bits(0, 1)];
        let ow = vec![Assignment::from_bits(0, 1), Assignment::from_bits(1, 1)];
        let w = combine_words((&i, &iw), (&o, &ow), &t).unwrap();
        assert_eq!(w, vec![Assignment::from_bits(2, 2), Assignment::from_bits(1, 2)]);
        assert!(combine_words((&i, &iw), (&o, &ow[..1]), &t).is_err());
        assert!(combine_words((&i, &iw), (&i, &iw), &t).is_err());
    }
}
