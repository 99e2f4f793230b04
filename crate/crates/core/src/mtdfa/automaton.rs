//! Automata whose transition function is one MTBDD per state.

use std::collections::VecDeque;

use rustc_hash::FxHashMap;

use super::context::{decode, encode, Context, Label, LabelRegistry};
use crate::ltlf::{check_word, Assignment, Formula};
use crate::mtbdd::{BoolOp, NodeRef, OpCache, Payload, USER_TAG_BASE};
use crate::Result;

/// Automaton over the assignments of a context's vocabulary.
///
/// State `q` is a label of the context; reading assignment `w` in `q` yields
/// the terminal `(q', b)` of `delta[q]` selected by `w`: the next state and
/// whether the word read so far is accepted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mtdfa {
    states: Vec<u32>,
    initial: usize,
    delta: Vec<NodeRef>,
    index: FxHashMap<u32, usize>,
}

/// Last state reached by a run and whether the word was accepted.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RunOutcome {
    pub state: usize,
    pub accepting: bool,
}

impl Mtdfa {
    /// Builds an automaton from explicit parts; `states[k]` has transition
    /// diagram `delta[k]`.
    pub fn from_parts(states: Vec<u32>, initial: usize, delta: Vec<NodeRef>) -> Self {
        assert_eq!(states.len(), delta.len());
        assert!(initial < states.len());
        let index = states.iter().enumerate().map(|(k, &l)| (l, k)).collect();
        Mtdfa {
            states,
            initial,
            delta,
            index,
        }
    }

    /// Explores the states reachable from `[f]`, breadth first.
    pub fn translate(ctx: &mut Context, f: Formula) -> Result<Mtdfa> {
        let init = ctx.formula_label(f);
        Mtdfa::explore(ctx, init, |ctx, label| {
            let f = ctx.labels.formula(label).expect("formula label");
            ctx.tr(f)
        })
    }

    /// Closure of `init` under the successor labels of `delta_of`.
    fn explore(
        ctx: &mut Context,
        init: u32,
        mut delta_of: impl FnMut(&mut Context, u32) -> Result<NodeRef>,
    ) -> Result<Mtdfa> {
        let mut states = vec![init];
        let mut index = FxHashMap::default();
        index.insert(init, 0);
        let mut delta = Vec::new();
        let mut todo = VecDeque::from([init]);
        while let Some(label) = todo.pop_front() {
            let root = delta_of(ctx, label)?;
            debug_assert_eq!(delta.len(), index[&label]);
            delta.push(root);
            for p in ctx.bdd.leaves(root) {
                let (next, _) = decode(p);
                if !index.contains_key(&next) {
                    index.insert(next, states.len());
                    states.push(next);
                    ctx.check_states(states.len())?;
                    todo.push_back(next);
                }
            }
        }
        Ok(Mtdfa {
            states,
            initial: 0,
            delta,
            index,
        })
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    /// Label of state `q`.
    pub fn label(&self, q: usize) -> u32 {
        self.states[q]
    }

    pub fn labels(&self) -> &[u32] {
        &self.states
    }

    pub fn delta(&self, q: usize) -> NodeRef {
        self.delta[q]
    }

    pub fn roots(&self) -> &[NodeRef] {
        &self.delta
    }

    pub fn state_of_label(&self, label: u32) -> Option<usize> {
        self.index.get(&label).copied()
    }

    /// Formula of state `q`, when its label is one.
    pub fn state_formula(&self, ctx: &Context, q: usize) -> Option<Formula> {
        ctx.labels.formula(self.states[q])
    }

    /// Number of distinct nodes of all transition diagrams.
    pub fn node_count(&self, ctx: &Context) -> usize {
        ctx.bdd.node_count_many(&self.delta)
    }

    /// Successor state and accepting bit after reading `w` in state `q`.
    pub fn step(&self, ctx: &Context, q: usize, w: &Assignment) -> RunOutcome {
        let (label, accepting) = decode(ctx.bdd.eval_assignment(self.delta[q], w));
        RunOutcome {
            state: self.index[&label],
            accepting,
        }
    }

    /// Runs the automaton on a non-empty word.
    pub fn run(&self, ctx: &Context, word: &[Assignment]) -> Result<Option<RunOutcome>> {
        check_word(word, ctx.vocab.len())?;
        let mut out = None;
        let mut q = self.initial;
        for w in word {
            let o = self.step(ctx, q, w);
            q = o.state;
            out = Some(o);
        }
        Ok(out)
    }

    /// Whether `word` is accepted; the empty word never is.
    pub fn accepts(&self, ctx: &Context, word: &[Assignment]) -> Result<bool> {
        Ok(self.run(ctx, word)?.is_some_and(|o| o.accepting))
    }

    /// Closure check: every terminal leads to a state of the automaton.
    pub fn check_closed(&self, ctx: &Context) -> std::result::Result<(), String> {
        for p in ctx.bdd.leaves_many(&self.delta) {
            let (label, _) = decode(p);
            if !self.index.contains_key(&label) {
                return Err(format!(
                    "terminal leads to unknown state {}",
                    ctx.labels.display(label)
                ));
            }
        }
        Ok(())
    }

    /// Repeatedly fuses states with identical transition diagrams until all
    /// diagrams differ. Survivors prefer `tt`/`ff`, then the smallest index.
    pub fn merge_identical_states(&self, ctx: &mut Context) -> Result<Mtdfa> {
        let mut cur = self.clone();
        loop {
            let mut by_root: FxHashMap<NodeRef, usize> = FxHashMap::default();
            let mut rename: FxHashMap<u32, u32> = FxHashMap::default();
            let mut order: Vec<usize> = (0..cur.states.len()).collect();
            let special = |l: u32| l == LabelRegistry::TT || l == LabelRegistry::FF;
            order.sort_by_key(|&q| (!special(cur.states[q]), q));
            for q in order {
                match by_root.get(&cur.delta[q]) {
                    Some(&keep) => {
                        rename.insert(cur.states[q], cur.states[keep]);
                    }
                    None => {
                        by_root.insert(cur.delta[q], q);
                    }
                }
            }
            if rename.is_empty() {
                return Ok(cur);
            }
            let mut cache = OpCache::lossless();
            let mut relabel = |p: Payload| -> Result<Payload> {
                let (label, acc) = decode(p);
                Ok(match rename.get(&label) {
                    Some(&to) => encode(to, acc),
                    None => p,
                })
            };
            let mut states = Vec::new();
            let mut delta = Vec::new();
            for (q, &label) in cur.states.iter().enumerate() {
                if rename.contains_key(&label) {
                    continue;
                }
                states.push(label);
                let root = cur.delta[q];
                delta.push(ctx.bdd.apply1(root, USER_TAG_BASE, &mut cache, &mut relabel)?);
            }
            let init_label = cur.states[cur.initial];
            let init_label = rename.get(&init_label).copied().unwrap_or(init_label);
            let initial = states.iter().position(|&l| l == init_label).expect("initial");
            cur = Mtdfa::from_parts(states, initial, delta);
        }
    }

    /// Product automaton recognizing the words on which the acceptance of
    /// `a` and `b` combined by `op` holds. Only reachable pairs are built.
    pub fn compose(ctx: &mut Context, a: &Mtdfa, b: &Mtdfa, op: BoolOp) -> Result<Mtdfa> {
        let init = ctx
            .labels
            .intern(Label::Pair(a.states[a.initial], b.states[b.initial]));
        let mut cache = OpCache::lossless();
        let tag = USER_TAG_BASE + 1 + op.tag();
        Mtdfa::explore(ctx, init, |ctx, label| {
            let Label::Pair(la, lb) = ctx.labels.label(label) else {
                unreachable!("product state without a pair label")
            };
            let (ra, rb) = (a.delta[a.index[&la]], b.delta[b.index[&lb]]);
            let labels = &mut ctx.labels;
            ctx.bdd.apply2(ra, rb, tag, &mut cache, &mut |p, q| {
                let (lp, xp) = decode(p);
                let (lq, xq) = decode(q);
                let l = labels.intern(Label::Pair(lp, lq));
                Ok(Payload::tagged(l, op.eval(xp, xq)))
            })
        })
    }

    /// Automaton of the complement language (with respect to non-empty
    /// words). Formula states `q` become `[!q]`; other labels get wrapped.
    pub fn complement(&self, ctx: &mut Context) -> Result<Mtdfa> {
        let mut negated: FxHashMap<u32, u32> = FxHashMap::default();
        for &l in &self.states {
            let n = match ctx.labels.label(l) {
                Label::Formula(f) => ctx.formula_label(Formula::not(f)),
                Label::Neg(inner) => inner,
                Label::Pair(..) => ctx.labels.intern(Label::Neg(l)),
            };
            negated.insert(l, n);
        }
        let mut images: Vec<u32> = negated.values().copied().collect();
        images.sort_unstable();
        images.dedup();
        if images.len() != negated.len() {
            // Distinct states with equivalent formulas: keep them apart.
            for &l in &self.states {
                let n = ctx.labels.intern(Label::Neg(l));
                negated.insert(l, n);
            }
        }
        let mut cache = OpCache::lossless();
        let mut flip = |p: Payload| -> Result<Payload> {
            let (label, acc) = decode(p);
            Ok(encode(negated[&label], !acc))
        };
        let mut delta = Vec::with_capacity(self.delta.len());
        for &root in &self.delta {
            delta.push(ctx.bdd.apply1(root, USER_TAG_BASE, &mut cache, &mut flip)?);
        }
        let states = self.states.iter().map(|l| negated[l]).collect();
        Ok(Mtdfa::from_parts(states, self.initial, delta))
    }

    /// Whether no non-empty word is accepted.
    pub fn is_empty(&self, ctx: &Context) -> bool {
        let mut seen = vec![false; self.states.len()];
        let mut todo = vec![self.initial];
        seen[self.initial] = true;
        while let Some(q) = todo.pop() {
            for p in ctx.bdd.leaves(self.delta[q]) {
                let (label, acc) = decode(p);
                if acc {
                    return false;
                }
                let next = self.index[&label];
                if !seen[next] {
                    seen[next] = true;
                    todo.push(next);
                }
            }
        }
        true
    }

    /// Language equality, via emptiness of the symmetric difference.
    pub fn equivalent(ctx: &mut Context, a: &Mtdfa, b: &Mtdfa) -> Result<bool> {
        Ok(Mtdfa::compose(ctx, a, b, BoolOp::Xor)?.is_empty(ctx))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ltlf::{eval_word, parse, Vocabulary};
    use crate::mtdfa::Options;

    fn ctx(names: &[&str]) -> Context {
        Context::new(Vocabulary::from_names(names).unwrap(), Options::default()).unwrap()
    }

    fn words(vars: usize, max_len: usize) -> Vec<Vec<Assignment>> {
        let mut out: Vec<Vec<Assignment>> = vec![vec![]];
        let mut layer: Vec<Vec<Assignment>> = vec![vec![]];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for w in &layer {
                for a in Assignment::enumerate(vars) {
                    let mut v = w.clone();
                    v.push(a);
                    next.push(v);
                }
            }
            out.extend(next.iter().cloned());
            layer = next;
        }
        out
    }

    #[test]
    fn tt_has_one_state() {
        let mut c = ctx(&["a"]);
        let a = Mtdfa::translate(&mut c, Formula::tt()).unwrap();
        assert_eq!(a.num_states(), 1);
        assert_eq!(a.delta(0), NodeRef::TRUE);
        assert!(!a.accepts(&c, &[]).unwrap());
    }

    #[test]
    fn language_matches_semantics() {
        let mut c = ctx(&["a", "b"]);
        for text in ["a U b", "G(a -> X b)", "F(a & X[!] !b)", "!(a R X b) ^ G F a"] {
            let f = parse(text).unwrap();
            let aut = Mtdfa::translate(&mut c, f).unwrap();
            aut.check_closed(&c).unwrap();
            for w in words(2, 4).into_iter().skip(1) {
                assert_eq!(
                    aut.accepts(&c, &w).unwrap(),
                    eval_word(f, &c.vocab, &w, 0).unwrap(),
                    "{text} on {w:?}"
                );
            }
        }
    }

    #[test]
    fn boolean_operations() {
        let mut c = ctx(&["a", "b"]);
        let fa = parse("a U b").unwrap();
        let fb = parse("G F a").unwrap();
        let a = Mtdfa::translate(&mut c, fa).unwrap();
        let b = Mtdfa::translate(&mut c, fb).unwrap();
        let both = Mtdfa::translate(&mut c, Formula::and2(fa, fb)).unwrap();
        let prod = Mtdfa::compose(&mut c, &a, &b, BoolOp::And).unwrap();
        assert!(Mtdfa::equivalent(&mut c, &prod, &both).unwrap());
        let na = a.complement(&mut c).unwrap();
        let nna = na.complement(&mut c).unwrap();
        assert!(Mtdfa::equivalent(&mut c, &a, &nna).unwrap());
        assert!(!Mtdfa::equivalent(&mut c, &a, &na).unwrap());
        let contradiction = Mtdfa::compose(&mut c, &a, &na, BoolOp::And).unwrap();
        assert!(contradiction.is_empty(&c));
        let np = prod.complement(&mut c).unwrap();
        assert!(Mtdfa::compose(&mut c, &prod, &np, BoolOp::And).unwrap().is_empty(&c));
    }

    #[test]
    fn emptiness() {
        let mut c = ctx(&["a"]);
        let ff = Mtdfa::translate(&mut c, Formula::ff()).unwrap();
        assert!(ff.is_empty(&c));
        let tt = Mtdfa::translate(&mut c, Formula::tt()).unwrap();
        assert!(!tt.is_empty(&c));
        assert!(tt.complement(&mut c).unwrap().is_empty(&c));
        assert!(!Mtdfa::equivalent(&mut c, &tt, &ff).unwrap());
    }

    #[test]
    fn merging_keeps_distinct_automata_unchanged() {
        let mut c = ctx(&["a", "b"]);
        let a = Mtdfa::translate(&mut c, parse("a U b").unwrap()).unwrap();
        let m = a.merge_identical_states(&mut c).unwrap();
        assert_eq!(m, a);
    }

    const MUX: &str = "G((i0 -> (o1 <-> i1)) & (!i0 -> (o1 <-> i2)))";

    fn mux_and_recurrence(rewrites: bool) -> (Context, Mtdfa) {
        let opts = Options { rewrites, ..Options::default() };
        let vocab = Vocabulary::from_names(["i0", "i1", "i2", "o1", "o2"]).unwrap();
        let mut c = Context::new(vocab, opts).unwrap();
        let f = parse(&format!("({MUX}) & ((G F o2) <-> (F i0))")).unwrap();
        let a = Mtdfa::translate(&mut c, f).unwrap();
        (c, a)
    }

    #[test]
    fn mux_example_state_counts() {
        let (mut c, a) = mux_and_recurrence(false);
        assert_eq!(a.num_states(), 5);
        let merged = a.merge_identical_states(&mut c).unwrap();
        assert_eq!(merged.num_states(), 3);
        let (c, a) = mux_and_recurrence(true);
        assert_eq!(a.num_states(), 3);
        let states: Vec<String> = (0..3).map(|q| c.labels().display(a.label(q))).collect();
        assert!(states.contains(&"ff".to_owned()), "{states:?}");
    }
}
