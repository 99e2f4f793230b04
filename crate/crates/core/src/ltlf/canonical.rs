//! Propositional-equivalence classes of formulas.
//!
//! Two formulas are propositionally equivalent when they are equal as
//! Boolean functions once every variable and every maximal temporal
//! subformula is read as an opaque Boolean variable. The canonicalizer maps
//! each formula to the BDD of that abstraction and returns the first formula
//! that produced the same BDD.

use rustc_hash::FxHashMap;

use super::formula::{Formula, Kind};
use crate::mtbdd::{BoolOp, Mtbdd, NodeRef, OpCache};
use crate::VarId;

pub struct Canonicalizer {
    bdd: Mtbdd,
    cache: OpCache,
    atom_var: FxHashMap<Formula, VarId>,
    abstraction: FxHashMap<Formula, NodeRef>,
    representative: FxHashMap<NodeRef, Formula>,
    memo: FxHashMap<Formula, Formula>,
    rewrites: bool,
}

impl Default for Canonicalizer {
    fn default() -> Self {
        Canonicalizer::new(true)
    }
}

impl Canonicalizer {
    /// `rewrites` enables the absorption rewrites `(a U b) | b ⇝ a U b`,
    /// `(a R b) & b ⇝ a R b`, `F b | b ⇝ F b` and `G b & b ⇝ G b`.
    pub fn new(rewrites: bool) -> Self {
        let mut representative = FxHashMap::default();
        representative.insert(NodeRef::TRUE, Formula::tt());
        representative.insert(NodeRef::FALSE, Formula::ff());
        Canonicalizer {
            bdd: Mtbdd::new(),
            cache: OpCache::lossless(),
            atom_var: FxHashMap::default(),
            abstraction: FxHashMap::default(),
            representative,
            memo: FxHashMap::default(),
            rewrites,
        }
    }

    pub fn rewrites_enabled(&self) -> bool {
        self.rewrites
    }

    /// Representative of the propositional-equivalence class of `f`.
    pub fn canonical(&mut self, f: Formula) -> Formula {
        if let Some(&r) = self.memo.get(&f) {
            return r;
        }
        let g = if self.rewrites { absorb(f) } else { f };
        let b = self.abstraction(g);
        let r = *self.representative.entry(b).or_insert(g);
        self.memo.insert(f, r);
        r
    }

    /// Whether `a` and `b` are propositionally equivalent.
    pub fn equivalent(&mut self, a: Formula, b: Formula) -> bool {
        self.abstraction(a) == self.abstraction(b)
    }

    /// BDD of the Boolean skeleton of `f` (without rewrites).
    pub fn abstraction(&mut self, f: Formula) -> NodeRef {
        if let Some(&b) = self.abstraction.get(&f) {
            return b;
        }
        let b = match f.kind() {
            Kind::True => NodeRef::TRUE,
            Kind::False => NodeRef::FALSE,
            Kind::Var(_) => self.atom(f),
            _ if f.is_temporal() => self.atom(f),
            Kind::Not(a) => {
                let a = self.abstraction(a);
                self.bdd.bdd_not(a, &mut self.cache).expect("Boolean BDD")
            }
            Kind::And(xs) | Kind::Or(xs) => {
                let op = if matches!(f.kind(), Kind::And(_)) {
                    BoolOp::And
                } else {
                    BoolOp::Or
                };
                let mut acc = self.abstraction(xs[0]);
                for &x in &xs[1..] {
                    let b = self.abstraction(x);
                    acc = self.apply(op, acc, b);
                }
                acc
            }
            Kind::Implies(a, b) => self.binary(BoolOp::Implies, a, b),
            Kind::Iff(a, b) => self.binary(BoolOp::Iff, a, b),
            Kind::Xor(a, b) => self.binary(BoolOp::Xor, a, b),
            _ => unreachable!("temporal operators are atoms"),
        };
        self.abstraction.insert(f, b);
        b
    }

    fn binary(&mut self, op: BoolOp, a: Formula, b: Formula) -> NodeRef {
        let a = self.abstraction(a);
        let b = self.abstraction(b);
        self.apply(op, a, b)
    }

    fn apply(&mut self, op: BoolOp, a: NodeRef, b: NodeRef) -> NodeRef {
        self.bdd.bdd_apply(op, a, b, &mut self.cache).expect("Boolean BDD")
    }

    /// BDD variable standing for a variable or maximal temporal subformula.
    /// The atom itself becomes the representative of its own class unless
    /// that class was already seen.
    fn atom(&mut self, f: Formula) -> NodeRef {
        let next = VarId(self.atom_var.len() as u32);
        let v = *self.atom_var.entry(f).or_insert(next);
        let node = self.bdd.var_node(v);
        self.representative.entry(node).or_insert(f);
        node
    }

    /// Number of distinct abstraction variables allocated.
    pub fn atom_count(&self) -> usize {
        self.atom_var.len()
    }
}

/// Applies the four absorption rewrites throughout the Boolean skeleton.
pub fn absorb(f: Formula) -> Formula {
    if !f.has_temporal() || f.is_temporal() {
        return f;
    }
    match f.kind() {
        Kind::And(xs) | Kind::Or(xs) => {
            let is_and = matches!(f.kind(), Kind::And(_));
            let ops: Vec<Formula> = xs.iter().map(|&x| absorb(x)).collect();
            let ops = if is_and {
                Formula::and(ops)
            } else {
                Formula::or(ops)
            };
            match ops.kind() {
                Kind::And(ys) if is_and => Formula::and(drop_absorbed(ys, true)),
                Kind::Or(ys) if !is_and => Formula::or(drop_absorbed(ys, false)),
                _ => ops,
            }
        }
        _ => {
            let children: Vec<Formula> = f.children().into_iter().map(absorb).collect();
            f.rebuild(&children)
        }
    }
}

/// Removes the operands `b` made redundant by an `a U b` / `F b` operand of
/// a disjunction, or by an `a R b` / `G b` operand of a conjunction. When `b`
/// is itself a flattened operand list of the same connective, its operands
/// are removed if all of them are present.
fn drop_absorbed(ops: &[Formula], is_and: bool) -> Vec<Formula> {
    let mut drop: Vec<Formula> = Vec::new();
    for &op in ops {
        let absorbed = match (op.kind(), is_and) {
            (Kind::Until(_, b), false) | (Kind::Finally(b), false) => b,
            (Kind::Release(_, b), true) | (Kind::Globally(b), true) => b,
            _ => continue,
        };
        let parts: Vec<Formula> = match (absorbed.kind(), is_and) {
            (Kind::And(ys), true) | (Kind::Or(ys), false) => ys.to_vec(),
            _ => vec![absorbed],
        };
        if parts.iter().all(|p| ops.binary_search(p).is_ok()) {
            drop.extend(parts);
        }
    }
    if drop.is_empty() {
        return ops.to_vec();
    }
    ops.iter().copied().filter(|o| !drop.contains(o)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ltlf::parse;

    fn p(s: &str) -> Formula {
        parse(s).unwrap()
    }

    #[test]
    fn absorbed_disjunct_collapses() {
        let mut c = Canonicalizer::new(true);
        assert_eq!(c.canonical(p("(G b) | ((F a) & (G b))")), p("G b"));
    }

    #[test]
    fn gf_absorbs_f() {
        let mut c = Canonicalizer::new(true);
        assert_eq!(c.canonical(p("(G F o2) & (F o2)")), p("G F o2"));
        let mut plain = Canonicalizer::new(false);
        assert_eq!(plain.canonical(p("(G F o2) & (F o2)")), p("(G F o2) & (F o2)"));
    }

    #[test]
    fn idempotence_and_constants() {
        let mut c = Canonicalizer::new(true);
        assert_eq!(c.canonical(p("a & a")), p("a"));
        assert_eq!(c.canonical(p("(F a) | !(F a)")), Formula::tt());
        assert_eq!(c.canonical(p("(X b) & !(X b)")), Formula::ff());
    }

    #[test]
    fn first_seen_representative_wins() {
        let mut c = Canonicalizer::new(true);
        let first = p("(F a) & (G b)");
        let second = p("!(!(G b) | !(F a))");
        assert_eq!(c.canonical(first), first);
        assert_eq!(c.canonical(second), first);
        assert!(c.equivalent(p("(F a) -> (G b)"), p("!(F a) | (G b)")));
    }

    #[test]
    fn rewrites_reach_inside_the_skeleton() {
        assert_eq!(absorb(p("c <-> ((a U b) | b)")), p("c <-> (a U b)"));
        assert_eq!(absorb(p("((a R (b & c)) & b & c) | d")), p("(a R (b & c)) | d"));
        assert_eq!(absorb(p("G((F b) | b)")), p("G((F b) | b)"));
    }
}
