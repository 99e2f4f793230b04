//! Apply-style operations, traversals and quantification.

use rustc_hash::{FxHashMap, FxHashSet};

use super::{Mtbdd, NodeRef, OpCache, Payload};
use crate::ltlf::Assignment;
use crate::{Error, Result, VarId};

/// Operation tags below this value are reserved for the engine's own cached
/// operations; callers sharing a cache should number their operations from
/// here on.
pub const USER_TAG_BASE: u32 = 16;

/// Binary Boolean connective lifted to terminals.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BoolOp {
    And,
    Or,
    Xor,
    Iff,
    Implies,
}

impl BoolOp {
    pub fn eval(self, a: bool, b: bool) -> bool {
        match self {
            BoolOp::And => a && b,
            BoolOp::Or => a || b,
            BoolOp::Xor => a != b,
            BoolOp::Iff => a == b,
            BoolOp::Implies => !a || b,
        }
    }

    pub fn tag(self) -> u32 {
        match self {
            BoolOp::And => 1,
            BoolOp::Or => 2,
            BoolOp::Xor => 3,
            BoolOp::Iff => 4,
            BoolOp::Implies => 5,
        }
    }

    /// Result known from one Boolean-leaf operand alone.
    fn shortcut(self, m1: NodeRef, m2: NodeRef) -> Option<NodeRef> {
        let (f, t) = (NodeRef::FALSE, NodeRef::TRUE);
        match self {
            BoolOp::And if m1 == f || m2 == f => Some(f),
            BoolOp::And if m1 == t => Some(m2),
            BoolOp::And if m2 == t => Some(m1),
            BoolOp::Or if m1 == t || m2 == t => Some(t),
            BoolOp::Or if m1 == f => Some(m2),
            BoolOp::Or if m2 == f => Some(m1),
            BoolOp::Xor if m1 == f => Some(m2),
            BoolOp::Xor if m2 == f => Some(m1),
            BoolOp::Iff if m1 == t => Some(m2),
            BoolOp::Iff if m2 == t => Some(m1),
            BoolOp::Implies if m1 == f || m2 == t => Some(t),
            BoolOp::Implies if m1 == t => Some(m2),
            _ => None,
        }
    }
}

const TAG_NOT: u32 = 6;
const TAG_TAGGED_NOT: u32 = 7;

/// Interpretation of Boolean connectives over terminal payloads.
///
/// The Boolean leaves must behave as the usual constants (`true ∧ x = x`,
/// `false ∧ x = false`, ...) for the shortcuts of
/// [`Mtbdd::apply2_shortcut`] to be sound.
pub trait TerminalAlgebra {
    fn combine(&mut self, op: BoolOp, a: Payload, b: Payload) -> Result<Payload>;
    fn negate(&mut self, a: Payload) -> Result<Payload>;
}

/// Algebra of plain BDDs: tagged payloads are rejected.
#[derive(Clone, Copy, Debug, Default)]
pub struct BoolOnly;

impl TerminalAlgebra for BoolOnly {
    fn combine(&mut self, op: BoolOp, a: Payload, b: Payload) -> Result<Payload> {
        match (a, b) {
            (Payload::Bool(x), Payload::Bool(y)) => Ok(Payload::Bool(op.eval(x, y))),
            _ => Err(Error::Payload("tagged terminal in a Boolean operation".into())),
        }
    }

    fn negate(&mut self, a: Payload) -> Result<Payload> {
        match a {
            Payload::Bool(x) => Ok(Payload::Bool(!x)),
            _ => Err(Error::Payload("tagged terminal in a Boolean operation".into())),
        }
    }
}

impl Mtbdd {
    /// Cofactors of `m` with respect to the variable at `level`.
    fn cofactors(&self, m: NodeRef, level: u32) -> (NodeRef, NodeRef) {
        if self.node_level(m) == level {
            (self.low(m), self.high(m))
        } else {
            (m, m)
        }
    }

    fn top_var(&self, m1: NodeRef, m2: NodeRef) -> (VarId, u32) {
        let (l1, l2) = (self.node_level(m1), self.node_level(m2));
        let m = if l1 <= l2 { m1 } else { m2 };
        (self.var(m).expect("internal node"), l1.min(l2))
    }

    /// Pointwise combination of two diagrams: the terminal reached by `w` in
    /// the result is `op` applied to the terminals reached by `w` in `m1` and
    /// `m2`. `op_tag` identifies `op` in `cache`.
    pub fn apply2(
        &mut self,
        m1: NodeRef,
        m2: NodeRef,
        op_tag: u32,
        cache: &mut OpCache,
        op: &mut dyn FnMut(Payload, Payload) -> Result<Payload>,
    ) -> Result<NodeRef> {
        if let (Some(p1), Some(p2)) = (self.payload(m1), self.payload(m2)) {
            let p = op(p1, p2)?;
            return Ok(self.terminal(p));
        }
        if let Some(r) = cache.get(m1, m2, op_tag) {
            return Ok(r);
        }
        let (var, level) = self.top_var(m1, m2);
        let (l1, h1) = self.cofactors(m1, level);
        let (l2, h2) = self.cofactors(m2, level);
        let low = self.apply2(l1, l2, op_tag, cache, op)?;
        let high = self.apply2(h1, h2, op_tag, cache, op)?;
        let r = self.make_node_checked(var, low, high)?;
        cache.insert(m1, m2, op_tag, r);
        Ok(r)
    }

    /// Like [`Self::apply2`] for a Boolean connective, returning early when an
    /// operand is a Boolean leaf that decides the result.
    pub fn apply2_shortcut(
        &mut self,
        m1: NodeRef,
        m2: NodeRef,
        op: BoolOp,
        cache: &mut OpCache,
        alg: &mut dyn TerminalAlgebra,
    ) -> Result<NodeRef> {
        if let Some(r) = op.shortcut(m1, m2) {
            return Ok(r);
        }
        if let (Some(p1), Some(p2)) = (self.payload(m1), self.payload(m2)) {
            let p = alg.combine(op, p1, p2)?;
            return Ok(self.terminal(p));
        }
        if let Some(r) = cache.get(m1, m2, op.tag()) {
            return Ok(r);
        }
        let (var, level) = self.top_var(m1, m2);
        let (l1, h1) = self.cofactors(m1, level);
        let (l2, h2) = self.cofactors(m2, level);
        let low = self.apply2_shortcut(l1, l2, op, cache, alg)?;
        let high = self.apply2_shortcut(h1, h2, op, cache, alg)?;
        let r = self.make_node_checked(var, low, high)?;
        cache.insert(m1, m2, op.tag(), r);
        Ok(r)
    }

    /// Maps every terminal of `m` through `op`.
    pub fn apply1(
        &mut self,
        m: NodeRef,
        op_tag: u32,
        cache: &mut OpCache,
        op: &mut dyn FnMut(Payload) -> Result<Payload>,
    ) -> Result<NodeRef> {
        if let Some(p) = self.payload(m) {
            let q = op(p)?;
            return Ok(self.terminal(q));
        }
        if let Some(r) = cache.get(m, m, op_tag) {
            return Ok(r);
        }
        let var = self.var(m).expect("internal node");
        let (l, h) = (self.low(m), self.high(m));
        let low = self.apply1(l, op_tag, cache, op)?;
        let high = self.apply1(h, op_tag, cache, op)?;
        let r = self.make_node_checked(var, low, high)?;
        cache.insert(m, m, op_tag, r);
        Ok(r)
    }

    /// Pointwise negation through `alg`.
    pub fn negate(
        &mut self,
        m: NodeRef,
        cache: &mut OpCache,
        alg: &mut dyn TerminalAlgebra,
    ) -> Result<NodeRef> {
        self.apply1(m, TAG_TAGGED_NOT, cache, &mut |p| alg.negate(p))
    }

    /// Payloads of the terminals reachable from `m`, in depth-first,
    /// low-before-high discovery order. Each node is visited once.
    pub fn leaves(&self, m: NodeRef) -> Vec<Payload> {
        self.leaves_many(&[m])
    }

    pub fn leaves_many(&self, roots: &[NodeRef]) -> Vec<Payload> {
        let mut out = Vec::new();
        self.walk(roots, |t, n| {
            if let Some(p) = t.payload(n) {
                out.push(p);
            }
        });
        out
    }

    /// Visits every node reachable from `roots` once, depth-first with low
    /// children before high children.
    pub fn walk(&self, roots: &[NodeRef], mut visit: impl FnMut(&Mtbdd, NodeRef)) {
        let mut seen = FxHashSet::default();
        let mut todo: Vec<NodeRef> = roots.iter().rev().copied().collect();
        while let Some(n) = todo.pop() {
            if !seen.insert(n) {
                continue;
            }
            visit(self, n);
            if !self.is_terminal(n) {
                todo.push(self.high(n));
                todo.push(self.low(n));
            }
        }
    }

    /// Number of nodes reachable from `m`, terminals included.
    pub fn node_count(&self, m: NodeRef) -> usize {
        self.node_count_many(&[m])
    }

    /// Number of distinct nodes reachable from any of `roots`.
    pub fn node_count_many(&self, roots: &[NodeRef]) -> usize {
        let mut n = 0;
        self.walk(roots, |_, _| n += 1);
        n
    }

    /// Follows `value` from `m` down to a terminal.
    pub fn eval(&self, mut m: NodeRef, value: &dyn Fn(VarId) -> bool) -> Payload {
        loop {
            if let Some(p) = self.payload(m) {
                return p;
            }
            let var = self.var(m).expect("internal node");
            m = if value(var) { self.high(m) } else { self.low(m) };
        }
    }

    pub fn eval_assignment(&self, m: NodeRef, w: &Assignment) -> Payload {
        self.eval(m, &|v| w.get(v))
    }

    /// Variables on which `m` depends, sorted by index.
    pub fn support(&self, m: NodeRef) -> Vec<VarId> {
        let mut vars = Vec::new();
        self.walk(&[m], |t, n| vars.extend(t.var(n)));
        vars.sort_unstable();
        vars.dedup();
        vars
    }

    pub fn bdd_not(&mut self, m: NodeRef, cache: &mut OpCache) -> Result<NodeRef> {
        self.apply1(m, TAG_NOT, cache, &mut |p| BoolOnly.negate(p))
    }

    pub fn bdd_apply(
        &mut self,
        op: BoolOp,
        m1: NodeRef,
        m2: NodeRef,
        cache: &mut OpCache,
    ) -> Result<NodeRef> {
        self.apply2_shortcut(m1, m2, op, cache, &mut BoolOnly)
    }

    pub fn bdd_and(&mut self, m1: NodeRef, m2: NodeRef, cache: &mut OpCache) -> Result<NodeRef> {
        self.bdd_apply(BoolOp::And, m1, m2, cache)
    }

    pub fn bdd_or(&mut self, m1: NodeRef, m2: NodeRef, cache: &mut OpCache) -> Result<NodeRef> {
        self.bdd_apply(BoolOp::Or, m1, m2, cache)
    }

    /// Existential quantification of the variables selected by `quantified`
    /// in a Boolean-leaved diagram.
    pub fn exists(
        &mut self,
        m: NodeRef,
        quantified: &dyn Fn(VarId) -> bool,
        cache: &mut OpCache,
    ) -> Result<NodeRef> {
        let mut memo = FxHashMap::default();
        self.quantify(m, quantified, BoolOp::Or, cache, &mut memo)
    }

    /// Universal counterpart of [`Self::exists`].
    pub fn forall(
        &mut self,
        m: NodeRef,
        quantified: &dyn Fn(VarId) -> bool,
        cache: &mut OpCache,
    ) -> Result<NodeRef> {
        let mut memo = FxHashMap::default();
        self.quantify(m, quantified, BoolOp::And, cache, &mut memo)
    }

    fn quantify(
        &mut self,
        m: NodeRef,
        quantified: &dyn Fn(VarId) -> bool,
        join: BoolOp,
        cache: &mut OpCache,
        memo: &mut FxHashMap<NodeRef, NodeRef>,
    ) -> Result<NodeRef> {
        if self.is_terminal(m) {
            return Ok(m);
        }
        if let Some(&r) = memo.get(&m) {
            return Ok(r);
        }
        let var = self.var(m).expect("internal node");
        let (l, h) = (self.low(m), self.high(m));
        let low = self.quantify(l, quantified, join, cache, memo)?;
        let high = self.quantify(h, quantified, join, cache, memo)?;
        let r = if quantified(var) {
            self.bdd_apply(join, low, high, cache)?
        } else {
            self.make_node_checked(var, low, high)?
        };
        memo.insert(m, r);
        Ok(r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ltlf::Assignment;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Random diagram over `vars` variables with tagged terminals.
    fn random(t: &mut Mtbdd, rng: &mut ChaCha8Rng, level: u32, vars: u32) -> NodeRef {
        if level == vars || rng.gen_bool(0.25) {
            return match rng.gen_range(0..4) {
                0 => NodeRef::FALSE,
                1 => NodeRef::TRUE,
                _ => t.terminal(Payload::tagged(rng.gen_range(0..4), rng.gen())),
            };
        }
        let low = random(t, rng, level + 1, vars);
        let high = random(t, rng, level + 1, vars);
        t.make_node(VarId(level), low, high)
    }

    fn pair(a: Payload, b: Payload) -> Payload {
        let code = |p: Payload| match p {
            Payload::Bool(b) => b as u32,
            Payload::Tagged(t) => 2 + t.raw(),
        };
        Payload::tagged(code(a) * 64 + code(b), false)
    }

    #[test]
    fn apply2_is_pointwise() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut t = Mtbdd::new();
        for _ in 0..200 {
            let a = random(&mut t, &mut rng, 0, 5);
            let b = random(&mut t, &mut rng, 0, 5);
            let mut cache = OpCache::lossless();
            let r = t
                .apply2(a, b, USER_TAG_BASE, &mut cache, &mut |x, y| Ok(pair(x, y)))
                .unwrap();
            t.check_invariants(r).unwrap();
            for w in Assignment::enumerate(5) {
                let expected = pair(t.eval_assignment(a, &w), t.eval_assignment(b, &w));
                assert_eq!(t.eval_assignment(r, &w), expected);
            }
        }
    }

    #[test]
    fn first_projection_is_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let mut t = Mtbdd::new();
        let a = random(&mut t, &mut rng, 0, 4);
        let r = t
            .apply2(a, a, USER_TAG_BASE, &mut OpCache::lossless(), &mut |x, _| Ok(x))
            .unwrap();
        assert_eq!(r, a);
    }

    #[test]
    fn shortcut_returns_operand_untouched() {
        let mut t = Mtbdd::new();
        let x = t.var_node(VarId(0));
        let y = t.var_node(VarId(1));
        let m = t.bdd_and(x, y, &mut OpCache::lossless()).unwrap();
        let before = t.len();
        let mut cache = OpCache::lossless();
        assert_eq!(t.bdd_and(NodeRef::TRUE, m, &mut cache).unwrap(), m);
        assert_eq!(t.bdd_and(NodeRef::FALSE, m, &mut cache).unwrap(), NodeRef::FALSE);
        assert_eq!(t.len(), before);
        assert_eq!(cache.hits() + cache.misses(), 0);
    }

    #[test]
    fn quantification() {
        let mut t = Mtbdd::new();
        let mut c = OpCache::lossless();
        let i = t.var_node(VarId(0));
        let o = t.var_node(VarId(1));
        let g = t.bdd_apply(BoolOp::Iff, o, i, &mut c).unwrap();
        let is_out = |v: VarId| v == VarId(1);
        let is_in = |v: VarId| v == VarId(0);
        let e = t.exists(g, &is_out, &mut c).unwrap();
        assert_eq!(t.forall(e, &is_in, &mut c).unwrap(), NodeRef::TRUE);
        let a = t.forall(g, &is_in, &mut c).unwrap();
        assert_eq!(t.exists(a, &is_out, &mut c).unwrap(), NodeRef::FALSE);
    }

    #[test]
    fn counting_and_leaves() {
        let mut t = Mtbdd::new();
        let a = t.terminal(Payload::tagged(1, true));
        assert_eq!(t.node_count(a), 1);
        assert_eq!(t.leaves(a), vec![Payload::tagged(1, true)]);
        let n = t.make_node(VarId(0), NodeRef::FALSE, a);
        assert_eq!(t.node_count(n), 3);
        assert_eq!(t.node_count_many(&[n, a, n]), 3);
        assert_eq!(t.leaves(n), vec![Payload::Bool(false), Payload::tagged(1, true)]);
        assert_eq!(t.support(n), vec![VarId(0)]);
    }

    #[test]
    fn node_budget_is_enforced() {
        let mut t = Mtbdd::new();
        let vars: Vec<_> = (0..10).map(|v| t.var_node(VarId(v))).collect();
        t.set_max_nodes(Some(t.len() + 3));
        let mut c = OpCache::lossless();
        let mut acc = NodeRef::FALSE;
        let mut failed = false;
        for v in vars {
            match t.bdd_apply(BoolOp::Xor, acc, v, &mut c) {
                Ok(r) => acc = r,
                Err(e) => {
                    assert!(e.is_resource());
                    failed = true;
                    break;
                }
            }
        }
        assert!(failed);
    }
}
