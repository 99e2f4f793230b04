//! Shared translation state: vocabulary, node table, caches and the registry
//! giving meaning to tagged terminals.

use std::fmt;

use rustc_hash::FxHashMap;

use crate::error::Limit;
use crate::ltlf::{Canonicalizer, Formula, Kind, Partition, Semantics, Vocabulary};
use crate::mtbdd::{
    translation_size_hint, BoolOp, Mtbdd, NodeRef, OpCache, Payload, TerminalAlgebra,
};
use crate::{Error, Result, VarId};

/// What a tagged terminal's index refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Label {
    /// A formula, the representative of its propositional class.
    Formula(Formula),
    /// A state of a product automaton: one label per component.
    Pair(u32, u32),
    /// A state of a complemented automaton whose original label is not a
    /// formula.
    Neg(u32),
}

/// Bijection between labels and terminal indices.
#[derive(Clone, Debug)]
pub struct LabelRegistry {
    labels: Vec<Label>,
    index: FxHashMap<Label, u32>,
}

impl LabelRegistry {
    /// Index of the label `tt`.
    pub const TT: u32 = 0;
    /// Index of the label `ff`.
    pub const FF: u32 = 1;

    pub fn new() -> Self {
        let mut r = LabelRegistry {
            labels: Vec::new(),
            index: FxHashMap::default(),
        };
        r.intern(Label::Formula(Formula::tt()));
        r.intern(Label::Formula(Formula::ff()));
        r
    }

    pub fn intern(&mut self, label: Label) -> u32 {
        if let Some(&i) = self.index.get(&label) {
            return i;
        }
        let i = self.labels.len() as u32;
        self.labels.push(label);
        self.index.insert(label, i);
        i
    }

    pub fn get(&self, label: &Label) -> Option<u32> {
        self.index.get(label).copied()
    }

    pub fn label(&self, i: u32) -> Label {
        self.labels[i as usize]
    }

    pub fn formula(&self, i: u32) -> Option<Formula> {
        match self.labels[i as usize] {
            Label::Formula(f) => Some(f),
            _ => None,
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Human-readable rendering of a label.
    pub fn display(&self, i: u32) -> String {
        match self.labels[i as usize] {
            Label::Formula(f) => f.to_string(),
            Label::Pair(a, b) => format!("({}, {})", self.display(a), self.display(b)),
            Label::Neg(a) => format!("not {}", self.display(a)),
        }
    }
}

impl Default for LabelRegistry {
    fn default() -> Self {
        LabelRegistry::new()
    }
}

/// Decodes a terminal into `(label index, accepting bit)`. The Boolean
/// leaves stand for `(tt, true)` and `(ff, false)`.
pub fn decode(p: Payload) -> (u32, bool) {
    match p {
        Payload::Bool(true) => (LabelRegistry::TT, true),
        Payload::Bool(false) => (LabelRegistry::FF, false),
        Payload::Tagged(t) => (t.index(), t.accepting()),
    }
}

/// Inverse of [`decode`].
pub fn encode(label: u32, accepting: bool) -> Payload {
    match (label, accepting) {
        (LabelRegistry::TT, true) => Payload::Bool(true),
        (LabelRegistry::FF, false) => Payload::Bool(false),
        _ => Payload::tagged(label, accepting),
    }
}

/// Knobs of the translation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Options {
    /// Absorption rewrites inside canonicalization.
    pub rewrites: bool,
    /// Fixed-size translation cache resized to a fifth of the node count
    /// instead of a grow-on-demand one.
    pub lossy_cache: bool,
    pub max_states: Option<usize>,
    pub max_nodes: Option<usize>,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            rewrites: true,
            lossy_cache: false,
            max_states: None,
            max_nodes: None,
        }
    }
}

/// One translation unit: a node table with everything needed to interpret
/// its terminals. Handles must not be mixed between contexts.
pub struct Context {
    pub vocab: Vocabulary,
    pub bdd: Mtbdd,
    pub(crate) cache: OpCache,
    pub(crate) canon: Canonicalizer,
    pub(crate) labels: LabelRegistry,
    tr_memo: FxHashMap<Formula, NodeRef>,
    pub options: Options,
    cache_sized_for: usize,
}

impl fmt::Debug for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Context")
            .field("vars", &self.vocab.names())
            .field("nodes", &self.bdd.len())
            .field("labels", &self.labels.len())
            .finish()
    }
}

/// Terminal algebra of formula-labelled terminals:
/// `(a, x) op (b, y) = ([a op b], x op y)` and `!(a, x) = ([!a], !x)`.
pub(crate) struct FormulaAlgebra<'a> {
    pub canon: &'a mut Canonicalizer,
    pub labels: &'a mut LabelRegistry,
}

impl FormulaAlgebra<'_> {
    fn formula(&self, label: u32) -> Result<Formula> {
        self.labels.formula(label).ok_or_else(|| {
            Error::Payload(format!(
                "label {} is not a formula",
                self.labels.display(label)
            ))
        })
    }

    fn make(&mut self, f: Formula, accepting: bool) -> Payload {
        let f = self.canon.canonical(f);
        let label = self.labels.intern(Label::Formula(f));
        encode(label, accepting)
    }
}

impl TerminalAlgebra for FormulaAlgebra<'_> {
    fn combine(&mut self, op: BoolOp, a: Payload, b: Payload) -> Result<Payload> {
        let (la, xa) = decode(a);
        let (lb, xb) = decode(b);
        let (fa, fb) = (self.formula(la)?, self.formula(lb)?);
        let f = match op {
            BoolOp::And => Formula::and2(fa, fb),
            BoolOp::Or => Formula::or2(fa, fb),
            BoolOp::Xor => Formula::xor(fa, fb),
            BoolOp::Iff => Formula::iff(fa, fb),
            BoolOp::Implies => Formula::implies(fa, fb),
        };
        Ok(self.make(f, op.eval(xa, xb)))
    }

    fn negate(&mut self, a: Payload) -> Result<Payload> {
        let (la, xa) = decode(a);
        let fa = self.formula(la)?;
        Ok(self.make(Formula::not(fa), !xa))
    }
}

impl Context {
    /// Context over `vocab`, variables ordered by index.
    pub fn new(vocab: Vocabulary, options: Options) -> Result<Self> {
        let order: Vec<VarId> = vocab.ids().collect();
        Context::with_order(vocab, &order, options)
    }

    pub fn with_order(vocab: Vocabulary, order: &[VarId], options: Options) -> Result<Self> {
        if let Some(v) = order.iter().find(|v| v.index() >= vocab.len()) {
            return Err(Error::InvalidOrder(format!("{v} is not a declared variable")));
        }
        let mut bdd = Mtbdd::new();
        bdd.set_var_order(order)?;
        bdd.set_max_nodes(options.max_nodes);
        let cache = if options.lossy_cache {
            OpCache::lossy(1 << 12)
        } else {
            OpCache::lossless()
        };
        Ok(Context {
            vocab,
            bdd,
            cache,
            canon: Canonicalizer::new(options.rewrites),
            labels: LabelRegistry::new(),
            tr_memo: FxHashMap::default(),
            options,
            cache_sized_for: 0,
        })
    }

    /// Context for a realizability problem: inputs before outputs for Mealy
    /// semantics, outputs first for Moore.
    pub fn for_partition(part: &Partition, sem: Semantics, options: Options) -> Result<Self> {
        Context::new(part.vocabulary(sem)?, options)
    }

    /// Context over the atoms of `f`, in sorted order.
    pub fn for_formula(f: Formula, options: Options) -> Result<Self> {
        Context::new(Vocabulary::from_names(f.atoms())?, options)
    }

    pub fn labels(&self) -> &LabelRegistry {
        &self.labels
    }

    pub fn canonicalizer(&mut self) -> &mut Canonicalizer {
        &mut self.canon
    }

    pub fn canonical(&mut self, f: Formula) -> Formula {
        self.canon.canonical(f)
    }

    /// Label index of the class of `f`.
    pub fn formula_label(&mut self, f: Formula) -> u32 {
        let f = self.canon.canonical(f);
        self.labels.intern(Label::Formula(f))
    }

    /// Terminal `([f], accepting)`.
    pub fn term(&mut self, f: Formula, accepting: bool) -> NodeRef {
        let label = self.formula_label(f);
        let p = encode(label, accepting);
        self.bdd.terminal(p)
    }

    /// Formula and accepting bit of a terminal.
    pub fn terminal_formula(&self, p: Payload) -> Option<(Formula, bool)> {
        let (label, acc) = decode(p);
        self.labels.formula(label).map(|f| (f, acc))
    }

    /// Transition diagram of `f`: under each assignment it leads to the
    /// terminal `([progression of f], accepting)`.
    pub fn tr(&mut self, f: Formula) -> Result<NodeRef> {
        if let Some(&r) = self.tr_memo.get(&f) {
            return Ok(r);
        }
        let r = match f.kind() {
            Kind::True => NodeRef::TRUE,
            Kind::False => NodeRef::FALSE,
            Kind::Var(name) => {
                let v = self.vocab.lookup(name)?;
                self.bdd.make_node_checked(v, NodeRef::FALSE, NodeRef::TRUE)?
            }
            Kind::Not(a) => {
                let a = self.tr(a)?;
                self.negate(a)?
            }
            Kind::And(xs) | Kind::Or(xs) => {
                let op = if matches!(f.kind(), Kind::And(_)) {
                    BoolOp::And
                } else {
                    BoolOp::Or
                };
                let mut acc = self.tr(xs[0])?;
                for &x in &xs[1..] {
                    let m = self.tr(x)?;
                    acc = self.apply(op, acc, m)?;
                }
                acc
            }
            Kind::Implies(a, b) => self.tr_binary(BoolOp::Implies, a, b)?,
            Kind::Iff(a, b) => self.tr_binary(BoolOp::Iff, a, b)?,
            Kind::Xor(a, b) => self.tr_binary(BoolOp::Xor, a, b)?,
            Kind::Next(a) => self.term(a, true),
            Kind::StrongNext(a) => self.term(a, false),
            Kind::Until(a, b) => {
                // tr(b) | (tr(a) & term(a U b, false))
                let (ta, tb) = (self.tr(a)?, self.tr(b)?);
                let t = self.term(f, false);
                let stay = self.apply(BoolOp::And, ta, t)?;
                self.apply(BoolOp::Or, tb, stay)?
            }
            Kind::Release(a, b) => {
                // tr(b) & (tr(a) | term(a R b, true))
                let (ta, tb) = (self.tr(a)?, self.tr(b)?);
                let t = self.term(f, true);
                let stay = self.apply(BoolOp::Or, ta, t)?;
                self.apply(BoolOp::And, tb, stay)?
            }
            Kind::Finally(a) => {
                let ta = self.tr(a)?;
                let t = self.term(f, false);
                self.apply(BoolOp::Or, ta, t)?
            }
            Kind::Globally(a) => {
                let ta = self.tr(a)?;
                let t = self.term(f, true);
                self.apply(BoolOp::And, ta, t)?
            }
        };
        self.tr_memo.insert(f, r);
        self.maintain_cache();
        Ok(r)
    }

    fn tr_binary(&mut self, op: BoolOp, a: Formula, b: Formula) -> Result<NodeRef> {
        let ta = self.tr(a)?;
        let tb = self.tr(b)?;
        self.apply(op, ta, tb)
    }

    /// Boolean combination of two formula-labelled diagrams.
    pub fn apply(&mut self, op: BoolOp, a: NodeRef, b: NodeRef) -> Result<NodeRef> {
        let mut alg = FormulaAlgebra {
            canon: &mut self.canon,
            labels: &mut self.labels,
        };
        self.bdd.apply2_shortcut(a, b, op, &mut self.cache, &mut alg)
    }

    /// Negation of a formula-labelled diagram.
    pub fn negate(&mut self, a: NodeRef) -> Result<NodeRef> {
        let mut alg = FormulaAlgebra {
            canon: &mut self.canon,
            labels: &mut self.labels,
        };
        self.bdd.negate(a, &mut self.cache, &mut alg)
    }

    /// Keeps a lossy translation cache at a fifth of the table size.
    fn maintain_cache(&mut self) {
        if !self.cache.is_lossy() {
            return;
        }
        let target = translation_size_hint(self.bdd.len());
        if target > 2 * self.cache_sized_for.max(1 << 11) {
            self.cache.resize(target);
            self.cache_sized_for = target;
        }
    }

    pub fn cache(&self) -> &OpCache {
        &self.cache
    }

    pub(crate) fn check_states(&self, count: usize) -> Result<()> {
        match self.options.max_states {
            Some(max) if count > max => Err(Error::Resource(Limit::States(max))),
            _ => Ok(()),
        }
    }
}
