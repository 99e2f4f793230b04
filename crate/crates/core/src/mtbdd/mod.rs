//! Reduced ordered multi-terminal binary decision diagrams.
//!
//! A [`Mtbdd`] owns a node table. Internal nodes are `(var, low, high)`
//! triples; terminals are `(∞, payload, ∞)` triples whose payload is either a
//! Boolean leaf or a [`Tag`] packing an integer index with an accepting bit.
//! The engine knows nothing about what tags mean: operations that combine
//! tagged terminals take caller-supplied callbacks.

mod cache;
mod dot;
mod ops;

use std::fmt;

use rustc_hash::FxHashMap;

use crate::error::Limit;
use crate::{Error, Result, VarId};

pub use cache::{binary_size_hint, translation_size_hint, unary_size_hint, OpCache};
pub use dot::DotStyle;
pub use ops::{BoolOnly, BoolOp, TerminalAlgebra, USER_TAG_BASE};

/// Handle to a node of one [`Mtbdd`] table.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeRef(pub(crate) u32);

impl NodeRef {
    pub const FALSE: NodeRef = NodeRef(0);
    pub const TRUE: NodeRef = NodeRef(1);

    pub fn raw(self) -> u32 {
        self.0
    }

    pub fn leaf(value: bool) -> NodeRef {
        if value {
            NodeRef::TRUE
        } else {
            NodeRef::FALSE
        }
    }
}

impl fmt::Debug for NodeRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n{}", self.0)
    }
}

/// An index together with an accepting bit, packed as `index << 1 | bit`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Tag(u32);

impl Tag {
    pub const MAX_INDEX: u32 = u32::MAX >> 1;

    pub fn new(index: u32, accepting: bool) -> Tag {
        assert!(index <= Tag::MAX_INDEX, "tag index overflow");
        Tag(index << 1 | accepting as u32)
    }

    pub fn index(self) -> u32 {
        self.0 >> 1
    }

    pub fn accepting(self) -> bool {
        self.0 & 1 == 1
    }

    pub fn raw(self) -> u32 {
        self.0
    }

    pub fn from_raw(raw: u32) -> Tag {
        Tag(raw)
    }
}

/// Value stored in a terminal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Payload {
    Bool(bool),
    Tagged(Tag),
}

impl Payload {
    pub fn tagged(index: u32, accepting: bool) -> Payload {
        Payload::Tagged(Tag::new(index, accepting))
    }
}

/// `var` value of terminals, greater than every variable.
const TERMINAL_VAR: u32 = u32::MAX;
const TERMINAL_LEVEL: u32 = u32::MAX;
const SENTINEL_TAGGED: u32 = u32::MAX;
const SENTINEL_BOOL: u32 = u32::MAX - 1;
const UNORDERED: u32 = u32::MAX;

#[derive(Clone, Copy, Debug)]
struct Node {
    var: u32,
    level: u32,
    low: u32,
    high: u32,
}

/// A node table with its variable order.
#[derive(Clone, Debug)]
pub struct Mtbdd {
    nodes: Vec<Node>,
    unique: FxHashMap<(u32, u32, u32), u32>,
    level_of: Vec<u32>,
    order: Vec<VarId>,
    max_nodes: Option<usize>,
}

impl Default for Mtbdd {
    fn default() -> Self {
        Mtbdd::new()
    }
}

impl Mtbdd {
    /// Empty table (just the two Boolean leaves), identity variable order.
    pub fn new() -> Self {
        let leaf = |b: u32| Node {
            var: TERMINAL_VAR,
            level: TERMINAL_LEVEL,
            low: b,
            high: SENTINEL_BOOL,
        };
        let mut unique = FxHashMap::default();
        unique.insert((TERMINAL_VAR, 0, SENTINEL_BOOL), 0);
        unique.insert((TERMINAL_VAR, 1, SENTINEL_BOOL), 1);
        Mtbdd {
            nodes: vec![leaf(0), leaf(1)],
            unique,
            level_of: Vec::new(),
            order: Vec::new(),
            max_nodes: None,
        }
    }

    /// Puts `order[0]` at the top. Variables not listed come after, by index.
    /// Only allowed before any node other than the Boolean leaves exists.
    pub fn set_var_order(&mut self, order: &[VarId]) -> Result<()> {
        if self.nodes.len() > 2 {
            return Err(Error::OrderAfterAllocation);
        }
        let max = order.iter().map(|v| v.index() + 1).max().unwrap_or(0);
        let mut level_of = vec![UNORDERED; max];
        for (level, v) in order.iter().enumerate() {
            if level_of[v.index()] != UNORDERED {
                return Err(Error::InvalidOrder(format!("{v} listed twice")));
            }
            level_of[v.index()] = level as u32;
        }
        self.level_of = level_of;
        self.order = order.to_vec();
        Ok(())
    }

    pub fn var_order(&self) -> &[VarId] {
        &self.order
    }

    /// Position of `var` in the order; smaller is closer to the root.
    pub fn level(&self, var: VarId) -> u32 {
        match self.level_of.get(var.index()) {
            Some(&l) if l != UNORDERED => l,
            _ => self.order.len() as u32 + var.0,
        }
    }

    /// Caps the table size; operations fail with a resource error past it.
    pub fn set_max_nodes(&mut self, max: Option<usize>) {
        self.max_nodes = max;
    }

    /// Total number of nodes allocated, terminals included.
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.len() == 2
    }

    pub fn make_node(&mut self, var: VarId, low: NodeRef, high: NodeRef) -> NodeRef {
        if low == high {
            return low;
        }
        let level = self.level(var);
        assert!(
            level < self.nodes[low.0 as usize].level && level < self.nodes[high.0 as usize].level,
            "variable order violated by node on {var}"
        );
        let key = (var.0, low.0, high.0);
        if let Some(&n) = self.unique.get(&key) {
            return NodeRef(n);
        }
        let n = self.nodes.len() as u32;
        self.nodes.push(Node {
            var: var.0,
            level,
            low: low.0,
            high: high.0,
        });
        self.unique.insert(key, n);
        NodeRef(n)
    }

    /// [`Self::make_node`] that honours the node budget.
    pub(crate) fn make_node_checked(
        &mut self,
        var: VarId,
        low: NodeRef,
        high: NodeRef,
    ) -> Result<NodeRef> {
        let r = self.make_node(var, low, high);
        self.check_budget()?;
        Ok(r)
    }

    pub fn check_budget(&self) -> Result<()> {
        match self.max_nodes {
            Some(max) if self.nodes.len() > max => Err(Error::Resource(Limit::Nodes(max))),
            _ => Ok(()),
        }
    }

    pub fn terminal(&mut self, payload: Payload) -> NodeRef {
        let (low, high) = match payload {
            Payload::Bool(b) => return NodeRef::leaf(b),
            Payload::Tagged(t) => (t.0, SENTINEL_TAGGED),
        };
        let key = (TERMINAL_VAR, low, high);
        if let Some(&n) = self.unique.get(&key) {
            return NodeRef(n);
        }
        let n = self.nodes.len() as u32;
        self.nodes.push(Node {
            var: TERMINAL_VAR,
            level: TERMINAL_LEVEL,
            low,
            high,
        });
        self.unique.insert(key, n);
        NodeRef(n)
    }

    /// The BDD of a single variable.
    pub fn var_node(&mut self, var: VarId) -> NodeRef {
        self.make_node(var, NodeRef::FALSE, NodeRef::TRUE)
    }

    pub fn is_terminal(&self, m: NodeRef) -> bool {
        self.nodes[m.0 as usize].var == TERMINAL_VAR
    }

    pub fn payload(&self, m: NodeRef) -> Option<Payload> {
        let n = &self.nodes[m.0 as usize];
        match (n.var, n.high) {
            (TERMINAL_VAR, SENTINEL_BOOL) => Some(Payload::Bool(n.low == 1)),
            (TERMINAL_VAR, _) => Some(Payload::Tagged(Tag(n.low))),
            _ => None,
        }
    }

    /// Decision variable of an internal node.
    pub fn var(&self, m: NodeRef) -> Option<VarId> {
        let n = &self.nodes[m.0 as usize];
        (n.var != TERMINAL_VAR).then_some(VarId(n.var))
    }

    /// Low child of an internal node.
    pub fn low(&self, m: NodeRef) -> NodeRef {
        let n = &self.nodes[m.0 as usize];
        assert!(n.var != TERMINAL_VAR, "low() of a terminal");
        NodeRef(n.low)
    }

    /// High child of an internal node.
    pub fn high(&self, m: NodeRef) -> NodeRef {
        let n = &self.nodes[m.0 as usize];
        assert!(n.var != TERMINAL_VAR, "high() of a terminal");
        NodeRef(n.high)
    }

    pub(crate) fn node_level(&self, m: NodeRef) -> u32 {
        self.nodes[m.0 as usize].level
    }

    /// Whether `m` is a handle of this table.
    pub fn contains(&self, m: NodeRef) -> bool {
        (m.0 as usize) < self.nodes.len()
    }

    /// Checks reduction, ordering and canonicity below `m`.
    pub fn check_invariants(&self, m: NodeRef) -> std::result::Result<(), String> {
        let mut seen = rustc_hash::FxHashSet::default();
        let mut stack = vec![m];
        while let Some(x) = stack.pop() {
            if !seen.insert(x) {
                continue;
            }
            let n = self.nodes[x.0 as usize];
            let key = if n.var == TERMINAL_VAR {
                (TERMINAL_VAR, n.low, n.high)
            } else {
                if n.low == n.high {
                    return Err(format!("{x:?} has identical children"));
                }
                for c in [n.low, n.high] {
                    if self.nodes[c as usize].level <= n.level {
                        return Err(format!("{x:?} is not above its child n{c}"));
                    }
                    stack.push(NodeRef(c));
                }
                if n.level != self.level(VarId(n.var)) {
                    return Err(format!("{x:?} has a stale level"));
                }
                (n.var, n.low, n.high)
            };
            if self.unique.get(&key) != Some(&x.0) {
                return Err(format!("{x:?} is not the canonical node of its triple"));
            }
        }
        Ok(())
    }
}
