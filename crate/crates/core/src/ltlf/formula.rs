//! Hash-consed LTLf formulas.
//!
//! Every formula lives in a process-wide append-only interner. A [`Formula`]
//! is a `Copy` handle to an interned node, so structural equality is pointer
//! equality and hashing is by the node's sequence number. The smart
//! constructors perform light normalization (flattening, sorting and
//! deduplicating the operands of `&`/`|`, constant folding) so that trivially
//! equal formulas share one identity.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{LazyLock, Mutex};

use rustc_hash::FxHashMap;

/// Operator of a formula node.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Kind {
    True,
    False,
    Var(&'static str),
    Not(Formula),
    And(&'static [Formula]),
    Or(&'static [Formula]),
    Implies(Formula, Formula),
    Iff(Formula, Formula),
    Xor(Formula, Formula),
    /// Weak next: vacuously true at the last position.
    Next(Formula),
    /// Strong next: requires a successor position.
    StrongNext(Formula),
    Until(Formula, Formula),
    Release(Formula, Formula),
    Finally(Formula),
    Globally(Formula),
}

pub struct Node {
    id: u32,
    kind: Kind,
    size: u32,
    temporal: bool,
}

/// Handle to an interned formula.
#[derive(Clone, Copy)]
pub struct Formula(&'static Node);

impl PartialEq for Formula {
    #[inline]
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self.0, other.0)
    }
}

impl Eq for Formula {}

impl Hash for Formula {
    #[inline]
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.id.hash(state)
    }
}

impl PartialOrd for Formula {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Formula {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.id.cmp(&other.0.id)
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}:{}", self.0.id, self)
    }
}

#[derive(PartialEq, Eq, Hash)]
enum Key {
    True,
    False,
    Var(Box<str>),
    Unary(u8, u32),
    Binary(u8, u32, u32),
    Nary(u8, Box<[u32]>),
}

const OP_NOT: u8 = 0;
const OP_AND: u8 = 1;
const OP_OR: u8 = 2;
const OP_IMPLIES: u8 = 3;
const OP_IFF: u8 = 4;
const OP_XOR: u8 = 5;
const OP_NEXT: u8 = 6;
const OP_STRONG_NEXT: u8 = 7;
const OP_UNTIL: u8 = 8;
const OP_RELEASE: u8 = 9;
const OP_FINALLY: u8 = 10;
const OP_GLOBALLY: u8 = 11;

fn key_of(kind: &Kind) -> Key {
    match *kind {
        Kind::True => Key::True,
        Kind::False => Key::False,
        Kind::Var(name) => Key::Var(name.into()),
        Kind::Not(a) => Key::Unary(OP_NOT, a.id()),
        Kind::Next(a) => Key::Unary(OP_NEXT, a.id()),
        Kind::StrongNext(a) => Key::Unary(OP_STRONG_NEXT, a.id()),
        Kind::Finally(a) => Key::Unary(OP_FINALLY, a.id()),
        Kind::Globally(a) => Key::Unary(OP_GLOBALLY, a.id()),
        Kind::Implies(a, b) => Key::Binary(OP_IMPLIES, a.id(), b.id()),
        Kind::Iff(a, b) => Key::Binary(OP_IFF, a.id(), b.id()),
        Kind::Xor(a, b) => Key::Binary(OP_XOR, a.id(), b.id()),
        Kind::Until(a, b) => Key::Binary(OP_UNTIL, a.id(), b.id()),
        Kind::Release(a, b) => Key::Binary(OP_RELEASE, a.id(), b.id()),
        Kind::And(ops) => Key::Nary(OP_AND, ops.iter().map(|f| f.id()).collect()),
        Kind::Or(ops) => Key::Nary(OP_OR, ops.iter().map(|f| f.id()).collect()),
    }
}

struct Store {
    table: FxHashMap<Key, Formula>,
    next_id: u32,
}

static STORE: LazyLock<Mutex<Store>> = LazyLock::new(|| {
    Mutex::new(Store {
        table: FxHashMap::default(),
        next_id: 0,
    })
});

/// Kinds whose payload has not yet been leaked into `'static` storage.
enum Proto<'a> {
    Plain(Kind),
    Var(&'a str),
    Nary(bool, Vec<Formula>),
}

fn intern(proto: Proto<'_>) -> Formula {
    let key = match &proto {
        Proto::Plain(kind) => key_of(kind),
        Proto::Var(name) => Key::Var((*name).into()),
        Proto::Nary(is_and, ops) => Key::Nary(
            if *is_and { OP_AND } else { OP_OR },
            ops.iter().map(|f| f.id()).collect(),
        ),
    };
    let mut store = STORE.lock().unwrap_or_else(|e| e.into_inner());
    if let Some(&f) = store.table.get(&key) {
        return f;
    }
    let kind = match proto {
        Proto::Plain(kind) => kind,
        Proto::Var(name) => Kind::Var(Box::leak(name.into())),
        Proto::Nary(is_and, ops) => {
            let ops: &'static [Formula] = Box::leak(ops.into_boxed_slice());
            if is_and {
                Kind::And(ops)
            } else {
                Kind::Or(ops)
            }
        }
    };
    let (size, temporal) = summary(&kind);
    let id = store.next_id;
    store.next_id = store.next_id.checked_add(1).expect("formula store exhausted");
    let node: &'static Node = Box::leak(Box::new(Node {
        id,
        kind,
        size,
        temporal,
    }));
    let f = Formula(node);
    store.table.insert(key, f);
    f
}

fn summary(kind: &Kind) -> (u32, bool) {
    let children = kind.children();
    let size = children
        .iter()
        .fold(1u32, |acc, c| acc.saturating_add(c.size() as u32));
    let temporal = kind.is_temporal_op() || children.iter().any(|c| c.has_temporal());
    (size, temporal)
}

impl Kind {
    /// Direct operands, in order.
    pub fn children(&self) -> Vec<Formula> {
        match *self {
            Kind::True | Kind::False | Kind::Var(_) => Vec::new(),
            Kind::Not(a)
            | Kind::Next(a)
            | Kind::StrongNext(a)
            | Kind::Finally(a)
            | Kind::Globally(a) => vec![a],
            Kind::Implies(a, b)
            | Kind::Iff(a, b)
            | Kind::Xor(a, b)
            | Kind::Until(a, b)
            | Kind::Release(a, b) => vec![a, b],
            Kind::And(ops) | Kind::Or(ops) => ops.to_vec(),
        }
    }

    pub fn is_temporal_op(&self) -> bool {
        matches!(
            self,
            Kind::Next(_)
                | Kind::StrongNext(_)
                | Kind::Until(..)
                | Kind::Release(..)
                | Kind::Finally(_)
                | Kind::Globally(_)
        )
    }
}

impl Formula {
    #[inline]
    pub fn id(self) -> u32 {
        self.0.id
    }

    #[inline]
    pub fn kind(self) -> Kind {
        self.0.kind
    }

    /// Number of nodes in the syntax tree (saturating).
    #[inline]
    pub fn size(self) -> usize {
        self.0.size as usize
    }

    /// Whether any temporal operator occurs in the formula.
    #[inline]
    pub fn has_temporal(self) -> bool {
        self.0.temporal
    }

    /// Whether the top-level operator is temporal.
    #[inline]
    pub fn is_temporal(self) -> bool {
        self.0.kind.is_temporal_op()
    }

    pub fn is_true(self) -> bool {
        matches!(self.0.kind, Kind::True)
    }

    pub fn is_false(self) -> bool {
        matches!(self.0.kind, Kind::False)
    }

    pub fn children(self) -> Vec<Formula> {
        self.0.kind.children()
    }

    pub fn tt() -> Formula {
        static TT: LazyLock<Formula> = LazyLock::new(|| intern(Proto::Plain(Kind::True)));
        *TT
    }

    pub fn ff() -> Formula {
        static FF: LazyLock<Formula> = LazyLock::new(|| intern(Proto::Plain(Kind::False)));
        *FF
    }

    pub fn constant(b: bool) -> Formula {
        if b {
            Formula::tt()
        } else {
            Formula::ff()
        }
    }

    pub fn var(name: &str) -> Formula {
        intern(Proto::Var(name))
    }

    pub fn not(a: Formula) -> Formula {
        match a.kind() {
            Kind::True => Formula::ff(),
            Kind::False => Formula::tt(),
            Kind::Not(inner) => inner,
            _ => intern(Proto::Plain(Kind::Not(a))),
        }
    }

    pub fn and(ops: impl IntoIterator<Item = Formula>) -> Formula {
        Formula::nary(true, ops)
    }

    pub fn or(ops: impl IntoIterator<Item = Formula>) -> Formula {
        Formula::nary(false, ops)
    }

    pub fn and2(a: Formula, b: Formula) -> Formula {
        Formula::nary(true, [a, b])
    }

    pub fn or2(a: Formula, b: Formula) -> Formula {
        Formula::nary(false, [a, b])
    }

    fn nary(is_and: bool, ops: impl IntoIterator<Item = Formula>) -> Formula {
        // `neutral` disappears, `absorbing` swallows everything.
        let (neutral, absorbing) = if is_and {
            (Formula::tt(), Formula::ff())
        } else {
            (Formula::ff(), Formula::tt())
        };
        let mut flat = Vec::new();
        for op in ops {
            match (op.kind(), is_and) {
                (Kind::And(inner), true) | (Kind::Or(inner), false) => flat.extend_from_slice(inner),
                _ => flat.push(op),
            }
        }
        let mut out = Vec::with_capacity(flat.len());
        for op in flat {
            if op == absorbing {
                return absorbing;
            }
            if op != neutral {
                out.push(op);
            }
        }
        out.sort_unstable();
        out.dedup();
        for op in &out {
            if let Kind::Not(inner) = op.kind() {
                if out.binary_search(&inner).is_ok() {
                    return absorbing;
                }
            }
        }
        match out.len() {
            0 => neutral,
            1 => out[0],
            _ => intern(Proto::Nary(is_and, out)),
        }
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        match (a.kind(), b.kind()) {
            (Kind::True, _) => b,
            (Kind::False, _) | (_, Kind::True) => Formula::tt(),
            (_, Kind::False) => Formula::not(a),
            _ if a == b => Formula::tt(),
            _ => intern(Proto::Plain(Kind::Implies(a, b))),
        }
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        match (a.kind(), b.kind()) {
            _ if a == b => Formula::tt(),
            (Kind::True, _) => b,
            (_, Kind::True) => a,
            (Kind::False, _) => Formula::not(b),
            (_, Kind::False) => Formula::not(a),
            _ if Formula::not(a) == b => Formula::ff(),
            _ => intern(Proto::Plain(Kind::Iff(a, b))),
        }
    }

    pub fn xor(a: Formula, b: Formula) -> Formula {
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        match (a.kind(), b.kind()) {
            _ if a == b => Formula::ff(),
            (Kind::False, _) => b,
            (_, Kind::False) => a,
            (Kind::True, _) => Formula::not(b),
            (_, Kind::True) => Formula::not(a),
            _ if Formula::not(a) == b => Formula::tt(),
            _ => intern(Proto::Plain(Kind::Xor(a, b))),
        }
    }

    /// Weak next.
    pub fn next(a: Formula) -> Formula {
        match a.kind() {
            Kind::True => a,
            _ => intern(Proto::Plain(Kind::Next(a))),
        }
    }

    /// Strong next.
    pub fn strong_next(a: Formula) -> Formula {
        match a.kind() {
            Kind::False => a,
            _ => intern(Proto::Plain(Kind::StrongNext(a))),
        }
    }

    pub fn until(a: Formula, b: Formula) -> Formula {
        match (a.kind(), b.kind()) {
            (_, Kind::True | Kind::False) => b,
            (Kind::False, _) => b,
            (Kind::True, _) => Formula::finally(b),
            _ if a == b => b,
            _ => intern(Proto::Plain(Kind::Until(a, b))),
        }
    }

    pub fn release(a: Formula, b: Formula) -> Formula {
        match (a.kind(), b.kind()) {
            (_, Kind::True | Kind::False) => b,
            (Kind::True, _) => b,
            (Kind::False, _) => Formula::globally(b),
            _ if a == b => b,
            _ => intern(Proto::Plain(Kind::Release(a, b))),
        }
    }

    pub fn finally(a: Formula) -> Formula {
        match a.kind() {
            Kind::True | Kind::False | Kind::Finally(_) => a,
            _ => intern(Proto::Plain(Kind::Finally(a))),
        }
    }

    pub fn globally(a: Formula) -> Formula {
        match a.kind() {
            Kind::True | Kind::False | Kind::Globally(_) => a,
            _ => intern(Proto::Plain(Kind::Globally(a))),
        }
    }

    /// Rebuilds a node of the same operator over new children, going through
    /// the normalizing constructors.
    pub fn rebuild(self, children: &[Formula]) -> Formula {
        match self.kind() {
            Kind::True | Kind::False | Kind::Var(_) => self,
            Kind::Not(_) => Formula::not(children[0]),
            Kind::And(_) => Formula::and(children.iter().copied()),
            Kind::Or(_) => Formula::or(children.iter().copied()),
            Kind::Implies(..) => Formula::implies(children[0], children[1]),
            Kind::Iff(..) => Formula::iff(children[0], children[1]),
            Kind::Xor(..) => Formula::xor(children[0], children[1]),
            Kind::Next(_) => Formula::next(children[0]),
            Kind::StrongNext(_) => Formula::strong_next(children[0]),
            Kind::Until(..) => Formula::until(children[0], children[1]),
            Kind::Release(..) => Formula::release(children[0], children[1]),
            Kind::Finally(_) => Formula::finally(children[0]),
            Kind::Globally(_) => Formula::globally(children[0]),
        }
    }

    /// Names of the atomic propositions, sorted and deduplicated.
    pub fn atoms(self) -> Vec<&'static str> {
        let mut seen = rustc_hash::FxHashSet::default();
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(f) = stack.pop() {
            if !seen.insert(f) {
                continue;
            }
            if let Kind::Var(name) = f.kind() {
                out.push(name);
            }
            stack.extend(f.children());
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Substitutes atomic propositions by formulas.
    pub fn substitute(self, map: &dyn Fn(&str) -> Option<Formula>) -> Formula {
        let mut memo = FxHashMap::default();
        substitute_rec(self, map, &mut memo)
    }
}

fn substitute_rec(
    f: Formula,
    map: &dyn Fn(&str) -> Option<Formula>,
    memo: &mut FxHashMap<Formula, Formula>,
) -> Formula {
    if let Some(&r) = memo.get(&f) {
        return r;
    }
    let r = match f.kind() {
        Kind::Var(name) => map(name).unwrap_or(f),
        Kind::True | Kind::False => f,
        _ => {
            let children: Vec<_> = f
                .children()
                .into_iter()
                .map(|c| substitute_rec(c, map, memo))
                .collect();
            f.rebuild(&children)
        }
    };
    memo.insert(f, r);
    r
}

/// Number of formulas interned so far in this process.
pub fn interned_count() -> usize {
    STORE.lock().unwrap_or_else(|e| e.into_inner()).next_id as usize
}

// Printing. Every binary operand that is not atomic or unary is
// parenthesized, so the output parses back without relying on precedence.

fn is_simple(f: Formula) -> bool {
    match f.kind() {
        Kind::True | Kind::False | Kind::Var(_) => true,
        Kind::Not(a) | Kind::Next(a) | Kind::StrongNext(a) | Kind::Finally(a) | Kind::Globally(a) => {
            is_simple(a)
        }
        _ => false,
    }
}

fn write_operand(f: Formula, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    if is_simple(f) {
        write!(out, "{f}")
    } else {
        write!(out, "({f})")
    }
}

fn write_unary(op: &str, a: Formula, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    if is_simple(a) {
        write!(out, "{op}{a}")
    } else {
        write!(out, "{}({a})", op.trim_end())
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind() {
            Kind::True => out.write_str("tt"),
            Kind::False => out.write_str("ff"),
            Kind::Var(name) => out.write_str(name),
            Kind::Not(a) => write_unary("!", a, out),
            Kind::Next(a) => write_unary("X ", a, out),
            Kind::StrongNext(a) => write_unary("X[!] ", a, out),
            Kind::Finally(a) => write_unary("F ", a, out),
            Kind::Globally(a) => write_unary("G ", a, out),
            Kind::And(ops) | Kind::Or(ops) => {
                let sep = if matches!(self.kind(), Kind::And(_)) {
                    " & "
                } else {
                    " | "
                };
                for (i, op) in ops.iter().enumerate() {
                    if i > 0 {
                        out.write_str(sep)?;
                    }
                    write_operand(*op, out)?;
                }
                Ok(())
            }
            Kind::Implies(a, b)
            | Kind::Iff(a, b)
            | Kind::Xor(a, b)
            | Kind::Until(a, b)
            | Kind::Release(a, b) => {
                let op = match self.kind() {
                    Kind::Implies(..) => "->",
                    Kind::Iff(..) => "<->",
                    Kind::Xor(..) => "^",
                    Kind::Until(..) => "U",
                    _ => "R",
                };
                write_operand(a, out)?;
                write!(out, " {op} ")?;
                write_operand(b, out)
            }
        }
    }
}
