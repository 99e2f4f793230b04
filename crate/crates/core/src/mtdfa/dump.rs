//! Text and Graphviz renderings of automata.
//!
//! The text format is line based:
//!
//! ```text
//! MTDFA 1
//! vars: i0 i1 o1
//! L <id> formula <formula>      state or terminal label
//! L <id> pair <id> <id>         product label
//! L <id> neg <id>               complemented non-formula label
//! N <id> <var index> <low> <high>
//! T <id> <label id> <0|1>       terminal with its accepting bit
//! initial: <state index>
//! S <state index> <label id> <root node id>
//! ```
//!
//! Node ids 0 and 1 are the false and true leaves and are never declared.
//! Labels and nodes are declared before use; `#` starts a comment line.

use std::fmt::Write;

use rustc_hash::FxHashMap;

use super::automaton::Mtdfa;
use super::context::{decode, Context, Label, Options};
use crate::ltlf::{parse, Vocabulary};
use crate::mtbdd::{DotStyle, NodeRef, Payload};
use crate::{Error, Result, VarId};

struct Writer<'a> {
    ctx: &'a Context,
    out: String,
    label_ids: FxHashMap<u32, usize>,
    node_ids: FxHashMap<NodeRef, usize>,
}

impl Writer<'_> {
    fn label(&mut self, l: u32) -> usize {
        if let Some(&id) = self.label_ids.get(&l) {
            return id;
        }
        let body = match self.ctx.labels.label(l) {
            Label::Formula(f) => format!("formula {f}"),
            Label::Pair(a, b) => {
                let (a, b) = (self.label(a), self.label(b));
                format!("pair {a} {b}")
            }
            Label::Neg(a) => {
                let a = self.label(a);
                format!("neg {a}")
            }
        };
        let id = self.label_ids.len();
        self.label_ids.insert(l, id);
        let _ = writeln!(self.out, "L {id} {body}");
        id
    }

    fn node(&mut self, n: NodeRef) -> usize {
        if n == NodeRef::FALSE || n == NodeRef::TRUE {
            return n.raw() as usize;
        }
        if let Some(&id) = self.node_ids.get(&n) {
            return id;
        }
        let line = match self.ctx.bdd.payload(n) {
            Some(p) => {
                let (l, acc) = decode(p);
                let l = self.label(l);
                format!("{l} {}", acc as u8)
            }
            None => {
                let var = self.ctx.bdd.var(n).expect("internal node");
                let low = self.node(self.ctx.bdd.low(n));
                let high = self.node(self.ctx.bdd.high(n));
                format!("{} {low} {high}", var.0)
            }
        };
        let id = self.node_ids.len() + 2;
        self.node_ids.insert(n, id);
        let kind = if self.ctx.bdd.is_terminal(n) { 'T' } else { 'N' };
        let _ = writeln!(self.out, "{kind} {id} {line}");
        id
    }
}

impl Mtdfa {
    /// Stable text dump; see the module documentation for the format.
    pub fn to_text(&self, ctx: &Context) -> String {
        let mut w = Writer {
            ctx,
            out: String::from("MTDFA 1\nvars:"),
            label_ids: FxHashMap::default(),
            node_ids: FxHashMap::default(),
        };
        for name in ctx.vocab.names() {
            w.out.push(' ');
            w.out.push_str(name);
        }
        w.out.push('\n');
        let mut rows = Vec::new();
        for q in 0..self.num_states() {
            let l = w.label(self.label(q));
            let root = w.node(self.delta(q));
            rows.push((l, root));
        }
        let _ = writeln!(w.out, "initial: {}", self.initial());
        for (q, (l, root)) in rows.into_iter().enumerate() {
            let _ = writeln!(w.out, "S {q} {l} {root}");
        }
        w.out
    }

    /// Graphviz rendering: one dashed box per state pointing to its
    /// transition diagram; accepting terminals are green.
    pub fn to_dot(&self, ctx: &Context) -> String {
        let roots: Vec<(String, NodeRef)> = (0..self.num_states())
            .map(|q| {
                let mut name = ctx.labels.display(self.label(q));
                if q == self.initial() {
                    name = format!("-> {name}");
                }
                (name, self.delta(q))
            })
            .collect();
        let var_name = |v: VarId| ctx.vocab.name(v).to_owned();
        let terminal = |p: Payload| {
            let (l, acc) = decode(p);
            (ctx.labels.display(l), acc)
        };
        ctx.bdd.to_dot(
            &roots,
            &DotStyle {
                var_name: &var_name,
                terminal: &terminal,
            },
        )
    }

    /// Parses a text dump into a fresh context.
    pub fn from_text(text: &str, options: Options) -> Result<(Context, Mtdfa)> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(k, l)| (k + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let err = |line: usize, message: &str| Error::Dump {
            line,
            message: message.to_owned(),
        };
        match lines.next() {
            Some((_, "MTDFA 1")) => {}
            Some((k, _)) => return Err(err(k, "expected header `MTDFA 1`")),
            None => return Err(err(0, "empty dump")),
        }
        let (k, vars) = lines.next().ok_or_else(|| err(0, "missing `vars:` line"))?;
        let names = vars
            .strip_prefix("vars:")
            .ok_or_else(|| err(k, "expected `vars:`"))?
            .split_whitespace()
            .map(|name| match parse(name) {
                Ok(f) if f.to_string() == name && f.atoms() == [name] => Ok(name),
                _ => Err(err(k, "invalid variable name")),
            })
            .collect::<Result<Vec<_>>>()?;
        let vocab = Vocabulary::from_names(names).map_err(|_| err(k, "duplicate variable"))?;
        let mut ctx = Context::new(vocab, options)?;
        let mut labels: Vec<u32> = Vec::new();
        let mut nodes: Vec<NodeRef> = vec![NodeRef::FALSE, NodeRef::TRUE];
        let mut initial = None;
        let mut states: Vec<u32> = Vec::new();
        let mut roots: Vec<NodeRef> = Vec::new();
        for (k, line) in lines {
            let (head, rest) = line.split_once(' ').unwrap_or((line, ""));
            let fields: Vec<&str> = rest.split_whitespace().collect();
            let number = |s: &str| s.parse::<usize>().map_err(|_| err(k, "expected a number"));
            let label_ref = |s: &str, labels: &[u32]| -> Result<u32> {
                labels
                    .get(number(s)?)
                    .copied()
                    .ok_or_else(|| err(k, "undeclared label"))
            };
            let node_ref = |s: &str, nodes: &[NodeRef]| -> Result<NodeRef> {
                nodes
                    .get(number(s)?)
                    .copied()
                    .ok_or_else(|| err(k, "undeclared node"))
            };
            let expect_id = |s: &str, next: usize| -> Result<()> {
                if number(s)? != next {
                    return Err(err(k, "ids must be declared in increasing order"));
                }
                Ok(())
            };
            match head {
                "L" => {
                    let (id, kind) = match fields.as_slice() {
                        [id, kind, ..] => (*id, *kind),
                        _ => return Err(err(k, "malformed label")),
                    };
                    expect_id(id, labels.len())?;
                    let label = match (kind, &fields[2..]) {
                        ("formula", _) => {
                            let body = rest
                                .split_once("formula")
                                .map(|(_, b)| b.trim())
                                .unwrap_or("");
                            let f = parse(body)
                                .map_err(|e| err(k, &format!("bad formula: {e}")))?;
                            for atom in f.atoms() {
                                if ctx.vocab.get(atom).is_none() {
                                    return Err(err(k, "formula uses an undeclared variable"));
                                }
                            }
                            Label::Formula(f)
                        }
                        ("pair", [a, b]) => {
                            Label::Pair(label_ref(a, &labels)?, label_ref(b, &labels)?)
                        }
                        ("neg", [a]) => Label::Neg(label_ref(a, &labels)?),
                        _ => return Err(err(k, "unknown label kind")),
                    };
                    labels.push(ctx.labels.intern(label));
                }
                "N" => {
                    let [id, var, low, high] = fields.as_slice() else {
                        return Err(err(k, "malformed node"));
                    };
                    expect_id(id, nodes.len())?;
                    let var = number(var)?;
                    if var >= ctx.vocab.len() {
                        return Err(err(k, "variable index out of range"));
                    }
                    let var = VarId(var as u32);
                    let (low, high) = (node_ref(low, &nodes)?, node_ref(high, &nodes)?);
                    let level = ctx.bdd.level(var);
                    if level >= ctx.bdd.node_level(low) || level >= ctx.bdd.node_level(high) {
                        return Err(err(k, "node violates the variable order"));
                    }
                    nodes.push(ctx.bdd.make_node(var, low, high));
                }
                "T" => {
                    let [id, label, acc] = fields.as_slice() else {
                        return Err(err(k, "malformed terminal"));
                    };
                    expect_id(id, nodes.len())?;
                    let label = label_ref(label, &labels)?;
                    let acc = match *acc {
                        "0" => false,
                        "1" => true,
                        _ => return Err(err(k, "accepting bit must be 0 or 1")),
                    };
                    let p = super::context::encode(label, acc);
                    nodes.push(ctx.bdd.terminal(p));
                }
                "initial:" => {
                    let [q] = fields.as_slice() else {
                        return Err(err(k, "malformed initial state"));
                    };
                    if initial.replace(number(q)?).is_some() {
                        return Err(err(k, "initial state declared twice"));
                    }
                }
                "S" => {
                    let [q, label, root] = fields.as_slice() else {
                        return Err(err(k, "malformed state"));
                    };
                    expect_id(q, states.len())?;
                    let label = label_ref(label, &labels)?;
                    if states.contains(&label) {
                        return Err(err(k, "two states share a label"));
                    }
                    states.push(label);
                    roots.push(node_ref(root, &nodes)?);
                }
                _ => return Err(err(k, "unknown line kind")),
            }
        }
        let initial = initial.ok_or_else(|| err(0, "missing initial state"))?;
        if initial >= states.len() {
            return Err(err(0, "initial state out of range"));
        }
        let a = Mtdfa::from_parts(states, initial, roots);
        a.check_closed(&ctx).map_err(|m| err(0, &m))?;
        Ok((ctx, a))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ltlf::{parse, Vocabulary};
    use crate::mtbdd::BoolOp;

    fn ctx(names: &[&str]) -> Context {
        Context::new(Vocabulary::from_names(names).unwrap(), Options::default()).unwrap()
    }

    #[test]
    fn text_round_trip() {
        let mut c = ctx(&["a", "b"]);
        let a = Mtdfa::translate(&mut c, parse("(a U b) & G F !a & X[!] b").unwrap()).unwrap();
        let text = a.to_text(&c);
        let (mut c2, a2) = Mtdfa::from_text(&text, Options::default()).unwrap();
        assert_eq!(a2.to_text(&c2), text);
        assert_eq!(a2.num_states(), a.num_states());
        let a3 = Mtdfa::translate(&mut c2, parse("(a U b) & G F !a & X[!] b").unwrap()).unwrap();
        assert!(Mtdfa::equivalent(&mut c2, &a2, &a3).unwrap());
    }

    #[test]
    fn product_labels_round_trip() {
        let mut c = ctx(&["a"]);
        let x = Mtdfa::translate(&mut c, parse("F a").unwrap()).unwrap();
        let y = Mtdfa::translate(&mut c, parse("G a").unwrap()).unwrap();
        let p = Mtdfa::compose(&mut c, &x, &y, BoolOp::Or).unwrap();
        let n = p.complement(&mut c).unwrap();
        let text = n.to_text(&c);
        assert!(text.contains(" neg "));
        let (c2, n2) = Mtdfa::from_text(&text, Options::default()).unwrap();
        assert_eq!(n2.to_text(&c2), text);
    }

    #[test]
    fn malformed_dumps_are_rejected() {
        let bad = [
            "",
            "MTDFA 2",
            "MTDFA 1\nvars: a\nN 2 0 1 1\n",
            "MTDFA 1\nvars: a a\n",
            "MTDFA 1\nvars: a\nL 0 formula b\n",
            "MTDFA 1\nvars: a b\nN 2 1 0 1\nN 3 1 2 1\n",
            "MTDFA 1\nvars: a\nL 0 formula tt\nS 0 0 1\n",
            "MTDFA 1\nvars: a\nL 0 formula F a\nT 2 0 0\ninitial: 0\nS 0 0 2\nS 1 0 1\n",
            "MTDFA 1\nvars: a\nL 0 formula X a\nL 1 formula a\nT 2 1 1\ninitial: 0\nS 0 0 2\n",
        ];
        for text in bad {
            assert!(Mtdfa::from_text(text, Options::default()).is_err(), "{text:?}");
        }
    }

    #[test]
    fn dot_has_one_box_per_state() {
        let mut c = ctx(&["a"]);
        let a = Mtdfa::translate(&mut c, Formula::tt()).unwrap();
        let dot = a.to_dot(&c);
        assert_eq!(dot.matches("style=dashed, label").count(), 1);
        assert_eq!(dot.matches("fillcolor").count(), 1);
    }

    use crate::ltlf::Formula;
}
