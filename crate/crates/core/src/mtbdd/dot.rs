//! Graphviz output.
//!
//! Internal nodes are circles labelled by their variable, low edges dashed,
//! high edges solid. Terminals are boxes; accepting ones are filled green.
//! Each named root gets a dashed box with an arrow to its diagram.

use std::fmt::Write;

use super::{Mtbdd, NodeRef, Payload};
use crate::VarId;

/// How variables and terminals are labelled.
pub struct DotStyle<'a> {
    pub var_name: &'a dyn Fn(VarId) -> String,
    /// Label of a terminal and whether it is drawn as accepting.
    pub terminal: &'a dyn Fn(Payload) -> (String, bool),
}

pub(crate) fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

impl Mtbdd {
    pub fn to_dot(&self, roots: &[(String, NodeRef)], style: &DotStyle<'_>) -> String {
        let mut out = String::from("digraph mtbdd {\n  rankdir=TB;\n  node [fontname=\"Helvetica\"];\n");
        for (k, (name, _)) in roots.iter().enumerate() {
            let _ = writeln!(
                out,
                "  r{k} [shape=box, style=dashed, label=\"{}\"];",
                escape(name)
            );
        }
        let refs: Vec<NodeRef> = roots.iter().map(|(_, r)| *r).collect();
        let mut edges = String::new();
        self.walk(&refs, |t, n| {
            if let Some(p) = t.payload(n) {
                let (label, accepting) = (style.terminal)(p);
                let fill = if accepting {
                    ", style=\"rounded,filled\", fillcolor=\"#b7e4a7\""
                } else {
                    ", style=rounded"
                };
                let _ = writeln!(out, "  n{} [shape=box{fill}, label=\"{}\"];", n.0, escape(&label));
            } else {
                let var = t.var(n).expect("internal node");
                let _ = writeln!(
                    out,
                    "  n{} [shape=circle, label=\"{}\"];",
                    n.0,
                    escape(&(style.var_name)(var))
                );
                let _ = writeln!(edges, "  n{} -> n{} [style=dashed];", n.0, t.low(n).0);
                let _ = writeln!(edges, "  n{} -> n{};", n.0, t.high(n).0);
            }
        });
        out.push_str(&edges);
        for (k, (_, r)) in roots.iter().enumerate() {
            let _ = writeln!(out, "  r{k} -> n{} [style=dashed];", r.0);
        }
        out.push_str("}\n");
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dot_lists_every_node_once() {
        let mut t = Mtbdd::new();
        let acc = t.terminal(Payload::tagged(0, true));
        let n = t.make_node(VarId(0), NodeRef::FALSE, acc);
        let style = DotStyle {
            var_name: &|v| format!("x{}", v.0),
            terminal: &|p| (format!("{p:?}"), matches!(p, Payload::Tagged(t) if t.accepting())),
        };
        let dot = t.to_dot(&[("q0".into(), n), ("q1".into(), n)], &style);
        assert_eq!(dot.matches("shape=circle").count(), 1);
        assert_eq!(dot.matches("fillcolor").count(), 1);
        assert_eq!(dot.matches("style=dashed]").count(), 3);
        assert!(dot.contains("label=\"x0\""));
    }
}
