//! Splitting a specification into output-disjoint parts.

use rustc_hash::FxHashMap;

use crate::ltlf::{Formula, Kind, Partition};

/// Output-disjoint sub-specifications whose conjunction is equivalent to
/// the original one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub parts: Vec<(Formula, Partition)>,
}

/// Top-level conjuncts, distributing implications over conjunctive
/// conclusions: `a -> (b & c)` gives `a -> b` and `a -> c`.
pub fn conjuncts(f: Formula) -> Vec<Formula> {
    let mut out = Vec::new();
    let mut todo = vec![f];
    while let Some(g) = todo.pop() {
        match g.kind() {
            Kind::And(xs) => todo.extend(xs.iter().rev()),
            Kind::Implies(a, b) => match b.kind() {
                Kind::And(bs) => todo.extend(bs.iter().rev().map(|&b| Formula::implies(a, b))),
                Kind::Implies(c, d) => todo.push(Formula::implies(Formula::and2(a, c), d)),
                _ => out.push(g),
            },
            _ => out.push(g),
        }
    }
    out
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    let mut y = x;
    while parent[y] != r {
        let next = parent[y];
        parent[y] = r;
        y = next;
    }
    r
}

/// Groups the conjuncts of `f` that share output variables. Conjuncts
/// without outputs form one extra group. Each part keeps the inputs that
/// occur in it.
pub fn decompose(f: Formula, part: &Partition) -> Decomposition {
    let cs = conjuncts(f);
    let mut parent: Vec<usize> = (0..cs.len()).collect();
    let mut owner: FxHashMap<&str, usize> = FxHashMap::default();
    for (k, c) in cs.iter().enumerate() {
        for atom in c.atoms() {
            if !part.is_output(atom) {
                continue;
            }
            match owner.get(atom) {
                Some(&j) => {
                    let (a, b) = (find(&mut parent, j), find(&mut parent, k));
                    parent[a.max(b)] = a.min(b);
                }
                None => {
                    owner.insert(atom, k);
                }
            }
        }
    }
    let mut groups: Vec<(usize, Vec<Formula>)> = Vec::new();
    let mut environment = Vec::new();
    for (k, &c) in cs.iter().enumerate() {
        if !c.atoms().iter().any(|a| part.is_output(a)) {
            environment.push(c);
            continue;
        }
        let root = find(&mut parent, k);
        match groups.iter_mut().find(|(r, _)| *r == root) {
            Some((_, g)) => g.push(c),
            None => groups.push((root, vec![c])),
        }
    }
    let mut parts: Vec<Formula> = groups.into_iter().map(|(_, g)| Formula::and(g)).collect();
    if !environment.is_empty() || parts.is_empty() {
        parts.push(Formula::and(environment));
    }
    Decomposition {
        parts: parts
            .into_iter()
            .map(|g| (g, part.restrict_to(g)))
            .collect(),
    }
}

/// Whether every extension of a word satisfying `f` satisfies `f` too.
/// Syntactic and conservative.
pub fn is_extension_closed(f: Formula) -> bool {
    if !f.has_temporal() {
        return true;
    }
    match f.kind() {
        Kind::And(xs) | Kind::Or(xs) => xs.iter().all(|&x| is_extension_closed(x)),
        Kind::StrongNext(a) | Kind::Finally(a) => is_extension_closed(a),
        Kind::Until(a, b) => is_extension_closed(a) && is_extension_closed(b),
        _ => false,
    }
}
