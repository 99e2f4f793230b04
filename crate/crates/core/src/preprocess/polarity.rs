//! Elimination of variables that occur with a single polarity.

use rustc_hash::{FxHashMap, FxHashSet};

use crate::ltlf::{simplify, Formula, Kind, Partition};

const POSITIVE: u8 = 1;
const NEGATIVE: u8 = 2;

fn flip(p: u8) -> u8 {
    ((p & POSITIVE) << 1) | ((p & NEGATIVE) >> 1)
}

/// Polarities (bit set of [`POSITIVE`] and [`NEGATIVE`]) with which each
/// atom occurs once `f` is put in negative normal form. Operands of `<->`
/// and `^` count as both.
fn polarities(f: Formula) -> FxHashMap<&'static str, u8> {
    fn go(
        f: Formula,
        p: u8,
        seen: &mut FxHashSet<(Formula, u8)>,
        out: &mut FxHashMap<&'static str, u8>,
    ) {
        if !seen.insert((f, p)) {
            return;
        }
        match f.kind() {
            Kind::True | Kind::False => {}
            Kind::Var(name) => *out.entry(name).or_default() |= p,
            Kind::Not(a) => go(a, flip(p), seen, out),
            Kind::Implies(a, b) => {
                go(a, flip(p), seen, out);
                go(b, p, seen, out);
            }
            Kind::Iff(a, b) | Kind::Xor(a, b) => {
                go(a, POSITIVE | NEGATIVE, seen, out);
                go(b, POSITIVE | NEGATIVE, seen, out);
            }
            k => {
                for c in k.children() {
                    go(c, p, seen, out);
                }
            }
        }
    }
    let mut out = FxHashMap::default();
    go(f, POSITIVE, &mut FxHashSet::default(), &mut out);
    out
}

/// Replaces every single-polarity variable by the constant that is best
/// for its owner: outputs by the value that satisfies their occurrences,
/// inputs by the value that falsifies them. Repeats until no variable can
/// be removed. Returns the reduced formula, the remaining partition, and
/// the constant chosen for each removed variable.
pub fn polarity_prune(f: Formula, part: &Partition) -> (Formula, Partition, Vec<(String, bool)>) {
    let mut f = f;
    let mut removed: Vec<(String, bool)> = Vec::new();
    loop {
        let pol = polarities(f);
        let mut subst: FxHashMap<&str, bool> = FxHashMap::default();
        for (&name, &p) in &pol {
            if p == POSITIVE | NEGATIVE {
                continue;
            }
            let positive = p == POSITIVE;
            if part.is_output(name) {
                subst.insert(name, positive);
            } else if part.is_input(name) {
                subst.insert(name, !positive);
            }
        }
        if subst.is_empty() {
            break;
        }
        f = simplify(f.substitute(&|name| subst.get(name).map(|&b| Formula::constant(b))));
        let mut names: Vec<(String, bool)> = subst.iter().map(|(n, &b)| (n.to_string(), b)).collect();
        names.sort();
        removed.extend(names);
    }
    let keep = |n: &&String| !removed.iter().any(|(r, _)| r == *n);
    let reduced = Partition {
        inputs: part.inputs.iter().filter(keep).cloned().collect(),
        outputs: part.outputs.iter().filter(keep).cloned().collect(),
    };
    (f, reduced, removed)
}
