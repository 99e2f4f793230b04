//! Negation normal form.

use rustc_hash::FxHashMap;

use super::formula::{Formula, Kind};

/// Pushes negations down to the variables and expands `->`, `<->` and `^`.
pub fn to_nnf(f: Formula) -> Formula {
    let mut memo = FxHashMap::default();
    nnf(f, true, &mut memo)
}

fn nnf(f: Formula, positive: bool, memo: &mut FxHashMap<(Formula, bool), Formula>) -> Formula {
    if let Some(&r) = memo.get(&(f, positive)) {
        return r;
    }
    let mut go = |g: Formula, pol: bool| nnf(g, pol, memo);
    let r = match f.kind() {
        Kind::True | Kind::False => Formula::constant(f.is_true() == positive),
        Kind::Var(_) => {
            if positive {
                f
            } else {
                Formula::not(f)
            }
        }
        Kind::Not(a) => go(a, !positive),
        Kind::And(xs) | Kind::Or(xs) => {
            let ops: Vec<_> = xs.iter().map(|&x| go(x, positive)).collect();
            if matches!(f.kind(), Kind::And(_)) == positive {
                Formula::and(ops)
            } else {
                Formula::or(ops)
            }
        }
        Kind::Implies(a, b) => {
            if positive {
                Formula::or2(go(a, false), go(b, true))
            } else {
                Formula::and2(go(a, true), go(b, false))
            }
        }
        Kind::Iff(a, b) | Kind::Xor(a, b) => {
            let same = matches!(f.kind(), Kind::Iff(..)) == positive;
            let (pa, na, pb, nb) = (go(a, true), go(a, false), go(b, true), go(b, false));
            if same {
                Formula::or2(Formula::and2(pa, pb), Formula::and2(na, nb))
            } else {
                Formula::or2(Formula::and2(pa, nb), Formula::and2(na, pb))
            }
        }
        Kind::Next(a) => {
            if positive {
                Formula::next(go(a, true))
            } else {
                Formula::strong_next(go(a, false))
            }
        }
        Kind::StrongNext(a) => {
            if positive {
                Formula::strong_next(go(a, true))
            } else {
                Formula::next(go(a, false))
            }
        }
        Kind::Finally(a) => {
            if positive {
                Formula::finally(go(a, true))
            } else {
                Formula::globally(go(a, false))
            }
        }
        Kind::Globally(a) => {
            if positive {
                Formula::globally(go(a, true))
            } else {
                Formula::finally(go(a, false))
            }
        }
        Kind::Until(a, b) => {
            if positive {
                Formula::until(go(a, true), go(b, true))
            } else {
                Formula::release(go(a, false), go(b, false))
            }
        }
        Kind::Release(a, b) => {
            if positive {
                Formula::release(go(a, true), go(b, true))
            } else {
                Formula::until(go(a, false), go(b, false))
            }
        }
    };
    memo.insert((f, positive), r);
    r
}

/// Whether negations occur only on variables and no `->`, `<->`, `^` remain.
pub fn is_nnf(f: Formula) -> bool {
    match f.kind() {
        Kind::Not(a) => matches!(a.kind(), Kind::Var(_)),
        Kind::Implies(..) | Kind::Iff(..) | Kind::Xor(..) => false,
        _ => f.children().into_iter().all(is_nnf),
    }
}
