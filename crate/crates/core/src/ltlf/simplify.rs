//! Language-preserving rewrites that reduce the number of temporal operators.
//!
//! Rules, applied bottom-up:
//!
//! * `(a -> b) & (a -> c)  ⇝  a -> (b & c)`
//! * `(a -> b) | (c -> d)  ⇝  !a | b | !c | d`
//! * `G a1 & G a2 & G F b1 & G F b2  ⇝  G(a1 & a2 & F(b1 & b2))`
//! * `F a1 | F a2 | F G b1 | F G b2  ⇝  F(a1 | a2 | G(b1 | b2))`
//! * `X a & X b ⇝ X(a & b)`, `X a | X b ⇝ X(a | b)`, same for `X[!]`
//! * `G F a ⇝ G F a'` and `F G a ⇝ G F a'`, where `a'` is the one-letter
//!   abstraction of `a`: on finite words both only constrain the last
//!   position.

use rustc_hash::FxHashMap;

use super::formula::{Formula, Kind};
use super::onestep::one_step_real;

/// Pass limit of the rewrite fixpoint.
pub const MAX_PASSES: usize = 8;

pub fn simplify(f: Formula) -> Formula {
    let mut cur = f;
    for _ in 0..MAX_PASSES {
        let mut memo = FxHashMap::default();
        let next = pass(cur, &mut memo);
        if next == cur {
            break;
        }
        cur = next;
    }
    cur
}

fn pass(f: Formula, memo: &mut FxHashMap<Formula, Formula>) -> Formula {
    if let Some(&r) = memo.get(&f) {
        return r;
    }
    let children: Vec<Formula> = f.children().into_iter().map(|c| pass(c, memo)).collect();
    let g = f.rebuild(&children);
    let r = match g.kind() {
        Kind::And(xs) => Formula::and(conjunction(xs)),
        Kind::Or(xs) => Formula::or(disjunction(xs)),
        Kind::Globally(a) => match a.kind() {
            Kind::Finally(b) => infinitely_often(b),
            _ => g,
        },
        Kind::Finally(a) => match a.kind() {
            Kind::Globally(b) => infinitely_often(b),
            _ => g,
        },
        _ => g,
    };
    memo.insert(f, r);
    r
}

fn infinitely_often(a: Formula) -> Formula {
    Formula::globally(Formula::finally(one_step_real(a)))
}

fn conjunction(xs: &[Formula]) -> Vec<Formula> {
    let mut out = Vec::new();
    let mut implications: Vec<(Formula, Vec<Formula>)> = Vec::new();
    let mut globally = Vec::new();
    let mut infinitely = Vec::new();
    let mut next = Vec::new();
    let mut strong_next = Vec::new();
    for &x in xs {
        match x.kind() {
            Kind::Implies(a, b) => match implications.iter_mut().find(|(k, _)| *k == a) {
                Some((_, bs)) => bs.push(b),
                None => implications.push((a, vec![b])),
            },
            Kind::Globally(a) => match a.kind() {
                Kind::Finally(b) => infinitely.push(b),
                _ => globally.push(a),
            },
            Kind::Next(a) => next.push(a),
            Kind::StrongNext(a) => strong_next.push(a),
            _ => out.push(x),
        }
    }
    for (a, bs) in implications {
        out.push(Formula::implies(a, Formula::and(bs)));
    }
    if globally.len() + infinitely.len() >= 2 {
        let mut body = globally;
        if !infinitely.is_empty() {
            body.push(Formula::finally(Formula::and(infinitely)));
        }
        out.push(Formula::globally(Formula::and(body)));
    } else {
        out.extend(globally.into_iter().map(Formula::globally));
        out.extend(
            infinitely
                .into_iter()
                .map(|b| Formula::globally(Formula::finally(b))),
        );
    }
    if !next.is_empty() {
        out.push(Formula::next(Formula::and(next)));
    }
    if !strong_next.is_empty() {
        out.push(Formula::strong_next(Formula::and(strong_next)));
    }
    out
}

fn disjunction(xs: &[Formula]) -> Vec<Formula> {
    let mut out = Vec::new();
    let implications: Vec<(Formula, Formula)> = xs
        .iter()
        .filter_map(|x| match x.kind() {
            Kind::Implies(a, b) => Some((a, b)),
            _ => None,
        })
        .collect();
    let expand = implications.len() >= 2;
    let mut eventually = Vec::new();
    let mut persistent = Vec::new();
    let mut next = Vec::new();
    let mut strong_next = Vec::new();
    for &x in xs {
        match x.kind() {
            Kind::Implies(a, b) if expand => {
                out.push(Formula::not(a));
                out.push(b);
            }
            Kind::Finally(a) => match a.kind() {
                Kind::Globally(b) => persistent.push(b),
                _ => eventually.push(a),
            },
            Kind::Next(a) => next.push(a),
            Kind::StrongNext(a) => strong_next.push(a),
            _ => out.push(x),
        }
    }
    if eventually.len() + persistent.len() >= 2 {
        let mut body = eventually;
        if !persistent.is_empty() {
            body.push(Formula::globally(Formula::or(persistent)));
        }
        out.push(Formula::finally(Formula::or(body)));
    } else {
        out.extend(eventually.into_iter().map(Formula::finally));
        out.extend(
            persistent
                .into_iter()
                .map(|b| Formula::finally(Formula::globally(b))),
        );
    }
    if !next.is_empty() {
        out.push(Formula::next(Formula::or(next)));
    }
    if !strong_next.is_empty() {
        out.push(Formula::strong_next(Formula::or(strong_next)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ltlf::parse;

    fn p(s: &str) -> Formula {
        parse(s).unwrap()
    }

    #[test]
    fn merges_next_operators() {
        assert_eq!(simplify(p("X a & X b")), p("X(a & b)"));
        assert_eq!(simplify(p("X[!] a | X[!] b")), p("X[!](a | b)"));
        assert_eq!(simplify(p("X a | X b | c")), p("X(a | b) | c"));
    }

    #[test]
    fn implication_rules() {
        assert_eq!(simplify(p("(a -> b) & (a -> c)")), p("a -> (b & c)"));
        assert_eq!(simplify(p("(a -> b) | (c -> d)")), p("!a | b | !c | d"));
    }

    #[test]
    fn globally_and_finally_grouping() {
        assert_eq!(simplify(p("G a & G b & G F c")), p("G(a & b & F c)"));
        assert_eq!(simplify(p("F a | F b | F (b U c)")), p("F(a | b | (b U c))"));
        // The recurrence rule fires first on the inner `F G b`.
        assert_eq!(simplify(p("F a | F G b")), p("F a | G F b"));
    }

    #[test]
    fn recurrence_uses_the_one_letter_abstraction() {
        assert_eq!(simplify(p("F G (X a)")), Formula::tt());
        assert_eq!(simplify(p("G F (a U b)")), p("G F b"));
        assert_eq!(simplify(p("F G (X[!] a)")), Formula::ff());
    }
}
