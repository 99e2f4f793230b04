#![allow(dead_code)]

use proptest::prelude::*;

use ltlfsynt::ltlf::{Assignment, Formula, Partition, Word};

pub fn formula(atoms: &'static [&'static str], depth: u32) -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        1 => any::<bool>().prop_map(Formula::constant),
        6 => proptest::sample::select(atoms).prop_map(Formula::var),
    ];
    leaf.prop_recursive(depth, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            inner.clone().prop_map(Formula::next),
            inner.clone().prop_map(Formula::strong_next),
            inner.clone().prop_map(Formula::finally),
            inner.clone().prop_map(Formula::globally),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and2(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or2(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::implies(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::iff(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::xor(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::until(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| Formula::release(a, b)),
        ]
    })
}

pub fn word(vars: usize, max_len: usize) -> impl Strategy<Value = Word> {
    proptest::collection::vec(
        any::<u64>().prop_map(move |b| Assignment::from_bits(b & ((1 << vars) - 1), vars)),
        1..=max_len,
    )
}

pub const GAME_ATOMS: &[&str] = &["i0", "i1", "o0", "o1"];

pub fn game_partition() -> Partition {
    Partition::new(["i0", "i1"], ["o0", "o1"])
}
