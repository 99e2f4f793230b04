//! Seeded random generators for formulas, arenas and decision diagrams.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::enumerate::{BINARY, UNARY};
use crate::game::{Arena, Player};
use crate::ltlf::Formula;
use crate::mtbdd::{Mtbdd, NodeRef, Payload};
use crate::VarId;

/// Reads a seed from the `LTLFSYNT_SEED` environment variable, falling back
/// to `default`.
pub fn seed_from_env(default: u64) -> u64 {
    std::env::var("LTLFSYNT_SEED")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(default)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random formula with a syntax tree of exactly `size` nodes (the result
/// may be smaller after normalization). Leaves are atoms, with constants
/// one time in eight.
pub fn random_formula(rng: &mut impl Rng, atoms: &[&str], size: usize) -> Formula {
    assert!(size >= 1 && !atoms.is_empty());
    if size == 1 {
        return match rng.gen_range(0..8) {
            0 => Formula::constant(rng.gen()),
            _ => Formula::var(atoms[rng.gen_range(0..atoms.len())]),
        };
    }
    if size == 2 || rng.gen_ratio(1, 3) {
        let op = UNARY[rng.gen_range(0..UNARY.len())];
        return op(random_formula(rng, atoms, size - 1));
    }
    let left = rng.gen_range(1..size - 1);
    let op = BINARY[rng.gen_range(0..BINARY.len())];
    let a = random_formula(rng, atoms, left);
    let b = random_formula(rng, atoms, size - 1 - left);
    op(a, b)
}

/// `count` formulas with sizes drawn uniformly from `1..=max_size`.
pub fn random_formulas(seed: u64, atoms: &[&str], max_size: usize, count: usize) -> Vec<Formula> {
    let mut r = rng(seed);
    (0..count)
        .map(|_| {
            let size = r.gen_range(1..=max_size);
            random_formula(&mut r, atoms, size)
        })
        .collect()
}

/// Random diagram over variables `level..vars` with Boolean leaves and
/// tagged leaves of index below `tags` (none if `tags` is 0).
pub fn random_diagram(t: &mut Mtbdd, rng: &mut impl Rng, level: u32, vars: u32, tags: u32) -> NodeRef {
    if level == vars || rng.gen_bool(0.25) {
        return match rng.gen_range(0..if tags == 0 { 2 } else { 4 }) {
            0 => NodeRef::FALSE,
            1 => NodeRef::TRUE,
            _ => t.terminal(Payload::tagged(rng.gen_range(0..tags), rng.gen())),
        };
    }
    let low = random_diagram(t, rng, level + 1, vars, tags);
    let high = random_diagram(t, rng, level + 1, vars, tags);
    t.make_node(VarId(level), low, high)
}

/// One step of an incremental arena construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArenaEvent {
    Vertex(usize, Player),
    Edge(usize, usize),
    Freeze(usize),
    Target(usize),
}

/// A random arena together with a construction schedule that declares
/// every vertex before its edges, adds each target as soon as it exists,
/// and freezes vertices at random points after their last edge. Targets
/// have no successors.
pub fn random_arena(rng: &mut impl Rng, max_vertices: usize) -> (Arena, Vec<ArenaEvent>) {
    let n = rng.gen_range(1..=max_vertices);
    let mut arena = Arena::default();
    let target_ratio = rng.gen_range(1..=10);
    for _ in 0..n {
        let owner = if rng.gen() { Player::Output } else { Player::Input };
        arena.add_vertex(owner, rng.gen_range(0..100) < target_ratio);
    }
    let max_out = rng.gen_range(0..=4);
    for v in 0..n {
        if arena.target[v] {
            continue;
        }
        for _ in 0..rng.gen_range(0..=max_out) {
            let d = rng.gen_range(0..n);
            arena.add_edge(v, d);
        }
    }
    let mut events: Vec<ArenaEvent> = Vec::new();
    let mut declared = vec![false; n];
    let mut pending_freeze: Vec<usize> = Vec::new();
    let mut order: Vec<usize> = (0..n).collect();
    for k in (1..n).rev() {
        order.swap(k, rng.gen_range(0..=k));
    }
    let declare = |v: usize, events: &mut Vec<ArenaEvent>, declared: &mut Vec<bool>| {
        if !declared[v] {
            declared[v] = true;
            events.push(ArenaEvent::Vertex(v, arena.owner[v]));
            if arena.target[v] {
                events.push(ArenaEvent::Target(v));
            }
        }
    };
    for &v in &order {
        declare(v, &mut events, &mut declared);
        for &d in &arena.succ[v] {
            declare(d, &mut events, &mut declared);
            events.push(ArenaEvent::Edge(v, d));
        }
        pending_freeze.push(v);
        while !pending_freeze.is_empty() && rng.gen_bool(0.5) {
            let k = rng.gen_range(0..pending_freeze.len());
            events.push(ArenaEvent::Freeze(pending_freeze.swap_remove(k)));
        }
    }
    for v in pending_freeze {
        events.push(ArenaEvent::Freeze(v));
    }
    (arena, events)
}
