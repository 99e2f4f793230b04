//! Operation caches keyed by `(operand, operand, operation tag)`.

use rustc_hash::FxHashMap;

use super::NodeRef;

type Key = (u32, u32, u32);

#[derive(Clone, Debug)]
enum Store {
    Lossless(FxHashMap<Key, u32>),
    /// Direct-mapped slots; a colliding insert evicts the previous entry.
    Lossy { slots: Vec<Option<(Key, u32)>>, mask: usize },
}

/// Memo table for MTBDD operations.
///
/// A lookup either misses or returns exactly what was stored for that key:
/// lossy slots keep the whole key, so eviction only causes recomputation.
#[derive(Clone, Debug)]
pub struct OpCache {
    store: Store,
    hits: u64,
    misses: u64,
}

impl Default for OpCache {
    fn default() -> Self {
        OpCache::lossless()
    }
}

impl OpCache {
    pub fn lossless() -> Self {
        OpCache {
            store: Store::Lossless(FxHashMap::default()),
            hits: 0,
            misses: 0,
        }
    }

    /// Fixed-size cache holding at most `capacity` entries (rounded up to a
    /// power of two).
    pub fn lossy(capacity: usize) -> Self {
        let n = capacity.max(1).next_power_of_two();
        OpCache {
            store: Store::Lossy {
                slots: vec![None; n],
                mask: n - 1,
            },
            hits: 0,
            misses: 0,
        }
    }

    pub fn is_lossy(&self) -> bool {
        matches!(self.store, Store::Lossy { .. })
    }

    /// Slot count of a lossy cache, `None` when lossless.
    pub fn capacity(&self) -> Option<usize> {
        match &self.store {
            Store::Lossless(_) => None,
            Store::Lossy { slots, .. } => Some(slots.len()),
        }
    }

    /// Resizes a lossy cache, dropping its content. No effect when lossless.
    pub fn resize(&mut self, capacity: usize) {
        if self.is_lossy() {
            *self = OpCache {
                hits: self.hits,
                misses: self.misses,
                ..OpCache::lossy(capacity)
            };
        }
    }

    pub fn reset(&mut self) {
        match &mut self.store {
            Store::Lossless(map) => map.clear(),
            Store::Lossy { slots, .. } => slots.iter_mut().for_each(|s| *s = None),
        }
    }

    pub fn len(&self) -> usize {
        match &self.store {
            Store::Lossless(map) => map.len(),
            Store::Lossy { slots, .. } => slots.iter().filter(|s| s.is_some()).count(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn hits(&self) -> u64 {
        self.hits
    }

    pub fn misses(&self) -> u64 {
        self.misses
    }

    fn slot(key: Key, mask: usize) -> usize {
        let h = (key.0 as u64)
            .wrapping_mul(0x9E37_79B9_7F4A_7C15)
            .rotate_left(17)
            ^ (key.1 as u64).wrapping_mul(0xC2B2_AE3D_27D4_EB4F)
            ^ (key.2 as u64).wrapping_mul(0x1656_67B1_9E37_79F9);
        (h ^ (h >> 29)) as usize & mask
    }

    pub fn get(&mut self, a: NodeRef, b: NodeRef, op: u32) -> Option<NodeRef> {
        let key = (a.0, b.0, op);
        let found = match &self.store {
            Store::Lossless(map) => map.get(&key).copied(),
            Store::Lossy { slots, mask } => match slots[Self::slot(key, *mask)] {
                Some((k, v)) if k == key => Some(v),
                _ => None,
            },
        };
        if found.is_some() {
            self.hits += 1;
        } else {
            self.misses += 1;
        }
        found.map(NodeRef)
    }

    pub fn insert(&mut self, a: NodeRef, b: NodeRef, op: u32, result: NodeRef) {
        let key = (a.0, b.0, op);
        match &mut self.store {
            Store::Lossless(map) => {
                map.insert(key, result.0);
            }
            Store::Lossy { slots, mask } => slots[Self::slot(key, *mask)] = Some((key, result.0)),
        }
    }
}

/// Cache size for a unary operation over an automaton with `vars` variables
/// and `states` states.
pub fn unary_size_hint(vars: usize, states: usize) -> usize {
    (vars * states / 2).max(1)
}

/// Cache size for a binary operation over two automata.
pub fn binary_size_hint(vars: usize, states1: usize, states2: usize) -> usize {
    (vars * states1 * states2 / 4).max(1)
}

/// Cache size for translation: a fifth of the allocated nodes.
pub fn translation_size_hint(nodes: usize) -> usize {
    (nodes / 5).max(1)
}
