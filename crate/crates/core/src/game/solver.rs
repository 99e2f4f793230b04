//! Reachability games solved while the arena is being built.

use std::hash::Hash;

use rustc_hash::FxHashMap;

use crate::{Error, Result};

/// The two players: `Output` wants to reach a target, `Input` wants to
/// avoid it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Player {
    Output,
    Input,
}

impl Player {
    pub fn opponent(self) -> Player {
        match self {
            Player::Output => Player::Input,
            Player::Input => Player::Output,
        }
    }
}

impl std::ops::Not for Player {
    type Output = Player;

    fn not(self) -> Player {
        self.opponent()
    }
}

/// Incremental arena with linear-time backward propagation of winners.
///
/// Vertices are declared with [`new_vertex`](Self::new_vertex), connected
/// with [`new_edge`](Self::new_edge) and frozen once all their successors
/// are known. Winners are propagated as soon as they are implied; vertices
/// still undetermined when construction stops are lost by `Output`.
#[derive(Clone, Debug)]
pub struct GameSolver<V> {
    index: FxHashMap<V, u32>,
    keys: Vec<V>,
    owner: Vec<Player>,
    pred: Vec<Vec<u32>>,
    count: Vec<u32>,
    winner: Vec<Option<Player>>,
    frozen: Vec<bool>,
    stamp: Vec<u64>,
    clock: u64,
    edges: usize,
    determined: usize,
}

impl<V> Default for GameSolver<V> {
    fn default() -> Self {
        GameSolver {
            index: FxHashMap::default(),
            keys: Vec::new(),
            owner: Vec::new(),
            pred: Vec::new(),
            count: Vec::new(),
            winner: Vec::new(),
            frozen: Vec::new(),
            stamp: Vec::new(),
            clock: 0,
            edges: 0,
            determined: 0,
        }
    }
}

impl<V: Copy + Eq + Hash> GameSolver<V> {
    pub fn new() -> Self {
        Self::default()
    }

    fn id(&self, x: V) -> Result<usize> {
        self.index
            .get(&x)
            .map(|&i| i as usize)
            .ok_or(Error::UnknownVertex)
    }

    pub fn new_vertex(&mut self, x: V, own: Player) -> Result<()> {
        if self.index.contains_key(&x) {
            return Err(Error::DuplicateVertex);
        }
        self.index.insert(x, self.keys.len() as u32);
        self.keys.push(x);
        self.owner.push(own);
        self.pred.push(Vec::new());
        self.count.push(0);
        self.winner.push(None);
        self.frozen.push(false);
        self.stamp.push(0);
        Ok(())
    }

    /// Records `src -> dst`. Edges leaving an already determined vertex are
    /// dropped.
    ///
    /// # Panics
    /// If `src` is frozen.
    pub fn new_edge(&mut self, src: V, dst: V) -> Result<()> {
        let (s, d) = (self.id(src)?, self.id(dst)?);
        assert!(!self.frozen[s], "edge added to a frozen vertex");
        if self.winner[s].is_some() {
            return Ok(());
        }
        self.edges += 1;
        match self.winner[d] {
            None => {
                self.count[s] += 1;
                self.pred[d].push(s as u32);
            }
            Some(w) if w == self.owner[s] => self.determine(s, w),
            Some(_) => {}
        }
        Ok(())
    }

    /// Promises that `x` gets no more successors.
    pub fn freeze_vertex(&mut self, x: V) -> Result<()> {
        let i = self.id(x)?;
        self.frozen[i] = true;
        if self.winner[i].is_none() && self.count[i] == 0 {
            self.determine(i, !self.owner[i]);
        }
        Ok(())
    }

    /// Declares `x` won by `w` and propagates to its predecessors.
    ///
    /// # Panics
    /// If `x` is already determined.
    pub fn set_winner(&mut self, x: V, w: Player) -> Result<()> {
        let i = self.id(x)?;
        self.determine(i, w);
        Ok(())
    }

    fn determine(&mut self, x: usize, w: Player) {
        assert!(self.winner[x].is_none(), "vertex determined twice");
        self.mark(x, w);
        let mut todo = vec![x];
        while let Some(x) = todo.pop() {
            let w = self.winner[x].expect("determined");
            for k in 0..self.pred[x].len() {
                let p = self.pred[x][k] as usize;
                if self.winner[p].is_some() {
                    continue;
                }
                self.count[p] -= 1;
                if self.owner[p] == w || (self.count[p] == 0 && self.frozen[p]) {
                    self.mark(p, w);
                    todo.push(p);
                }
            }
            // Predecessor lists are only read while the vertex is undetermined.
            self.pred[x] = Vec::new();
        }
    }

    fn mark(&mut self, x: usize, w: Player) {
        self.clock += 1;
        self.winner[x] = Some(w);
        self.stamp[x] = self.clock;
        self.determined += 1;
    }

    pub fn contains(&self, x: V) -> bool {
        self.index.contains_key(&x)
    }

    /// `None` while undetermined; also `None` for unknown vertices.
    pub fn winner(&self, x: V) -> Option<Player> {
        self.index.get(&x).and_then(|&i| self.winner[i as usize])
    }

    pub fn owner(&self, x: V) -> Result<Player> {
        Ok(self.owner[self.id(x)?])
    }

    /// Number of recorded successors that are still undetermined.
    pub fn pending(&self, x: V) -> Result<u32> {
        Ok(self.count[self.id(x)?])
    }

    pub fn is_frozen(&self, x: V) -> Result<bool> {
        Ok(self.frozen[self.id(x)?])
    }

    /// Position of `x` in the order in which vertices were determined.
    /// A vertex won by its owner's choice always has a successor won by the
    /// same player with a smaller stamp; one won because all choices lose
    /// has only such successors.
    pub fn stamp(&self, x: V) -> Option<u64> {
        let i = *self.index.get(&x)? as usize;
        self.winner[i].map(|_| self.stamp[i])
    }

    pub fn num_vertices(&self) -> usize {
        self.keys.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges
    }

    /// How many vertices have been determined so far.
    pub fn num_determined(&self) -> usize {
        self.determined
    }

    pub fn vertices(&self) -> &[V] {
        &self.keys
    }
}
