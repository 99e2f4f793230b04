//! Classical attractor computation on a fully built arena.

use std::collections::VecDeque;

use super::solver::Player;

/// Explicit arena over vertices `0..len`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Arena {
    pub owner: Vec<Player>,
    pub succ: Vec<Vec<usize>>,
    /// Vertices `Output` wants to reach.
    pub target: Vec<bool>,
}

impl Arena {
    pub fn add_vertex(&mut self, owner: Player, target: bool) -> usize {
        self.owner.push(owner);
        self.succ.push(Vec::new());
        self.target.push(target);
        self.owner.len() - 1
    }

    pub fn add_edge(&mut self, src: usize, dst: usize) {
        self.succ[src].push(dst);
    }

    pub fn len(&self) -> usize {
        self.owner.len()
    }

    pub fn is_empty(&self) -> bool {
        self.owner.is_empty()
    }

    pub fn num_edges(&self) -> usize {
        self.succ.iter().map(Vec::len).sum()
    }
}

/// Winning regions of both players.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    /// `Some(Output)` on the `Output` attractor of the targets,
    /// `Some(Input)` on the `Input` attractor of `Output`'s dead ends, `None`
    /// elsewhere (those vertices are lost by `Output` too).
    pub winner: Vec<Option<Player>>,
    /// Order in which each vertex entered its region.
    pub rank: Vec<u64>,
}

impl Solution {
    pub fn output_wins(&self, v: usize) -> bool {
        self.winner[v] == Some(Player::Output)
    }
}

/// Backward fixpoints: `Output` wins from targets and from `Input` dead
/// ends; `Input` wins from non-target `Output` dead ends. Linear in the
/// arena size.
pub fn solve_offline(arena: &Arena) -> Solution {
    let n = arena.len();
    let mut pred: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (v, succ) in arena.succ.iter().enumerate() {
        for &s in succ {
            pred[s].push(v);
        }
    }
    let mut winner = vec![None; n];
    let mut rank = vec![0; n];
    let mut clock = 0;
    let dead_end = |v: usize| arena.succ[v].is_empty() && !arena.target[v];
    for player in [Player::Output, Player::Input] {
        let mut count: Vec<usize> = arena.succ.iter().map(Vec::len).collect();
        let mut queue = VecDeque::new();
        for v in 0..n {
            let seed = match player {
                Player::Output => arena.target[v] || (dead_end(v) && arena.owner[v] == Player::Input),
                Player::Input => dead_end(v) && arena.owner[v] == Player::Output,
            };
            if seed {
                clock += 1;
                winner[v] = Some(player);
                rank[v] = clock;
                queue.push_back(v);
            }
        }
        while let Some(v) = queue.pop_front() {
            for &p in &pred[v] {
                if winner[p].is_some() || arena.target[p] {
                    continue;
                }
                count[p] -= 1;
                if arena.owner[p] == player || count[p] == 0 {
                    clock += 1;
                    winner[p] = Some(player);
                    rank[p] = clock;
                    queue.push_back(p);
                }
            }
        }
    }
    Solution { winner, rank }
}
