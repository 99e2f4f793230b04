//! Realizability: on-the-fly exploration of the game, or full translation
//! followed by the offline attractor.

use std::collections::VecDeque;
use std::fmt;

use rustc_hash::{FxHashMap, FxHashSet};

use super::offline::{solve_offline, Arena};
use super::solver::{GameSolver, Player};
use crate::ltlf::{one_step_real, one_step_unreal, to_nnf, BoolContext, Formula, Partition, Semantics};
use crate::mtbdd::NodeRef;
use crate::mtdfa::{decode, Context, LabelRegistry, Mtdfa, Options};
use crate::Result;

/// How the game is built.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Translate states breadth first while solving.
    #[default]
    Bfs,
    /// Translate the whole automaton, then solve.
    Full,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SolveOptions {
    pub mode: Mode,
    /// Propositional realizability checks before translating a state.
    pub one_step: bool,
    /// Stop encoding a state, or the whole search, once its vertex is
    /// determined.
    pub early_exit: bool,
    pub translation: Options,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            mode: Mode::Bfs,
            one_step: true,
            early_exit: true,
            translation: Options::default(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Status {
    Realizable,
    Unrealizable,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Realizable => "REALIZABLE",
            Status::Unrealizable => "UNREALIZABLE",
        })
    }
}

/// Why the exploration stopped before exhausting the reachable states.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EarlyExit {
    /// The initial vertex got determined with states left to explore.
    InitialDetermined,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SolveStats {
    pub states_translated: usize,
    pub vertices: usize,
    pub edges: usize,
    pub determined: usize,
    pub one_step_realizable: usize,
    pub one_step_unrealizable: usize,
    /// Number of independent sub-problems solved.
    pub parts: usize,
    pub early_exit: Option<EarlyExit>,
}

impl SolveStats {
    /// Sums the counters of another solve into `self`.
    pub fn absorb(&mut self, other: &SolveStats) {
        self.states_translated += other.states_translated;
        self.vertices += other.vertices;
        self.edges += other.edges;
        self.determined += other.determined;
        self.one_step_realizable += other.one_step_realizable;
        self.one_step_unrealizable += other.one_step_unrealizable;
        self.parts += other.parts;
        self.early_exit = self.early_exit.or(other.early_exit);
    }
}

impl fmt::Display for SolveStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "states_translated={}", self.states_translated)?;
        writeln!(f, "vertices={}", self.vertices)?;
        writeln!(f, "edges={}", self.edges)?;
        writeln!(f, "determined={}", self.determined)?;
        writeln!(f, "one_step_realizable={}", self.one_step_realizable)?;
        writeln!(f, "one_step_unrealizable={}", self.one_step_unrealizable)?;
        writeln!(f, "parts={}", self.parts)?;
        let exit = match self.early_exit {
            Some(EarlyExit::InitialDetermined) => "initial_determined",
            None => "none",
        };
        write!(f, "early_exit={exit}")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SolveResult {
    pub status: Status,
    /// Winner of the initial vertex; `None` if it was left undetermined,
    /// which counts as a loss for `Output`.
    pub winner: Option<Player>,
    pub stats: SolveStats,
}

impl SolveResult {
    pub fn is_realizable(&self) -> bool {
        self.status == Status::Realizable
    }
}

/// A solved game, kept around for strategy extraction.
pub struct Solved {
    pub result: SolveResult,
    pub ctx: Context,
    pub(crate) formula: Formula,
    pub(crate) part: Partition,
    pub(crate) sem: Semantics,
    /// Determination order of the vertices won by `Output`.
    pub(crate) rank: FxHashMap<NodeRef, u64>,
    /// Transition diagram of every translated state, by label.
    pub(crate) roots: FxHashMap<u32, NodeRef>,
}

/// Decides whether `f` is realizable.
pub fn realizability(
    f: Formula,
    part: &Partition,
    sem: Semantics,
    opts: &SolveOptions,
) -> Result<SolveResult> {
    Ok(solve(f, part, sem, opts)?.result)
}

/// Like [`realizability`] but keeps the game for strategy extraction.
pub fn solve(f: Formula, part: &Partition, sem: Semantics, opts: &SolveOptions) -> Result<Solved> {
    part.validate(f)?;
    match opts.mode {
        Mode::Bfs => OnTheFly::new(f, part, sem, opts)?.run(),
        Mode::Full => solve_full(f, part, sem, opts),
    }
}

fn input_vars(ctx: &Context, part: &Partition) -> Vec<bool> {
    ctx.vocab.names().iter().map(|n| part.is_input(n)).collect()
}

struct OnTheFly {
    ctx: Context,
    formula: Formula,
    part: Partition,
    sem: Semantics,
    opts: SolveOptions,
    is_input: Vec<bool>,
    solver: GameSolver<NodeRef>,
    one_step: Option<BoolContext>,
    roots: FxHashMap<u32, NodeRef>,
    enqueued: FxHashSet<u32>,
    /// Internal vertices whose outgoing edges have been added.
    encoded: FxHashSet<NodeRef>,
    /// Vertices whose whole sub-diagram is encoded (memo).
    complete: FxHashSet<NodeRef>,
    /// Set once an encoding loop stopped with work left behind; from then on
    /// vertices met again are checked for missing descendants.
    abandoned: bool,
    stats: SolveStats,
}

impl OnTheFly {
    fn new(f: Formula, part: &Partition, sem: Semantics, opts: &SolveOptions) -> Result<Self> {
        let ctx = Context::for_partition(part, sem, opts.translation)?;
        let is_input = input_vars(&ctx, part);
        let one_step = if opts.one_step {
            Some(BoolContext::new(part, sem)?)
        } else {
            None
        };
        Ok(OnTheFly {
            ctx,
            formula: f,
            part: part.clone(),
            sem,
            opts: *opts,
            is_input,
            solver: GameSolver::new(),
            one_step,
            roots: FxHashMap::default(),
            enqueued: FxHashSet::default(),
            encoded: FxHashSet::default(),
            complete: FxHashSet::default(),
            abandoned: false,
            stats: SolveStats::default(),
        })
    }

    fn declare(&mut self, r: NodeRef, to_encode: &mut Vec<NodeRef>) -> Result<()> {
        let own = match self.ctx.bdd.var(r) {
            Some(v) if !self.is_input[v.index()] => Player::Output,
            _ => Player::Input,
        };
        self.solver.new_vertex(r, own)?;
        to_encode.push(r);
        Ok(())
    }

    fn is_complete(&mut self, n: NodeRef) -> bool {
        if self.complete.contains(&n) || self.solver.winner(n).is_some() {
            return true;
        }
        let ok = match self.ctx.bdd.payload(n) {
            Some(p) => {
                let (label, acc) = decode(p);
                !acc && label != LabelRegistry::FF && self.enqueued.contains(&label)
            }
            None => {
                self.encoded.contains(&n) && {
                    let (lo, hi) = (self.ctx.bdd.low(n), self.ctx.bdd.high(n));
                    self.is_complete(lo) && self.is_complete(hi)
                }
            }
        };
        if ok {
            self.complete.insert(n);
        }
        ok
    }

    /// Queues `c` if it is new, or known but with missing descendants.
    fn visit(&mut self, c: NodeRef, to_encode: &mut Vec<NodeRef>) -> Result<()> {
        if !self.solver.contains(c) {
            self.declare(c, to_encode)
        } else {
            if self.abandoned && !self.is_complete(c) {
                to_encode.push(c);
            }
            Ok(())
        }
    }

    fn encode(&mut self, r: NodeRef, to_encode: &mut Vec<NodeRef>, leaves: &mut Vec<u32>) -> Result<()> {
        if self.solver.winner(r).is_some() {
            return Ok(());
        }
        if let Some(p) = self.ctx.bdd.payload(r) {
            let (label, acc) = decode(p);
            if acc {
                self.solver.set_winner(r, Player::Output)?;
            } else if label == LabelRegistry::FF {
                self.solver.set_winner(r, Player::Input)?;
            } else if !self.enqueued.contains(&label) {
                leaves.push(label);
            }
            return Ok(());
        }
        let (lo, hi) = (self.ctx.bdd.low(r), self.ctx.bdd.high(r));
        self.visit(lo, to_encode)?;
        self.visit(hi, to_encode)?;
        if self.encoded.insert(r) {
            self.solver.new_edge(r, lo)?;
            self.solver.new_edge(r, hi)?;
            self.solver.freeze_vertex(r)?;
        }
        Ok(())
    }

    /// One-step verdict for `state`, if conclusive.
    fn one_step(&mut self, state: Formula) -> Result<Option<Player>> {
        let Some(b) = self.one_step.as_mut() else {
            return Ok(None);
        };
        let real = b.to_bdd(one_step_real(state))?;
        if b.realizable(real)? {
            self.stats.one_step_realizable += 1;
            return Ok(Some(Player::Output));
        }
        let unreal = b.to_bdd(one_step_unreal(to_nnf(state))?)?;
        if !b.realizable(unreal)? {
            self.stats.one_step_unrealizable += 1;
            return Ok(Some(Player::Input));
        }
        Ok(None)
    }

    fn run(mut self) -> Result<Solved> {
        let early = self.opts.early_exit;
        let init = self.ctx.term(self.formula, false);
        self.solver.new_vertex(init, Player::Input)?;
        let init_label = decode(self.ctx.bdd.payload(init).expect("terminal")).0;
        let mut todo = VecDeque::from([init_label]);
        self.enqueued.insert(init_label);
        let mut seen = FxHashSet::default();
        while let Some(label) = todo.pop_front() {
            if early && self.solver.winner(init).is_some() {
                self.stats.early_exit = Some(EarlyExit::InitialDetermined);
                break;
            }
            let state = self.ctx.labels().formula(label).expect("formula label");
            let a = self.ctx.term(state, false);
            if label == LabelRegistry::FF {
                if self.solver.winner(a).is_none() {
                    self.solver.set_winner(a, Player::Input)?;
                }
                continue;
            }
            if let Some(w) = self.one_step(state)? {
                self.solver.set_winner(a, w)?;
                continue;
            }
            let m = self.ctx.tr(state)?;
            self.stats.states_translated += 1;
            self.ctx.check_states(self.stats.states_translated)?;
            self.roots.insert(label, m);
            let mut to_encode = Vec::new();
            self.visit(m, &mut to_encode)?;
            self.solver.new_edge(a, m)?;
            self.solver.freeze_vertex(a)?;
            let mut leaves = Vec::new();
            seen.clear();
            while early && self.solver.winner(a).is_none() || !early {
                let Some(r) = to_encode.pop() else { break };
                if seen.insert(r) {
                    self.encode(r, &mut to_encode, &mut leaves)?;
                }
            }
            if !to_encode.is_empty() {
                self.abandoned = true;
                continue;
            }
            if early && self.solver.winner(a).is_some() {
                if !leaves.is_empty() {
                    self.abandoned = true;
                }
                continue;
            }
            for l in leaves {
                if self.enqueued.insert(l) {
                    todo.push_back(l);
                }
            }
        }
        let winner = self.solver.winner(init);
        self.stats.vertices = self.solver.num_vertices();
        self.stats.edges = self.solver.num_edges();
        self.stats.determined = self.solver.num_determined();
        self.stats.parts = 1;
        let rank = self
            .solver
            .vertices()
            .iter()
            .filter(|&&v| self.solver.winner(v) == Some(Player::Output))
            .map(|&v| (v, self.solver.stamp(v).expect("determined")))
            .collect();
        Ok(Solved {
            result: verdict(winner, self.stats),
            ctx: self.ctx,
            formula: self.formula,
            part: self.part,
            sem: self.sem,
            rank,
            roots: self.roots,
        })
    }
}

fn verdict(winner: Option<Player>, stats: SolveStats) -> SolveResult {
    let status = if winner == Some(Player::Output) {
        Status::Realizable
    } else {
        Status::Unrealizable
    };
    SolveResult {
        status,
        winner,
        stats,
    }
}

/// Translates the whole automaton, builds the arena of all its nodes and
/// solves it with [`solve_offline`].
fn solve_full(f: Formula, part: &Partition, sem: Semantics, opts: &SolveOptions) -> Result<Solved> {
    let mut ctx = Context::for_partition(part, sem, opts.translation)?;
    let aut = Mtdfa::translate(&mut ctx, f)?;
    let (arena, index) = game_arena(&ctx, &aut, &input_vars(&ctx, part));
    let solution = solve_offline(&arena);
    let root = index[&aut.delta(aut.initial())];
    let winner = solution.winner[root];
    let stats = SolveStats {
        states_translated: aut.num_states(),
        vertices: arena.len(),
        edges: arena.num_edges(),
        determined: solution.winner.iter().filter(|w| w.is_some()).count(),
        parts: 1,
        ..SolveStats::default()
    };
    let rank = index
        .iter()
        .filter(|&(_, &v)| solution.output_wins(v))
        .map(|(&n, &v)| (n, solution.rank[v]))
        .collect();
    let roots = (0..aut.num_states())
        .map(|q| (aut.label(q), aut.delta(q)))
        .collect();
    Ok(Solved {
        result: verdict(winner, stats),
        ctx,
        formula: f,
        part: part.clone(),
        sem,
        rank,
        roots,
    })
}

/// The game of an automaton: one vertex per diagram node, owned by
/// `Output` on output variables and terminals. Rejecting terminals other
/// than `ff` lead to the diagram of their state; accepting ones are targets.
pub fn game_arena(ctx: &Context, aut: &Mtdfa, is_input: &[bool]) -> (Arena, FxHashMap<NodeRef, usize>) {
    let mut arena = Arena::default();
    let mut index = FxHashMap::default();
    let mut order = Vec::new();
    ctx.bdd.walk(aut.roots(), |bdd, n| {
        let (owner, target) = match bdd.payload(n) {
            Some(p) => (Player::Output, decode(p).1),
            None => {
                let v = bdd.var(n).expect("internal node");
                let owner = if is_input[v.index()] {
                    Player::Input
                } else {
                    Player::Output
                };
                (owner, false)
            }
        };
        index.insert(n, arena.add_vertex(owner, target));
        order.push(n);
    });
    for &n in &order {
        let v = index[&n];
        match ctx.bdd.payload(n) {
            Some(p) => {
                let (label, acc) = decode(p);
                if !acc && label != LabelRegistry::FF {
                    let q = aut.state_of_label(label).expect("closed automaton");
                    arena.add_edge(v, index[&aut.delta(q)]);
                }
            }
            None => {
                arena.add_edge(v, index[&ctx.bdd.low(n)]);
                arena.add_edge(v, index[&ctx.bdd.high(n)]);
            }
        }
    }
    (arena, index)
}
