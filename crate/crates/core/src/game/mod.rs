//! Realizability games: incremental and offline solvers, the on-the-fly
//! realizability check, and controller extraction.

mod offline;
mod realize;
mod solver;
mod strategy;

pub use offline::{solve_offline, Arena, Solution};
pub use realize::{
    game_arena, realizability, solve, EarlyExit, Mode, SolveOptions, SolveResult, SolveStats,
    Solved, Status,
};
pub use solver::{GameSolver, Player};
pub use strategy::{MealyMachine, Step, MAX_STRATEGY_INPUTS};
