//! Exact solving by memoized backward induction, with strategy extraction.

pub mod cache;
pub mod search;
pub mod table;

pub use cache::{DiskCache, CACHE_DIR_ENV};
pub use search::{integer_partitions, solve, solve_with, SolveOptions, SolveResult, SolveStats, Solver, DEFAULT_STATE_BUDGET};
pub use table::{refute, OnDemand, Refutation, SolvedStrategy, StrategyTable, TableEntry, TableStrategy};
