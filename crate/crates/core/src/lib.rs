//! Finite cut-and-choose, poset and Banach–Mazur games.
//!
//! The crate builds games over finite set systems, posets and Boolean
//! algebras, solves them exactly by memoized backward induction, and
//! implements the strategy-simulation constructions that relate the game
//! families to one another, together with checkers for distributivity and
//! audit reports cross-checking solver verdicts against those checkers.

pub mod analysis;
pub mod cli;
pub mod engine;
pub mod error;
pub mod solver;
pub mod structures;
pub mod transforms;

pub use error::{Error, Result, StructureError};
