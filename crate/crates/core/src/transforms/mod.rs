//! Strategy transformations. Each turns a strategy for one game into a
//! strategy for another by running the input strategy on an auxiliary play
//! reconstructed from the history, and each can certify, for any finished
//! play, that the auxiliary run is legal and the promised relation between
//! the two final positions holds.

mod basic;
mod disjointify;
mod factor;
mod precipitous;
mod witness;

use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::engine::{GameInstance, GameState, Move, Role, StateView, Strategy, Transcript};
use crate::error::{Error, Result};

pub use basic::{digit_split, fixed_point, restrict_choose, DigitSplit, FixedPoint, RestrictChoose};
pub use disjointify::{disjointify_choose, disjointify_cut, DisjointifiedChoose, DisjointifiedCut};
pub use factor::{
    factor_antichain, transfer_choose_small_to_big, transfer_cut_big_to_small, Factorization, TransferredChoose,
    TransferredCut,
};
pub use precipitous::{choose_to_nonempty, nonempty_to_choose, ChooseFromNonempty, NonemptyFromChoose};
pub use witness::{
    cut_strategy_to_witness, empty_to_cut, has_positive_branch, positive_branches, witness_to_cut, witness_to_empty,
    CutFromEmpty, CutFromWitness, EmptyFromWitness, WitnessCheck,
};

/// Shared handle to an input strategy.
pub type StrategyRef = Arc<dyn Strategy>;

/// A (possibly unfinished) run of an auxiliary game.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunRecord {
    pub game: String,
    pub moves: Vec<Move>,
    pub states: Vec<StateView>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub winner: Option<Role>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub note: Option<String>,
}

impl RunRecord {
    /// Replays `moves` in `game`; an illegal move is a soundness failure.
    pub fn replay(game: &GameInstance, moves: &[Move]) -> Result<(Self, GameState)> {
        let mut state = game.initial_state();
        let mut states = vec![StateView::from(&state)];
        for (i, mv) in moves.iter().enumerate() {
            state = game
                .apply_move(&state, mv)
                .map_err(|e| Error::Soundness(format!("auxiliary move {i} ({mv}) is illegal: {e}")))?;
            states.push(StateView::from(&state));
        }
        let winner = game.status(&state).map(|o| o.winner);
        Ok((RunRecord { game: game.summary(), moves: moves.to_vec(), states, winner, note: None }, state))
    }

    /// Replays the longest prefix of `moves` that stays within the game and
    /// reports how many moves were used.
    pub fn replay_prefix(game: &GameInstance, moves: &[Move]) -> Result<(Self, GameState, usize)> {
        let mut state = game.initial_state();
        let mut used = 0;
        for mv in moves {
            if game.status(&state).is_some() {
                break;
            }
            state = game.apply_move(&state, mv).map_err(|e| {
                Error::Soundness(format!("auxiliary move {used} ({mv}) is illegal: {e}"))
            })?;
            used += 1;
        }
        let (mut rec, state) = Self::replay(game, &moves[..used])?;
        if used < moves.len() {
            rec.note = Some(format!("auxiliary game ended after {used} of {} moves", moves.len()));
        }
        Ok((rec, state, used))
    }

    pub fn with_note(mut self, note: Option<String>) -> Self {
        self.note = note;
        self
    }
}

/// The checked relation between the output play and the auxiliary run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationRecord {
    pub kind: String,
    pub statement: String,
    pub holds: bool,
}

/// Evidence that one output play was produced soundly.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransformCertificate {
    pub kind: String,
    pub input_run: RunRecord,
    pub output_run: Transcript,
    pub relation: RelationRecord,
}

impl TransformCertificate {
    pub fn is_valid(&self) -> bool {
        self.relation.holds
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificates serialize")
    }
}

/// A transformed strategy that can certify its plays.
pub trait Simulation: Strategy {
    /// The game the transformed strategy plays.
    fn output_game(&self) -> &GameInstance;

    fn owner(&self) -> Role;

    /// Certificate for a finished play of the output game.
    fn certify(&self, moves: &[Move]) -> Result<TransformCertificate>;
}

/// Summary of [`certify_playouts`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CertificationReport {
    pub plays: usize,
    pub valid: usize,
    /// The owner won every play.
    pub owner_always_won: bool,
    /// The first certificate whose relation fails, in canonical order.
    pub first_invalid: Option<TransformCertificate>,
    /// The first play the owner lost, in canonical order.
    pub first_loss: Option<Transcript>,
    /// Certificate of the first play, as a sample.
    pub sample: Option<TransformCertificate>,
}

impl CertificationReport {
    pub fn all_valid(&self) -> bool {
        self.valid == self.plays
    }

    fn merge(mut self, other: CertificationReport) -> CertificationReport {
        self.plays += other.plays;
        self.valid += other.valid;
        self.owner_always_won &= other.owner_always_won;
        self.first_invalid = self.first_invalid.or(other.first_invalid);
        self.first_loss = self.first_loss.or(other.first_loss);
        self.sample = self.sample.or(other.sample);
        self
    }

    fn empty() -> Self {
        CertificationReport {
            plays: 0,
            valid: 0,
            owner_always_won: true,
            first_invalid: None,
            first_loss: None,
            sample: None,
        }
    }
}

const PARALLEL_DEPTH: usize = 3;

/// Plays the simulation against every opponent line and certifies each
/// finished play. Aggregates are independent of thread scheduling.
pub fn certify_playouts(sim: &dyn Simulation, max_plays: usize) -> Result<CertificationReport> {
    let game = sim.output_game();
    let counter = std::sync::atomic::AtomicUsize::new(0);
    fn walk(
        sim: &dyn Simulation,
        game: &GameInstance,
        history: &mut Vec<Move>,
        state: &GameState,
        counter: &std::sync::atomic::AtomicUsize,
        max_plays: usize,
    ) -> Result<CertificationReport> {
        if let Some(o) = game.status(state) {
            let n = counter.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
            if n >= max_plays {
                return Err(Error::Capacity { what: "certified plays".into(), limit: max_plays, states_visited: n });
            }
            let cert = sim.certify(history)?;
            let won = o.winner == sim.owner();
            let valid = cert.is_valid();
            return Ok(CertificationReport {
                plays: 1,
                valid: usize::from(valid),
                owner_always_won: won,
                first_loss: if won { None } else { Some(cert.output_run.clone()) },
                first_invalid: if valid { None } else { Some(cert.clone()) },
                sample: Some(cert),
            });
        }
        if state.turn == sim.owner() {
            let mv = crate::engine::playout::ask(game, sim, history, state)?;
            let next = game.apply_move(state, &mv)?;
            history.push(mv);
            let r = walk(sim, game, history, &next, counter, max_plays);
            history.pop();
            return r;
        }
        let moves = game.legal_moves(state)?;
        let parts: Vec<Result<CertificationReport>> = if history.len() < PARALLEL_DEPTH {
            moves
                .par_iter()
                .map(|mv| {
                    let mut h = history.clone();
                    let next = game.apply_move(state, mv)?;
                    h.push(mv.clone());
                    walk(sim, game, &mut h, &next, counter, max_plays)
                })
                .collect()
        } else {
            let mut v = Vec::with_capacity(moves.len());
            for mv in &moves {
                let next = game.apply_move(state, mv)?;
                history.push(mv.clone());
                v.push(walk(sim, game, history, &next, counter, max_plays));
                history.pop();
            }
            v
        };
        parts.into_iter().try_fold(CertificationReport::empty(), |acc, r| Ok(acc.merge(r?)))
    }
    walk(sim, game, &mut Vec::new(), &game.initial_state(), &counter, max_plays)
}

/// The pick index of each Choose move in a history of a cut-and-choose game,
/// paired with the cut it answered.
pub(crate) fn rounds_of(history: &[Move]) -> Vec<(&Move, usize)> {
    history
        .chunks(2)
        .filter_map(|c| match c {
            [cut, Move::Pick(i)] => Some((cut, *i)),
            _ => None,
        })
        .collect()
}

pub(crate) fn soundness(msg: impl Into<String>) -> Error {
    Error::Soundness(msg.into())
}

/// Asks `strategy` for its move in `game` after `history`, treating illegal
/// answers as soundness failures of the simulation.
pub(crate) fn aux_move(game: &GameInstance, strategy: &dyn Strategy, history: &[Move]) -> Result<Move> {
    let state = game
        .replay(history)
        .map_err(|e| soundness(format!("auxiliary run became illegal: {e}")))?;
    if let Some(o) = game.status(&state) {
        return Err(soundness(format!("auxiliary run already finished ({} won)", o.winner)));
    }
    let mv = strategy.decide(game, history, &state)?;
    game.check_move(&state, &mv)
        .map_err(|e| soundness(format!("input strategy {} played {mv} illegally: {e}", strategy.name())))?;
    Ok(mv)
}

/// Whether the auxiliary run after `history` is over.
pub(crate) fn aux_finished(game: &GameInstance, history: &[Move]) -> Result<bool> {
    let state = game
        .replay(history)
        .map_err(|e| soundness(format!("auxiliary run became illegal: {e}")))?;
    Ok(game.status(&state).is_some())
}
