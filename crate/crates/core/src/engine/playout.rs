//! Playing strategies against each other and recording transcripts.

use serde::{Deserialize, Serialize};

use super::game::{GameInstance, Role};
use super::state::{GameState, Move, StateView};
use super::strategy::Strategy;
use crate::error::{Error, Result};

pub const TRANSCRIPT_SCHEMA_VERSION: u32 = 1;

/// A complete play: every move and every position, first position included.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transcript {
    pub schema_version: u32,
    pub game: String,
    pub moves: Vec<Move>,
    pub states: Vec<StateView>,
    pub winner: Role,
    pub reason: String,
}

impl Transcript {
    /// Builds the transcript of a finished move sequence.
    pub fn from_moves(game: &GameInstance, moves: &[Move]) -> Result<Self> {
        let mut state = game.initial_state();
        let mut states = vec![StateView::from(&state)];
        for (i, mv) in moves.iter().enumerate() {
            state = game
                .apply_move(&state, mv)
                .map_err(|e| Error::IllegalMove(format!("move {i} ({mv}): {e}")))?;
            states.push(StateView::from(&state));
        }
        let outcome = game
            .status(&state)
            .ok_or_else(|| Error::Precondition(format!("play stops before the game ends, at {state}")))?;
        Ok(Transcript {
            schema_version: TRANSCRIPT_SCHEMA_VERSION,
            game: game.summary(),
            moves: moves.to_vec(),
            states,
            winner: outcome.winner,
            reason: outcome.reason,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("transcripts serialize")
    }

    /// Human-readable listing, one move per line.
    pub fn render(&self) -> String {
        let mut out = format!("{}\n", self.game);
        for (mv, st) in self.moves.iter().zip(&self.states) {
            out.push_str(&format!("  r{} {:<8} {}\n", st.round, st.turn.to_string(), mv));
        }
        out.push_str(&format!("winner: {} ({})\n", self.winner, self.reason));
        out
    }
}

/// Asks the strategy for a move and rejects illegal answers.
pub fn ask(game: &GameInstance, strategy: &dyn Strategy, history: &[Move], state: &GameState) -> Result<Move> {
    let mv = strategy.decide(game, history, state)?;
    game.check_move(state, &mv).map_err(|e| {
        Error::strategy(state, format!("{} played an illegal move {mv}: {e}", strategy.name()))
    })?;
    Ok(mv)
}

/// Plays `first` (Cut or Empty) against `second` (Choose or Nonempty).
pub fn play(game: &GameInstance, first: &dyn Strategy, second: &dyn Strategy) -> Result<Transcript> {
    let mut state = game.initial_state();
    let mut moves = Vec::new();
    while game.status(&state).is_none() {
        let who = if state.turn.is_first_mover() { first } else { second };
        let mv = ask(game, who, &moves, &state)?;
        state = game.apply_move(&state, &mv)?;
        moves.push(mv);
    }
    Transcript::from_moves(game, &moves)
}

/// Re-runs a recorded move sequence and checks the recorded result.
pub fn replay_transcript(game: &GameInstance, recorded: &Transcript) -> Result<Transcript> {
    let fresh = Transcript::from_moves(game, &recorded.moves)?;
    if fresh.winner != recorded.winner || fresh.states != recorded.states {
        return Err(Error::Soundness(format!(
            "replay disagrees with the recording: recorded {} won, replay says {}",
            recorded.winner, fresh.winner
        )));
    }
    Ok(fresh)
}
