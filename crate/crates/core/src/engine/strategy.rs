//! The strategy interface and a few simple strategies.
//!
//! Strategies are stateless: `decide` sees the whole history, so anything a
//! strategy remembers between moves is recomputed from it. This keeps
//! strategies shareable across the threads of the verifier.

use super::game::{GameInstance, Structure};
use super::state::{Core, GameState, Move};
use crate::error::{Error, Result};
use crate::structures::poset::elems;

pub trait Strategy: Send + Sync {
    fn name(&self) -> String;

    /// The move to play at `state`, which `history` leads to.
    fn decide(&self, game: &GameInstance, history: &[Move], state: &GameState) -> Result<Move>;
}

impl<S: Strategy + ?Sized> Strategy for Box<S> {
    fn name(&self) -> String {
        (**self).name()
    }
    fn decide(&self, game: &GameInstance, history: &[Move], state: &GameState) -> Result<Move> {
        (**self).decide(game, history, state)
    }
}

impl<S: Strategy + ?Sized> Strategy for std::sync::Arc<S> {
    fn name(&self) -> String {
        (**self).name()
    }
    fn decide(&self, game: &GameInstance, history: &[Move], state: &GameState) -> Result<Move> {
        (**self).decide(game, history, state)
    }
}

/// Plays the first legal move in canonical order.
#[derive(Clone, Copy, Debug, Default)]
pub struct FirstLegal;

impl Strategy for FirstLegal {
    fn name(&self) -> String {
        "first_legal".into()
    }
    fn decide(&self, game: &GameInstance, _: &[Move], state: &GameState) -> Result<Move> {
        game.legal_moves(state)?
            .into_iter()
            .next()
            .ok_or_else(|| Error::strategy(state, "no legal move"))
    }
}

fn pending_sizes(game: &GameInstance, state: &GameState) -> Result<Vec<(usize, bool)>> {
    let pending = state.pending.as_ref().ok_or_else(|| Error::strategy(state, "no cut to answer"))?;
    Ok(match (pending, state.core) {
        (Move::Partition(p), Core::Set(c)) => p
            .iter()
            .map(|piece| {
                let part = c.intersect(*piece);
                (part.len(), game.core_is_positive(Core::Set(part)))
            })
            .collect(),
        (Move::Antichain(a), Core::Elems(c)) => {
            let q = game.structure().poset().expect("poset game");
            a.iter()
                .map(|&e| {
                    let part = c & q.down(e);
                    (part.count_ones() as usize, part != 0)
                })
                .collect()
        }
        _ => return Err(Error::strategy(state, "pending cut does not match the core")),
    })
}

/// Choose: the first piece meeting the core positively (piece 0 if none).
#[derive(Clone, Copy, Debug, Default)]
pub struct GreedyPositivity;

impl Strategy for GreedyPositivity {
    fn name(&self) -> String {
        "greedy_positivity".into()
    }
    fn decide(&self, game: &GameInstance, _: &[Move], state: &GameState) -> Result<Move> {
        let sizes = pending_sizes(game, state)?;
        Ok(Move::Pick(sizes.iter().position(|(_, pos)| *pos).unwrap_or(0)))
    }
}

/// Choose: the piece with the largest positive intersection with the core,
/// earliest on ties.
#[derive(Clone, Copy, Debug, Default)]
pub struct LargestPiece;

impl Strategy for LargestPiece {
    fn name(&self) -> String {
        "largest_piece".into()
    }
    fn decide(&self, game: &GameInstance, _: &[Move], state: &GameState) -> Result<Move> {
        let sizes = pending_sizes(game, state)?;
        let mut best = 0;
        for (i, &(len, pos)) in sizes.iter().enumerate() {
            let (blen, bpos) = sizes[best];
            if (pos, len) > (bpos, blen) {
                best = i;
            }
        }
        Ok(Move::Pick(best))
    }
}

/// Banach–Mazur: play the current position again.
#[derive(Clone, Copy, Debug, Default)]
pub struct CopyCurrent;

impl Strategy for CopyCurrent {
    fn name(&self) -> String {
        "copy".into()
    }
    fn decide(&self, game: &GameInstance, _: &[Move], state: &GameState) -> Result<Move> {
        match (game.structure(), state.core) {
            (Structure::Poset(q), Core::Element(e)) => {
                debug_assert!(elems(q.down(e)).any(|x| x == e));
                Ok(Move::Element(e))
            }
            (_, Core::Set(s)) => Ok(Move::Set(s)),
            _ => Err(Error::strategy(state, "copy applies to Banach–Mazur games")),
        }
    }
}

/// Plays a fixed list of moves for its own turns, in order.
#[derive(Clone, Debug)]
pub struct Scripted {
    pub moves: Vec<Move>,
}

impl Strategy for Scripted {
    fn name(&self) -> String {
        "scripted".into()
    }
    fn decide(&self, _: &GameInstance, history: &[Move], state: &GameState) -> Result<Move> {
        // own turns alternate with the opponent's, so the index is half the history
        self.moves
            .get(history.len() / 2)
            .cloned()
            .ok_or_else(|| Error::strategy(state, "script exhausted"))
    }
}
