//! Exhaustive checking of a strategy against every opponent line.

use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;

use super::game::{GameInstance, Role};
use super::playout::{ask, Transcript};
use super::state::{GameState, Move};
use super::strategy::Strategy;
use crate::error::{Error, Result};

pub const DEFAULT_NODE_BUDGET: usize = 10_000_000;

/// Result of [`verify_winning_strategy`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verification {
    /// The strategy wins against every opponent line; `plays` counts them.
    Wins { plays: usize },
    /// The first losing play in canonical order of the opponent's moves.
    Counterexample(Transcript),
}

impl Verification {
    pub fn is_win(&self) -> bool {
        matches!(self, Verification::Wins { .. })
    }
}

/// Nodes below this depth fan out across threads.
const PARALLEL_DEPTH: usize = 4;

struct Search<'a> {
    game: &'a GameInstance,
    strategy: &'a dyn Strategy,
    role: Role,
    nodes: AtomicUsize,
    budget: usize,
}

enum Line {
    Won(usize),
    Lost(Vec<Move>),
}

impl Search<'_> {
    fn tick(&self) -> Result<()> {
        let n = self.nodes.fetch_add(1, Ordering::Relaxed);
        if n >= self.budget {
            return Err(Error::Capacity { what: "verified positions".into(), limit: self.budget, states_visited: n });
        }
        Ok(())
    }

    fn explore(&self, history: &mut Vec<Move>, state: &GameState) -> Result<Line> {
        self.tick()?;
        if let Some(o) = self.game.status(state) {
            return Ok(if o.winner == self.role { Line::Won(1) } else { Line::Lost(history.clone()) });
        }
        if state.turn == self.role {
            let mv = ask(self.game, self.strategy, history, state)?;
            let next = self.game.apply_move(state, &mv)?;
            history.push(mv);
            let r = self.explore(history, &next);
            history.pop();
            return r;
        }
        let moves = self.game.legal_moves(state)?;
        if history.len() < PARALLEL_DEPTH && moves.len() > 1 {
            let results: Vec<Result<Line>> = moves
                .par_iter()
                .map(|mv| {
                    let mut h = history.clone();
                    let next = self.game.apply_move(state, mv)?;
                    h.push(mv.clone());
                    self.explore(&mut h, &next)
                })
                .collect();
            let mut plays = 0;
            for r in results {
                match r? {
                    Line::Won(k) => plays += k,
                    lost => return Ok(lost),
                }
            }
            return Ok(Line::Won(plays));
        }
        let mut plays = 0;
        for mv in moves {
            let next = self.game.apply_move(state, &mv)?;
            history.push(mv);
            let r = self.explore(history, &next)?;
            history.pop();
            match r {
                Line::Won(k) => plays += k,
                lost => return Ok(lost),
            }
        }
        Ok(Line::Won(plays))
    }
}

/// Plays `strategy` as `role` against every legal opponent line. The
/// counterexample, if any, is the first losing line in canonical move order
/// regardless of thread count.
pub fn verify_winning_strategy(
    game: &GameInstance,
    strategy: &dyn Strategy,
    role: Role,
    node_budget: usize,
) -> Result<Verification> {
    let (a, b) = game.family().roles();
    if role != a && role != b {
        return Err(Error::Precondition(format!("{role} does not play {}", game.family())));
    }
    let search = Search { game, strategy, role, nodes: AtomicUsize::new(0), budget: node_budget };
    match search.explore(&mut Vec::new(), &game.initial_state())? {
        Line::Won(plays) => Ok(Verification::Wins { plays }),
        Line::Lost(moves) => Ok(Verification::Counterexample(Transcript::from_moves(game, &moves)?)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::game::Variant;
    use crate::engine::strategy::{FirstLegal, GreedyPositivity};
    use crate::structures::{GroundSet, MonotoneFamily};

    #[test]
    fn greedy_choose_survives_small_binary_game() {
        // 4 points, two rounds of halving: Choose keeps a point
        let f = MonotoneFamily::trivial(GroundSet::new(4).unwrap());
        let g = GameInstance::u_game(f, 2, 2, Variant::Exact).unwrap();
        let v = verify_winning_strategy(&g, &GreedyPositivity, Role::Choose, 1_000_000).unwrap();
        assert!(v.is_win());
    }

    #[test]
    fn counterexample_is_canonical() {
        let f = MonotoneFamily::trivial(GroundSet::new(3).unwrap());
        let g = GameInstance::u_game(f, 1, 2, Variant::Exact).unwrap();
        // Cut cannot empty the core in one binary round on 3 points
        let v = verify_winning_strategy(&g, &FirstLegal, Role::Cut, 1_000).unwrap();
        let Verification::Counterexample(t) = v else { panic!("Cut cannot win") };
        assert_eq!(t.winner, Role::Choose);
        assert_eq!(t.moves[1], Move::Pick(0));
    }
}
