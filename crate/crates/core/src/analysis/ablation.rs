//! What goes wrong without maximal moves: Cut offers two disjoint positive
//! pieces, then offers only the piece Choose did not take.

use serde::Serialize;

use crate::engine::{verify_winning_strategy, GameFamily, GameInstance, GameState, Move, Role, Strategy, Structure, Variant, Width};
use crate::error::{Error, Result};
use crate::solver::{solve_with, SolveOptions};
use crate::structures::Mask;

/// Cut's forcing strategy in the game with maximality switched off.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ForcingCut {
    pub a: Mask,
    pub b: Mask,
}

impl Strategy for ForcingCut {
    fn name(&self) -> String {
        format!("forcing({}, {})", self.a, self.b)
    }

    fn decide(&self, _: &GameInstance, _: &[Move], state: &GameState) -> Result<Move> {
        if state.round == 0 {
            return Ok(Move::Partition(vec![self.a, self.b]));
        }
        let core = state.core.mask();
        Ok(Move::Partition(vec![if core.is_disjoint(self.a) { self.a } else { self.b }]))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AblationReport {
    pub instance: String,
    pub ablated: String,
    pub pair: (Mask, Mask),
    /// The forcing strategy beats every Choose line without maximality.
    pub forcing_verified: bool,
    pub plays: usize,
    /// Winner of the same game with maximal moves required.
    pub restored_winner: Role,
}

/// The first pair of disjoint positive subsets of `x`, in mask order.
pub fn disjoint_positive_pair(structure: &Structure, x: Mask) -> Option<(Mask, Mask)> {
    let positive: Vec<Mask> = x.subsets().filter(|s| structure.is_positive(*s)).collect();
    positive.iter().enumerate().find_map(|(i, a)| positive[i + 1..].iter().find(|b| a.is_disjoint(**b)).map(|b| (*a, *b)))
}

/// The ablated version of `game`: maximality off, Cut always cutting the
/// start, width at least 2.
pub fn ablated_game(game: &GameInstance) -> Result<GameInstance> {
    game.with_params(|p| {
        p.flags.maximal = false;
        p.flags.cut_current = false;
        if let Width::Bounded(w) = p.width {
            p.width = Width::Bounded(w.max(2));
        }
    })
}

pub fn maximality_ablation(game: &GameInstance, node_budget: usize, opts: &SolveOptions) -> Result<AblationReport> {
    let eligible = matches!(
        (game.family(), game.structure()),
        (GameFamily::GIdeal, Structure::Sets(_)) | (GameFamily::GPoset, Structure::Algebra(_))
    );
    if !eligible {
        return Err(Error::Precondition("ablation needs a G game on sets or an algebra".into()));
    }
    // the forcing move empties the core in round 2, which a strict-prefix
    // game only judges when it lasts longer
    let needed = if game.variant() == Variant::StrictPrefix { 3 } else { 2 };
    if game.rounds() < needed {
        return Err(Error::Precondition(format!("the forcing move needs at least {needed} rounds")));
    }
    let x = game.start().mask();
    let (a, b) = disjoint_positive_pair(game.structure(), x)
        .ok_or_else(|| Error::Precondition(format!("{x} does not split into two disjoint positive sets")))?;
    let ablated = ablated_game(game)?;
    let forcing = ForcingCut { a, b };
    let v = verify_winning_strategy(&ablated, &forcing, Role::Cut, node_budget)?;
    let restored = game.with_params(|p| p.flags.maximal = true)?;
    let restored_winner = solve_with(&restored, opts)?.winner;
    Ok(AblationReport {
        instance: game.summary(),
        ablated: ablated.summary(),
        pair: (a, b),
        forcing_verified: v.is_win(),
        plays: match v {
            crate::engine::Verification::Wins { plays } => plays,
            crate::engine::Verification::Counterexample(_) => 0,
        },
        restored_winner,
    })
}
