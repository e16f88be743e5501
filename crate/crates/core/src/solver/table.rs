//! Strategies backed by solved values, their table export, and refutation.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use super::search::{solve_with, SolveOptions, Solver};
use crate::engine::{
    verify_winning_strategy, GameInstance, GameState, Move, Role, StateView, Strategy, Verification,
};
use crate::error::{Error, Result};

/// A solver-backed strategy for `role` in whatever game it is asked about.
/// Each distinct game is solved once, on first use.
#[derive(Debug)]
pub struct OnDemand {
    role: Role,
    opts: SolveOptions,
    solved: Mutex<HashMap<GameInstance, SolvedStrategy>>,
}

impl OnDemand {
    pub fn new(role: Role, opts: SolveOptions) -> Self {
        OnDemand { role, opts, solved: Mutex::new(HashMap::new()) }
    }

    pub fn strategy_for(&self, game: &GameInstance) -> Result<SolvedStrategy> {
        if let Some(s) = self.solved.lock().expect("not poisoned").get(game) {
            return Ok(s.clone());
        }
        let s = solve_with(game, &self.opts)?.strategy.for_role(self.role);
        self.solved.lock().expect("not poisoned").insert(game.clone(), s.clone());
        Ok(s)
    }
}

impl Strategy for OnDemand {
    fn name(&self) -> String {
        format!("solver({})", self.role)
    }

    fn decide(&self, game: &GameInstance, history: &[Move], state: &GameState) -> Result<Move> {
        self.strategy_for(game)?.decide(game, history, state)
    }
}

/// Plays the first move in canonical order that keeps the position won.
/// Off the winning region it plays the first legal move.
#[derive(Clone, Debug)]
pub struct SolvedStrategy {
    solver: Arc<Solver>,
    owner: Role,
}

impl SolvedStrategy {
    pub fn new(solver: Arc<Solver>, owner: Role) -> Self {
        SolvedStrategy { solver, owner }
    }

    pub fn owner(&self) -> Role {
        self.owner
    }

    /// The same solved game, played for `role`.
    pub fn for_role(&self, role: Role) -> Self {
        SolvedStrategy { solver: self.solver.clone(), owner: role }
    }

    pub fn solver(&self) -> &Solver {
        &self.solver
    }

    fn choose(&self, state: &GameState) -> Result<Move> {
        if let Some(mv) = self.solver.winning_move(state)? {
            return Ok(mv);
        }
        self.solver
            .game()
            .legal_moves(state)?
            .into_iter()
            .next()
            .ok_or_else(|| Error::strategy(state, "no legal move"))
    }

    /// Every position the owner can face while following this strategy,
    /// with the move it plays there.
    pub fn to_table(&self, max_entries: usize) -> Result<StrategyTable> {
        let game = self.solver.game();
        let mut entries = BTreeMap::new();
        let mut stack = vec![game.initial_state()];
        while let Some(state) = stack.pop() {
            if game.status(&state).is_some() || entries.contains_key(&state) {
                continue;
            }
            if state.turn == self.owner {
                let mv = self.choose(&state)?;
                stack.push(game.apply_move(&state, &mv)?);
                entries.insert(state, mv);
                if entries.len() > max_entries {
                    return Err(Error::Capacity {
                        what: "strategy table entries".into(),
                        limit: max_entries,
                        states_visited: entries.len(),
                    });
                }
            } else {
                for mv in game.legal_moves(&state)?.into_iter().rev() {
                    stack.push(game.apply_move(&state, &mv)?);
                }
            }
        }
        Ok(StrategyTable {
            schema_version: TABLE_SCHEMA_VERSION,
            game: game.summary(),
            owner: self.owner,
            entries: entries
                .into_iter()
                .map(|(s, mv)| TableEntry { state: StateView::from(&s), play: mv })
                .collect(),
        })
    }
}

impl Strategy for SolvedStrategy {
    fn name(&self) -> String {
        format!("solver({})", self.owner)
    }

    fn decide(&self, _: &GameInstance, _: &[Move], state: &GameState) -> Result<Move> {
        self.choose(state)
    }
}

pub const TABLE_SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableEntry {
    pub state: StateView,
    pub play: Move,
}

/// A positional strategy as data, in canonical state order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrategyTable {
    pub schema_version: u32,
    pub game: String,
    pub owner: Role,
    pub entries: Vec<TableEntry>,
}

impl StrategyTable {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("tables serialize")
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn strategy(&self) -> TableStrategy {
        TableStrategy {
            owner: self.owner,
            moves: self.entries.iter().map(|e| (e.state.clone(), e.play.clone())).collect(),
        }
    }
}

/// Looks moves up in a [`StrategyTable`].
#[derive(Clone, Debug)]
pub struct TableStrategy {
    owner: Role,
    moves: HashMap<StateView, Move>,
}

impl TableStrategy {
    pub fn owner(&self) -> Role {
        self.owner
    }
}

impl Strategy for TableStrategy {
    fn name(&self) -> String {
        format!("table({})", self.owner)
    }

    fn decide(&self, _: &GameInstance, _: &[Move], state: &GameState) -> Result<Move> {
        self.moves
            .get(&StateView::from(state))
            .cloned()
            .ok_or_else(|| Error::strategy(state, "position missing from the strategy table"))
    }
}

/// Outcome of [`refute`].
#[derive(Clone, Debug)]
pub enum Refutation {
    /// The opponent has a strategy beating every line, checked exhaustively
    /// over `plays` complete plays, so the role has no winning strategy.
    NoStrategy { opponent: Role, plays: usize },
    /// The role does win; here is its strategy, verified over `plays` plays.
    Found { strategy: SolvedStrategy, plays: usize },
}

/// Decides whether `role` has a winning strategy and backs the answer with an
/// exhaustively verified strategy for whichever side wins.
pub fn refute(game: &GameInstance, role: Role, opts: &SolveOptions, node_budget: usize) -> Result<Refutation> {
    let solved = solve_with(game, opts)?;
    let plays = match verify_winning_strategy(game, &solved.strategy, solved.winner, node_budget)? {
        Verification::Wins { plays } => plays,
        Verification::Counterexample(t) => {
            return Err(Error::Soundness(format!(
                "solver strategy for {} loses:\n{}",
                solved.winner,
                t.render()
            )))
        }
    };
    if solved.winner == role {
        Ok(Refutation::Found { strategy: solved.strategy, plays })
    } else {
        Ok(Refutation::NoStrategy { opponent: solved.winner, plays })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::Variant;
    use crate::structures::{GroundSet, MonotoneFamily};

    fn game(m: usize, n: usize) -> GameInstance {
        let f = MonotoneFamily::size_at_most(GroundSet::new(m).unwrap(), 1);
        GameInstance::u_game(f, n, 2, Variant::Exact).unwrap()
    }

    #[test]
    fn refute_both_ways() {
        let g = game(5, 2);
        let opts = SolveOptions::default();
        assert!(matches!(refute(&g, Role::Cut, &opts, 1_000_000).unwrap(), Refutation::NoStrategy { .. }));
        assert!(matches!(refute(&g, Role::Choose, &opts, 1_000_000).unwrap(), Refutation::Found { .. }));
    }

    #[test]
    fn table_roundtrip_verifies() {
        let g = game(4, 2);
        let solved = super::super::solve(&g).unwrap();
        let table = solved.strategy.to_table(10_000).unwrap();
        let back = StrategyTable::parse(&table.to_json()).unwrap();
        assert_eq!(back, table);
        let v = verify_winning_strategy(&g, &back.strategy(), Role::Cut, 1_000_000).unwrap();
        assert!(v.is_win());
    }
}
