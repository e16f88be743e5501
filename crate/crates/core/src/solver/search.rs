//! Memoized backward induction.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;
use std::time::{Duration, Instant};

use dashmap::DashMap;
use rayon::prelude::*;
use serde::Serialize;

use super::cache::DiskCache;
use crate::engine::{Core, GameFamily, GameInstance, GameState, Move, Role, Variant};
use crate::error::{Error, Result};
use crate::structures::FamilySpec;

pub const DEFAULT_STATE_BUDGET: usize = 10_000_000;

/// Search depth (in half-moves) up to which branches are evaluated in parallel.
const PARALLEL_DEPTH: usize = 3;

#[derive(Clone, Debug)]
pub struct SolveOptions {
    pub state_budget: usize,
    /// Collapse states by core size when the family only looks at sizes.
    pub symmetry: bool,
    pub cache: Option<DiskCache>,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { state_budget: DEFAULT_STATE_BUDGET, symmetry: true, cache: None }
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct SolveStats {
    pub states_visited: usize,
    pub memo_hits: usize,
    #[serde(serialize_with = "as_millis")]
    pub elapsed: Duration,
    pub symmetric: bool,
    pub from_cache: bool,
}

fn as_millis<S: serde::Serializer>(d: &Duration, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_u128(d.as_millis())
}

/// Value oracle for one game. Values are memoized on canonical states, so a
/// solver can be queried repeatedly (strategy extraction does this).
#[derive(Debug)]
pub struct Solver {
    game: GameInstance,
    memo: DashMap<GameState, bool>,
    /// Cut's legal moves by cut target.
    cuts: DashMap<Core, Arc<Vec<Move>>>,
    sizes: Option<SizeAbstraction>,
    visited: AtomicUsize,
    hits: AtomicUsize,
    budget: usize,
}

/// States of a U-game over `size_at_most k` collapse to (round, |core|).
#[derive(Debug)]
struct SizeAbstraction {
    k: usize,
    width: usize,
    memo: DashMap<(usize, usize), bool>,
}

impl Solver {
    pub fn new(game: GameInstance, opts: &SolveOptions) -> Self {
        let sizes = match (opts.symmetry, game.family(), game.structure().family().map(|f| f.spec()), game.width().limit()) {
            (true, GameFamily::U, Some(FamilySpec::SizeAtMost { k }), Some(width)) if game.flags().cut_current => {
                Some(SizeAbstraction { k: *k, width, memo: DashMap::new() })
            }
            _ => None,
        };
        Solver {
            game,
            memo: DashMap::new(),
            cuts: DashMap::new(),
            sizes,
            visited: AtomicUsize::new(0),
            hits: AtomicUsize::new(0),
            budget: opts.state_budget,
        }
    }

    pub fn game(&self) -> &GameInstance {
        &self.game
    }

    pub fn is_symmetric(&self) -> bool {
        self.sizes.is_some()
    }

    pub fn states_visited(&self) -> usize {
        self.visited.load(Ordering::Relaxed)
    }

    pub fn memo_hits(&self) -> usize {
        self.hits.load(Ordering::Relaxed)
    }

    fn count_state(&self) -> Result<()> {
        let n = self.visited.fetch_add(1, Ordering::Relaxed);
        if n >= self.budget {
            return Err(Error::Capacity { what: "solver states".into(), limit: self.budget, states_visited: n });
        }
        Ok(())
    }

    /// Whether the first mover (Cut or Empty) wins from `state`.
    pub fn first_mover_wins(&self, state: &GameState) -> Result<bool> {
        self.value(state, 0)
    }

    /// Whether `role` wins from `state` with best play.
    pub fn wins(&self, role: Role, state: &GameState) -> Result<bool> {
        Ok(self.first_mover_wins(state)? == role.is_first_mover())
    }

    fn value(&self, state: &GameState, depth: usize) -> Result<bool> {
        if let Some(o) = self.game.status(state) {
            return Ok(o.winner.is_first_mover());
        }
        if state.pending.is_none() {
            if self.sizes.is_some() {
                return self.size_value(state.round, state.core.mask().len());
            }
            if let Some(v) = self.memo.get(state) {
                self.hits.fetch_add(1, Ordering::Relaxed);
                return Ok(*v);
            }
            self.count_state()?;
        }
        let v = if state.turn == Role::Cut && state.pending.is_none() {
            self.cut_value(state, depth)?
        } else {
            self.generic_value(state, depth)?
        };
        if state.pending.is_none() {
            self.memo.insert(state.clone(), v);
        }
        Ok(v)
    }

    fn cut_moves(&self, state: &GameState) -> Result<Arc<Vec<Move>>> {
        let target = self.game.cut_target(state);
        if let Some(m) = self.cuts.get(&target) {
            return Ok(m.clone());
        }
        let m = Arc::new(self.game.legal_moves(state)?);
        self.cuts.insert(target, m.clone());
        Ok(m)
    }

    /// Cut wins iff some cut has every piece leading to a Cut win. Piece
    /// values are shared between the cuts containing the same piece.
    fn cut_value(&self, state: &GameState, depth: usize) -> Result<bool> {
        let moves = self.cut_moves(state)?;
        let child = |cut: &Move, i: usize| self.value(&self.game.after_pick(state, cut, i), depth + 2);
        let key = |cut: &Move, i: usize| match cut {
            Move::Partition(p) => (p[i].bits() as usize, 0),
            Move::Antichain(a) => (a[i], 1),
            _ => unreachable!("cuts are partitions or antichains"),
        };
        let mut known: std::collections::HashMap<(usize, u8), bool> = std::collections::HashMap::new();
        if depth < PARALLEL_DEPTH {
            let mut reps: Vec<(&Move, usize)> = Vec::new();
            for cut in moves.iter() {
                for i in 0..cut.len() {
                    if known.insert(key(cut, i), false).is_none() {
                        reps.push((cut, i));
                    }
                }
            }
            let values = reps.par_iter().map(|&(cut, i)| child(cut, i)).collect::<Result<Vec<bool>>>()?;
            for (&(cut, i), v) in reps.iter().zip(values) {
                known.insert(key(cut, i), v);
            }
        }
        for cut in moves.iter() {
            let mut all = true;
            for i in 0..cut.len() {
                let v = match known.get(&key(cut, i)) {
                    Some(v) => *v,
                    None => {
                        let v = child(cut, i)?;
                        known.insert(key(cut, i), v);
                        v
                    }
                };
                if !v {
                    all = false;
                    break;
                }
            }
            if all {
                return Ok(true);
            }
        }
        Ok(false)
    }

    fn generic_value(&self, state: &GameState, depth: usize) -> Result<bool> {
        let moves = self.game.legal_moves(state)?;
        let mover_first = state.turn.is_first_mover();
        let child = |mv: &Move| -> Result<bool> { self.value(&self.game.apply_move(state, mv)?, depth + 1) };
        let found = if depth < PARALLEL_DEPTH && moves.len() > 1 {
            moves
                .par_iter()
                .map(child)
                .find_map_any(|r| match r {
                    Ok(v) if v == mover_first => Some(Ok(())),
                    Ok(_) => None,
                    Err(e) => Some(Err(e)),
                })
                .transpose()?
                .is_some()
        } else {
            let mut found = false;
            for mv in &moves {
                if child(mv)? == mover_first {
                    found = true;
                    break;
                }
            }
            found
        };
        Ok(found == mover_first)
    }

    /// Cut-to-move value of a U-game state with `c` points in the core.
    fn size_value(&self, round: usize, c: usize) -> Result<bool> {
        let sym = self.sizes.as_ref().expect("size abstraction");
        let n = self.game.rounds();
        if round > 0 {
            let checked = self.game.variant() != Variant::StrictPrefix || round < n;
            if c <= sym.k && checked {
                return Ok(true);
            }
            if round == n {
                return Ok(false);
            }
        }
        if let Some(v) = sym.memo.get(&(round, c)) {
            self.hits.fetch_add(1, Ordering::Relaxed);
            return Ok(*v);
        }
        self.count_state()?;
        let mut win = false;
        if c == 1 {
            win = self.size_value(round + 1, 1)?;
        } else {
            for parts in integer_partitions(c, sym.width) {
                let mut all = true;
                for p in parts {
                    if !self.size_value(round + 1, p)? {
                        all = false;
                        break;
                    }
                }
                if all {
                    win = true;
                    break;
                }
            }
        }
        sym.memo.insert((round, c), win);
        Ok(win)
    }

    /// The first move in canonical order that keeps `state` won for the
    /// mover, if any.
    pub fn winning_move(&self, state: &GameState) -> Result<Option<Move>> {
        if self.game.status(state).is_some() {
            return Ok(None);
        }
        if state.turn == Role::Cut && state.pending.is_none() {
            for cut in self.cut_moves(state)?.iter() {
                let mut all = true;
                for i in 0..cut.len() {
                    if !self.value(&self.game.after_pick(state, cut, i), 0)? {
                        all = false;
                        break;
                    }
                }
                if all {
                    return Ok(Some(cut.clone()));
                }
            }
            return Ok(None);
        }
        let mover_first = state.turn.is_first_mover();
        for mv in self.game.legal_moves(state)? {
            if self.value(&self.game.apply_move(state, &mv)?, 0)? == mover_first {
                return Ok(Some(mv));
            }
        }
        Ok(None)
    }
}

/// Partitions of `c` into 2..=`width` positive parts, parts non-increasing.
pub fn integer_partitions(c: usize, width: usize) -> Vec<Vec<usize>> {
    fn rec(left: usize, max: usize, width: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            if cur.len() >= 2 {
                out.push(cur.clone());
            }
            return;
        }
        if cur.len() == width {
            return;
        }
        for p in (1..=max.min(left)).rev() {
            cur.push(p);
            rec(left - p, p, width, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(c, c, width, &mut Vec::new(), &mut out);
    out
}

/// Winner of a solved game together with the solver that backs its strategy.
#[derive(Clone, Debug)]
pub struct SolveResult {
    pub winner: Role,
    pub strategy: super::SolvedStrategy,
    pub stats: SolveStats,
}

pub fn solve(game: &GameInstance) -> Result<SolveResult> {
    solve_with(game, &SolveOptions::default())
}

pub fn solve_with(game: &GameInstance, opts: &SolveOptions) -> Result<SolveResult> {
    let started = Instant::now();
    let solver = Arc::new(Solver::new(game.clone(), opts));
    let (first, second) = game.family().roles();
    let cached = opts.cache.as_ref().and_then(|c| c.get(game));
    let winner = match cached {
        Some(w) => w,
        None => {
            let w = if solver.first_mover_wins(&game.initial_state())? { first } else { second };
            if let Some(c) = &opts.cache {
                c.put(game, w)?;
            }
            w
        }
    };
    let stats = SolveStats {
        states_visited: solver.states_visited(),
        memo_hits: solver.memo_hits(),
        elapsed: started.elapsed(),
        symmetric: solver.is_symmetric(),
        from_cache: cached.is_some(),
    };
    Ok(SolveResult { winner, strategy: super::SolvedStrategy::new(solver, winner), stats })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structures::{GroundSet, MonotoneFamily};

    fn u(m: usize, n: usize, width: usize, symmetry: bool) -> Role {
        let f = MonotoneFamily::size_at_most(GroundSet::new(m).unwrap(), 1);
        let g = GameInstance::u_game(f, n, width, Variant::Exact).unwrap();
        solve_with(&g, &SolveOptions { symmetry, ..SolveOptions::default() }).unwrap().winner
    }

    #[test]
    fn small_thresholds() {
        assert_eq!(u(4, 2, 2, false), Role::Cut);
        assert_eq!(u(5, 2, 2, false), Role::Choose);
        assert_eq!(u(3, 1, 3, false), Role::Cut);
        assert_eq!(u(4, 1, 3, false), Role::Choose);
    }

    #[test]
    fn size_abstraction_agrees() {
        for m in 2..=7 {
            for n in 1..=3 {
                assert_eq!(u(m, n, 2, true), u(m, n, 2, false), "m={m} n={n}");
            }
        }
    }

    #[test]
    fn partitions_of_four() {
        assert_eq!(integer_partitions(4, 2), vec![vec![3, 1], vec![2, 2]]);
        assert_eq!(integer_partitions(4, 4).len(), 4);
    }
}
