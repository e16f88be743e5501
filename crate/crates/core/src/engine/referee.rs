//! Move legality, transitions and terminal conditions.

use serde::{Deserialize, Serialize};

use super::game::{GameFamily, GameInstance, Role, Start, Structure, Variant};
use super::state::{Core, GameState, Move};
use crate::error::{Error, Result};
use crate::structures::poset::elems;
use crate::structures::{
    algebra_antichains, disjoint_partitions, i_partitions, is_maximal_i_partition, poset_antichains, AntichainCheck,
    EnumOptions, IPartition, Mask,
};

/// Winner of a finished game and why.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Outcome {
    pub winner: Role,
    pub reason: String,
}

fn illegal(msg: impl Into<String>) -> Error {
    Error::IllegalMove(msg.into())
}

impl GameInstance {
    pub fn initial_state(&self) -> GameState {
        let (first, _) = self.family().roles();
        let core = match (self.structure(), self.start()) {
            (Structure::Poset(q), Start::Element(e)) => {
                if self.family() == GameFamily::BmPoset {
                    Core::Element(e)
                } else {
                    Core::Elems(q.down(e))
                }
            }
            (_, Start::Set(x)) => Core::Set(x),
            _ => unreachable!("validated at construction"),
        };
        GameState { round: 0, turn: first, core, pending: None }
    }

    pub fn core_is_positive(&self, core: Core) -> bool {
        match core {
            Core::Set(m) => self.structure().is_positive(m),
            Core::Elems(s) => s != 0,
            Core::Element(_) => true,
        }
    }

    /// The set Cut must split in `state`.
    pub fn cut_target(&self, state: &GameState) -> Core {
        match (state.core, self.start()) {
            (Core::Set(core), Start::Set(start)) => Core::Set(if self.flags().cut_current { core } else { start }),
            (_, Start::Element(e)) => Core::Element(e),
            _ => unreachable!(),
        }
    }

    fn enum_options(&self) -> EnumOptions {
        EnumOptions { width: self.width().limit(), maximal: self.flags().maximal, budget: self.move_budget() }
    }

    /// `Some` once the game is decided.
    pub fn status(&self, state: &GameState) -> Option<Outcome> {
        let n = self.rounds();
        let r = state.round;
        let positive = self.core_is_positive(state.core);
        match state.turn {
            Role::Cut if r > 0 => {
                let checked = self.variant() != Variant::StrictPrefix || r < n;
                if !positive && checked {
                    Some(Outcome {
                        winner: Role::Cut,
                        reason: format!("core {} is not positive after round {r}", state.core),
                    })
                } else if r == n {
                    let reason = match self.variant() {
                        Variant::StrictPrefix => format!("cores stayed positive through round {}", n - 1),
                        _ => format!("core {} is positive after round {n}", state.core),
                    };
                    Some(Outcome { winner: Role::Choose, reason })
                } else {
                    None
                }
            }
            Role::Nonempty if !positive => Some(Outcome {
                winner: Role::Empty,
                reason: format!("Nonempty has no positive move below {}", state.core),
            }),
            Role::Empty if r == n => Some(Outcome {
                winner: Role::Nonempty,
                reason: format!("position {} reached after round {n}", state.core),
            }),
            _ => None,
        }
    }

    fn positive_subsets(&self, of: Mask) -> Result<Vec<Move>> {
        let budget = self.move_budget();
        let mut out = Vec::new();
        for s in of.subsets() {
            if self.structure().is_positive(s) {
                if out.len() == budget {
                    return Err(Error::Capacity { what: "Banach–Mazur moves".into(), limit: budget, states_visited: 0 });
                }
                out.push(Move::Set(s));
            }
        }
        Ok(out)
    }

    /// Legal moves in canonical order. Empty once the game is over.
    pub fn legal_moves(&self, state: &GameState) -> Result<Vec<Move>> {
        if self.status(state).is_some() {
            return Ok(Vec::new());
        }
        match state.turn {
            Role::Choose => Ok((0..state.pending.as_ref().map_or(0, Move::len)).map(Move::Pick).collect()),
            Role::Cut => {
                let target = self.cut_target(state);
                match (self.structure(), target) {
                    (Structure::Sets(f), Core::Set(t)) => {
                        let moves = if self.family() == GameFamily::U {
                            disjoint_partitions(t, self.width().limit(), self.move_budget())?
                        } else {
                            i_partitions(f, t, self.enum_options())?
                        };
                        Ok(moves.into_iter().map(Move::Partition).collect())
                    }
                    (Structure::Algebra(_), Core::Set(t)) => {
                        Ok(algebra_antichains(t, self.enum_options())?.into_iter().map(Move::Partition).collect())
                    }
                    (Structure::Poset(q), Core::Element(x)) => {
                        Ok(poset_antichains(q, x, self.enum_options())?.into_iter().map(Move::Antichain).collect())
                    }
                    _ => unreachable!(),
                }
            }
            Role::Empty | Role::Nonempty => match (self.structure(), state.core) {
                (Structure::Poset(q), Core::Element(x)) => Ok(elems(q.down(x)).map(Move::Element).collect()),
                (_, Core::Set(core)) => {
                    let relaxed = state.turn == Role::Empty && !self.flags().maximal;
                    self.positive_subsets(if relaxed { self.start().mask() } else { core })
                }
                _ => unreachable!(),
            },
        }
    }

    /// Checks `mv` against the rules without enumerating alternatives.
    pub fn check_move(&self, state: &GameState, mv: &Move) -> Result<()> {
        if let Some(o) = self.status(state) {
            return Err(illegal(format!("game is over, {} won", o.winner)));
        }
        let width_ok = |k: usize| self.width().limit().is_none_or(|w| k <= w);
        match (state.turn, mv) {
            (Role::Choose, Move::Pick(i)) => {
                let len = state.pending.as_ref().map_or(0, Move::len);
                if *i >= len {
                    return Err(illegal(format!("pick {i} out of range for {len} pieces")));
                }
                Ok(())
            }
            (Role::Cut, Move::Partition(pieces)) => {
                let Core::Set(target) = self.cut_target(state) else { unreachable!() };
                if pieces.is_empty() || !width_ok(pieces.len()) {
                    return Err(illegal(format!("cut has {} pieces, width is {}", pieces.len(), self.width())));
                }
                match self.structure() {
                    Structure::Sets(_) if self.family() == GameFamily::U => {
                        let mut union = Mask::EMPTY;
                        for p in pieces {
                            if !union.is_disjoint(*p) {
                                return Err(illegal(format!("piece {p} overlaps an earlier piece")));
                            }
                            union = union.union(*p);
                        }
                        if union != target {
                            return Err(illegal(format!("pieces cover {union}, not {target}")));
                        }
                        Ok(())
                    }
                    Structure::Sets(f) => {
                        let w = IPartition::new(f, target, pieces.clone()).map_err(|e| illegal(e.to_string()))?;
                        if self.flags().maximal && !is_maximal_i_partition(f, &w) {
                            return Err(illegal(format!("I-partition of {target} is not maximal")));
                        }
                        Ok(())
                    }
                    Structure::Algebra(b) => {
                        for (i, p) in pieces.iter().enumerate() {
                            if p.is_empty() || !p.is_subset(target) {
                                return Err(illegal(format!("piece {p} is not a nonzero element below {target}")));
                            }
                            if pieces[i + 1..].iter().any(|q| !q.is_disjoint(*p)) {
                                return Err(illegal(format!("piece {p} is compatible with another piece")));
                            }
                        }
                        if self.flags().maximal && !b.is_maximal_antichain_below(target, pieces) {
                            return Err(illegal(format!("antichain below {target} is not maximal")));
                        }
                        Ok(())
                    }
                    Structure::Poset(_) => Err(illegal("poset games take element antichains")),
                }
            }
            (Role::Cut, Move::Antichain(a)) => {
                let (Structure::Poset(q), Core::Element(x)) = (self.structure(), self.cut_target(state)) else {
                    return Err(illegal("set games take partitions"));
                };
                if a.is_empty() || !width_ok(a.len()) {
                    return Err(illegal(format!("antichain has {} elements, width is {}", a.len(), self.width())));
                }
                if a.iter().any(|&e| e >= q.len()) {
                    return Err(illegal("antichain element out of range"));
                }
                match q.check_maximal_antichain_below(x, a) {
                    AntichainCheck::Maximal => Ok(()),
                    AntichainCheck::Extendable(_) if !self.flags().maximal => Ok(()),
                    AntichainCheck::Extendable(e) => Err(illegal(format!("antichain is not maximal, {e} can be added"))),
                    AntichainCheck::NotAntichain(p, r) => Err(illegal(format!("{p} and {r} are compatible"))),
                    AntichainCheck::NotBelow(p) => Err(illegal(format!("{p} is not below {x}"))),
                }
            }
            (Role::Empty | Role::Nonempty, Move::Set(s)) => {
                let Core::Set(core) = state.core else { unreachable!() };
                let relaxed = state.turn == Role::Empty && !self.flags().maximal;
                let bound = if relaxed { self.start().mask() } else { core };
                if !s.is_subset(bound) {
                    return Err(illegal(format!("{s} is not a subset of {bound}")));
                }
                if !self.structure().is_positive(*s) {
                    return Err(illegal(format!("{s} is not positive")));
                }
                Ok(())
            }
            (Role::Empty | Role::Nonempty, Move::Element(e)) => {
                let (Structure::Poset(q), Core::Element(x)) = (self.structure(), state.core) else {
                    return Err(illegal("set games take set moves"));
                };
                if *e >= q.len() || !q.leq(*e, x) {
                    return Err(illegal(format!("#{e} is not below #{x}")));
                }
                Ok(())
            }
            (turn, mv) => Err(illegal(format!("{mv} is not a move for {turn}"))),
        }
    }

    /// The Cut-to-move position after Choose takes piece `i` of `cut` played
    /// from the Cut-to-move `state`. Legality is not checked.
    pub fn after_pick(&self, state: &GameState, cut: &Move, i: usize) -> GameState {
        let core = match (state.core, cut) {
            (Core::Set(c), Move::Partition(p)) => Core::Set(c.intersect(p[i])),
            (Core::Elems(c), Move::Antichain(a)) => {
                let q = self.structure().poset().expect("poset game");
                Core::Elems(c & q.down(a[i]))
            }
            _ => unreachable!("cut does not match the core"),
        };
        GameState { round: state.round + 1, turn: Role::Cut, core, pending: None }
    }

    /// The position after `mv`; rejects illegal moves.
    pub fn apply_move(&self, state: &GameState, mv: &Move) -> Result<GameState> {
        self.check_move(state, mv)?;
        let mut next = state.clone();
        match (state.turn, mv) {
            (Role::Cut, _) => {
                next.turn = Role::Choose;
                next.pending = Some(mv.clone());
            }
            (Role::Choose, Move::Pick(i)) => {
                let cut = state.pending.as_ref().expect("checked");
                return Ok(self.after_pick(state, cut, *i));
            }
            (Role::Empty, Move::Set(s)) => {
                let relaxed = !self.flags().maximal;
                next.core = Core::Set(if relaxed { state.core.mask().intersect(*s) } else { *s });
                next.turn = Role::Nonempty;
            }
            (Role::Nonempty, Move::Set(s)) => {
                next.core = Core::Set(*s);
                next.round += 1;
                next.turn = Role::Empty;
            }
            (Role::Empty, Move::Element(e)) => {
                next.core = Core::Element(*e);
                next.turn = Role::Nonempty;
            }
            (Role::Nonempty, Move::Element(e)) => {
                next.core = Core::Element(*e);
                next.round += 1;
                next.turn = Role::Empty;
            }
            _ => unreachable!("checked above"),
        }
        Ok(next)
    }

    /// Position reached by playing `history` from the start.
    pub fn replay(&self, history: &[Move]) -> Result<GameState> {
        let mut s = self.initial_state();
        for (i, mv) in history.iter().enumerate() {
            s = self.apply_move(&s, mv).map_err(|e| match e {
                Error::IllegalMove(m) => Error::IllegalMove(format!("move {i}: {m}")),
                other => other,
            })?;
        }
        Ok(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::game::{Flags, GameParams, Width};
    use crate::structures::{FiniteBooleanAlgebra, GroundSet, MonotoneFamily};

    fn m(s: &str) -> Mask {
        s.parse().unwrap()
    }

    fn u_game(size: usize, k: usize, n: usize, variant: Variant) -> GameInstance {
        let f = MonotoneFamily::size_at_most(GroundSet::new(size).unwrap(), k);
        GameInstance::u_game(f, n, 2, variant).unwrap()
    }

    #[test]
    fn weak_checks_final_core() {
        // m=2, n=1: any split leaves a singleton
        let g = u_game(2, 1, 1, Variant::Weak);
        let s = g.apply_move(&g.initial_state(), &Move::Partition(vec![m("{0}"), m("{1}")])).unwrap();
        let s = g.apply_move(&s, &Move::Pick(1)).unwrap();
        assert_eq!(g.status(&s).unwrap().winner, Role::Cut);
    }

    #[test]
    fn strict_prefix_ignores_last_round() {
        let g = u_game(2, 1, 1, Variant::StrictPrefix);
        let s = g.replay(&[Move::Partition(vec![m("{0}"), m("{1}")]), Move::Pick(0)]).unwrap();
        assert_eq!(g.status(&s).unwrap().winner, Role::Choose);
    }

    #[test]
    fn rejects_overlapping_cut() {
        let g = u_game(3, 0, 1, Variant::Exact);
        let err = g.apply_move(&g.initial_state(), &Move::Partition(vec![m("{0,1}"), m("{1,2}")])).unwrap_err();
        assert!(matches!(err, Error::IllegalMove(_)));
        let err = g.apply_move(&g.initial_state(), &Move::Partition(vec![m("{0}"), m("{1}"), m("{2}")])).unwrap_err();
        assert!(matches!(err, Error::IllegalMove(_)));
    }

    #[test]
    fn algebra_core_is_meet() {
        let b = FiniteBooleanAlgebra::with_atoms(4).unwrap();
        let g = GameInstance::new(
            Structure::Algebra(b),
            GameParams {
                family: GameFamily::GPoset,
                start: Start::Set(b.top()),
                rounds: 2,
                width: Width::Unbounded,
                variant: Variant::Exact,
                flags: Flags { maximal: true, cut_current: false },
            },
        )
        .unwrap();
        let s = g
            .replay(&[
                Move::Partition(vec![m("{0,1}"), m("{2,3}")]),
                Move::Pick(0),
                Move::Partition(vec![m("{0,2}"), m("{1,3}")]),
                Move::Pick(0),
            ])
            .unwrap();
        assert_eq!(s.core, Core::Set(m("{0}")));
        assert_eq!(g.status(&s).unwrap().winner, Role::Choose);
    }

    #[test]
    fn legal_moves_are_legal() {
        let g = u_game(4, 1, 2, Variant::Exact);
        let s0 = g.initial_state();
        for mv in g.legal_moves(&s0).unwrap() {
            let s1 = g.apply_move(&s0, &mv).unwrap();
            for pick in g.legal_moves(&s1).unwrap() {
                g.apply_move(&s1, &pick).unwrap();
            }
        }
    }
}
