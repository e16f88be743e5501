//! Digit splitting, fixed points, and restriction of Choose strategies to a
//! copy of a smaller ground set.

use super::{aux_finished, aux_move, soundness, RelationRecord, RunRecord, Simulation, StrategyRef, TransformCertificate};
use crate::engine::{
    Core, GameFamily, GameInstance, GameState, Move, Role, Start, Strategy, Structure, Transcript, Variant,
};
use crate::error::{Error, Result};
use crate::structures::{GroundSet, Mask, MonotoneFamily};

/// Cut splits the current target by the `t`-th base-`ν` digit of each point
/// in round `t`, least significant digit first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DigitSplit {
    m: usize,
    nu: usize,
    n: usize,
}

/// Requires `m ≤ νⁿ`, which is exactly when `n` digits separate all points.
pub fn digit_split(m: usize, nu: usize, n: usize) -> Result<DigitSplit> {
    if nu < 2 {
        return Err(Error::Precondition("ν ≥ 2 required".into()));
    }
    let capacity = (nu as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if m as u128 > capacity {
        return Err(Error::Precondition(format!("{m} points need more than {n} base-{nu} digits")));
    }
    Ok(DigitSplit { m, nu, n })
}

impl DigitSplit {
    /// The game the strategy is built for: U on `m` points, width `ν`,
    /// `n` rounds, singletons small.
    pub fn game(&self) -> Result<GameInstance> {
        let f = MonotoneFamily::size_at_most(GroundSet::new(self.m)?, 1);
        GameInstance::u_game(f, self.n, self.nu, Variant::Exact)
    }

    pub fn pieces(&self, target: Mask, round: usize) -> Vec<Mask> {
        let div = self.nu.pow(round as u32);
        let mut pieces = vec![Mask::EMPTY; self.nu];
        for p in target.points() {
            let d = (p / div) % self.nu;
            pieces[d] = pieces[d].union(Mask::singleton(p));
        }
        let mut pieces: Vec<Mask> = pieces.into_iter().filter(|p| !p.is_empty()).collect();
        pieces.sort();
        pieces
    }
}

impl Strategy for DigitSplit {
    fn name(&self) -> String {
        format!("digit_split(m={}, ν={}, n={})", self.m, self.nu, self.n)
    }

    fn decide(&self, game: &GameInstance, _: &[Move], state: &GameState) -> Result<Move> {
        match game.cut_target(state) {
            Core::Set(t) => Ok(Move::Partition(self.pieces(t, state.round))),
            _ => Err(Error::strategy(state, "digit splitting needs a set game")),
        }
    }
}

/// Choose keeps a fixed point `α` by always picking the piece containing it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FixedPoint {
    pub alpha: usize,
}

pub fn fixed_point(alpha: usize) -> FixedPoint {
    FixedPoint { alpha }
}

impl Strategy for FixedPoint {
    fn name(&self) -> String {
        format!("fixed_point({})", self.alpha)
    }

    fn decide(&self, _: &GameInstance, _: &[Move], state: &GameState) -> Result<Move> {
        let (Some(Move::Partition(pieces)), Core::Set(core)) = (&state.pending, state.core) else {
            return Err(Error::strategy(state, "fixed point needs a pending set cut"));
        };
        if !core.contains(self.alpha) {
            return Err(Error::strategy(state, format!("{} was already excluded", self.alpha)));
        }
        pieces
            .iter()
            .position(|p| p.contains(self.alpha))
            .map(Move::Pick)
            .ok_or_else(|| Error::strategy(state, format!("no piece contains {}", self.alpha)))
    }
}

/// A Choose strategy for a U-game on a small ground set, played on a bigger
/// ground set through an embedding.
#[derive(Clone)]
pub struct RestrictChoose {
    small: GameInstance,
    big: GameInstance,
    sigma: StrategyRef,
    embedding: Vec<usize>,
    copy: Mask,
}

/// Builds the restricted strategy. `embedding[i]` is the image of small
/// point `i`; `big` is played with the same rounds, width, variant and flags
/// as `small`.
pub fn restrict_choose(small: &GameInstance, sigma: StrategyRef, big: &GameInstance, embedding: Vec<usize>) -> Result<RestrictChoose> {
    let (Structure::Sets(fs), Structure::Sets(fb)) = (small.structure(), big.structure()) else {
        return Err(Error::Precondition("restriction works on set games".into()));
    };
    if small.family() != GameFamily::U || big.family() != GameFamily::U {
        return Err(Error::Precondition("restriction works on U-games".into()));
    }
    if embedding.len() != fs.ground().size() {
        return Err(Error::Precondition("embedding must map every small point".into()));
    }
    let copy = Mask::from_points(embedding.iter().copied());
    if copy.len() != embedding.len() || !fb.ground().contains(copy) {
        return Err(Error::Precondition("embedding must be injective into the big ground set".into()));
    }
    if (small.rounds(), small.width(), small.variant(), small.flags())
        != (big.rounds(), big.width(), big.variant(), big.flags())
    {
        return Err(Error::Precondition("small and big games must share rounds, width, variant and flags".into()));
    }
    let r = RestrictChoose { small: small.clone(), big: big.clone(), sigma, embedding, copy };
    if Start::Set(r.pull(big.start().mask())) != small.start() {
        return Err(Error::Precondition("the small start must be the trace of the big start".into()));
    }
    if !same_members(&fb.pullback(fs.ground(), &r.embedding), fs) {
        return Err(Error::Precondition("the small family must be the trace of the big family".into()));
    }
    Ok(r)
}

fn same_members(a: &MonotoneFamily, b: &MonotoneFamily) -> bool {
    a.ground() == b.ground() && a.ground().subsets().all(|s| a.contains(s) == b.contains(s))
}

impl RestrictChoose {
    fn pull(&self, big: Mask) -> Mask {
        Mask::from_points(self.embedding.iter().enumerate().filter(|(_, &b)| big.contains(b)).map(|(s, _)| s))
    }

    fn push(&self, small: Mask) -> Mask {
        Mask::from_points(small.points().map(|s| self.embedding[s]))
    }

    fn pull_move(&self, mv: &Move) -> Result<Move> {
        match mv {
            Move::Partition(p) => Ok(Move::Partition(p.iter().map(|m| self.pull(*m)).collect())),
            Move::Pick(i) => Ok(Move::Pick(*i)),
            other => Err(soundness(format!("unexpected move {other} in a U-game"))),
        }
    }

    fn aux_history(&self, history: &[Move]) -> Result<Vec<Move>> {
        history.iter().map(|m| self.pull_move(m)).collect()
    }
}

impl Strategy for RestrictChoose {
    fn name(&self) -> String {
        format!("restrict({})", self.sigma.name())
    }

    fn decide(&self, _: &GameInstance, history: &[Move], _: &GameState) -> Result<Move> {
        let aux = self.aux_history(history)?;
        if aux_finished(&self.small, &aux)? {
            // the small game is already lost for Choose; any answer will do
            return Ok(Move::Pick(0));
        }
        aux_move(&self.small, self.sigma.as_ref(), &aux)
    }
}

impl Simulation for RestrictChoose {
    fn output_game(&self) -> &GameInstance {
        &self.big
    }

    fn owner(&self) -> Role {
        Role::Choose
    }

    fn certify(&self, moves: &[Move]) -> Result<TransformCertificate> {
        let output_run = Transcript::from_moves(&self.big, moves)?;
        let aux_moves = self.aux_history(moves)?;
        let (input_run, aux_state, used) = RunRecord::replay_prefix(&self.small, &aux_moves)?;
        let big_state = self.big.replay(moves)?;
        let lhs = big_state.core.mask().intersect(self.copy);
        let rhs = self.push(aux_state.core.mask());
        let complete = used == aux_moves.len();
        Ok(TransformCertificate {
            kind: "restrict_choose".into(),
            input_run,
            output_run,
            relation: RelationRecord {
                kind: if complete { "equal" } else { "subset" }.into(),
                statement: format!("output core ∩ copy = {lhs}, embedded auxiliary core = {rhs}"),
                holds: if complete { lhs == rhs } else { lhs.is_subset(rhs) },
            },
        })
    }
}
