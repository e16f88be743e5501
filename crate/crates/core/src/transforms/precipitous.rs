//! Choose in the unbounded cut-and-choose game against Nonempty in the
//! Banach–Mazur game: each side's strategy is run inside the other game,
//! with Choose's picks matching Empty's moves.

use std::collections::BTreeMap;

use super::{aux_finished, aux_move, soundness, RelationRecord, RunRecord, Simulation, StrategyRef, TransformCertificate};
use crate::engine::{
    Flags, GameFamily, GameInstance, GameParams, GameState, GreedyPositivity, Move, Role, Start, Strategy, Structure,
    Transcript, Variant, Width,
};
use crate::error::{Error, Result};
use crate::structures::Mask;

fn sets_game(g: &GameInstance, family: GameFamily) -> Result<()> {
    match g.structure() {
        Structure::Sets(_) if g.family() == family => Ok(()),
        _ => Err(Error::Precondition(format!("a {family:?} game on sets is required"))),
    }
}

/// Choose strategy for `G(X, I, n)` from a Nonempty strategy for the strict
/// `BM(I, n + 1)` in which Empty opens with `X`.
#[derive(Clone)]
pub struct ChooseFromNonempty {
    g: GameInstance,
    bm: GameInstance,
    sigma: StrategyRef,
}

pub fn nonempty_to_choose(g: &GameInstance, sigma: StrategyRef) -> Result<ChooseFromNonempty> {
    sets_game(g, GameFamily::GIdeal)?;
    let bm = GameInstance::new(
        g.structure().clone(),
        GameParams {
            family: GameFamily::BmIdeal,
            start: g.start(),
            rounds: g.rounds() + 1,
            width: Width::Unbounded,
            variant: Variant::Exact,
            flags: Flags { maximal: true, cut_current: false },
        },
    )?;
    Ok(ChooseFromNonempty { g: g.clone(), bm, sigma })
}

struct NonemptyAux {
    bm_moves: Vec<Move>,
    covered: usize,
    note: Option<String>,
}

impl ChooseFromNonempty {
    pub fn auxiliary_game(&self) -> &GameInstance {
        &self.bm
    }

    /// Replays the Banach–Mazur run for the answered rounds and returns the
    /// pick for `pending`, if the run is still alive.
    fn aux(&self, rounds: &[Vec<Mask>], pending: Option<&[Mask]>) -> Result<(NonemptyAux, Option<usize>)> {
        let s = self.g.structure();
        let mut aux = NonemptyAux { bm_moves: vec![Move::Set(self.g.start().mask())], covered: 0, note: None };
        let reply = |aux: &mut NonemptyAux| -> Result<()> {
            if !aux_finished(&self.bm, &aux.bm_moves)? {
                let y = aux_move(&self.bm, self.sigma.as_ref(), &aux.bm_moves)?;
                aux.bm_moves.push(y);
            }
            Ok(())
        };
        reply(&mut aux)?;
        let answer = |aux: &mut NonemptyAux, w: &[Mask]| -> Result<Option<usize>> {
            if aux_finished(&self.bm, &aux.bm_moves)? {
                return Ok(None);
            }
            let y = self.bm.replay(&aux.bm_moves)?.core.mask();
            let Some(k) = w.iter().position(|p| s.is_positive(p.intersect(y))) else {
                aux.note = Some(format!("no piece meets {y} positively"));
                return Ok(None);
            };
            aux.bm_moves.push(Move::Set(w[k].intersect(y)));
            Ok(Some(k))
        };
        for w in rounds {
            if answer(&mut aux, w)?.is_none() {
                return Ok((aux, None));
            }
            reply(&mut aux)?;
            aux.covered += 1;
        }
        let pick = match pending {
            Some(w) => answer(&mut aux, w)?,
            None => None,
        };
        Ok((aux, pick))
    }

    fn g_rounds(history: &[Move]) -> Vec<Vec<Mask>> {
        super::rounds_of(history).into_iter().filter_map(|(cut, _)| cut.pieces().map(<[Mask]>::to_vec)).collect()
    }
}

impl Strategy for ChooseFromNonempty {
    fn name(&self) -> String {
        format!("nonempty_to_choose({})", self.sigma.name())
    }

    fn decide(&self, game: &GameInstance, history: &[Move], state: &GameState) -> Result<Move> {
        let Some(Move::Partition(w)) = &state.pending else {
            return Err(Error::strategy(state, "no I-partition to answer"));
        };
        match self.aux(&Self::g_rounds(history), Some(w))?.1 {
            Some(k) => Ok(Move::Pick(k)),
            None => GreedyPositivity.decide(game, history, state),
        }
    }
}

impl Simulation for ChooseFromNonempty {
    fn output_game(&self) -> &GameInstance {
        &self.g
    }

    fn owner(&self) -> Role {
        Role::Choose
    }

    fn certify(&self, moves: &[Move]) -> Result<TransformCertificate> {
        let output_run = Transcript::from_moves(&self.g, moves)?;
        let rounds = Self::g_rounds(moves);
        let (aux, _) = self.aux(&rounds, None)?;
        let (input_run, bm_state) = RunRecord::replay(&self.bm, &aux.bm_moves)?;
        let picks: Vec<usize> = super::rounds_of(moves).into_iter().map(|(_, i)| i).collect();
        let g_core = rounds[..aux.covered]
            .iter()
            .zip(&picks)
            .fold(self.g.start().mask(), |acc, (w, &i)| acc.intersect(w[i]));
        let bm_core = bm_state.core.mask();
        Ok(TransformCertificate {
            kind: "nonempty_to_choose".into(),
            input_run: input_run.with_note(aux.note),
            output_run,
            relation: RelationRecord {
                kind: "superset".into(),
                statement: format!("core {g_core} after {} rounds ⊇ Banach–Mazur position {bm_core}", aux.covered),
                holds: bm_core.is_subset(g_core),
            },
        })
    }
}

/// Nonempty strategy for the strict `BM(I, n)` from a Choose strategy `F`
/// for `G_∞(x₀, I, n)`, where `x₀` is whatever Empty opens with.
///
/// Nonempty answers `x` with the largest positive `y ⊆ x` all of whose
/// positive subsets are pieces `F` picks against some I-partition, so that
/// Empty's next move is always one of `F`'s picks.
#[derive(Clone)]
pub struct NonemptyFromChoose {
    bm: GameInstance,
    f: StrategyRef,
}

pub fn choose_to_nonempty(bm: &GameInstance, f: StrategyRef) -> Result<NonemptyFromChoose> {
    sets_game(bm, GameFamily::BmIdeal)?;
    if !bm.flags().maximal {
        return Err(Error::Precondition("the Banach–Mazur game must be the strict one".into()));
    }
    Ok(NonemptyFromChoose { bm: bm.clone(), f })
}

struct ChooseAux {
    g: GameInstance,
    moves: Vec<Move>,
}

impl NonemptyFromChoose {
    /// The cut-and-choose game `F` is consulted in once Empty opened with `x0`.
    pub fn auxiliary_game(&self, x0: Mask) -> Result<GameInstance> {
        GameInstance::new(
            self.bm.structure().clone(),
            GameParams {
                family: GameFamily::GIdeal,
                start: Start::Set(x0),
                rounds: self.bm.rounds(),
                width: Width::Unbounded,
                variant: Variant::Exact,
                flags: Flags { maximal: true, cut_current: false },
            },
        )
        .map(|g| g.with_move_budget(self.bm.move_budget()))
    }

    /// `F`'s picks against every legal I-partition after `moves`, each with
    /// the first partition producing it.
    fn sigma_set(&self, g: &GameInstance, moves: &[Move]) -> Result<BTreeMap<Mask, Move>> {
        let state = g.replay(moves)?;
        let mut out = BTreeMap::new();
        for w in g.legal_moves(&state)? {
            let mut h = moves.to_vec();
            h.push(w.clone());
            let Move::Pick(i) = aux_move(g, self.f.as_ref(), &h)? else { unreachable!() };
            let piece = w.pieces().expect("set cut")[i];
            out.entry(piece).or_insert(w);
        }
        Ok(out)
    }

    /// Replays the cut-and-choose run whose picks are Empty's moves.
    fn aux(&self, bm_history: &[Move]) -> Result<ChooseAux> {
        let empty_moves: Vec<Mask> =
            bm_history.iter().step_by(2).map(|m| if let Move::Set(x) = m { Ok(*x) } else { Err(soundness("expected a set move")) }).collect::<Result<_>>()?;
        let x0 = *empty_moves.first().ok_or_else(|| soundness("Empty has not moved"))?;
        let g = self.auxiliary_game(x0)?;
        let mut moves = Vec::new();
        for (k, x) in empty_moves.iter().enumerate().skip(1) {
            let sigma = self.sigma_set(&g, &moves)?;
            let w = sigma
                .get(x)
                .ok_or_else(|| soundness(format!("Empty's move {x} in round {k} is not among F's picks")))?;
            let i = w.pieces().expect("set cut").iter().position(|p| p == x).expect("piece present");
            moves.push(w.clone());
            moves.push(Move::Pick(i));
        }
        Ok(ChooseAux { g, moves })
    }
}

impl Strategy for NonemptyFromChoose {
    fn name(&self) -> String {
        format!("choose_to_nonempty({})", self.f.name())
    }

    fn decide(&self, game: &GameInstance, history: &[Move], state: &GameState) -> Result<Move> {
        let aux = self.aux(history)?;
        let sigma = self.sigma_set(&aux.g, &aux.moves)?;
        let s = game.structure();
        let x = state.core.mask();
        let mut candidates: Vec<Mask> = x.subsets().filter(|y| s.is_positive(*y)).collect();
        candidates.reverse();
        candidates
            .into_iter()
            .find(|y| y.subsets().filter(|z| s.is_positive(*z)).all(|z| sigma.contains_key(&z)))
            .map(Move::Set)
            .ok_or_else(|| soundness(format!("no positive subset of {x} has all its positive subsets among F's picks")))
    }
}

impl Simulation for NonemptyFromChoose {
    fn output_game(&self) -> &GameInstance {
        &self.bm
    }

    fn owner(&self) -> Role {
        Role::Nonempty
    }

    fn certify(&self, moves: &[Move]) -> Result<TransformCertificate> {
        let output_run = Transcript::from_moves(&self.bm, moves)?;
        let aux = self.aux(moves)?;
        let (input_run, g_state) = RunRecord::replay(&aux.g, &aux.moves)?;
        let last_empty = moves.iter().step_by(2).next_back().and_then(|m| if let Move::Set(x) = m { Some(*x) } else { None });
        let g_core = g_state.core.mask();
        Ok(TransformCertificate {
            kind: "choose_to_nonempty".into(),
            input_run,
            output_run,
            relation: RelationRecord {
                kind: "equal".into(),
                statement: format!("F's core {g_core} equals Empty's last move {}", last_empty.unwrap_or(Mask::EMPTY)),
                holds: last_empty == Some(g_core),
            },
        })
    }
}
