//! Trading one I-partition move for two disjoint-partition moves and back.
//!
//! A G-round with I-partition `W` of `X` becomes two U-rounds: first the full
//! disjointification `W'` of `W` (pieces in point-list order), then the split
//! `⟨⋃W, X∖⋃W⟩`. Picking `w'_i` in U corresponds to picking `w_i` in G.

use super::{
    aux_finished, aux_move, soundness, RelationRecord, RunRecord, Simulation, StrategyRef, TransformCertificate,
};
use crate::engine::{
    Flags, GameFamily, GameInstance, GameParams, GameState, Move, Role, Start, Strategy, Structure, Transcript,
    Width,
};
use crate::error::{Error, Result};
use crate::structures::{full_disjointification, lex_point_order, Mask};

/// The two U-moves standing for the I-partition `w` of `x`, and for each
/// disjointified piece the index of its source piece in `w`.
fn expand(x: Mask, w: &[Mask]) -> (Vec<Mask>, [Mask; 2], Vec<usize>) {
    let ordered = lex_point_order(w);
    let disjoint = full_disjointification(x, &ordered);
    let source = ordered.iter().map(|p| w.iter().position(|q| q == p).expect("same pieces")).collect();
    let union = w.iter().fold(Mask::EMPTY, |a, p| a.union(*p));
    (disjoint, [union, x.minus(union)], source)
}

/// `⋂ (Y_k ∩ ⋃W_k)` over the U-round pairs, where `Y_k` is what the pair's
/// picks left.
fn pair_trace(x: Mask, pairs: &[(Vec<Mask>, usize, Option<usize>)]) -> Mask {
    pairs.iter().fold(x, |acc, (w, i, j)| {
        let (disjoint, split, _) = expand(x, w);
        let y = disjoint[*i].intersect(j.map_or(x, |j| split[j]));
        acc.intersect(y).intersect(split[0])
    })
}

fn u_width(g: &GameInstance, x: Mask) -> usize {
    match g.width() {
        Width::Bounded(w) => w.max(2),
        Width::Unbounded => x.subsets().filter(|s| g.structure().is_positive(*s)).count().max(2),
    }
}

/// Cut strategy for `U(X, I, 2n)` built from a Cut strategy for `G(X, I, n)`.
#[derive(Clone)]
pub struct DisjointifiedCut {
    g: GameInstance,
    u: GameInstance,
    sigma: StrategyRef,
}

pub fn disjointify_cut(g: &GameInstance, sigma: StrategyRef) -> Result<DisjointifiedCut> {
    if g.family() != GameFamily::GIdeal {
        return Err(Error::Precondition("disjointify_cut takes a G_ideal game".into()));
    }
    let Structure::Sets(_) = g.structure() else { unreachable!() };
    let x = g.start().mask();
    let u = GameInstance::new(
        g.structure().clone(),
        GameParams {
            family: GameFamily::U,
            start: Start::Set(x),
            rounds: 2 * g.rounds(),
            width: Width::Bounded(u_width(g, x)),
            variant: g.variant(),
            flags: Flags { maximal: true, cut_current: false },
        },
    )?;
    Ok(DisjointifiedCut { g: g.clone(), u, sigma })
}

struct CutAux {
    /// The G-run so far.
    moves: Vec<Move>,
    /// σ's I-partitions, one per started U pair.
    partitions: Vec<Vec<Mask>>,
    /// (W, W'-index, split index) per U pair.
    pairs: Vec<(Vec<Mask>, usize, Option<usize>)>,
}

impl DisjointifiedCut {
    /// Rebuilds the G-run from a U history; `need` is how many of σ's
    /// partitions to compute.
    fn aux(&self, history: &[Move], need: usize) -> Result<CutAux> {
        let picks: Vec<usize> = history.iter().filter_map(|m| if let Move::Pick(i) = m { Some(*i) } else { None }).collect();
        let mut aux = CutAux { moves: Vec::new(), partitions: Vec::new(), pairs: Vec::new() };
        let x = self.g.start().mask();
        for k in 0..need {
            let Move::Partition(w) = aux_move(&self.g, self.sigma.as_ref(), &aux.moves)? else {
                return Err(soundness("G strategy did not play an I-partition"));
            };
            if let Some(&i) = picks.get(2 * k) {
                let (disjoint, _, source) = expand(x, &w);
                if i >= disjoint.len() {
                    return Err(soundness(format!("U pick {i} out of range")));
                }
                aux.moves.push(Move::Partition(w.clone()));
                aux.moves.push(Move::Pick(source[i]));
                aux.pairs.push((w.clone(), i, picks.get(2 * k + 1).copied()));
            }
            aux.partitions.push(w);
        }
        Ok(aux)
    }
}

impl Strategy for DisjointifiedCut {
    fn name(&self) -> String {
        format!("disjointify_cut({})", self.sigma.name())
    }

    fn decide(&self, _: &GameInstance, history: &[Move], state: &GameState) -> Result<Move> {
        let done = state.round;
        let x = self.g.start().mask();
        let aux = self.aux(history, done / 2 + 1)?;
        let w = &aux.partitions[done / 2];
        let (disjoint, split, _) = expand(x, w);
        Ok(Move::Partition(if done.is_multiple_of(2) { disjoint } else { split.to_vec() }))
    }
}

impl Simulation for DisjointifiedCut {
    fn output_game(&self) -> &GameInstance {
        &self.u
    }

    fn owner(&self) -> Role {
        Role::Cut
    }

    fn certify(&self, moves: &[Move]) -> Result<TransformCertificate> {
        let output_run = Transcript::from_moves(&self.u, moves)?;
        let done = moves.iter().filter(|m| matches!(m, Move::Pick(_))).count();
        let aux = self.aux(moves, done.div_ceil(2))?;
        let (input_run, g_state) = RunRecord::replay(&self.g, &aux.moves)?;
        let lhs = pair_trace(self.g.start().mask(), &aux.pairs);
        let rhs = g_state.core.mask();
        Ok(TransformCertificate {
            kind: "disjointify_cut".into(),
            input_run,
            output_run,
            relation: RelationRecord {
                kind: "subset".into(),
                statement: format!("⋂(Y∩⋃W) = {lhs} ⊆ G core {rhs}"),
                holds: lhs.is_subset(rhs),
            },
        })
    }
}

/// Choose strategy for `G(X, I, n)` built from a Choose strategy for
/// `U(X, I, 2n)`.
#[derive(Clone)]
pub struct DisjointifiedChoose {
    u: GameInstance,
    g: GameInstance,
    sigma: StrategyRef,
}

/// `u` must cut the start set each round. The output G-game uses `width`
/// and `cut_current`.
pub fn disjointify_choose(u: &GameInstance, sigma: StrategyRef, width: Width, cut_current: bool) -> Result<DisjointifiedChoose> {
    if u.family() != GameFamily::U || u.flags().cut_current {
        return Err(Error::Precondition("disjointify_choose takes a U game that cuts the start set".into()));
    }
    if !u.rounds().is_multiple_of(2) {
        return Err(Error::Precondition("the U game must have an even number of rounds".into()));
    }
    let g = GameInstance::new(
        u.structure().clone(),
        GameParams {
            family: GameFamily::GIdeal,
            start: u.start(),
            rounds: u.rounds() / 2,
            width,
            variant: u.variant(),
            flags: Flags { maximal: true, cut_current },
        },
    )?;
    let needed = u_width(&g, g.start().mask());
    if u.width().limit().is_some_and(|w| w < needed) {
        return Err(Error::Precondition(format!("the U game needs width ≥ {needed}")));
    }
    Ok(DisjointifiedChoose { u: u.clone(), g, sigma })
}

struct ChooseAux {
    moves: Vec<Move>,
    pairs: Vec<(Vec<Mask>, usize, Option<usize>)>,
    /// G rounds answered while the U-run was alive.
    covered: usize,
}

impl DisjointifiedChoose {
    /// Replays the U-run for the G-rounds in `rounds`, plus σ's answer to the
    /// disjointification of `pending` if given.
    fn aux(&self, rounds: &[(Vec<Mask>, usize)], pending: Option<&[Mask]>) -> Result<(ChooseAux, Option<usize>)> {
        let x = self.g.start().mask();
        let mut aux = ChooseAux { moves: Vec::new(), pairs: Vec::new(), covered: 0 };
        let ask = |aux: &mut ChooseAux, w: &[Mask], finish: bool| -> Result<Option<usize>> {
            let (disjoint, split, _) = expand(x, w);
            if aux_finished(&self.u, &aux.moves)? {
                return Ok(None);
            }
            aux.moves.push(Move::Partition(disjoint));
            let Move::Pick(i) = aux_move(&self.u, self.sigma.as_ref(), &aux.moves)? else { unreachable!() };
            aux.moves.push(Move::Pick(i));
            let mut j = None;
            if finish && !aux_finished(&self.u, &aux.moves)? {
                aux.moves.push(Move::Partition(split.to_vec()));
                let Move::Pick(jj) = aux_move(&self.u, self.sigma.as_ref(), &aux.moves)? else { unreachable!() };
                aux.moves.push(Move::Pick(jj));
                j = Some(jj);
            }
            aux.pairs.push((w.to_vec(), i, j));
            aux.covered += 1;
            Ok(Some(i))
        };
        for (w, _) in rounds {
            ask(&mut aux, w, true)?;
        }
        let answer = match pending {
            Some(w) => ask(&mut aux, w, false)?.map(|i| expand(x, w).2[i]),
            None => None,
        };
        Ok((aux, answer))
    }

    fn g_rounds(history: &[Move]) -> Vec<(Vec<Mask>, usize)> {
        super::rounds_of(history)
            .into_iter()
            .filter_map(|(cut, i)| cut.pieces().map(|p| (p.to_vec(), i)))
            .collect()
    }
}

impl Strategy for DisjointifiedChoose {
    fn name(&self) -> String {
        format!("disjointify_choose({})", self.sigma.name())
    }

    fn decide(&self, game: &GameInstance, history: &[Move], state: &GameState) -> Result<Move> {
        let Some(Move::Partition(w)) = &state.pending else {
            return Err(Error::strategy(state, "no I-partition to answer"));
        };
        let (_, answer) = self.aux(&Self::g_rounds(history), Some(w))?;
        match answer {
            Some(i) => Ok(Move::Pick(i)),
            // σ already lost the U-run; keep playing legally
            None => crate::engine::GreedyPositivity.decide(game, history, state),
        }
    }
}

impl Simulation for DisjointifiedChoose {
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
        let (input_run, u_state) = RunRecord::replay(&self.u, &aux.moves)?;
        let x = self.g.start().mask();
        let g_core = rounds[..aux.covered].iter().fold(x, |acc, (w, i)| acc.intersect(w[*i]));
        let lhs = pair_trace(x, &aux.pairs);
        Ok(TransformCertificate {
            kind: "disjointify_choose".into(),
            input_run,
            output_run,
            relation: RelationRecord {
                kind: "superset".into(),
                statement: format!(
                    "G core {g_core} after {} rounds ⊇ ⋂(Y∩⋃W) = {lhs}; U core {}",
                    aux.covered, u_state.core
                ),
                holds: lhs.is_subset(g_core),
            },
        })
    }
}
