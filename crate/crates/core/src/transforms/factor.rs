//! Simulating one wide antichain move by `β` narrow ones.
//!
//! The pieces `x_r` of an antichain with at most `νᵝ` members are indexed by
//! `r < νᵝ`, read as `β` base-`ν` digits with digit 0 most significant.
//! Antichain `i` groups the pieces by digit `i`; the meet of the chosen
//! groups recovers a single piece.

use serde::Serialize;

use super::{
    aux_finished, aux_move, soundness, RelationRecord, RunRecord, Simulation, StrategyRef, TransformCertificate,
};
use crate::engine::{
    Flags, GameFamily, GameInstance, GameParams, GameState, GreedyPositivity, Move, Role, Strategy, Structure,
    Transcript, Width,
};
use crate::error::{Error, Result};
use crate::structures::{FiniteBooleanAlgebra, Mask};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Factorization {
    pub nu: usize,
    pub beta: usize,
    pub below: Mask,
    pub pieces: Vec<Mask>,
    /// `levels[i][j]` is the join of the pieces whose digit `i` is `j`.
    pub levels: Vec<Vec<Mask>>,
}

pub fn factor_antichain(b: &FiniteBooleanAlgebra, x: Mask, w: &[Mask], nu: usize, beta: usize) -> Result<Factorization> {
    if beta == 0 {
        return Err(Error::Precondition("β ≥ 1 required".into()));
    }
    if nu < 2 {
        return Err(Error::Precondition("ν ≥ 2 required".into()));
    }
    let capacity = (nu as u128).checked_pow(beta as u32).unwrap_or(u128::MAX);
    if w.len() as u128 > capacity {
        return Err(Error::Precondition(format!("{} pieces do not fit {beta} base-{nu} digits", w.len())));
    }
    if !b.is_maximal_antichain_below(x, w) {
        return Err(Error::Precondition(format!("not a maximal antichain below {x}")));
    }
    let mut levels = vec![vec![Mask::EMPTY; nu]; beta];
    for (r, piece) in w.iter().enumerate() {
        for (i, level) in levels.iter_mut().enumerate() {
            let d = digit(r, i, nu, beta);
            level[d] = level[d].union(*piece);
        }
    }
    Ok(Factorization { nu, beta, below: x, pieces: w.to_vec(), levels })
}

fn digit(r: usize, i: usize, nu: usize, beta: usize) -> usize {
    (r / nu.pow((beta - 1 - i) as u32)) % nu
}

impl Factorization {
    /// Antichain `i`: the nonzero groups in digit order.
    pub fn antichain(&self, i: usize) -> Vec<Mask> {
        self.levels[i].iter().copied().filter(|m| !m.is_empty()).collect()
    }

    /// The digit of the `k`-th piece of [`Self::antichain`]`(i)`.
    pub fn digit_of(&self, i: usize, k: usize) -> Option<usize> {
        self.levels[i].iter().enumerate().filter(|(_, m)| !m.is_empty()).nth(k).map(|(j, _)| j)
    }

    /// The piece index `r` spelled by `digits`, if it is in range.
    pub fn recover(&self, digits: &[usize]) -> Option<usize> {
        let r = digits.iter().fold(0usize, |acc, d| acc * self.nu + d);
        (r < self.pieces.len()).then_some(r)
    }

    /// Meet of the groups named by `digits`.
    pub fn meet(&self, digits: &[usize]) -> Mask {
        digits.iter().enumerate().fold(self.below, |acc, (i, &d)| acc.intersect(self.levels[i][d]))
    }

    /// Checks maximality of every factor, `x_r = ⋀ w_i^{r(i)}` for every `r`,
    /// and that distinct codes have incompatible meets.
    pub fn check_identities(&self, b: &FiniteBooleanAlgebra) -> Result<()> {
        for i in 0..self.beta {
            if !b.is_maximal_antichain_below(self.below, &self.antichain(i)) {
                return Err(soundness(format!("factor {i} is not a maximal antichain")));
            }
        }
        let codes: Vec<Vec<usize>> =
            (0..self.pieces.len()).map(|r| (0..self.beta).map(|i| digit(r, i, self.nu, self.beta)).collect()).collect();
        for (r, code) in codes.iter().enumerate() {
            if self.meet(code) != self.pieces[r] {
                return Err(soundness(format!("piece {r} is not recovered by its code")));
            }
            for other in &codes[r + 1..] {
                if b.compatible(self.meet(code), self.meet(other)) {
                    return Err(soundness("two codes have compatible meets"));
                }
            }
        }
        Ok(())
    }
}

fn algebra_of(g: &GameInstance) -> Result<FiniteBooleanAlgebra> {
    match g.structure() {
        Structure::Algebra(b) if g.family() == GameFamily::GPoset && !g.flags().cut_current => Ok(*b),
        _ => Err(Error::Precondition("block transfer takes G_poset games on an algebra that cut the start".into())),
    }
}

fn block_game(g: &GameInstance, rounds: usize, width: Width) -> Result<GameInstance> {
    GameInstance::new(
        g.structure().clone(),
        GameParams {
            family: GameFamily::GPoset,
            start: g.start(),
            rounds,
            width,
            variant: g.variant(),
            flags: Flags { maximal: true, cut_current: false },
        },
    )
}

fn check_width(width: Width, nu: usize, beta: usize) -> Result<()> {
    match width {
        Width::Bounded(k) if (k as u128) <= (nu as u128).saturating_pow(beta as u32) => Ok(()),
        _ => Err(Error::Precondition(format!("the wide game needs a width of at most {nu}^{beta}"))),
    }
}

/// Cut strategy for `G_ν(X, B, n·β)` from a Cut strategy for `G_{νᵝ}(X, B, n)`.
#[derive(Clone)]
pub struct TransferredCut {
    big: GameInstance,
    small: GameInstance,
    sigma: StrategyRef,
    algebra: FiniteBooleanAlgebra,
    nu: usize,
    beta: usize,
}

pub fn transfer_cut_big_to_small(big: &GameInstance, sigma: StrategyRef, nu: usize, beta: usize) -> Result<TransferredCut> {
    let algebra = algebra_of(big)?;
    check_width(big.width(), nu, beta)?;
    if beta == 0 {
        return Err(Error::Precondition("β ≥ 1 required".into()));
    }
    let small = block_game(big, big.rounds() * beta, Width::Bounded(nu))?;
    Ok(TransferredCut { big: big.clone(), small, sigma, algebra, nu, beta })
}

struct CutBlocks {
    big_moves: Vec<Move>,
    /// Factorizations of σ's moves, one per started block.
    factors: Vec<Factorization>,
    /// Completed blocks whose code named a piece.
    recovered: usize,
    note: Option<String>,
}

impl TransferredCut {
    fn aux(&self, history: &[Move], need_current: bool) -> Result<CutBlocks> {
        let picks: Vec<usize> = history.iter().filter_map(|m| if let Move::Pick(i) = m { Some(*i) } else { None }).collect();
        let mut out = CutBlocks { big_moves: Vec::new(), factors: Vec::new(), recovered: 0, note: None };
        let x = self.big.start().mask();
        let started = picks.len().div_ceil(self.beta) + usize::from(need_current && picks.len().is_multiple_of(self.beta));
        for block in 0..started {
            if aux_finished(&self.big, &out.big_moves)? {
                break;
            }
            let Move::Partition(w) = aux_move(&self.big, self.sigma.as_ref(), &out.big_moves)? else {
                return Err(soundness("wide strategy did not play an antichain"));
            };
            let f = factor_antichain(&self.algebra, x, &w, self.nu, self.beta)
                .map_err(|e| soundness(format!("cannot factor σ's move: {e}")))?;
            out.factors.push(f);
            let f = out.factors.last().expect("just pushed");
            let block_picks = picks.get(block * self.beta..(block + 1) * self.beta);
            if let Some(ps) = block_picks {
                let digits: Option<Vec<usize>> = ps.iter().enumerate().map(|(i, &k)| f.digit_of(i, k)).collect();
                match digits.and_then(|d| f.recover(&d)) {
                    Some(r) => {
                        out.big_moves.push(Move::Partition(w));
                        out.big_moves.push(Move::Pick(r));
                        out.recovered += 1;
                    }
                    None => {
                        out.note = Some(format!("block {block}: Choose's digits name no piece; forfeit"));
                        break;
                    }
                }
            }
        }
        Ok(out)
    }
}

impl Strategy for TransferredCut {
    fn name(&self) -> String {
        format!("transfer_cut({})", self.sigma.name())
    }

    fn decide(&self, _: &GameInstance, history: &[Move], state: &GameState) -> Result<Move> {
        let t = state.round;
        let aux = self.aux(history, true)?;
        let f = aux
            .factors
            .get(t / self.beta)
            .ok_or_else(|| soundness(format!("no wide move for block {}", t / self.beta)))?;
        Ok(Move::Partition(f.antichain(t % self.beta)))
    }
}

impl Simulation for TransferredCut {
    fn output_game(&self) -> &GameInstance {
        &self.small
    }

    fn owner(&self) -> Role {
        Role::Cut
    }

    fn certify(&self, moves: &[Move]) -> Result<TransformCertificate> {
        let output_run = Transcript::from_moves(&self.small, moves)?;
        let aux = self.aux(moves, false)?;
        let (input_run, _) = RunRecord::replay(&self.big, &aux.big_moves)?;
        let small_cores = core_prefixes(&self.small, moves)?;
        let big_cores = core_prefixes(&self.big, &aux.big_moves)?;
        let mut holds = true;
        for k in 0..=aux.recovered {
            holds &= small_cores.get(k * self.beta) == big_cores.get(k);
        }
        let final_small = *small_cores.last().expect("initial core");
        if aux.recovered * self.beta < small_cores.len() - 1 {
            // the play left the recovered blocks: the small core must have died
            holds &= final_small.is_empty();
        }
        Ok(TransformCertificate {
            kind: "transfer_cut_big_to_small".into(),
            input_run: input_run.with_note(aux.note),
            output_run,
            relation: RelationRecord {
                kind: "equal_at_blocks".into(),
                statement: format!(
                    "cores agree at {} block boundaries; final narrow core {final_small}",
                    aux.recovered + 1
                ),
                holds,
            },
        })
    }
}

/// Core after each completed round of a cut-and-choose run.
fn core_prefixes(g: &GameInstance, moves: &[Move]) -> Result<Vec<Mask>> {
    let mut s = g.initial_state();
    let mut out = vec![s.core.mask()];
    for mv in moves {
        s = g.apply_move(&s, mv)?;
        if matches!(mv, Move::Pick(_)) {
            out.push(s.core.mask());
        }
    }
    Ok(out)
}

/// Choose strategy for `G_{νᵝ}(X, B, n)` from a Choose strategy for
/// `G_ν(X, B, n·β)`.
#[derive(Clone)]
pub struct TransferredChoose {
    small: GameInstance,
    big: GameInstance,
    tau: StrategyRef,
    algebra: FiniteBooleanAlgebra,
    nu: usize,
    beta: usize,
}

/// `small` is the narrow game; the wide game has `small.rounds() / β`
/// rounds and the given width.
pub fn transfer_choose_small_to_big(small: &GameInstance, tau: StrategyRef, beta: usize, width: Width) -> Result<TransferredChoose> {
    let algebra = algebra_of(small)?;
    let Width::Bounded(nu) = small.width() else {
        return Err(Error::Precondition("the narrow game needs a bounded width".into()));
    };
    if beta == 0 || !small.rounds().is_multiple_of(beta) {
        return Err(Error::Precondition("the narrow length must be a multiple of β ≥ 1".into()));
    }
    check_width(width, nu, beta)?;
    let big = block_game(small, small.rounds() / beta, width)?;
    Ok(TransferredChoose { small: small.clone(), big, tau, algebra, nu, beta })
}

impl TransferredChoose {
    /// Feeds the wide moves to τ block by block. Returns the narrow run, the
    /// number of blocks τ completed, and τ's recovered answer to `pending`.
    fn aux(&self, rounds: &[Vec<Mask>], pending: Option<&[Mask]>) -> Result<(Vec<Move>, usize, Option<usize>)> {
        let x = self.big.start().mask();
        let mut moves = Vec::new();
        let mut done = 0;
        let feed = |moves: &mut Vec<Move>, w: &[Mask]| -> Result<Option<usize>> {
            let f = factor_antichain(&self.algebra, x, w, self.nu, self.beta)?;
            let mut digits = Vec::with_capacity(self.beta);
            for i in 0..self.beta {
                if aux_finished(&self.small, moves)? {
                    return Ok(None);
                }
                moves.push(Move::Partition(f.antichain(i)));
                let Move::Pick(k) = aux_move(&self.small, self.tau.as_ref(), moves)? else { unreachable!() };
                moves.push(Move::Pick(k));
                digits.push(f.digit_of(i, k).expect("pick in range"));
            }
            Ok(f.recover(&digits))
        };
        for w in rounds {
            if feed(&mut moves, w)?.is_none() {
                return Ok((moves, done, None));
            }
            done += 1;
        }
        let answer = match pending {
            Some(w) => feed(&mut moves, w)?,
            None => None,
        };
        Ok((moves, done, answer))
    }

    fn wide_rounds(history: &[Move]) -> Vec<Vec<Mask>> {
        super::rounds_of(history).into_iter().filter_map(|(cut, _)| cut.pieces().map(<[Mask]>::to_vec)).collect()
    }
}

impl Strategy for TransferredChoose {
    fn name(&self) -> String {
        format!("transfer_choose({})", self.tau.name())
    }

    fn decide(&self, game: &GameInstance, history: &[Move], state: &GameState) -> Result<Move> {
        let Some(Move::Partition(w)) = &state.pending else {
            return Err(Error::strategy(state, "no antichain to answer"));
        };
        match self.aux(&Self::wide_rounds(history), Some(w))?.2 {
            Some(r) => Ok(Move::Pick(r)),
            None => GreedyPositivity.decide(game, history, state),
        }
    }
}

impl Simulation for TransferredChoose {
    fn output_game(&self) -> &GameInstance {
        &self.big
    }

    fn owner(&self) -> Role {
        Role::Choose
    }

    fn certify(&self, moves: &[Move]) -> Result<TransformCertificate> {
        let output_run = Transcript::from_moves(&self.big, moves)?;
        let (small_moves, done, _) = self.aux(&Self::wide_rounds(moves), None)?;
        let (input_run, _) = RunRecord::replay(&self.small, &small_moves)?;
        let big_cores = core_prefixes(&self.big, moves)?;
        let small_cores = core_prefixes(&self.small, &small_moves)?;
        let holds = (0..=done).all(|k| big_cores.get(k) == small_cores.get(k * self.beta));
        Ok(TransformCertificate {
            kind: "transfer_choose_small_to_big".into(),
            input_run,
            output_run,
            relation: RelationRecord {
                kind: "equal_at_blocks".into(),
                statement: format!("cores agree at {} block boundaries", done + 1),
                holds,
            },
        })
    }
}
