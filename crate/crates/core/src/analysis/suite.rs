//! Corpus-wide checks: determinacy, degeneracy, transform soundness,
//! the maximality ablation, convention invariance and monotone transfer.
//!
//! Every check maps over instances in parallel and collects results in
//! instance order, so reports do not depend on the thread count.

use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use super::ablation::maximality_ablation;
use super::audit::equivalence_audit;
use super::corpus::{check_load, generate_corpus, CorpusInstance, LOAD_LIMIT};
use crate::engine::{verify_winning_strategy, GameFamily, GameInstance, Role, Start, Structure, Width};
use crate::error::{Error, Result};
use crate::solver::{refute, solve_with, OnDemand, Refutation, SolveOptions};
use crate::structures::{FamilySpec, GroundSet, Mask, MonotoneFamily};
use crate::transforms::{
    certify_playouts, choose_to_nonempty, cut_strategy_to_witness, disjointify_choose, disjointify_cut, empty_to_cut,
    nonempty_to_choose, restrict_choose, transfer_choose_small_to_big, transfer_cut_big_to_small, witness_to_empty,
    Simulation, StrategyRef,
};

#[derive(Clone, Debug)]
pub struct SuiteOptions {
    pub solve: SolveOptions,
    /// Bound on complete plays explored when verifying one strategy.
    pub node_budget: usize,
    /// Bound on adversary playouts certified per transform.
    pub max_plays: usize,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions { solve: SolveOptions::default(), node_budget: 2_000_000, max_plays: 200_000 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DeterminacyRow {
    pub id: usize,
    pub winner: Role,
    /// Complete plays checked against the extracted strategy.
    pub plays: usize,
    pub strategy_verified: bool,
    pub loser_refuted: bool,
}

pub fn determinacy(inst: &CorpusInstance, opts: &SuiteOptions) -> Result<DeterminacyRow> {
    let g = &inst.game;
    let solved = solve_with(g, &opts.solve)?;
    let v = verify_winning_strategy(g, &solved.strategy, solved.winner, opts.node_budget)?;
    let (a, b) = g.family().roles();
    let loser = if solved.winner == a { b } else { a };
    let refuted = matches!(refute(g, loser, &opts.solve, opts.node_budget)?, Refutation::NoStrategy { opponent, .. } if opponent == solved.winner);
    let plays = match v {
        crate::engine::Verification::Wins { plays } => plays,
        crate::engine::Verification::Counterexample(_) => 0,
    };
    Ok(DeterminacyRow { id: inst.id, winner: solved.winner, plays, strategy_verified: v.is_win(), loser_refuted: refuted })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegeneracyRow {
    pub id: usize,
    pub winner: Role,
    /// The winner finite games must have: Choose in G games, Nonempty in
    /// Banach–Mazur games. `None` for U games, which have no such law.
    pub expected: Option<Role>,
    pub audit_rows: usize,
    pub audit_disagreements: usize,
}

impl DegeneracyRow {
    pub fn passed(&self) -> bool {
        self.expected.is_none_or(|e| e == self.winner) && self.audit_disagreements == 0
    }
}

pub fn degeneracy(inst: &CorpusInstance, opts: &SuiteOptions) -> Result<DegeneracyRow> {
    let g = &inst.game;
    let winner = solve_with(g, &opts.solve)?.winner;
    let expected = match g.family() {
        GameFamily::GIdeal | GameFamily::GPoset if g.flags().maximal => Some(Role::Choose),
        GameFamily::BmIdeal | GameFamily::BmPoset => Some(Role::Nonempty),
        _ => None,
    };
    let audit = equivalence_audit(g, &opts.solve)?;
    Ok(DegeneracyRow {
        id: inst.id,
        winner,
        expected,
        audit_rows: audit.rows.iter().filter(|r| r.applicable()).count(),
        audit_disagreements: audit.disagreements(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum TransformStatus {
    Checked {
        plays: usize,
        valid: usize,
        /// The input strategy wins its game, so the output must win too.
        input_wins: bool,
        output_always_won: bool,
    },
    /// A structural check rather than a playout search.
    Agreement { agrees: bool },
    NotApplicable { reason: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TransformRow {
    pub id: usize,
    pub transform: String,
    #[serde(flatten)]
    pub status: TransformStatus,
}

impl TransformRow {
    pub fn passed(&self) -> bool {
        match &self.status {
            TransformStatus::Checked { plays, valid, input_wins, output_always_won } => {
                plays == valid && (!input_wins || *output_always_won)
            }
            TransformStatus::Agreement { agrees } => *agrees,
            TransformStatus::NotApplicable { .. } => true,
        }
    }

    pub fn applicable(&self) -> bool {
        !matches!(self.status, TransformStatus::NotApplicable { .. })
    }
}

fn winner(g: &GameInstance, opts: &SuiteOptions) -> Result<Role> {
    Ok(solve_with(g, &opts.solve)?.winner)
}

fn solver_for(g: &GameInstance, role: Role, opts: &SuiteOptions) -> Result<StrategyRef> {
    Ok(Arc::new(solve_with(g, &opts.solve)?.strategy.for_role(role)))
}

fn playouts(sim: &dyn Simulation, input_wins: bool, opts: &SuiteOptions) -> Result<TransformStatus> {
    let r = certify_playouts(sim, opts.max_plays)?;
    Ok(TransformStatus::Checked { plays: r.plays, valid: r.valid, input_wins, output_always_won: r.owner_always_won })
}

/// Runs `f`, turning a precondition failure into a not-applicable row.
fn row(id: usize, name: &str, f: impl FnOnce() -> Result<TransformStatus>) -> Result<TransformRow> {
    let status = match f() {
        Ok(s) => s,
        Err(Error::Precondition(reason)) => TransformStatus::NotApplicable { reason },
        Err(e) => return Err(e),
    };
    Ok(TransformRow { id, transform: name.into(), status })
}

/// Applies every transform whose input game fits the instance, feeding it
/// solver strategies, and certifies every adversary playout.
pub fn transform_checks(inst: &CorpusInstance, opts: &SuiteOptions) -> Result<Vec<TransformRow>> {
    let g = &inst.game;
    let id = inst.id;
    let mut rows = Vec::new();
    match (g.family(), g.structure()) {
        (GameFamily::U, Structure::Sets(_)) => {
            rows.push(row(id, "disjointify_choose", || {
                let u2 = g.with_params(|p| {
                    p.rounds *= 2;
                    p.flags.cut_current = false;
                })?;
                let sigma = solver_for(&u2, Role::Choose, opts)?;
                let sim = disjointify_choose(&u2, sigma, g.width(), g.flags().cut_current)?;
                playouts(&sim, winner(&u2, opts)? == Role::Choose, opts)
            })?);
            rows.push(row(id, "disjointify_cut", || {
                let gi = g.with_params(|p| {
                    p.family = GameFamily::GIdeal;
                    p.flags.cut_current = false;
                })?;
                let sim = disjointify_cut(&gi, solver_for(&gi, Role::Cut, opts)?)?;
                playouts(&sim, false, opts)
            })?);
        }
        (GameFamily::GIdeal, Structure::Sets(_)) => {
            rows.push(row(id, "nonempty_to_choose", || {
                let sim = nonempty_to_choose(g, Arc::new(OnDemand::new(Role::Nonempty, opts.solve.clone())))?;
                let input_wins = winner(sim.auxiliary_game(), opts)? == Role::Nonempty;
                playouts(&sim, input_wins, opts)
            })?);
            rows.push(row(id, "disjointify_cut", || {
                let gi = g.with_params(|p| p.flags.cut_current = false)?;
                let sim = disjointify_cut(&gi, solver_for(&gi, Role::Cut, opts)?)?;
                playouts(&sim, false, opts)
            })?);
            rows.push(row(id, "cut_strategy_to_witness", || {
                let sigma = solver_for(g, Role::Cut, opts)?;
                Ok(TransformStatus::Agreement { agrees: cut_strategy_to_witness(g, sigma.as_ref())?.agrees() })
            })?);
        }
        (GameFamily::GPoset, Structure::Algebra(_)) => {
            let small = g.with_params(|p| p.flags.cut_current = false)?;
            rows.push(row(id, "transfer_choose", || {
                let Width::Bounded(nu) = g.width() else {
                    return Err(Error::Precondition("the narrow game needs a bounded width".into()));
                };
                let beta = if g.rounds() >= 2 { g.rounds() } else { 1 };
                let wide = Width::Bounded(nu.pow(beta as u32));
                let sim = transfer_choose_small_to_big(&small, solver_for(&small, Role::Choose, opts)?, beta, wide)?;
                playouts(&sim, winner(&small, opts)? == Role::Choose, opts)
            })?);
            rows.push(row(id, "transfer_cut", || {
                let Width::Bounded(w) = g.width() else {
                    return Err(Error::Precondition("the wide game needs a bounded width".into()));
                };
                let beta = (usize::BITS - (w - 1).leading_zeros()) as usize;
                let sim = transfer_cut_big_to_small(&small, solver_for(&small, Role::Cut, opts)?, 2, beta)?;
                playouts(&sim, false, opts)
            })?);
        }
        (GameFamily::BmIdeal, Structure::Sets(_)) => {
            rows.push(row(id, "choose_to_nonempty", || {
                let sim = choose_to_nonempty(g, Arc::new(OnDemand::new(Role::Choose, opts.solve.clone())))?;
                let s = g.structure();
                let mut input_wins = true;
                for x in g.start().mask().subsets().filter(|x| s.is_positive(*x)) {
                    input_wins &= winner(&sim.auxiliary_game(x)?, opts)? == Role::Choose;
                }
                playouts(&sim, input_wins, opts)
            })?);
            rows.push(row(id, "empty_to_cut", || {
                let sim = empty_to_cut(g, solver_for(g, Role::Empty, opts)?)?;
                playouts(&sim, false, opts)
            })?);
            rows.push(row(id, "witness_to_empty", || {
                let carrier = super::distributivity::carrier_game(g.structure(), g.start(), g.rounds(), Width::Unbounded, true)?;
                let cuts = carrier.legal_moves(&carrier.initial_state())?;
                let finest = cuts.last().and_then(|m| m.pieces()).expect("the start has a cut").to_vec();
                let sim = witness_to_empty(g, vec![finest; g.rounds()])?;
                playouts(&sim, false, opts)
            })?);
        }
        _ => rows.push(TransformRow {
            id,
            transform: "none".into(),
            status: TransformStatus::NotApplicable { reason: "no transform takes games on this structure".into() },
        }),
    }
    Ok(rows)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum AblationRow {
    Checked { id: usize, forcing_verified: bool, restored_winner: Role },
    NotEligible { id: usize, reason: String },
}

impl AblationRow {
    pub fn passed(&self) -> bool {
        match self {
            AblationRow::Checked { forcing_verified, restored_winner, .. } => *forcing_verified && *restored_winner == Role::Choose,
            AblationRow::NotEligible { .. } => true,
        }
    }
}

pub fn ablation(inst: &CorpusInstance, opts: &SuiteOptions) -> Result<AblationRow> {
    match maximality_ablation(&inst.game, opts.node_budget, &opts.solve) {
        Ok(r) => Ok(AblationRow::Checked { id: inst.id, forcing_verified: r.forcing_verified, restored_winner: r.restored_winner }),
        Err(Error::Precondition(reason)) => Ok(AblationRow::NotEligible { id: inst.id, reason }),
        Err(e) => Err(e),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConventionRow {
    pub id: usize,
    pub cut_current: Role,
    pub cut_start: Role,
}

/// Winners with Cut splitting the current core and with Cut splitting the
/// start; `None` for Banach–Mazur games, which have no such convention.
pub fn convention(inst: &CorpusInstance, opts: &SuiteOptions) -> Result<Option<ConventionRow>> {
    let g = &inst.game;
    if matches!(g.family(), GameFamily::BmIdeal | GameFamily::BmPoset) {
        return Ok(None);
    }
    let w = |c: bool| -> Result<Role> { winner(&g.with_params(|p| p.flags.cut_current = c)?, opts) };
    Ok(Some(ConventionRow { id: inst.id, cut_current: w(true)?, cut_start: w(false)? }))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TransferRow {
    pub id: usize,
    pub small: String,
    pub big: String,
    pub embedding: Vec<usize>,
    pub verified: bool,
}

/// The same family on `extra` more points, when the family can be stated
/// there: the trace on the original points is the original family.
fn enlarge(f: &MonotoneFamily, extra: usize) -> Result<(MonotoneFamily, Vec<usize>)> {
    let m = f.ground().size();
    let big = GroundSet::new(m + extra)?;
    let embedding: Vec<usize> = (0..m).map(|i| i + i.min(extra)).collect();
    let push = |x: &Mask| Mask::from_points(x.points().map(|p| embedding[p]));
    let spec = match f.spec() {
        FamilySpec::SizeAtMost { k } => FamilySpec::SizeAtMost { k: *k },
        FamilySpec::GeneratedBy { masks } => FamilySpec::GeneratedBy { masks: masks.iter().map(push).collect() },
        FamilySpec::Explicit { masks } => FamilySpec::Explicit { masks: masks.iter().map(push).collect() },
    };
    Ok((MonotoneFamily::new(big, spec)?, embedding))
}

/// The game `small` on a ground set with `extra` more points, and the
/// embedding of the old points.
pub fn enlarged_game(small: &GameInstance, extra: usize) -> Result<(GameInstance, Vec<usize>)> {
    let Structure::Sets(f) = small.structure() else {
        return Err(Error::Precondition("monotone transfer needs a set game".into()));
    };
    let (fb, embedding) = enlarge(f, extra)?;
    let big = GameInstance::new(
        Structure::Sets(fb.clone()),
        crate::engine::GameParams { start: Start::Set(fb.ground().full()), ..small.params() },
    )?;
    Ok((big, embedding))
}

/// Embeds a U-game Choose wins into a ground set with `extra` more points
/// and verifies the restricted Choose strategy there.
pub fn monotone_transfer(inst: &CorpusInstance, extra: usize, opts: &SuiteOptions) -> Result<TransferRow> {
    let small = &inst.game;
    let (big, embedding) = enlarged_game(small, extra)?;
    let sigma = solver_for(small, Role::Choose, opts)?;
    let r = restrict_choose(small, sigma, &big, embedding.clone())?;
    let verified = verify_winning_strategy(&big, &r, Role::Choose, opts.node_budget)?.is_win();
    Ok(TransferRow { id: inst.id, small: small.summary(), big: big.summary(), embedding, verified })
}

/// The first `count` U-instances of the seeded corpus that Choose wins and
/// whose enlargement by `extra` points stays within [`LOAD_LIMIT`], so the
/// transferred strategy can be checked exhaustively. Searches past the
/// default corpus size if needed.
pub fn choose_winning_u(seed: u64, count: usize, extra: usize, opts: &SuiteOptions) -> Result<Vec<CorpusInstance>> {
    let mut found = Vec::new();
    let mut size = 0;
    while found.len() < count {
        size += 50;
        if size > 5_000 {
            return Err(Error::Precondition(format!("fewer than {count} Choose-winning U instances")));
        }
        found.clear();
        for inst in generate_corpus(seed, size)? {
            if found.len() < count
                && inst.game.family() == GameFamily::U
                && check_load(&enlarged_game(&inst.game, extra)?.0)? <= LOAD_LIMIT
                && winner(&inst.game, opts)? == Role::Choose
            {
                found.push(inst);
            }
        }
    }
    Ok(found)
}

/// Maps `f` over the instances in parallel, keeping instance order.
pub fn over<T: Send>(instances: &[CorpusInstance], f: impl Fn(&CorpusInstance) -> Result<T> + Sync) -> Result<Vec<T>> {
    instances.par_iter().map(&f).collect()
}

pub const SUITE_SCHEMA_VERSION: u32 = 1;

/// Every corpus-wide check on one seeded corpus.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub schema_version: u32,
    pub seed: u64,
    pub size: usize,
    pub determinacy: Vec<DeterminacyRow>,
    pub degeneracy: Vec<DegeneracyRow>,
    pub transforms: Vec<TransformRow>,
    pub ablation: Vec<AblationRow>,
    pub convention: Vec<ConventionRow>,
}

impl SuiteReport {
    /// Failed checks, as `(section, instance id)`.
    pub fn failures(&self) -> Vec<(&'static str, usize)> {
        let mut out = Vec::new();
        out.extend(self.determinacy.iter().filter(|r| !(r.strategy_verified && r.loser_refuted)).map(|r| ("determinacy", r.id)));
        out.extend(self.degeneracy.iter().filter(|r| !r.passed()).map(|r| ("degeneracy", r.id)));
        out.extend(self.transforms.iter().filter(|r| !r.passed()).map(|r| ("transforms", r.id)));
        out.extend(self.ablation.iter().filter(|r| !r.passed()).map(|r| match r {
            AblationRow::Checked { id, .. } | AblationRow::NotEligible { id, .. } => ("ablation", *id),
        }));
        out.extend(self.convention.iter().filter(|r| r.cut_current != r.cut_start).map(|r| ("convention", r.id)));
        out
    }

    pub fn render(&self) -> String {
        let count = |ok: usize, all: usize| format!("{ok}/{all}");
        let checked: Vec<&TransformRow> = self.transforms.iter().filter(|r| r.applicable()).collect();
        let eligible = self.ablation.iter().filter(|r| matches!(r, AblationRow::Checked { .. })).count();
        let mut out = format!("suite: seed {}, {} instances\n", self.seed, self.size);
        let lines = [
            ("determinacy", count(self.determinacy.iter().filter(|r| r.strategy_verified && r.loser_refuted).count(), self.determinacy.len())),
            ("degeneracy", count(self.degeneracy.iter().filter(|r| r.passed()).count(), self.degeneracy.len())),
            ("transforms", count(checked.iter().filter(|r| r.passed()).count(), checked.len())),
            ("ablation", count(self.ablation.iter().filter(|r| r.passed() && matches!(r, AblationRow::Checked { .. })).count(), eligible)),
            ("convention", count(self.convention.iter().filter(|r| r.cut_current == r.cut_start).count(), self.convention.len())),
        ];
        for (name, v) in lines {
            out.push_str(&format!("  {name:<12} {v:>9}\n"));
        }
        let failures = self.failures();
        if failures.is_empty() {
            out.push_str("all checks passed\n");
        } else {
            for (section, id) in failures {
                out.push_str(&format!("  FAILED {section} #{id}\n"));
            }
        }
        out
    }
}

/// Runs every check over `generate_corpus(seed, size)`.
pub fn run_suite(seed: u64, size: usize, opts: &SuiteOptions) -> Result<SuiteReport> {
    let corpus = generate_corpus(seed, size)?;
    Ok(SuiteReport {
        schema_version: SUITE_SCHEMA_VERSION,
        seed,
        size,
        determinacy: over(&corpus, |i| determinacy(i, opts))?,
        degeneracy: over(&corpus, |i| degeneracy(i, opts))?,
        transforms: over(&corpus, |i| transform_checks(i, opts))?.into_iter().flatten().collect(),
        ablation: over(&corpus, |i| ablation(i, opts))?,
        convention: over(&corpus, |i| convention(i, opts))?.into_iter().flatten().collect(),
    })
}

