//! Two-sided audits of the characterizations relating the game families.
//!
//! Each row states a biconditional and computes both sides separately: by
//! the solver, by the distributivity checker, or by a closed-form count.

use std::collections::HashMap;

use serde::Serialize;

use super::distributivity::{check_distributivity, positive_starts, precipitous_analog, DistributivityVariant};
use crate::engine::{Flags, GameFamily, GameInstance, GameParams, Role, Start, Structure, Variant, Width};
use crate::error::Result;
use crate::solver::{solve_with, SolveOptions};
use crate::structures::{FiniteBooleanAlgebra, Ideal, Mask, MonotoneFamily};

pub const REPORT_SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Solver,
    Checker,
    Formula,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub value: bool,
    pub provenance: Provenance,
}

impl Verdict {
    fn solver(value: bool) -> Self {
        Verdict { value, provenance: Provenance::Solver }
    }

    fn checker(value: bool) -> Self {
        Verdict { value, provenance: Provenance::Checker }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AuditRow {
    pub id: String,
    pub statement: String,
    /// `None` on rows with no finite content.
    pub left: Option<Verdict>,
    pub right: Option<Verdict>,
    pub agree: bool,
}

impl AuditRow {
    fn new(id: &str, statement: impl Into<String>, left: Verdict, right: Verdict) -> Self {
        AuditRow { id: id.into(), statement: statement.into(), left: Some(left), right: Some(right), agree: left.value == right.value }
    }

    fn not_applicable(id: &str, statement: &str) -> Self {
        AuditRow { id: id.into(), statement: statement.into(), left: None, right: None, agree: true }
    }

    pub fn applicable(&self) -> bool {
        self.left.is_some()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AuditReport {
    pub instance: String,
    pub rows: Vec<AuditRow>,
}

impl AuditReport {
    pub fn disagreements(&self) -> usize {
        self.rows.iter().filter(|r| !r.agree).count()
    }

    pub fn render(&self) -> String {
        let mut out = format!("{}\n", self.instance);
        out.push_str(&format!("{:<22} {:<8} {:<8} {:<6} {}\n", "row", "left", "right", "agree", "statement"));
        let show = |v: &Option<Verdict>| match v {
            Some(v) => format!("{}{}", if v.value { "T" } else { "F" }, match v.provenance {
                Provenance::Solver => "/sol",
                Provenance::Checker => "/chk",
                Provenance::Formula => "/fml",
            }),
            None => "n/a".to_string(),
        };
        for r in &self.rows {
            let agree = if !r.applicable() { "-" } else if r.agree { "yes" } else { "NO" };
            out.push_str(&format!("{:<22} {:<8} {:<8} {:<6} {}\n", r.id, show(&r.left), show(&r.right), agree, r.statement));
        }
        out
    }
}

/// Memoized winners of auxiliary games built during one audit.
struct Ctx<'a> {
    opts: &'a SolveOptions,
    winners: HashMap<GameInstance, Role>,
}

impl Ctx<'_> {
    fn winner(&mut self, g: GameInstance) -> Result<Role> {
        if let Some(w) = self.winners.get(&g) {
            return Ok(*w);
        }
        let w = solve_with(&g, self.opts)?.winner;
        self.winners.insert(g, w);
        Ok(w)
    }
}

fn params(family: GameFamily, start: Start, n: usize, width: Width, variant: Variant) -> GameParams {
    GameParams { family, start, rounds: n, width, variant, flags: Flags { maximal: true, cut_current: false } }
}

fn g_family(s: &Structure) -> GameFamily {
    if matches!(s, Structure::Sets(_)) {
        GameFamily::GIdeal
    } else {
        GameFamily::GPoset
    }
}

fn bm_family(s: &Structure) -> GameFamily {
    if matches!(s, Structure::Sets(_)) {
        GameFamily::BmIdeal
    } else {
        GameFamily::BmPoset
    }
}

fn top_start(s: &Structure) -> Start {
    match s {
        Structure::Poset(q) => Start::Element(q.top().unwrap_or(0)),
        _ => Start::Set(s.universe().expect("set-like")),
    }
}

/// Least number of family members covering `x`, if any cover exists.
pub fn cover_number(f: &MonotoneFamily, x: Mask) -> Option<usize> {
    fn go(f: &MonotoneFamily, s: Mask, memo: &mut HashMap<Mask, Option<usize>>) -> Option<usize> {
        if s.is_empty() {
            return Some(0);
        }
        if let Some(v) = memo.get(&s) {
            return *v;
        }
        let p = s.first().expect("nonempty");
        // some maximal member covers the lowest point
        let best = f
            .maximal_members_within(s)
            .into_iter()
            .filter(|m| m.contains(p))
            .filter_map(|m| go(f, s.minus(m), memo).map(|c| c + 1))
            .min();
        memo.insert(s, best);
        best
    }
    go(f, x, &mut HashMap::new())
}

/// Audits every characterization that applies to the instance's structure.
pub fn equivalence_audit(game: &GameInstance, opts: &SolveOptions) -> Result<AuditReport> {
    let mut ctx = Ctx { opts, winners: HashMap::new() };
    let mut rows = Vec::new();
    let s = game.structure();
    let n = game.rounds();
    match game.family() {
        GameFamily::U => rows.push(cover_row(&mut ctx, game)?),
        GameFamily::GIdeal | GameFamily::GPoset => {
            rows.push(distributive_at_start(&mut ctx, game)?);
            if matches!(s, Structure::Sets(_)) {
                rows.push(ideal_distributive(&mut ctx, game)?);
            }
        }
        GameFamily::BmIdeal | GameFamily::BmPoset => {}
    }
    if game.family() != GameFamily::U {
        let n_bm = n;
        rows.push(empty_row(&mut ctx, s, game, n_bm)?);
        rows.push(nonempty_row(&mut ctx, s, game, n_bm)?);
        if let Structure::Sets(f) = s {
            if let Ok(ideal) = Ideal::new(f.clone()) {
                rows.push(precipitous_row(&mut ctx, &ideal, n)?);
                if game.family() == GameFamily::GIdeal {
                    rows.push(quotient_row(&mut ctx, game, &ideal)?);
                }
            }
        }
        if let Structure::Algebra(_) = s {
            rows.push(levels_row(game)?);
        }
    }
    rows.push(AuditRow::not_applicable("weak_compactness", "rows stated for weakly compact cardinals"));
    rows.push(AuditRow::not_applicable("short_games", "games of every length below the cardinal"));
    Ok(AuditReport { instance: game.summary(), rows })
}

/// Cut wins `U` iff the start is a union of at most `ν^e` family members,
/// where `e` is the number of rounds the referee checks.
fn cover_row(ctx: &mut Ctx, game: &GameInstance) -> Result<AuditRow> {
    let Structure::Sets(f) = game.structure() else { unreachable!("U games are on sets") };
    let nu = game.width().limit().expect("U games have bounded width");
    let e = if game.variant() == Variant::StrictPrefix { game.rounds() - 1 } else { game.rounds() };
    let leaves = (nu as u128).saturating_pow(e as u32);
    let cover = cover_number(f, game.start().mask());
    let left = ctx.winner(game.clone())? == Role::Cut;
    let right = cover.is_some_and(|c| (c as u128) <= leaves);
    Ok(AuditRow::new(
        "cover_law",
        format!("Cut wins iff the start is covered by ≤ {nu}^{e} members (cover number {})", cover.map_or("none".into(), |c| c.to_string())),
        Verdict::solver(left),
        Verdict { value: right, provenance: Provenance::Formula },
    ))
}

/// Cut does not win the game from the start iff every sequence of cuts of
/// the start has an acceptable branch.
fn distributive_at_start(ctx: &mut Ctx, game: &GameInstance) -> Result<AuditRow> {
    let v = DistributivityVariant::for_game_variant(game.variant());
    let left = ctx.winner(game.clone())? != Role::Cut;
    let right = check_distributivity(game.structure(), game.start(), game.rounds(), game.width(), v)?.holds();
    Ok(AuditRow::new(
        "distributive_at_start",
        format!("Cut has no winning strategy iff {v:?} distributivity holds below the start"),
        Verdict::solver(left),
        Verdict::checker(right),
    ))
}

/// Choose wins the weak game from every positive set iff the family is
/// distributive in its weak form at this width.
fn ideal_distributive(ctx: &mut Ctx, game: &GameInstance) -> Result<AuditRow> {
    let s = game.structure();
    let (n, width) = (game.rounds(), game.width());
    let mut left = true;
    let mut right = true;
    for x in positive_starts(s) {
        let g = GameInstance::new(s.clone(), params(GameFamily::GIdeal, x, n, width, Variant::Weak))?;
        left &= ctx.winner(g)? == Role::Choose;
        right &= check_distributivity(s, x, n, width, DistributivityVariant::IdealWeak)?.holds();
    }
    Ok(AuditRow::new(
        "ideal_distributive",
        "Choose wins the weak game from every positive set iff the weak distributivity holds everywhere",
        Verdict::solver(left),
        Verdict::checker(right),
    ))
}

fn unbounded_g(s: &Structure, x: Start, n: usize) -> Result<GameInstance> {
    GameInstance::new(s.clone(), params(g_family(s), x, n, Width::Unbounded, Variant::Exact))
}

fn bm(s: &Structure, start: Start, n: usize) -> Result<GameInstance> {
    GameInstance::new(s.clone(), params(bm_family(s), start, n, Width::Unbounded, Variant::Exact))
}

/// Empty wins the Banach–Mazur game iff Cut wins the unbounded game from
/// some positive set.
fn empty_row(ctx: &mut Ctx, s: &Structure, game: &GameInstance, n: usize) -> Result<AuditRow> {
    let start = if game.family() == bm_family(s) { game.start() } else { top_start(s) };
    let left = ctx.winner(bm(s, start, n)?)? == Role::Empty;
    let mut right = false;
    for x in positive_starts(s) {
        if below(s, x, start) && ctx.winner(unbounded_g(s, x, n)?)? == Role::Cut {
            right = true;
            break;
        }
    }
    Ok(AuditRow::new(
        "empty_wins_bm",
        "Empty wins the Banach–Mazur game iff Cut wins the unbounded game below some condition",
        Verdict::solver(left),
        Verdict::solver(right),
    ))
}

/// Nonempty wins the Banach–Mazur game iff Choose wins the unbounded game
/// from every positive set.
fn nonempty_row(ctx: &mut Ctx, s: &Structure, game: &GameInstance, n: usize) -> Result<AuditRow> {
    let start = if game.family() == bm_family(s) { game.start() } else { top_start(s) };
    let left = ctx.winner(bm(s, start, n)?)? == Role::Nonempty;
    let mut right = true;
    for x in positive_starts(s) {
        if below(s, x, start) && ctx.winner(unbounded_g(s, x, n)?)? != Role::Choose {
            right = false;
            break;
        }
    }
    Ok(AuditRow::new(
        "nonempty_wins_bm",
        "Nonempty wins the Banach–Mazur game iff Choose wins the unbounded game below every condition",
        Verdict::solver(left),
        Verdict::solver(right),
    ))
}

fn below(s: &Structure, x: Start, start: Start) -> bool {
    match (s, x, start) {
        (Structure::Poset(q), Start::Element(a), Start::Element(b)) => q.leq(a, b),
        (_, Start::Set(a), Start::Set(b)) => a.is_subset(b),
        _ => false,
    }
}

/// The weak distributivity checker agrees with Empty failing to win.
fn precipitous_row(ctx: &mut Ctx, ideal: &Ideal, n: usize) -> Result<AuditRow> {
    let s = Structure::Sets(ideal.family().clone());
    let left = precipitous_analog(ideal, n)?;
    let right = ctx.winner(bm(&s, Start::Set(ideal.family().ground().full()), n)?)? != Role::Empty;
    Ok(AuditRow::new(
        "precipitous",
        "weak distributivity of the ideal everywhere iff Empty does not win the Banach–Mazur game",
        Verdict::checker(left),
        Verdict::solver(right),
    ))
}

/// The game on the ideal and the game on the quotient algebra have the same
/// winner: points of the kernel never matter.
fn quotient_row(ctx: &mut Ctx, game: &GameInstance, ideal: &Ideal) -> Result<AuditRow> {
    let kernel = ideal.kernel();
    let ground = ideal.family().ground().full();
    let outside = ground.minus(kernel);
    let project = |x: Mask| x.intersect(outside).compress(outside);
    let b = FiniteBooleanAlgebra::with_atoms(outside.len())?;
    // the poset game has no weak variant; on a quotient algebra the last
    // meet is nonempty exactly when it is positive
    let variant = if game.variant() == Variant::Weak { Variant::Exact } else { game.variant() };
    let q = GameInstance::new(
        Structure::Algebra(b),
        GameParams { family: GameFamily::GPoset, start: Start::Set(project(game.start().mask())), variant, ..game.params() },
    )?;
    let left = ctx.winner(game.clone())?;
    let right = ctx.winner(q)?;
    Ok(AuditRow::new(
        "quotient",
        format!("winner on the ideal ({left}) equals winner on the quotient algebra ({right})"),
        Verdict::solver(left == Role::Cut),
        Verdict::solver(right == Role::Cut),
    ))
}

/// On a finite algebra, distributivity at the top and at every element
/// coincide.
fn levels_row(game: &GameInstance) -> Result<AuditRow> {
    let s = game.structure();
    let (n, width) = (game.rounds(), game.width());
    let v = DistributivityVariant::Plain;
    let left = check_distributivity(s, top_start(s), n, width, v)?.holds();
    let mut right = true;
    for x in positive_starts(s) {
        right &= check_distributivity(s, x, n, width, v)?.holds();
    }
    Ok(AuditRow::new(
        "distributive_levels",
        "distributivity at the top iff distributivity below every element",
        Verdict::checker(left),
        Verdict::checker(right),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structures::GroundSet;

    #[test]
    fn cover_numbers_of_small_families() {
        let g = GroundSet::new(5).unwrap();
        assert_eq!(cover_number(&MonotoneFamily::size_at_most(g, 2), g.full()), Some(3));
        assert_eq!(cover_number(&MonotoneFamily::size_at_most(g, 0), g.full()), None);
    }

    #[test]
    fn singleton_u_game_audit_agrees() {
        let f = MonotoneFamily::size_at_most(GroundSet::new(4).unwrap(), 1);
        for n in 1..=3 {
            let g = GameInstance::u_game(f.clone(), n, 2, Variant::Exact).unwrap();
            let r = equivalence_audit(&g, &SolveOptions::default()).unwrap();
            assert_eq!(r.disagreements(), 0, "{}", r.render());
        }
    }
}
