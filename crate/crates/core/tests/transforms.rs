use std::sync::Arc;

use cutchoose::engine::{
    verify_winning_strategy, CopyCurrent, FirstLegal, Flags, GameFamily, GameInstance, GameParams, GreedyPositivity,
    Move, Role, Scripted, Start, Strategy, Structure, Variant, Width,
};
use cutchoose::solver::solve;
use cutchoose::structures::{FiniteBooleanAlgebra, GroundSet, Mask, MonotoneFamily};
use cutchoose::transforms::*;
use proptest::prelude::*;

const BUDGET: usize = 2_000_000;

fn m(s: &str) -> Mask {
    s.parse().unwrap()
}

fn small(ground: usize, k: usize) -> MonotoneFamily {
    MonotoneFamily::size_at_most(GroundSet::new(ground).unwrap(), k)
}

fn game(structure: Structure, family: GameFamily, start: Mask, rounds: usize, width: Width, flags: Flags) -> GameInstance {
    GameInstance::new(
        structure,
        GameParams { family, start: Start::Set(start), rounds, width, variant: Variant::Exact, flags },
    )
    .unwrap()
}

fn cut_start() -> Flags {
    Flags { maximal: true, cut_current: false }
}

fn algebra_game(atoms: usize, rounds: usize, width: usize) -> GameInstance {
    let b = FiniteBooleanAlgebra::with_atoms(atoms).unwrap();
    game(Structure::Algebra(b), GameFamily::GPoset, b.top(), rounds, Width::Bounded(width), cut_start())
}

fn solver_strategy(g: &GameInstance, role: Role) -> Arc<dyn Strategy> {
    Arc::new(solve(g).unwrap().strategy.for_role(role))
}

fn wins(g: &GameInstance, s: &dyn Strategy, role: Role) -> bool {
    verify_winning_strategy(g, s, role, BUDGET).unwrap().is_win()
}

fn all_certified(sim: &dyn Simulation) -> CertificationReport {
    let report = certify_playouts(sim, BUDGET).unwrap();
    assert!(report.plays > 0);
    assert!(report.all_valid(), "invalid certificate: {:?}", report.first_invalid.map(|c| c.to_json()));
    report
}

#[test]
fn digit_split_wins_up_to_capacity() {
    for (mm, nu, n) in [(4, 2, 2), (2, 2, 1), (9, 3, 2), (8, 2, 3)] {
        let s = digit_split(mm, nu, n).unwrap();
        assert!(wins(&s.game().unwrap(), &s, Role::Cut), "m={mm} ν={nu} n={n}");
    }
}

#[test]
fn digit_split_rejects_one_past_capacity_and_choose_wins_there() {
    for (mm, nu, n) in [(5, 2, 2), (3, 2, 1), (10, 3, 2)] {
        assert!(digit_split(mm, nu, n).is_err());
        let g = GameInstance::u_game(small(mm, 1), n, nu, Variant::Exact).unwrap();
        assert_eq!(solve(&g).unwrap().winner, Role::Choose);
    }
}

#[test]
fn fixed_point_keeps_a_point() {
    let g = GameInstance::u_game(small(5, 0), 3, 2, Variant::Exact).unwrap();
    assert!(wins(&g, &fixed_point(0), Role::Choose));
    let weak = GameInstance::u_game(small(2, 1), 1, 2, Variant::Weak).unwrap();
    assert!(!wins(&weak, &fixed_point(0), Role::Choose));
}

#[test]
fn restriction_of_a_winning_choose_strategy_still_wins() {
    let g5 = GameInstance::u_game(small(5, 1), 2, 2, Variant::Exact).unwrap();
    let sigma = solver_strategy(&g5, Role::Choose);
    let g9 = GameInstance::u_game(small(9, 1), 2, 2, Variant::Exact).unwrap();
    let r = restrict_choose(&g5, sigma, &g9, vec![0, 2, 4, 6, 8]).unwrap();
    assert!(wins(&g9, &r, Role::Choose));
}

#[test]
fn restriction_rejects_a_non_injective_embedding() {
    let g2 = GameInstance::u_game(small(2, 1), 1, 2, Variant::Exact).unwrap();
    let g3 = GameInstance::u_game(small(3, 1), 1, 2, Variant::Exact).unwrap();
    assert!(restrict_choose(&g2, Arc::new(FirstLegal), &g3, vec![1, 1]).is_err());
}

fn g_ideal(ground: usize, k: usize, rounds: usize, width: Width) -> GameInstance {
    let f = small(ground, k);
    let x = f.ground().full();
    game(Structure::Sets(f), GameFamily::GIdeal, x, rounds, width, Flags::default())
}

#[test]
fn disjointified_cut_certificates_hold() {
    let g = g_ideal(4, 1, 2, Width::Bounded(2));
    let sigma = solver_strategy(&g, Role::Cut);
    let sim = disjointify_cut(&g, sigma).unwrap();
    all_certified(&sim);
}

#[test]
fn disjointified_trivial_cut_alternates_whole_and_split() {
    let g = g_ideal(3, 0, 2, Width::Bounded(2));
    let x = m("{0,1,2}");
    let sigma = Arc::new(Scripted { moves: vec![Move::Partition(vec![x]); 2] });
    let sim = disjointify_cut(&g, sigma).unwrap();
    let u = sim.output_game().clone();
    let s0 = u.initial_state();
    assert_eq!(sim.decide(&u, &[], &s0).unwrap(), Move::Partition(vec![x]));
    let h = vec![Move::Partition(vec![x]), Move::Pick(0)];
    let s1 = u.replay(&h).unwrap();
    assert_eq!(sim.decide(&u, &h, &s1).unwrap(), Move::Partition(vec![x, Mask::EMPTY]));
    let report = all_certified(&sim);
    let cert = report.sample.unwrap();
    assert!(cert.relation.statement.contains("{0,1,2}"));
}

#[test]
fn disjointified_winning_choose_strategy_still_wins() {
    let g = g_ideal(5, 1, 1, Width::Bounded(2));
    let u = game(
        Structure::Sets(small(5, 1)),
        GameFamily::U,
        m("{0,1,2,3,4}"),
        2,
        Width::Bounded(2),
        cut_start(),
    );
    let sigma = solver_strategy(&u, Role::Choose);
    assert!(wins(&u, &sigma, Role::Choose));
    let sim = disjointify_choose(&u, sigma, g.width(), g.flags().cut_current).unwrap();
    assert!(wins(sim.output_game(), &sim, Role::Choose));
    all_certified(&sim);
}

#[test]
fn disjointified_fixed_point_keeps_the_point() {
    let u = game(Structure::Sets(small(3, 0)), GameFamily::U, m("{0,1,2}"), 2, Width::Bounded(8), cut_start());
    let sim = disjointify_choose(&u, Arc::new(fixed_point(0)), Width::Unbounded, true).unwrap();
    assert!(wins(sim.output_game(), &sim, Role::Choose));
    all_certified(&sim);
}

#[test]
fn factoring_the_atoms_of_a_four_atom_algebra() {
    let b = FiniteBooleanAlgebra::with_atoms(4).unwrap();
    let atoms = vec![m("{0}"), m("{1}"), m("{2}"), m("{3}")];
    let f = factor_antichain(&b, b.top(), &atoms, 2, 2).unwrap();
    assert_eq!(f.antichain(0), vec![m("{0,1}"), m("{2,3}")]);
    assert_eq!(f.antichain(1), vec![m("{0,2}"), m("{1,3}")]);
    assert_eq!(f.meet(&[0, 0]), m("{0}"));
    f.check_identities(&b).unwrap();
    assert!(factor_antichain(&b, b.top(), &[b.top()], 2, 0).is_err());
    assert!(factor_antichain(&b, b.top(), &atoms, 2, 1).is_err());
}

proptest! {
    #[test]
    fn factorization_identities_hold(labels in proptest::collection::vec(0usize..8, 16), nu in 2usize..4) {
        let b = FiniteBooleanAlgebra::with_atoms(16).unwrap();
        let mut pieces = vec![Mask::EMPTY; 8];
        for (atom, l) in labels.iter().enumerate() {
            pieces[*l] = pieces[*l].union(Mask::singleton(atom));
        }
        pieces.retain(|p| !p.is_empty());
        let beta = if nu == 2 { 3 } else { 2 };
        let f = factor_antichain(&b, b.top(), &pieces, nu, beta).unwrap();
        f.check_identities(&b).unwrap();
    }
}

#[test]
fn transferred_atom_cut_plays_both_factors() {
    let big = algebra_game(4, 1, 4);
    let atoms = vec![m("{0}"), m("{1}"), m("{2}"), m("{3}")];
    let sigma = Arc::new(Scripted { moves: vec![Move::Partition(atoms)] });
    let sim = transfer_cut_big_to_small(&big, sigma, 2, 2).unwrap();
    let small = sim.output_game().clone();
    assert_eq!(small.rounds(), 2);
    let s0 = small.initial_state();
    assert_eq!(sim.decide(&small, &[], &s0).unwrap(), Move::Partition(vec![m("{0,1}"), m("{2,3}")]));
    let h = vec![Move::Partition(vec![m("{0,1}"), m("{2,3}")]), Move::Pick(1)];
    let s1 = small.replay(&h).unwrap();
    assert_eq!(sim.decide(&small, &h, &s1).unwrap(), Move::Partition(vec![m("{0,2}"), m("{1,3}")]));
    let report = all_certified(&sim);
    assert_eq!(report.plays, 4);
}

#[test]
fn transferred_solver_cut_certificates_hold() {
    let big = algebra_game(4, 2, 4);
    let sigma = solver_strategy(&big, Role::Cut);
    let sim = transfer_cut_big_to_small(&big, sigma, 2, 2).unwrap();
    all_certified(&sim);
}

#[test]
fn transferred_greedy_choose_wins_the_wide_game() {
    let narrow = algebra_game(4, 2, 2);
    assert!(wins(&narrow, &GreedyPositivity, Role::Choose));
    let sim = transfer_choose_small_to_big(&narrow, Arc::new(GreedyPositivity), 2, Width::Bounded(4)).unwrap();
    assert_eq!(sim.output_game().rounds(), 1);
    assert!(wins(sim.output_game(), &sim, Role::Choose));
    all_certified(&sim);
}

fn ablation_game(maximal: bool) -> GameInstance {
    let f = small(4, 1);
    let x = f.ground().full();
    game(Structure::Sets(f), GameFamily::GIdeal, x, 2, Width::Unbounded, Flags { maximal, cut_current: false })
}

fn disjoint_pairs() -> Vec<Vec<Mask>> {
    vec![vec![m("{0,1}"), m("{2,3}")], vec![m("{0,2}"), m("{1,3}")]]
}

#[test]
fn branchless_witness_is_a_winning_cut_plan() {
    let g = ablation_game(false);
    assert!(!has_positive_branch(&g, &disjoint_pairs()).unwrap());
    let cut = witness_to_cut(&g, disjoint_pairs()).unwrap();
    assert!(wins(&g, &cut, Role::Cut));
    assert!(witness_to_cut(&ablation_game(true), disjoint_pairs()).is_err());
}

#[test]
fn whole_set_witness_has_a_branch_and_loses() {
    let g = ablation_game(true);
    let x = g.start().mask();
    let seq = vec![vec![x]; 2];
    assert_eq!(positive_branches(&g, &seq).unwrap(), vec![vec![0, 0]]);
    let cut = witness_to_cut(&g, seq).unwrap();
    assert!(!wins(&g, &cut, Role::Cut));
}

#[test]
fn witness_from_a_winning_cut_strategy_is_branchless() {
    let u = game(Structure::Sets(small(4, 1)), GameFamily::U, m("{0,1,2,3}"), 2, Width::Bounded(2), Flags::default());
    let sigma = solver_strategy(&u, Role::Cut);
    let check = cut_strategy_to_witness(&u, sigma.as_ref()).unwrap();
    assert!(check.positive_branches.is_empty());
    assert!(check.beating_lines.is_empty());
    assert!(check.agrees());
}

#[test]
fn witness_from_a_losing_cut_strategy_matches_its_beating_lines() {
    let u = game(Structure::Sets(small(5, 1)), GameFamily::U, m("{0,1,2,3,4}"), 2, Width::Bounded(2), Flags::default());
    let check = cut_strategy_to_witness(&u, &FirstLegal).unwrap();
    assert!(!check.beating_lines.is_empty());
    assert_eq!(check.positive_branches.len(), check.beating_lines.len());
    assert!(check.agrees());
}

fn bm(ground: usize, k: usize, rounds: usize, maximal: bool) -> GameInstance {
    let f = small(ground, k);
    let x = f.ground().full();
    game(Structure::Sets(f), GameFamily::BmIdeal, x, rounds, Width::Unbounded, Flags { maximal, cut_current: true })
}

#[test]
fn branchless_witness_walk_wins_for_empty() {
    let g = bm(4, 1, 2, false);
    let e = witness_to_empty(&g, disjoint_pairs()).unwrap();
    assert!(e.is_branchless());
    assert!(wins(&g, &e, Role::Empty));
    all_certified(&e);
}

#[test]
fn witness_walk_in_the_strict_game_is_certified() {
    let g = bm(3, 0, 2, true);
    let seq = vec![vec![m("{0}"), m("{1}"), m("{2}")]; 2];
    let e = witness_to_empty(&g, seq).unwrap();
    assert!(!e.is_branchless());
    let report = all_certified(&e);
    assert!(!report.owner_always_won);
}

#[test]
fn copying_empty_gives_a_cut_strategy_that_never_wins() {
    let g = bm(3, 1, 2, true);
    let sim = empty_to_cut(&g, Arc::new(CopyCurrent)).unwrap();
    assert_eq!(sim.opening(), m("{0,1,2}"));
    let report = all_certified(&sim);
    assert!(report.first_loss.is_some());
    assert!(!wins(sim.output_game(), &sim, Role::Cut));
}

#[test]
fn one_round_empty_to_cut_plays_the_opening() {
    let g = bm(3, 0, 1, true);
    let sim = empty_to_cut(&g, Arc::new(CopyCurrent)).unwrap();
    let out = sim.output_game().clone();
    assert_eq!(out.rounds(), 1);
    assert_eq!(sim.decide(&out, &[], &out.initial_state()).unwrap(), Move::Partition(vec![m("{0,1,2}")]));
    all_certified(&sim);
}

#[test]
fn copying_nonempty_becomes_greedy_choose() {
    for (ground, k, rounds) in [(4, 1, 2), (3, 0, 2), (5, 1, 1)] {
        let g = g_ideal(ground, k, rounds, Width::Unbounded);
        let sim = nonempty_to_choose(&g, Arc::new(CopyCurrent)).unwrap();
        assert!(wins(&g, &sim, Role::Choose));
        assert!(wins(&g, &GreedyPositivity, Role::Choose));
        let report = all_certified(&sim);
        assert!(report.owner_always_won);
    }
}

#[test]
fn greedy_choose_becomes_winning_nonempty() {
    for (ground, k, rounds) in [(3, 0, 2), (3, 1, 1), (4, 1, 2)] {
        let g = bm(ground, k, rounds, true);
        let sim = choose_to_nonempty(&g, Arc::new(GreedyPositivity)).unwrap();
        assert!(wins(&g, &sim, Role::Nonempty), "ground {ground} k {k} rounds {rounds}");
        let report = all_certified(&sim);
        assert!(report.owner_always_won);
    }
}
