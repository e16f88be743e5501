//! The solver against a plain minimax written directly over bitmasks.

use cutchoose::engine::{verify_winning_strategy, Flags, GameFamily, GameInstance, GameParams, Start, Structure, Variant, Width};
use cutchoose::solver::{solve_with, SolveOptions};
use cutchoose::structures::{GroundSet, Mask, MonotoneFamily};
use proptest::prelude::*;

/// A U game over the family of subsets of `gens`.
#[derive(Clone, Debug)]
struct Brute {
    gens: Vec<u32>,
    start: u32,
    rounds: usize,
    width: usize,
    variant: Variant,
    cut_current: bool,
}

impl Brute {
    fn positive(&self, s: u32) -> bool {
        !self.gens.iter().any(|g| s & !g == 0)
    }

    /// Choose wins from `core` with `round` rounds played.
    fn choose_wins(&self, core: u32, round: usize) -> bool {
        if round > 0 {
            let checked = self.variant != Variant::StrictPrefix || round < self.rounds;
            if checked && !self.positive(core) {
                return false;
            }
            if round == self.rounds {
                return true;
            }
        }
        let target = if self.cut_current { core } else { self.start };
        let mut cuts = Vec::new();
        let points: Vec<u32> = (0..32).filter(|p| target >> p & 1 == 1).collect();
        if points.len() == 1 {
            cuts.push(vec![target]);
        } else {
            partitions(&points, &mut Vec::new(), self.width, &mut cuts);
        }
        cuts.iter().all(|cut| cut.iter().any(|&piece| self.choose_wins(core & piece, round + 1)))
    }

    fn game(&self, ground: usize) -> GameInstance {
        let g = GroundSet::new(ground).unwrap();
        let family = MonotoneFamily::generated_by(g, self.gens.iter().map(|&m| Mask(m)).collect()).unwrap();
        GameInstance::new(
            Structure::Sets(family),
            GameParams {
                family: GameFamily::U,
                start: Start::Set(Mask(self.start)),
                rounds: self.rounds,
                width: Width::Bounded(self.width),
                variant: self.variant,
                flags: Flags { maximal: true, cut_current: self.cut_current },
            },
        )
        .unwrap()
    }
}

/// Every partition of `points` into 2..=width nonempty blocks.
fn partitions(points: &[u32], blocks: &mut Vec<u32>, width: usize, out: &mut Vec<Vec<u32>>) {
    let Some((&p, rest)) = points.split_first() else {
        if blocks.len() >= 2 {
            out.push(blocks.clone());
        }
        return;
    };
    for i in 0..blocks.len() {
        blocks[i] |= 1 << p;
        partitions(rest, blocks, width, out);
        blocks[i] &= !(1 << p);
    }
    if blocks.len() < width {
        blocks.push(1 << p);
        partitions(rest, blocks, width, out);
        blocks.pop();
    }
}

fn arb_game() -> impl Strategy<Value = (usize, Brute)> {
    (2usize..=5).prop_flat_map(|m| {
        let full = (1u32 << m) - 1;
        // generators miss the last point, so the ground set is positive
        let gen = (0..full).prop_map(move |g| g & !(1 << (m - 1)));
        (
            Just(m),
            proptest::collection::vec(gen, 1..=2),
            1usize..=3,
            2usize..=3,
            prop_oneof![Just(Variant::Exact), Just(Variant::Weak), Just(Variant::StrictPrefix)],
            any::<bool>(),
        )
            .prop_map(move |(m, gens, rounds, width, variant, cut_current)| {
                (m, Brute { gens, start: full, rounds, width, variant, cut_current })
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn solver_matches_brute_force((m, b) in arb_game()) {
        let game = b.game(m);
        let expected = if b.choose_wins(b.start, 0) { cutchoose::engine::Role::Choose } else { cutchoose::engine::Role::Cut };
        for symmetry in [true, false] {
            let opts = SolveOptions { symmetry, ..SolveOptions::default() };
            prop_assert_eq!(solve_with(&game, &opts).unwrap().winner, expected, "{}", game.summary());
        }
    }

    #[test]
    fn extracted_strategies_win((m, b) in arb_game()) {
        let game = b.game(m);
        let solved = solve_with(&game, &SolveOptions::default()).unwrap();
        let v = verify_winning_strategy(&game, &solved.strategy, solved.winner, 1_000_000).unwrap();
        prop_assert!(v.is_win(), "{}", game.summary());
    }
}

#[test]
fn singleton_thresholds_match_brute_force() {
    for rounds in 1..=3 {
        for m in 2..=9 {
            let b = Brute {
                gens: (0..m).map(|p| 1u32 << p).collect(),
                start: (1 << m) - 1,
                rounds,
                width: 2,
                variant: Variant::Exact,
                cut_current: true,
            };
            let expected = m > 1 << rounds;
            assert_eq!(b.choose_wins(b.start, 0), expected, "m={m} n={rounds}");
        }
    }
}
