//! Seeded pseudorandom instance corpus. Instance `i` of a corpus depends
//! only on the seed and `i`, so a shorter corpus is a prefix of a longer one.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::engine::{Flags, GameFamily, GameInstance, GameParams, InstanceFile, Start, Structure, Variant, Width};
use crate::error::Result;
use crate::structures::{FiniteBooleanAlgebra, FinitePoset, GroundSet, Ideal, Mask, MonotoneFamily};

pub const DEFAULT_SEED: u64 = 20_240_601;
/// Five families, 25 instances each.
pub const DEFAULT_SIZE: usize = 125;

pub const FAMILIES: [GameFamily; 5] =
    [GameFamily::U, GameFamily::GIdeal, GameFamily::GPoset, GameFamily::BmIdeal, GameFamily::BmPoset];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorpusInstance {
    pub id: usize,
    pub seed: u64,
    pub game: GameInstance,
}

impl CorpusInstance {
    pub fn file(&self) -> InstanceFile {
        InstanceFile::from_instance(&self.game, Some(self.seed))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CorpusEntry {
    pub id: usize,
    pub summary: String,
    pub instance: InstanceFile,
}

/// `size` instances cycling through the five game families.
pub fn generate_corpus(seed: u64, size: usize) -> Result<Vec<CorpusInstance>> {
    (0..size).map(|id| instance(seed, id)).collect()
}

/// Bound on `cuts^rounds`, the number of Cut lines an exhaustive check of
/// a Choose strategy walks.
pub const LOAD_LIMIT: u128 = 50_000;

fn instance(seed: u64, id: usize) -> Result<CorpusInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id as u64);
    let family = FAMILIES[id % FAMILIES.len()];
    loop {
        let game = match family {
            GameFamily::U => u_instance(&mut rng)?,
            GameFamily::GIdeal => ideal_instance(&mut rng, GameFamily::GIdeal)?,
            GameFamily::BmIdeal => ideal_instance(&mut rng, GameFamily::BmIdeal)?,
            GameFamily::GPoset | GameFamily::BmPoset => poset_instance(&mut rng, family)?,
        };
        if check_load(&game)? <= LOAD_LIMIT {
            return Ok(CorpusInstance { id, seed, game });
        }
    }
}

/// `cuts^rounds`, where `cuts` counts Cut's opening moves in the game or,
/// for Banach–Mazur games, in the unbounded cut-and-choose game on the same
/// structure; U games also count the G game they are disjointified into.
pub fn check_load(game: &GameInstance) -> Result<u128> {
    let carrier = match game.family() {
        GameFamily::BmIdeal | GameFamily::BmPoset => {
            super::distributivity::carrier_game(game.structure(), game.start(), game.rounds(), Width::Unbounded, true)?
        }
        _ => game.clone(),
    };
    let count = |g: &GameInstance| -> Result<u128> {
        match g.legal_moves(&g.initial_state()) {
            Ok(m) => Ok(m.len() as u128),
            Err(e) if e.is_capacity() => Ok(u128::MAX),
            Err(e) => Err(e),
        }
    };
    let mut cuts = count(&carrier)?;
    if game.family() == GameFamily::U {
        cuts = cuts.max(count(&game.with_params(|p| p.family = GameFamily::GIdeal)?)?);
    }
    Ok(cuts.saturating_pow(game.rounds() as u32))
}

fn random_mask(rng: &mut ChaCha8Rng, ground: usize) -> Mask {
    Mask(rng.gen_range(0..(1u32 << ground)))
}

fn u_instance(rng: &mut ChaCha8Rng) -> Result<GameInstance> {
    let m = rng.gen_range(3..=8);
    let ground = GroundSet::new(m)?;
    let family = if rng.gen_bool(0.7) {
        MonotoneFamily::size_at_most(ground, rng.gen_range(0..=2))
    } else {
        // generators that are not the whole ground set
        let masks = (0..rng.gen_range(1..=2)).map(|_| random_mask(rng, m).minus(Mask::singleton(m - 1))).collect();
        MonotoneFamily::generated_by(ground, masks)?
    };
    let variant = *[Variant::Exact, Variant::Weak, Variant::StrictPrefix].choose(rng).expect("nonempty");
    GameInstance::new(
        Structure::Sets(family),
        GameParams {
            family: GameFamily::U,
            start: Start::Set(ground.full()),
            rounds: rng.gen_range(1..=3),
            width: Width::Bounded(rng.gen_range(2..=3)),
            variant,
            flags: Flags { maximal: true, cut_current: rng.gen_bool(0.5) },
        },
    )
}

/// `{∅}` or the ideal of subsets of a random proper kernel.
fn random_ideal(rng: &mut ChaCha8Rng, m: usize) -> Result<Ideal> {
    let ground = GroundSet::new(m)?;
    let kernel = if rng.gen_bool(0.3) { Mask::EMPTY } else { random_mask(rng, m).minus(Mask::singleton(rng.gen_range(0..m))) };
    Ok(Ideal::generated_by(ground, &[kernel])?)
}

fn ideal_instance(rng: &mut ChaCha8Rng, family: GameFamily) -> Result<GameInstance> {
    let m = rng.gen_range(3..=8);
    let ideal = random_ideal(rng, m)?;
    let f = ideal.family().clone();
    let start = if rng.gen_bool(0.6) {
        GroundSet::new(m)?.full()
    } else {
        let positive: Vec<Mask> = GroundSet::new(m)?.subsets().filter(|s| f.is_positive(*s)).collect();
        *positive.choose(rng).expect("the ground set is positive")
    };
    let (width, variant, cut_current) = if family == GameFamily::GIdeal {
        let width = match rng.gen_range(0..3) {
            0 => Width::Unbounded,
            w => Width::Bounded(2 + w % 2),
        };
        let variant = *[Variant::Exact, Variant::Weak, Variant::StrictPrefix].choose(rng).expect("nonempty");
        (width, variant, rng.gen_bool(0.5))
    } else {
        (Width::Unbounded, Variant::Exact, true)
    };
    GameInstance::new(
        Structure::Sets(f),
        GameParams {
            family,
            start: Start::Set(start),
            rounds: rng.gen_range(1..=3),
            width,
            variant,
            flags: Flags { maximal: true, cut_current },
        },
    )
}

/// A random family of nonempty subsets of a small ground set, always
/// containing the whole set, ordered by inclusion.
fn random_set_poset(rng: &mut ChaCha8Rng) -> Result<FinitePoset> {
    let g = rng.gen_range(3..=4);
    let mut pool: Vec<Mask> = (1..(1u32 << g) - 1).map(Mask).collect();
    pool.shuffle(rng);
    let mut elems: Vec<Mask> = pool.into_iter().take(rng.gen_range(3..=9)).collect();
    elems.push(Mask::full(g));
    elems.sort();
    let pairs: Vec<(usize, usize)> = (0..elems.len())
        .flat_map(|a| (0..elems.len()).map(move |b| (a, b)))
        .filter(|&(a, b)| a != b && elems[a].is_subset(elems[b]))
        .collect();
    Ok(FinitePoset::from_relations(elems.len(), &pairs)?)
}

fn poset_instance(rng: &mut ChaCha8Rng, family: GameFamily) -> Result<GameInstance> {
    let (structure, start) = if rng.gen_bool(0.5) {
        let b = FiniteBooleanAlgebra::with_atoms(rng.gen_range(2..=4))?;
        (Structure::Algebra(b), Start::Set(b.top()))
    } else {
        let q = random_set_poset(rng)?;
        let top = q.top().expect("the full set is the top");
        (Structure::Poset(q), Start::Element(top))
    };
    let (width, variant) = if family == GameFamily::GPoset {
        let width = match rng.gen_range(0..3) {
            0 => Width::Unbounded,
            w => Width::Bounded(1 + w),
        };
        (width, *[Variant::Exact, Variant::StrictPrefix].choose(rng).expect("nonempty"))
    } else {
        (Width::Unbounded, Variant::Exact)
    };
    GameInstance::new(
        structure,
        GameParams {
            family,
            start,
            rounds: rng.gen_range(1..=3),
            width,
            variant,
            flags: Flags { maximal: true, cut_current: rng.gen_bool(0.5) },
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_is_seeded_and_prefix_stable() {
        let a = generate_corpus(7, 20).unwrap();
        let b = generate_corpus(7, 30).unwrap();
        assert_eq!(a[..], b[..20]);
        assert_ne!(generate_corpus(8, 20).unwrap(), a);
    }

    #[test]
    fn corpus_instances_stay_within_the_load_limit() {
        for i in generate_corpus(3, 40).unwrap() {
            assert!(check_load(&i.game).unwrap() <= LOAD_LIMIT);
        }
    }

    #[test]
    fn default_corpus_covers_every_family() {
        let c = generate_corpus(DEFAULT_SEED, DEFAULT_SIZE).unwrap();
        for f in FAMILIES {
            assert_eq!(c.iter().filter(|i| i.game.family() == f).count(), 25);
        }
    }
}
