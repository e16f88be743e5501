//! Distributivity by direct search over sequences of maximal antichains.
//!
//! The search never consults the solver: it walks sequences of cuts of the
//! start, tracking the set of positions a branch can still be at. A sequence
//! whose live set dies out is a branchless witness.

use std::collections::{BTreeSet, HashSet};

use serde::{Deserialize, Serialize};

use crate::engine::{Core, Flags, GameFamily, GameInstance, GameParams, GameState, Move, Role, Start, Structure, Variant, Width};
use crate::error::{Error, Result};
use crate::structures::{Ideal, Mask};

/// Which branches count.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DistributivityVariant {
    /// The whole branch has a lower bound.
    Plain,
    /// Every proper initial segment has a lower bound.
    Uniform,
    /// Every proper initial segment meets positively and the whole branch
    /// meets nonemptily.
    IdealWeak,
}

impl DistributivityVariant {
    /// The game variant whose Cut wins correspond to failures.
    pub fn game_variant(self) -> Variant {
        match self {
            DistributivityVariant::Plain => Variant::Exact,
            DistributivityVariant::Uniform => Variant::StrictPrefix,
            DistributivityVariant::IdealWeak => Variant::Weak,
        }
    }

    pub fn for_game_variant(v: Variant) -> Self {
        match v {
            Variant::Exact => DistributivityVariant::Plain,
            Variant::StrictPrefix => DistributivityVariant::Uniform,
            Variant::Weak => DistributivityVariant::IdealWeak,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Distributivity {
    Holds {
        /// Distinct (level, live set) nodes explored.
        nodes: usize,
    },
    Fails {
        /// A sequence of cuts with no branch.
        sequence: Vec<Move>,
        /// Positions still reachable by a branch after each level; the last
        /// entry holds no acceptable position.
        live: Vec<Vec<String>>,
    },
}

impl Distributivity {
    pub fn holds(&self) -> bool {
        matches!(self, Distributivity::Holds { .. })
    }
}

/// The cut-and-choose game whose Cut moves are the antichains searched.
pub fn carrier_game(structure: &Structure, start: Start, n: usize, width: Width, maximal: bool) -> Result<GameInstance> {
    let family = match structure {
        Structure::Sets(_) => GameFamily::GIdeal,
        _ => GameFamily::GPoset,
    };
    GameInstance::new(
        structure.clone(),
        GameParams { family, start, rounds: n, width, variant: Variant::Exact, flags: Flags { maximal, cut_current: false } },
    )
}

fn nonempty(core: Core) -> bool {
    match core {
        Core::Set(m) => !m.is_empty(),
        Core::Elems(e) => e != 0,
        Core::Element(_) => true,
    }
}

fn below(a: Core, b: Core) -> bool {
    match (a, b) {
        (Core::Set(x), Core::Set(y)) => x.is_subset(y),
        (Core::Elems(x), Core::Elems(y)) => x & !y == 0,
        _ => a == b,
    }
}

/// Drops cores contained in another live core: every branch continuing
/// through the smaller one also continues through the larger.
fn maximal_cores(cores: impl Iterator<Item = Core>) -> BTreeSet<Core> {
    let all: Vec<Core> = cores.collect();
    all.iter().filter(|&&c| !all.iter().any(|&d| d != c && below(c, d))).copied().collect()
}

/// Every piece of `a` lies below some piece of `b`.
fn refines(structure: &Structure, a: &Move, b: &Move) -> bool {
    match (a, b) {
        (Move::Partition(x), Move::Partition(y)) => x.iter().all(|p| y.iter().any(|q| p.is_subset(*q))),
        (Move::Antichain(x), Move::Antichain(y)) => match structure {
            Structure::Poset(q) => x.iter().all(|p| y.iter().any(|r| q.leq(*p, *r))),
            _ => false,
        },
        _ => false,
    }
}

/// Cuts not strictly refined by another cut. A refinement leaves a live set
/// dominated by the coarser cut's, so it fails whenever the coarser one does.
fn finest_cuts(structure: &Structure, cuts: Vec<Move>) -> Vec<Move> {
    let strictly = |a: &Move, b: &Move| refines(structure, a, b) && !refines(structure, b, a);
    cuts.iter().filter(|w| !cuts.iter().any(|v| strictly(v, w))).cloned().collect()
}

struct Search<'a> {
    game: &'a GameInstance,
    cuts: Vec<Move>,
    variant: DistributivityVariant,
    /// Levels whose meets must be positive; the level after them is judged
    /// by `last_ok`.
    depth: usize,
    survived: HashSet<(usize, BTreeSet<Core>)>,
    budget: usize,
}

impl Search<'_> {
    fn step(&self, live: &BTreeSet<Core>, cut: &Move, level: usize) -> Result<BTreeSet<Core>> {
        let mut next = BTreeSet::new();
        if let (Move::Partition(pieces), false) = (cut, self.game.flags().cut_current) {
            for &core in live {
                if let Core::Set(c) = core {
                    next.extend(pieces.iter().map(|w| Core::Set(c.intersect(*w))));
                    continue;
                }
                return self.step_by_referee(live, cut, level);
            }
            return Ok(next);
        }
        self.step_by_referee(live, cut, level)
    }

    fn step_by_referee(&self, live: &BTreeSet<Core>, cut: &Move, level: usize) -> Result<BTreeSet<Core>> {
        let mut next = BTreeSet::new();
        let mut s = GameState { round: level, turn: Role::Choose, core: Core::Set(Mask::EMPTY), pending: Some(cut.clone()) };
        for &core in live {
            s.core = core;
            for i in 0..cut.len() {
                next.insert(self.game.apply_move(&s, &Move::Pick(i))?.core);
            }
        }
        Ok(next)
    }

    /// A failing continuation from `live` at `level`, if any.
    fn fails(&mut self, level: usize, live: BTreeSet<Core>, trail: &mut Vec<(Move, BTreeSet<Core>)>) -> Result<bool> {
        if level == self.depth {
            let ok = |c: &Core| match self.variant {
                DistributivityVariant::IdealWeak => nonempty(*c),
                _ => self.game.core_is_positive(*c),
            };
            if self.variant != DistributivityVariant::IdealWeak {
                return Ok(live.is_empty());
            }
            // one more level, judged by nonemptiness
            for cut in self.cuts.clone() {
                let next = self.step(&live, &cut, level)?;
                if !next.iter().any(ok) {
                    trail.push((cut, next));
                    return Ok(true);
                }
            }
            return Ok(false);
        }
        if live.is_empty() {
            return Ok(true);
        }
        if self.survived.contains(&(level, live.clone())) {
            return Ok(false);
        }
        if self.survived.len() >= self.budget {
            return Err(Error::Capacity { what: "distributivity nodes".into(), limit: self.budget, states_visited: self.survived.len() });
        }
        for cut in self.cuts.clone() {
            let next = maximal_cores(self.step(&live, &cut, level)?.into_iter().filter(|c| self.game.core_is_positive(*c)));
            trail.push((cut, next.clone()));
            if self.fails(level + 1, next, trail)? {
                return Ok(true);
            }
            trail.pop();
        }
        self.survived.insert((level, live));
        Ok(false)
    }
}

/// Searches every length-`n` sequence of maximal antichains (I-partitions
/// for set structures) of `start` with at most `width` pieces for one
/// without an acceptable branch.
pub fn check_distributivity(
    structure: &Structure,
    start: Start,
    n: usize,
    width: Width,
    variant: DistributivityVariant,
) -> Result<Distributivity> {
    check_distributivity_with(structure, start, n, width, variant, true, 1_000_000)
}

/// As [`check_distributivity`], optionally admitting non-maximal antichains,
/// with a budget on explored nodes.
pub fn check_distributivity_with(
    structure: &Structure,
    start: Start,
    n: usize,
    width: Width,
    variant: DistributivityVariant,
    maximal: bool,
    budget: usize,
) -> Result<Distributivity> {
    let game = carrier_game(structure, start, n, width, maximal)?;
    let s0 = game.initial_state();
    let cuts = finest_cuts(structure, game.legal_moves(&s0)?);
    let depth = match variant {
        DistributivityVariant::Plain => n,
        DistributivityVariant::Uniform | DistributivityVariant::IdealWeak => n - 1,
    };
    let mut search = Search { game: &game, cuts, variant, depth, survived: HashSet::new(), budget };
    let mut trail = Vec::new();
    let live = BTreeSet::from([s0.core]);
    if search.fails(0, live, &mut trail)? {
        let mut sequence: Vec<Move> = trail.iter().map(|(m, _)| m.clone()).collect();
        let mut live: Vec<Vec<String>> = trail.iter().map(|(_, l)| l.iter().map(Core::to_string).collect()).collect();
        // pad with arbitrary cuts up to length n; they cannot revive a branch
        while sequence.len() < n {
            sequence.push(search.cuts[0].clone());
            live.push(Vec::new());
        }
        return Ok(Distributivity::Fails { sequence, live });
    }
    Ok(Distributivity::Holds { nodes: search.survived.len() })
}

/// The first branch through `seq` (in canonical index order) that the
/// variant accepts, as piece indices.
pub fn branch_through(game: &GameInstance, seq: &[Move], variant: DistributivityVariant) -> Result<Option<Vec<usize>>> {
    fn walk(
        game: &GameInstance,
        seq: &[Move],
        variant: DistributivityVariant,
        state: &GameState,
        path: &mut Vec<usize>,
    ) -> Result<bool> {
        let level = path.len();
        if level == seq.len() {
            return Ok(true);
        }
        let cut = &seq[level];
        let s = GameState { round: level, turn: Role::Choose, core: state.core, pending: Some(cut.clone()) };
        for i in 0..cut.len() {
            let next = game.apply_move(&s, &Move::Pick(i))?;
            let last = level + 1 == seq.len();
            let ok = match (variant, last) {
                (DistributivityVariant::Plain, _) | (_, false) => game.core_is_positive(next.core),
                (DistributivityVariant::Uniform, true) => true,
                (DistributivityVariant::IdealWeak, true) => nonempty(next.core),
            };
            if ok {
                path.push(i);
                if walk(game, seq, variant, &next, path)? {
                    return Ok(true);
                }
                path.pop();
            }
        }
        Ok(false)
    }
    let mut path = Vec::new();
    let found = walk(game, seq, variant, &game.initial_state(), &mut path)?;
    Ok(found.then_some(path))
}

/// Distributivity of the ideal in its weak form with unbounded width, from
/// every positive set.
pub fn precipitous_analog(ideal: &Ideal, n: usize) -> Result<bool> {
    let f = ideal.family();
    let structure = Structure::Sets(f.clone());
    for x in f.ground().subsets().filter(|x| f.is_positive(*x)) {
        let d = check_distributivity(&structure, Start::Set(x), n, Width::Unbounded, DistributivityVariant::IdealWeak)?;
        if !d.holds() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The positive subsets of the structure's universe, used to quantify over
/// starting positions.
pub fn positive_starts(structure: &Structure) -> Vec<Start> {
    match structure {
        Structure::Poset(q) => (0..q.len()).map(Start::Element).collect(),
        s => {
            let u = s.universe().expect("set-like");
            u.subsets().filter(|x| s.is_positive(*x)).map(Start::Set).collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structures::{FiniteBooleanAlgebra, GroundSet, MonotoneFamily};

    fn m(s: &str) -> Mask {
        s.parse().unwrap()
    }

    #[test]
    fn algebras_are_distributive() {
        for atoms in 1..=3 {
            let b = FiniteBooleanAlgebra::with_atoms(atoms).unwrap();
            let s = Structure::Algebra(b);
            for n in 1..=2 {
                let d = check_distributivity(&s, Start::Set(b.top()), n, Width::Bounded(2), DistributivityVariant::Plain).unwrap();
                assert!(d.holds());
            }
        }
    }

    #[test]
    fn ablation_fails_with_a_certificate() {
        let f = MonotoneFamily::size_at_most(GroundSet::new(4).unwrap(), 1);
        let s = Structure::Sets(f);
        let d = check_distributivity_with(&s, Start::Set(m("{0,1,2,3}")), 2, Width::Bounded(2), DistributivityVariant::Plain, false, 100_000)
            .unwrap();
        let Distributivity::Fails { sequence, live } = d else { panic!("expected failure") };
        assert_eq!(sequence.len(), 2);
        assert!(live.last().unwrap().is_empty());
    }

    #[test]
    fn whole_set_sequence_has_the_obvious_branch() {
        let f = MonotoneFamily::size_at_most(GroundSet::new(3).unwrap(), 1);
        let g = carrier_game(&Structure::Sets(f), Start::Set(m("{0,1,2}")), 1, Width::Unbounded, true).unwrap();
        let seq = vec![Move::Partition(vec![m("{0,1,2}")])];
        assert_eq!(branch_through(&g, &seq, DistributivityVariant::Plain).unwrap(), Some(vec![0]));
    }

    #[test]
    fn trivial_ideal_is_precipitous() {
        let i = Ideal::generated_by(GroundSet::new(3).unwrap(), &[]).unwrap();
        assert!(precipitous_analog(&i, 2).unwrap());
    }
}
