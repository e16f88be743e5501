//! Canonically ordered enumeration of Cut's moves: disjoint partitions,
//! I-partitions and maximal antichains.
//!
//! Every enumerator returns pieces sorted by mask (or element index) and
//! moves sorted lexicographically by their piece sequence, so repeated runs
//! agree exactly.

use super::family::MonotoneFamily;
use super::mask::Mask;
use super::poset::FinitePoset;
use crate::error::StructureError;

/// Limits shared by all enumerators.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumOptions {
    /// Maximum number of pieces; `None` is unbounded.
    pub width: Option<usize>,
    /// Only emit maximal collections. Switching this off is the ablation
    /// setting in which Cut may leave part of the target uncovered.
    pub maximal: bool,
    /// Maximum number of emitted moves.
    pub budget: usize,
}

impl EnumOptions {
    pub fn new(width: Option<usize>) -> Self {
        EnumOptions { width, maximal: true, budget: DEFAULT_MOVE_BUDGET }
    }
}

pub const DEFAULT_MOVE_BUDGET: usize = 200_000;

/// Largest target on which the I-partition enumerator runs.
pub const MAX_IPARTITION_TARGET: usize = 12;

fn capacity(limit: usize) -> StructureError {
    StructureError::Capacity { what: "cut moves", limit }
}

/// Unordered partitions of `target` into `2..=width` nonempty pieces. A
/// one-point target has the single move `[target]`.
pub fn disjoint_partitions(target: Mask, width: Option<usize>, budget: usize) -> Result<Vec<Vec<Mask>>, StructureError> {
    if target.is_empty() {
        return Err(StructureError::Precondition("cannot cut the empty set".into()));
    }
    if target.len() == 1 {
        return Ok(vec![vec![target]]);
    }
    let width = width.unwrap_or(usize::MAX);
    if width < 2 {
        return Err(StructureError::Precondition("width must be at least 2".into()));
    }
    let points: Vec<usize> = target.points().collect();
    let mut out = Vec::new();
    let mut blocks: Vec<Mask> = Vec::new();
    fn rec(
        points: &[usize],
        i: usize,
        width: usize,
        blocks: &mut Vec<Mask>,
        out: &mut Vec<Vec<Mask>>,
        budget: usize,
    ) -> Result<(), StructureError> {
        if i == points.len() {
            if blocks.len() >= 2 {
                if out.len() == budget {
                    return Err(capacity(budget));
                }
                let mut v = blocks.clone();
                v.sort();
                out.push(v);
            }
            return Ok(());
        }
        let p = Mask::singleton(points[i]);
        for b in 0..blocks.len() {
            blocks[b] = blocks[b].union(p);
            rec(points, i + 1, width, blocks, out, budget)?;
            blocks[b] = blocks[b].minus(p);
        }
        if blocks.len() < width {
            blocks.push(p);
            rec(points, i + 1, width, blocks, out, budget)?;
            blocks.pop();
        }
        Ok(())
    }
    rec(&points, 0, width, &mut blocks, &mut out, budget)?;
    out.sort();
    Ok(out)
}

/// Growable bit set over candidate indices.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Bits(Vec<u64>);

impl Bits {
    fn new(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64)])
    }
    fn full(n: usize) -> Self {
        let mut b = Bits::new(n);
        for i in 0..n {
            b.set(i);
        }
        b
    }
    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }
    fn and(&self, other: &Bits) -> Bits {
        Bits(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }
    fn is_empty(&self) -> bool {
        self.0.iter().all(|w| *w == 0)
    }
    /// Set bits strictly above `i`.
    fn iter_above(&self, i: Option<usize>) -> impl Iterator<Item = usize> + '_ {
        let start = i.map_or(0, |i| i + 1);
        (start..self.0.len() * 64).filter(move |&j| self.0[j / 64] & (1 << (j % 64)) != 0)
    }
}

/// Enumerates cliques of the "may coexist" relation `compat` in
/// lexicographic order of their increasing index sequences.
fn cliques(compat: &[Bits], opts: EnumOptions) -> Result<Vec<Vec<usize>>, StructureError> {
    let n = compat.len();
    let width = opts.width.unwrap_or(usize::MAX);
    let mut out = Vec::new();
    let mut chosen = Vec::new();
    let mut nodes = 0usize;
    let node_limit = opts.budget.saturating_mul(64);
    #[allow(clippy::too_many_arguments)]
    fn rec(
        compat: &[Bits],
        common: &Bits,
        chosen: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
        width: usize,
        opts: EnumOptions,
        nodes: &mut usize,
        node_limit: usize,
    ) -> Result<(), StructureError> {
        *nodes += 1;
        if *nodes > node_limit {
            return Err(StructureError::Capacity { what: "enumeration nodes", limit: node_limit });
        }
        if !chosen.is_empty() && (!opts.maximal || common.is_empty()) {
            if out.len() == opts.budget {
                return Err(capacity(opts.budget));
            }
            out.push(chosen.clone());
        }
        if chosen.len() == width {
            return Ok(());
        }
        let next: Vec<usize> = common.iter_above(chosen.last().copied()).collect();
        for j in next {
            let narrowed = common.and(&compat[j]);
            chosen.push(j);
            rec(compat, &narrowed, chosen, out, width, opts, nodes, node_limit)?;
            chosen.pop();
        }
        Ok(())
    }
    rec(compat, &Bits::full(n), &mut chosen, &mut out, width, opts, &mut nodes, node_limit)?;
    Ok(out)
}

/// Collections of positive subsets of `target` with pairwise intersections
/// in `family`, of size at most `width`; maximal ones only unless
/// `opts.maximal` is off.
pub fn i_partitions(family: &MonotoneFamily, target: Mask, opts: EnumOptions) -> Result<Vec<Vec<Mask>>, StructureError> {
    if !family.is_positive(target) {
        return Err(StructureError::Precondition(format!("target {target} is not positive")));
    }
    if target.len() > MAX_IPARTITION_TARGET {
        return Err(StructureError::Capacity { what: "I-partition target points", limit: MAX_IPARTITION_TARGET });
    }
    let candidates: Vec<Mask> = target.subsets().filter(|s| family.is_positive(*s)).collect();
    let compat: Vec<Bits> = candidates
        .iter()
        .map(|a| {
            let mut b = Bits::new(candidates.len());
            for (j, c) in candidates.iter().enumerate() {
                if !family.is_positive(a.intersect(*c)) {
                    b.set(j);
                }
            }
            b
        })
        .collect();
    Ok(cliques(&compat, opts)?
        .into_iter()
        .map(|c| c.into_iter().map(|i| candidates[i]).collect())
        .collect())
}

/// Antichains of `poset` below `below`, maximal ones only unless
/// `opts.maximal` is off.
pub fn poset_antichains(poset: &FinitePoset, below: usize, opts: EnumOptions) -> Result<Vec<Vec<usize>>, StructureError> {
    let candidates: Vec<usize> = super::poset::elems(poset.down(below)).collect();
    let compat: Vec<Bits> = candidates
        .iter()
        .map(|&a| {
            let mut b = Bits::new(candidates.len());
            for (j, &c) in candidates.iter().enumerate() {
                if !poset.compatible(a, c) {
                    b.set(j);
                }
            }
            b
        })
        .collect();
    Ok(cliques(&compat, opts)?
        .into_iter()
        .map(|c| c.into_iter().map(|i| candidates[i]).collect())
        .collect())
}

/// Antichains of nonzero elements below `target` in a powerset algebra.
/// Maximal antichains are exactly the partitions of `target` (including the
/// one-piece partition).
pub fn algebra_antichains(target: Mask, opts: EnumOptions) -> Result<Vec<Vec<Mask>>, StructureError> {
    if target.is_empty() {
        return Err(StructureError::Precondition("cannot cut the zero element".into()));
    }
    let trivial = MonotoneFamily::trivial(super::mask::GroundSet::new(32 - target.bits().leading_zeros() as usize)?);
    i_partitions(&trivial, target, opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structures::mask::GroundSet;
    use crate::structures::partition::{is_maximal_i_partition, IPartition};

    fn m(s: &str) -> Mask {
        s.parse().unwrap()
    }

    #[test]
    fn three_binary_partitions() {
        let moves = disjoint_partitions(m("{0,1,2}"), Some(2), 100).unwrap();
        assert_eq!(
            moves,
            vec![
                vec![m("{0}"), m("{1,2}")],
                vec![m("{1}"), m("{0,2}")],
                vec![m("{0,1}"), m("{2}")],
            ]
        );
    }

    #[test]
    fn stirling_counts() {
        // S(5,2)+S(5,3) = 15 + 25
        assert_eq!(disjoint_partitions(m("{0,1,2,3,4}"), Some(3), 1000).unwrap().len(), 40);
        // Bell(5) - 1
        assert_eq!(disjoint_partitions(m("{0,1,2,3,4}"), None, 1000).unwrap().len(), 51);
        assert_eq!(disjoint_partitions(m("{3}"), Some(2), 10).unwrap(), vec![vec![m("{3}")]]);
    }

    #[test]
    fn budget_is_a_typed_error() {
        let err = disjoint_partitions(Mask::full(10), Some(2), 10).unwrap_err();
        assert!(matches!(err, StructureError::Capacity { .. }));
    }

    #[test]
    fn i_partition_mode() {
        let g = GroundSet::new(4).unwrap();
        let f = MonotoneFamily::size_at_most(g, 1);
        let all_pairs: Vec<Mask> = g.full().subsets().filter(|s| s.len() == 2).collect();
        let moves = i_partitions(&f, g.full(), EnumOptions::new(Some(6))).unwrap();
        assert!(moves.contains(&all_pairs));
        let split = vec![m("{0,1}"), m("{2,3}")];
        assert!(!moves.contains(&split));
        for w in &moves {
            let p = IPartition::new(&f, g.full(), w.clone()).unwrap();
            assert!(is_maximal_i_partition(&f, &p));
        }
        let mut loose = EnumOptions::new(Some(6));
        loose.maximal = false;
        assert!(i_partitions(&f, g.full(), loose).unwrap().contains(&split));
    }

    #[test]
    fn algebra_atoms_are_a_move() {
        let moves = algebra_antichains(m("{0,1,2,3}"), EnumOptions::new(Some(4))).unwrap();
        assert!(moves.contains(&vec![m("{0}"), m("{1}"), m("{2}"), m("{3}")]));
        assert!(moves.contains(&vec![m("{0,1,2,3}")]));
        // Bell(4)
        assert_eq!(algebra_antichains(m("{0,1,2,3}"), EnumOptions::new(None)).unwrap().len(), 15);
    }

    #[test]
    fn poset_and_algebra_agree() {
        let q = FinitePoset::powerset_algebra(3).unwrap();
        let via_poset = poset_antichains(&q, 6, EnumOptions::new(None)).unwrap();
        let via_masks = algebra_antichains(m("{0,1,2}"), EnumOptions::new(None)).unwrap();
        let mut translated: Vec<Vec<Mask>> = via_poset
            .iter()
            .map(|a| a.iter().map(|&e| Mask(e as u32 + 1)).collect())
            .collect();
        translated.sort();
        let mut sorted = via_masks.clone();
        sorted.sort();
        assert_eq!(translated, sorted);
    }
}
