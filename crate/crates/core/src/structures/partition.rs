//! I-partitions: maximal collections of positive sets that are pairwise
//! disjoint modulo the family.

use super::family::MonotoneFamily;
use super::mask::Mask;
use crate::error::StructureError;

/// A collection of positive subsets of `of` with pairwise small
/// intersections. Maximality is a query, not an invariant.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IPartition {
    of: Mask,
    pieces: Vec<Mask>,
}

impl IPartition {
    pub fn new(family: &MonotoneFamily, of: Mask, pieces: Vec<Mask>) -> Result<Self, StructureError> {
        for (i, &p) in pieces.iter().enumerate() {
            if !p.is_subset(of) {
                return Err(StructureError::Precondition(format!("piece {p} is not inside {of}")));
            }
            if !family.is_positive(p) {
                return Err(StructureError::Precondition(format!("piece {p} is not positive")));
            }
            for &q in &pieces[i + 1..] {
                if family.is_positive(p.intersect(q)) {
                    return Err(StructureError::Precondition(format!(
                        "pieces {p} and {q} meet in a positive set"
                    )));
                }
            }
        }
        Ok(IPartition { of, pieces })
    }

    pub fn of(&self) -> Mask {
        self.of
    }

    pub fn pieces(&self) -> &[Mask] {
        &self.pieces
    }

    pub fn union(&self) -> Mask {
        self.pieces.iter().fold(Mask::EMPTY, |a, p| a.union(*p))
    }
}

/// Searches for a positive `A ⊆ W.of` that meets every piece of `W` in a
/// small set. Returns the first such `A` in mask order, or `None` when `W`
/// is maximal.
pub fn maximality_counterexample(family: &MonotoneFamily, w: &IPartition) -> Option<Mask> {
    w.of().subsets().find(|&a| {
        family.is_positive(a) && w.pieces().iter().all(|&b| !family.is_positive(a.intersect(b)))
    })
}

pub fn is_maximal_i_partition(family: &MonotoneFamily, w: &IPartition) -> bool {
    maximality_counterexample(family, w).is_none()
}

/// Canonical enumeration order for disjointification: lexicographic on the
/// increasing point lists.
pub fn lex_point_order(pieces: &[Mask]) -> Vec<Mask> {
    let mut v = pieces.to_vec();
    v.sort_by(|a, b| a.points().cmp(b.points()));
    v
}

/// The full disjointification of `pieces` (taken in the given order) as a
/// partition of `of`: piece 0 absorbs everything left uncovered, every
/// later piece loses what earlier pieces already cover.
pub fn full_disjointification(of: Mask, pieces: &[Mask]) -> Vec<Mask> {
    let covered = pieces.iter().fold(Mask::EMPTY, |a, p| a.union(*p));
    let mut seen = Mask::EMPTY;
    pieces
        .iter()
        .enumerate()
        .map(|(i, &w)| {
            let out = if i == 0 { w.union(of.minus(covered)) } else { w.minus(seen) };
            seen = seen.union(w);
            out
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structures::mask::GroundSet;

    fn m(s: &str) -> Mask {
        s.parse().unwrap()
    }

    fn pairs4() -> Vec<Mask> {
        (0..4usize)
            .flat_map(|a| (a + 1..4).map(move |b| Mask::from_points([a, b])))
            .collect()
    }

    #[test]
    fn maximality_examples() {
        let g = GroundSet::new(4).unwrap();
        let f = MonotoneFamily::size_at_most(g, 1);
        let x = g.full();
        let whole = IPartition::new(&f, x, vec![x]).unwrap();
        assert!(is_maximal_i_partition(&f, &whole));
        let all_pairs = IPartition::new(&f, x, pairs4()).unwrap();
        assert!(is_maximal_i_partition(&f, &all_pairs));
        let two = IPartition::new(&f, x, vec![m("{0,1}"), m("{2,3}")]).unwrap();
        assert_eq!(maximality_counterexample(&f, &two), Some(m("{0,2}")));
    }

    #[test]
    fn invalid_pieces_rejected() {
        let g = GroundSet::new(4).unwrap();
        let f = MonotoneFamily::size_at_most(g, 1);
        assert!(IPartition::new(&f, g.full(), vec![m("{0}")]).is_err());
        assert!(IPartition::new(&f, g.full(), vec![m("{0,1,2}"), m("{1,2}")]).is_err());
    }

    #[test]
    fn disjointification_examples() {
        let x = m("{0,1,2,3}");
        let order = lex_point_order(&pairs4());
        assert_eq!(
            full_disjointification(x, &order),
            vec![m("{0,1}"), m("{2}"), m("{3}"), m("{}"), m("{}"), m("{}")]
        );
        assert_eq!(full_disjointification(x, &[x]), vec![x]);
        let y = m("{0,1,2}");
        assert_eq!(full_disjointification(y, &[m("{0,1}"), m("{1,2}")]), vec![m("{0,1}"), m("{2}")]);
    }
}
