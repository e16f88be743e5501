//! Finite Boolean algebras, represented as powerset algebras over atoms.

use super::family::{validate_family, MonotoneFamily, Validation};
use super::mask::{GroundSet, Mask};
use crate::error::StructureError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FiniteBooleanAlgebra {
    atoms: GroundSet,
}

impl FiniteBooleanAlgebra {
    pub fn new(atoms: GroundSet) -> Self {
        FiniteBooleanAlgebra { atoms }
    }

    pub fn with_atoms(n: usize) -> Result<Self, StructureError> {
        Ok(Self::new(GroundSet::new(n)?))
    }

    pub fn atoms(&self) -> GroundSet {
        self.atoms
    }

    pub fn top(&self) -> Mask {
        self.atoms.full()
    }

    pub fn zero(&self) -> Mask {
        Mask::EMPTY
    }

    pub fn contains(&self, x: Mask) -> bool {
        self.atoms.contains(x)
    }

    pub fn sup(&self, xs: &[Mask]) -> Mask {
        xs.iter().fold(Mask::EMPTY, |a, x| a.union(*x))
    }

    /// Infimum; the empty infimum is the top element.
    pub fn inf(&self, xs: &[Mask]) -> Mask {
        xs.iter().fold(self.top(), |a, x| a.intersect(*x))
    }

    pub fn complement(&self, x: Mask) -> Mask {
        self.top().minus(x)
    }

    pub fn compatible(&self, a: Mask, b: Mask) -> bool {
        !a.is_disjoint(b)
    }

    /// Pairwise disjoint nonzero elements below `x` whose join is `x`.
    pub fn is_maximal_antichain_below(&self, x: Mask, a: &[Mask]) -> bool {
        let pairwise = a.iter().enumerate().all(|(i, p)| {
            !p.is_empty() && p.is_subset(x) && a[i + 1..].iter().all(|q| p.is_disjoint(*q))
        });
        pairwise && self.sup(a) == x
    }

    /// First nonzero element below `x` incompatible with all of `a`.
    pub fn antichain_extension(&self, x: Mask, a: &[Mask]) -> Option<Mask> {
        let rest = x.minus(self.sup(a));
        rest.first().map(Mask::singleton)
    }
}

/// `P(ground)/I` together with the projection onto it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientAlgebra {
    algebra: FiniteBooleanAlgebra,
    kernel: Mask,
    survivors: Mask,
}

impl QuotientAlgebra {
    pub fn algebra(&self) -> FiniteBooleanAlgebra {
        self.algebra
    }

    /// The largest member of the ideal.
    pub fn kernel(&self) -> Mask {
        self.kernel
    }

    /// The class of `s`, as an element of the quotient algebra.
    pub fn project(&self, s: Mask) -> Mask {
        s.minus(self.kernel).compress(self.survivors)
    }

    /// The largest representative of a class.
    pub fn lift(&self, class: Mask) -> Mask {
        class.expand(self.survivors).union(self.kernel)
    }
}

/// Builds `P(ground)/I`. Finite ideals are principal, so the quotient is
/// the powerset algebra on the points outside the ideal's largest member.
pub fn quotient_algebra(ground: GroundSet, ideal: &MonotoneFamily) -> Result<QuotientAlgebra, StructureError> {
    if ideal.ground() != ground {
        return Err(StructureError::Precondition("ideal lives on a different ground set".into()));
    }
    match validate_family(ideal, true) {
        Validation::Ok => {}
        other => return Err(StructureError::NotIdeal(format!("{other:?}"))),
    }
    let kernel = ideal.members().into_iter().fold(Mask::EMPTY, Mask::union);
    let survivors = ground.full().minus(kernel);
    let algebra = FiniteBooleanAlgebra::new(GroundSet::new(survivors.len())?);
    Ok(QuotientAlgebra { algebra, kernel, survivors })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(s: &str) -> Mask {
        s.parse().unwrap()
    }

    #[test]
    fn lattice_ops() {
        let b = FiniteBooleanAlgebra::with_atoms(3).unwrap();
        assert_eq!(b.sup(&[m("{0}"), m("{1}")]), m("{0,1}"));
        assert_eq!(b.inf(&[m("{0,1}"), m("{0,2}")]), m("{0}"));
        let b2 = FiniteBooleanAlgebra::with_atoms(2).unwrap();
        assert_eq!(b2.complement(m("{0}")), m("{1}"));
    }

    #[test]
    fn quotient_examples() {
        let g3 = GroundSet::new(3).unwrap();
        let i = MonotoneFamily::generated_by(g3, vec![m("{2}")]).unwrap();
        let q = quotient_algebra(g3, &i).unwrap();
        assert_eq!(q.algebra().atoms().size(), 2);

        let g2 = GroundSet::new(2).unwrap();
        let trivial = MonotoneFamily::trivial(g2);
        let q = quotient_algebra(g2, &trivial).unwrap();
        let images: Vec<Mask> = g2.subsets().map(|s| q.project(s)).collect();
        assert_eq!(images, vec![m("{}"), m("{0}"), m("{1}"), m("{0,1}")]);

        let i0 = MonotoneFamily::generated_by(g2, vec![m("{0}")]).unwrap();
        let q = quotient_algebra(g2, &i0).unwrap();
        assert_eq!(q.project(m("{}")), q.project(m("{0}")));
        assert_eq!(q.project(m("{}")), Mask::EMPTY);
        assert_eq!(q.project(m("{1}")), q.project(m("{0,1}")));
        assert_eq!(q.project(m("{1}")), m("{0}"));
    }

    #[test]
    fn quotient_rejects_non_ideals() {
        let g2 = GroundSet::new(2).unwrap();
        let s = MonotoneFamily::size_at_most(g2, 1);
        assert!(matches!(quotient_algebra(g2, &s), Err(StructureError::NotIdeal(_))));
    }

    #[test]
    fn extension_of_non_maximal() {
        let b = FiniteBooleanAlgebra::with_atoms(4).unwrap();
        assert!(!b.is_maximal_antichain_below(b.top(), &[m("{0,1}")]));
        assert_eq!(b.antichain_extension(b.top(), &[m("{0,1}")]), Some(m("{2}")));
        assert!(b.is_maximal_antichain_below(b.top(), &[m("{0}"), m("{1}"), m("{2}"), m("{3}")]));
    }
}
