//! Monotone families and ideals: the notion of a "small" set that decides
//! who wins a cut-and-choose game.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::mask::{GroundSet, Mask};
use crate::error::StructureError;

/// How the members of a family are described.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FamilySpec {
    /// All sets with at most `k` points. `k = 1` is the singleton family.
    SizeAtMost { k: usize },
    /// All subsets of some generator.
    GeneratedBy { masks: Vec<Mask> },
    /// An explicit list of members, taken as given (no closure applied).
    Explicit { masks: Vec<Mask> },
}

/// A family of subsets of a ground set. Construction does not enforce
/// downward closure, so raw input can be inspected with [`validate_family`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MonotoneFamily {
    ground: GroundSet,
    spec: FamilySpec,
    explicit: BTreeSet<Mask>,
}

impl MonotoneFamily {
    pub fn new(ground: GroundSet, spec: FamilySpec) -> Result<Self, StructureError> {
        let check = |m: &Mask| {
            if ground.contains(*m) {
                Ok(())
            } else {
                Err(StructureError::MaskOutsideGround { mask: m.to_string(), ground: ground.size() })
            }
        };
        let explicit = match &spec {
            FamilySpec::SizeAtMost { .. } => BTreeSet::new(),
            FamilySpec::GeneratedBy { masks } => {
                masks.iter().try_for_each(check)?;
                BTreeSet::new()
            }
            FamilySpec::Explicit { masks } => {
                masks.iter().try_for_each(check)?;
                masks.iter().copied().collect()
            }
        };
        Ok(MonotoneFamily { ground, spec, explicit })
    }

    pub fn size_at_most(ground: GroundSet, k: usize) -> Self {
        MonotoneFamily { ground, spec: FamilySpec::SizeAtMost { k }, explicit: BTreeSet::new() }
    }

    /// The family `{∅}`: positivity is plain nonemptiness.
    pub fn trivial(ground: GroundSet) -> Self {
        Self::size_at_most(ground, 0)
    }

    pub fn generated_by(ground: GroundSet, masks: Vec<Mask>) -> Result<Self, StructureError> {
        Self::new(ground, FamilySpec::GeneratedBy { masks })
    }

    pub fn explicit(ground: GroundSet, masks: Vec<Mask>) -> Result<Self, StructureError> {
        Self::new(ground, FamilySpec::Explicit { masks })
    }

    pub fn ground(&self) -> GroundSet {
        self.ground
    }

    pub fn spec(&self) -> &FamilySpec {
        &self.spec
    }

    pub fn contains(&self, s: Mask) -> bool {
        match &self.spec {
            FamilySpec::SizeAtMost { k } => s.len() <= *k,
            FamilySpec::GeneratedBy { masks } => masks.iter().any(|g| s.is_subset(*g)),
            FamilySpec::Explicit { .. } => self.explicit.contains(&s),
        }
    }

    /// `s` is not a member of the family.
    pub fn is_positive(&self, s: Mask) -> bool {
        !self.contains(s)
    }

    /// Invariant under every permutation of the ground set.
    pub fn is_symmetric(&self) -> bool {
        matches!(self.spec, FamilySpec::SizeAtMost { .. })
    }

    /// Members in increasing mask order.
    pub fn members(&self) -> Vec<Mask> {
        match &self.spec {
            FamilySpec::Explicit { .. } => self.explicit.iter().copied().collect(),
            _ => self.ground.subsets().filter(|s| self.contains(*s)).collect(),
        }
    }

    /// Members that are maximal among the members contained in `within`.
    pub fn maximal_members_within(&self, within: Mask) -> Vec<Mask> {
        let inside: Vec<Mask> = match &self.spec {
            FamilySpec::GeneratedBy { masks } => {
                let mut v: Vec<Mask> = masks.iter().map(|g| g.intersect(within)).collect();
                v.sort();
                v.dedup();
                v
            }
            _ => within.subsets().filter(|s| self.contains(*s)).collect(),
        };
        inside
            .iter()
            .copied()
            .filter(|s| !inside.iter().any(|t| t != s && s.is_subset(*t)))
            .collect()
    }

    /// The family `{s ⊆ small ground : embed(s) ∈ self}` on a smaller ground.
    pub fn pullback(&self, small: GroundSet, embedding: &[usize]) -> MonotoneFamily {
        if let FamilySpec::SizeAtMost { k } = self.spec {
            return MonotoneFamily::size_at_most(small, k);
        }
        let masks = small
            .subsets()
            .filter(|s| self.contains(Mask::from_points(s.points().map(|p| embedding[p]))))
            .collect();
        MonotoneFamily::explicit(small, masks).expect("pullback stays inside the small ground")
    }
}

impl fmt::Display for MonotoneFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.spec {
            FamilySpec::SizeAtMost { k } => write!(f, "size_at_most {k}"),
            FamilySpec::GeneratedBy { masks } => write!(f, "generated_by {masks:?}"),
            FamilySpec::Explicit { masks } => write!(f, "explicit {masks:?}"),
        }
    }
}

/// Outcome of [`validate_family`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Validation {
    Ok,
    /// `member` is in the family but its subset `missing` is not.
    NotDownwardClosed { member: Mask, missing: Mask },
    MissingEmptySet,
    /// Both sets are members, their union is not.
    NotUnionClosed { left: Mask, right: Mask },
    /// The whole ground set is a member.
    NotProper,
}

impl Validation {
    pub fn is_ok(&self) -> bool {
        *self == Validation::Ok
    }
}

/// Checks the monotone-family invariants, and the ideal invariants when
/// `as_ideal` is set. Reports the first violation found in canonical order.
pub fn validate_family(f: &MonotoneFamily, as_ideal: bool) -> Validation {
    let members = f.members();
    for &s in &members {
        if let Some(missing) = s.subsets().skip(1).find(|t| !f.contains(*t)) {
            return Validation::NotDownwardClosed { member: s, missing };
        }
    }
    if !f.contains(Mask::EMPTY) {
        return Validation::MissingEmptySet;
    }
    if as_ideal {
        for (i, &a) in members.iter().enumerate() {
            for &b in &members[i + 1..] {
                if !f.contains(a.union(b)) {
                    return Validation::NotUnionClosed { left: a, right: b };
                }
            }
        }
        if f.contains(f.ground().full()) {
            return Validation::NotProper;
        }
    }
    Validation::Ok
}

/// A proper, union-closed monotone family.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Ideal(MonotoneFamily);

impl Ideal {
    pub fn new(family: MonotoneFamily) -> Result<Self, StructureError> {
        match validate_family(&family, true) {
            Validation::Ok => Ok(Ideal(family)),
            other => Err(StructureError::NotIdeal(format!("{other:?}"))),
        }
    }

    /// The ideal generated by `masks`: all subsets of their union.
    pub fn generated_by(ground: GroundSet, masks: &[Mask]) -> Result<Self, StructureError> {
        let union = masks.iter().fold(Mask::EMPTY, |a, m| a.union(*m));
        Ideal::new(MonotoneFamily::generated_by(ground, vec![union])?)
    }

    pub fn family(&self) -> &MonotoneFamily {
        &self.0
    }

    /// Finite ideals are principal: the largest member.
    pub fn kernel(&self) -> Mask {
        self.0.members().into_iter().fold(Mask::EMPTY, Mask::union)
    }
}

impl std::ops::Deref for Ideal {
    type Target = MonotoneFamily;
    fn deref(&self) -> &MonotoneFamily {
        &self.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(n: usize) -> GroundSet {
        GroundSet::new(n).unwrap()
    }

    fn m(s: &str) -> Mask {
        s.parse().unwrap()
    }

    #[test]
    fn singleton_family_is_monotone_not_ideal() {
        let f = MonotoneFamily::explicit(g(2), vec![m("{}"), m("{0}"), m("{1}")]).unwrap();
        assert!(validate_family(&f, false).is_ok());
        assert_eq!(
            validate_family(&f, true),
            Validation::NotUnionClosed { left: m("{0}"), right: m("{1}") }
        );
    }

    #[test]
    fn missing_subset_witness() {
        let f = MonotoneFamily::explicit(g(2), vec![m("{0,1}")]).unwrap();
        assert_eq!(
            validate_family(&f, false),
            Validation::NotDownwardClosed { member: m("{0,1}"), missing: m("{0}") }
        );
    }

    #[test]
    fn positivity() {
        let s1 = MonotoneFamily::size_at_most(g(3), 1);
        assert!(s1.is_positive(m("{0,1}")));
        assert!(!s1.is_positive(m("{0}")));
        let gen = MonotoneFamily::generated_by(g(3), vec![m("{0,1}")]).unwrap();
        assert!(!gen.is_positive(m("{0,1}")));
        assert!(gen.is_positive(m("{2}")));
    }

    #[test]
    fn ideal_generation_closes_unions() {
        let i = Ideal::generated_by(g(6), &[m("{0}"), m("{1}")]).unwrap();
        assert!(i.contains(m("{0,1}")));
        assert_eq!(i.kernel(), m("{0,1}"));
        assert!(Ideal::new(MonotoneFamily::size_at_most(g(3), 3)).is_err());
    }

    #[test]
    fn generated_descriptors_validate() {
        for f in [
            MonotoneFamily::size_at_most(g(5), 2),
            MonotoneFamily::generated_by(g(5), vec![m("{0,3}"), m("{1,2,4}")]).unwrap(),
        ] {
            assert!(validate_family(&f, false).is_ok());
        }
    }

    #[test]
    fn maximal_members() {
        let f = MonotoneFamily::size_at_most(g(4), 2);
        assert_eq!(f.maximal_members_within(m("{0,1,2}")).len(), 3);
        let gen = MonotoneFamily::generated_by(g(4), vec![m("{0,1}"), m("{0}")]).unwrap();
        assert_eq!(gen.maximal_members_within(m("{0,1,2}")), vec![m("{0,1}")]);
    }
}
