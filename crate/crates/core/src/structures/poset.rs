//! Finite posets of forcing conditions (up to 64 elements).

use serde::{Deserialize, Serialize};

use crate::error::StructureError;

pub const MAX_POSET: usize = 64;

/// Sets of poset elements.
pub type ElemSet = u64;

pub fn elems(set: ElemSet) -> impl Iterator<Item = usize> {
    (0..MAX_POSET).filter(move |i| set & (1u64 << i) != 0)
}

/// A partial order on `0..n`. `down[i]` holds every `j ≤ i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FinitePoset {
    down: Vec<ElemSet>,
    top: Option<usize>,
}

/// Outcome of [`FinitePoset::check_maximal_antichain_below`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AntichainCheck {
    Maximal,
    /// Two members have a common lower bound.
    NotAntichain(usize, usize),
    /// A member does not lie below the bound.
    NotBelow(usize),
    /// This element lies below the bound and is incompatible with every member.
    Extendable(usize),
}

impl FinitePoset {
    /// Builds the reflexive-transitive closure of `pairs` (`(a, b)` meaning
    /// `a ≤ b`) and rejects cycles.
    pub fn from_relations(n: usize, pairs: &[(usize, usize)]) -> Result<Self, StructureError> {
        if n == 0 || n > MAX_POSET {
            return Err(StructureError::NotPartialOrder(format!("size {n} outside 1..={MAX_POSET}")));
        }
        let mut down: Vec<ElemSet> = (0..n).map(|i| 1u64 << i).collect();
        for &(a, b) in pairs {
            if a >= n || b >= n {
                return Err(StructureError::NotPartialOrder(format!("pair ({a},{b}) out of range")));
            }
            down[b] |= 1u64 << a;
        }
        // Warshall closure
        for k in 0..n {
            for i in 0..n {
                if down[i] & (1u64 << k) != 0 {
                    down[i] |= down[k];
                }
            }
        }
        Self::from_down_sets(down)
    }

    /// Takes the relation as given and checks it is a partial order.
    pub fn from_down_sets(down: Vec<ElemSet>) -> Result<Self, StructureError> {
        let n = down.len();
        if n == 0 || n > MAX_POSET {
            return Err(StructureError::NotPartialOrder(format!("size {n} outside 1..={MAX_POSET}")));
        }
        for i in 0..n {
            if down[i] & (1u64 << i) == 0 {
                return Err(StructureError::NotPartialOrder(format!("{i} ≤ {i} missing")));
            }
            if n < 64 && down[i] >> n != 0 {
                return Err(StructureError::NotPartialOrder(format!("row {i} out of range")));
            }
            for j in elems(down[i]) {
                if j != i && down[j] & (1u64 << i) != 0 {
                    return Err(StructureError::NotPartialOrder(format!("{i} and {j} are mutually below")));
                }
                if down[j] & !down[i] != 0 {
                    return Err(StructureError::NotPartialOrder(format!("transitivity fails through {j} ≤ {i}")));
                }
            }
        }
        let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        let top = (0..n).find(|&i| down[i] == all);
        Ok(FinitePoset { down, top })
    }

    /// The chain `0 < 1 < .. < n-1`.
    pub fn chain(n: usize) -> Result<Self, StructureError> {
        let pairs: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Self::from_relations(n, &pairs)
    }

    /// Nonzero elements of the powerset algebra on `atoms` atoms, ordered by
    /// inclusion. Element `i` is the mask `i + 1`.
    pub fn powerset_algebra(atoms: usize) -> Result<Self, StructureError> {
        let n = (1usize << atoms) - 1;
        if atoms == 0 || n > MAX_POSET {
            return Err(StructureError::NotPartialOrder(format!("{atoms} atoms too many")));
        }
        let down = (1..=n as u32)
            .map(|x| {
                (1..=n as u32).filter(|y| y & !x == 0).fold(0u64, |acc, y| acc | 1u64 << (y - 1))
            })
            .collect();
        Self::from_down_sets(down)
    }

    pub fn len(&self) -> usize {
        self.down.len()
    }

    pub fn is_empty(&self) -> bool {
        self.down.is_empty()
    }

    pub fn top(&self) -> Option<usize> {
        self.top
    }

    pub fn all(&self) -> ElemSet {
        if self.len() == 64 {
            u64::MAX
        } else {
            (1u64 << self.len()) - 1
        }
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.down[b] & (1u64 << a) != 0
    }

    pub fn down(&self, x: usize) -> ElemSet {
        self.down[x]
    }

    pub fn down_sets(&self) -> &[ElemSet] {
        &self.down
    }

    pub fn compatible(&self, a: usize, b: usize) -> bool {
        self.down[a] & self.down[b] != 0
    }

    /// Every element below all members of `set` (all of Q for an empty set).
    pub fn lower_bounds(&self, set: &[usize]) -> ElemSet {
        set.iter().fold(self.all(), |acc, &x| acc & self.down[x])
    }

    pub fn check_maximal_antichain_below(&self, x: usize, a: &[usize]) -> AntichainCheck {
        for (i, &p) in a.iter().enumerate() {
            if !self.leq(p, x) {
                return AntichainCheck::NotBelow(p);
            }
            for &q in &a[i + 1..] {
                if self.compatible(p, q) {
                    return AntichainCheck::NotAntichain(p, q);
                }
            }
        }
        match elems(self.down[x]).find(|&e| a.iter().all(|&p| !self.compatible(e, p))) {
            Some(e) => AntichainCheck::Extendable(e),
            None => AntichainCheck::Maximal,
        }
    }

    pub fn is_maximal_antichain_below(&self, x: usize, a: &[usize]) -> bool {
        self.check_maximal_antichain_below(x, a) == AntichainCheck::Maximal
    }
}

/// Serialized form of a poset: size plus generating `a ≤ b` pairs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosetSpec {
    pub size: usize,
    pub relations: Vec<(usize, usize)>,
}

impl FinitePoset {
    /// Cover relations, enough to rebuild the order.
    pub fn to_spec(&self) -> PosetSpec {
        let n = self.len();
        let mut relations = Vec::new();
        for b in 0..n {
            for a in elems(self.down[b]) {
                if a == b {
                    continue;
                }
                let between = elems(self.down[b] & !(1u64 << b))
                    .any(|c| c != a && self.leq(a, c));
                if !between {
                    relations.push((a, b));
                }
            }
        }
        PosetSpec { size: n, relations }
    }

    pub fn from_spec(spec: &PosetSpec) -> Result<Self, StructureError> {
        Self::from_relations(spec.size, &spec.relations)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain_lower_bounds() {
        let c = FinitePoset::chain(3).unwrap();
        assert_eq!(c.lower_bounds(&[1, 2]), 0b011);
        assert_eq!(c.top(), Some(2));
    }

    #[test]
    fn rejects_cycles() {
        assert!(FinitePoset::from_relations(2, &[(0, 1), (1, 0)]).is_err());
        assert!(FinitePoset::from_down_sets(vec![0b01, 0b11, 0b110]).is_err());
    }

    #[test]
    fn algebra_antichains() {
        let q = FinitePoset::powerset_algebra(4).unwrap();
        let el = |mask: usize| mask - 1;
        let top = el(15);
        let atoms = [el(1), el(2), el(4), el(8)];
        assert!(q.is_maximal_antichain_below(top, &atoms));
        assert_eq!(q.check_maximal_antichain_below(top, &[el(3)]), AntichainCheck::Extendable(el(4)));
    }

    #[test]
    fn spec_roundtrip() {
        let q = FinitePoset::powerset_algebra(3).unwrap();
        assert_eq!(FinitePoset::from_spec(&q.to_spec()).unwrap(), q);
    }
}
