//! Subsets of a small ground set, stored as bit masks.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::StructureError;

/// Hard cap on the number of points in a ground set.
pub const MAX_GROUND: usize = 24;

/// A finite ground set `{0, .., size-1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "usize", into = "usize")]
pub struct GroundSet {
    size: usize,
}

impl GroundSet {
    pub fn new(size: usize) -> Result<Self, StructureError> {
        if size == 0 || size > MAX_GROUND {
            return Err(StructureError::GroundSize { size, max: MAX_GROUND });
        }
        Ok(GroundSet { size })
    }

    pub fn size(self) -> usize {
        self.size
    }

    pub fn full(self) -> Mask {
        Mask::full(self.size)
    }

    pub fn contains(self, mask: Mask) -> bool {
        mask.bits() & !self.full().bits() == 0
    }

    /// Every subset of the ground set, in increasing mask order.
    pub fn subsets(self) -> impl DoubleEndedIterator<Item = Mask> {
        (0..(1u32 << self.size)).map(Mask)
    }
}

impl TryFrom<usize> for GroundSet {
    type Error = StructureError;
    fn try_from(size: usize) -> Result<Self, Self::Error> {
        GroundSet::new(size)
    }
}

impl From<GroundSet> for usize {
    fn from(g: GroundSet) -> usize {
        g.size
    }
}

/// A subset of a ground set. Ordering is by mask value, which is the
/// canonical enumeration order used throughout the crate.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mask(pub u32);

impl Mask {
    pub const EMPTY: Mask = Mask(0);

    pub fn full(size: usize) -> Mask {
        if size >= 32 {
            Mask(u32::MAX)
        } else {
            Mask((1u32 << size) - 1)
        }
    }

    pub fn singleton(point: usize) -> Mask {
        Mask(1u32 << point)
    }

    pub fn from_points<I: IntoIterator<Item = usize>>(points: I) -> Mask {
        Mask(points.into_iter().fold(0, |acc, p| acc | (1u32 << p)))
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, point: usize) -> bool {
        point < 32 && self.0 & (1 << point) != 0
    }

    pub fn is_subset(self, other: Mask) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: Mask) -> Mask {
        Mask(self.0 | other.0)
    }

    pub fn intersect(self, other: Mask) -> Mask {
        Mask(self.0 & other.0)
    }

    pub fn minus(self, other: Mask) -> Mask {
        Mask(self.0 & !other.0)
    }

    pub fn sym_diff(self, other: Mask) -> Mask {
        Mask(self.0 ^ other.0)
    }

    pub fn is_disjoint(self, other: Mask) -> bool {
        self.0 & other.0 == 0
    }

    /// Smallest element, if any.
    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    pub fn points(self) -> Points {
        Points(self.0)
    }

    /// All subsets of `self`, in increasing mask order.
    pub fn subsets(self) -> Subsets {
        Subsets { of: self.0, next: Some(0) }
    }

    /// Map the `i`-th smallest point of `self` onto bit `i`.
    pub fn compress(self, within: Mask) -> Mask {
        let mut out = 0u32;
        for (i, p) in within.points().enumerate() {
            if self.contains(p) {
                out |= 1 << i;
            }
        }
        Mask(out)
    }

    /// Inverse of [`Mask::compress`].
    pub fn expand(self, within: Mask) -> Mask {
        let mut out = 0u32;
        for (i, p) in within.points().enumerate() {
            if self.0 & (1 << i) != 0 {
                out |= 1 << p;
            }
        }
        Mask(out)
    }
}

/// Iterator over the points of a mask in increasing order.
#[derive(Clone)]
pub struct Points(u32);

impl Iterator for Points {
    type Item = usize;
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let p = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(p)
    }
}

/// Iterator over the subsets of a mask in increasing order.
#[derive(Clone)]
pub struct Subsets {
    of: u32,
    next: Option<u32>,
}

impl Iterator for Subsets {
    type Item = Mask;
    fn next(&mut self) -> Option<Mask> {
        let cur = self.next?;
        self.next = if cur == self.of {
            None
        } else {
            // next subset in increasing order
            Some((cur.wrapping_sub(self.of)) & self.of)
        };
        Some(Mask(cur))
    }
}

impl fmt::Display for Mask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, p) in self.points().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for Mask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Mask {
    type Err = StructureError;

    /// Accepts `{0,2,3}` or a hex literal such as `0xd`.
    fn from_str(s: &str) -> Result<Mask, StructureError> {
        let t = s.trim();
        let bad = || StructureError::MaskSyntax(s.to_string());
        if let Some(hex) = t.strip_prefix("0x").or_else(|| t.strip_prefix("0X")) {
            return u32::from_str_radix(hex, 16).map(Mask).map_err(|_| bad());
        }
        let inner = t.strip_prefix('{').and_then(|r| r.strip_suffix('}')).ok_or_else(bad)?;
        let mut bits = 0u32;
        for part in inner.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let p: usize = part.parse().map_err(|_| bad())?;
            if p >= 32 {
                return Err(bad());
            }
            bits |= 1 << p;
        }
        Ok(Mask(bits))
    }
}

impl Serialize for Mask {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Mask {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Mask, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_forms() {
        let m: Mask = "{0,2,3}".parse().unwrap();
        assert_eq!(m, Mask(0b1101));
        assert_eq!("0xd".parse::<Mask>().unwrap(), m);
        assert_eq!(m.to_string(), "{0,2,3}");
        assert_eq!("{}".parse::<Mask>().unwrap(), Mask::EMPTY);
        assert!("{0,a}".parse::<Mask>().is_err());
        assert!("0,1".parse::<Mask>().is_err());
    }

    #[test]
    fn subsets_in_order() {
        let subs: Vec<u32> = Mask(0b101).subsets().map(|m| m.0).collect();
        assert_eq!(subs, vec![0, 1, 4, 5]);
        assert_eq!(Mask::EMPTY.subsets().count(), 1);
    }

    #[test]
    fn compress_roundtrip() {
        let within = Mask::from_points([1, 4, 6]);
        let m = Mask::from_points([4, 6]);
        assert_eq!(m.compress(within), Mask(0b110));
        assert_eq!(m.compress(within).expand(within), m);
    }

    #[test]
    fn ground_bounds() {
        assert!(GroundSet::new(0).is_err());
        assert!(GroundSet::new(25).is_err());
        assert_eq!(GroundSet::new(3).unwrap().full(), Mask(7));
    }
}
