//! Finite ground sets, monotone families, ideals, posets and Boolean
//! algebras, plus the partition and antichain combinatorics built on them.

pub mod algebra;
pub mod enumerate;
pub mod family;
pub mod mask;
pub mod partition;
pub mod poset;

pub use algebra::{quotient_algebra, FiniteBooleanAlgebra, QuotientAlgebra};
pub use enumerate::{
    algebra_antichains, disjoint_partitions, i_partitions, poset_antichains, EnumOptions, DEFAULT_MOVE_BUDGET,
};
pub use family::{validate_family, FamilySpec, Ideal, MonotoneFamily, Validation};
pub use mask::{GroundSet, Mask, MAX_GROUND};
pub use partition::{full_disjointification, is_maximal_i_partition, lex_point_order, maximality_counterexample, IPartition};
pub use poset::{AntichainCheck, ElemSet, FinitePoset, PosetSpec};
