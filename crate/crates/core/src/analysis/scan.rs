//! Threshold scans: for each number of rounds, the least ground-set size at
//! which Choose wins the unrestricted game.

use rayon::prelude::*;
use serde::Serialize;

use crate::engine::{GameInstance, Role, Variant};
use crate::error::Result;
use crate::solver::{solve_with, SolveOptions};
use crate::structures::{FamilySpec, GroundSet, MonotoneFamily};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScanCell {
    pub n: usize,
    pub m: usize,
    pub winner: Role,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScanRow {
    pub n: usize,
    /// Least scanned `m` with Choose winning, if any.
    pub min_choose: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ThresholdTable {
    pub family: FamilySpec,
    pub nu: usize,
    pub variant: Variant,
    pub rows: Vec<ScanRow>,
    pub cells: Vec<ScanCell>,
}

impl ThresholdTable {
    /// Minimal Choose-winning sizes never decrease as rounds are added.
    pub fn is_monotone(&self) -> bool {
        let key = |r: &ScanRow| r.min_choose.unwrap_or(usize::MAX);
        self.rows.windows(2).all(|w| key(&w[0]) <= key(&w[1]))
    }

    /// Whether Cut wins exactly when `m ≤ bound(n)` in every cell.
    pub fn matches_law(&self, bound: impl Fn(usize) -> usize) -> bool {
        self.cells.iter().all(|c| (c.winner == Role::Cut) == (c.m <= bound(c.n)))
    }

    pub fn render(&self) -> String {
        let mut out = format!("threshold scan: {:?}, width {}, {:?}\n", self.family, self.nu, self.variant);
        out.push_str(&format!("{:>4}  {:>10}\n", "n", "min m"));
        for r in &self.rows {
            let m = r.min_choose.map_or("none".to_string(), |m| m.to_string());
            out.push_str(&format!("{:>4}  {:>10}\n", r.n, m));
        }
        out
    }
}

/// Solves `U(m, family, n)` with width `nu` on every cell of the ranges.
pub fn threshold_scan(
    family: &FamilySpec,
    nu: usize,
    n_range: std::ops::RangeInclusive<usize>,
    m_range: std::ops::RangeInclusive<usize>,
    variant: Variant,
    opts: &SolveOptions,
) -> Result<ThresholdTable> {
    let grid: Vec<(usize, usize)> = n_range.clone().flat_map(|n| m_range.clone().map(move |m| (n, m))).collect();
    let cells = grid
        .par_iter()
        .map(|&(n, m)| {
            let f = MonotoneFamily::new(GroundSet::new(m)?, family.clone())?;
            let g = GameInstance::u_game(f, n, nu, variant)?;
            Ok(ScanCell { n, m, winner: solve_with(&g, opts)?.winner })
        })
        .collect::<Result<Vec<_>>>()?;
    let rows = n_range
        .map(|n| ScanRow {
            n,
            min_choose: cells.iter().filter(|c| c.n == n && c.winner == Role::Choose).map(|c| c.m).min(),
        })
        .collect();
    Ok(ThresholdTable { family: family.clone(), nu, variant, rows, cells })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binary_thresholds_are_powers_of_two() {
        let t = threshold_scan(&FamilySpec::SizeAtMost { k: 1 }, 2, 1..=3, 2..=10, Variant::Exact, &SolveOptions::default())
            .unwrap();
        let mins: Vec<_> = t.rows.iter().map(|r| r.min_choose).collect();
        assert_eq!(mins, vec![Some(3), Some(5), Some(9)]);
        assert!(t.is_monotone());
        assert!(t.matches_law(|n| 1 << n));
    }
}
