use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::measures::{CellMass, SpectralMeasure};

/// Default ceiling on materialized cells.
pub const DEFAULT_CELL_BUDGET: usize = 1 << 22;

/// `(base, depth)` with `base^depth = n` and the smallest possible base.
pub fn partition_shape(n: u64) -> Result<(u32, u32)> {
    if n == 0 {
        return Err(Error::InvalidArgument("partition needs at least one cell".into()));
    }
    if n == 1 {
        return Ok((2, 0));
    }
    for b in 2..=n.min(u32::MAX as u64) {
        let mut x = n;
        let mut k = 0;
        while x % b == 0 {
            x /= b;
            k += 1;
        }
        if x == 1 {
            return Ok((b as u32, k));
        }
    }
    Err(Error::InvalidArgument(format!("{n} cells do not form a base-b partition")))
}

/// Highest-mass cells, in descending mass order, until their total exceeds `keep_mass`.
/// Keeps every cell when `keep_mass` cannot be exceeded.
pub fn greedy_cover(mut cells: Vec<CellMass>, keep_mass: f64) -> Vec<CellMass> {
    cells.sort_by(|a, b| b.ln_mass.total_cmp(&a.ln_mass).then(a.cell.index.cmp(&b.cell.index)));
    let mut acc = 0.0;
    let mut keep = cells.len();
    for (i, c) in cells.iter().enumerate() {
        acc += c.mass;
        if acc > keep_mass {
            keep = i + 1;
            break;
        }
    }
    cells.truncate(keep);
    cells
}

/// `W(n, N) = Σ_{I_j ⊂ K} sin²(πnμ(I_j)) / (π²n²)` over the greedy compact `K` of the
/// `N`-cell partition.
pub fn w_quantity(m: &SpectralMeasure, n: i64, cells: u64, keep_mass: f64) -> Result<f64> {
    w_quantity_budget(m, n, cells, keep_mass, DEFAULT_CELL_BUDGET)
}

pub fn w_quantity_budget(m: &SpectralMeasure, n: i64, cells: u64, keep_mass: f64, budget: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidArgument("W is defined for n ≠ 0".into()));
    }
    if !(keep_mass > 0.0 && keep_mass <= 1.0) {
        return Err(Error::InvalidArgument(format!("keep mass must lie in (0, 1], got {keep_mass}")));
    }
    if m.has_atoms() {
        return Err(Error::AtomicComponent);
    }
    let (base, depth) = partition_shape(cells)?;
    let kept = greedy_cover(m.refine(base, depth, budget)?, keep_mass);
    let nf = n as f64;
    Ok(kept.iter().map(|c| (PI * nf * c.mass).sin().powi(2)).sum::<f64>() / (PI * PI * nf * nf))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shapes() {
        assert_eq!(partition_shape(1).unwrap(), (2, 0));
        assert_eq!(partition_shape(4).unwrap(), (2, 2));
        assert_eq!(partition_shape(64).unwrap(), (2, 6));
        assert_eq!(partition_shape(27).unwrap(), (3, 3));
        assert_eq!(partition_shape(12).unwrap(), (12, 1));
    }

    #[test]
    fn appendix_at_four_cells() {
        let w = w_quantity(&SpectralMeasure::appendix(), 1, 4, 0.99).unwrap();
        assert!((w - 2.0 / (PI * PI)).abs() < 1e-15);
        for n in [2, 4, 6] {
            assert!(w_quantity(&SpectralMeasure::appendix(), n, 4, 0.99).unwrap().abs() < 1e-15);
        }
    }

    #[test]
    fn integer_multiples_vanish() {
        // every uniform cell at N = 8 has mass 1/8, so n = 8 makes every sine vanish
        assert!(w_quantity(&SpectralMeasure::uniform(), 8, 8, 1.0).unwrap() < 1e-20);
    }

    #[test]
    fn greedy_cover_stops_at_mass() {
        let cells = SpectralMeasure::binomial(0.8).unwrap().refine(2, 3, 100).unwrap();
        let k = greedy_cover(cells, 0.5);
        // masses 0.512, then 0.128 ×3: the first already exceeds one half
        assert_eq!(k.len(), 1);
        assert_eq!(k[0].cell.index, 0);
    }
}
