//! Dimension estimates of a measure from its cell masses and ball masses.

use std::f64::consts::{PI, TAU};
use std::ops::RangeInclusive;

use serde::Serialize;

use crate::entropy::{greedy_cover, DEFAULT_CELL_BUDGET};
use crate::error::{Error, Result};
use crate::math::{fit_line, quantile, theta_from_ln};
use crate::measures::SpectralMeasure;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DimensionKind {
    Info,
    Fractal,
    Pointwise,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DimensionEstimate {
    pub kind: DimensionKind,
    /// The estimate, clamped to `[0, 1]`.
    pub value: f64,
    /// Unclamped slope or quantile.
    pub raw: f64,
    /// Lower quantile for pointwise estimates.
    pub lower: Option<f64>,
    /// First and last depth (or scale index) used.
    pub depths: (u32, u32),
    /// Per-depth statistic: `H_k`, `ln ♯_k`, or the running upper quantile over scales.
    pub per_depth: Vec<(u32, f64)>,
    pub residual: f64,
}

fn check_depths(depths: &RangeInclusive<u32>) -> Result<()> {
    if depths.is_empty() {
        return Err(Error::InvalidArgument("depth range is empty".into()));
    }
    Ok(())
}

fn slope_estimate(kind: DimensionKind, base: u32, per_depth: Vec<(u32, f64)>) -> Result<DimensionEstimate> {
    let lb = (base as f64).ln();
    let xs: Vec<f64> = per_depth.iter().map(|(k, _)| *k as f64 * lb).collect();
    let ys: Vec<f64> = per_depth.iter().map(|(_, y)| *y).collect();
    let fit = fit_line(&xs, &ys).ok_or_else(|| Error::InvalidArgument("need at least two depths".into()))?;
    Ok(DimensionEstimate {
        kind,
        value: fit.slope.clamp(0.0, 1.0) + 0.0,
        raw: fit.slope,
        lower: None,
        depths: (per_depth[0].0, per_depth[per_depth.len() - 1].0),
        per_depth,
        residual: fit.residual,
    })
}

/// Slope of the partition entropy `H_k = Σ Θ(μ(cell))` against `k ln b`.
pub fn information_dimension(m: &SpectralMeasure, base: u32, depths: RangeInclusive<u32>) -> Result<DimensionEstimate> {
    information_dimension_budget(m, base, depths, DEFAULT_CELL_BUDGET)
}

pub fn information_dimension_budget(
    m: &SpectralMeasure,
    base: u32,
    depths: RangeInclusive<u32>,
    budget: usize,
) -> Result<DimensionEstimate> {
    check_depths(&depths)?;
    let per_depth = depths
        .map(|k| {
            let h: f64 = m.refine(base, k, budget)?.iter().map(|c| theta_from_ln(c.ln_mass)).sum();
            Ok((k, h))
        })
        .collect::<Result<Vec<_>>>()?;
    slope_estimate(DimensionKind::Info, base, per_depth)
}

/// Slope of `ln ♯_k` against `k ln b`, where `♯_k` is the least number of depth-`k` cells
/// carrying mass above `1 − ε`.
pub fn fractal_dimension(
    m: &SpectralMeasure,
    eps: f64,
    base: u32,
    depths: RangeInclusive<u32>,
) -> Result<DimensionEstimate> {
    fractal_dimension_budget(m, eps, base, depths, DEFAULT_CELL_BUDGET)
}

pub fn fractal_dimension_budget(
    m: &SpectralMeasure,
    eps: f64,
    base: u32,
    depths: RangeInclusive<u32>,
    budget: usize,
) -> Result<DimensionEstimate> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidArgument(format!("ε must lie in (0, 1), got {eps}")));
    }
    check_depths(&depths)?;
    let per_depth = depths
        .map(|k| {
            let count = greedy_cover(m.refine(base, k, budget)?, 1.0 - eps).len();
            Ok((k, (count as f64).ln()))
        })
        .collect::<Result<Vec<_>>>()?;
    slope_estimate(DimensionKind::Fractal, base, per_depth)
}

fn check_scale(delta: f64) -> Result<()> {
    if !(delta > 0.0 && delta < PI) {
        return Err(Error::InvalidArgument(format!("scale δ = {delta} outside (0, π)")));
    }
    Ok(())
}

/// `α_δ = ln μ((λ−δ, λ+δ)) / ln(2δ/2π)` for each scale; `+∞` where the ball has no mass.
pub fn pointwise_alpha(m: &SpectralMeasure, lambda: f64, scales: &[f64]) -> Result<Vec<(f64, f64)>> {
    if !(0.0..=TAU).contains(&lambda) {
        return Err(Error::InvalidArgument(format!("λ = {lambda} outside [0, 2π]")));
    }
    pointwise_alpha_unit(m, lambda / TAU, scales)
}

/// As [`pointwise_alpha`], with the point given in unit coordinates `λ/2π`.
pub fn pointwise_alpha_unit(m: &SpectralMeasure, u: f64, scales: &[f64]) -> Result<Vec<(f64, f64)>> {
    scales
        .iter()
        .map(|&delta| {
            check_scale(delta)?;
            let r = delta / TAU;
            let ln_mass = m.ln_ball_unit(u, r);
            Ok((delta, ln_mass / (2.0 * r).ln()))
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HausdorffOptions {
    pub upper_quantile: f64,
    pub lower_quantile: f64,
}

impl Default for HausdorffOptions {
    fn default() -> Self {
        HausdorffOptions { upper_quantile: 0.95, lower_quantile: 0.05 }
    }
}

/// Quantiles over `μ`-sampled points of `min_δ α_δ`.
///
/// Points are drawn in unit coordinates so that they lie exactly in the support even when
/// the scales are far below the spacing of representable angles.
pub fn hausdorff_estimate(m: &SpectralMeasure, seed: u64, samples: usize, scales: &[f64]) -> Result<DimensionEstimate> {
    hausdorff_estimate_with(m, seed, samples, scales, &HausdorffOptions::default())
}

pub fn hausdorff_estimate_with(
    m: &SpectralMeasure,
    seed: u64,
    samples: usize,
    scales: &[f64],
    opts: &HausdorffOptions,
) -> Result<DimensionEstimate> {
    if samples < 100 {
        return Err(Error::InvalidArgument(format!("need at least 100 samples, got {samples}")));
    }
    if scales.is_empty() {
        return Err(Error::InvalidArgument("scale list is empty".into()));
    }
    let points = m.sample_unit(seed, samples);
    // running[i][j]: min of α over scales 0..=j at point i
    let mut running: Vec<Vec<f64>> = Vec::with_capacity(samples);
    for &u in &points {
        let alphas = pointwise_alpha_unit(m, u, scales)?;
        let mut cur = f64::INFINITY;
        running.push(
            alphas
                .iter()
                .map(|&(_, a)| {
                    cur = cur.min(a);
                    cur
                })
                .collect(),
        );
    }
    let column = |j: usize| -> Vec<f64> { running.iter().map(|r| r[j]).collect() };
    let per_depth: Vec<(u32, f64)> =
        (0..scales.len()).map(|j| (j as u32, quantile(&column(j), opts.upper_quantile))).collect();
    let last = column(scales.len() - 1);
    let upper = quantile(&last, opts.upper_quantile);
    let lower = quantile(&last, opts.lower_quantile);
    Ok(DimensionEstimate {
        kind: DimensionKind::Pointwise,
        value: upper.clamp(0.0, 1.0) + 0.0,
        raw: upper,
        lower: Some(lower.clamp(0.0, 1.0) + 0.0),
        depths: (0, scales.len() as u32 - 1),
        per_depth,
        residual: 0.0,
    })
}

/// `δ_k = 4π·2^{-k!}`, so that `2δ_k/2π = 4·2^{-k!}`.
pub fn factorial_scales(ks: RangeInclusive<u32>) -> Vec<f64> {
    ks.map(|k| {
        let kf: u32 = (1..=k).product();
        2.0 * TAU * 2f64.powi(-(kf as i32))
    })
    .collect()
}

/// `δ_k = π·b^{-k}`: balls of diameter one depth-`k` cell.
pub fn geometric_scales(base: u32, ks: RangeInclusive<u32>) -> Vec<f64> {
    ks.map(|k| PI * (base as f64).powi(-(k as i32))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::AtomicMeasure;

    #[test]
    fn information_examples() {
        let a: SpectralMeasure = AtomicMeasure::equally_spaced(3).unwrap().into();
        assert!(information_dimension(&a, 2, 4..=12).unwrap().value.abs() < 1e-12);
        let u = information_dimension(&SpectralMeasure::uniform(), 2, 4..=12).unwrap();
        assert!((u.value - 1.0).abs() < 1e-6);
        let c = information_dimension(&SpectralMeasure::cantor(), 3, 4..=12).unwrap();
        assert!((c.value - 2f64.ln() / 3f64.ln()).abs() < 1e-6);
        for p in [0.5, 0.7, 0.8] {
            let b = information_dimension(&SpectralMeasure::binomial(p).unwrap(), 2, 4..=12).unwrap();
            let want = (crate::math::theta(p) + crate::math::theta(1.0 - p)) / 2f64.ln();
            assert!((b.value - want).abs() < 0.02);
        }
    }

    #[test]
    fn fractal_examples() {
        let two: SpectralMeasure = AtomicMeasure::equally_spaced(2).unwrap().into();
        assert!(fractal_dimension(&two, 0.3, 2, 2..=10).unwrap().value.abs() < 1e-12);
        let c = fractal_dimension(&SpectralMeasure::cantor(), 0.01, 3, 4..=12).unwrap();
        assert!((c.value - 2f64.ln() / 3f64.ln()).abs() < 0.02);
        assert!(fractal_dimension(&SpectralMeasure::cantor(), 1.5, 3, 4..=12).is_err());
    }

    #[test]
    fn pointwise_examples() {
        let u = SpectralMeasure::uniform();
        for (_, a) in pointwise_alpha(&u, 2.0, &[0.1, 0.01, 1e-6]).unwrap() {
            assert!((a - 1.0).abs() < 1e-9);
        }
        let a: SpectralMeasure = AtomicMeasure::equally_spaced(1).unwrap().into();
        for (_, x) in pointwise_alpha(&a, 0.0, &[0.1, 0.01]).unwrap() {
            assert_eq!(x, 0.0);
        }
        assert!(pointwise_alpha(&u, 2.0, &[4.0]).is_err());
    }

    #[test]
    fn appendix_alpha_drops_along_odd_scales() {
        let app = SpectralMeasure::appendix();
        let scales = factorial_scales(3..=5);
        for u in app.sample_unit(11, 20) {
            let al = pointwise_alpha_unit(&app, u, &scales).unwrap();
            assert!(al[2].1 < al[0].1, "{al:?}");
            assert!(al[2].1 < 0.2);
        }
    }

    #[test]
    fn hausdorff_of_uniform() {
        let h = hausdorff_estimate(&SpectralMeasure::uniform(), 1, 200, &geometric_scales(2, 8..=16)).unwrap();
        assert!((h.value - 1.0).abs() < 0.02);
        assert!((h.lower.unwrap() - 1.0).abs() < 0.1);
        assert!(hausdorff_estimate(&SpectralMeasure::uniform(), 1, 10, &[0.1]).is_err());
    }
}
