//! Probability measures on the circle `[0, 2π]`.
//!
//! Internally every construction lives on the unit interval; angles are `λ = 2πu`.

mod atomic;
mod cascade;
mod digit;
mod ifs;
pub mod spec;

use std::collections::BTreeMap;
use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

pub use atomic::{Atom, AtomicMeasure};
pub use digit::{appendix_mu, AppendixMu, DigitLaw, DigitProductMeasure};
pub use ifs::{AffineMap, IfsMeasure};

use crate::error::{Error, Result};
use crate::math::{ln_or_neg_inf, log_add};
use cascade::Cascade;

pub const DEFAULT_FOURIER_TOLERANCE: f64 = 1e-10;

/// A closed arc `[lo, hi]` of the circle, in radians.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(0.0 <= lo && lo <= hi && hi <= TAU) {
            return Err(Error::InvalidArgument(format!("interval [{lo}, {hi}] is not inside [0, 2π]")));
        }
        Ok(Interval { lo, hi })
    }

    pub fn len(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn is_empty(&self) -> bool {
        self.hi <= self.lo
    }
}

/// The cell `[2π·index·base^{-depth}, 2π·(index+1)·base^{-depth}]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct DyadicCell {
    pub base: u32,
    pub depth: u32,
    pub index: u64,
}

impl DyadicCell {
    pub fn new(base: u32, depth: u32, index: u64) -> Result<Self> {
        let n = cell_count(base, depth)?;
        if index >= n {
            return Err(Error::InvalidArgument(format!("cell index {index} out of range for {base}^{depth}")));
        }
        Ok(DyadicCell { base, depth, index })
    }

    pub fn interval(&self) -> Interval {
        let n = (self.base as f64).powi(self.depth as i32);
        Interval { lo: TAU * self.index as f64 / n, hi: TAU * (self.index + 1) as f64 / n }
    }

    /// Cell endpoints in unit coordinates.
    pub fn unit_bounds(&self) -> (f64, f64) {
        let n = (self.base as f64).powi(self.depth as i32);
        (self.index as f64 / n, (self.index + 1) as f64 / n)
    }

    pub fn midpoint(&self) -> f64 {
        let iv = self.interval();
        0.5 * (iv.lo + iv.hi)
    }
}

/// `base^depth`, provided it fits the 64-bit cell index.
pub fn cell_count(base: u32, depth: u32) -> Result<u64> {
    if base < 2 {
        return Err(Error::InvalidArgument(format!("partition base must be at least 2, got {base}")));
    }
    (base as u64)
        .checked_pow(depth)
        .ok_or_else(|| Error::InvalidArgument(format!("{base}^{depth} cells exceed the 64-bit cell index")))
}

/// A cell with its mass; `ln_mass` stays exact where `mass` underflows.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CellMass {
    pub cell: DyadicCell,
    pub mass: f64,
    pub ln_mass: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MixtureMeasure {
    point_part: AtomicMeasure,
    continuous_part: Box<SpectralMeasure>,
    p: f64,
}

impl MixtureMeasure {
    pub fn point_part(&self) -> &AtomicMeasure {
        &self.point_part
    }

    pub fn continuous_part(&self) -> &SpectralMeasure {
        &self.continuous_part
    }

    /// Mass of the point part.
    pub fn p(&self) -> f64 {
        self.p
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum MeasureKind {
    Atomic(AtomicMeasure),
    Ifs(IfsMeasure),
    Digit(DigitProductMeasure),
    Mixture(MixtureMeasure),
}

/// A probability measure on `[0, 2π]` together with the accuracy target of its Fourier transform.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralMeasure {
    kind: MeasureKind,
    tolerance: f64,
}

impl From<AtomicMeasure> for SpectralMeasure {
    fn from(m: AtomicMeasure) -> Self {
        Self::new(MeasureKind::Atomic(m))
    }
}

impl From<IfsMeasure> for SpectralMeasure {
    fn from(m: IfsMeasure) -> Self {
        Self::new(MeasureKind::Ifs(m))
    }
}

impl From<DigitProductMeasure> for SpectralMeasure {
    fn from(m: DigitProductMeasure) -> Self {
        Self::new(MeasureKind::Digit(m))
    }
}

impl SpectralMeasure {
    fn new(kind: MeasureKind) -> Self {
        SpectralMeasure { kind, tolerance: DEFAULT_FOURIER_TOLERANCE }
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Result<Self> {
        if !(tolerance > 0.0 && tolerance.is_finite()) {
            return Err(Error::InvalidMeasure(format!("fourier tolerance must be positive, got {tolerance}")));
        }
        self.tolerance = tolerance;
        if let MeasureKind::Mixture(m) = &mut self.kind {
            m.continuous_part.tolerance = tolerance;
        }
        Ok(self)
    }

    /// `p·point + (1 − p)·continuous`.
    pub fn mixture(point: AtomicMeasure, continuous: SpectralMeasure, p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidMeasure(format!("point mass {p} outside [0, 1]")));
        }
        if continuous.has_atoms() {
            return Err(Error::InvalidMeasure("continuous part of a mixture must not have atoms".into()));
        }
        let tolerance = continuous.tolerance;
        Ok(SpectralMeasure {
            kind: MeasureKind::Mixture(MixtureMeasure { point_part: point, continuous_part: Box::new(continuous), p }),
            tolerance,
        })
    }

    pub fn uniform() -> Self {
        IfsMeasure::uniform().expect("valid preset").into()
    }

    pub fn cantor() -> Self {
        IfsMeasure::cantor().into()
    }

    pub fn binomial(p: f64) -> Result<Self> {
        Ok(DigitProductMeasure::binomial(p)?.into())
    }

    pub fn appendix() -> Self {
        DigitProductMeasure::appendix().into()
    }

    pub fn kind(&self) -> &MeasureKind {
        &self.kind
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn kind_name(&self) -> &'static str {
        match &self.kind {
            MeasureKind::Atomic(_) => "atomic",
            MeasureKind::Ifs(_) => "ifs",
            MeasureKind::Digit(_) => "digit",
            MeasureKind::Mixture(_) => "mixture",
        }
    }

    /// Mass carried by atoms.
    pub fn point_mass(&self) -> f64 {
        match &self.kind {
            MeasureKind::Atomic(_) => 1.0,
            MeasureKind::Mixture(m) => m.p,
            _ => 0.0,
        }
    }

    pub fn has_atoms(&self) -> bool {
        self.point_mass() > 0.0
    }

    pub fn is_uniform(&self) -> bool {
        match &self.kind {
            MeasureKind::Ifs(m) => m.is_uniform(),
            MeasureKind::Digit(m) => m.is_uniform(),
            MeasureKind::Mixture(m) => m.p == 0.0 && m.continuous_part.is_uniform(),
            MeasureKind::Atomic(_) => false,
        }
    }

    pub fn is_appendix(&self) -> bool {
        matches!(&self.kind, MeasureKind::Digit(d) if d.is_appendix())
    }

    /// The common value of the dimensions when the measure is exactly scaling.
    pub fn closed_form_dimension(&self) -> Option<f64> {
        match &self.kind {
            MeasureKind::Atomic(_) => Some(0.0),
            MeasureKind::Ifs(m) => Some(m.information_dimension()),
            MeasureKind::Digit(m) => m.information_dimension(),
            MeasureKind::Mixture(m) if m.p == 0.0 => m.continuous_part.closed_form_dimension(),
            MeasureKind::Mixture(_) => None,
        }
    }

    /// Base in which cell masses are products of digit probabilities.
    pub fn native_base(&self) -> Option<u32> {
        match &self.kind {
            MeasureKind::Ifs(m) => m.digits().map(|d| d.base()),
            MeasureKind::Digit(m) => Some(m.base()),
            _ => None,
        }
    }

    fn cascade(&self) -> Option<&dyn Cascade> {
        match &self.kind {
            MeasureKind::Ifs(m) => Some(m),
            MeasureKind::Digit(m) => Some(m),
            _ => None,
        }
    }

    fn digits(&self) -> Option<&DigitProductMeasure> {
        match &self.kind {
            MeasureKind::Ifs(m) => m.digits(),
            MeasureKind::Digit(m) => Some(m),
            _ => None,
        }
    }

    /// `F(λ) = μ([0, λ])`.
    pub fn cdf(&self, lambda: f64) -> f64 {
        let lambda = lambda.clamp(0.0, TAU);
        if lambda >= TAU {
            return 1.0;
        }
        match &self.kind {
            MeasureKind::Atomic(a) => a.cdf(lambda),
            MeasureKind::Mixture(m) => m.p * m.point_part.cdf(lambda) + (1.0 - m.p) * m.continuous_part.cdf(lambda),
            _ => {
                let c = self.cascade().expect("cascade measure");
                cascade::ln_below(c, 0, lambda / TAU).exp().min(1.0)
            }
        }
    }

    /// Minimal `λ` with `F(λ) ≥ x`. Only defined without atoms.
    pub fn quantile(&self, x: f64) -> Result<f64> {
        self.quantile_impl(x, false)
    }

    /// `inf{λ : F(λ) > x}`: the right end of a plateau of `F` where [`quantile`](Self::quantile)
    /// returns the left end; both agree off plateaus.
    pub fn quantile_right(&self, x: f64) -> Result<f64> {
        self.quantile_impl(x, true)
    }

    fn quantile_impl(&self, x: f64, strict: bool) -> Result<f64> {
        if !(0.0..=1.0).contains(&x) {
            return Err(Error::InvalidArgument(format!("quantile level {x} outside [0, 1]")));
        }
        match &self.kind {
            MeasureKind::Atomic(_) => Err(Error::AtomicComponent),
            MeasureKind::Mixture(m) if m.p > 0.0 => Err(Error::AtomicComponent),
            MeasureKind::Mixture(m) => m.continuous_part.quantile_impl(x, strict),
            _ => {
                if self.is_uniform() {
                    return Ok(TAU * x);
                }
                let c = self.cascade().expect("cascade measure");
                Ok(TAU * cascade::quantile(c, x, strict))
            }
        }
    }

    /// `μ̂(t) = ∫ e^{itλ} dμ(λ)`.
    pub fn fourier(&self, t: i64) -> Complex64 {
        if t == 0 {
            return Complex64::new(1.0, 0.0);
        }
        if t < 0 {
            return self.fourier(t.checked_neg().unwrap_or(i64::MAX)).conj();
        }
        let omega = TAU * t as f64;
        match &self.kind {
            MeasureKind::Atomic(a) => a.fourier(t),
            MeasureKind::Ifs(m) => m.fourier_unit(omega, self.tolerance),
            MeasureKind::Digit(m) => m.fourier_unit(omega, self.tolerance),
            MeasureKind::Mixture(m) => m.p * m.point_part.fourier(t) + (1.0 - m.p) * m.continuous_part.fourier(t),
        }
    }

    /// `ln μ(cell)`; cells are left-closed, except that the last one also holds `2π`.
    pub fn ln_cell_mass(&self, cell: &DyadicCell) -> f64 {
        match &self.kind {
            MeasureKind::Atomic(a) => ln_or_neg_inf(atom_cell(a, cell)),
            MeasureKind::Mixture(m) => log_add(
                ln_or_neg_inf(m.p) + ln_or_neg_inf(atom_cell(&m.point_part, cell)),
                ln_or_neg_inf(1.0 - m.p) + m.continuous_part.ln_cell_mass(cell),
            ),
            _ => match self.digits() {
                Some(d) if d.base() == cell.base => d.ln_cell(cell.depth, cell.index),
                _ => {
                    let (a, b) = cell.unit_bounds();
                    self.ln_interval_unit(a, b)
                }
            },
        }
    }

    pub fn cell_mass(&self, cell: &DyadicCell) -> f64 {
        self.ln_cell_mass(cell).exp()
    }

    /// `ln μ([2πa, 2πb))` for `0 ≤ a ≤ b ≤ 1`; `b = 1` includes the endpoint.
    pub fn ln_interval_unit(&self, a: f64, b: f64) -> f64 {
        let a = a.clamp(0.0, 1.0);
        let b = b.clamp(0.0, 1.0);
        if b <= a {
            return f64::NEG_INFINITY;
        }
        match &self.kind {
            MeasureKind::Atomic(m) => ln_or_neg_inf(m.interval(TAU * a, TAU * b)),
            MeasureKind::Mixture(m) => log_add(
                ln_or_neg_inf(m.p) + ln_or_neg_inf(m.point_part.interval(TAU * a, TAU * b)),
                ln_or_neg_inf(1.0 - m.p) + m.continuous_part.ln_interval_unit(a, b),
            ),
            _ => {
                if self.is_uniform() {
                    return (b - a).ln();
                }
                cascade::ln_between(self.cascade().expect("cascade measure"), 0, a, b)
            }
        }
    }

    /// `μ(interval)` with the interval taken left-closed, right-open.
    pub fn interval_mass(&self, iv: &Interval) -> f64 {
        self.ln_interval_unit(iv.lo / TAU, iv.hi / TAU).exp()
    }

    /// `ln μ` of the open ball of radius `r` around `center`, both in unit coordinates.
    ///
    /// Radii far below `f64` spacing near `center` are resolved exactly for the self-similar
    /// constructions; this is what keeps scaling exponents at depth `5! = 120` finite.
    pub fn ln_ball_unit(&self, center: f64, r: f64) -> f64 {
        match &self.kind {
            MeasureKind::Atomic(a) => ln_or_neg_inf(a.ball_unit(center, r)),
            MeasureKind::Mixture(m) => log_add(
                ln_or_neg_inf(m.p) + ln_or_neg_inf(m.point_part.ball_unit(center, r)),
                ln_or_neg_inf(1.0 - m.p) + m.continuous_part.ln_ball_unit(center, r),
            ),
            _ => {
                if self.is_uniform() {
                    let lo = (center - r).max(0.0);
                    let hi = (center + r).min(1.0);
                    return ln_or_neg_inf(hi - lo);
                }
                cascade::ln_ball(self.cascade().expect("cascade measure"), 0, center, r)
            }
        }
    }

    /// All cells of positive mass at `depth`, in index order.
    pub fn refine(&self, base: u32, depth: u32, max_cells: usize) -> Result<Vec<CellMass>> {
        if max_cells == 0 {
            return Err(Error::InvalidArgument("cell budget must be at least 1".into()));
        }
        cell_count(base, depth)?;
        let raw = self.refine_raw(base, depth, max_cells)?;
        if raw.len() > max_cells {
            return Err(Error::CellBudget { base, depth, budget: max_cells });
        }
        Ok(raw
            .into_iter()
            .map(|(index, ln_mass)| CellMass { cell: DyadicCell { base, depth, index }, mass: ln_mass.exp(), ln_mass })
            .collect())
    }

    fn refine_raw(&self, base: u32, depth: u32, max_cells: usize) -> Result<Vec<(u64, f64)>> {
        match &self.kind {
            MeasureKind::Atomic(a) => Ok(a.bin(base, depth).into_iter().map(|(j, w)| (j, w.ln())).collect()),
            MeasureKind::Mixture(m) => {
                let mut merged: BTreeMap<u64, f64> = BTreeMap::new();
                if m.p > 0.0 {
                    for (j, w) in m.point_part.bin(base, depth) {
                        merged.insert(j, m.p.ln() + w.ln());
                    }
                }
                if m.p < 1.0 {
                    let lq = (1.0 - m.p).ln();
                    for (j, lm) in m.continuous_part.refine_raw(base, depth, max_cells)? {
                        let e = merged.entry(j).or_insert(f64::NEG_INFINITY);
                        *e = log_add(*e, lq + lm);
                    }
                }
                Ok(merged.into_iter().collect())
            }
            _ => match self.digits() {
                Some(d) if d.base() == base => d.refine_native(depth, max_cells),
                _ => self.refine_descent(base, depth, max_cells),
            },
        }
    }

    /// Base-`b` tree descent keeping only cells of positive mass.
    fn refine_descent(&self, base: u32, depth: u32, max_cells: usize) -> Result<Vec<(u64, f64)>> {
        let b = base as u64;
        let mut cells: Vec<(u64, f64)> = vec![(0, 0.0)];
        for k in 1..=depth {
            let n = b.pow(k) as f64;
            let mut next = Vec::new();
            for &(idx, _) in &cells {
                for d in 0..b {
                    let j = idx * b + d;
                    let lm = self.ln_interval_unit(j as f64 / n, (j + 1) as f64 / n);
                    if lm > f64::NEG_INFINITY {
                        next.push((j, lm));
                        if next.len() > max_cells {
                            return Err(Error::CellBudget { base, depth: k, budget: max_cells });
                        }
                    }
                }
            }
            cells = next;
        }
        Ok(cells)
    }

    /// `count` points in unit coordinates, deterministic in `seed`.
    pub fn sample_unit(&self, seed: u64, count: usize) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..count).map(|_| self.draw_unit(&mut rng)).collect()
    }

    /// `count` angles distributed as `μ`, deterministic in `seed`.
    pub fn sample(&self, seed: u64, count: usize) -> Vec<f64> {
        match &self.kind {
            // keep atom positions bit-exact
            MeasureKind::Atomic(_) | MeasureKind::Mixture(_) => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                (0..count).map(|_| self.draw_angle(&mut rng)).collect()
            }
            _ => self.sample_unit(seed, count).into_iter().map(|u| TAU * u).collect(),
        }
    }

    fn draw_angle<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match &self.kind {
            MeasureKind::Atomic(a) => draw_atom(a, rng),
            MeasureKind::Mixture(m) => {
                if rng.random::<f64>() < m.p {
                    draw_atom(&m.point_part, rng)
                } else {
                    m.continuous_part.draw_angle(rng)
                }
            }
            _ => TAU * self.draw_unit(rng),
        }
    }

    fn draw_unit<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match &self.kind {
            MeasureKind::Atomic(a) => draw_atom(a, rng) / TAU,
            MeasureKind::Mixture(m) => {
                if rng.random::<f64>() < m.p {
                    draw_atom(&m.point_part, rng) / TAU
                } else {
                    m.continuous_part.draw_unit(rng)
                }
            }
            MeasureKind::Ifs(m) => cascade::sample_point(m, rng, None),
            MeasureKind::Digit(m) => cascade::sample_point(m, rng, None),
        }
    }

    /// Samples together with the branch index chosen at each level (cascade measures only).
    pub fn sample_addresses(&self, seed: u64, count: usize) -> Option<Vec<(f64, Vec<usize>)>> {
        let c = self.cascade()?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Some(
            (0..count)
                .map(|_| {
                    let mut path = Vec::new();
                    let u = cascade::sample_point(c, &mut rng, Some(&mut path));
                    (TAU * u, path)
                })
                .collect(),
        )
    }
}

fn atom_cell(a: &AtomicMeasure, cell: &DyadicCell) -> f64 {
    a.bin(cell.base, cell.depth).into_iter().filter(|(j, _)| *j == cell.index).map(|(_, w)| w).sum()
}

fn draw_atom<R: Rng + ?Sized>(a: &AtomicMeasure, rng: &mut R) -> f64 {
    let draw: f64 = rng.random();
    let mut cum = 0.0;
    for atom in a.atoms() {
        cum += atom.weight;
        if draw < cum {
            return atom.position;
        }
    }
    a.atoms().last().expect("non-empty").position
}
