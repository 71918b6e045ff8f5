//! Occupation probabilities of `ψ(s) = U^s ψ` over the basis `φ_n(λ) = e^{2πinF(λ)}`.
//!
//! Under `x = F(λ)` the space `L²(dμ)` becomes `L²[0, 1]`, `φ_n` becomes `e^{2πinx}` and
//! `ψ(s)` becomes `e^{isQ(x)}` with `Q` the quantile function. So
//! `⟨φ_n|ψ(s)⟩ = ∫₀¹ e^{−2πinx} e^{isQ(x)} dx`, one FFT per time step on a uniform grid.

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::math::theta;
use crate::measures::SpectralMeasure;

/// `p_n(T)` for labels `n ∈ [−n_max, n_max]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BasisDistribution {
    pub t: usize,
    pub n_max: usize,
    /// `probs[k]` belongs to label `k − n_max`.
    pub probs: Vec<f64>,
    /// Mass outside the label window, `1 − Σ probs`.
    pub leak: f64,
}

impl BasisDistribution {
    /// A distribution given directly by its window; `probs.len()` must be odd.
    pub fn from_probs(t: usize, probs: Vec<f64>) -> Result<Self> {
        if probs.len() % 2 == 0 {
            return Err(Error::InvalidArgument("label window must be symmetric (odd length)".into()));
        }
        if probs.iter().any(|p| *p < 0.0 || !p.is_finite()) {
            return Err(Error::InvalidArgument("probabilities must be non-negative".into()));
        }
        let n_max = probs.len() / 2;
        let leak = 1.0 - probs.iter().sum::<f64>();
        Ok(BasisDistribution { t, n_max, probs, leak })
    }

    pub fn label(&self, k: usize) -> i64 {
        k as i64 - self.n_max as i64
    }

    pub fn prob(&self, n: i64) -> f64 {
        let k = n + self.n_max as i64;
        if k < 0 || k as usize >= self.probs.len() {
            0.0
        } else {
            self.probs[k as usize]
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        self.probs.iter().enumerate().map(|(k, &p)| (self.label(k), p))
    }
}

/// Grid quadrature of `c_n(s)` on `M` midpoints, then `p_n(T) = (1/T) Σ_{s<T} |c_n(s)|²`.
pub fn bf_distribution(m: &SpectralMeasure, t: usize, n_max: usize, grid: usize) -> Result<BasisDistribution> {
    if m.has_atoms() {
        return Err(Error::AtomicComponent);
    }
    if t == 0 {
        return Err(Error::InvalidArgument("T must be at least 1".into()));
    }
    let required = 4 * t.max(n_max);
    if grid < required || !grid.is_power_of_two() {
        return Err(Error::InsufficientGrid { grid, required: required.next_power_of_two() });
    }
    let q: Vec<f64> = (0..grid)
        .map(|j| m.quantile((j as f64 + 0.5) / grid as f64))
        .collect::<Result<_>>()?;

    let fft = FftPlanner::<f64>::new().plan_fft_forward(grid);
    let mut buf = vec![Complex64::new(0.0, 0.0); grid];
    let mut scratch = vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
    let mut acc = vec![0.0; grid];
    let norm = 1.0 / (grid as f64 * grid as f64);
    for s in 0..t {
        let sf = s as f64;
        for (b, &qj) in buf.iter_mut().zip(&q) {
            *b = Complex64::from_polar(1.0, (sf * qj).rem_euclid(std::f64::consts::TAU));
        }
        fft.process_with_scratch(&mut buf, &mut scratch);
        // bin k holds label k (k < M/2) or k − M; the midpoint shift is a pure phase
        for (a, b) in acc.iter_mut().zip(&buf) {
            *a += b.norm_sqr() * norm;
        }
    }
    let probs: Vec<f64> = (-(n_max as i64)..=n_max as i64)
        .map(|n| acc[n.rem_euclid(grid as i64) as usize] / t as f64)
        .collect();
    let leak = 1.0 - probs.iter().sum::<f64>();
    Ok(BasisDistribution { t, n_max, probs, leak })
}

/// Default window and grid used by the entropy scans: `n_max = 4T`, `M = 16T` rounded up.
pub fn default_window(t: usize) -> (usize, usize) {
    let n_max = 4 * t;
    (n_max, (4 * n_max).next_power_of_two())
}

/// `Σ Θ(p_n)` over the window; a lower estimate of the basis entropy when `leak > 0`.
pub fn shannon_entropy(d: &BasisDistribution) -> f64 {
    d.probs.iter().map(|&p| theta(p)).sum()
}

/// Smallest `ν` with `Σ_{|n|≤ν} p_n > 1 − ε²`.
pub fn n_epsilon(d: &BasisDistribution, eps: f64) -> Result<usize> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidArgument(format!("ε must lie in (0, 1), got {eps}")));
    }
    let target = 1.0 - eps * eps;
    let mut acc = d.prob(0);
    if acc > target {
        return Ok(0);
    }
    for nu in 1..=d.n_max as i64 {
        acc += d.prob(nu) + d.prob(-nu);
        if acc > target {
            return Ok(nu as usize);
        }
    }
    Err(Error::WindowTooSmall { captured: acc, required: target })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Moment {
    pub q: f64,
    /// `Σ |n|^q p_n` over the window.
    pub value: f64,
    /// Mass the window misses; the true moment is at least `value`.
    pub leak: f64,
}

pub fn moment(d: &BasisDistribution, q: f64) -> Result<Moment> {
    if !(q > 0.0) {
        return Err(Error::InvalidArgument(format!("moment order must be positive, got {q}")));
    }
    let value = d.iter().map(|(n, p)| (n.unsigned_abs() as f64).powf(q) * p).sum();
    Ok(Moment { q, value, leak: d.leak })
}

/// Distribution over the union of the atom basis (for the point part) and `B_F` of the
/// continuous part of a mixture. The two parts occupy disjoint labels.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MixtureDistribution {
    pub p: f64,
    /// Point-part probabilities, `P·w_k`; independent of `T`.
    pub point: Vec<f64>,
    /// `B_F` distribution of the normalized continuous part.
    pub continuous: BasisDistribution,
}

impl MixtureDistribution {
    /// `Σ Θ` over every label of both parts.
    pub fn shannon(&self) -> f64 {
        let q = 1.0 - self.p;
        self.point.iter().map(|&x| theta(x)).sum::<f64>()
            + self.continuous.probs.iter().map(|&x| theta(q * x)).sum::<f64>()
    }

    /// Entropy of the normalized point part.
    pub fn point_entropy(&self) -> f64 {
        if self.p == 0.0 {
            return 0.0;
        }
        self.point.iter().map(|&x| theta(x / self.p)).sum()
    }
}

pub fn mixture_distribution(m: &SpectralMeasure, t: usize, n_max: usize, grid: usize) -> Result<MixtureDistribution> {
    use crate::measures::MeasureKind;
    match m.kind() {
        MeasureKind::Mixture(mx) => {
            let p = mx.p();
            let point = mx.point_part().atoms().iter().map(|a| p * a.weight).collect();
            let continuous = bf_distribution(mx.continuous_part(), t, n_max, grid)?;
            Ok(MixtureDistribution { p, point, continuous })
        }
        MeasureKind::Atomic(a) => Ok(MixtureDistribution {
            p: 1.0,
            point: a.atoms().iter().map(|x| x.weight).collect(),
            continuous: BasisDistribution { t, n_max: 0, probs: vec![0.0], leak: 1.0 },
        }),
        _ => Ok(MixtureDistribution { p: 0.0, point: vec![], continuous: bf_distribution(m, t, n_max, grid)? }),
    }
}
