use faer::{Mat, Side};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::math::theta;
use crate::measures::SpectralMeasure;

/// Largest matrix handed to the dense eigensolver unless the caller raises it.
pub const DEFAULT_T_CAP: usize = 4096;

/// Eigenvalues this far below zero are rounding noise and are clamped to zero.
pub const CLAMP_FLOOR: f64 = -1e-10;

/// Hermitian Toeplitz matrix `R_st = r(t − s)`, stored by its first row `r(0..T)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ToeplitzMatrix {
    lags: Vec<Complex64>,
}

impl ToeplitzMatrix {
    /// From `r(0), r(1), …`; `r(−k)` is taken as `conj r(k)`.
    pub fn from_lags(lags: Vec<Complex64>) -> Result<Self> {
        if lags.is_empty() {
            return Err(Error::InvalidArgument("Toeplitz matrix needs at least one lag".into()));
        }
        Ok(ToeplitzMatrix { lags })
    }

    pub fn size(&self) -> usize {
        self.lags.len()
    }

    pub fn lags(&self) -> &[Complex64] {
        &self.lags
    }

    pub fn entry(&self, s: usize, t: usize) -> Complex64 {
        if t >= s {
            self.lags[t - s]
        } else {
            self.lags[s - t].conj()
        }
    }

    pub fn to_dense(&self) -> Mat<Complex64> {
        let n = self.size();
        Mat::from_fn(n, n, |s, t| self.entry(s, t))
    }

    /// Eigenvalues in descending order.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        let mut ev = self
            .to_dense()
            .self_adjoint_eigenvalues(Side::Lower)
            .map_err(|e| Error::Eigen(format!("{e:?}")))?;
        ev.reverse();
        Ok(ev)
    }
}

/// `R_st = μ̂(t − s)` for `0 ≤ s, t < T`.
pub fn toeplitz(m: &SpectralMeasure, t: usize) -> Result<ToeplitzMatrix> {
    toeplitz_capped(m, t, DEFAULT_T_CAP)
}

pub fn toeplitz_capped(m: &SpectralMeasure, t: usize, cap: usize) -> Result<ToeplitzMatrix> {
    if t == 0 {
        return Err(Error::InvalidArgument("T must be at least 1".into()));
    }
    if t > cap {
        return Err(Error::MatrixTooLarge { size: t, cap });
    }
    ToeplitzMatrix::from_lags((0..t as i64).map(|k| m.fourier(k)).collect())
}

/// Eigenvalues of `ρ(T)`, descending, after clamping into `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityMatrixSpectrum {
    pub t: usize,
    pub eigenvalues: Vec<f64>,
    /// Smallest eigenvalue before clamping.
    pub min_raw: f64,
}

impl DensityMatrixSpectrum {
    /// `p_i = r_i / T` from the Toeplitz eigenvalues `r_i`.
    pub fn from_toeplitz(r: &ToeplitzMatrix) -> Result<Self> {
        let t = r.size();
        let raw: Vec<f64> = r.eigenvalues()?.into_iter().map(|x| x / t as f64).collect();
        Ok(Self::from_raw(t, raw))
    }

    /// From eigenvalues of `ρ(T)` itself, i.e. already divided by `T`.
    pub fn from_raw(t: usize, mut raw: Vec<f64>) -> Self {
        raw.sort_by(|a, b| b.total_cmp(a));
        let min_raw = raw.last().copied().unwrap_or(0.0);
        let eigenvalues = raw.into_iter().map(|p| p.clamp(0.0, 1.0)).collect();
        DensityMatrixSpectrum { t, eigenvalues, min_raw }
    }

    /// Whether every raw eigenvalue was above the clamping floor.
    pub fn clamp_ok(&self) -> bool {
        self.min_raw >= CLAMP_FLOOR
    }

    /// `S = Σ Θ(p_i)`, in nats.
    pub fn entropy(&self) -> f64 {
        self.eigenvalues.iter().map(|&p| theta(p)).sum()
    }

    pub fn total(&self) -> f64 {
        self.eigenvalues.iter().sum()
    }
}

/// Spectrum of `ρ(T)` and its von Neumann entropy.
pub fn eigen_entropy(m: &SpectralMeasure, t: usize) -> Result<(DensityMatrixSpectrum, f64)> {
    eigen_entropy_capped(m, t, DEFAULT_T_CAP)
}

pub fn eigen_entropy_capped(m: &SpectralMeasure, t: usize, cap: usize) -> Result<(DensityMatrixSpectrum, f64)> {
    let spec = DensityMatrixSpectrum::from_toeplitz(&toeplitz_capped(m, t, cap)?)?;
    let s = spec.entropy();
    Ok((spec, s))
}

/// Smallest number of leading eigenvalues whose sum exceeds `1 − ε`.
pub fn m_epsilon(s: &DensityMatrixSpectrum, eps: f64) -> usize {
    let target = 1.0 - eps;
    let mut acc = 0.0;
    for (i, p) in s.eigenvalues.iter().enumerate() {
        acc += p;
        if acc > target {
            return i + 1;
        }
    }
    s.eigenvalues.len()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LowerBound {
    /// `ε ln(1/ε) + ε ln(m − 3)`, or `−∞` when `m ≤ 3`.
    pub bound: f64,
    pub holds: bool,
}

/// Checks `S ≥ ε ln(1/ε) + ε ln(m_ε − 3)`; vacuous for `m_ε ≤ 3`.
pub fn lwb_bound(s: f64, m_eps: usize, eps: f64) -> LowerBound {
    if m_eps <= 3 {
        return LowerBound { bound: f64::NEG_INFINITY, holds: true };
    }
    let bound = eps * (1.0 / eps).ln() + eps * ((m_eps - 3) as f64).ln();
    LowerBound { bound, holds: s >= bound - 1e-12 }
}
