//! Invariant measures of finite families of contracting affine maps on `[0, 1]`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::cascade::{Branch, Cascade};
use super::digit::{DigitLaw, DigitProductMeasure};
use crate::error::{Error, Result};

/// `x ↦ scale·x + offset`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AffineMap {
    pub scale: f64,
    pub offset: f64,
}

/// Number of Taylor terms used at low frequency.
const MOMENTS: usize = 32;

#[derive(Debug, Clone, PartialEq)]
pub struct IfsMeasure {
    maps: Vec<AffineMap>,
    probs: Vec<f64>,
    branches: Vec<Branch>,
    /// Set when every map is `x ↦ (x + d)/b` for integer digits `d`.
    digits: Option<DigitProductMeasure>,
    moments: Vec<f64>,
}

impl IfsMeasure {
    pub fn new(maps: Vec<AffineMap>, probs: Vec<f64>) -> Result<Self> {
        if maps.is_empty() || maps.len() != probs.len() {
            return Err(Error::InvalidMeasure(format!(
                "IFS needs matching non-empty maps and probs ({} vs {})",
                maps.len(),
                probs.len()
            )));
        }
        // a single identity map is Lebesgue measure; store it as two halves
        if maps.len() == 1 && maps[0].scale == 1.0 && maps[0].offset == 0.0 && probs[0] == 1.0 {
            return Self::uniform();
        }
        if maps.len() == 1 {
            return Err(Error::InvalidMeasure("a single contraction has a point mass as its invariant measure".into()));
        }
        if probs.iter().any(|p| !(*p > 0.0 && p.is_finite())) {
            return Err(Error::InvalidMeasure("IFS probabilities must be positive".into()));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidMeasure(format!("IFS probabilities sum to {total}, not 1")));
        }
        let tol = 1e-12;
        for m in &maps {
            if !(m.scale > 0.0 && m.scale < 1.0) {
                return Err(Error::InvalidMeasure(format!("IFS scale {} outside (0, 1)", m.scale)));
            }
            if m.offset < -tol || m.offset + m.scale > 1.0 + tol {
                return Err(Error::InvalidMeasure(format!(
                    "image [{}, {}] leaves [0, 1]",
                    m.offset,
                    m.offset + m.scale
                )));
            }
        }
        let mut branches: Vec<Branch> = maps
            .iter()
            .zip(&probs)
            .map(|(m, p)| Branch { offset: m.offset.max(0.0), scale: m.scale, prob: p / total })
            .collect();
        branches.sort_by(|a, b| a.offset.total_cmp(&b.offset));
        if branches.windows(2).any(|w| w[0].hi() > w[1].offset + tol) {
            return Err(Error::InvalidMeasure("IFS images overlap".into()));
        }
        let digits = aligned_digits(&branches);
        let moments = moments(&branches, MOMENTS);
        Ok(IfsMeasure { maps, probs, branches, digits, moments })
    }

    pub fn uniform() -> Result<Self> {
        Self::new(
            vec![AffineMap { scale: 0.5, offset: 0.0 }, AffineMap { scale: 0.5, offset: 0.5 }],
            vec![0.5, 0.5],
        )
    }

    pub fn cantor() -> Self {
        Self::new(
            vec![AffineMap { scale: 1.0 / 3.0, offset: 0.0 }, AffineMap { scale: 1.0 / 3.0, offset: 2.0 / 3.0 }],
            vec![0.5, 0.5],
        )
        .expect("valid preset")
    }

    pub fn maps(&self) -> &[AffineMap] {
        &self.maps
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// `Σ p ln p / Σ p ln s`.
    pub fn information_dimension(&self) -> f64 {
        let num: f64 = self.branches.iter().map(|b| b.prob * b.prob.ln()).sum();
        let den: f64 = self.branches.iter().map(|b| b.prob * b.scale.ln()).sum();
        num / den
    }

    /// Digit form when the maps tile a base-`b` grid.
    pub(crate) fn digits(&self) -> Option<&DigitProductMeasure> {
        self.digits.as_ref()
    }

    pub(crate) fn is_uniform(&self) -> bool {
        self.digits.as_ref().is_some_and(|d| d.is_uniform())
    }

    pub(crate) fn fourier_unit(&self, omega: f64, tol: f64) -> Complex64 {
        if let Some(d) = &self.digits {
            return d.fourier_unit(omega, tol);
        }
        let s0 = self.branches[0].scale;
        if self.branches.iter().all(|b| b.scale == s0) {
            self.fourier_product(omega, s0, tol)
        } else {
            self.fourier_tree(omega)
        }
    }

    /// `ν̂(ω) = Π_k g(ω s^{k−1})` with `g(θ) = Σ p e^{iθ offset}`.
    fn fourier_product(&self, omega: f64, s: f64, tol: f64) -> Complex64 {
        let mut z = Complex64::new(1.0, 0.0);
        let mut theta = omega;
        while theta.abs() >= tol {
            let g: Complex64 = self
                .branches
                .iter()
                .map(|b| b.prob * Complex64::from_polar(1.0, theta * b.offset))
                .sum();
            z *= g;
            theta *= s;
        }
        // the leftover factor is ν̂(θ) ≈ e^{iθ·mean}
        z * Complex64::from_polar(1.0, theta * self.moments[1])
    }

    /// `ν̂(ω) = Σ p e^{iω offset} ν̂(scale·ω)`, closed by a Taylor series once `|ω| ≤ 1`.
    fn fourier_tree(&self, omega: f64) -> Complex64 {
        if omega.abs() <= 1.0 {
            return self.taylor(omega);
        }
        self.branches
            .iter()
            .map(|b| b.prob * Complex64::from_polar(1.0, omega * b.offset) * self.fourier_tree(b.scale * omega))
            .sum()
    }

    fn taylor(&self, theta: f64) -> Complex64 {
        let mut term = Complex64::new(1.0, 0.0);
        let mut z = Complex64::new(0.0, 0.0);
        for (k, m) in self.moments.iter().enumerate() {
            if k > 0 {
                term *= Complex64::new(0.0, theta) / k as f64;
            }
            z += term * m;
        }
        z
    }
}

impl Cascade for IfsMeasure {
    fn branches(&self, _level: usize) -> &[Branch] {
        &self.branches
    }
}

/// Digit law if every branch is a base-`b` digit cell for one integer `b`.
fn aligned_digits(branches: &[Branch]) -> Option<DigitProductMeasure> {
    let inv = 1.0 / branches[0].scale;
    let b = inv.round();
    if (inv - b).abs() > 1e-9 || !(2.0..=4096.0).contains(&b) || branches.iter().any(|x| x.scale != branches[0].scale) {
        return None;
    }
    let mut law = vec![0.0; b as usize];
    for x in branches {
        let d = x.offset * b;
        let dr = d.round();
        if (d - dr).abs() > 1e-9 || dr < 0.0 || dr >= b {
            return None;
        }
        law[dr as usize] += x.prob;
    }
    DigitProductMeasure::new(b as u32, DigitLaw::Iid(law)).ok()
}

/// `M_k = E[x^k]` from `M_k (1 − Σ p s^k) = Σ_m p_m Σ_{j<k} C(k,j) s_m^j b_m^{k−j} M_j`.
fn moments(branches: &[Branch], n: usize) -> Vec<f64> {
    let mut m = vec![1.0; n];
    let mut binom = vec![1.0f64];
    for k in 1..n {
        let mut row = vec![1.0; k + 1];
        for j in 1..k {
            row[j] = binom[j - 1] + binom[j];
        }
        binom = row;
        let mut rhs = 0.0;
        let mut denom = 1.0;
        for br in branches {
            denom -= br.prob * br.scale.powi(k as i32);
            let mut inner = 0.0;
            for j in 0..k {
                inner += binom[j] * br.scale.powi(j as i32) * br.offset.powi((k - j) as i32) * m[j];
            }
            rhs += br.prob * inner;
        }
        m[k] = rhs / denom;
    }
    m
}
