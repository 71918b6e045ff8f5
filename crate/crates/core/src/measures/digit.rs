//! Measures defined by independent random digits `x = Σ a_n b^{-n}`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::cascade::{Branch, Cascade};
use crate::error::{Error, Result};

/// Probability vector of digit `a_n` as a function of the position `n ≥ 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum DigitLaw {
    /// Same vector at every position.
    Iid(Vec<f64>),
    /// Position `n` uses entry `(n − 1) mod len`.
    Periodic(Vec<Vec<f64>>),
    /// Position `n` with `k! ≤ n < (k+1)!` uses `even` when `k` is even and `odd` otherwise.
    FactorialBlocks { even: Vec<f64>, odd: Vec<f64> },
}

impl DigitLaw {
    fn vectors(&self) -> Vec<&[f64]> {
        match self {
            DigitLaw::Iid(v) => vec![v.as_slice()],
            DigitLaw::Periodic(vs) => vs.iter().map(Vec::as_slice).collect(),
            DigitLaw::FactorialBlocks { even, odd } => vec![even.as_slice(), odd.as_slice()],
        }
    }

    /// Index into `vectors()` for digit position `n ≥ 1`.
    fn slot(&self, n: u64) -> usize {
        match self {
            DigitLaw::Iid(_) => 0,
            DigitLaw::Periodic(vs) => ((n - 1) % vs.len() as u64) as usize,
            DigitLaw::FactorialBlocks { .. } => {
                if factorial_block(n) % 2 == 0 {
                    0
                } else {
                    1
                }
            }
        }
    }
}

/// The `k` with `k! ≤ n < (k+1)!`, for `n ≥ 1`.
pub(crate) fn factorial_block(n: u64) -> u64 {
    let mut k = 1u64;
    let mut next = 2u64; // (k+1)!
    while next <= n {
        k += 1;
        next = match next.checked_mul(k + 1) {
            Some(v) => v,
            None => return k,
        };
    }
    k
}

#[derive(Debug, Clone, PartialEq)]
pub struct DigitProductMeasure {
    base: u32,
    law: DigitLaw,
    levels: Vec<Vec<Branch>>,
}

impl DigitProductMeasure {
    pub fn new(base: u32, law: DigitLaw) -> Result<Self> {
        if base < 2 {
            return Err(Error::InvalidMeasure(format!("digit base must be at least 2, got {base}")));
        }
        let vectors = law.vectors();
        if vectors.is_empty() {
            return Err(Error::InvalidMeasure("periodic digit law needs at least one vector".into()));
        }
        let bf = base as f64;
        let mut levels = Vec::with_capacity(vectors.len());
        for v in vectors {
            if v.len() != base as usize {
                return Err(Error::InvalidMeasure(format!(
                    "digit vector has {} entries, base is {base}",
                    v.len()
                )));
            }
            if v.iter().any(|p| !p.is_finite() || *p < 0.0) {
                return Err(Error::InvalidMeasure("digit probabilities must be finite and non-negative".into()));
            }
            let total: f64 = v.iter().sum();
            if (total - 1.0).abs() > 1e-9 {
                return Err(Error::InvalidMeasure(format!("digit probabilities sum to {total}, not 1")));
            }
            levels.push(
                v.iter()
                    .enumerate()
                    .map(|(d, p)| Branch { offset: d as f64 / bf, scale: 1.0 / bf, prob: p / total })
                    .collect(),
            );
        }
        Ok(DigitProductMeasure { base, law, levels })
    }

    /// Base 2, digit positions in even factorial blocks fixed to 0, odd blocks fair.
    pub fn appendix() -> Self {
        Self::new(2, DigitLaw::FactorialBlocks { even: vec![1.0, 0.0], odd: vec![0.5, 0.5] })
            .expect("valid preset")
    }

    /// Base 2 with digit 0 drawn with probability `p`.
    pub fn binomial(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidMeasure(format!("binomial weight must lie in [0, 1], got {p}")));
        }
        Self::new(2, DigitLaw::Iid(vec![p, 1.0 - p]))
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn law(&self) -> &DigitLaw {
        &self.law
    }

    pub fn is_appendix(&self) -> bool {
        self.base == 2
            && self.law == DigitLaw::FactorialBlocks { even: vec![1.0, 0.0], odd: vec![0.5, 0.5] }
    }

    /// Probability vector of digit `n ≥ 1`.
    pub fn digit_probs(&self, n: u64) -> impl Iterator<Item = f64> + '_ {
        self.levels[self.law.slot(n)].iter().map(|b| b.prob)
    }

    /// Lebesgue measure in disguise: every digit uniform.
    pub(crate) fn is_uniform(&self) -> bool {
        let u = 1.0 / self.base as f64;
        self.levels.iter().all(|l| l.iter().all(|b| (b.prob - u).abs() < 1e-15))
    }

    /// `Σ Θ(p) / ln b` for iid laws.
    pub fn information_dimension(&self) -> Option<f64> {
        match &self.law {
            DigitLaw::Iid(v) => Some(v.iter().map(|&p| crate::math::theta(p)).sum::<f64>() / (self.base as f64).ln()),
            DigitLaw::Periodic(vs) => Some(
                vs.iter().map(|v| v.iter().map(|&p| crate::math::theta(p)).sum::<f64>()).sum::<f64>()
                    / (vs.len() as f64 * (self.base as f64).ln()),
            ),
            DigitLaw::FactorialBlocks { .. } => None,
        }
    }

    /// `μ̂` at angular frequency `omega` on the unit interval (`omega = 2πt`).
    pub(crate) fn fourier_unit(&self, omega: f64, tol: f64) -> Complex64 {
        if self.is_uniform() {
            return Complex64::new(0.0, 0.0);
        }
        let bf = self.base as f64;
        let mut z = Complex64::new(1.0, 0.0);
        // scale = b^{-(n-1)}; the tail past digit n-1 moves the phase by at most |ω| b^{-(n-1)}
        let mut scale = 1.0;
        let mut n = 1u64;
        loop {
            if omega.abs() * scale < tol {
                break;
            }
            scale /= bf;
            let mut f = Complex64::new(0.0, 0.0);
            for (d, p) in self.digit_probs(n).enumerate() {
                if p > 0.0 {
                    f += p * Complex64::from_polar(1.0, omega * d as f64 * scale);
                }
            }
            z *= f;
            if z.norm() == 0.0 {
                return z;
            }
            n += 1;
        }
        // the neglected digits shift the phase by ω·E[tail] to first order
        let mut mean = 0.0;
        for m in n..n + 64 {
            scale /= bf;
            mean += scale * self.digit_probs(m).enumerate().map(|(d, p)| d as f64 * p).sum::<f64>();
        }
        z * Complex64::from_polar(1.0, omega * mean)
    }

    /// `ln μ` of the cell with the given base-`b` index at `depth`, in the native base.
    pub(crate) fn ln_cell(&self, depth: u32, index: u64) -> f64 {
        let b = self.base as u64;
        let mut ln = 0.0;
        let mut rest = index;
        let mut digits = vec![0usize; depth as usize];
        for slot in digits.iter_mut().rev() {
            *slot = (rest % b) as usize;
            rest /= b;
        }
        for (i, &d) in digits.iter().enumerate() {
            let p = self.levels[self.law.slot(i as u64 + 1)][d].prob;
            if p <= 0.0 {
                return f64::NEG_INFINITY;
            }
            ln += p.ln();
        }
        ln
    }

    /// Nonzero cells at `depth` as `(index, ln mass)`, in index order.
    pub(crate) fn refine_native(&self, depth: u32, max_cells: usize) -> Result<Vec<(u64, f64)>> {
        let b = self.base as u64;
        let mut cells: Vec<(u64, f64)> = vec![(0, 0.0)];
        for n in 1..=depth as u64 {
            let level = &self.levels[self.law.slot(n)];
            let live = level.iter().filter(|x| x.prob > 0.0).count();
            if cells.len().saturating_mul(live) > max_cells {
                return Err(Error::CellBudget { base: self.base, depth: n as u32, budget: max_cells });
            }
            let mut next = Vec::with_capacity(cells.len() * live);
            for &(idx, lm) in &cells {
                for (d, x) in level.iter().enumerate() {
                    if x.prob > 0.0 {
                        next.push((idx * b + d as u64, lm + x.prob.ln()));
                    }
                }
            }
            cells = next;
        }
        Ok(cells)
    }
}

impl Cascade for DigitProductMeasure {
    fn branches(&self, level: usize) -> &[Branch] {
        &self.levels[self.law.slot(level as u64 + 1)]
    }
}

/// `μ_k` of the appendix measure: the mass of each nonzero dyadic cell at depth `k!`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AppendixMu {
    pub k: u32,
    /// Number of fair digits among positions `1..=k!`, i.e. `−log2 μ_k`.
    pub random_digits: f64,
    pub ln: f64,
    pub log2: f64,
    /// `μ_k` itself; underflows to 0 from `k = 8` on.
    pub value: f64,
    /// `ln μ_k / ln 2^{-k!}`.
    pub ratio: f64,
}

/// Closed form for `μ_k`, `k ≥ 1`.
pub fn appendix_mu(k: u32) -> AppendixMu {
    assert!(k >= 1, "appendix_mu needs k >= 1");
    // fair digits sit in the blocks [j!, (j+1)!) with j odd; position k! opens block k
    let mut count: u128 = 0;
    let mut fact: u128 = 1; // j!
    let mut exact = true;
    for j in 1..k as u128 {
        let Some(next) = fact.checked_mul(j + 1) else {
            exact = false;
            break;
        };
        if j % 2 == 1 {
            count += next - fact;
        }
        fact = next;
    }
    let (random_digits, kfact) = if exact {
        ((count + (k % 2) as u128) as f64, fact as f64)
    } else {
        approx_counts(k)
    };
    let log2 = -random_digits;
    let ln = log2 * std::f64::consts::LN_2;
    AppendixMu { k, random_digits, ln, log2, value: log2.exp2(), ratio: random_digits / kfact }
}

fn approx_counts(k: u32) -> (f64, f64) {
    let mut count = 0.0;
    let mut fact = 1.0;
    for j in 1..k {
        let next = fact * (j + 1) as f64;
        if j % 2 == 1 {
            count += next - fact;
        }
        fact = next;
    }
    (count + (k % 2) as f64, fact)
}
