use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Atom {
    /// Angle in `[0, 2π]`.
    pub position: f64,
    pub weight: f64,
}

/// Finitely many point masses, kept sorted by position.
#[derive(Debug, Clone, PartialEq)]
pub struct AtomicMeasure {
    atoms: Vec<Atom>,
}

impl AtomicMeasure {
    pub fn new(mut atoms: Vec<Atom>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::InvalidMeasure("atomic measure needs at least one atom".into()));
        }
        for a in &atoms {
            if !(0.0..=TAU).contains(&a.position) {
                return Err(Error::InvalidMeasure(format!("atom position {} outside [0, 2π]", a.position)));
            }
            if !(a.weight > 0.0 && a.weight.is_finite()) {
                return Err(Error::InvalidMeasure(format!("atom weight {} is not positive", a.weight)));
            }
        }
        let total: f64 = atoms.iter().map(|a| a.weight).sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidMeasure(format!("atom weights sum to {total}, not 1")));
        }
        atoms.sort_by(|a, b| a.position.total_cmp(&b.position));
        if atoms.windows(2).any(|w| w[0].position == w[1].position) {
            return Err(Error::InvalidMeasure("atom positions must be distinct".into()));
        }
        Ok(AtomicMeasure { atoms })
    }

    /// `n` equal atoms at `2πj/n`.
    pub fn equally_spaced(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidMeasure("need at least one atom".into()));
        }
        Self::new(
            (0..n)
                .map(|j| Atom { position: TAU * j as f64 / n as f64, weight: 1.0 / n as f64 })
                .collect(),
        )
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub(crate) fn fourier(&self, t: i64) -> Complex64 {
        self.atoms
            .iter()
            .map(|a| a.weight * Complex64::from_polar(1.0, (t as f64 * a.position).rem_euclid(TAU)))
            .sum()
    }

    /// `μ([0, λ])`.
    pub(crate) fn cdf(&self, lambda: f64) -> f64 {
        let s: f64 = self.atoms.iter().filter(|a| a.position <= lambda).map(|a| a.weight).sum();
        s.min(1.0)
    }

    /// Mass of `[lo, hi)` in angles; `hi ≥ 2π` closes the interval on the right.
    pub(crate) fn interval(&self, lo: f64, hi: f64) -> f64 {
        self.atoms
            .iter()
            .filter(|a| a.position >= lo && (a.position < hi || hi >= TAU))
            .map(|a| a.weight)
            .sum()
    }

    /// Mass of the open ball `(c − r, c + r)` in unit coordinates.
    pub(crate) fn ball_unit(&self, center: f64, r: f64) -> f64 {
        self.atoms.iter().filter(|a| (a.position / TAU - center).abs() < r).map(|a| a.weight).sum()
    }

    /// `(index, mass)` of occupied left-closed cells; an atom at `2π` joins the last cell.
    pub(crate) fn bin(&self, base: u32, depth: u32) -> Vec<(u64, f64)> {
        let n = (base as f64).powi(depth as i32);
        let last = (base as u64).pow(depth) - 1;
        let mut out: Vec<(u64, f64)> = Vec::new();
        for a in &self.atoms {
            let idx = ((a.position / TAU * n).floor() as u64).min(last);
            match out.last_mut() {
                Some((j, w)) if *j == idx => *w += a.weight,
                _ => out.push((idx, a.weight)),
            }
        }
        out
    }
}
