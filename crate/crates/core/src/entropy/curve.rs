use serde::{Deserialize, Serialize};

use super::basis::{bf_distribution, default_window, shannon_entropy};
use super::toeplitz::{eigen_entropy_capped, DEFAULT_T_CAP};
use crate::error::{Error, Result};
use crate::math::{fit_line, LineFit};
use crate::measures::SpectralMeasure;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// Toeplitz eigenvalue entropy.
    Eig,
    /// Shannon entropy over the `B_F` basis.
    Bf,
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "eig" => Ok(Method::Eig),
            "bf" => Ok(Method::Bf),
            _ => Err(Error::InvalidArgument(format!("unknown method '{s}' (expected eig or bf)"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvePoint {
    pub t: usize,
    pub s: f64,
}

/// `(T, S)` pairs with a least-squares fit of `S` against `ln T`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntropyCurve {
    pub points: Vec<CurvePoint>,
    /// Smallest and largest `T` included in the fit.
    pub fit_window: (usize, usize),
    pub slope: f64,
    pub intercept: f64,
    pub residual: f64,
}

impl EntropyCurve {
    /// Fits over `T ∈ [lo, hi]`, or over the upper half of the points when `window` is `None`.
    pub fn fit(points: Vec<CurvePoint>, window: Option<(usize, usize)>) -> Result<Self> {
        if points.windows(2).any(|w| w[0].t >= w[1].t) {
            return Err(Error::InvalidArgument("times must be strictly increasing".into()));
        }
        let (lo, hi) = match window {
            Some(w) => w,
            None => {
                let start = points.len() / 2;
                let start = start.min(points.len().saturating_sub(2));
                match (points.get(start), points.last()) {
                    (Some(a), Some(b)) => (a.t, b.t),
                    _ => return Err(Error::InvalidArgument("need at least two times to fit a slope".into())),
                }
            }
        };
        let sel: Vec<&CurvePoint> = points.iter().filter(|p| p.t >= lo && p.t <= hi).collect();
        let xs: Vec<f64> = sel.iter().map(|p| (p.t as f64).ln()).collect();
        let ys: Vec<f64> = sel.iter().map(|p| p.s).collect();
        let LineFit { slope, intercept, residual } = fit_line(&xs, &ys)
            .ok_or_else(|| Error::InvalidArgument(format!("fit window [{lo}, {hi}] holds fewer than two times")))?;
        Ok(EntropyCurve { points, fit_window: (lo, hi), slope, intercept, residual })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveOptions {
    pub method: Method,
    pub t_cap: usize,
    pub fit_window: Option<(usize, usize)>,
}

impl Default for CurveOptions {
    fn default() -> Self {
        CurveOptions { method: Method::Eig, t_cap: DEFAULT_T_CAP, fit_window: None }
    }
}

/// Entropy at one time by the chosen method.
pub fn entropy_at(m: &SpectralMeasure, t: usize, method: Method, t_cap: usize) -> Result<f64> {
    match method {
        Method::Eig => Ok(eigen_entropy_capped(m, t, t_cap)?.1),
        Method::Bf => {
            let (n_max, grid) = default_window(t);
            Ok(shannon_entropy(&bf_distribution(m, t, n_max, grid)?))
        }
    }
}

pub fn entropy_curve(m: &SpectralMeasure, times: &[usize], method: Method) -> Result<EntropyCurve> {
    entropy_curve_with(m, times, &CurveOptions { method, ..CurveOptions::default() })
}

pub fn entropy_curve_with(m: &SpectralMeasure, times: &[usize], opts: &CurveOptions) -> Result<EntropyCurve> {
    if times.is_empty() || times.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument("times must be non-empty and strictly increasing".into()));
    }
    let points = times
        .iter()
        .map(|&t| Ok(CurvePoint { t, s: entropy_at(m, t, opts.method, opts.t_cap)? }))
        .collect::<Result<Vec<_>>>()?;
    EntropyCurve::fit(points, opts.fit_window)
}

/// `[2^a, 2^{a+1}, …, 2^b]`.
pub fn dyadic_times(a: u32, b: u32) -> Vec<usize> {
    (a..=b).map(|k| 1usize << k).collect()
}
