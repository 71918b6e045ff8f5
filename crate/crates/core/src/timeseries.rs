//! Stationary sequences with a prescribed spectral measure, and recovery of the dimension of
//! that measure from the eigenvalues of estimated autocorrelation matrices.

use std::f64::consts::{PI, TAU};
use std::io::{Read, Write};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustfft::FftPlanner;
use serde::Serialize;

use crate::entropy::{CurvePoint, DensityMatrixSpectrum, EntropyCurve, ToeplitzMatrix, DEFAULT_CELL_BUDGET};
use crate::error::{Error, Result};
use crate::measures::{cell_count, MeasureKind, SpectralMeasure};

/// Largest cell grid synthesized with one inverse FFT; finer grids sum phasors directly.
const FFT_GRID_LIMIT: u64 = 1 << 22;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "type")]
pub enum Origin {
    Synthetic { measure: String, depth: u32, seed: u64 },
    Ingested { source: String },
}

#[derive(Debug, Clone, PartialEq)]
pub struct StationarySeries {
    pub values: Vec<Complex64>,
    pub origin: Origin,
}

impl StationarySeries {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// `X_t = Σ_j √mass_j e^{i(λ_j t + φ_j)}` over the depth-`depth` cells (at their midpoints)
/// and over the atoms (at their exact positions), with independent uniform phases.
pub fn synthesize(m: &SpectralMeasure, length: usize, depth: u32, seed: u64) -> Result<StationarySeries> {
    if length == 0 {
        return Err(Error::InvalidArgument("series length must be at least 1".into()));
    }
    let (p_atoms, atoms, continuous) = match m.kind() {
        MeasureKind::Atomic(a) => (1.0, a.atoms().to_vec(), None),
        MeasureKind::Mixture(mx) => (mx.p(), mx.point_part().atoms().to_vec(), Some(mx.continuous_part())),
        _ => (0.0, vec![], Some(m)),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut values = vec![Complex64::new(0.0, 0.0); length];

    if let Some(c) = continuous.filter(|_| p_atoms < 1.0) {
        let base = c.native_base().unwrap_or(2);
        let n = cell_count(base, depth)?;
        let cells = c.refine(base, depth, DEFAULT_CELL_BUDGET)?;
        let w = 1.0 - p_atoms;
        let coef: Vec<(u64, Complex64)> = cells
            .iter()
            .map(|cm| (cm.cell.index, Complex64::from_polar((w * cm.mass).sqrt(), TAU * rng.random::<f64>())))
            .collect();
        if n <= FFT_GRID_LIMIT {
            let n = n as usize;
            let mut grid = vec![Complex64::new(0.0, 0.0); n];
            for &(j, z) in &coef {
                grid[j as usize] = z;
            }
            FftPlanner::<f64>::new().plan_fft_inverse(n).process(&mut grid);
            for (t, x) in values.iter_mut().enumerate() {
                // midpoint offset: e^{iπt/N}
                let shift = Complex64::from_polar(1.0, PI * (t % (2 * n)) as f64 / n as f64);
                *x += shift * grid[t % n];
            }
        } else {
            for &(j, z) in &coef {
                let lambda = TAU * (j as f64 + 0.5) / n as f64;
                let step = Complex64::from_polar(1.0, lambda);
                let mut ph = z;
                for x in values.iter_mut() {
                    *x += ph;
                    ph *= step;
                }
            }
        }
    }

    for a in &atoms {
        let amp = (p_atoms * a.weight).sqrt();
        let phi = TAU * rng.random::<f64>();
        for (t, x) in values.iter_mut().enumerate() {
            *x += Complex64::from_polar(amp, (a.position * t as f64).rem_euclid(TAU) + phi);
        }
    }

    Ok(StationarySeries { values, origin: Origin::Synthetic { measure: m.kind_name().to_string(), depth, seed } })
}

/// Normalized autocorrelation estimate, `value(0) = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct AutocorrelationEstimate {
    pub values: Vec<Complex64>,
}

impl AutocorrelationEstimate {
    pub fn maxlag(&self) -> usize {
        self.values.len() - 1
    }

    /// `R̂(t)` for `|t| ≤ maxlag`, with `R̂(−t) = conj R̂(t)`.
    pub fn value(&self, t: i64) -> Complex64 {
        let k = t.unsigned_abs() as usize;
        if t >= 0 {
            self.values[k]
        } else {
            self.values[k].conj()
        }
    }
}

/// `R̂(t) = (1/L) Σ_s X_{s+t} conj(X_s)`, divided by `R̂(0)`.
pub fn estimate_autocorrelation(s: &StationarySeries, maxlag: usize) -> Result<AutocorrelationEstimate> {
    let l = s.len();
    if 4 * maxlag >= l {
        return Err(Error::InsufficientLength { length: l, maxlag });
    }
    let p = (2 * l).next_power_of_two();
    let mut planner = FftPlanner::<f64>::new();
    let mut buf = vec![Complex64::new(0.0, 0.0); p];
    buf[..l].copy_from_slice(&s.values);
    planner.plan_fft_forward(p).process(&mut buf);
    for z in buf.iter_mut() {
        *z = Complex64::new(z.norm_sqr(), 0.0);
    }
    planner.plan_fft_inverse(p).process(&mut buf);
    let r0 = buf[0].re;
    if !(r0 > 0.0) {
        return Err(Error::InvalidArgument("series has zero power".into()));
    }
    Ok(AutocorrelationEstimate { values: buf[..=maxlag].iter().map(|z| z / r0).collect() })
}

/// Entropy of the estimated `ρ(T)` at each `T`, fitted against `ln T`.
pub fn spectrum_dimension(s: &StationarySeries, times: &[usize]) -> Result<EntropyCurve> {
    Ok(spectrum_dimension_detailed(s, times)?.0)
}

/// As [`spectrum_dimension`], also returning the spectra (whose `min_raw` checks positivity).
pub fn spectrum_dimension_detailed(
    s: &StationarySeries,
    times: &[usize],
) -> Result<(EntropyCurve, Vec<DensityMatrixSpectrum>)> {
    if times.is_empty() || times.windows(2).any(|w| w[0] >= w[1]) || times[0] == 0 {
        return Err(Error::InvalidArgument("times must be positive and strictly increasing".into()));
    }
    let tmax = *times.last().expect("non-empty");
    let acf = estimate_autocorrelation(s, tmax - 1)?;
    let mut spectra = Vec::with_capacity(times.len());
    let mut points = Vec::with_capacity(times.len());
    for &t in times {
        let r = ToeplitzMatrix::from_lags(acf.values[..t].to_vec())?;
        let spec = DensityMatrixSpectrum::from_toeplitz(&r)?;
        points.push(CurvePoint { t, s: spec.entropy() });
        spectra.push(spec);
    }
    Ok((EntropyCurve::fit(points, None)?, spectra))
}

/// Reads a `re,im` CSV (header required).
pub fn read_csv<R: Read>(reader: R, source: &str) -> Result<StationarySeries> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_reader(reader);
    let headers = rdr.headers().map_err(|e| csv_error(&e, 1))?.clone();
    if headers.len() != 2 || &headers[0] != "re" || &headers[1] != "im" {
        return Err(Error::Csv { line: 1, message: format!("expected header 're,im', found '{}'", headers.iter().collect::<Vec<_>>().join(",")) });
    }
    let mut values = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| csv_error(&e, 0))?;
        let line = rec.position().map_or(0, |p| p.line());
        if rec.len() != 2 {
            return Err(Error::Csv { line, message: format!("expected 2 fields, found {}", rec.len()) });
        }
        let parse = |field: &str, name: &str| -> Result<f64> {
            let x: f64 = field
                .parse()
                .map_err(|_| Error::Csv { line, message: format!("{name} value '{field}' is not a number") })?;
            if x.is_finite() {
                Ok(x)
            } else {
                Err(Error::Csv { line, message: format!("{name} value '{field}' is not finite") })
            }
        };
        values.push(Complex64::new(parse(&rec[0], "re")?, parse(&rec[1], "im")?));
    }
    if values.is_empty() {
        return Err(Error::Csv { line: 1, message: "no samples after the header".into() });
    }
    Ok(StationarySeries { values, origin: Origin::Ingested { source: source.to_string() } })
}

fn csv_error(e: &csv::Error, fallback: u64) -> Error {
    let line = e.position().map_or(fallback, |p| p.line());
    Error::Csv { line, message: e.to_string() }
}

/// Writes `re,im` rows with a header.
pub fn write_csv<W: Write>(s: &StationarySeries, writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    let io = |e: csv::Error| Error::Io(std::io::Error::other(e.to_string()));
    w.write_record(["re", "im"]).map_err(io)?;
    for z in &s.values {
        w.write_record([z.re.to_string(), z.im.to_string()]).map_err(io)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::{Atom, AtomicMeasure};

    fn series(values: Vec<Complex64>) -> StationarySeries {
        StationarySeries { values, origin: Origin::Ingested { source: "test".into() } }
    }

    #[test]
    fn single_atom_is_a_pure_tone() {
        let m: SpectralMeasure = AtomicMeasure::new(vec![Atom { position: 0.7, weight: 1.0 }]).unwrap().into();
        let s = synthesize(&m, 64, 8, 3).unwrap();
        assert!(s.values.iter().all(|z| (z.norm() - 1.0).abs() < 1e-12));
        let ratio = s.values[5] / s.values[4];
        assert!((ratio - Complex64::from_polar(1.0, 0.7)).norm() < 1e-12);
    }

    #[test]
    fn fft_and_direct_synthesis_agree() {
        let m = SpectralMeasure::cantor();
        let s = synthesize(&m, 50, 4, 9).unwrap();
        // direct sum with the same phases, drawn in the same order
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let cells = m.refine(3, 4, 1000).unwrap();
        let mut want = vec![Complex64::new(0.0, 0.0); 50];
        for c in &cells {
            let phi = TAU * rng.random::<f64>();
            for (t, w) in want.iter_mut().enumerate() {
                *w += Complex64::from_polar(c.mass.sqrt(), c.cell.midpoint() * t as f64 + phi);
            }
        }
        for (a, b) in s.values.iter().zip(&want) {
            assert!((a - b).norm() < 1e-9);
        }
    }

    #[test]
    fn synthesis_is_reproducible() {
        let m = SpectralMeasure::binomial(0.7).unwrap();
        assert_eq!(synthesize(&m, 300, 10, 1).unwrap(), synthesize(&m, 300, 10, 1).unwrap());
        assert_ne!(synthesize(&m, 300, 10, 1).unwrap().values, synthesize(&m, 300, 10, 2).unwrap().values);
    }

    #[test]
    fn biased_estimator_on_simple_series() {
        let l = 1000;
        let c = estimate_autocorrelation(&series(vec![Complex64::new(1.0, 0.0); l]), 10).unwrap();
        for t in 0..=10 {
            assert!((c.values[t] - Complex64::new(1.0 - t as f64 / l as f64, 0.0)).norm() < 1e-12);
        }
        let tone: Vec<Complex64> = (0..l).map(|t| Complex64::from_polar(1.0, 0.3 * t as f64)).collect();
        let c = estimate_autocorrelation(&series(tone), 10).unwrap();
        assert!((c.value(7).norm() - (1.0 - 7.0 / l as f64)).abs() < 1e-12);
        assert_eq!(c.value(-7), c.value(7).conj());
        assert!(matches!(estimate_autocorrelation(&series(vec![Complex64::new(1.0, 0.0); 40]), 10), Err(Error::InsufficientLength { .. })));
    }

    #[test]
    fn white_noise_decorrelates() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let v: Vec<Complex64> = (0..1 << 16).map(|_| Complex64::from_polar(1.0, TAU * rng.random::<f64>())).collect();
        let c = estimate_autocorrelation(&series(v), 4).unwrap();
        assert!(c.values[1].norm() < 0.02);
    }

    #[test]
    fn csv_round_trip_and_errors() {
        let s = series(vec![Complex64::new(1.5, -2.0), Complex64::new(0.0, 1e-300)]);
        let mut buf = Vec::new();
        write_csv(&s, &mut buf).unwrap();
        let back = read_csv(buf.as_slice(), "mem").unwrap();
        assert_eq!(back.values, s.values);

        let err = read_csv("re,im\n1,2\n3,x\n".as_bytes(), "mem").unwrap_err();
        assert!(matches!(err, Error::Csv { line: 3, .. }), "{err}");
        let err = read_csv("1,2\n".as_bytes(), "mem").unwrap_err();
        assert!(matches!(err, Error::Csv { line: 1, .. }));
        let err = read_csv("re,im\n1,2\n3\n".as_bytes(), "mem").unwrap_err();
        assert!(matches!(err, Error::Csv { line: 3, .. }), "{err}");
    }
}
