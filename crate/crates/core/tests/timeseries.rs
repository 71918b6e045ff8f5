use specdim::entropy::{entropy_curve, Method};
use specdim::measures::AtomicMeasure;
use specdim::timeseries::{read_csv, spectrum_dimension_detailed, synthesize, write_csv};
use specdim::{Error, SpectralMeasure};

const TIMES: [usize; 7] = [8, 16, 32, 64, 128, 256, 512];

#[test]
fn synthetic_slope_tracks_measure_slope() {
    for (m, depth) in [(SpectralMeasure::uniform(), 20), (SpectralMeasure::cantor(), 12)] {
        let s = synthesize(&m, 1 << 17, depth, 11).unwrap();
        let (curve, spectra) = spectrum_dimension_detailed(&s, &TIMES).unwrap();
        let exact = entropy_curve(&m, &TIMES, Method::Eig).unwrap().slope;
        assert!((curve.slope - exact).abs() < 0.1, "{}: {} vs {exact}", m.kind_name(), curve.slope);
        for sp in spectra {
            assert!(sp.min_raw >= -1e-8);
        }
    }
}

#[test]
fn synthesis_is_bit_reproducible() {
    let m = SpectralMeasure::mixture(AtomicMeasure::equally_spaced(2).unwrap(), SpectralMeasure::cantor(), 0.4).unwrap();
    let a = synthesize(&m, 5000, 8, 42).unwrap();
    let b = synthesize(&m, 5000, 8, 42).unwrap();
    assert!(a.values.iter().zip(&b.values).all(|(x, y)| x.re.to_bits() == y.re.to_bits() && x.im.to_bits() == y.im.to_bits()));
}

#[test]
fn csv_round_trip_keeps_analysis() {
    let s = synthesize(&SpectralMeasure::binomial(0.7).unwrap(), 4096, 12, 1).unwrap();
    let mut buf = Vec::new();
    write_csv(&s, &mut buf).unwrap();
    let back = read_csv(buf.as_slice(), "memory").unwrap();
    assert_eq!(back.values, s.values);
    let times = [4, 8, 16, 32];
    assert_eq!(spectrum_dimension_detailed(&back, &times).unwrap().0.slope, spectrum_dimension_detailed(&s, &times).unwrap().0.slope);
}

#[test]
fn short_series_is_rejected() {
    let s = synthesize(&SpectralMeasure::uniform(), 100, 8, 1).unwrap();
    assert!(matches!(spectrum_dimension_detailed(&s, &[8, 32]), Err(Error::InsufficientLength { .. })));
}
