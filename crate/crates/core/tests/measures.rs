use proptest::prelude::*;

use specdim::measures::{appendix_mu, spec, AffineMap, Atom, AtomicMeasure, DigitLaw, DigitProductMeasure, IfsMeasure};
use specdim::SpectralMeasure;

fn catalogue() -> Vec<SpectralMeasure> {
    vec![
        SpectralMeasure::uniform(),
        SpectralMeasure::cantor(),
        SpectralMeasure::appendix(),
        SpectralMeasure::binomial(0.7).unwrap(),
        IfsMeasure::new(
            vec![AffineMap { scale: 0.25, offset: 0.0 }, AffineMap { scale: 0.5, offset: 0.5 }],
            vec![0.4, 0.6],
        )
        .unwrap()
        .into(),
        DigitProductMeasure::new(3, DigitLaw::Periodic(vec![vec![0.2, 0.3, 0.5], vec![1.0, 0.0, 0.0]])).unwrap().into(),
        SpectralMeasure::mixture(
            AtomicMeasure::new(vec![Atom { position: 0.5, weight: 0.25 }, Atom { position: 4.0, weight: 0.75 }]).unwrap(),
            SpectralMeasure::cantor(),
            0.3,
        )
        .unwrap(),
    ]
}

#[test]
fn every_full_partition_is_normalized() {
    for m in catalogue() {
        for (base, depth) in [(2, 0), (2, 10), (3, 7), (5, 4), (10, 3)] {
            let total: f64 = m.refine(base, depth, 1 << 20).unwrap().iter().map(|c| c.mass).sum();
            assert!((total - 1.0).abs() < 1e-9, "{} base {base} depth {depth}: {total}", m.kind_name());
        }
    }
}

#[test]
fn appendix_ratio_sequence_oscillates() {
    let want = [0.5, 1.0 / 3.0, 19.0 / 24.0, 1.0 / 6.0];
    for (k, w) in (2..=5).zip(want) {
        assert!((appendix_mu(k).ratio - w).abs() < 1e-12);
    }
    // even k climbs toward 1, odd k falls toward 0
    let r: Vec<f64> = (2..=12).map(|k| appendix_mu(k).ratio).collect();
    for i in 0..r.len() - 2 {
        if i % 2 == 0 {
            assert!(r[i + 2] > r[i]);
        } else {
            assert!(r[i + 2] < r[i]);
        }
    }
}

#[test]
fn spec_round_trip_preserves_fourier() {
    for m in catalogue() {
        let back = spec::from_value(spec::to_value(&m)).unwrap();
        for t in [1, 7, 40] {
            assert_eq!(back.fourier(t), m.fourier(t));
        }
    }
}

#[test]
fn spec_rejects_unknown_keys() {
    assert!(spec::from_json(r#"{"kind":"cantor","params":{},"extra":1}"#).is_err());
    assert!(spec::from_json(r#"{"kind":"digit","params":{"base":2,"law":{"iid":[0.5,0.5]},"depth":3}}"#).is_err());
    assert!(spec::from_json(r#"{"kind":"atomic","params":{"atoms":[{"position":0.0,"weight":1.0,"w":2}]}}"#).is_err());
}

proptest! {
    #[test]
    fn fourier_is_hermitian_and_bounded(which in 0usize..7, t in -500i64..500) {
        let m = &catalogue()[which];
        let z = m.fourier(t);
        prop_assert_eq!(m.fourier(-t), z.conj());
        prop_assert!(z.norm() <= 1.0 + m.tolerance());
    }

    #[test]
    fn continuous_cdf_inverts_quantile(which in 0usize..6, x in 0.01f64..0.99) {
        let m = &catalogue()[which];
        let q = m.quantile(x).unwrap();
        // one representable step in λ can carry a little mass; allow it
        let slack = m.ln_ball_unit(q / std::f64::consts::TAU, 8.0 * f64::EPSILON).exp();
        prop_assert!((m.cdf(q) - x).abs() <= slack + 1e-9, "x = {}, cdf = {}", x, m.cdf(q));
    }
}
