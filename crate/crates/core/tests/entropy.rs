use proptest::prelude::*;

use specdim::dimension::{fractal_dimension, hausdorff_estimate, geometric_scales};
use specdim::entropy::{
    bf_distribution, default_window, dyadic_times, eigen_entropy, entropy_curve, m_epsilon, mixture_distribution,
    n_epsilon, shannon_entropy, Method,
};
use specdim::math::theta;
use specdim::measures::{Atom, AtomicMeasure};
use specdim::SpectralMeasure;

fn continuous() -> Vec<SpectralMeasure> {
    vec![
        SpectralMeasure::uniform(),
        SpectralMeasure::cantor(),
        SpectralMeasure::binomial(0.8).unwrap(),
        SpectralMeasure::appendix(),
    ]
}

#[test]
fn eigen_entropy_below_basis_entropy() {
    for m in continuous() {
        for t in [3, 10, 64, 200] {
            let s = eigen_entropy(&m, t).unwrap().1;
            let (n_max, grid) = default_window(t);
            let sb = shannon_entropy(&bf_distribution(&m, t, n_max, grid).unwrap());
            assert!(s <= sb + 0.05, "{} T = {t}: {s} > {sb}", m.kind_name());
        }
    }
}

#[test]
fn mixture_decomposes_over_disjoint_labels() {
    let p = 0.3;
    let atoms = AtomicMeasure::new(vec![Atom { position: 1.0, weight: 0.6 }, Atom { position: 2.5, weight: 0.4 }]).unwrap();
    let m = SpectralMeasure::mixture(atoms, SpectralMeasure::uniform(), p).unwrap();
    let mut sp = None;
    for t in [4, 16, 64, 256] {
        let (n_max, grid) = default_window(t);
        let d = mixture_distribution(&m, t, n_max, grid).unwrap();
        let rhs = p * d.point_entropy() + (1.0 - p) * shannon_entropy(&d.continuous) + theta(p) + theta(1.0 - p);
        assert!((d.shannon() - rhs).abs() < 1e-6);
        assert_eq!(*sp.get_or_insert(d.point_entropy()), d.point_entropy());
    }
}

#[test]
fn slope_is_bracketed_by_dimension_estimates() {
    let cases: [(SpectralMeasure, u32, std::ops::RangeInclusive<u32>); 3] = [
        (SpectralMeasure::uniform(), 2, 6..=14),
        (SpectralMeasure::cantor(), 3, 5..=12),
        (SpectralMeasure::binomial(0.8).unwrap(), 2, 8..=18),
    ];
    for (m, base, depths) in cases {
        let slope = entropy_curve(&m, &dyadic_times(4, 10), Method::Eig).unwrap().slope;
        let upper = fractal_dimension(&m, 0.01, base, depths.clone()).unwrap().value;
        let lower = hausdorff_estimate(&m, 3, 300, &geometric_scales(base, depths)).unwrap().lower.unwrap();
        assert!(slope >= lower - 0.1 && slope <= upper + 0.1, "{}: {lower} ≤ {slope} ≤ {upper}", m.kind_name());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn entropy_within_universal_bounds(which in 0usize..4, t in 1usize..160) {
        let m = &continuous()[which];
        let s = eigen_entropy(m, t).unwrap().1;
        prop_assert!(s >= 0.0);
        prop_assert!(s <= (t as f64).ln() + 1e-9);
    }

    #[test]
    fn m_epsilon_is_monotone(which in 0usize..4, t in 2usize..128, a in 0.01f64..0.99, b in 0.01f64..0.99) {
        let (spec, _) = eigen_entropy(&continuous()[which], t).unwrap();
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        prop_assert!(m_epsilon(&spec, hi) <= m_epsilon(&spec, lo));
    }

    #[test]
    fn n_epsilon_is_monotone(which in 0usize..4, t in 2usize..128, a in 0.05f64..0.99, b in 0.05f64..0.99) {
        let (n_max, grid) = default_window(t);
        let d = bf_distribution(&continuous()[which], t, n_max, grid).unwrap();
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        if let (Ok(x), Ok(y)) = (n_epsilon(&d, lo), n_epsilon(&d, hi)) {
            prop_assert!(y <= x);
        }
    }
}
