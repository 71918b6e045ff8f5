use specdim::dimension::{
    factorial_scales, fractal_dimension, geometric_scales, hausdorff_estimate, information_dimension,
};
use specdim::SpectralMeasure;

struct Estimates {
    info: f64,
    fractal: f64,
    hausdorff: f64,
}

fn estimates(m: &SpectralMeasure, base: u32, depths: std::ops::RangeInclusive<u32>, eps: f64, scales: &[f64]) -> Estimates {
    Estimates {
        info: information_dimension(m, base, depths.clone()).unwrap().value,
        fractal: fractal_dimension(m, eps, base, depths).unwrap().value,
        hausdorff: hausdorff_estimate(m, 5, 500, scales).unwrap().value,
    }
}

#[test]
fn estimators_are_ordered() {
    let cases = [
        (SpectralMeasure::uniform(), 2, 6..=14, geometric_scales(2, 10..=20)),
        (SpectralMeasure::cantor(), 3, 5..=12, geometric_scales(3, 10..=18)),
        (SpectralMeasure::binomial(0.8).unwrap(), 2, 8..=18, geometric_scales(2, 20..=40)),
    ];
    for (m, base, depths, scales) in cases {
        let e = estimates(&m, base, depths, 0.01, &scales);
        assert!(e.info <= e.fractal + 0.05, "{}: info {} fractal {}", m.kind_name(), e.info, e.fractal);
        assert!(e.hausdorff <= e.fractal + 0.05, "{}: hausdorff {} fractal {}", m.kind_name(), e.hausdorff, e.fractal);
    }
}

#[test]
fn exactly_scaling_measures_collapse() {
    let u = estimates(&SpectralMeasure::uniform(), 2, 6..=14, 0.01, &geometric_scales(2, 10..=20));
    let c = estimates(&SpectralMeasure::cantor(), 3, 5..=12, 0.01, &geometric_scales(3, 10..=18));
    for e in [u, c] {
        assert!((e.info - e.fractal).abs() < 0.05 && (e.info - e.hausdorff).abs() < 0.05, "{} {} {}", e.info, e.fractal, e.hausdorff);
    }
}

#[test]
fn binomial_box_count_collapses_onto_information_dimension() {
    // the greedy cover converges slowly in ε; at ε = 0.3 the depth-8..18 slope sits on D
    let m = SpectralMeasure::binomial(0.8).unwrap();
    let info = information_dimension(&m, 2, 8..=18).unwrap().value;
    let fractal = fractal_dimension(&m, 0.3, 2, 8..=18).unwrap().value;
    assert!((info - 0.7219).abs() < 0.02);
    assert!((info - fractal).abs() < 0.05, "{info} {fractal}");
}

#[test]
fn appendix_separates_fractal_from_hausdorff() {
    let app = SpectralMeasure::appendix();
    let fractal = fractal_dimension(&app, 0.01, 2, 6..=22).unwrap().value;
    let h4 = hausdorff_estimate(&app, 9, 300, &factorial_scales(3..=4)).unwrap().value;
    let h5 = hausdorff_estimate(&app, 9, 300, &factorial_scales(3..=5)).unwrap().value;
    assert!(fractal >= 0.85, "{fractal}");
    assert!(h5 <= 0.35 && h5 < h4, "{h4} {h5}");
}
