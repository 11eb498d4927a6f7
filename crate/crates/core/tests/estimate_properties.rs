use dircov_core::estimate::{estimate_pair_equivalence, estimate_worst_case, sample_angles, sample_unit_vectors};
use dircov_core::parallel::with_threads;
use dircov_core::{Alphabet, SampleSpec};

fn format(name: &str) -> Alphabet {
    Alphabet::from_format(name).unwrap()
}

#[test]
fn stream_is_unit_norm_and_reproducible() {
    let spec = SampleSpec::new(9, 2000, 5).unwrap();
    let a: Vec<_> = sample_unit_vectors(spec).collect();
    let b: Vec<_> = sample_unit_vectors(spec).collect();
    assert_eq!(a, b);
    for u in &a {
        let norm = u.coords().iter().map(|v| v * v).sum::<f64>().sqrt();
        assert!((norm - 1.0).abs() <= 1e-12);
    }
}

#[test]
fn supersets_never_worse_per_sample() {
    let pairs = [
        (format("e1m2"), format("int4")),
        (format("e2m1"), format("e2m1").with_value(5.0).unwrap()),
        (format("e3m0"), format("e3m0").with_value(-0.5).unwrap()),
    ];
    for (small, big) in pairs {
        let spec = SampleSpec::new(12, 10_000, 17).unwrap();
        let s = sample_angles(&small, spec).unwrap();
        let b = sample_angles(&big, spec).unwrap();
        assert!(b.iter().zip(&s).all(|(x, y)| x <= y), "{}", big.name());
    }
}

#[test]
fn prefix_maxima_are_nondecreasing() {
    let a = format("e2m1");
    let mut last = 0.0;
    for count in [1u64, 10, 100, 1000, 5000] {
        let e = estimate_worst_case(&a, SampleSpec::new(8, count, 3).unwrap()).unwrap();
        assert!(e.max_angle >= last);
        last = e.max_angle;
    }
}

#[test]
fn estimate_is_scale_invariant() {
    let a = format("e2m1");
    let spec = SampleSpec::new(16, 20_000, 9).unwrap();
    let base = estimate_worst_case(&a, spec).unwrap();
    let scaled = estimate_worst_case(&a.scaled(7.25).unwrap(), spec).unwrap();
    assert_eq!(base.max_angle, scaled.max_angle);
    assert_eq!(base.argmax_index, scaled.argmax_index);
}

#[test]
fn coverage_worsens_with_dimension() {
    let a = format("e3m0");
    let low = estimate_worst_case(&a, SampleSpec::new(4, 100_000, 1).unwrap()).unwrap();
    let high = estimate_worst_case(&a, SampleSpec::new(64, 100_000, 1).unwrap()).unwrap();
    assert!(high.max_angle > low.max_angle);
}

#[test]
fn worker_count_does_not_matter() {
    let a = format("int4");
    let spec = SampleSpec::new(16, 30_000, 21).unwrap();
    let one = with_threads(1, || estimate_worst_case(&a, spec).unwrap());
    for workers in [2, 4, 8] {
        assert_eq!(with_threads(workers, || estimate_worst_case(&a, spec).unwrap()), one);
    }
}

#[test]
fn paired_estimates() {
    let spec = SampleSpec::new(16, 50_000, 4).unwrap();
    let (x, y) = estimate_pair_equivalence(&format("e2m1"), &format("e2m1"), spec).unwrap();
    assert_eq!(x, y);
    let (int4, e1m2) = estimate_pair_equivalence(&format("int4"), &format("e1m2"), spec).unwrap();
    assert!(int4.max_angle <= e1m2.max_angle);
}

#[test]
fn single_sample_on_representable_direction() {
    let a = format("e2m1");
    let e = estimate_worst_case(&a, SampleSpec::new(5, 1, 0).unwrap()).unwrap();
    let u = e.argmax_direction.clone();
    let angle = dircov_core::geometry::min_angle_exact(&u, &a).unwrap().angle;
    assert_eq!(angle, e.max_angle);
    let axis = dircov_core::UnitVector::new(vec![0.0, 1.0, 0.0, 0.0, 0.0]).unwrap();
    assert_eq!(dircov_core::geometry::min_angle_exact(&axis, &a).unwrap().angle, 0.0);
}
