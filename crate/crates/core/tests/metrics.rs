use proptest::prelude::*;
use whichway_core::metrics::{
    distinguishability, duality_check, match_profiles, visibility, PeakSelector,
};
use whichway_core::IntensityProfile;

/// Fringes of period `period` samples and contrast `contrast` under a
/// Gaussian envelope, moved right by `shift` samples.
fn fringes(period: f64, contrast: f64, shift: f64, pitch: f64) -> IntensityProfile {
    let values = (0..1200)
        .map(|i| {
            let x = i as f64 - 600.0 - shift;
            let c = (std::f64::consts::PI * x / period).cos();
            (1.0 - contrast + contrast * c * c) * (-(x / 200.0).powi(2)).exp()
        })
        .collect();
    IntensityProfile::new(-600.0 * pitch, pitch, values).unwrap()
}

fn selector() -> impl Strategy<Value = PeakSelector> {
    prop_oneof![Just(PeakSelector::Central), Just(PeakSelector::SecondThird)]
}

proptest! {
    #[test]
    fn visibility_ignores_positive_scaling(
        period in 15.0..60.0f64,
        contrast in 0.1..1.0f64,
        factor in 1e-8..1e8f64,
        sel in selector(),
    ) {
        let p = fringes(period, contrast, 0.0, 1e-5);
        let v = visibility(&p, sel).unwrap();
        let w = visibility(&p.scaled(factor), sel).unwrap();
        prop_assert!((v - w).abs() <= 1e-12 * v.max(1e-12));
    }

    #[test]
    fn visibility_ignores_translation(
        period in 15.0..60.0f64,
        contrast in 0.1..1.0f64,
        shift in 0usize..100,
        sel in selector(),
    ) {
        let v = visibility(&fringes(period, contrast, 0.0, 1e-5), sel).unwrap();
        let w = visibility(&fringes(period, contrast, shift as f64, 1e-5), sel).unwrap();
        prop_assert!((v - w).abs() <= 1e-12 * v.max(1e-12));
    }

    #[test]
    fn duality_sum_dominates_each_term(v in 0.0..=1.0f64, d in 0.0..=1.0f64) {
        let r = duality_check(v, d).unwrap();
        prop_assert_eq!(r.duality, v * v + d * d);
        prop_assert!(r.duality >= (v * v).max(d * d));
        prop_assert_eq!(r.violated, r.duality > 1.0);
    }

    #[test]
    fn distinguishability_is_increasing(a in 0.5..=1.0f64, b in 0.5..=1.0f64) {
        prop_assume!(a < b);
        prop_assert!(distinguishability(a).unwrap() < distinguishability(b).unwrap());
    }

    #[test]
    fn shifted_and_scaled_copies_match_exactly(
        shift in -20i32..20,
        scale in 0.01..100.0f64,
    ) {
        let pitch = 0.1e-3;
        let rec = fringes(15.0, 0.8, 0.0, pitch);
        let reference = fringes(15.0, 0.8, shift as f64, pitch).scaled(scale);
        let m = match_profiles(&rec, &reference, 1.0).unwrap();
        prop_assert!(m.rms_residual < 1e-10, "{:?}", m);
        prop_assert!((m.shift + shift as f64 * pitch).abs() < 1e-9);
        prop_assert!((m.v_scale * scale - 1.0).abs() < 1e-12);
    }

    #[test]
    fn unrelated_profiles_leave_a_residual(period in 10.0..14.0f64) {
        let rec = fringes(15.0, 0.8, 0.0, 0.1e-3);
        let reference = fringes(period, 0.8, 0.0, 0.1e-3);
        prop_assert!(match_profiles(&rec, &reference, 1.0).unwrap().rms_residual > 1e-10);
    }
}

#[test]
fn pixel_scale_from_paper_values() {
    // 13 um pixels referred to the pupil through the 58 cm / 25 cm distances
    let h: f64 = 13e-6 * 58.0 / 25.0;
    assert!((h - 0.0302e-3).abs() < 0.0001e-3);
}

#[test]
fn perfect_nulls_give_unit_visibility() {
    let v = visibility(&fringes(30.0, 1.0, 0.0, 1e-5), PeakSelector::Central).unwrap();
    assert!((v - 1.0).abs() < 1e-12);
}
