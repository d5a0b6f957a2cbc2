use proptest::prelude::*;
use whichway_core::optics::fraunhofer_intensity;
use whichway_core::pipeline::Experiment;
use whichway_core::reconstruct::{
    build_aperture_matrix, full_rank_dims, gaussian_smooth, rank_of, reconstruct_series,
    series_system, solve_stacked, ApertureMatrix, ElementGrid, FluxKind, FluxSystem,
    ReconstructionResult, SolveOptions,
};
use whichway_core::{Band, Error, Geometry, Opening};

fn grid() -> ElementGrid {
    ElementGrid {
        origin: -15e-3,
        pitch: 0.1e-3,
    }
}

fn system(matrix: ApertureMatrix, p: &[f64], exposure: f64) -> FluxSystem {
    let flux = matrix.apply(p).unwrap().into_iter().map(|f| f * exposure).collect();
    FluxSystem { matrix, flux, exposure }
}

fn relative_error(a: &[f64], b: &[f64]) -> f64 {
    let num: f64 = a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum();
    let den: f64 = b.iter().map(|y| y * y).sum();
    (num / den).sqrt()
}

#[test]
fn rank_law_matches_brute_force() {
    for w in [40usize, 50] {
        let law: Vec<usize> = (w..=301).filter(|n| n % w == 0 || n % w == 1).collect();
        let brute: Vec<usize> = (w..=301)
            .filter(|&n| rank_of(&build_aperture_matrix(n, w, Opening::Rightward).unwrap()) == n)
            .collect();
        assert_eq!(brute, law, "w = {w}");
        assert_eq!(full_rank_dims(w, 301, Opening::Rightward).unwrap(), law);
    }
}

#[test]
fn paper_magic_numbers() {
    assert_eq!(
        full_rank_dims(40, 120, Opening::Rightward).unwrap(),
        vec![40, 41, 80, 81, 120]
    );
    assert_eq!(
        full_rank_dims(50, 101, Opening::Rightward).unwrap(),
        vec![50, 51, 100, 101]
    );
}

#[test]
fn paper_band_rows() {
    let a40 = build_aperture_matrix(301, 40, Opening::Rightward).unwrap();
    let a50 = build_aperture_matrix(301, 50, Opening::Rightward).unwrap();
    // 1-based columns 131..=170 and 131..=180 of row 150
    assert_eq!(a40.row_columns(149), Some((130, 169)));
    assert_eq!(a50.row_columns(149), Some((130, 179)));
    assert_eq!((a40.band_left(), a40.band_right()), (20, 20));
    assert_eq!((a50.band_left(), a50.band_right()), (20, 30));
    assert!(matches!(build_aperture_matrix(10, 11, Opening::Rightward), Err(Error::Config(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn stacked_pair_recovers_any_pattern(
        p in prop::collection::vec(0.0..10.0f64, 301),
        e40 in 0.1..10.0f64,
        e50 in 0.1..10.0f64,
    ) {
        prop_assume!(p.iter().any(|&v| v > 0.0));
        let systems = [
            system(build_aperture_matrix(301, 40, Opening::Rightward).unwrap(), &p, e40),
            system(build_aperture_matrix(301, 50, Opening::Rightward).unwrap(), &p, e50),
        ];
        let out = solve_stacked(&systems, grid(), &SolveOptions::default()).unwrap();
        prop_assert_eq!(out.effective_rank, 301);
        prop_assert!(relative_error(&out.p_hat, &p) < 1e-8);
        prop_assert!(out.residual_norm >= 0.0);
        prop_assert!(out.effective_rank <= out.rows.min(301));
    }

    #[test]
    fn full_rank_single_width_recovers_pattern(
        w in 2usize..25,
        k in 1usize..5,
        plus_one in any::<bool>(),
        seed in prop::collection::vec(0.0..1.0f64, 150),
    ) {
        let n = k * w + usize::from(plus_one);
        let p: Vec<f64> = seed.iter().cycle().take(n).map(|v| v + 0.1).collect();
        let m = build_aperture_matrix(n, w, Opening::Rightward).unwrap();
        prop_assume!(rank_of(&m) == n);
        let out = solve_stacked(&[system(m, &p, 1.0)], grid(), &SolveOptions::default()).unwrap();
        prop_assert!(relative_error(&out.p_hat, &p) < 1e-8);
    }

    #[test]
    fn smoothing_conserves_interior_mass(
        p in prop::collection::vec(0.0..5.0f64, 101),
        rms in 0.0..0.5e-3f64,
    ) {
        // 40 zero elements either side keep the kernel (at most 26 taps per
        // side here) inside the vector
        let mut padded = vec![0.0; 40];
        padded.extend(&p);
        padded.extend(vec![0.0; 40]);
        let r = ReconstructionResult {
            grid: grid(),
            p_hat: padded.clone(),
            residual_norm: 0.0,
            effective_rank: padded.len(),
            rows: padded.len(),
            cutoff: 1e-10,
            smoothing_rms: 0.0,
        };
        let s = gaussian_smooth(&r, rms).unwrap();
        let before: f64 = padded.iter().sum();
        let after: f64 = s.p_hat.iter().sum();
        prop_assert!((after - before).abs() <= 1e-12 * before.max(1e-300));
    }
}

#[test]
fn single_width_is_rank_deficient() {
    let p: Vec<f64> = (0..301).map(|j| 1.0 + (j as f64 / 7.0).sin().abs()).collect();
    let out = solve_stacked(
        &[system(build_aperture_matrix(301, 40, Opening::Rightward).unwrap(), &p, 1.0)],
        grid(),
        &SolveOptions::default(),
    )
    .unwrap();
    assert!(out.effective_rank < 301);
    assert!(out.is_rank_deficient());
}

#[test]
fn constant_pattern_under_centered_stops() {
    let c = 3.5;
    let p = vec![c; 301];
    let systems = [
        system(build_aperture_matrix(301, 40, Opening::Centered).unwrap(), &p, 1.0),
        system(build_aperture_matrix(301, 50, Opening::Centered).unwrap(), &p, 1.0),
    ];
    let out = solve_stacked(&systems, grid(), &SolveOptions::default()).unwrap();
    for v in &out.p_hat[25..276] {
        assert!((v - c).abs() < 1e-8 * c, "{v}");
    }
}

/// Scan window of `301 + 2 m` elements over a pattern that extends well
/// beyond it; returns the central +/-5 mm error of the truncated inversion.
fn truncation_error(m: usize) -> f64 {
    let geom = Geometry::default();
    let margin = 200;
    let total = 301 + 2 * margin;
    let truth: Vec<f64> = (0..total)
        .map(|j| {
            let x = (j as f64 - (total / 2) as f64) * 0.1e-3;
            fraunhofer_intensity(&geom, geom.dist_slits_lens, x)
        })
        .collect();
    let n = 301 + 2 * m;
    let first = margin - m;
    let systems: Vec<FluxSystem> = [40usize, 50]
        .iter()
        .map(|&w| {
            let band = Band::new(w, Opening::Rightward, 20);
            let flux = (0..n)
                .map(|i| {
                    let (lo, hi) = band.columns(i);
                    (lo..=hi)
                        .map(|j| truth[(first as i64 + j) as usize])
                        .sum::<f64>()
                })
                .collect();
            FluxSystem {
                matrix: ApertureMatrix::from_band(n, band).unwrap(),
                flux,
                exposure: 1.0,
            }
        })
        .collect();
    let out = solve_stacked(&systems, grid(), &SolveOptions::default()).unwrap();
    let centre = n / 2;
    let est = &out.p_hat[centre - 50..=centre + 50];
    let tru = &truth[margin + 150 - 50..=margin + 150 + 50];
    relative_error(est, tru)
}

#[test]
fn padding_the_scan_reduces_truncation_error() {
    let errors: Vec<f64> = [0usize, 20, 50, 100].iter().map(|&m| truncation_error(m)).collect();
    for pair in errors.windows(2) {
        assert!(pair[1] < pair[0], "{errors:?}");
    }
}

#[test]
fn noise_ripples_at_the_width_difference_period() {
    let exp = Experiment::default();
    let pupil = exp.pupil().unwrap();
    let series = exp.run(&pupil).unwrap();
    let systems: Vec<_> = series.iter().map(|s| series_system(s, FluxKind::Total)).collect();
    let r = reconstruct_series(&systems, &SolveOptions::default()).unwrap();
    // |50 - 40| elements of 0.1 mm: period 10 elements, bin 8 of an 80-element
    // segment
    for segment in [&r.p_hat[..80], &r.p_hat[221..]] {
        let power = periodogram(&detrend(segment));
        let mut sorted = power.clone();
        sorted.sort_by(|a, b| a.total_cmp(b));
        let median = sorted[sorted.len() / 2];
        assert!(power[8] > 5.0 * median, "fundamental {} vs median {median}", power[8]);
        let strongest = (1..power.len()).max_by(|&a, &b| power[a].total_cmp(&power[b])).unwrap();
        assert_eq!(strongest % 8, 0, "strongest bin {strongest} is not a harmonic");
    }
}

fn detrend(v: &[f64]) -> Vec<f64> {
    let n = v.len() as f64;
    let xm = (n - 1.0) / 2.0;
    let ym = v.iter().sum::<f64>() / n;
    let sxy: f64 = v.iter().enumerate().map(|(i, y)| (i as f64 - xm) * (y - ym)).sum();
    let sxx: f64 = (0..v.len()).map(|i| (i as f64 - xm).powi(2)).sum();
    let slope = sxy / sxx;
    v.iter().enumerate().map(|(i, y)| y - ym - slope * (i as f64 - xm)).collect()
}

/// `|DFT|^2` for bins 0..n/2; bin 0 is left at zero.
fn periodogram(v: &[f64]) -> Vec<f64> {
    let n = v.len();
    let mut out = vec![0.0; n / 2];
    for (k, slot) in out.iter_mut().enumerate().skip(1) {
        let (re, im) = v.iter().enumerate().fold((0.0, 0.0), |(re, im), (i, x)| {
            let phase = 2.0 * std::f64::consts::PI * (k * i) as f64 / n as f64;
            (re + x * phase.cos(), im - x * phase.sin())
        });
        *slot = re * re + im * im;
    }
    out
}

#[test]
fn mismatched_dimensions_are_configuration_errors() {
    let a = build_aperture_matrix(301, 40, Opening::Rightward).unwrap();
    let b = build_aperture_matrix(300, 50, Opening::Rightward).unwrap();
    let systems = [
        FluxSystem { matrix: a, flux: vec![1.0; 301], exposure: 1.0 },
        FluxSystem { matrix: b, flux: vec![1.0; 300], exposure: 1.0 },
    ];
    assert!(matches!(
        solve_stacked(&systems, grid(), &SolveOptions::default()),
        Err(Error::Config(_))
    ));
}
