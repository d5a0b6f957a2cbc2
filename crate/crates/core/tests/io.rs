use whichway_core::instrument::{run_scan_on_pupil, DetectorConfig, ScanConfig};
use whichway_core::io::{
    read_json, read_reconstruction_csv, read_scan_csv, write_json, write_reconstruction,
    write_scan_csv, write_step_profiles, ReconstructionSidecar, ScanSidecar,
};
use whichway_core::pipeline::Experiment;
use whichway_core::reconstruct::{reconstruct_series, series_system, FluxKind, SolveOptions};

#[test]
fn scan_csv_feeds_reconstruction_unchanged() {
    let dir = tempfile::tempdir().unwrap();
    let exp = Experiment {
        detector: DetectorConfig::noiseless(),
        ..Experiment::default()
    };
    let pupil = exp.pupil().unwrap();
    let series = exp.run(&pupil).unwrap();

    let mut from_files = Vec::new();
    for (k, s) in series.iter().enumerate() {
        let csv = dir.path().join(format!("scan_{k}.csv"));
        let json = dir.path().join(format!("scan_{k}.json"));
        write_scan_csv(&csv, s).unwrap();
        write_json(&json, &ScanSidecar::new(s, None)).unwrap();

        let table = read_scan_csv(&csv).unwrap();
        let meta: ScanSidecar = read_json(&json).unwrap();
        assert_eq!(meta.scan, s.config);
        assert_eq!(table.len(), 301);
        for (a, b) in table.total.iter().zip(s.total_flux()) {
            assert!((a - b).abs() <= 1e-10 * b.abs());
        }
        from_files.push(table.system(&meta.scan, FluxKind::Total));
    }
    let direct: Vec<_> = series.iter().map(|s| series_system(s, FluxKind::Total)).collect();
    let a = reconstruct_series(&from_files, &SolveOptions::default()).unwrap();
    let b = reconstruct_series(&direct, &SolveOptions::default()).unwrap();
    let peak = b.p_hat.iter().copied().fold(0.0, f64::max);
    for (x, y) in a.p_hat.iter().zip(&b.p_hat) {
        assert!((x - y).abs() < 1e-6 * peak);
    }
}

#[test]
fn reconstruction_files_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let exp = Experiment {
        detector: DetectorConfig::noiseless(),
        ..Experiment::default()
    };
    let pupil = exp.pupil().unwrap();
    let series = exp.run(&pupil).unwrap();
    let systems: Vec<_> = series.iter().map(|s| series_system(s, FluxKind::Left)).collect();
    let r = reconstruct_series(&systems, &SolveOptions::default()).unwrap();
    let csv = dir.path().join("out/recon.csv");
    let json = dir.path().join("out/recon.json");
    write_reconstruction(&csv, &json, &r, FluxKind::Left).unwrap();

    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("position_mm,P_hat\n"));
    let profile = read_reconstruction_csv(&csv).unwrap();
    assert_eq!(profile.len(), 301);
    assert!((profile.origin() + 15e-3).abs() < 1e-12);
    assert!((profile.pitch() - 0.1e-3).abs() < 1e-15);

    let meta: ReconstructionSidecar = read_json(&json).unwrap();
    assert_eq!(meta.effective_rank, r.effective_rank);
    assert_eq!(meta.kind, FluxKind::Left);
    let raw: serde_json::Value = read_json(&json).unwrap();
    for key in ["residual_norm", "effective_rank", "cutoff", "smoothing_rms_m"] {
        assert!(raw.get(key).is_some(), "missing {key}");
    }
}

#[test]
fn scan_csv_has_nine_significant_digits_and_step_profiles() {
    let dir = tempfile::tempdir().unwrap();
    let exp = Experiment::default();
    let pupil = exp.pupil().unwrap();
    let scan = ScanConfig {
        n_steps: 3,
        ..ScanConfig::default()
    };
    let series = run_scan_on_pupil(&pupil, &exp.geometry, &scan, &exp.detector).unwrap();
    let csv = dir.path().join("scan.csv");
    write_scan_csv(&csv, &series).unwrap();
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("step,s_mm,F,left,right"));
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    let mantissa = row[2].split('e').next().unwrap().replace(['.', '-'], "");
    assert!(mantissa.len() >= 9, "{}", row[2]);

    let steps = dir.path().join("profiles");
    write_step_profiles(&steps, &series).unwrap();
    let count = std::fs::read_dir(&steps).unwrap().count();
    assert_eq!(count, 3);
}
