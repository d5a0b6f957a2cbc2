use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;
use whichway_core::io::{
    read_json, read_profile_csv, read_reconstruction_csv, read_scan_csv, write_json, write_profile_csv,
    write_reconstruction, write_scan_csv, write_step_profiles, FluxTable, ScanSidecar,
};
use whichway_core::metrics::{match_profiles_with, visibility_detail, ProfileMatch, VisibilityEstimate};
use whichway_core::optics::{constraint_report, fresnel_number, fringe_scale, fringe_scale_at, ConstraintReport};
use whichway_core::pipeline::{binned_intensity, duality_report, reconstruct_smoothed};
use whichway_core::reconstruct::{full_rank_dims, ElementGrid};
use whichway_core::instrument::assignment_probability;
use whichway_core::{
    Assignment, DualityReport, FluxKind, IntensityProfile, Opening, ScanConfig,
};

use crate::config::{scan_label, RunConfig};
use crate::error::{CliError, CliResult};
use crate::manifest::Manifest;
use crate::plots;

const KINDS: [FluxKind; 3] = [FluxKind::Total, FluxKind::Left, FluxKind::Right];

fn recon_paths(dir: &Path, kind: FluxKind) -> (PathBuf, PathBuf) {
    (dir.join(format!("recon_{kind}.csv")), dir.join(format!("recon_{kind}.json")))
}

#[derive(Serialize)]
struct FringeSummary {
    /// `lambda L_S / d`
    fringe_scale_m: f64,
    /// Fringe period on the direct-image camera, `lambda D / d`.
    direct_period_m: f64,
    fresnel_number_lens: f64,
    fresnel_number_direct: f64,
    /// Pupil-plane length per direct-image pixel.
    pixel_scale_m: f64,
    constraints: Vec<ConstraintReport>,
}

pub fn fringes(config: &RunConfig) -> CliResult<()> {
    let dir = &config.output_dir;
    let mut manifest = Manifest::new("fringes", config);
    let experiment = config.experiment();
    let image = experiment.direct_image()?;
    manifest.lap("propagate");

    let g = &config.geometry;
    let summary = FringeSummary {
        fringe_scale_m: fringe_scale(g),
        direct_period_m: fringe_scale_at(g, g.dist_direct),
        fresnel_number_lens: fresnel_number(g, g.dist_slits_lens),
        fresnel_number_direct: fresnel_number(g, g.dist_direct),
        pixel_scale_m: config.h_scale(),
        constraints: config
            .scans
            .iter()
            .map(|s| constraint_report(g, s.aperture_width))
            .collect(),
    };
    for c in &summary.constraints {
        log::info!(
            "aperture {:.1} mm: a/W = {:.2} ({})",
            c.aperture_width * 1e3,
            c.fringe_ratio,
            c.verdict
        );
    }
    let csv = dir.join("fringes.csv");
    let json = dir.join("fringes.json");
    write_profile_csv(&csv, &image)?;
    write_json(&json, &summary)?;
    plots::fringes(dir)?;
    manifest.output(csv);
    manifest.output(json);
    manifest.output(dir.join("fringes.gp"));
    manifest.lap("write");
    manifest.write(dir)?;
    Ok(())
}

pub fn scan(config: &RunConfig, profiles: bool) -> CliResult<()> {
    let dir = &config.output_dir;
    let mut manifest = Manifest::new("scan", config);
    let experiment = config.experiment();
    let pupil = experiment.pupil()?;
    manifest.lap("pupil");
    let series = experiment.run(&pupil)?;
    manifest.lap("scan");

    let mut labels = Vec::new();
    for s in &series {
        let label = scan_label(&s.config);
        let assignment = match assignment_probability(s, config.metrics.guard_px) {
            Ok(a) => Some(a),
            Err(e) => {
                log::warn!("scan {label} mm: no assignment statistics ({e})");
                None
            }
        };
        let csv = dir.join(format!("scan_a{label}mm.csv"));
        let json = dir.join(format!("scan_a{label}mm.json"));
        write_scan_csv(&csv, s)?;
        write_json(&json, &ScanSidecar::new(s, assignment))?;
        if profiles {
            write_step_profiles(&dir.join(format!("profiles_a{label}mm")), s)?;
        }
        manifest.output(csv);
        manifest.output(json);
        labels.push(label);
    }

    // Noise-free pupil intensity on the element grid of the first scan.
    let first = &series[0].config;
    let n = first.n_steps;
    let grid = ElementGrid {
        origin: -first.slit_position(n - 1),
        pitch: first.step,
    };
    if n > 1 {
        let truth = dir.join("pupil_truth.csv");
        write_profile_csv(&truth, &binned_intensity(&pupil, grid, n)?)?;
        manifest.output(truth);
    }
    plots::scans(dir, &labels)?;
    manifest.output(dir.join("scans.gp"));
    manifest.lap("write");
    manifest.write(dir)?;
    Ok(())
}

/// Scan CSVs in `dir`, sorted by name.
fn scan_csvs(dir: &Path) -> CliResult<Vec<PathBuf>> {
    let entries = std::fs::read_dir(dir)
        .map_err(|e| CliError::Data(format!("cannot list {}: {e}", dir.display())))?;
    let mut found: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| {
            let name = p.file_name().and_then(|n| n.to_str()).unwrap_or("");
            name.starts_with("scan_a") && name.ends_with("mm.csv")
        })
        .collect();
    found.sort();
    Ok(found)
}

fn sidecar_path(csv: &Path) -> PathBuf {
    csv.with_extension("json")
}

/// Scan settings for a CSV without a sidecar: steps and start from the
/// table, the rest from the config defaults.
fn scan_from_table(table: &FluxTable, width: f64, exposure: f64) -> CliResult<ScanConfig> {
    let n = table.len();
    let step = if n > 1 {
        (table.positions[n - 1] - table.positions[0]) / (n - 1) as f64
    } else {
        ScanConfig::default().step
    };
    let scan = ScanConfig {
        aperture_width: width,
        step,
        n_steps: n,
        start: table.positions[0],
        exposure,
        ..ScanConfig::default()
    };
    scan.validate()?;
    Ok(scan)
}

pub struct ReconstructArgs {
    pub inputs: Vec<PathBuf>,
    pub width_mm: Option<f64>,
    pub exposure_s: Option<f64>,
}

pub fn reconstruct(config: &RunConfig, args: &ReconstructArgs) -> CliResult<()> {
    let dir = &config.output_dir;
    let mut manifest = Manifest::new("reconstruct", config);
    let inputs = if args.inputs.is_empty() {
        scan_csvs(dir)?
    } else {
        args.inputs.clone()
    };
    if inputs.is_empty() {
        return Err(CliError::Data(format!(
            "no scan CSVs given and none found in {}",
            dir.display()
        )));
    }

    let mut scans = Vec::new();
    for csv in &inputs {
        let table = read_scan_csv(csv)?;
        let sidecar = sidecar_path(csv);
        let scan = if sidecar.exists() {
            let side: ScanSidecar = read_json(&sidecar)?;
            if side.scan.n_steps != table.len() {
                return Err(CliError::Data(format!(
                    "{}: {} rows but the sidecar describes {} steps",
                    csv.display(),
                    table.len(),
                    side.scan.n_steps
                )));
            }
            side.scan
        } else if let Some(width) = args.width_mm {
            scan_from_table(&table, width * 1e-3, args.exposure_s.unwrap_or(1.0))?
        } else {
            return Err(CliError::Config(format!(
                "unknown aperture width for {}: no sidecar {}; pass --width-mm",
                csv.display(),
                sidecar.display()
            )));
        };
        scans.push((scan, table));
    }
    if scans.len() == 1 {
        log::warn!(
            "reconstructing from a single aperture width ({} mm); the system is rank deficient",
            scan_label(&scans[0].0)
        );
    }
    manifest.lap("read");

    let options = config.analysis();
    for kind in KINDS {
        let systems: Vec<_> = scans.iter().map(|(scan, table)| table.system(scan, kind)).collect();
        let result = reconstruct_smoothed(&systems, &options)?;
        log::info!(
            "{kind}: rank {} of {}, residual {:.3e}",
            result.effective_rank,
            result.len(),
            result.residual_norm
        );
        let (csv, json) = recon_paths(dir, kind);
        write_reconstruction(&csv, &json, &result, kind)?;
        manifest.output(csv);
        manifest.output(json);
    }
    manifest.lap("solve");
    plots::reconstructions(dir)?;
    manifest.output(dir.join("recon.gp"));
    manifest.write(dir)?;
    Ok(())
}

#[derive(Serialize)]
struct Report {
    duality: DualityReport,
    visibility: VisibilityEstimate,
    assignments: Vec<ScanAssignment>,
    /// Reconstruction against the direct fringe image, when present.
    fringe_match: Option<ProfileMatch>,
    h_scale_m: f64,
    /// Reconstruction against the simulated pupil intensity, when present.
    truth_match: Option<ProfileMatch>,
    /// Right reconstruction against the left one.
    left_right_match: ProfileMatch,
}

#[derive(Serialize)]
struct ScanAssignment {
    aperture_width_m: f64,
    #[serde(flatten)]
    assignment: Assignment,
}

fn optional_profile(path: &Path) -> CliResult<Option<IntensityProfile>> {
    if path.exists() {
        Ok(Some(read_profile_csv(path)?))
    } else {
        log::info!("{} not found; skipping that comparison", path.display());
        Ok(None)
    }
}

pub fn report(config: &RunConfig) -> CliResult<()> {
    let dir = &config.output_dir;
    let mut manifest = Manifest::new("report", config);

    let recon: Vec<PathBuf> = KINDS.iter().map(|&k| recon_paths(dir, k).0).collect();
    let sidecars: Vec<PathBuf> = scan_csvs(dir).unwrap_or_default().iter().map(|p| sidecar_path(p)).collect();
    let mut missing: Vec<String> = recon
        .iter()
        .chain(&sidecars)
        .filter(|p| !p.exists())
        .map(|p| p.display().to_string())
        .collect();
    if sidecars.is_empty() {
        missing.push(format!("{}/scan_a*mm.json", dir.display()));
    }
    if !missing.is_empty() {
        return Err(CliError::Data(format!(
            "report needs reconstructions and scan sidecars; missing: {}",
            missing.join(", ")
        )));
    }

    let total = read_reconstruction_csv(&recon[0])?;
    let left = read_reconstruction_csv(&recon[1])?;
    let right = read_reconstruction_csv(&recon[2])?;
    let mut assignments = Vec::new();
    for path in &sidecars {
        let side: ScanSidecar = read_json(path)?;
        let assignment = side.assignment.ok_or_else(|| {
            CliError::Data(format!("{} carries no assignment statistics", path.display()))
        })?;
        assignments.push(ScanAssignment {
            aperture_width_m: side.scan.aperture_width,
            assignment,
        });
    }

    let options = config.analysis();
    let visibility = visibility_detail(&total, &options.visibility)?;
    let plain: Vec<Assignment> = assignments.iter().map(|a| a.assignment).collect();
    let duality = duality_report(&visibility, &plain)?;
    if duality.violated {
        log::warn!(
            "V^2 + D^2 = {:.3} exceeds 1",
            duality.duality
        );
    }

    let matching = config.match_options();
    let h_scale = config.h_scale();
    // fringes.csv is on the camera axis in metres
    let axis_factor = h_scale / config.detector.pixel_pitch;
    let fringe_match = optional_profile(&dir.join("fringes.csv"))?
        .map(|f| match_profiles_with(&total, &f, axis_factor, &matching))
        .transpose()?;
    let truth_match = optional_profile(&dir.join("pupil_truth.csv"))?
        .map(|t| match_profiles_with(&total, &t, 1.0, &matching))
        .transpose()?;
    let left_right_match = match_profiles_with(&right, &left, 1.0, &matching)?;
    manifest.lap("analyse");

    let report = Report {
        duality,
        visibility,
        assignments,
        fringe_match,
        h_scale_m: h_scale,
        truth_match,
        left_right_match,
    };
    let duality_path = dir.join("duality.json");
    let json_path = dir.join("report.json");
    let txt_path = dir.join("report.txt");
    write_json(&duality_path, &report.duality)?;
    write_json(&json_path, &report)?;
    std::fs::write(&txt_path, render(&report)).map_err(whichway_core::Error::from)?;
    print!("{}", render(&report));
    manifest.output(duality_path);
    manifest.output(json_path);
    manifest.output(txt_path);
    manifest.lap("write");
    manifest.write(dir)?;
    Ok(())
}

fn render(r: &Report) -> String {
    let d = &r.duality;
    let mut s = String::new();
    let _ = writeln!(s, "V = {:.4}  ({})", d.visibility, d.v_method);
    let _ = writeln!(s, "D = {:.4}  ({})", d.distinguishability, d.d_method);
    let _ = writeln!(s, "V^2 + D^2 = {:.4}{}", d.duality, if d.violated { "  (exceeds 1)" } else { "" });
    for a in &r.assignments {
        let _ = writeln!(
            s,
            "  {:.1} mm: contamination {:.4}, p {:.4}, D {:.4}",
            a.aperture_width_m * 1e3,
            a.assignment.contamination,
            a.assignment.p,
            a.assignment.distinguishability
        );
    }
    let line = |s: &mut String, name: &str, m: &ProfileMatch| {
        let _ = writeln!(
            s,
            "{name}: rms residual {:.4}, shift {:.4} mm, scale {:.4e} over {} samples",
            m.rms_residual,
            m.shift * 1e3,
            m.v_scale,
            m.samples
        );
    };
    if let Some(m) = &r.fringe_match {
        line(&mut s, &format!("vs direct fringes (h = {:.4} mm/px)", r.h_scale_m * 1e3), m);
    }
    if let Some(m) = &r.truth_match {
        line(&mut s, "vs pupil intensity", m);
    }
    line(&mut s, "right vs left", &r.left_right_match);
    s
}

pub fn rank(width: usize, n_max: usize, opening: Opening) -> CliResult<()> {
    let dims = full_rank_dims(width, n_max, opening)?;
    let listed: Vec<String> = dims.iter().map(|n| n.to_string()).collect();
    println!(
        "width {width}, {opening} opening: full rank for {} of {} sizes in [{width}, {n_max}]",
        dims.len(),
        n_max - width + 1
    );
    println!("{}", listed.join(" "));
    Ok(())
}
