//! End-to-end runs: source to pupil, scans, inversion and the duality
//! figures.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instrument::{assignment_probability, auto_exposure, run_scan_on_pupil, Assignment};
use crate::instrument::{DetectorConfig, ScanConfig, ScanSeries};
use crate::metrics::{duality_check, visibility_detail, DualityReport, VisibilityEstimate, VisibilityOptions};
use crate::optics::{double_slit_field, propagate_fresnel, Geometry, GridSpec, IntensityProfile, SampledField};
use crate::reconstruct::{
    gaussian_smooth, reconstruct_series, series_system, ElementGrid, FluxKind, ReconstructionResult,
    SeriesSystem, SolveOptions,
};

/// Default smoothing applied to reconstructions.
pub const DEFAULT_SMOOTHING_RMS: f64 = 0.15e-3;
pub const DEFAULT_GUARD_PX: usize = 20;
/// Default slit imbalance: the left slit (`x < 0`) brighter by 1.1 : 0.9 in
/// amplitude. The image inversion puts it on the right of the detector,
/// giving the higher right signal seen in the lab.
pub const DEFAULT_TILT: f64 = -0.2;

/// A simulated experiment: source, pupil scans and detector.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Experiment {
    pub geometry: Geometry,
    pub grid: GridSpec,
    /// Amplitude imbalance: the slit at `x > 0` gets `1 + tilt/2`, the other
    /// `1 - tilt/2`.
    pub tilt: f64,
    pub scans: Vec<ScanConfig>,
    pub detector: DetectorConfig,
    /// Replace each scan's exposure with one that fills 70% of the full well
    /// at `s = 0`.
    pub auto_exposure: bool,
}

impl Default for Experiment {
    fn default() -> Self {
        Experiment {
            geometry: Geometry::default(),
            grid: GridSpec::default(),
            tilt: DEFAULT_TILT,
            scans: vec![ScanConfig::with_width(4e-3), ScanConfig::with_width(5e-3)],
            detector: DetectorConfig::default(),
            auto_exposure: true,
        }
    }
}

impl Experiment {
    pub fn source(&self) -> Result<SampledField> {
        double_slit_field(&self.geometry, &self.grid, self.tilt)
    }

    /// Field at the lens plane for slits on the optical axis.
    pub fn pupil(&self) -> Result<SampledField> {
        propagate_fresnel(&self.source()?, self.geometry.dist_slits_lens, self.geometry.wavelength)
    }

    /// Fringe profile on the detector placed directly at distance `D` behind
    /// the slits, in simulated intensity units per pixel.
    pub fn direct_image(&self) -> Result<IntensityProfile> {
        let field = propagate_fresnel(&self.source()?, self.geometry.dist_direct, self.geometry.wavelength)?;
        let fine = field.intensity();
        let pp = self.detector.pixel_pitch;
        let n = self.detector.n_pixels;
        let origin = (0.5 - (n / 2) as f64) * pp;
        let values = (0..n)
            .map(|p| {
                let x = origin + p as f64 * pp;
                fine.integrate(x - 0.5 * pp, x + 0.5 * pp)
            })
            .collect();
        IntensityProfile::new(origin, pp, values)
    }

    /// Pupil-plane length per direct-image pixel: the pixel pitch scaled by
    /// `L_S / D`.
    pub fn pixel_scale(&self) -> f64 {
        self.detector.pixel_pitch * self.geometry.dist_slits_lens / self.geometry.dist_direct
    }

    /// Scan configurations as run, exposures filled in.
    pub fn resolved_scans(&self, pupil: &SampledField) -> Result<Vec<ScanConfig>> {
        if self.scans.is_empty() {
            return Err(Error::config("at least one scan is required"));
        }
        self.scans
            .iter()
            .map(|scan| {
                let mut scan = scan.clone();
                if self.auto_exposure {
                    scan.exposure = auto_exposure(pupil, &self.geometry, &scan, &self.detector)?;
                }
                scan.validate()?;
                Ok(scan)
            })
            .collect()
    }

    /// Run every scan. Scan `i` draws noise from seed `rng_seed + i`.
    pub fn run(&self, pupil: &SampledField) -> Result<Vec<ScanSeries>> {
        self.resolved_scans(pupil)?
            .iter()
            .enumerate()
            .map(|(i, scan)| {
                let detector = DetectorConfig {
                    rng_seed: self.detector.rng_seed.wrapping_add(i as u64),
                    ..self.detector.clone()
                };
                run_scan_on_pupil(pupil, &self.geometry, scan, &detector)
            })
            .collect()
    }
}

/// Mean intensity of `field` over each of `n` elements of `grid`.
pub fn binned_intensity(field: &SampledField, grid: ElementGrid, n: usize) -> Result<IntensityProfile> {
    let fine = field.intensity();
    let values = (0..n)
        .map(|j| {
            let x = grid.position(j);
            fine.integrate(x - 0.5 * grid.pitch, x + 0.5 * grid.pitch) / grid.pitch
        })
        .collect();
    IntensityProfile::new(grid.origin, grid.pitch, values)
}

/// Knobs for turning scans into a duality report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AnalysisOptions {
    pub solve: SolveOptions,
    #[serde(rename = "smoothing_rms_m")]
    pub smoothing_rms: f64,
    pub visibility: VisibilityOptions,
    pub guard_px: usize,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        AnalysisOptions {
            solve: SolveOptions::default(),
            smoothing_rms: DEFAULT_SMOOTHING_RMS,
            visibility: VisibilityOptions::default(),
            guard_px: DEFAULT_GUARD_PX,
        }
    }
}

/// Smoothed reconstruction of one flux kind from stacked series.
pub fn reconstruct_smoothed(
    systems: &[SeriesSystem],
    options: &AnalysisOptions,
) -> Result<ReconstructionResult> {
    let raw = reconstruct_series(systems, &options.solve)?;
    gaussian_smooth(&raw, options.smoothing_rms)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Analysis {
    pub total: ReconstructionResult,
    pub left: ReconstructionResult,
    pub right: ReconstructionResult,
    pub visibility: VisibilityEstimate,
    /// Per scan, in input order.
    pub assignments: Vec<Assignment>,
    pub report: DualityReport,
}

/// Reconstruct the total, left and right signals and evaluate the duality
/// sum. D is the weakest of the scans' bounds.
pub fn analyze(series: &[ScanSeries], options: &AnalysisOptions) -> Result<Analysis> {
    let systems = |kind| series.iter().map(|s| series_system(s, kind)).collect::<Vec<_>>();
    let total = reconstruct_smoothed(&systems(FluxKind::Total), options)?;
    let left = reconstruct_smoothed(&systems(FluxKind::Left), options)?;
    let right = reconstruct_smoothed(&systems(FluxKind::Right), options)?;
    let assignments = series
        .iter()
        .map(|s| assignment_probability(s, options.guard_px))
        .collect::<Result<Vec<_>>>()?;
    let visibility = visibility_detail(&total.profile()?, &options.visibility)?;
    let report = duality_report(&visibility, &assignments)?;
    Ok(Analysis {
        total,
        left,
        right,
        visibility,
        assignments,
        report,
    })
}

/// Duality figures from a visibility estimate and per-scan assignment
/// bounds; the smallest D is used.
pub fn duality_report(visibility: &VisibilityEstimate, assignments: &[Assignment]) -> Result<DualityReport> {
    let worst = assignments
        .iter()
        .min_by(|a, b| a.distinguishability.total_cmp(&b.distinguishability))
        .ok_or_else(|| Error::config("no scans to take D from"))?;
    let d_method = format!(
        "contamination bound, guard {} px, contamination {:.4}, p {:.4}; minimum over {} scan(s)",
        worst.guard_px,
        worst.contamination,
        worst.p,
        assignments.len()
    );
    Ok(duality_check(visibility.visibility, worst.distinguishability.max(0.0))?
        .with_methods(visibility.method(), d_method))
}
