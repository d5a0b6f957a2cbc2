use std::collections::HashSet;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use whichway_core::metrics::{MatchOptions, VisibilityOptions, DEFAULT_MATCH_HALF_WINDOW, DEFAULT_PROMINENCE};
use whichway_core::pipeline::{AnalysisOptions, DEFAULT_GUARD_PX, DEFAULT_SMOOTHING_RMS, DEFAULT_TILT};
use whichway_core::reconstruct::DEFAULT_CUTOFF;
use whichway_core::{DetectorConfig, Experiment, Geometry, GridSpec, PeakSelector, ScanConfig, SolveOptions};

use crate::error::{CliError, CliResult};

/// Everything a run needs. Without a config file every block takes the
/// paper defaults; a config file must at least carry `geometry`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub geometry: Geometry,
    #[serde(default)]
    pub grid: GridSpec,
    #[serde(default = "default_tilt")]
    pub tilt: f64,
    #[serde(default = "default_scans")]
    pub scans: Vec<ScanConfig>,
    #[serde(default)]
    pub detector: DetectorConfig,
    #[serde(default = "default_true")]
    pub auto_exposure: bool,
    #[serde(default)]
    pub reconstruction: ReconstructionKnobs,
    #[serde(default)]
    pub metrics: MetricsKnobs,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    #[serde(default)]
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ReconstructionKnobs {
    pub cutoff: f64,
    pub smoothing_rms_m: f64,
    pub clamp_nonnegative: bool,
    /// Half-width of the central region compared against reference profiles.
    pub window_m: f64,
}

impl Default for ReconstructionKnobs {
    fn default() -> Self {
        ReconstructionKnobs {
            cutoff: DEFAULT_CUTOFF,
            smoothing_rms_m: DEFAULT_SMOOTHING_RMS,
            clamp_nonnegative: false,
            window_m: DEFAULT_MATCH_HALF_WINDOW,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MetricsKnobs {
    pub peak_selector: PeakSelector,
    pub prominence: f64,
    /// Restrict the fringe search to `[lo, hi]` on the pupil axis.
    pub visibility_window_m: Option<(f64, f64)>,
    pub guard_px: usize,
    /// Pupil length per direct-image pixel; derived from the geometry when
    /// absent.
    pub h_scale: Option<f64>,
}

impl Default for MetricsKnobs {
    fn default() -> Self {
        MetricsKnobs {
            peak_selector: PeakSelector::default(),
            prominence: DEFAULT_PROMINENCE,
            visibility_window_m: None,
            guard_px: DEFAULT_GUARD_PX,
            h_scale: None,
        }
    }
}

fn default_tilt() -> f64 {
    DEFAULT_TILT
}

fn default_scans() -> Vec<ScanConfig> {
    Experiment::default().scans
}

fn default_true() -> bool {
    true
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("whichway-out")
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            geometry: Geometry::default(),
            grid: GridSpec::default(),
            tilt: default_tilt(),
            scans: default_scans(),
            detector: DetectorConfig::default(),
            auto_exposure: true,
            reconstruction: ReconstructionKnobs::default(),
            metrics: MetricsKnobs::default(),
            output_dir: default_output_dir(),
            seed: 0,
        }
    }
}

/// Command-line overrides applied on top of the file.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub no_noise: bool,
}

impl RunConfig {
    pub fn load(path: Option<&Path>, overrides: &Overrides) -> CliResult<Self> {
        let mut config = match path {
            None => RunConfig::default(),
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| {
                    CliError::Config(format!("cannot read config {}: {e}", path.display()))
                })?;
                serde_json::from_str(&text)
                    .map_err(|e| CliError::Config(format!("config {}: {e}", path.display())))?
            }
        };
        if let Some(seed) = overrides.seed {
            config.seed = seed;
        }
        if let Some(out) = &overrides.out {
            config.output_dir = out.clone();
        }
        if overrides.no_noise {
            config.detector.noise_enabled = false;
        }
        config.detector.rng_seed = config.seed;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> CliResult<()> {
        self.geometry.validate()?;
        self.detector.validate()?;
        if self.scans.is_empty() {
            return Err(CliError::Config("config needs at least one scan in 'scans'".into()));
        }
        let mut labels = HashSet::new();
        for scan in &self.scans {
            scan.validate()?;
            if !labels.insert(scan_label(scan)) {
                return Err(CliError::Config(format!(
                    "aperture widths in 'scans' must be distinct; {} mm appears twice",
                    scan_label(scan)
                )));
            }
        }
        let r = &self.reconstruction;
        if !(r.cutoff >= 0.0 && r.smoothing_rms_m >= 0.0 && r.window_m > 0.0) {
            return Err(CliError::Config(
                "reconstruction: cutoff and smoothing_rms_m must be >= 0, window_m > 0".into(),
            ));
        }
        if let Some(h) = self.metrics.h_scale {
            if !(h > 0.0) {
                return Err(CliError::Config("metrics.h_scale must be positive".into()));
            }
        }
        Ok(())
    }

    pub fn experiment(&self) -> Experiment {
        Experiment {
            geometry: self.geometry,
            grid: self.grid,
            tilt: self.tilt,
            scans: self.scans.clone(),
            detector: self.detector.clone(),
            auto_exposure: self.auto_exposure,
        }
    }

    pub fn analysis(&self) -> AnalysisOptions {
        AnalysisOptions {
            solve: SolveOptions {
                cutoff: self.reconstruction.cutoff,
                clamp_nonnegative: self.reconstruction.clamp_nonnegative,
            },
            smoothing_rms: self.reconstruction.smoothing_rms_m,
            visibility: VisibilityOptions {
                selector: self.metrics.peak_selector,
                prominence: self.metrics.prominence,
                window: self.metrics.visibility_window_m,
            },
            guard_px: self.metrics.guard_px,
        }
    }

    pub fn match_options(&self) -> MatchOptions {
        MatchOptions {
            half_window: self.reconstruction.window_m,
            max_shift: self.reconstruction.window_m,
        }
    }

    pub fn h_scale(&self) -> f64 {
        self.metrics.h_scale.unwrap_or_else(|| self.experiment().pixel_scale())
    }

    /// SHA-256 of the resolved configuration as compact JSON.
    pub fn digest(&self) -> String {
        let json = serde_json::to_vec(self).expect("config serialises");
        hex::encode(Sha256::digest(&json))
    }
}

/// Width tag used in file names, e.g. `4.0` for a 4 mm stop.
pub fn scan_label(scan: &ScanConfig) -> String {
    format!("{:.1}", scan.aperture_width * 1e3)
}
