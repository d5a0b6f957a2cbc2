use serde::{Deserialize, Serialize};

use super::ApertureStop;
use crate::aperture::{Band, Opening, REFERENCE_HALF_WIDTH};
use crate::error::{Error, Result};

/// How the which-way midline is placed on each detector frame.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MidlineMode {
    /// Fixed at the detector centre.
    DetectorCenter,
    /// Intensity centroid of each frame. Follows the image pair when the
    /// stage ratio does not exactly cancel the slit motion.
    #[default]
    Centroid,
}

/// One aperture-width scan. The slits step from `start` by `step`; the
/// camera moves `stage_ratio` times as far in the opposite direction.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ScanConfig {
    #[serde(rename = "aperture_width_m")]
    pub aperture_width: f64,
    #[serde(rename = "step_m")]
    pub step: f64,
    pub n_steps: usize,
    #[serde(rename = "start_m")]
    pub start: f64,
    pub stage_ratio: f64,
    #[serde(rename = "exposure_s")]
    pub exposure: f64,
    pub frames_per_step: usize,
    #[serde(rename = "aperture_opening")]
    pub opening: Opening,
    /// Distance, in scan steps, from a row's diagonal element to the fixed
    /// stop edge.
    pub reference_half_elems: usize,
    pub midline: MidlineMode,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig {
            aperture_width: 4e-3,
            step: 0.1e-3,
            n_steps: 301,
            start: -15e-3,
            stage_ratio: 1.07,
            exposure: 1.0,
            frames_per_step: 4,
            opening: Opening::Rightward,
            reference_half_elems: REFERENCE_HALF_WIDTH,
            midline: MidlineMode::Centroid,
        }
    }
}

impl ScanConfig {
    pub fn with_width(aperture_width: f64) -> Self {
        ScanConfig {
            aperture_width,
            ..ScanConfig::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("aperture_width_m", self.aperture_width),
            ("step_m", self.step),
            ("stage_ratio", self.stage_ratio),
            ("exposure_s", self.exposure),
        ];
        for (key, value) in positive {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::config(format!("{key} must be positive, got {value}")));
            }
        }
        if !self.start.is_finite() {
            return Err(Error::config("start_m must be finite"));
        }
        if self.n_steps == 0 {
            return Err(Error::config("n_steps must be at least 1"));
        }
        if self.frames_per_step == 0 {
            return Err(Error::config("frames_per_step must be at least 1"));
        }
        if self.width_elems() == 0 {
            return Err(Error::config(format!(
                "aperture {} m is narrower than one scan step",
                self.aperture_width
            )));
        }
        Ok(())
    }

    /// Stop width in scan steps.
    pub fn width_elems(&self) -> usize {
        (self.aperture_width / self.step).round() as usize
    }

    pub fn band(&self) -> Band {
        Band::new(self.width_elems(), self.opening, self.reference_half_elems)
    }

    pub fn slit_position(&self, step_index: usize) -> f64 {
        self.start + step_index as f64 * self.step
    }

    pub fn stop(&self) -> ApertureStop {
        ApertureStop {
            width: self.aperture_width,
            opening: self.opening,
        }
    }

    /// Reference offset of the stop on the lens axis frame.
    ///
    /// Chosen so that, with the slits at `s`, the stop covers exactly the
    /// pattern elements of the matching [`Band`] around the element centred at
    /// `-s`.
    pub fn stop_offset(&self) -> f64 {
        let band = self.band();
        let left = band.left as f64;
        let right = band.right as f64;
        match self.opening {
            Opening::Rightward => -(left - 0.5) * self.step,
            Opening::Leftward => (right + 0.5) * self.step,
            Opening::Centered => 0.5 * (right - left + 1.0) * self.step,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DetectorConfig {
    #[serde(rename = "pixel_pitch_m")]
    pub pixel_pitch: f64,
    pub n_pixels: usize,
    /// Readout noise, electrons rms per pixel and frame.
    #[serde(rename = "readout_noise_e")]
    pub readout_noise: f64,
    /// Photoelectrons per second per unit of simulated intensity.
    pub gain: f64,
    pub noise_enabled: bool,
    pub rng_seed: u64,
    /// Electrons; used to pick exposures.
    pub full_well: f64,
    /// Simulation samples per pixel when integrating the image.
    pub oversample: usize,
}

impl Default for DetectorConfig {
    fn default() -> Self {
        DetectorConfig {
            pixel_pitch: 13e-6,
            n_pixels: 1024,
            readout_noise: 6.0,
            gain: 1e9,
            noise_enabled: true,
            rng_seed: 0,
            full_well: 1e5,
            oversample: 8,
        }
    }
}

impl DetectorConfig {
    pub fn noiseless() -> Self {
        DetectorConfig {
            noise_enabled: false,
            ..DetectorConfig::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.pixel_pitch.is_finite() && self.pixel_pitch > 0.0) {
            return Err(Error::config("pixel_pitch_m must be positive"));
        }
        if self.n_pixels < 64 {
            return Err(Error::config(format!(
                "n_pixels must be at least 64, got {}",
                self.n_pixels
            )));
        }
        if !(self.readout_noise.is_finite() && self.readout_noise >= 0.0) {
            return Err(Error::config("readout_noise_e must be non-negative"));
        }
        if !(self.gain.is_finite() && self.gain > 0.0) {
            return Err(Error::config("gain must be positive"));
        }
        if !(self.full_well.is_finite() && self.full_well > 0.0) {
            return Err(Error::config("full_well must be positive"));
        }
        if self.oversample == 0 {
            return Err(Error::config("oversample must be at least 1"));
        }
        Ok(())
    }

    /// Pixel-coordinate midline of the detector (pixel `p` spans `[p, p+1)`).
    pub fn center_pixel(&self) -> f64 {
        (self.n_pixels / 2) as f64
    }
}
