use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Physical layout of the source mask, imaging lens and detectors.
///
/// All lengths are in metres. `slit_separation` is centre to centre.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Geometry {
    #[serde(rename = "wavelength_m")]
    pub wavelength: f64,
    #[serde(rename = "slit_width_m")]
    pub slit_width: f64,
    #[serde(rename = "slit_sep_m")]
    pub slit_separation: f64,
    #[serde(rename = "l_slits_lens_m")]
    pub dist_slits_lens: f64,
    #[serde(rename = "l_lens_det_m")]
    pub dist_lens_detector: f64,
    /// Slit-to-camera distance used for the direct fringe image.
    #[serde(rename = "d_direct_m")]
    pub dist_direct: f64,
    #[serde(rename = "focal_m")]
    pub focal_length: f64,
}

impl Default for Geometry {
    fn default() -> Self {
        Geometry {
            wavelength: 650e-9,
            slit_width: 89e-6,
            slit_separation: 248e-6,
            dist_slits_lens: 0.58,
            dist_lens_detector: 0.63,
            dist_direct: 0.25,
            focal_length: 0.300,
        }
    }
}

impl Geometry {
    pub fn validate(&self) -> Result<()> {
        let named = [
            ("wavelength_m", self.wavelength),
            ("slit_width_m", self.slit_width),
            ("slit_sep_m", self.slit_separation),
            ("l_slits_lens_m", self.dist_slits_lens),
            ("l_lens_det_m", self.dist_lens_detector),
            ("d_direct_m", self.dist_direct),
            ("focal_m", self.focal_length),
        ];
        for (key, value) in named {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::config(format!("{key} must be positive, got {value}")));
            }
        }
        if self.slit_separation <= self.slit_width {
            return Err(Error::config(format!(
                "slits overlap: separation {} m <= width {} m",
                self.slit_separation, self.slit_width
            )));
        }
        Ok(())
    }

    /// Dimensionless focus defect `|1/L_S + 1/L_C - 1/f| * f`.
    pub fn lens_defect(&self) -> f64 {
        let f = self.focal_length;
        (1.0 / self.dist_slits_lens + 1.0 / self.dist_lens_detector - 1.0 / f).abs() * f
    }

    /// Lateral magnification of the slit image (magnitude).
    pub fn magnification(&self) -> f64 {
        self.dist_lens_detector / self.dist_slits_lens
    }
}
