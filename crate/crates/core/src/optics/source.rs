use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{cell_fraction, Geometry, SampledField};
use crate::error::{Error, Result};

pub const MIN_SAMPLES_PER_SLIT: f64 = 16.0;

/// Uniform grid centred on the optical axis: sample `samples / 2` sits at 0.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GridSpec {
    pub samples: usize,
    #[serde(rename = "span_m")]
    pub span: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            samples: 1 << 16,
            span: 40e-3,
        }
    }
}

impl GridSpec {
    pub fn pitch(&self) -> f64 {
        self.span / self.samples as f64
    }

    pub fn origin(&self) -> f64 {
        -((self.samples / 2) as f64) * self.pitch()
    }
}

/// Plane-wave illuminated double slit.
///
/// Each slit is a unit-amplitude block; the slit at positive x is scaled by
/// `1 + tilt/2` and the other by `1 - tilt/2`. Samples straddling a slit edge
/// carry the covered fraction of their cell.
pub fn double_slit_field(geom: &Geometry, grid: &GridSpec, tilt: f64) -> Result<SampledField> {
    geom.validate()?;
    if grid.samples < 2 || !(grid.span.is_finite() && grid.span > 0.0) {
        return Err(Error::config("grid needs at least 2 samples and a positive span"));
    }
    if !(tilt.is_finite() && tilt.abs() < 2.0) {
        return Err(Error::config(format!(
            "illumination tilt must lie in (-2, 2), got {tilt}"
        )));
    }
    let pitch = grid.pitch();
    let per_slit = geom.slit_width / pitch;
    if per_slit < MIN_SAMPLES_PER_SLIT {
        return Err(Error::config(format!(
            "grid too coarse: {per_slit:.1} samples per slit width, need {MIN_SAMPLES_PER_SLIT}"
        )));
    }
    let origin = grid.origin();
    let outer = 0.5 * (geom.slit_separation + geom.slit_width);
    let last = origin + (grid.samples - 1) as f64 * pitch;
    if -outer - pitch < origin || outer + pitch > last {
        return Err(Error::config(format!(
            "grid [{origin:.3e}, {last:.3e}] m does not cover both slits (outer edge {outer:.3e} m)"
        )));
    }

    let half_width = 0.5 * geom.slit_width;
    let half_sep = 0.5 * geom.slit_separation;
    let slits = [
        (-half_sep, 1.0 - 0.5 * tilt),
        (half_sep, 1.0 + 0.5 * tilt),
    ];
    let amplitudes = (0..grid.samples)
        .map(|i| {
            let x = origin + i as f64 * pitch;
            let value: f64 = slits
                .iter()
                .map(|&(c, scale)| scale * cell_fraction(x, pitch, c - half_width, c + half_width))
                .sum();
            Complex64::new(value, 0.0)
        })
        .collect();
    SampledField::new(origin, pitch, amplitudes)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn slit_powers(field: &SampledField) -> (f64, f64) {
        let mut left = 0.0;
        let mut right = 0.0;
        for (x, a) in field.positions().zip(field.amplitudes()) {
            if x < 0.0 {
                left += a.norm_sqr();
            } else {
                right += a.norm_sqr();
            }
        }
        (left * field.pitch(), right * field.pitch())
    }

    #[test]
    fn paper_slits_are_two_equal_blocks() {
        let geom = Geometry::default();
        let f = double_slit_field(&geom, &GridSpec::default(), 0.0).unwrap();
        let (left, right) = slit_powers(&f);
        assert!((left - right).abs() < 1e-15);
        // integrated amplitude of each block equals the slit width
        let amp_sum: f64 = f.amplitudes().iter().map(|a| a.re).sum::<f64>() * f.pitch();
        assert!((amp_sum - 2.0 * geom.slit_width).abs() < 1e-12);
        assert!(f.amplitudes().iter().all(|a| a.im == 0.0));
        // centre sample between the slits is dark, slit centres are lit
        let c = f.len() / 2;
        assert_eq!(f.amplitudes()[c].re, 0.0);
        let k = (124e-6 / f.pitch()).round() as usize;
        assert_eq!(f.amplitudes()[c + k].re, 1.0);
        assert_eq!(f.amplitudes()[c - k].re, 1.0);
    }

    #[test]
    fn untilted_field_is_even() {
        let f = double_slit_field(&Geometry::default(), &GridSpec::default(), 0.0).unwrap();
        let c = f.len() / 2;
        let a = f.amplitudes();
        for k in 1..c {
            assert_eq!(a[c + k], a[c - k], "k = {k}");
        }
    }

    #[test]
    fn tilt_sets_power_ratio() {
        let f = double_slit_field(&Geometry::default(), &GridSpec::default(), 0.2).unwrap();
        let (left, right) = slit_powers(&f);
        let expected = (1.1f64 / 0.9).powi(2);
        assert!((right / left - expected).abs() < 1e-12, "{}", right / left);
    }

    #[test]
    fn coarse_or_narrow_grids_rejected() {
        let geom = Geometry::default();
        let coarse = GridSpec { samples: 1024, span: 40e-3 };
        assert!(matches!(double_slit_field(&geom, &coarse, 0.0), Err(Error::Config(_))));
        let narrow = GridSpec { samples: 1 << 12, span: 0.3e-3 };
        assert!(matches!(double_slit_field(&geom, &narrow, 0.0), Err(Error::Config(_))));
    }
}
