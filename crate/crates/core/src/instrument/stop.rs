use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::aperture::Opening;
use crate::optics::{cell_fraction, SampledField};

/// Adjustable slit in the pupil plane.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ApertureStop {
    pub width: f64,
    pub opening: Opening,
}

impl ApertureStop {
    /// Interval `[lo, hi)` covered when the stop's reference point is at
    /// `offset`: the fixed left edge for rightward stops, the fixed right edge
    /// for leftward stops, the midpoint for centred ones.
    pub fn interval(&self, offset: f64) -> (f64, f64) {
        match self.opening {
            Opening::Rightward => (offset, offset + self.width),
            Opening::Leftward => (offset - self.width, offset),
            Opening::Centered => (offset - 0.5 * self.width, offset + 0.5 * self.width),
        }
    }
}

/// Multiply the field by the stop's transmission. Samples cut by an edge are
/// weighted by the covered fraction of their cell; a stop that misses the
/// grid yields an all-zero field.
pub fn apply_aperture(field: &SampledField, offset: f64, stop: &ApertureStop) -> SampledField {
    let (lo, hi) = stop.interval(offset);
    let pitch = field.pitch();
    let amplitudes = field
        .amplitudes()
        .iter()
        .enumerate()
        .map(|(i, a)| {
            let x = field.position(i);
            let weight = cell_fraction(x, pitch, lo, hi);
            if weight == 0.0 {
                Complex64::new(0.0, 0.0)
            } else {
                a * weight
            }
        })
        .collect();
    SampledField::from_parts(field.origin(), pitch, amplitudes)
}
