use num_complex::Complex64;

use crate::error::{Error, Result};

/// Complex scalar amplitude sampled on a uniform 1-D grid.
///
/// Sample `i` sits at `origin + i * pitch` and represents the cell
/// `[x - pitch/2, x + pitch/2)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledField {
    origin: f64,
    pitch: f64,
    amplitudes: Vec<Complex64>,
}

impl SampledField {
    pub fn new(origin: f64, pitch: f64, amplitudes: Vec<Complex64>) -> Result<Self> {
        check_grid(origin, pitch, amplitudes.len())?;
        if amplitudes.iter().any(|a| !(a.re.is_finite() && a.im.is_finite())) {
            return Err(Error::config("field amplitudes must be finite"));
        }
        Ok(SampledField {
            origin,
            pitch,
            amplitudes,
        })
    }

    /// Grid invariants already hold; used by propagators.
    pub(crate) fn from_parts(origin: f64, pitch: f64, amplitudes: Vec<Complex64>) -> Self {
        debug_assert!(pitch > 0.0 && amplitudes.len() >= 2);
        SampledField {
            origin,
            pitch,
            amplitudes,
        }
    }

    pub fn origin(&self) -> f64 {
        self.origin
    }

    pub fn pitch(&self) -> f64 {
        self.pitch
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    pub fn position(&self, i: usize) -> f64 {
        self.origin + i as f64 * self.pitch
    }

    /// Coordinate of the grid centre sample `len / 2`.
    pub fn center(&self) -> f64 {
        self.position(self.len() / 2)
    }

    pub fn positions(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len()).map(|i| self.position(i))
    }

    /// Total power `sum |a|^2 * pitch`.
    pub fn power(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>() * self.pitch
    }

    pub fn intensity(&self) -> IntensityProfile {
        IntensityProfile {
            origin: self.origin,
            pitch: self.pitch,
            values: self.amplitudes.iter().map(|a| a.norm_sqr()).collect(),
        }
    }

    /// Same samples on a grid moved by `dx`.
    pub fn translated(&self, dx: f64) -> SampledField {
        SampledField {
            origin: self.origin + dx,
            ..self.clone()
        }
    }

    pub fn scaled(&self, factor: Complex64) -> SampledField {
        SampledField {
            amplitudes: self.amplitudes.iter().map(|a| a * factor).collect(),
            ..self.clone()
        }
    }

    /// Pointwise sum with a field on the identical grid.
    pub fn try_add(&self, other: &SampledField) -> Result<SampledField> {
        if !self.same_grid(other) {
            return Err(Error::config("fields are sampled on different grids"));
        }
        Ok(SampledField {
            amplitudes: self
                .amplitudes
                .iter()
                .zip(&other.amplitudes)
                .map(|(a, b)| a + b)
                .collect(),
            ..self.clone()
        })
    }

    pub fn same_grid(&self, other: &SampledField) -> bool {
        self.len() == other.len()
            && (self.pitch - other.pitch).abs() <= 1e-12 * self.pitch
            && (self.origin - other.origin).abs() <= 1e-9 * self.pitch
    }

    /// Index range `[lo, hi)` of samples with nonzero amplitude.
    pub fn support(&self) -> Option<(usize, usize)> {
        let lo = self.amplitudes.iter().position(|a| a.norm_sqr() > 0.0)?;
        let hi = self.amplitudes.iter().rposition(|a| a.norm_sqr() > 0.0)? + 1;
        Some((lo, hi))
    }
}

/// Non-negative per-sample power on a uniform grid.
#[derive(Clone, Debug, PartialEq)]
pub struct IntensityProfile {
    origin: f64,
    pitch: f64,
    values: Vec<f64>,
}

impl IntensityProfile {
    pub fn new(origin: f64, pitch: f64, values: Vec<f64>) -> Result<Self> {
        check_grid(origin, pitch, values.len())?;
        if let Some(bad) = values.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
            return Err(Error::config(format!(
                "intensity values must be finite and non-negative, got {bad}"
            )));
        }
        Ok(IntensityProfile {
            origin,
            pitch,
            values,
        })
    }

    /// Noisy detector readouts may dip below zero; those are kept as-is.
    pub fn new_signed(origin: f64, pitch: f64, values: Vec<f64>) -> Result<Self> {
        check_grid(origin, pitch, values.len())?;
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::config("intensity values must be finite"));
        }
        Ok(IntensityProfile {
            origin,
            pitch,
            values,
        })
    }

    pub fn origin(&self) -> f64 {
        self.origin
    }

    pub fn pitch(&self) -> f64 {
        self.pitch
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn position(&self, i: usize) -> f64 {
        self.origin + i as f64 * self.pitch
    }

    pub fn positions(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len()).map(|i| self.position(i))
    }

    pub fn total(&self) -> f64 {
        self.values.iter().sum()
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn argmax(&self) -> usize {
        self.values
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |best, (i, &v)| {
                if v > best.1 {
                    (i, v)
                } else {
                    best
                }
            })
            .0
    }

    pub fn scaled(&self, factor: f64) -> IntensityProfile {
        IntensityProfile {
            values: self.values.iter().map(|v| v * factor).collect(),
            ..self.clone()
        }
    }

    pub fn with_values(&self, values: Vec<f64>) -> Result<IntensityProfile> {
        if values.len() != self.values.len() {
            return Err(Error::config("replacement values have the wrong length"));
        }
        IntensityProfile::new_signed(self.origin, self.pitch, values)
    }

    /// Same values on a grid whose coordinates are multiplied by `factor`.
    pub fn rescaled_axis(&self, factor: f64) -> Result<IntensityProfile> {
        if !(factor.is_finite() && factor > 0.0) {
            return Err(Error::config(format!("axis scale must be positive, got {factor}")));
        }
        Ok(IntensityProfile {
            origin: self.origin * factor,
            pitch: self.pitch * factor,
            values: self.values.clone(),
        })
    }

    /// Linear interpolation between sample positions; `None` outside the grid.
    pub fn interpolate(&self, x: f64) -> Option<f64> {
        let t = (x - self.origin) / self.pitch;
        let last = (self.len() - 1) as f64;
        if !(-1e-9..=last + 1e-9).contains(&t) {
            return None;
        }
        let t = t.clamp(0.0, last);
        let i = (t.floor() as usize).min(self.len() - 2);
        let frac = t - i as f64;
        Some(self.values[i] * (1.0 - frac) + self.values[i + 1] * frac)
    }

    /// Integral of the piecewise-constant profile over `[lo, hi)`.
    pub fn integrate(&self, lo: f64, hi: f64) -> f64 {
        if hi <= lo {
            return 0.0;
        }
        let half = 0.5 * self.pitch;
        let first = (((lo - self.origin + half) / self.pitch).floor().max(0.0)) as usize;
        let last = (((hi - self.origin + half) / self.pitch).ceil().max(0.0) as usize).min(self.len());
        (first..last)
            .map(|i| {
                let x = self.position(i);
                self.values[i] * cell_overlap(x - half, x + half, lo, hi)
            })
            .sum()
    }
}

/// Fraction of the cell centred at `x` (width `pitch`) that lies inside
/// `[lo, hi)`; exactly 0 or 1 away from the interval edges.
pub fn cell_fraction(x: f64, pitch: f64, lo: f64, hi: f64) -> f64 {
    let (a0, a1) = (x - 0.5 * pitch, x + 0.5 * pitch);
    if a0 >= lo && a1 <= hi {
        1.0
    } else if a1 <= lo || a0 >= hi {
        0.0
    } else {
        (cell_overlap(a0, a1, lo, hi) / pitch).min(1.0)
    }
}

/// Length of the intersection of `[a0, a1)` and `[b0, b1)`.
pub fn cell_overlap(a0: f64, a1: f64, b0: f64, b1: f64) -> f64 {
    (a1.min(b1) - a0.max(b0)).max(0.0)
}

fn check_grid(origin: f64, pitch: f64, len: usize) -> Result<()> {
    if !(pitch.is_finite() && pitch > 0.0) {
        return Err(Error::config(format!("grid pitch must be positive, got {pitch}")));
    }
    if !origin.is_finite() {
        return Err(Error::config("grid origin must be finite"));
    }
    if len < 2 {
        return Err(Error::config(format!("grid needs at least 2 samples, got {len}")));
    }
    Ok(())
}
