//! Thin-lens imaging of the masked pupil onto the detector.
//!
//! The detector field is the Fresnel integral over the (compactly supported)
//! masked pupil after the lens phase `exp(-i pi u^2 / (lambda f))`:
//!
//! ```text
//! U(x) = 1/sqrt(i lambda L_C) * sum_u g(u) exp(i pi (x - u)^2 / (lambda L_C)) du
//! ```
//!
//! Demodulating by the detector centre `c` turns the sum into a single
//! zero-padded FFT whose bins sit at `c + k q` with `q = lambda L_C / (M du)`.
//! Pixel values integrate `|U|^2` over each pixel footprint.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, Poisson};
use rustfft::FftPlanner;

use super::{apply_aperture, DetectorConfig, ScanConfig};
use crate::error::{Error, Result};
use crate::optics::{Geometry, IntensityProfile, SampledField};

/// Lens-equation defect above which images are flagged as defocused.
pub const DEFOCUS_WARN_LIMIT: f64 = 0.05;

/// Noiseless detector intensity (simulated intensity units per pixel) for a
/// masked pupil field given in lens-axis coordinates.
pub fn image_slits(
    masked_pupil: &SampledField,
    geom: &Geometry,
    detector: &DetectorConfig,
    detector_center_offset: f64,
) -> Result<IntensityProfile> {
    detector.validate()?;
    let defect = geom.lens_defect();
    if defect > DEFOCUS_WARN_LIMIT {
        log::warn!("lens equation defect {defect:.3} exceeds {DEFOCUS_WARN_LIMIT}; images are defocused");
    }

    let n_px = detector.n_pixels;
    let pp = detector.pixel_pitch;
    let c = detector_center_offset;
    let origin = c + (0.5 - (n_px / 2) as f64) * pp;

    let du = masked_pupil.pitch();
    let lambda_lc = geom.wavelength * geom.dist_lens_detector;
    let period = lambda_lc / du;
    let width = n_px as f64 * pp;
    if width > period {
        return Err(Error::config(format!(
            "detector spans {width:.3e} m but the pupil sampling only covers {period:.3e} m; \
             refine the pupil grid"
        )));
    }

    let Some((lo, hi)) = masked_pupil.support() else {
        return IntensityProfile::new(origin, pp, vec![0.0; n_px]);
    };
    let support = hi - lo;
    let wanted = (period / (pp / detector.oversample as f64)).ceil() as usize;
    let m = wanted.max(support).next_power_of_two();
    let q = period / m as f64;

    let defocus = PI / geom.wavelength * (1.0 / geom.dist_lens_detector - 1.0 / geom.focal_length);
    let mut buf = vec![Complex64::new(0.0, 0.0); m];
    for (slot, i) in buf.iter_mut().zip(lo..hi) {
        let u = masked_pupil.position(i);
        let phase = defocus * u * u - 2.0 * PI * c * u / lambda_lc;
        *slot = masked_pupil.amplitudes()[i] * Complex64::from_polar(1.0, phase);
    }
    FftPlanner::<f64>::new().plan_fft_forward(m).process(&mut buf);

    // bins reordered to k = -m/2 .. m/2-1, i.e. positions c + k q
    let norm = du * du / lambda_lc;
    let fine_values: Vec<f64> = (0..m)
        .map(|j| buf[(j + m / 2) % m].norm_sqr() * norm)
        .collect();
    let fine = IntensityProfile::new(c - (m / 2) as f64 * q, q, fine_values)?;

    let values = (0..n_px)
        .map(|p| {
            let left = origin + (p as f64 - 0.5) * pp;
            fine.integrate(left, left + pp)
        })
        .collect();
    IntensityProfile::new(origin, pp, values)
}

impl DetectorConfig {
    /// Electrons per pixel averaged over `frames` exposures of `exposure`
    /// seconds. With noise enabled each frame draws Poisson photoelectrons
    /// plus Gaussian readout noise from a stream keyed by
    /// `(rng_seed, stream)`.
    pub fn read_out(
        &self,
        ideal: &IntensityProfile,
        exposure: f64,
        frames: usize,
        stream: u64,
    ) -> Result<IntensityProfile> {
        let scale = self.gain * exposure;
        if !self.noise_enabled {
            return Ok(ideal.scaled(scale));
        }
        let frames = frames.max(1);
        let mut rng = ChaCha8Rng::seed_from_u64(self.rng_seed);
        rng.set_stream(stream);
        let readout = Normal::new(0.0, self.readout_noise)
            .map_err(|e| Error::config(format!("readout noise: {e}")))?;
        let values = ideal
            .values()
            .iter()
            .map(|&v| {
                let mean = v * scale;
                let poisson = (mean > 0.0)
                    .then(|| Poisson::new(mean).ok())
                    .flatten();
                let sum: f64 = (0..frames)
                    .map(|_| {
                        let electrons = poisson.as_ref().map_or(0.0, |p| p.sample(&mut rng));
                        electrons + readout.sample(&mut rng)
                    })
                    .sum();
                sum / frames as f64
            })
            .collect();
        IntensityProfile::new_signed(ideal.origin(), ideal.pitch(), values)
    }
}

/// Exposure that puts the brightest pixel of the central (`s = 0`) frame at
/// 70% of the detector's full well.
pub fn auto_exposure(
    pupil: &SampledField,
    geom: &Geometry,
    scan: &ScanConfig,
    detector: &DetectorConfig,
) -> Result<f64> {
    let masked = apply_aperture(pupil, scan.stop_offset(), &scan.stop());
    let image = image_slits(&masked, geom, detector, 0.0)?;
    let peak = image.max();
    if !(peak > 0.0) {
        return Err(Error::Degenerate("no light reaches the detector at s = 0".into()));
    }
    Ok(0.7 * detector.full_well / (peak * detector.gain))
}
