use super::ReconstructionResult;
use crate::error::{Error, Result};

/// Normalised Gaussian taps with standard deviation `sigma` samples,
/// truncated at `±5 sigma`.
pub fn gaussian_kernel(sigma: f64) -> Vec<f64> {
    if sigma <= 0.0 {
        return vec![1.0];
    }
    let radius = (5.0 * sigma).ceil() as i64;
    let taps: Vec<f64> = (-radius..=radius)
        .map(|k| (-0.5 * (k as f64 / sigma).powi(2)).exp())
        .collect();
    let sum: f64 = taps.iter().sum();
    taps.into_iter().map(|t| t / sum).collect()
}

/// Convolve the estimate with a Gaussian of standard deviation `rms`
/// (physical units). Values beyond the ends are treated as zero.
pub fn gaussian_smooth(result: &ReconstructionResult, rms: f64) -> Result<ReconstructionResult> {
    if !(rms.is_finite() && rms >= 0.0) {
        return Err(Error::config(format!("smoothing rms must be non-negative, got {rms}")));
    }
    if rms == 0.0 {
        return Ok(result.clone());
    }
    let kernel = gaussian_kernel(rms / result.grid.pitch);
    let radius = (kernel.len() / 2) as i64;
    let n = result.len() as i64;
    let p_hat = (0..n)
        .map(|i| {
            kernel
                .iter()
                .enumerate()
                .filter_map(|(k, w)| {
                    let j = i + k as i64 - radius;
                    (0..n).contains(&j).then(|| w * result.p_hat[j as usize])
                })
                .sum()
        })
        .collect();
    Ok(ReconstructionResult {
        p_hat,
        smoothing_rms: rms,
        ..result.clone()
    })
}

/// Optional post-process: negative estimates set to zero.
pub fn clamp_nonnegative(values: &mut [f64]) {
    for v in values.iter_mut() {
        if *v < 0.0 {
            *v = 0.0;
        }
    }
}
