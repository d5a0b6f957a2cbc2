use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::optics::IntensityProfile;

/// Half-width of the central region compared by [`match_profiles`].
pub const DEFAULT_MATCH_HALF_WINDOW: f64 = 5e-3;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MatchOptions {
    /// The comparison covers this distance either side of the
    /// reconstruction's maximum.
    pub half_window: f64,
    /// Largest shift tried, either direction.
    pub max_shift: f64,
}

impl Default for MatchOptions {
    fn default() -> Self {
        MatchOptions {
            half_window: DEFAULT_MATCH_HALF_WINDOW,
            max_shift: DEFAULT_MATCH_HALF_WINDOW,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProfileMatch {
    /// Added to the scaled reference coordinates.
    pub shift: f64,
    pub v_scale: f64,
    /// RMS of `reconstructed - v_scale * reference`, divided by the
    /// reconstruction's peak.
    pub rms_residual: f64,
    pub samples: usize,
}

pub fn match_profiles(
    reconstructed: &IntensityProfile,
    reference: &IntensityProfile,
    h_scale: f64,
) -> Result<ProfileMatch> {
    match_profiles_with(reconstructed, reference, h_scale, &MatchOptions::default())
}

/// Fit `reconstructed(x) ~ v_scale * reference((x - shift) / h_scale)`.
///
/// `v_scale` equates the central (highest) peaks; only the shift is
/// searched.
pub fn match_profiles_with(
    reconstructed: &IntensityProfile,
    reference: &IntensityProfile,
    h_scale: f64,
    options: &MatchOptions,
) -> Result<ProfileMatch> {
    if !(options.half_window > 0.0 && options.max_shift >= 0.0) {
        return Err(Error::config("match window must be positive"));
    }
    let scaled = reference.rescaled_axis(h_scale)?;
    let peak = reconstructed.max();
    let ref_peak = scaled.max();
    if !(peak > 0.0 && ref_peak > 0.0) {
        return Err(Error::Degenerate("profiles need a positive peak to match".into()));
    }
    let v_scale = peak / ref_peak;

    let centre = reconstructed.position(reconstructed.argmax());
    let window: Vec<(f64, f64)> = reconstructed
        .positions()
        .zip(reconstructed.values())
        .filter(|(x, _)| (x - centre).abs() <= options.half_window + 1e-12 * options.half_window)
        .map(|(x, &v)| (x, v))
        .collect();
    let needed = window.len().div_ceil(2).max(2);

    let cost = |shift: f64| -> Option<(f64, usize)> {
        let (sum, count) = window
            .iter()
            .filter_map(|&(x, v)| scaled.interpolate(x - shift).map(|r| (v - v_scale * r).powi(2)))
            .fold((0.0, 0usize), |(s, c), e| (s + e, c + 1));
        (count >= needed).then(|| ((sum / count as f64).sqrt(), count))
    };

    // coarse scan at a quarter of the finer pitch, then golden-section
    let step = 0.25 * reconstructed.pitch().min(scaled.pitch());
    let n = (options.max_shift / step).ceil() as i64;
    let mut best: Option<(f64, f64)> = None;
    for k in -n..=n {
        let shift = k as f64 * step;
        if let Some((c, _)) = cost(shift) {
            if best.is_none_or(|(_, b)| c < b) {
                best = Some((shift, c));
            }
        }
    }
    let Some((coarse, _)) = best else {
        return Err(Error::config(
            "profiles do not overlap over the central window after scaling",
        ));
    };
    let f = |s: f64| cost(s).map_or(f64::INFINITY, |c| c.0);
    let shift = golden_section(f, coarse - step, coarse + step, 1e-6 * step);
    let shift = if f(shift) <= f(coarse) { shift } else { coarse };
    let (rms, samples) = cost(shift).expect("shift evaluated above");
    Ok(ProfileMatch {
        shift,
        v_scale,
        rms_residual: rms / peak,
        samples,
    })
}

fn golden_section(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - ratio * (b - a);
    let mut d = a + ratio * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a).abs() > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - ratio * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + ratio * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bump(origin: f64, pitch: f64, centre: f64) -> IntensityProfile {
        let values = (0..401)
            .map(|i| {
                let x = origin + i as f64 * pitch - centre;
                1.0 + (x / 1.52e-3 * std::f64::consts::PI).cos().powi(2) * (-x * x / 2e-5).exp()
            })
            .collect();
        IntensityProfile::new(origin, pitch, values).unwrap()
    }

    #[test]
    fn identical_profiles() {
        let p = bump(-20e-3, 0.1e-3, 0.0);
        let m = match_profiles(&p, &p, 1.0).unwrap();
        assert!(m.shift.abs() < 1e-9);
        assert!((m.v_scale - 1.0).abs() < 1e-15);
        assert!(m.rms_residual < 1e-12);
    }

    #[test]
    fn recovers_shift() {
        let rec = bump(-20e-3, 0.1e-3, 0.0);
        let reference = bump(-20e-3, 0.1e-3, 0.3e-3);
        let m = match_profiles(&rec, &reference, 1.0).unwrap();
        assert!((m.shift + 0.3e-3).abs() < 1e-9, "{}", m.shift);
        assert!(m.rms_residual < 1e-10);
    }

    #[test]
    fn pixel_axis_scaling() {
        // reference on a pixel axis; 30 um per pixel puts it on the pupil axis
        let rec = bump(-20e-3, 0.1e-3, 0.0);
        let h = 30e-6;
        let values: Vec<f64> = (0..1401)
            .map(|i| 5.0 * rec.interpolate((i as f64 - 700.0) * h).unwrap_or(1.0))
            .collect();
        let reference = IntensityProfile::new(-700.0, 1.0, values).unwrap();
        let m = match_profiles(&rec, &reference, h).unwrap();
        assert!((m.v_scale - 0.2).abs() < 1e-3, "{m:?}");
        assert!(m.shift.abs() < 5e-6);
        assert!(m.rms_residual < 1e-2);
    }

    #[test]
    fn disjoint_profiles_rejected() {
        let rec = bump(-20e-3, 0.1e-3, 0.0);
        let far = bump(1.0, 0.1e-3, 1.02);
        assert!(matches!(match_profiles(&rec, &far, 1.0), Err(Error::Config(_))));
    }
}
