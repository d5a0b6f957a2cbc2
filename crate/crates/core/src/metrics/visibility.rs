use serde::{Deserialize, Serialize};

use super::peaks::{find_peaks, find_troughs, Extremum};
use crate::error::{Error, Result};
use crate::optics::IntensityProfile;

/// Minimum peak prominence, as a fraction of the global maximum.
pub const DEFAULT_PROMINENCE: f64 = 0.02;

/// Which fringes enter the contrast.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PeakSelector {
    /// The brightest peak against the troughs on either side of it.
    Central,
    /// The two peaks flanking the brightest one, against the troughs that
    /// separate them from it. Lower than `Central` under the single-slit
    /// envelope, hence the conservative choice.
    #[default]
    SecondThird,
}

impl std::fmt::Display for PeakSelector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            PeakSelector::Central => "central",
            PeakSelector::SecondThird => "second_third",
        })
    }
}

impl std::str::FromStr for PeakSelector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "central" => Ok(PeakSelector::Central),
            "second_third" | "second-third" => Ok(PeakSelector::SecondThird),
            other => Err(Error::config(format!(
                "unknown peak selector '{other}' (expected central or second_third)"
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct VisibilityOptions {
    pub selector: PeakSelector,
    /// Fraction of the global maximum.
    pub prominence: f64,
    /// Only samples inside `[lo, hi]` are searched.
    pub window: Option<(f64, f64)>,
}

impl Default for VisibilityOptions {
    fn default() -> Self {
        VisibilityOptions {
            selector: PeakSelector::default(),
            prominence: DEFAULT_PROMINENCE,
            window: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VisibilityEstimate {
    pub visibility: f64,
    pub i_max: f64,
    pub i_min: f64,
    pub peak_positions: Vec<f64>,
    pub trough_positions: Vec<f64>,
    pub selector: PeakSelector,
}

impl VisibilityEstimate {
    /// Short description of the estimator for reports.
    pub fn method(&self) -> String {
        let mm = |xs: &[f64]| {
            xs.iter()
                .map(|x| format!("{:.3}", x * 1e3))
                .collect::<Vec<_>>()
                .join(", ")
        };
        format!(
            "{}: peaks at [{}] mm, troughs at [{}] mm",
            self.selector,
            mm(&self.peak_positions),
            mm(&self.trough_positions)
        )
    }
}

/// Fringe contrast `(I_max - I_min) / (I_max + I_min)` with default options
/// apart from the selector.
pub fn visibility(profile: &IntensityProfile, selector: PeakSelector) -> Result<f64> {
    let options = VisibilityOptions {
        selector,
        ..VisibilityOptions::default()
    };
    visibility_detail(profile, &options).map(|e| e.visibility)
}

pub fn visibility_detail(profile: &IntensityProfile, options: &VisibilityOptions) -> Result<VisibilityEstimate> {
    let (first, values) = windowed(profile, options.window);
    let global = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min_prominence = (options.prominence * global).max(0.0);
    let peaks = find_peaks(values, min_prominence);
    let troughs = find_troughs(values, min_prominence);
    let not_computable = |reason: &str| Error::NotComputable {
        reason: reason.to_string(),
        maxima: peaks.len(),
        minima: troughs.len(),
    };
    if peaks.len() < 2 || troughs.is_empty() {
        return Err(not_computable("need at least two maxima and one minimum"));
    }

    let centre = peaks
        .iter()
        .enumerate()
        .fold(0, |best, (k, p)| if p.value > peaks[best].value { k } else { best });
    let lowest_between = |a: &Extremum, b: &Extremum| -> (usize, f64) {
        (a.index..=b.index)
            .map(|i| (i, values[i]))
            .fold((a.index, f64::INFINITY), |m, (i, v)| if v < m.1 { (i, v) } else { m })
    };

    let (selected, dips): (Vec<&Extremum>, Vec<(usize, f64)>) = match options.selector {
        PeakSelector::Central => {
            let c = &peaks[centre];
            let mut dips = Vec::new();
            if centre > 0 {
                dips.push(lowest_between(&peaks[centre - 1], c));
            }
            if centre + 1 < peaks.len() {
                dips.push(lowest_between(c, &peaks[centre + 1]));
            }
            (vec![c], dips)
        }
        PeakSelector::SecondThird => {
            if centre == 0 || centre + 1 == peaks.len() {
                return Err(not_computable("the brightest peak needs a neighbour on each side"));
            }
            let (l, c, r) = (&peaks[centre - 1], &peaks[centre], &peaks[centre + 1]);
            (vec![l, r], vec![lowest_between(l, c), lowest_between(c, r)])
        }
    };

    let i_max = selected.iter().map(|p| p.value).sum::<f64>() / selected.len() as f64;
    let i_min = dips.iter().map(|d| d.1).sum::<f64>() / dips.len() as f64;
    if !(i_max + i_min > 0.0) {
        return Err(not_computable("fringe intensities sum to zero"));
    }
    let visibility = ((i_max - i_min) / (i_max + i_min)).clamp(0.0, 1.0);
    Ok(VisibilityEstimate {
        visibility,
        i_max,
        i_min,
        peak_positions: selected.iter().map(|p| profile.position(first + p.index)).collect(),
        trough_positions: dips.iter().map(|d| profile.position(first + d.0)).collect(),
        selector: options.selector,
    })
}

fn windowed(profile: &IntensityProfile, window: Option<(f64, f64)>) -> (usize, &[f64]) {
    let values = profile.values();
    let Some((lo, hi)) = window else {
        return (0, values);
    };
    let first = profile.positions().take_while(|&x| x < lo).count();
    let end = profile.positions().take_while(|&x| x <= hi).count().max(first);
    (first, &values[first..end])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fringes(bias: f64, depth: f64) -> IntensityProfile {
        // cos^2 fringes under a broad envelope, period 40 samples
        let values = (0..401)
            .map(|i| {
                let x = (i as f64 - 200.0) / 40.0;
                (bias + depth * (std::f64::consts::PI * x).cos().powi(2)) * (-x * x / 50.0).exp()
            })
            .collect();
        IntensityProfile::new(-2e-3, 1e-5, values).unwrap()
    }

    #[test]
    fn perfect_nulls_give_unit_central_visibility() {
        let v = visibility(&fringes(0.0, 1.0), PeakSelector::Central).unwrap();
        assert!((v - 1.0).abs() < 1e-12);
    }

    #[test]
    fn second_third_uses_flanking_fringes() {
        let est = visibility_detail(&fringes(0.2, 1.0), &VisibilityOptions::default()).unwrap();
        assert_eq!(est.peak_positions.len(), 2);
        assert!((est.peak_positions[0] + 0.4e-3).abs() < 1e-9);
        assert!((est.peak_positions[1] - 0.4e-3).abs() < 1e-9);
        assert!(est.visibility > 0.6 && est.visibility < 1.0);
    }

    #[test]
    fn flat_profile_is_not_computable() {
        let flat = IntensityProfile::new(0.0, 1.0, vec![3.0; 50]).unwrap();
        match visibility(&flat, PeakSelector::Central) {
            Err(Error::NotComputable { maxima, minima, .. }) => {
                assert_eq!((maxima, minima), (0, 0));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn equal_peaks_and_troughs_give_zero() {
        // a tiny ripple on a pedestal: V is near zero, and exactly zero in the limit
        let values: Vec<f64> = (0..200)
            .map(|i| 100.0 + 1e-9 * (i as f64 * 0.3).sin())
            .collect();
        let p = IntensityProfile::new(0.0, 1.0, values).unwrap();
        let opts = VisibilityOptions {
            selector: PeakSelector::Central,
            prominence: 0.0,
            window: None,
        };
        assert!(visibility_detail(&p, &opts).unwrap().visibility < 1e-10);
    }

    #[test]
    fn window_restricts_search() {
        let p = fringes(0.0, 1.0);
        let opts = VisibilityOptions {
            window: Some((0.1e-3, 2e-3)),
            ..VisibilityOptions::default()
        };
        // the brightest fringe inside the window has no left neighbour there
        assert!(visibility_detail(&p, &opts).is_err());
        let opts = VisibilityOptions {
            selector: PeakSelector::Central,
            ..opts
        };
        let est = visibility_detail(&p, &opts).unwrap();
        assert!(est.peak_positions.iter().all(|&x| x > 0.1e-3));
    }
}
