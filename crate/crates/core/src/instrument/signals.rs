use serde::{Deserialize, Serialize};

use super::ScanSeries;
use crate::error::{Error, Result};
use crate::optics::IntensityProfile;

/// Split a frame at `midline` (pixel coordinate; pixel `p` spans `[p, p+1)`).
/// Pixels whose centre lies strictly left of the midline form the left
/// signal, the rest the right signal.
pub fn split_signals(profile: &IntensityProfile, midline: f64) -> Result<(f64, f64)> {
    let n = profile.len() as f64;
    if !(0.0..=n).contains(&midline) {
        return Err(Error::config(format!(
            "midline {midline} outside the profile [0, {n}]"
        )));
    }
    let (mut left, mut right) = (0.0, 0.0);
    for (p, v) in profile.values().iter().enumerate() {
        if p as f64 + 0.5 < midline {
            left += v;
        } else {
            right += v;
        }
    }
    Ok((left, right))
}

/// Which-way statistics of a scan.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Assignment {
    pub guard_px: usize,
    /// Upper bound on the misassigned fraction of the total flux.
    pub contamination: f64,
    /// Lower bound on the probability of correct slit assignment.
    pub p: f64,
    #[serde(rename = "D")]
    pub distinguishability: f64,
}

/// Bound the misassigned flux of a scan.
///
/// Each slit image is taken as symmetric about its centre, which sits about
/// `guard_px / 2` from the midline. Its spill across the midline is then
/// bounded by its flux lying more than `guard_px` beyond the midline on its
/// own side, so the contamination of both signals is bounded by all flux
/// farther than `guard_px` from the midline.
pub fn assignment_probability(series: &ScanSeries, guard_px: usize) -> Result<Assignment> {
    let guard = guard_px as f64;
    let mut wrong = 0.0;
    let mut total = 0.0;
    for record in &series.records {
        let m = record.midline;
        wrong += record
            .detector_profile
            .values()
            .iter()
            .enumerate()
            .filter(|(p, _)| {
                let centre = *p as f64 + 0.5;
                centre < m - guard || centre > m + guard
            })
            .map(|(_, v)| v)
            .sum::<f64>();
        total += record.total_flux;
    }
    if !(total > 0.0) {
        return Err(Error::UndefinedStatistics(format!(
            "scan carries no flux (total {total})"
        )));
    }
    let contamination = wrong / total;
    let p = 1.0 - contamination;
    Ok(Assignment {
        guard_px,
        contamination,
        p,
        distinguishability: crate::metrics::distinguishability(p)?,
    })
}
