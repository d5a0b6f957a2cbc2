use rayon::prelude::*;

use super::{
    apply_aperture, image_slits, split_signals, DetectorConfig, MidlineMode, ScanConfig,
};
use crate::error::{Error, Result};
use crate::optics::{propagate_fresnel, Geometry, IntensityProfile, SampledField};

#[derive(Clone, Debug, PartialEq)]
pub struct ScanStepRecord {
    pub step_index: usize,
    /// Slit stage position `s`.
    pub slit_position: f64,
    /// Detector frame in electrons per pixel.
    pub detector_profile: IntensityProfile,
    /// Pixel coordinate used to split the frame.
    pub midline: f64,
    pub total_flux: f64,
    pub left_signal: f64,
    pub right_signal: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScanSeries {
    pub config: ScanConfig,
    pub records: Vec<ScanStepRecord>,
}

impl ScanSeries {
    pub fn positions(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.slit_position).collect()
    }

    pub fn total_flux(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.total_flux).collect()
    }

    pub fn left_signal(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.left_signal).collect()
    }

    pub fn right_signal(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.right_signal).collect()
    }
}

/// Propagate the source to the pupil and scan it.
pub fn run_scan(
    source_field: &SampledField,
    geom: &Geometry,
    scan: &ScanConfig,
    detector: &DetectorConfig,
) -> Result<ScanSeries> {
    geom.validate()?;
    let pupil = propagate_fresnel(source_field, geom.dist_slits_lens, geom.wavelength)?;
    run_scan_on_pupil(&pupil, geom, scan, detector)
}

/// Scan a pupil field computed for slits on the optical axis.
///
/// Fresnel propagation is shift-invariant, so moving the slits by `s`
/// translates the pupil pattern by `s`; the stop and lens stay on the axis
/// while the camera centre moves to `-stage_ratio * s`. Steps are independent
/// and run in parallel; noise streams are keyed by step index so the result
/// does not depend on scheduling.
pub fn run_scan_on_pupil(
    pupil: &SampledField,
    geom: &Geometry,
    scan: &ScanConfig,
    detector: &DetectorConfig,
) -> Result<ScanSeries> {
    scan.validate()?;
    detector.validate()?;
    let offset = scan.stop_offset();
    let stop = scan.stop();

    let records = (0..scan.n_steps)
        .into_par_iter()
        .map(|k| {
            let s = scan.slit_position(k);
            let masked = apply_aperture(&pupil.translated(s), offset, &stop);
            let ideal = image_slits(&masked, geom, detector, -scan.stage_ratio * s)
                .map_err(|e| Error::at_step(k, e))?;
            let frame = detector
                .read_out(&ideal, scan.exposure, scan.frames_per_step, k as u64)
                .map_err(|e| Error::at_step(k, e))?;
            let midline = match scan.midline {
                MidlineMode::DetectorCenter => detector.center_pixel(),
                MidlineMode::Centroid => centroid(&frame).unwrap_or(detector.center_pixel()),
            };
            let (left, right) = split_signals(&frame, midline).map_err(|e| Error::at_step(k, e))?;
            Ok(ScanStepRecord {
                step_index: k,
                slit_position: s,
                detector_profile: frame,
                midline,
                total_flux: left + right,
                left_signal: left,
                right_signal: right,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(ScanSeries {
        config: scan.clone(),
        records,
    })
}

fn centroid(frame: &IntensityProfile) -> Option<f64> {
    let (weighted, total) = frame
        .values()
        .iter()
        .enumerate()
        .fold((0.0, 0.0), |(w, t), (p, &v)| (w + (p as f64 + 0.5) * v, t + v));
    let m = weighted / total;
    (total > 0.0 && m.is_finite()).then(|| m.clamp(0.0, frame.len() as f64))
}
