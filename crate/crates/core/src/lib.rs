//! Wave-optics simulation and linear-inverse reconstruction for a scanned
//! which-way double-slit experiment.
//!
//! The pipeline runs in one dimension along the scan direction:
//!
//! 1. [`optics`] builds the double-slit field and propagates it to the pupil.
//! 2. [`instrument`] scans an aperture stop across the pupil pattern, images
//!    the slits onto a pixelated detector and splits the flux into left and
//!    right signals.
//! 3. [`reconstruct`] stacks the flux series of several stop widths and
//!    recovers the pupil illumination by least squares.
//! 4. [`metrics`] turns the reconstruction and the which-way statistics into
//!    visibility, distinguishability and the duality sum.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod aperture;
pub mod error;
pub mod instrument;
pub mod io;
pub mod metrics;
pub mod optics;
pub mod pipeline;
pub mod reconstruct;

pub use aperture::{Band, Opening, REFERENCE_HALF_WIDTH};
pub use error::{Error, Result};
pub use instrument::{Assignment, DetectorConfig, MidlineMode, ScanConfig, ScanSeries};
pub use metrics::{DualityReport, PeakSelector};
pub use optics::{Geometry, GridSpec, IntensityProfile, SampledField};
pub use pipeline::{AnalysisOptions, Experiment};
pub use reconstruct::{ApertureMatrix, FluxKind, ReconstructionResult, SolveOptions};
