//! Coherent 1-D scalar fields and their propagation between planes.

mod analytic;
mod field;
mod geometry;
mod propagate;
mod source;

pub use analytic::{
    constraint_report, fraunhofer_intensity, fresnel_number, fringe_scale, fringe_scale_at,
    sinc, ConstraintReport, ConstraintVerdict, FAR_FIELD_FRESNEL_LIMIT,
};
pub use field::{cell_fraction, cell_overlap, IntensityProfile, SampledField};
pub use geometry::Geometry;
pub use propagate::{
    propagate_fresnel, propagate_with, single_fft_min_samples, transfer_function_min_samples,
    PropagationMethod,
};
pub use source::{double_slit_field, GridSpec, MIN_SAMPLES_PER_SLIT};
