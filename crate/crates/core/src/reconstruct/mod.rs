//! Banded aperture matrices and least-squares recovery of the pupil pattern.

mod matrix;
mod rank;
mod series;
mod smooth;
mod solve;

pub use matrix::{build_aperture_matrix, ApertureMatrix};
pub use rank::{full_rank_dims, rank_of, singular_values, RANK_TOLERANCE};
pub use series::{reconstruct_series, series_system, FluxKind, SeriesSystem};
pub use smooth::{clamp_nonnegative, gaussian_kernel, gaussian_smooth};
pub use solve::{
    solve_stacked, ElementGrid, FluxSystem, ReconstructionResult, SolveOptions, DEFAULT_CUTOFF,
};
