use rayon::prelude::*;

use super::ApertureMatrix;
use crate::aperture::Opening;
use crate::error::Result;

/// Singular values below `RANK_TOLERANCE * sigma_max` count as zero.
pub const RANK_TOLERANCE: f64 = 1e-10;

pub fn singular_values(matrix: &ApertureMatrix) -> Vec<f64> {
    matrix.to_dense().singular_values().iter().copied().collect()
}

/// Numerical rank from the singular values.
pub fn rank_of(matrix: &ApertureMatrix) -> usize {
    let sv = singular_values(matrix);
    let max = sv.iter().copied().fold(0.0, f64::max);
    sv.iter().filter(|&&s| s > RANK_TOLERANCE * max).count()
}

/// Every dimension `n` in `[width, n_max]` whose aperture matrix is full rank.
pub fn full_rank_dims(width: usize, n_max: usize, opening: Opening) -> Result<Vec<usize>> {
    if width == 0 || n_max < width {
        return Err(crate::Error::config(format!(
            "need 0 < width <= n_max, got width = {width}, n_max = {n_max}"
        )));
    }
    (width..=n_max)
        .into_par_iter()
        .map(|n| {
            let m = super::build_aperture_matrix(n, width, opening)?;
            Ok((rank_of(&m) == n).then_some(n))
        })
        .collect::<Result<Vec<_>>>()
        .map(|dims| dims.into_iter().flatten().collect())
}
