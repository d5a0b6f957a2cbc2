use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::ApertureMatrix;
use crate::error::{Error, Result};
use crate::optics::IntensityProfile;

pub const DEFAULT_CUTOFF: f64 = 1e-10;

/// One measured flux series and the matrix that produced it.
#[derive(Clone, Debug, PartialEq)]
pub struct FluxSystem {
    pub matrix: ApertureMatrix,
    pub flux: Vec<f64>,
    pub exposure: f64,
}

/// Element `j` of the pattern is centred at `origin + j * pitch`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ElementGrid {
    pub origin: f64,
    pub pitch: f64,
}

impl ElementGrid {
    pub fn position(&self, j: usize) -> f64 {
        self.origin + j as f64 * self.pitch
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveOptions {
    /// Singular values below `cutoff * sigma_max` are discarded.
    pub cutoff: f64,
    pub clamp_nonnegative: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            cutoff: DEFAULT_CUTOFF,
            clamp_nonnegative: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReconstructionResult {
    pub grid: ElementGrid,
    pub p_hat: Vec<f64>,
    pub residual_norm: f64,
    pub effective_rank: usize,
    /// Total stacked rows.
    pub rows: usize,
    pub cutoff: f64,
    pub smoothing_rms: f64,
}

impl ReconstructionResult {
    pub fn len(&self) -> usize {
        self.p_hat.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p_hat.is_empty()
    }

    pub fn positions(&self) -> Vec<f64> {
        (0..self.len()).map(|j| self.grid.position(j)).collect()
    }

    pub fn is_rank_deficient(&self) -> bool {
        self.effective_rank < self.len()
    }

    /// The estimate as a profile; values may be negative.
    pub fn profile(&self) -> Result<IntensityProfile> {
        IntensityProfile::new_signed(self.grid.origin, self.grid.pitch, self.p_hat.clone())
    }
}

/// Minimum-norm least-squares solution of the stacked systems, with each
/// flux series divided by its exposure first.
pub fn solve_stacked(
    systems: &[FluxSystem],
    grid: ElementGrid,
    options: &SolveOptions,
) -> Result<ReconstructionResult> {
    let Some(first) = systems.first() else {
        return Err(Error::config("no flux series to reconstruct from"));
    };
    let n = first.matrix.dim();
    for (k, sys) in systems.iter().enumerate() {
        if sys.matrix.dim() != n {
            return Err(Error::config(format!(
                "series {k}: matrix dimension {} differs from {n}",
                sys.matrix.dim()
            )));
        }
        if sys.flux.len() != sys.matrix.dim() {
            return Err(Error::config(format!(
                "series {k}: {} flux values for a {}-row matrix",
                sys.flux.len(),
                sys.matrix.dim()
            )));
        }
        if !(sys.exposure.is_finite() && sys.exposure > 0.0) {
            return Err(Error::config(format!("series {k}: exposure must be positive")));
        }
        if sys.flux.iter().any(|f| !f.is_finite()) {
            return Err(Error::Degenerate(format!("series {k}: non-finite flux")));
        }
    }
    if systems.iter().all(|s| s.flux.iter().all(|&f| f == 0.0)) {
        return Err(Error::Degenerate("all fluxes are zero".into()));
    }
    if !(options.cutoff.is_finite() && options.cutoff >= 0.0) {
        return Err(Error::config("cutoff must be non-negative"));
    }

    let rows = n * systems.len();
    let mut a = DMatrix::<f64>::zeros(rows, n);
    let mut b = DVector::<f64>::zeros(rows);
    for (k, sys) in systems.iter().enumerate() {
        for i in 0..n {
            let r = k * n + i;
            if let Some((lo, hi)) = sys.matrix.row_columns(i) {
                for j in lo..=hi {
                    a[(r, j)] = 1.0;
                }
            }
            b[r] = sys.flux[i] / sys.exposure;
        }
    }

    let svd = a.clone().svd(true, true);
    let (Some(u), Some(v_t)) = (svd.u.as_ref(), svd.v_t.as_ref()) else {
        return Err(Error::Degenerate("singular value decomposition failed".into()));
    };
    let sigma = &svd.singular_values;
    let sigma_max = sigma.iter().copied().fold(0.0, f64::max);
    let threshold = options.cutoff * sigma_max;

    let ut_b = u.transpose() * &b;
    let mut coeffs = DVector::<f64>::zeros(sigma.len());
    let mut effective_rank = 0;
    for (k, &s) in sigma.iter().enumerate() {
        if s > threshold {
            coeffs[k] = ut_b[k] / s;
            effective_rank += 1;
        }
    }
    let x = v_t.transpose() * coeffs;
    let residual_norm = (&a * &x - &b).norm();

    let mut p_hat: Vec<f64> = x.iter().copied().collect();
    if options.clamp_nonnegative {
        super::clamp_nonnegative(&mut p_hat);
    }
    if effective_rank < n {
        log::warn!("rank-deficient system: effective rank {effective_rank} < {n}; returning the minimum-norm solution");
    }

    Ok(ReconstructionResult {
        grid,
        p_hat,
        residual_norm,
        effective_rank,
        rows,
        cutoff: options.cutoff,
        smoothing_rms: 0.0,
    })
}
