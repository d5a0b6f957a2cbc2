use nalgebra::DMatrix;

use crate::aperture::{Band, Opening, REFERENCE_HALF_WIDTH};
use crate::error::{Error, Result};

/// Square 0/1 band matrix summing the pattern elements under the stop:
/// `A[i][j] = 1` iff `i - band_left < j <= i + band_right`, clipped to the
/// matrix. Stored implicitly.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ApertureMatrix {
    n: usize,
    band: Band,
}

/// Aperture matrix for a stop `width` elements wide on an `n`-element
/// pattern, with the fixed edge of one-sided stops 20 elements from the
/// diagonal.
pub fn build_aperture_matrix(n: usize, width: usize, opening: Opening) -> Result<ApertureMatrix> {
    ApertureMatrix::with_reference(n, width, opening, REFERENCE_HALF_WIDTH)
}

impl ApertureMatrix {
    pub fn with_reference(n: usize, width: usize, opening: Opening, reference: usize) -> Result<Self> {
        if width == 0 || width > n {
            return Err(Error::config(format!(
                "aperture width must satisfy 0 < w <= n, got w = {width}, n = {n}"
            )));
        }
        Ok(ApertureMatrix {
            n,
            band: Band::new(width, opening, reference),
        })
    }

    pub fn from_band(n: usize, band: Band) -> Result<Self> {
        if n == 0 || band.width() == 0 {
            return Err(Error::config("aperture matrix needs n > 0 and a non-empty band"));
        }
        Ok(ApertureMatrix { n, band })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn band(&self) -> Band {
        self.band
    }

    pub fn band_left(&self) -> usize {
        self.band.left
    }

    pub fn band_right(&self) -> usize {
        self.band.right
    }

    /// Clipped inclusive column range of row `i` (0-based), if non-empty.
    pub fn row_columns(&self, i: usize) -> Option<(usize, usize)> {
        let (lo, hi) = self.band.columns(i);
        let lo = lo.max(0);
        let hi = hi.min(self.n as i64 - 1);
        (lo <= hi).then_some((lo as usize, hi as usize))
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        match self.row_columns(i) {
            Some((lo, hi)) if (lo..=hi).contains(&j) => 1.0,
            _ => 0.0,
        }
    }

    pub fn row_sum(&self, i: usize) -> usize {
        self.row_columns(i).map_or(0, |(lo, hi)| hi - lo + 1)
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.n, self.n, |i, j| self.get(i, j))
    }

    /// `A x` without forming the dense matrix.
    pub fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.n {
            return Err(Error::config(format!(
                "vector of length {} does not match matrix dimension {}",
                x.len(),
                self.n
            )));
        }
        Ok((0..self.n)
            .map(|i| {
                self.row_columns(i)
                    .map_or(0.0, |(lo, hi)| x[lo..=hi].iter().sum::<f64>())
            })
            .collect())
    }
}
