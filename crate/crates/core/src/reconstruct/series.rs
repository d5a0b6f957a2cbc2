use serde::{Deserialize, Serialize};

use super::{solve_stacked, ApertureMatrix, ElementGrid, FluxSystem, ReconstructionResult, SolveOptions};
use crate::aperture::Band;
use crate::error::{Error, Result};
use crate::instrument::{ScanConfig, ScanSeries};

/// Which measured signal to invert.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FluxKind {
    #[default]
    Total,
    Left,
    Right,
}

impl std::fmt::Display for FluxKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            FluxKind::Total => "total",
            FluxKind::Left => "left",
            FluxKind::Right => "right",
        })
    }
}

/// One flux series with the scan parameters needed to invert it.
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesSystem {
    /// Slit stage positions, one per step.
    pub positions: Vec<f64>,
    pub flux: Vec<f64>,
    pub exposure: f64,
    pub step: f64,
    pub band: Band,
}

/// Pair a flux column of `series` with its scan parameters.
pub fn series_system(series: &ScanSeries, kind: FluxKind) -> SeriesSystem {
    let flux = match kind {
        FluxKind::Total => series.total_flux(),
        FluxKind::Left => series.left_signal(),
        FluxKind::Right => series.right_signal(),
    };
    SeriesSystem::from_config(&series.config, series.positions(), flux)
}

impl SeriesSystem {
    pub fn from_config(config: &ScanConfig, positions: Vec<f64>, flux: Vec<f64>) -> Self {
        SeriesSystem {
            positions,
            flux,
            exposure: config.exposure,
            step: config.step,
            band: config.band(),
        }
    }

    /// Pupil element centres and fluxes in pupil order. Moving the slits by
    /// `s` puts pupil element `-s` under the stop, so the order is by `-s`.
    fn pupil_ordered(&self) -> (Vec<f64>, Vec<f64>) {
        let mut pairs: Vec<(f64, f64)> = self
            .positions
            .iter()
            .zip(&self.flux)
            .map(|(&s, &f)| (-s, f))
            .collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        pairs.into_iter().unzip()
    }
}

/// Invert one or more flux series that share a scan grid.
pub fn reconstruct_series(systems: &[SeriesSystem], options: &SolveOptions) -> Result<ReconstructionResult> {
    let Some(first) = systems.first() else {
        return Err(Error::config("no flux series to reconstruct from"));
    };
    let mut stacked = Vec::with_capacity(systems.len());
    let mut grid: Option<ElementGrid> = None;
    for (k, sys) in systems.iter().enumerate() {
        if sys.positions.len() != sys.flux.len() {
            return Err(Error::config(format!(
                "series {k}: {} positions but {} flux values",
                sys.positions.len(),
                sys.flux.len()
            )));
        }
        if sys.positions.is_empty() {
            return Err(Error::config(format!("series {k} is empty")));
        }
        if !(sys.step > 0.0) || (sys.step - first.step).abs() > 1e-9 * first.step {
            return Err(Error::config(format!(
                "series {k}: step {} m differs from {} m",
                sys.step, first.step
            )));
        }
        let (centres, flux) = sys.pupil_ordered();
        check_uniform(&centres, sys.step, k)?;
        let this = ElementGrid {
            origin: centres[0],
            pitch: sys.step,
        };
        if let Some(g) = grid {
            if centres.len() != stacked.first().map_or(0, |s: &FluxSystem| s.flux.len())
                || (g.origin - this.origin).abs() > 1e-6 * sys.step
            {
                return Err(Error::config(format!(
                    "series {k} does not cover the same scan positions as series 0"
                )));
            }
        }
        grid.get_or_insert(this);
        stacked.push(FluxSystem {
            matrix: ApertureMatrix::from_band(flux.len(), sys.band)?,
            flux,
            exposure: sys.exposure,
        });
    }
    solve_stacked(&stacked, grid.expect("at least one series"), options)
}

fn check_uniform(centres: &[f64], step: f64, k: usize) -> Result<()> {
    for (i, pair) in centres.windows(2).enumerate() {
        if ((pair[1] - pair[0]) - step).abs() > 1e-6 * step {
            return Err(Error::config(format!(
                "series {k}: positions are not evenly spaced by the scan step near entry {}",
                i + 1
            )));
        }
    }
    Ok(())
}
