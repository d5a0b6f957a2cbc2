//! CSV and JSON formats for profiles, scans and reconstructions.
//!
//! Numbers are written with 11 significant digits.

use std::fs::{self, File};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instrument::{Assignment, ScanConfig, ScanSeries};
use crate::optics::IntensityProfile;
use crate::reconstruct::{ElementGrid, FluxKind, ReconstructionResult, SeriesSystem};

pub const SCAN_HEADER: [&str; 5] = ["step", "s_mm", "F", "left", "right"];
pub const PROFILE_HEADER: [&str; 2] = ["position_m", "value"];
pub const RECONSTRUCTION_HEADER: [&str; 2] = ["position_mm", "P_hat"];

fn num(x: f64) -> String {
    format!("{x:.10e}")
}

fn writer(path: &Path) -> Result<csv::Writer<File>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    Ok(csv::Writer::from_path(path)?)
}

/// Reader that checks the header row against `expected`.
fn reader(path: &Path, expected: &[&str]) -> Result<csv::Reader<File>> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_path(path)?;
    let header = rdr.headers()?.clone();
    if header.iter().ne(expected.iter().copied()) {
        return Err(Error::data(
            Some(1),
            format!(
                "{}: expected header '{}', found '{}'",
                path.display(),
                expected.join(","),
                header.iter().collect::<Vec<_>>().join(",")
            ),
        ));
    }
    Ok(rdr)
}

fn field<T: std::str::FromStr>(record: &csv::StringRecord, idx: usize, name: &str, line: u64) -> Result<T> {
    let raw = record
        .get(idx)
        .ok_or_else(|| Error::data(Some(line), format!("missing column '{name}'")))?;
    raw.parse()
        .map_err(|_| Error::data(Some(line), format!("column '{name}': cannot parse '{raw}'")))
}

fn finite(x: f64, name: &str, line: u64) -> Result<f64> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(Error::data(Some(line), format!("column '{name}' is not finite")))
    }
}

/// Rows of `(position, value)` with a uniform spacing check.
fn read_uniform(path: &Path, header: &[&str], unit: f64) -> Result<(f64, f64, Vec<f64>)> {
    let mut rdr = reader(path, header)?;
    let mut xs = Vec::new();
    let mut values = Vec::new();
    for record in rdr.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line());
        xs.push(finite(field(&record, 0, header[0], line)?, header[0], line)? * unit);
        values.push(finite(field(&record, 1, header[1], line)?, header[1], line)?);
    }
    if xs.len() < 2 {
        return Err(Error::data(None, format!("{}: need at least two rows", path.display())));
    }
    let pitch = (xs[xs.len() - 1] - xs[0]) / (xs.len() - 1) as f64;
    for (i, x) in xs.iter().enumerate() {
        if (x - (xs[0] + i as f64 * pitch)).abs() > 1e-6 * pitch.abs() {
            return Err(Error::data(
                Some(i as u64 + 2),
                format!("{}: positions are not evenly spaced", path.display()),
            ));
        }
    }
    if !(pitch > 0.0) {
        return Err(Error::data(None, format!("{}: positions must increase", path.display())));
    }
    Ok((xs[0], pitch, values))
}

pub fn write_profile_csv(path: &Path, profile: &IntensityProfile) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(PROFILE_HEADER)?;
    for (x, v) in profile.positions().zip(profile.values()) {
        w.write_record([num(x), num(*v)])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_profile_csv(path: &Path) -> Result<IntensityProfile> {
    let (origin, pitch, values) = read_uniform(path, &PROFILE_HEADER, 1.0)?;
    IntensityProfile::new_signed(origin, pitch, values)
}

pub fn write_scan_csv(path: &Path, series: &ScanSeries) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(SCAN_HEADER)?;
    for r in &series.records {
        w.write_record([
            r.step_index.to_string(),
            num(r.slit_position * 1e3),
            num(r.total_flux),
            num(r.left_signal),
            num(r.right_signal),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Flux columns of a scan CSV.
#[derive(Clone, Debug, PartialEq)]
pub struct FluxTable {
    pub steps: Vec<usize>,
    /// Slit positions in metres.
    pub positions: Vec<f64>,
    pub total: Vec<f64>,
    pub left: Vec<f64>,
    pub right: Vec<f64>,
}

impl FluxTable {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn column(&self, kind: FluxKind) -> &[f64] {
        match kind {
            FluxKind::Total => &self.total,
            FluxKind::Left => &self.left,
            FluxKind::Right => &self.right,
        }
    }

    /// Pair one column with the scan that produced it.
    pub fn system(&self, config: &ScanConfig, kind: FluxKind) -> SeriesSystem {
        SeriesSystem::from_config(config, self.positions.clone(), self.column(kind).to_vec())
    }
}

pub fn read_scan_csv(path: &Path) -> Result<FluxTable> {
    let mut rdr = reader(path, &SCAN_HEADER)?;
    let mut table = FluxTable {
        steps: Vec::new(),
        positions: Vec::new(),
        total: Vec::new(),
        left: Vec::new(),
        right: Vec::new(),
    };
    for record in rdr.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() != SCAN_HEADER.len() {
            return Err(Error::data(
                Some(line),
                format!("expected {} columns, found {}", SCAN_HEADER.len(), record.len()),
            ));
        }
        table.steps.push(field(&record, 0, "step", line)?);
        table.positions.push(finite(field(&record, 1, "s_mm", line)?, "s_mm", line)? * 1e-3);
        table.total.push(finite(field(&record, 2, "F", line)?, "F", line)?);
        table.left.push(finite(field(&record, 3, "left", line)?, "left", line)?);
        table.right.push(finite(field(&record, 4, "right", line)?, "right", line)?);
    }
    if table.is_empty() {
        return Err(Error::data(None, format!("{}: no data rows", path.display())));
    }
    Ok(table)
}

/// One CSV per step, `pixel,electrons`, named `step_NNNN.csv`.
pub fn write_step_profiles(dir: &Path, series: &ScanSeries) -> Result<()> {
    fs::create_dir_all(dir)?;
    for r in &series.records {
        let mut w = writer(&dir.join(format!("step_{:04}.csv", r.step_index)))?;
        w.write_record(["pixel", "electrons"])?;
        for (p, v) in r.detector_profile.values().iter().enumerate() {
            w.write_record([p.to_string(), num(*v)])?;
        }
        w.flush()?;
    }
    Ok(())
}

/// JSON written next to a scan CSV.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanSidecar {
    pub scan: ScanConfig,
    pub width_elems: usize,
    pub assignment: Option<Assignment>,
}

impl ScanSidecar {
    pub fn new(series: &ScanSeries, assignment: Option<Assignment>) -> Self {
        ScanSidecar {
            scan: series.config.clone(),
            width_elems: series.config.width_elems(),
            assignment,
        }
    }
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

/// Malformed JSON is reported as a data error with its line.
pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| {
        Error::data(Some(e.line() as u64), format!("{}: {e}", path.display()))
    })
}

/// JSON written next to a reconstruction CSV.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReconstructionSidecar {
    pub residual_norm: f64,
    pub effective_rank: usize,
    pub n: usize,
    pub rows: usize,
    pub cutoff: f64,
    #[serde(rename = "smoothing_rms_m")]
    pub smoothing_rms: f64,
    pub grid: ElementGrid,
    pub kind: FluxKind,
}

pub fn write_reconstruction(
    csv_path: &Path,
    json_path: &Path,
    result: &ReconstructionResult,
    kind: FluxKind,
) -> Result<()> {
    let mut w = writer(csv_path)?;
    w.write_record(RECONSTRUCTION_HEADER)?;
    for (j, v) in result.p_hat.iter().enumerate() {
        w.write_record([num(result.grid.position(j) * 1e3), num(*v)])?;
    }
    w.flush()?;
    write_json(
        json_path,
        &ReconstructionSidecar {
            residual_norm: result.residual_norm,
            effective_rank: result.effective_rank,
            n: result.len(),
            rows: result.rows,
            cutoff: result.cutoff,
            smoothing_rms: result.smoothing_rms,
            grid: result.grid,
            kind,
        },
    )
}

/// The `position_mm,P_hat` table as a profile on a metre axis.
pub fn read_reconstruction_csv(path: &Path) -> Result<IntensityProfile> {
    let (origin, pitch, values) = read_uniform(path, &RECONSTRUCTION_HEADER, 1e-3)?;
    IntensityProfile::new_signed(origin, pitch, values)
}
