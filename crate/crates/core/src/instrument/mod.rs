//! The imaging arm: aperture stop, thin lens, pixelated detector and the
//! counter-moving stages that drive a scan.

mod config;
mod imaging;
mod scan;
mod signals;
mod stop;

pub use config::{DetectorConfig, MidlineMode, ScanConfig};
pub use imaging::{auto_exposure, image_slits, DEFOCUS_WARN_LIMIT};
pub use scan::{run_scan, run_scan_on_pupil, ScanSeries, ScanStepRecord};
pub use signals::{assignment_probability, split_signals, Assignment};
pub use stop::{apply_aperture, ApertureStop};
