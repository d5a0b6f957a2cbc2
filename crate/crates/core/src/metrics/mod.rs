//! Fringe visibility, slit distinguishability, the duality sum and
//! profile matching.

mod duality;
mod matching;
mod peaks;
mod visibility;

pub use duality::{distinguishability, duality_check, DualityReport};
pub use matching::{match_profiles, match_profiles_with, MatchOptions, ProfileMatch, DEFAULT_MATCH_HALF_WINDOW};
pub use peaks::{find_peaks, find_troughs, Extremum};
pub use visibility::{
    visibility, visibility_detail, PeakSelector, VisibilityEstimate, VisibilityOptions,
    DEFAULT_PROMINENCE,
};
