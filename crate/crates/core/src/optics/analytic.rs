//! Closed-form far-field results and dimensionless design ratios.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::Geometry;

/// Fresnel numbers below this are treated as far field.
pub const FAR_FIELD_FRESNEL_LIMIT: f64 = 0.5;

/// `sin(u) / u`, with the removable singularity filled in.
pub fn sinc(u: f64) -> f64 {
    if u.abs() < 1e-8 {
        1.0 - u * u / 6.0
    } else {
        u.sin() / u
    }
}

/// Fresnel number `d^2 / (lambda L)` of the slit pair at distance `L`.
pub fn fresnel_number(geom: &Geometry, distance: f64) -> f64 {
    geom.slit_separation.powi(2) / (geom.wavelength * distance)
}

/// Normalised Fraunhofer double-slit intensity at screen coordinate `x`:
/// `cos^2(pi d x / (lambda L)) * sinc^2(pi delta x / (lambda L))`, equal to
/// 1 on axis.
pub fn fraunhofer_intensity(geom: &Geometry, screen_distance: f64, x: f64) -> f64 {
    let scale = PI * x / (geom.wavelength * screen_distance);
    let fringe = (scale * geom.slit_separation).cos();
    let envelope = sinc(scale * geom.slit_width);
    (fringe * envelope).powi(2)
}

/// Characteristic fringe period at the lens, `lambda L_S / d`.
pub fn fringe_scale(geom: &Geometry) -> f64 {
    fringe_scale_at(geom, geom.dist_slits_lens)
}

pub fn fringe_scale_at(geom: &Geometry, distance: f64) -> f64 {
    geom.wavelength * distance / geom.slit_separation
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConstraintVerdict {
    ResolvesFringes,
    SeparatesSlits,
    ConflictZone,
}

impl fmt::Display for ConstraintVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ConstraintVerdict::ResolvesFringes => "resolves-fringes",
            ConstraintVerdict::SeparatesSlits => "separates-slits",
            ConstraintVerdict::ConflictZone => "conflict zone",
        })
    }
}

/// Where an aperture width sits between resolving the fringes (`a << W`) and
/// separating the slit images (`a >> W`).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstraintReport {
    pub aperture_width: f64,
    pub fringe_scale: f64,
    /// `a / W`
    pub fringe_ratio: f64,
    /// `a d / (lambda L_S)`; algebraically the same number as `fringe_ratio`.
    pub separation_ratio: f64,
    pub verdict: ConstraintVerdict,
}

pub fn constraint_report(geom: &Geometry, aperture_width: f64) -> ConstraintReport {
    let w = fringe_scale(geom);
    let fringe_ratio = aperture_width / w;
    let separation_ratio =
        aperture_width * geom.slit_separation / (geom.wavelength * geom.dist_slits_lens);
    let verdict = if fringe_ratio < 1.0 / 3.0 {
        ConstraintVerdict::ResolvesFringes
    } else if fringe_ratio > 3.0 {
        ConstraintVerdict::SeparatesSlits
    } else {
        ConstraintVerdict::ConflictZone
    };
    ConstraintReport {
        aperture_width,
        fringe_scale: w,
        fringe_ratio,
        separation_ratio,
        verdict,
    }
}
