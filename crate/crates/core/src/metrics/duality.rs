use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `D = 2 (p - 1/2)` for a correct-assignment probability `p`.
pub fn distinguishability(p: f64) -> Result<f64> {
    if !(0.5..=1.0).contains(&p) {
        return Err(Error::Domain(format!(
            "assignment probability must lie in [0.5, 1], got {p}"
        )));
    }
    Ok(2.0 * (p - 0.5))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DualityReport {
    #[serde(rename = "V")]
    pub visibility: f64,
    #[serde(rename = "D")]
    pub distinguishability: f64,
    /// `V^2 + D^2`.
    pub duality: f64,
    pub violated: bool,
    #[serde(rename = "V_method")]
    pub v_method: String,
    #[serde(rename = "D_method")]
    pub d_method: String,
}

impl DualityReport {
    pub fn with_methods(mut self, v_method: impl Into<String>, d_method: impl Into<String>) -> Self {
        self.v_method = v_method.into();
        self.d_method = d_method.into();
        self
    }
}

pub fn duality_check(v: f64, d: f64) -> Result<DualityReport> {
    for (name, x) in [("V", v), ("D", d)] {
        if !(0.0..=1.0).contains(&x) {
            return Err(Error::Domain(format!("{name} must lie in [0, 1], got {x}")));
        }
    }
    let duality = v * v + d * d;
    Ok(DualityReport {
        visibility: v,
        distinguishability: d,
        duality,
        violated: duality > 1.0,
        v_method: String::new(),
        d_method: String::new(),
    })
}
