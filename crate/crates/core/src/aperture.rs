//! Aperture-stop conventions shared by the instrument simulation and the
//! reconstruction matrices.
//!
//! A stop of `w` elements covers, for scan row `i`, the pattern elements `j`
//! with `i - left < j <= i + right` where `left + right == w`. The fixed edge
//! of a one-sided stop keeps one of the two offsets constant across widths.

use serde::{Deserialize, Serialize};
use std::fmt;

/// Reference half-width, in elements, of the fixed stop edge.
pub const REFERENCE_HALF_WIDTH: usize = 20;

/// Direction in which the adjustable stop opens.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Opening {
    /// Fixed left edge; widening extends the stop to the right.
    #[default]
    Rightward,
    /// Fixed right edge; widening extends the stop to the left.
    Leftward,
    /// Both edges move symmetrically.
    Centered,
}

impl fmt::Display for Opening {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Opening::Rightward => "rightward",
            Opening::Leftward => "leftward",
            Opening::Centered => "centered",
        })
    }
}

impl std::str::FromStr for Opening {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "rightward" | "right" => Ok(Opening::Rightward),
            "leftward" | "left" => Ok(Opening::Leftward),
            "centered" | "centred" | "center" => Ok(Opening::Centered),
            other => Err(format!("unknown aperture opening `{other}`")),
        }
    }
}

/// Band offsets of a stop `w` elements wide: row `i` covers `(i - left, i + right]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Band {
    pub left: usize,
    pub right: usize,
}

impl Band {
    /// Band for a stop of `width` elements whose fixed edge sits
    /// `reference` elements from the row's diagonal.
    ///
    /// The reference is clamped so that the diagonal element always lies
    /// inside the band; for the widths of interest (`width >= reference`)
    /// the clamp is inactive.
    pub fn new(width: usize, opening: Opening, reference: usize) -> Self {
        match opening {
            Opening::Rightward => {
                let left = reference.clamp(1, width.max(1));
                Band {
                    left,
                    right: width - left.min(width),
                }
            }
            Opening::Leftward => {
                let right = reference.min(width.saturating_sub(1));
                Band {
                    left: width - right,
                    right,
                }
            }
            Opening::Centered => Band {
                left: width.div_ceil(2),
                right: width / 2,
            },
        }
    }

    pub fn width(&self) -> usize {
        self.left + self.right
    }

    /// Inclusive column range of row `i` before clipping to the matrix.
    pub fn columns(&self, row: usize) -> (i64, i64) {
        let i = row as i64;
        (i - self.left as i64 + 1, i + self.right as i64)
    }
}
