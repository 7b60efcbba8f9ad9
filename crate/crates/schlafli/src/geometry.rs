//! Curvature conventions for the three constant-curvature model spaces.
//!
//! Every formula in this crate is written against the λ-graded trigonometric pair
//!
//! ```text
//!   S_λ(t) = sin t, t, sinh t      C_λ(t) = cos t, 1, cosh t      (λ = +1, 0, −1)
//! ```
//!
//! which satisfy λ·S_λ(t)² + C_λ(t)² = 1 and S_λ′ = C_λ, C_λ′ = −λ·S_λ.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// Model space of constant curvature λ ∈ {+1, 0, −1}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Geometry {
    Spherical,
    Euclidean,
    Hyperbolic,
}

impl Geometry {
    /// All three geometries, in the order spherical, euclidean, hyperbolic.
    pub const ALL: [Geometry; 3] = [Geometry::Spherical, Geometry::Euclidean, Geometry::Hyperbolic];

    /// Curvature λ.
    pub fn lambda(self) -> f64 {
        match self {
            Geometry::Spherical => 1.0,
            Geometry::Euclidean => 0.0,
            Geometry::Hyperbolic => -1.0,
        }
    }

    /// True for λ ≠ 0, where lengths carry absolute scale.
    pub fn is_curved(self) -> bool {
        !matches!(self, Geometry::Euclidean)
    }

    /// λ-graded sine: sin t, t, sinh t.
    pub fn s_lambda(self, t: f64) -> f64 {
        match self {
            Geometry::Spherical => t.sin(),
            Geometry::Euclidean => t,
            Geometry::Hyperbolic => t.sinh(),
        }
    }

    /// λ-graded cosine: cos t, 1, cosh t.
    pub fn c_lambda(self, t: f64) -> f64 {
        match self {
            Geometry::Spherical => t.cos(),
            Geometry::Euclidean => 1.0,
            Geometry::Hyperbolic => t.cosh(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Geometry::Spherical => "spherical",
            Geometry::Euclidean => "euclidean",
            Geometry::Hyperbolic => "hyperbolic",
        }
    }
}

impl fmt::Display for Geometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Geometry {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "spherical" => Ok(Geometry::Spherical),
            "euclidean" => Ok(Geometry::Euclidean),
            "hyperbolic" => Ok(Geometry::Hyperbolic),
            other => Err(format!(
                "unknown geometry {other:?} (expected spherical, euclidean, or hyperbolic)"
            )),
        }
    }
}
