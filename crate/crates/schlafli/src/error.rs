//! Error taxonomy: geometric invalidity (rejected inputs), numerical
//! near-degeneracy (valid inputs whose derived quantities lose all precision),
//! and operations applied to the wrong geometry.

use crate::tetra::Edge;

/// Why a triple of lengths fails to be a triangle, or a solved triangle is unusable.
/// Indices are 1-based and refer to the side (`l`) or opposite angle (`a`) slot.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TriangleViolation {
    #[error("side l{index} = {value} is not positive")]
    NonpositiveLength { index: usize, value: f64 },
    #[error("spherical side l{index} = {value} is not below π")]
    LengthBound { index: usize, value: f64 },
    #[error("spherical perimeter {perimeter} is not below 2π")]
    Perimeter { perimeter: f64 },
    #[error("triangle inequality fails: l{index} = {long} is not below {sum}, the sum of the other sides")]
    TriangleInequality { index: usize, long: f64, sum: f64 },
    #[error("cosine-law ratio {ratio} for angle a{index} lies outside [-1, 1]")]
    CosineRange { index: usize, ratio: f64 },
    #[error("an angle ({value:.6}) is within 1e-9 of {{0, π}}")]
    DegenerateAngle { value: f64 },
}

/// First condition a tetrahedron's six edge lengths violate.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ValidityFailure {
    #[error("edge {edge} has nonpositive length {value}")]
    NonpositiveLength { edge: Edge, value: f64 },
    #[error("spherical edge {edge} has length {value}, not below π")]
    LengthBound { edge: Edge, value: f64 },
    #[error("face {{{v0},{v1},{v2}}}: {violation}")]
    Face { v0: u8, v1: u8, v2: u8, violation: TriangleViolation },
    #[error("vertex link at v{vertex}: {violation}")]
    Link { vertex: u8, violation: TriangleViolation },
    #[error("squared-distance determinant {det} is not positive (flat or unrealizable)")]
    CayleyMenger { det: f64 },
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid triangle: {0}")]
    InvalidTriangle(TriangleViolation),
    #[error("invalid vertex link at v{vertex}: {violation}")]
    InvalidLink { vertex: u8, violation: TriangleViolation },
    #[error("invalid tetrahedron: {0}")]
    InvalidTetrahedron(ValidityFailure),
    #[error("near-degenerate configuration: {quantity} = {value:.3e}")]
    NearDegenerate { quantity: &'static str, value: f64 },
    #[error("{operation} requires {requirement}")]
    WrongGeometry { operation: &'static str, requirement: &'static str },
    #[error("Jacobian is numerically singular (condition estimate {condition:.3e})")]
    SingularJacobian { condition: f64 },
}

impl Error {
    /// Operation defined only off the flat slice.
    pub fn needs_curved(operation: &'static str) -> Error {
        Error::WrongGeometry {
            operation,
            requirement: "curved geometry (spherical or hyperbolic)",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
