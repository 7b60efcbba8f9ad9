//! Geodesic triangle solver for the three constant-curvature planes.
//!
//! With angle aᵢ opposite side lᵢ and {i,j,k} = {1,2,3}, the cosine laws read
//!
//! ```text
//!   λ = +1:  cos lᵢ  = cos lⱼ cos lₖ  + sin lⱼ sin lₖ cos aᵢ
//!   λ =  0:  lᵢ²     = lⱼ² + lₖ² − 2 lⱼ lₖ cos aᵢ
//!   λ = −1:  cosh lᵢ = cosh lⱼ cosh lₖ − sinh lⱼ sinh lₖ cos aᵢ
//! ```
//!
//! The sine law S_λ(lᵢ)/sin aᵢ = const repackages as the index-symmetric
//! A-invariant A = sin(aᵢ)·S_λ(lⱼ)·S_λ(lₖ), and differentiating the cosine law
//! at fixed other sides gives ∂aᵢ/∂lᵢ = S_λ(lᵢ)/A, ∂aᵢ/∂lⱼ = −(∂aᵢ/∂lᵢ)·cos aₖ.

use crate::error::{Error, Result, TriangleViolation};
use crate::geometry::Geometry;
use crate::tolerances;

/// A solved triangle: lengths, their opposite angles, and the geometry they live in.
#[derive(Debug, Clone, PartialEq)]
pub struct TriangleData {
    pub geometry: Geometry,
    pub lengths: [f64; 3],
    pub angles: [f64; 3],
}

/// First violated side condition, or `None` when `l` bounds a genuine triangle.
/// Checks run in a fixed order: positivity, spherical bounds (side < π,
/// perimeter < 2π), then the three strict triangle inequalities.
pub(crate) fn check_lengths(l: &[f64; 3], geometry: Geometry) -> Option<TriangleViolation> {
    for (i, &v) in l.iter().enumerate() {
        if !(v > 0.0) {
            return Some(TriangleViolation::NonpositiveLength { index: i + 1, value: v });
        }
    }
    if geometry == Geometry::Spherical {
        for (i, &v) in l.iter().enumerate() {
            if v >= std::f64::consts::PI {
                return Some(TriangleViolation::LengthBound { index: i + 1, value: v });
            }
        }
        let perimeter = l[0] + l[1] + l[2];
        if perimeter >= 2.0 * std::f64::consts::PI {
            return Some(TriangleViolation::Perimeter { perimeter });
        }
    }
    for i in 0..3 {
        let sum = l[(i + 1) % 3] + l[(i + 2) % 3];
        if l[i] >= sum {
            return Some(TriangleViolation::TriangleInequality { index: i + 1, long: l[i], sum });
        }
    }
    None
}

/// Solve all three angles from the side lengths.
///
/// Cosine-law ratios may overshoot [−1, 1] by at most [`tolerances::COS_CLAMP`]
/// (snapped back); angles within [`tolerances::DEGENERATE_ANGLE`] of {0, π} are
/// refused as near-degenerate since every derivative downstream divides by
/// their sine.
pub fn solve_angles(l1: f64, l2: f64, l3: f64, geometry: Geometry) -> Result<TriangleData> {
    let lengths = [l1, l2, l3];
    if let Some(violation) = check_lengths(&lengths, geometry) {
        return Err(Error::InvalidTriangle(violation));
    }

    let mut angles = [0.0; 3];
    for i in 0..3 {
        let (li, lj, lk) = (lengths[i], lengths[(i + 1) % 3], lengths[(i + 2) % 3]);
        let ratio = match geometry {
            Geometry::Spherical => {
                (li.cos() - lj.cos() * lk.cos()) / (lj.sin() * lk.sin())
            }
            Geometry::Euclidean => (lj * lj + lk * lk - li * li) / (2.0 * lj * lk),
            Geometry::Hyperbolic => {
                (lj.cosh() * lk.cosh() - li.cosh()) / (lj.sinh() * lk.sinh())
            }
        };
        if ratio.abs() > 1.0 + tolerances::COS_CLAMP {
            return Err(Error::InvalidTriangle(TriangleViolation::CosineRange {
                index: i + 1,
                ratio,
            }));
        }
        let angle = ratio.clamp(-1.0, 1.0).acos();
        let guard = tolerances::DEGENERATE_ANGLE..=std::f64::consts::PI - tolerances::DEGENERATE_ANGLE;
        if !guard.contains(&angle) {
            return Err(Error::NearDegenerate { quantity: "triangle angle", value: angle });
        }
        angles[i] = angle;
    }

    Ok(TriangleData { geometry, lengths, angles })
}

/// The A-invariant A = sin(aᵢ)·S_λ(lⱼ)·S_λ(lₖ), independent of which index
/// plays the role of i (that is the sine law).
pub fn a_invariant(t: &TriangleData) -> f64 {
    let g = t.geometry;
    t.angles[0].sin() * g.s_lambda(t.lengths[1]) * g.s_lambda(t.lengths[2])
}

/// Partial derivative ∂aᵢ/∂lⱼ of one angle with respect to one side, the other
/// two sides held fixed. Indices are 0-based.
pub fn dangle_dlength(t: &TriangleData, i: usize, j: usize) -> f64 {
    assert!(i < 3 && j < 3, "side/angle indices run 0..3");
    let diag = t.geometry.s_lambda(t.lengths[i]) / a_invariant(t);
    if i == j {
        diag
    } else {
        let k = 3 - i - j;
        -diag * t.angles[k].cos()
    }
}
