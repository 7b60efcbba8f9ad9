//! Volume of curved tetrahedra by integrating the length–angle 1-form, plus
//! the flat Cayley–Menger oracle.
//!
//! The differential dV = (λ/2) Σ xₑ daₑ integrates along the scaling path
//! x(t) = t·x from the collapsed tetrahedron:
//!
//! ```text
//!   V = ∫₀¹ (λ/2) Σ xₑ(t) · (daₑ/dt) dt,   da/dt = J(t·x) · x
//! ```
//!
//! As t → 0 the angles approach their flat limits (flat angles are
//! scale-invariant), so da/dt → 0 and the integrand vanishes like t²; the open
//! composite midpoint rule never touches t = 0 and converges at O(n⁻²). The
//! reported error estimate is the Richardson difference |Vₙ − V_{n/2}|/3.
//! Every quadrature point is revalidated: a spherically valid tetrahedron need
//! not stay valid when scaled down, and such inputs error out rather than
//! integrate through garbage.

use nalgebra::{Matrix5, Vector6};
use serde::Serialize;

use crate::error::{Error, Result, ValidityFailure};
use crate::geometry::Geometry;
use crate::jacobian::jacobian_analytic;
use crate::tetra::{curvature_map, Edge, TetraLengths, EDGES};

/// Compensated (Kahan) accumulator: the summation order is fixed and the
/// compensation makes the result independent of panel count roundoff drift.
struct Kahan {
    sum: f64,
    carry: f64,
}

impl Kahan {
    fn new() -> Kahan {
        Kahan { sum: 0.0, carry: 0.0 }
    }

    fn add(&mut self, v: f64) {
        let y = v - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VolumeResult {
    pub value: f64,
    pub n_steps: usize,
    /// Richardson estimate |Vₙ − V_{n/2}| / 3 of the quadrature error.
    pub error_estimate: f64,
}

/// Integrand of the scaling path at parameter `t`:
/// (λ/2) · t · ⟨x, J(t·x)·x⟩.
fn scaling_integrand(x: &TetraLengths, t: f64) -> Result<f64> {
    let xt = x.scaled(t)?;
    let j = jacobian_analytic(&xt)?;
    let xv = Vector6::from_column_slice(x.values());
    Ok(0.5 * x.geometry().lambda() * t * xv.dot(&(j.matrix() * xv)))
}

/// True when the scaled copy t·x supports a Jacobian evaluation; the
/// flattenable sampler uses this to pre-screen volume inputs.
pub fn scaling_point_usable(x: &TetraLengths, t: f64) -> bool {
    scaling_integrand(x, t).is_ok()
}

fn midpoint_scaling(x: &TetraLengths, n: usize) -> Result<f64> {
    let mut acc = Kahan::new();
    for i in 0..n {
        let t = (i as f64 + 0.5) / n as f64;
        acc.add(scaling_integrand(x, t)?);
    }
    Ok(acc.sum / n as f64)
}

/// Volume by the scaling-path integral with `n_steps` midpoint panels
/// (`n_steps` must be even so the half-resolution pass exists).
pub fn volume_schlaefli(x: &TetraLengths, n_steps: usize) -> Result<VolumeResult> {
    if !x.geometry().is_curved() {
        return Err(Error::needs_curved("volume_schlaefli"));
    }
    assert!(n_steps >= 2 && n_steps.is_multiple_of(2), "n_steps must be even and at least 2");
    let full = midpoint_scaling(x, n_steps)?;
    let half = midpoint_scaling(x, n_steps / 2)?;
    Ok(VolumeResult { value: full, n_steps, error_estimate: (full - half).abs() / 3.0 })
}

fn segment_integrand(from: &[f64; 6], to: &[f64; 6], g: Geometry, t: f64) -> Result<f64> {
    let mut xt = [0.0; 6];
    let mut dir = [0.0; 6];
    for e in 0..6 {
        xt[e] = from[e] + t * (to[e] - from[e]);
        dir[e] = to[e] - from[e];
    }
    let point = TetraLengths::new(g, xt)?;
    let j = jacobian_analytic(&point)?;
    let dv = Vector6::from_column_slice(&dir);
    let xv = Vector6::from_column_slice(&xt);
    Ok(0.5 * g.lambda() * xv.dot(&(j.matrix() * dv)))
}

fn midpoint_segment(from: &[f64; 6], to: &[f64; 6], g: Geometry, n: usize) -> Result<f64> {
    let mut acc = Kahan::new();
    for i in 0..n {
        let t = (i as f64 + 0.5) / n as f64;
        acc.add(segment_integrand(from, to, g, t)?);
    }
    Ok(acc.sum / n as f64)
}

/// Volume integrated along a two-segment path: the scaling path to `waypoint`,
/// then the straight length-space segment from `waypoint` to `x`. The 1-form
/// is closed, so the result must agree with [`volume_schlaefli`] — this is the
/// path-independence cross-check.
pub fn volume_via_waypoint(
    x: &TetraLengths,
    waypoint: &TetraLengths,
    n_steps: usize,
) -> Result<VolumeResult> {
    assert_eq!(x.geometry(), waypoint.geometry(), "paths cannot switch geometry");
    let base = volume_schlaefli(waypoint, n_steps)?;
    let g = x.geometry();
    let full = midpoint_segment(waypoint.values(), x.values(), g, n_steps)?;
    let half = midpoint_segment(waypoint.values(), x.values(), g, n_steps / 2)?;
    Ok(VolumeResult {
        value: base.value + full,
        n_steps,
        error_estimate: base.error_estimate + (full - half).abs() / 3.0,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct GradientCheck {
    pub h: f64,
    pub n_steps: usize,
    /// max over edges of |ΔV − (λ/2) Σ x_f Δa_f| under the forward step h.
    pub max_residual: f64,
    /// `max_residual / h²`: stable under h-refinement when the differential
    /// identity holds (both sides are O(h), their gap O(h²)).
    pub normalized: f64,
}

/// Forward-difference check that the volume's gradient is (λ/2)·x ∘ (∂a/∂x):
/// each edge is stepped by +h, the volume re-integrated, and the increment
/// compared against the Schläfli prediction from the angle increments.
pub fn volume_gradient_check(x: &TetraLengths, h: f64, n_steps: usize) -> Result<GradientCheck> {
    assert!(h > 0.0, "step must be positive");
    let v0 = volume_schlaefli(x, n_steps)?;
    let a0 = curvature_map(x)?;
    let lam = x.geometry().lambda();
    let mut max_residual = 0.0f64;
    for e in EDGES {
        let xp = x.perturbed(e, h)?;
        let vp = volume_schlaefli(&xp, n_steps)?;
        let ap = curvature_map(&xp)?;
        let mut predicted = Kahan::new();
        for f in EDGES {
            predicted.add(x.get(f) * (ap.get(f) - a0.get(f)));
        }
        let residual = ((vp.value - v0.value) - 0.5 * lam * predicted.sum).abs();
        max_residual = max_residual.max(residual);
    }
    Ok(GradientCheck { h, n_steps, max_residual, normalized: max_residual / (h * h) })
}

/// Flat volume from the bordered squared-distance determinant:
/// 288·V² = det of the 5×5 Cayley–Menger matrix.
pub fn euclidean_volume_cm(x: &TetraLengths) -> Result<f64> {
    if x.geometry() != Geometry::Euclidean {
        return Err(Error::WrongGeometry {
            operation: "euclidean_volume_cm",
            requirement: "euclidean geometry",
        });
    }
    let m = Matrix5::from_fn(|r, c| match (r, c) {
        (0, 0) => 0.0,
        (0, _) | (_, 0) => 1.0,
        (i, j) if i == j => 0.0,
        (i, j) => {
            let d = x.get(Edge::new(i as u8, j as u8));
            d * d
        }
    });
    let det = m.determinant();
    if det <= 0.0 {
        return Err(Error::InvalidTetrahedron(ValidityFailure::CayleyMenger { det }));
    }
    Ok((det / 288.0).sqrt())
}
