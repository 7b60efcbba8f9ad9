//! Numeric guards and default verification tolerances, gathered in one place so
//! every module and test asserts against the same constants.
//!
//! The guards split into three regimes: clamps that absorb last-ulp roundoff at
//! domain boundaries (~1e-12), degeneracy floors below which derived quantities
//! carry no usable precision (~1e-9 .. 1e-12), and verification tolerances sized
//! from measured residuals of the identity suites with an order of magnitude of
//! headroom.

/// Cosine-law ratios may overshoot ±1 by at most this much before the triangle
/// is rejected outright; overshoots within the clamp are snapped to ±1.
pub const COS_CLAMP: f64 = 1e-12;

/// Angles within this of 0 or π are refused: the configuration is flat to
/// working precision and every derivative formula divides by its sine.
pub const DEGENERATE_ANGLE: f64 = 1e-9;

/// Floor on the A-invariant sin(aᵢ)·S_λ(lⱼ)·S_λ(lₖ) of any face or link
/// triangle entering a derivative assembly.
pub const A_INVARIANT_FLOOR: f64 = 1e-12;

/// Floor on the sines and graded sines used to normalize the Jacobian into the
/// P- and R-matrices.
pub const SIN_FLOOR: f64 = 1e-12;

/// The dihedral angle along an edge is computed from the link of its smaller
/// endpoint and cross-checked against the other endpoint's link to this much.
pub const LINK_CONSISTENCY: f64 = 1e-9;

/// Default residual tolerance for the P-matrix (angle-normalized) identity
/// suite; measured maxima sit near 1e-11 on margin-sampled tetrahedra.
pub const P_IDENTITIES: f64 = 1e-9;

/// Default residual tolerance for the R-matrix (length-normalized inverse)
/// suite; matrix inversion amplifies roundoff by the condition number, so this
/// sits one decade above the P tolerance.
pub const R_IDENTITIES: f64 = 1e-8;

/// Default tolerance on ‖J·J⁻¹ − I‖_max.
pub const INVERSE_IDENTITY: f64 = 1e-8;

/// Default step for central-difference Jacobian checks.
pub const FD_STEP: f64 = 1e-5;

/// Max relative error (entrywise, scaled by the largest entry) between the
/// analytic Jacobian and its central-difference estimate at [`FD_STEP`].
pub const FD_REL: f64 = 1e-6;

/// Budget for the closed-loop Stieltjes integral |∮ Σ xₑ daₑ| at radius 1e-2
/// with 256 trapezoid steps. Symmetry of ∂a/∂x makes the measured value
/// roundoff-small; the budget is the generic cubic quadrature bound.
pub const LOOP_RESIDUAL: f64 = 1e-7;

/// Agreement between the scaling-path volume and a two-segment waypoint path.
pub const PATH_INDEPENDENCE: f64 = 1e-6;

/// Dual-tetrahedron angle agreement: curvature_map(x*) vs π − x ∘ opp.
pub const DUALITY: f64 = 1e-9;

/// Residual of the double-dual returning the original tetrahedron.
pub const INVOLUTION: f64 = 1e-10;

/// Rejection-sampling margin: every face angle of a kept sample is at least
/// this far from 0.
pub const MIN_FACE_ANGLE: f64 = 0.05;

/// Rejection-sampling margin: every dihedral angle of a kept sample keeps this
/// distance from both 0 and π. Tuned empirically: at 0.05 the R-suite residuals
/// reach 7e-8 on 1000-sample sweeps; at 0.2 they stay below 1e-9.
pub const DIHEDRAL_MARGIN: f64 = 0.2;
