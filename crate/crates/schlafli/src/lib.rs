//! Curvature-map analysis for constant-curvature tetrahedra.
//!
//! A tetrahedron in the spherical, Euclidean, or hyperbolic space form is
//! pinned down by its six edge lengths x; the curvature map K sends them to
//! the six dihedral angles a. This crate computes K through vertex links, its
//! analytic Jacobian ∂a/∂x entry by entry, the two normalizations of that
//! Jacobian whose entries satisfy a web of symmetry identities (angle-sine
//! normalized P, and the length-normalized inverse R), and the volume obtained
//! by integrating the 1-form (λ/2) Σ xₑ daₑ along a path of tetrahedra.
//! Everything is verifiable numerically: identity residual suites, seeded
//! sweep sampling, finite-difference cross-checks, closed-loop integrals, and
//! spherical duality round-trips.

// Validation deliberately writes `!(v > 0.0)` so NaN fails the check too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod geometry;
pub mod identities;
pub mod io;
pub mod jacobian;
pub mod sampling;
pub mod sweep;
pub mod tetra;
pub mod tolerances;
pub mod triangle;
pub mod volume;

pub use error::{Error, Result, TriangleViolation, ValidityFailure};
pub use geometry::Geometry;
pub use identities::{
    one_form_loop_residual, verify_p_identities, verify_r_identities, IdentityCheck,
    IdentityReport, Tolerances,
};
pub use io::{read_tetra, to_json, InputError, TetraInput};
pub use jacobian::{
    fd_max_relative_error, jacobian_analytic, jacobian_fd, jacobian_with_mode, p_from_jacobian,
    p_matrix, r_from_jacobian, r_matrix, relative_gap, w_angle, w_length, AssemblyMode,
    JacobianMatrix, PMatrix, RMatrix,
};
pub use sampling::{sample_flattenable, sample_tetra};
pub use sweep::{run_sweep, GeometrySweep, SweepConfig, SweepReport, WorstCase};
pub use tetra::{
    curvature_map, dual, face_angle, is_valid, vertex_link, Edge, TetraAngles, TetraLengths,
    ValidityReport, VertexLink, EDGES,
};
pub use triangle::{a_invariant, dangle_dlength, solve_angles, TriangleData};
pub use volume::{
    euclidean_volume_cm, volume_gradient_check, volume_schlaefli, volume_via_waypoint,
    GradientCheck, VolumeResult,
};
