//! Residual suites for the normalized-Jacobian identities, and the closed-loop
//! Stieltjes integral of the length–angle 1-form.
//!
//! With row edge {i,j}, complement {k,l}, and P = J normalized by angle sines
//! (any geometry):
//!
//! ```text
//!   symmetry    P[e][f] = P[f][e]
//!   partition   P^{ij}_{kl} = P^{ik}_{jl} = P^{il}_{jk}
//!   adjacent    P^{ij}_{ik} = −P^{ij}_{kl} · cos a_jk
//!   diagonal    P^{ij}_{ij} =  P^{ij}_{kl} · w(a; ij)
//!   complement  P[e][f] = P[opp e][opp f]   (e ≠ f)
//! ```
//!
//! The length-normalized inverse R (curved geometries) satisfies the same
//! shapes with the sign flipped and cosines replaced by graded length cosines:
//! adjacent R^{ij}_{ik} = +R^{ij}_{kl} · C_λ(x_il), diagonal weight w(x; ij),
//! plus the plain inverse residual ‖J·J⁻¹ − I‖_max. Every suite consumes the
//! `Direct` Jacobian assembly, so nothing here is true by construction.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::geometry::Geometry;
use crate::jacobian::{
    jacobian_analytic, p_from_jacobian, r_from_jacobian, w_angle, w_length,
};
use crate::tetra::{curvature_map, Edge, TetraLengths, EDGES};
use crate::tolerances;

/// Residual tolerances for the identity suites.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub p_identities: f64,
    pub r_identities: f64,
    pub inverse: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            p_identities: tolerances::P_IDENTITIES,
            r_identities: tolerances::R_IDENTITIES,
            inverse: tolerances::INVERSE_IDENTITY,
        }
    }
}

/// One identity: its worst residual over all applicable entries and where it
/// occurred.
#[derive(Debug, Clone, Serialize)]
pub struct IdentityCheck {
    pub name: &'static str,
    pub max_residual: f64,
    /// Row/column edge labels of the worst entry (for `partition`, the two
    /// row edges whose opposite entries disagree most).
    pub argmax_row: &'static str,
    pub argmax_col: &'static str,
    pub tolerance: f64,
    pub pass: bool,
}

/// All checks of one suite on one tetrahedron.
#[derive(Debug, Clone, Serialize)]
pub struct IdentityReport {
    pub geometry: Geometry,
    pub suite: &'static str,
    pub lengths: BTreeMap<&'static str, f64>,
    pub checks: Vec<IdentityCheck>,
    pub pass: bool,
}

struct Worst {
    value: f64,
    row: Edge,
    col: Edge,
}

impl Worst {
    fn new() -> Worst {
        Worst { value: 0.0, row: EDGES[0], col: EDGES[0] }
    }

    fn update(&mut self, value: f64, row: Edge, col: Edge) {
        if value > self.value {
            self.value = value;
            self.row = row;
            self.col = col;
        }
    }

    fn into_check(self, name: &'static str, tolerance: f64) -> IdentityCheck {
        IdentityCheck {
            name,
            max_residual: self.value,
            argmax_row: self.row.label(),
            argmax_col: self.col.label(),
            tolerance,
            pass: self.value <= tolerance,
        }
    }
}

fn lengths_map(x: &TetraLengths) -> BTreeMap<&'static str, f64> {
    EDGES.iter().map(|&e| (e.label(), x.get(e))).collect()
}

fn finish(
    geometry: Geometry,
    suite: &'static str,
    lengths: BTreeMap<&'static str, f64>,
    checks: Vec<IdentityCheck>,
) -> IdentityReport {
    let pass = checks.iter().all(|c| c.pass);
    IdentityReport { geometry, suite, lengths, checks, pass }
}

/// Residuals of symmetry, partition, adjacent, diagonal, and complement for a
/// 6×6 matrix indexed by edges, with `adjacent_factor(row, col)` supplying the
/// signed multiplier of the opposite entry and `diagonal_weight(e)` the w.
fn shape_checks(
    get: &dyn Fn(Edge, Edge) -> f64,
    adjacent_factor: &dyn Fn(Edge, Edge) -> f64,
    diagonal_weight: &dyn Fn(Edge) -> Result<f64>,
    tol: f64,
) -> Result<Vec<IdentityCheck>> {
    let mut checks = Vec::with_capacity(5);

    let mut worst = Worst::new();
    for e in EDGES {
        for f in EDGES {
            if e.index() < f.index() {
                worst.update((get(e, f) - get(f, e)).abs(), e, f);
            }
        }
    }
    checks.push(worst.into_check("symmetry", tol));

    // The three opposite-pair entries agree: one scalar cuts across all three
    // ways of splitting the vertex set into two edges.
    let mut worst = Worst::new();
    let pairs = [EDGES[0], EDGES[1], EDGES[2]];
    for a in 0..3 {
        for b in (a + 1)..3 {
            let va = get(pairs[a], pairs[a].opposite());
            let vb = get(pairs[b], pairs[b].opposite());
            worst.update((va - vb).abs(), pairs[a], pairs[b]);
        }
    }
    checks.push(worst.into_check("partition", tol));

    let mut worst = Worst::new();
    for e in EDGES {
        let anchor = get(e, e.opposite());
        for f in EDGES {
            if f != e && f != e.opposite() {
                worst.update((get(e, f) - anchor * adjacent_factor(e, f)).abs(), e, f);
            }
        }
    }
    checks.push(worst.into_check("adjacent", tol));

    let mut worst = Worst::new();
    for e in EDGES {
        let expected = get(e, e.opposite()) * diagonal_weight(e)?;
        worst.update((get(e, e) - expected).abs(), e, e);
    }
    checks.push(worst.into_check("diagonal", tol));

    let mut worst = Worst::new();
    for e in EDGES {
        for f in EDGES {
            if e != f {
                worst.update((get(e, f) - get(e.opposite(), f.opposite())).abs(), e, f);
            }
        }
    }
    checks.push(worst.into_check("complement", tol));

    Ok(checks)
}

/// Verify the five identities of the angle-normalized matrix P.
pub fn verify_p_identities(x: &TetraLengths, tol: &Tolerances) -> Result<IdentityReport> {
    let j = jacobian_analytic(x)?;
    let p = p_from_jacobian(&j)?;
    let angles = j.angles().clone();

    let adjacent_factor = |row: Edge, col: Edge| {
        // Row {p,q} with q off the column, column other endpoint m:
        // the multiplier is −cos a_qm.
        let (i, jv) = row.endpoints();
        let shared = if col.contains(i) { i } else { jv };
        let q = row.other_end(shared);
        let m = col.other_end(shared);
        -angles.get(Edge::new(q, m)).cos()
    };
    let diagonal_weight = |e: Edge| w_angle(&angles, e);
    let checks = shape_checks(
        &|e, f| p.get(e, f),
        &adjacent_factor,
        &diagonal_weight,
        tol.p_identities,
    )?;
    Ok(finish(x.geometry(), "p", lengths_map(x), checks))
}

/// Verify the five identities of the length-normalized inverse R, plus the
/// inverse residual ‖J·J⁻¹ − I‖_max.
pub fn verify_r_identities(x: &TetraLengths, tol: &Tolerances) -> Result<IdentityReport> {
    let j = jacobian_analytic(x)?;
    let r = r_from_jacobian(&j, x)?;
    let g = x.geometry();

    let adjacent_factor = |row: Edge, col: Edge| {
        // Shared vertex p, remaining vertex n (on neither edge):
        // the multiplier is +C_λ(x_pn).
        let (i, jv) = row.endpoints();
        let shared = if col.contains(i) { i } else { jv };
        let q = row.other_end(shared);
        let m = col.other_end(shared);
        let n = 10 - shared - q - m;
        g.c_lambda(x.get(Edge::new(shared, n)))
    };
    let diagonal_weight = |e: Edge| w_length(x, e);
    let mut checks = shape_checks(
        &|e, f| r.get(e, f),
        &adjacent_factor,
        &diagonal_weight,
        tol.r_identities,
    )?;

    let product = j.matrix() * r.jacobian_inverse();
    let mut worst = Worst::new();
    for (rr, re) in EDGES.into_iter().enumerate() {
        for (cc, ce) in EDGES.into_iter().enumerate() {
            let expected = if rr == cc { 1.0 } else { 0.0 };
            worst.update((product[(rr, cc)] - expected).abs(), re, ce);
        }
    }
    checks.push(worst.into_check("inverse", tol.inverse));

    Ok(finish(g, "r", lengths_map(x), checks))
}

/// |∮ Σ xₑ daₑ| around a circle of the given radius in the plane spanned by
/// two length coordinates, by the trapezoid Stieltjes sum
/// Σ ½(xₘ + xₘ₊₁)·(aₘ₊₁ − aₘ) over `n_steps` points.
///
/// Symmetry of ∂a/∂x makes the 1-form closed, so the true integral is 0; the
/// returned magnitude is pure discretization plus roundoff.
pub fn one_form_loop_residual(
    x0: &TetraLengths,
    radius: f64,
    plane: (Edge, Edge),
    n_steps: usize,
) -> Result<f64> {
    assert!(plane.0 != plane.1, "loop plane needs two distinct edges");
    assert!(n_steps >= 2, "a loop needs at least two points");
    assert!(radius >= 0.0, "radius must be nonnegative");

    let mut points = Vec::with_capacity(n_steps);
    for m in 0..n_steps {
        let theta = 2.0 * std::f64::consts::PI * m as f64 / n_steps as f64;
        let mut x = *x0.values();
        x[plane.0.index()] += radius * theta.cos();
        x[plane.1.index()] += radius * theta.sin();
        let xt = TetraLengths::new(x0.geometry(), x)?;
        let a = curvature_map(&xt)?;
        points.push((x, *a.values()));
    }

    let mut total = 0.0;
    for m in 0..n_steps {
        let (x_now, a_now) = &points[m];
        let (x_next, a_next) = &points[(m + 1) % n_steps];
        for e in 0..6 {
            total += 0.5 * (x_now[e] + x_next[e]) * (a_next[e] - a_now[e]);
        }
    }
    Ok(total.abs())
}
