//! Analytic Jacobian ∂a/∂x of the curvature map, its finite-difference check,
//! and the two normalizations P (by angle sines) and R (length-normalized
//! inverse).
//!
//! Each dihedral a_ij is an angle of the spherical link triangle at vertex i,
//! whose sides are face angles, which in turn depend on the edge lengths
//! through the ambient cosine law — so every entry of ∂a/∂x is a two-step
//! chain of triangle derivatives. Writing {k,l} for the complement of the row
//! edge {i,j}, b^v_{pq} for the face angle at v in face {v,p,q}, A_Δ for the
//! A-invariant of a face, and A_Lk(v) for that of the link triangle at v:
//!
//! ```text
//!   opposite:  ∂a_ij/∂x_kl = [sin b^i_{kl} / A_Lk(i)] · S_λ(x_kl)/A_ikl
//!   adjacent:  ∂a_pq/∂x_pm = −[sin b^q_{mn} / A_Lk(q)] · cos a_qm · S_λ(x_pm)/A_pqm
//!              (row {p,q}, column {p,m}, n the remaining vertex)
//!   diagonal:  ∂a_ij/∂x_ij = [sin b^i_{kl} / A_Lk(i)] ·
//!                ( cos a_ik · cos b^j_{ik} · S_λ(x_jk)/A_ijk
//!                + cos a_il · cos b^j_{il} · S_λ(x_jl)/A_ijl )
//! ```
//!
//! `Direct` assembly evaluates all 36 entries from these chains. `Minimal`
//! assembly evaluates only the three opposite entries of the rows through
//! vertex 1, reflects them (the Jacobian is symmetric — that is exactly the
//! closedness of Σ xₑ daₑ), and fills the adjacent/diagonal entries through
//! the normalized-matrix identities. The verification suites always consume
//! `Direct`, so those identities stay falsifiable rather than true by
//! construction.

use nalgebra::Matrix6;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::Geometry;
use crate::tetra::{
    curvature_map, link_sides, others, solve_face, Edge, TetraAngles, TetraLengths, VertexLink,
    EDGES, FACES,
};
use crate::tolerances;
use crate::triangle::{a_invariant, solve_angles, TriangleData};

/// How a Jacobian was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AssemblyMode {
    Direct,
    Minimal,
    FiniteDifference,
}

impl AssemblyMode {
    pub fn name(self) -> &'static str {
        match self {
            AssemblyMode::Direct => "direct",
            AssemblyMode::Minimal => "minimal",
            AssemblyMode::FiniteDifference => "finite_difference",
        }
    }
}

impl std::fmt::Display for AssemblyMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// The 6×6 matrix ∂aₑ/∂x_f in canonical edge order, with the angles of the
/// evaluation point.
#[derive(Debug, Clone, PartialEq)]
pub struct JacobianMatrix {
    geometry: Geometry,
    mode: AssemblyMode,
    angles: TetraAngles,
    m: Matrix6<f64>,
}

impl JacobianMatrix {
    pub fn geometry(&self) -> Geometry {
        self.geometry
    }

    pub fn mode(&self) -> AssemblyMode {
        self.mode
    }

    /// Dihedral angles at the evaluation point.
    pub fn angles(&self) -> &TetraAngles {
        &self.angles
    }

    pub fn get(&self, row: Edge, col: Edge) -> f64 {
        self.m[(row.index(), col.index())]
    }

    pub fn matrix(&self) -> &Matrix6<f64> {
        &self.m
    }
}

/// Everything the entry chains read: solved faces, graded sines, A-invariants
/// (floored), and the cross-checked dihedrals.
struct Frame {
    geometry: Geometry,
    s: [f64; 6],
    faces: [TriangleData; 4],
    a_face: [f64; 4],
    a_link: [f64; 4],
    angles: [f64; 6],
}

/// Index into [`FACES`] of the face omitting `v`.
fn face_index(omitted: u8) -> usize {
    4 - omitted as usize
}

impl Frame {
    fn build(x: &TetraLengths) -> Result<Frame> {
        let g = x.geometry();
        let xv = *x.values();
        let s = xv.map(|v| g.s_lambda(v));

        let mut faces = Vec::with_capacity(4);
        let mut a_face = [0.0; 4];
        for (idx, &face) in FACES.iter().enumerate() {
            let t = solve_face(&xv, g, face)?;
            a_face[idx] = a_invariant(&t);
            if a_face[idx] < tolerances::A_INVARIANT_FLOOR {
                return Err(Error::NearDegenerate {
                    quantity: "face A-invariant",
                    value: a_face[idx],
                });
            }
            faces.push(t);
        }
        let faces: [TriangleData; 4] = faces.try_into().unwrap();

        let mut links = Vec::with_capacity(4);
        let mut a_link = [0.0; 4];
        for v in 1..=4u8 {
            let sides = link_sides(&faces, v);
            let triangle = solve_angles(sides[0], sides[1], sides[2], Geometry::Spherical)
                .map_err(|e| match e {
                    Error::InvalidTriangle(violation) => {
                        Error::InvalidLink { vertex: v, violation }
                    }
                    other => other,
                })?;
            a_link[v as usize - 1] = a_invariant(&triangle);
            if a_link[v as usize - 1] < tolerances::A_INVARIANT_FLOOR {
                return Err(Error::NearDegenerate {
                    quantity: "link A-invariant",
                    value: a_link[v as usize - 1],
                });
            }
            links.push(VertexLink { vertex: v, others: others(v), triangle });
        }
        let links: [VertexLink; 4] = links.try_into().unwrap();

        // No cross-check here: near the cone point of a scaling path the two
        // link readings of a dihedral drift apart like ulp/length², while the
        // entries stay accurate. The A-invariant floors above are the guard;
        // the public angle map keeps the strict cross-check.
        let mut angles = [0.0; 6];
        for e in EDGES {
            let (i, j) = e.endpoints();
            angles[e.index()] = links[i as usize - 1].dihedral_along(j);
        }

        Ok(Frame { geometry: g, s, faces, a_face, a_link, angles })
    }

    /// Face angle b^v_{pq}, read off the pre-solved face table.
    fn face_angle(&self, v: u8, p: u8, q: u8) -> f64 {
        let idx = face_index(10 - v - p - q);
        let (a, b, c) = FACES[idx];
        let pos = [a, b, c].iter().position(|&w| w == v).unwrap();
        self.faces[idx].angles[pos]
    }

    /// A-invariant of the face {v0, v1, v2}.
    fn a_face3(&self, v0: u8, v1: u8, v2: u8) -> f64 {
        self.a_face[face_index(10 - v0 - v1 - v2)]
    }

    fn dihedral(&self, i: u8, j: u8) -> f64 {
        self.angles[Edge::new(i, j).index()]
    }

    /// sin(b^i_{kl}) / A_Lk(i) for the row edge {i,j}: the derivative of a_ij
    /// with respect to its opposite link side.
    fn link_factor(&self, i: u8, j: u8) -> f64 {
        let (k, l) = Edge::new(i, j).opposite().endpoints();
        self.face_angle(i, k, l).sin() / self.a_link[i as usize - 1]
    }
}

/// Shared vertex of two adjacent edges, plus the row-only and column-only
/// endpoints (q and m in the adjacent-entry chain).
fn adjacent_roles(row: Edge, col: Edge) -> (u8, u8, u8) {
    let (i, j) = row.endpoints();
    let p = if col.contains(i) { i } else { j };
    debug_assert!(col.contains(p), "edges {row} and {col} share no vertex");
    (p, row.other_end(p), col.other_end(p))
}

fn assemble_direct(f: &Frame) -> Matrix6<f64> {
    let mut m = Matrix6::zeros();
    for (r, row) in EDGES.into_iter().enumerate() {
        let (i, j) = row.endpoints();
        let (k, l) = row.opposite().endpoints();
        let pref = f.link_factor(i, j);
        for (c, col) in EDGES.into_iter().enumerate() {
            m[(r, c)] = if c == 5 - r {
                pref * f.s[c] / f.a_face3(i, k, l)
            } else if c == r {
                let term = |w: u8| {
                    f.dihedral(i, w).cos()
                        * f.face_angle(j, i, w).cos()
                        * f.s[Edge::new(j, w).index()]
                        / f.a_face3(i, j, w)
                };
                pref * (term(k) + term(l))
            } else {
                let (p, q, mid) = adjacent_roles(row, col);
                let n = 10 - p - q - mid;
                -(f.face_angle(q, mid, n).sin() / f.a_link[q as usize - 1])
                    * f.dihedral(q, mid).cos()
                    * f.s[c]
                    / f.a_face3(p, q, mid)
            };
        }
    }
    m
}

fn assemble_minimal(f: &Frame) -> Matrix6<f64> {
    let mut m = Matrix6::zeros();
    // Rows 12, 13, 14 all read their opposite entry from the link at vertex 1;
    // the reflected entries are the same number because ∂a/∂x is symmetric
    // (closedness of Σ xₑ daₑ).
    for r in 0..3 {
        let row = EDGES[r];
        let (i, j) = row.endpoints();
        let (k, l) = row.opposite().endpoints();
        let opposite = f.link_factor(i, j) * f.s[5 - r] / f.a_face3(i, k, l);
        m[(r, 5 - r)] = opposite;
        m[(5 - r, r)] = opposite;
    }
    for (r, row) in EDGES.into_iter().enumerate() {
        let anchor = m[(r, 5 - r)];
        let sin_opp = f.angles[5 - r].sin();
        for (c, col) in EDGES.into_iter().enumerate() {
            if c == 5 - r {
                continue;
            }
            m[(r, c)] = if c == r {
                anchor * w_angle_values(&f.angles, r) * f.angles[r].sin() / sin_opp
            } else {
                let (_, q, mid) = adjacent_roles(row, col);
                -anchor * f.dihedral(q, mid).cos() * f.angles[c].sin() / sin_opp
            };
        }
    }
    m
}

/// Analytic Jacobian in the default `Direct` mode.
pub fn jacobian_analytic(x: &TetraLengths) -> Result<JacobianMatrix> {
    jacobian_with_mode(x, AssemblyMode::Direct)
}

pub fn jacobian_with_mode(x: &TetraLengths, mode: AssemblyMode) -> Result<JacobianMatrix> {
    if mode == AssemblyMode::FiniteDifference {
        return jacobian_fd(x, tolerances::FD_STEP);
    }
    let f = Frame::build(x)?;
    let m = match mode {
        AssemblyMode::Direct => assemble_direct(&f),
        AssemblyMode::Minimal => assemble_minimal(&f),
        AssemblyMode::FiniteDifference => unreachable!(),
    };
    Ok(JacobianMatrix {
        geometry: f.geometry,
        mode,
        angles: TetraAngles::from_values(f.angles),
        m,
    })
}

/// Central-difference Jacobian with step `h`; every perturbed tetrahedron is
/// revalidated, so an evaluation point too close to the boundary errors out
/// rather than differencing garbage.
pub fn jacobian_fd(x: &TetraLengths, h: f64) -> Result<JacobianMatrix> {
    assert!(h > 0.0, "step must be positive");
    let angles = curvature_map(x)?;
    let mut m = Matrix6::zeros();
    for (c, col) in EDGES.into_iter().enumerate() {
        let ap = curvature_map(&x.perturbed(col, h)?)?;
        let am = curvature_map(&x.perturbed(col, -h)?)?;
        for r in 0..6 {
            m[(r, c)] = (ap.values()[r] - am.values()[r]) / (2.0 * h);
        }
    }
    Ok(JacobianMatrix {
        geometry: x.geometry(),
        mode: AssemblyMode::FiniteDifference,
        angles,
        m,
    })
}

/// max |A − B| over entries, scaled by max |A|.
pub fn relative_gap(a: &JacobianMatrix, b: &JacobianMatrix) -> f64 {
    let scale = a.m.iter().fold(0.0f64, |acc, &v| acc.max(v.abs()));
    let diff = (a.m - b.m).iter().fold(0.0f64, |acc, &v| acc.max(v.abs()));
    diff / scale
}

/// max |J_analytic − J_fd| over entries, scaled by max |J_analytic|.
pub fn fd_max_relative_error(x: &TetraLengths, h: f64) -> Result<f64> {
    Ok(relative_gap(&jacobian_analytic(x)?, &jacobian_fd(x, h)?))
}

/// Angle-normalized Jacobian P[e][f] = J[e][f] / (sin aₑ · sin a_f).
#[derive(Debug, Clone, PartialEq)]
pub struct PMatrix {
    geometry: Geometry,
    m: Matrix6<f64>,
}

impl PMatrix {
    pub fn geometry(&self) -> Geometry {
        self.geometry
    }

    pub fn get(&self, row: Edge, col: Edge) -> f64 {
        self.m[(row.index(), col.index())]
    }

    pub fn matrix(&self) -> &Matrix6<f64> {
        &self.m
    }
}

pub fn p_from_jacobian(j: &JacobianMatrix) -> Result<PMatrix> {
    let sins = j.angles.values().map(f64::sin);
    for &s in &sins {
        if s < tolerances::SIN_FLOOR {
            return Err(Error::NearDegenerate { quantity: "dihedral sine", value: s });
        }
    }
    let mut m = Matrix6::zeros();
    for r in 0..6 {
        for c in 0..6 {
            m[(r, c)] = j.m[(r, c)] / (sins[r] * sins[c]);
        }
    }
    Ok(PMatrix { geometry: j.geometry, m })
}

pub fn p_matrix(x: &TetraLengths) -> Result<PMatrix> {
    p_from_jacobian(&jacobian_analytic(x)?)
}

/// Length-normalized inverse R[e][f] = λ·(J⁻¹)[e][f] / (S_λ(xₑ)·S_λ(x_f)),
/// defined for curved geometries only (the flat Jacobian is singular: angles
/// are scale-invariant, so J·x = 0).
#[derive(Debug, Clone, PartialEq)]
pub struct RMatrix {
    geometry: Geometry,
    m: Matrix6<f64>,
    inverse: Matrix6<f64>,
    condition: f64,
}

impl RMatrix {
    pub fn geometry(&self) -> Geometry {
        self.geometry
    }

    pub fn get(&self, row: Edge, col: Edge) -> f64 {
        self.m[(row.index(), col.index())]
    }

    pub fn matrix(&self) -> &Matrix6<f64> {
        &self.m
    }

    /// The raw Jacobian inverse the normalization was built from.
    pub fn jacobian_inverse(&self) -> &Matrix6<f64> {
        &self.inverse
    }

    /// 2-norm condition estimate of the Jacobian (ratio of extreme singular values).
    pub fn condition(&self) -> f64 {
        self.condition
    }
}

pub fn r_from_jacobian(j: &JacobianMatrix, x: &TetraLengths) -> Result<RMatrix> {
    let g = x.geometry();
    if !g.is_curved() {
        return Err(Error::needs_curved("r_matrix"));
    }
    let sv = j.m.svd(false, false).singular_values;
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for &s in sv.iter() {
        lo = lo.min(s);
        hi = hi.max(s);
    }
    let condition = hi / lo;
    let inverse = match j.m.try_inverse() {
        Some(inv) if condition.is_finite() => inv,
        _ => return Err(Error::SingularJacobian { condition }),
    };
    let s = x.values().map(|v| g.s_lambda(v));
    for &v in &s {
        if v.abs() < tolerances::SIN_FLOOR {
            return Err(Error::NearDegenerate { quantity: "edge graded sine", value: v });
        }
    }
    let lam = g.lambda();
    let mut m = Matrix6::zeros();
    for r in 0..6 {
        for c in 0..6 {
            m[(r, c)] = lam * inverse[(r, c)] / (s[r] * s[c]);
        }
    }
    Ok(RMatrix { geometry: g, m, inverse, condition })
}

pub fn r_matrix(x: &TetraLengths) -> Result<RMatrix> {
    r_from_jacobian(&jacobian_analytic(x)?, x)
}

fn w_angle_values(a: &[f64; 6], e: usize) -> f64 {
    let edge = Edge::from_index(e);
    let (i, j) = edge.endpoints();
    let (k, l) = edge.opposite().endpoints();
    let c = |p: u8, q: u8| a[Edge::new(p, q).index()].cos();
    let num = c(i, j) * c(j, k) * c(k, i) + c(i, j) * c(j, l) * c(l, i) + c(i, k) * c(j, l)
        + c(i, l) * c(j, k);
    num / (a[e].sin() * a[e].sin())
}

/// Diagonal weight of the angle-normalized matrix: with {k,l} opposite {i,j}
/// and c_pq = cos a_pq,
/// w = (c_ij c_jk c_ki + c_ij c_jl c_li + c_ik c_jl + c_il c_jk) / sin² a_ij.
pub fn w_angle(a: &TetraAngles, e: Edge) -> Result<f64> {
    let s = a.get(e).sin();
    if s < tolerances::SIN_FLOOR {
        return Err(Error::NearDegenerate { quantity: "dihedral sine", value: s });
    }
    Ok(w_angle_values(a.values(), e.index()))
}

/// Diagonal weight of the length-normalized inverse: with C_pq = C_λ(x_pq),
/// w = (−C_ij (C_ik C_il + C_jk C_jl) + C_ik C_jl + C_il C_jk) / (λ·S_λ(x_ij)²).
pub fn w_length(x: &TetraLengths, e: Edge) -> Result<f64> {
    let g = x.geometry();
    if !g.is_curved() {
        return Err(Error::needs_curved("w_length"));
    }
    let s = g.s_lambda(x.get(e));
    if s.abs() < tolerances::SIN_FLOOR {
        return Err(Error::NearDegenerate { quantity: "edge graded sine", value: s });
    }
    let c = |p: u8, q: u8| g.c_lambda(x.get(Edge::new(p, q)));
    let (i, j) = e.endpoints();
    let (k, l) = e.opposite().endpoints();
    let num = -c(i, j) * (c(i, k) * c(i, l) + c(j, k) * c(j, l))
        + c(i, k) * c(j, l)
        + c(i, l) * c(j, k);
    Ok(num / (g.lambda() * s * s))
}
