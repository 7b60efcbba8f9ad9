//! Tetrahedron edge indexing, validity, face angles, vertex links, the
//! length-to-angle curvature map, and spherical duality.
//!
//! Vertices are labeled 1..4 and the six edges follow the fixed order
//! 12, 13, 14, 23, 24, 34, so the edge in slot e and the edge in slot 5−e are
//! opposite (vertex-disjoint). The link of vertex k is always a *spherical*
//! triangle, whatever the ambient geometry: its sides are the three face
//! angles at k, and its inner angles are the dihedral angles along the edges
//! through k. In the link of k, the dihedral along edge {k,i} sits opposite
//! the side contributed by the face omitting i.

use serde::Serialize;

use crate::error::{Error, Result, TriangleViolation, ValidityFailure};
use crate::geometry::Geometry;
use crate::tolerances;
use crate::triangle::{check_lengths, solve_angles, TriangleData};

const ENDPOINTS: [(u8, u8); 6] = [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)];
const LABELS: [&str; 6] = ["12", "13", "14", "23", "24", "34"];

/// One of the six edges, identified by its slot in the canonical order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Edge(u8);

/// The six edges in canonical order 12, 13, 14, 23, 24, 34.
pub const EDGES: [Edge; 6] = [Edge(0), Edge(1), Edge(2), Edge(3), Edge(4), Edge(5)];

impl Edge {
    /// Edge between two distinct vertices in 1..=4, in either order.
    pub fn new(i: u8, j: u8) -> Edge {
        assert!(i != j && (1..=4).contains(&i) && (1..=4).contains(&j), "edge {{{i},{j}}}");
        let pair = (i.min(j), i.max(j));
        let slot = ENDPOINTS.iter().position(|&p| p == pair).unwrap();
        Edge(slot as u8)
    }

    pub fn from_index(index: usize) -> Edge {
        assert!(index < 6, "edge index {index} out of range");
        Edge(index as u8)
    }

    /// Slot in the canonical order, 0..6.
    pub fn index(self) -> usize {
        self.0 as usize
    }

    /// Endpoints (i, j) with i < j.
    pub fn endpoints(self) -> (u8, u8) {
        ENDPOINTS[self.index()]
    }

    /// The vertex-disjoint edge; canonical order makes this slot 5 − e.
    pub fn opposite(self) -> Edge {
        Edge(5 - self.0)
    }

    pub fn contains(self, v: u8) -> bool {
        let (i, j) = self.endpoints();
        v == i || v == j
    }

    /// The endpoint that is not `v`; panics when `v` is not an endpoint.
    pub fn other_end(self, v: u8) -> u8 {
        let (i, j) = self.endpoints();
        if v == i {
            j
        } else {
            assert!(v == j, "vertex {v} is not on edge {self}");
            i
        }
    }

    pub fn label(self) -> &'static str {
        LABELS[self.index()]
    }
}

impl std::fmt::Display for Edge {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// The three vertices other than `v`, ascending.
pub(crate) fn others(v: u8) -> [u8; 3] {
    match v {
        1 => [2, 3, 4],
        2 => [1, 3, 4],
        3 => [1, 2, 4],
        4 => [1, 2, 3],
        _ => panic!("vertex {v} out of range 1..=4"),
    }
}

/// Outcome of the validity scan: `failure` is the first violated condition, in
/// the fixed order edge positivity, spherical edge bounds, the four face
/// triangles (by ascending vertex triple), then the four vertex links.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidityReport {
    pub failure: Option<ValidityFailure>,
}

impl ValidityReport {
    pub fn is_ok(&self) -> bool {
        self.failure.is_none()
    }
}

pub(crate) const FACES: [(u8, u8, u8); 4] = [(1, 2, 3), (1, 2, 4), (1, 3, 4), (2, 3, 4)];

fn face_sides(x: &[f64; 6], (i, j, k): (u8, u8, u8)) -> [f64; 3] {
    // Side m is opposite the m-th vertex of the (ascending) triple.
    [
        x[Edge::new(j, k).index()],
        x[Edge::new(i, k).index()],
        x[Edge::new(i, j).index()],
    ]
}

pub(crate) fn solve_face(x: &[f64; 6], geometry: Geometry, face: (u8, u8, u8)) -> Result<TriangleData> {
    let sides = face_sides(x, face);
    solve_angles(sides[0], sides[1], sides[2], geometry).map_err(|e| match e {
        Error::InvalidTriangle(violation) => Error::InvalidTetrahedron(ValidityFailure::Face {
            v0: face.0,
            v1: face.1,
            v2: face.2,
            violation,
        }),
        other => other,
    })
}

/// Check whether six edge lengths (canonical order) bound a tetrahedron:
/// positive edges, spherical edges below π, all four faces genuine triangles,
/// and all four vertex links genuine spherical triangles.
pub fn is_valid(x: &[f64; 6], geometry: Geometry) -> ValidityReport {
    for e in EDGES {
        let v = x[e.index()];
        if !(v > 0.0) {
            return ValidityReport {
                failure: Some(ValidityFailure::NonpositiveLength { edge: e, value: v }),
            };
        }
    }
    if geometry == Geometry::Spherical {
        for e in EDGES {
            let v = x[e.index()];
            if v >= std::f64::consts::PI {
                return ValidityReport {
                    failure: Some(ValidityFailure::LengthBound { edge: e, value: v }),
                };
            }
        }
    }

    let mut faces = Vec::with_capacity(4);
    for &face in &FACES {
        match solve_face(x, geometry, face) {
            Ok(t) => faces.push(t),
            Err(Error::InvalidTetrahedron(f)) => return ValidityReport { failure: Some(f) },
            Err(Error::NearDegenerate { value, .. }) => {
                return ValidityReport {
                    failure: Some(ValidityFailure::Face {
                        v0: face.0,
                        v1: face.1,
                        v2: face.2,
                        violation: TriangleViolation::DegenerateAngle { value },
                    }),
                }
            }
            Err(_) => unreachable!("face solver emits triangle or degeneracy errors only"),
        }
    }

    for v in 1..=4u8 {
        let sides = link_sides(&faces, v);
        if let Some(violation) = check_lengths(&sides, Geometry::Spherical) {
            return ValidityReport { failure: Some(ValidityFailure::Link { vertex: v, violation }) };
        }
    }

    ValidityReport { failure: None }
}

/// Sides of the link triangle at `v`: the face angle at `v` in the face
/// omitting `others(v)[m]` lands in slot m.
pub(crate) fn link_sides(faces: &[TriangleData], v: u8) -> [f64; 3] {
    let mut sides = [0.0; 3];
    for (m, &omitted) in others(v).iter().enumerate() {
        let face_idx = FACES.iter().position(|&(a, b, c)| a != omitted && b != omitted && c != omitted).unwrap();
        let face = FACES[face_idx];
        let pos = [face.0, face.1, face.2].iter().position(|&w| w == v).unwrap();
        sides[m] = faces[face_idx].angles[pos];
    }
    sides
}

/// Six validated edge lengths in a fixed geometry. Construction enforces
/// [`is_valid`]; the lengths are immutable afterwards.
#[derive(Debug, Clone, PartialEq)]
pub struct TetraLengths {
    geometry: Geometry,
    x: [f64; 6],
}

impl TetraLengths {
    pub fn new(geometry: Geometry, x: [f64; 6]) -> Result<TetraLengths> {
        match is_valid(&x, geometry).failure {
            None => Ok(TetraLengths { geometry, x }),
            Some(failure) => Err(Error::InvalidTetrahedron(failure)),
        }
    }

    pub fn geometry(&self) -> Geometry {
        self.geometry
    }

    pub fn get(&self, e: Edge) -> f64 {
        self.x[e.index()]
    }

    pub fn values(&self) -> &[f64; 6] {
        &self.x
    }

    /// The scaled tetrahedron t·x, revalidated: spherically valid lengths need
    /// not stay valid along the scaling path.
    pub fn scaled(&self, t: f64) -> Result<TetraLengths> {
        TetraLengths::new(self.geometry, self.x.map(|v| t * v))
    }

    /// One edge nudged by `delta`, revalidated.
    pub fn perturbed(&self, e: Edge, delta: f64) -> Result<TetraLengths> {
        let mut x = self.x;
        x[e.index()] += delta;
        TetraLengths::new(self.geometry, x)
    }

    /// Push lengths forward along a vertex relabeling: vertex v ↦ sigma[v−1].
    /// The edge set is permuted, validity is preserved.
    pub fn relabeled(&self, sigma: &[u8; 4]) -> Result<TetraLengths> {
        let mut x = [0.0; 6];
        for e in EDGES {
            let (i, j) = e.endpoints();
            let image = Edge::new(sigma[i as usize - 1], sigma[j as usize - 1]);
            x[image.index()] = self.get(e);
        }
        TetraLengths::new(self.geometry, x)
    }
}

/// The six dihedral angles in canonical edge order, each strictly inside (0, π).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TetraAngles {
    a: [f64; 6],
}

impl TetraAngles {
    pub(crate) fn from_values(a: [f64; 6]) -> TetraAngles {
        TetraAngles { a }
    }

    pub fn get(&self, e: Edge) -> f64 {
        self.a[e.index()]
    }

    pub fn values(&self) -> &[f64; 6] {
        &self.a
    }

    /// Angles pushed forward along the vertex relabeling v ↦ sigma[v−1].
    pub fn relabeled(&self, sigma: &[u8; 4]) -> TetraAngles {
        let mut a = [0.0; 6];
        for e in EDGES {
            let (i, j) = e.endpoints();
            let image = Edge::new(sigma[i as usize - 1], sigma[j as usize - 1]);
            a[image.index()] = self.get(e);
        }
        TetraAngles { a }
    }
}

/// Face angle at vertex `v` in the face {v, p, q}: the corner of that triangle
/// at `v`, opposite the side x_pq.
pub fn face_angle(x: &TetraLengths, v: u8, p: u8, q: u8) -> Result<f64> {
    assert!(v != p && v != q && p != q, "face vertices {{{v},{p},{q}}} must be distinct");
    let mut tri = [v, p, q];
    tri.sort_unstable();
    let face = (tri[0], tri[1], tri[2]);
    let t = solve_face(&x.x, x.geometry, face)?;
    let pos = tri.iter().position(|&w| w == v).unwrap();
    Ok(t.angles[pos])
}

/// The link of vertex `k`: a spherical triangle whose side m is the face angle
/// at `k` in the face omitting `others(k)[m]`, and whose angle m is the
/// dihedral along the edge {k, others(k)[m]}.
#[derive(Debug, Clone, PartialEq)]
pub struct VertexLink {
    pub vertex: u8,
    pub others: [u8; 3],
    pub triangle: TriangleData,
}

impl VertexLink {
    /// Dihedral angle along the edge {vertex, other}.
    pub fn dihedral_along(&self, other: u8) -> f64 {
        let m = self.others.iter().position(|&w| w == other).expect("vertex not adjacent");
        self.triangle.angles[m]
    }

    /// Side of the link triangle opposite [`dihedral_along`]`(other)`: the face
    /// angle at `vertex` in the face omitting `other`.
    pub fn side_omitting(&self, other: u8) -> f64 {
        let m = self.others.iter().position(|&w| w == other).expect("vertex not adjacent");
        self.triangle.lengths[m]
    }
}

pub fn vertex_link(x: &TetraLengths, k: u8) -> Result<VertexLink> {
    let rest = others(k);
    let mut sides = [0.0; 3];
    for m in 0..3 {
        let (p, q) = (rest[(m + 1) % 3], rest[(m + 2) % 3]);
        sides[m] = face_angle(x, k, p, q)?;
    }
    let triangle = solve_angles(sides[0], sides[1], sides[2], Geometry::Spherical)
        .map_err(|e| match e {
            Error::InvalidTriangle(violation) => Error::InvalidLink { vertex: k, violation },
            other => other,
        })?;
    Ok(VertexLink { vertex: k, others: rest, triangle })
}

/// The curvature map K(x) = a: all six dihedral angles from the six lengths.
///
/// Each dihedral is read off the link of the edge's smaller endpoint and
/// cross-checked against the other endpoint's link to
/// [`tolerances::LINK_CONSISTENCY`]; the two constructions are independent
/// spherical solves, so their agreement certifies the numerics.
pub fn curvature_map(x: &TetraLengths) -> Result<TetraAngles> {
    let links = [
        vertex_link(x, 1)?,
        vertex_link(x, 2)?,
        vertex_link(x, 3)?,
        vertex_link(x, 4)?,
    ];
    let mut a = [0.0; 6];
    for e in EDGES {
        let (i, j) = e.endpoints();
        let primary = links[i as usize - 1].dihedral_along(j);
        let alternate = links[j as usize - 1].dihedral_along(i);
        let residual = (primary - alternate).abs();
        if residual > tolerances::LINK_CONSISTENCY {
            return Err(Error::NearDegenerate {
                quantity: "link cross-check residual",
                value: residual,
            });
        }
        a[e.index()] = primary;
    }
    Ok(TetraAngles { a })
}

/// Spherical duality: x*ₑ = π − a at the opposite edge, a*ₑ = π − x at the
/// opposite edge. The dual is validated and its recomputed angles are checked
/// against a* to [`tolerances::DUALITY`].
pub fn dual(x: &TetraLengths, a: &TetraAngles) -> Result<(TetraLengths, TetraAngles)> {
    if x.geometry() != Geometry::Spherical {
        return Err(Error::WrongGeometry { operation: "dual", requirement: "spherical geometry" });
    }
    let pi = std::f64::consts::PI;
    let mut xs = [0.0; 6];
    let mut as_ = [0.0; 6];
    for e in EDGES {
        xs[e.index()] = pi - a.get(e.opposite());
        as_[e.index()] = pi - x.get(e.opposite());
    }
    let dual_lengths = TetraLengths::new(Geometry::Spherical, xs)?;
    let recomputed = curvature_map(&dual_lengths)?;
    let residual = EDGES
        .iter()
        .map(|&e| (recomputed.get(e) - as_[e.index()]).abs())
        .fold(0.0f64, f64::max);
    if residual > tolerances::DUALITY {
        return Err(Error::NearDegenerate { quantity: "dual angle residual", value: residual });
    }
    Ok((dual_lengths, TetraAngles { a: as_ }))
}
