//! Shared integration-test helpers: an independent dihedral-angle oracle built
//! from vertex Gram / squared-distance matrices, and the vertex permutation
//! group for equivariance checks.
//!
//! The oracle never touches the link-triangle construction under test: it
//! embeds the tetrahedron through its 4×4 Gram matrix (curved) or 5×5 bordered
//! squared-distance matrix (flat) and reads dihedral cosines off adjugate /
//! cofactor ratios indexed by the complementary vertex pair.

use nalgebra::{Matrix4, Matrix5};
use schlafli::{Edge, Geometry, TetraLengths, EDGES};

pub fn gram_dihedrals(x: &TetraLengths) -> [f64; 6] {
    match x.geometry() {
        Geometry::Spherical => curved_dihedrals(x, 1.0),
        Geometry::Hyperbolic => curved_dihedrals(x, -1.0),
        Geometry::Euclidean => flat_dihedrals(x),
    }
}

fn curved_dihedrals(x: &TetraLengths, lam: f64) -> [f64; 6] {
    // Unit-vector Gram matrix of the four vertices: ⟨vᵢ, vᵢ⟩ = λ and
    // ⟨vᵢ, vⱼ⟩ = C_λ(x_ij) in the sphere, −C_λ(x_ij) in the Minkowski model.
    let g = Matrix4::from_fn(|r, c| {
        if r == c {
            lam
        } else {
            let d = x.get(Edge::new(r as u8 + 1, c as u8 + 1));
            if lam > 0.0 {
                d.cos()
            } else {
                -d.cosh()
            }
        }
    });
    let adj = g.try_inverse().expect("Gram matrix of a genuine tetrahedron") * g.determinant();
    let mut out = [0.0; 6];
    for e in EDGES {
        let (k, l) = e.opposite().endpoints();
        let (rk, rl) = (k as usize - 1, l as usize - 1);
        let ratio = adj[(rk, rl)] / (adj[(rk, rk)] * adj[(rl, rl)]).sqrt();
        out[e.index()] = if lam > 0.0 { (-ratio).acos() } else { ratio.acos() };
    }
    out
}

fn flat_dihedrals(x: &TetraLengths) -> [f64; 6] {
    let m = Matrix5::from_fn(|r, c| match (r, c) {
        (0, 0) => 0.0,
        (0, _) | (_, 0) => 1.0,
        (i, j) if i == j => 0.0,
        (i, j) => {
            let d = x.get(Edge::new(i as u8, j as u8));
            d * d
        }
    });
    let cof = m.try_inverse().expect("squared-distance matrix of a genuine tetrahedron").transpose()
        * m.determinant();
    let mut out = [0.0; 6];
    for e in EDGES {
        let (k, l) = e.opposite().endpoints();
        let (rk, rl) = (k as usize, l as usize);
        let ratio = cof[(rk, rl)] / (cof[(rk, rk)] * cof[(rl, rl)]).sqrt();
        out[e.index()] = ratio.acos();
    }
    out
}

/// All 24 vertex relabelings.
pub fn all_permutations() -> Vec<[u8; 4]> {
    let mut out = Vec::with_capacity(24);
    let mut items = [1u8, 2, 3, 4];
    permute(&mut items, 0, &mut out);
    out
}

fn permute(items: &mut [u8; 4], k: usize, out: &mut Vec<[u8; 4]>) {
    if k == 4 {
        out.push(*items);
        return;
    }
    for i in k..4 {
        items.swap(k, i);
        permute(items, k + 1, out);
        items.swap(k, i);
    }
}
