//! Seeded rejection sampling of tetrahedra for sweeps and property tests.
//!
//! Edge lengths are drawn i.i.d. uniform from [lo, hi]. A draw is kept when it
//! is a valid tetrahedron, every face angle is at least
//! [`tolerances::MIN_FACE_ANGLE`], and every dihedral keeps
//! [`tolerances::DIHEDRAL_MARGIN`] away from {0, π}. The margins carve out the
//! near-degenerate shell where the link A-invariants collapse and both the
//! identity residuals and finite-difference truncation blow up; they are tuned
//! so thousand-sample sweep residuals keep an order of magnitude of headroom
//! under their tolerances.

use rand::Rng;

use crate::geometry::Geometry;
use crate::tetra::{curvature_map, vertex_link, TetraLengths};
use crate::tolerances;
use crate::volume::scaling_point_usable;

const MAX_ATTEMPTS: usize = 1_000_000;

/// Points on the scaling-path grid checked by [`sample_flattenable`].
pub const FLATTENABLE_GRID: usize = 32;

/// Draw one margin-respecting valid tetrahedron.
///
/// Panics if the range is malformed or (after an absurd number of draws) the
/// range admits no acceptable tetrahedron at all.
pub fn sample_tetra(rng: &mut impl Rng, geometry: Geometry, lo: f64, hi: f64) -> TetraLengths {
    sample_where(rng, geometry, lo, hi, |_| true)
}

/// Like [`sample_tetra`], but additionally requires the whole scaling path
/// t·x, t ∈ (0, 1], to stay usable on a [`FLATTENABLE_GRID`]-point grid —
/// validity of x does not imply validity of its scaled-down copies, and the
/// volume integral walks that path.
pub fn sample_flattenable(rng: &mut impl Rng, geometry: Geometry, lo: f64, hi: f64) -> TetraLengths {
    sample_where(rng, geometry, lo, hi, |t| {
        (1..=FLATTENABLE_GRID).all(|m| scaling_point_usable(t, m as f64 / FLATTENABLE_GRID as f64))
    })
}

fn sample_where(
    rng: &mut impl Rng,
    geometry: Geometry,
    lo: f64,
    hi: f64,
    extra: impl Fn(&TetraLengths) -> bool,
) -> TetraLengths {
    assert!(lo > 0.0 && hi > lo, "length range must satisfy 0 < lo < hi");
    if geometry == Geometry::Spherical {
        assert!(hi < std::f64::consts::PI, "spherical lengths must stay below π");
    }
    for _ in 0..MAX_ATTEMPTS {
        let mut x = [0.0; 6];
        for v in &mut x {
            *v = rng.gen_range(lo..hi);
        }
        let Ok(t) = TetraLengths::new(geometry, x) else { continue };
        if passes_margins(&t) && extra(&t) {
            return t;
        }
    }
    panic!("no acceptable tetrahedron in {MAX_ATTEMPTS} draws from [{lo}, {hi}] ({geometry})");
}

fn passes_margins(t: &TetraLengths) -> bool {
    let Ok(a) = curvature_map(t) else { return false };
    let hi = std::f64::consts::PI - tolerances::DIHEDRAL_MARGIN;
    if a.values().iter().any(|&ang| ang < tolerances::DIHEDRAL_MARGIN || ang > hi) {
        return false;
    }
    for v in 1..=4u8 {
        let Ok(link) = vertex_link(t, v) else { return false };
        if link.triangle.lengths.iter().any(|&s| s < tolerances::MIN_FACE_ANGLE) {
            return false;
        }
    }
    true
}
