//! Seeded unstructured meshing of the unit square.
//!
//! Points are a jittered interior grid plus exactly regular boundary points;
//! the triangulation is incremental Bowyer–Watson. In-circle tests run in
//! double precision with a forward error bound and fall back to quad-double
//! evaluation when the determinant is too close to zero to trust, which
//! keeps cavity updates consistent without a full exact-predicate stack.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{MeshError, Provenance, TriangleMesh};
use crate::geometry::Point2;
use crate::scalar::Qd;

/// Far-away helper vertices enclosing every input point. All actual
/// circumcircles in this generator have radius well under 10² (the square's
/// outline goes in first, and empty circles cannot outgrow the point
/// spacing), so at 10⁶ these never shadow a true Delaunay neighbour.
const SUPER: [(f64, f64); 3] = [(-1.0e6, -1.0e6), (3.0e6, -1.0e6), (-1.0e6, 3.0e6)];

/// Delaunay mesh of the unit square with `(base·k+1)` regularly spaced
/// points per side and a jittered `(base·k−1)²` interior grid (jitter
/// amplitude 0.3 of the spacing, from a ChaCha stream seeded with `seed`).
/// The result always has exactly `2(base·k)²` triangles and is bitwise
/// reproducible for a fixed seed. If the triangulation degenerates, one
/// retry with `seed + 1` is attempted before the failure is reported.
pub fn unstructured_mesh(k: u32, base: u32, seed: u64) -> Result<TriangleMesh<f64>, MeshError> {
    if k == 0 || base == 0 {
        return Err(MeshError::InvalidLevel { k, base });
    }
    let m = base as usize * k as usize;
    attempt(m, seed).or_else(|_| attempt(m, seed.wrapping_add(1)))
}

fn attempt(m: usize, seed: u64) -> Result<TriangleMesh<f64>, MeshError> {
    let points = sample_points(m, seed);
    let triangles = bowyer_watson(&points)?;

    let expected = 2 * m * m;
    if triangles.len() != expected {
        return Err(MeshError::TriangulationFailure {
            reason: format!(
                "seed {seed}: got {} triangles where the square needs {expected}",
                triangles.len()
            ),
        });
    }
    for (t, tri) in triangles.iter().enumerate() {
        let (a, b, c) = (points[tri[0]], points[tri[1]], points[tri[2]]);
        let area2 = (b.0 - a.0) * (c.1 - a.1) - (c.0 - a.0) * (b.1 - a.1);
        if !(area2 > 0.0) {
            return Err(MeshError::TriangulationFailure {
                reason: format!("seed {seed}: triangle {t} is degenerate or flipped"),
            });
        }
    }

    Ok(TriangleMesh {
        vertices: points.iter().map(|&(x, y)| Point2::new(x, y)).collect(),
        triangles,
        provenance: Provenance::IndependentUnstructured,
    })
}

/// Boundary lattice points (unjittered, so the square's sides stay exactly
/// straight) followed by the jittered interior grid, both in row-major
/// order. The jitter keeps interior points at least 0.4/m apart and 0.7/m
/// clear of the boundary.
fn sample_points(m: usize, seed: u64) -> Vec<(f64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let amp = 0.3 / m as f64;
    let coord = |i: usize| i as f64 / m as f64;

    let mut points = Vec::with_capacity((m + 1) * (m + 1));
    for i in 0..=m {
        for j in 0..=m {
            if i == 0 || i == m || j == 0 || j == m {
                points.push((coord(i), coord(j)));
            }
        }
    }
    for i in 1..m {
        for j in 1..m {
            let dx: f64 = rng.gen_range(-amp..amp);
            let dy: f64 = rng.gen_range(-amp..amp);
            points.push((coord(i) + dx, coord(j) + dy));
        }
    }
    points
}

fn bowyer_watson(points: &[(f64, f64)]) -> Result<Vec<[usize; 3]>, MeshError> {
    let n = points.len();
    let vert = |i: usize| if i < n { points[i] } else { SUPER[i - n] };

    let mut tris: Vec<[usize; 3]> = vec![[n, n + 1, n + 2]];
    let mut alive: Vec<bool> = vec![true];
    let mut dead = 0usize;
    let mut edges: Vec<(usize, usize)> = Vec::new();

    for (p_idx, &p) in points.iter().enumerate() {
        edges.clear();
        let mut found_bad = false;
        for t_idx in 0..tris.len() {
            if !alive[t_idx] {
                continue;
            }
            let [a, b, c] = tris[t_idx];
            if in_circumcircle(vert(a), vert(b), vert(c), p) {
                edges.push((a, b));
                edges.push((b, c));
                edges.push((c, a));
                alive[t_idx] = false;
                dead += 1;
                found_bad = true;
            }
        }
        if !found_bad {
            return Err(MeshError::TriangulationFailure {
                reason: format!("point {p_idx} lies in no circumcircle"),
            });
        }
        // The cavity boundary consists of the directed edges whose reverse
        // was not also removed; walking them in removal order keeps the
        // result deterministic.
        for &(u, v) in edges.iter() {
            if !edges.contains(&(v, u)) {
                tris.push([u, v, p_idx]);
                alive.push(true);
            }
        }
        if dead * 2 > tris.len() {
            let mut kept = Vec::with_capacity(tris.len() - dead);
            for (t_idx, t) in tris.iter().enumerate() {
                if alive[t_idx] {
                    kept.push(*t);
                }
            }
            tris = kept;
            alive = vec![true; tris.len()];
            dead = 0;
        }
    }

    let mut out: Vec<[usize; 3]> = tris
        .iter()
        .zip(&alive)
        .filter(|(t, &a)| a && t.iter().all(|&v| v < n))
        .map(|(t, _)| rotate_min_first(*t))
        .collect();
    out.sort_unstable();
    Ok(out)
}

/// Cyclic rotation putting the smallest vertex index first; preserves
/// orientation.
fn rotate_min_first(t: [usize; 3]) -> [usize; 3] {
    let [a, b, c] = t;
    if a < b && a < c {
        [a, b, c]
    } else if b < a && b < c {
        [b, c, a]
    } else {
        [c, a, b]
    }
}

/// Is `p` strictly inside the circumcircle of the counterclockwise triangle
/// (a, b, c)? Ties (cocircular points) count as outside.
pub(super) fn in_circumcircle(
    a: (f64, f64),
    b: (f64, f64),
    c: (f64, f64),
    p: (f64, f64),
) -> bool {
    let (adx, ady) = (a.0 - p.0, a.1 - p.1);
    let (bdx, bdy) = (b.0 - p.0, b.1 - p.1);
    let (cdx, cdy) = (c.0 - p.0, c.1 - p.1);
    let da = adx * adx + ady * ady;
    let db = bdx * bdx + bdy * bdy;
    let dc = cdx * cdx + cdy * cdy;

    let det = adx * (bdy * dc - db * cdy) - ady * (bdx * dc - db * cdx)
        + da * (bdx * cdy - bdy * cdx);
    let perm = adx.abs() * (bdy.abs() * dc + db * cdy.abs())
        + ady.abs() * (bdx.abs() * dc + db * cdx.abs())
        + da * (bdx.abs() * cdy.abs() + bdy.abs() * cdx.abs());

    if det.abs() > 32.0 * f64::EPSILON * perm {
        det > 0.0
    } else {
        in_circumcircle_qd(a, b, c, p)
    }
}

/// The same determinant with every coordinate lifted exactly to quad-double
/// before any subtraction, so cancellation cannot hide the sign.
fn in_circumcircle_qd(a: (f64, f64), b: (f64, f64), c: (f64, f64), p: (f64, f64)) -> bool {
    let q = Qd::from_f64;
    let (px, py) = (q(p.0), q(p.1));
    let (adx, ady) = (q(a.0) - px, q(a.1) - py);
    let (bdx, bdy) = (q(b.0) - px, q(b.1) - py);
    let (cdx, cdy) = (q(c.0) - px, q(c.1) - py);
    let da = adx * adx + ady * ady;
    let db = bdx * bdx + bdy * bdy;
    let dc = cdx * cdx + cdy * cdy;
    let det = adx * (bdy * dc - db * cdy) - ady * (bdx * dc - db * cdx)
        + da * (bdx * cdy - bdy * cdx);
    det > Qd::ZERO
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_count_matches_the_grid_formula() {
        for (k, base) in [(1, 5), (2, 5), (1, 15)] {
            let mesh = unstructured_mesh(k, base, 42).unwrap();
            let m = (base * k) as usize;
            assert_eq!(mesh.triangles.len(), 2 * m * m, "k={k} base={base}");
            assert_eq!(mesh.vertices.len(), (m + 1) * (m + 1));
        }
    }

    #[test]
    fn meshes_cover_the_square_and_stay_ccw() {
        let mesh = unstructured_mesh(2, 5, 42).unwrap();
        assert!((mesh.total_area() - 1.0).abs() < 1e-12);
        for t in 0..mesh.triangles.len() {
            assert!(mesh.triangle(t).signed_area() > 0.0);
        }
    }

    #[test]
    fn fixed_seeds_reproduce_bitwise() {
        let a = unstructured_mesh(1, 5, 123).unwrap();
        let b = unstructured_mesh(1, 5, 123).unwrap();
        assert_eq!(a, b);
        let c = unstructured_mesh(1, 5, 124).unwrap();
        assert_ne!(a.vertices, c.vertices);
    }

    #[test]
    fn every_circumcircle_is_empty() {
        let mesh = unstructured_mesh(1, 5, 42).unwrap();
        let pts: Vec<(f64, f64)> = mesh.vertices.iter().map(|v| (v.x, v.y)).collect();
        for tri in &mesh.triangles {
            let (a, b, c) = (pts[tri[0]], pts[tri[1]], pts[tri[2]]);
            for (i, &p) in pts.iter().enumerate() {
                if tri.contains(&i) {
                    continue;
                }
                assert!(
                    !strictly_inside_with_slack(a, b, c, p),
                    "vertex {i} violates the empty-circumcircle property of {tri:?}"
                );
            }
        }
    }

    /// A brute-force check ignoring violations within a relative 1e-9 of
    /// cocircularity — cocircular ties legitimately go either way.
    fn strictly_inside_with_slack(
        a: (f64, f64),
        b: (f64, f64),
        c: (f64, f64),
        p: (f64, f64),
    ) -> bool {
        let (adx, ady) = (a.0 - p.0, a.1 - p.1);
        let (bdx, bdy) = (b.0 - p.0, b.1 - p.1);
        let (cdx, cdy) = (c.0 - p.0, c.1 - p.1);
        let da = adx * adx + ady * ady;
        let db = bdx * bdx + bdy * bdy;
        let dc = cdx * cdx + cdy * cdy;
        let det = adx * (bdy * dc - db * cdy) - ady * (bdx * dc - db * cdx)
            + da * (bdx * cdy - bdy * cdx);
        let perm = adx.abs() * (bdy.abs() * dc + db * cdy.abs())
            + ady.abs() * (bdx.abs() * dc + db * cdx.abs())
            + da * (bdx.abs() * cdy.abs() + bdy.abs() * cdx.abs());
        det > 1e-9 * perm
    }

    #[test]
    fn interior_points_stay_inside_and_boundary_points_stay_exact() {
        let mesh = unstructured_mesh(1, 10, 7).unwrap();
        let m = 10;
        let mut on_boundary = 0;
        for v in &mesh.vertices {
            if v.x == 0.0 || v.x == 1.0 || v.y == 0.0 || v.y == 1.0 {
                on_boundary += 1;
            } else {
                assert!(v.x > 0.05 && v.x < 0.95 && v.y > 0.05 && v.y < 0.95);
            }
        }
        assert_eq!(on_boundary, 4 * m);
    }

    #[test]
    fn near_tie_in_circle_tests_agree_with_exact_evaluation() {
        // Four exactly cocircular points: the unit square's corners. The
        // strict test must call both orders outside.
        let a = (0.0, 0.0);
        let b = (1.0, 0.0);
        let c = (1.0, 1.0);
        let d = (0.0, 1.0);
        assert!(!in_circumcircle(a, b, c, d));
        assert!(!in_circumcircle(b, c, d, a));
        // A point nudged inside by one part in 10¹² is caught.
        let inside = (0.5, 1.0 - 1e-12);
        assert!(in_circumcircle(a, b, c, inside));
    }
}
