//! Triangle meshes over the unit square: structured (warped) grids, nested
//! refinements of a coarse mesh, and independently generated unstructured
//! Delaunay meshes, plus quarter-turn rotations and the four-way split.
//!
//! Every generator is deterministic. Structured and nested meshes are pure
//! functions of their inputs; the unstructured generator draws from a seeded
//! ChaCha stream, so a `(k, base, seed)` triple names one mesh forever.

mod delaunay;
mod io;

pub use delaunay::unstructured_mesh;
pub use io::MeshMetadata;

use std::collections::HashMap;

use crate::geometry::{Point2, Triangle};
use crate::scalar::Real;
use crate::summation::CompensatedSum;

/// How a mesh came to be.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Structured,
    NestedUnstructured,
    IndependentUnstructured,
    Rotated,
    Synthetic,
}

/// Mesh construction or parsing failure.
#[derive(Debug, Clone, thiserror::Error)]
pub enum MeshError {
    /// `k` and `base` must both be at least 1.
    #[error("mesh level parameters must be at least 1 (k={k}, base={base})")]
    InvalidLevel { k: u32, base: u32 },
    /// The warp must be nonnegative and small enough that every warped
    /// triangle keeps positive area.
    #[error("warp {warp} breaks the mesh map: some triangle loses positive area")]
    WarpTooLarge { warp: f64 },
    /// Delaunay construction hit a degeneracy it could not resolve.
    #[error("triangulation failed: {reason}")]
    TriangulationFailure { reason: String },
    /// The mesh text form could not be parsed.
    #[error("bad mesh text at line {line}: {reason}")]
    BadFormat { line: usize, reason: String },
}

/// A triangulation: vertex coordinates plus vertex-index triples.
///
/// All triangles are counterclockwise (positive signed area), and distinct
/// vertices never coincide. Unit-square meshes cover the square exactly, so
/// their signed areas sum to 1 up to rounding.
#[derive(Debug, Clone, PartialEq)]
pub struct TriangleMesh<R> {
    pub vertices: Vec<Point2<R>>,
    pub triangles: Vec<[usize; 3]>,
    pub provenance: Provenance,
}

impl<R: Real> TriangleMesh<R> {
    /// The `index`-th triangle with its vertex coordinates resolved.
    pub fn triangle(&self, index: usize) -> Triangle<R> {
        let [a, b, c] = self.triangles[index];
        Triangle::new(self.vertices[a], self.vertices[b], self.vertices[c])
    }

    /// Sum of signed triangle areas (compensated).
    pub fn total_area(&self) -> R {
        (0..self.triangles.len())
            .map(|i| self.triangle(i).signed_area())
            .collect::<CompensatedSum<R>>()
            .value()
    }

    /// Median of the triangle diameters; the characteristic size `h` for
    /// meshes without a uniform cell size. Even counts average the two
    /// middle values.
    pub fn median_diameter(&self) -> R {
        let mut d: Vec<R> = (0..self.triangles.len())
            .map(|i| self.triangle(i).diameter())
            .collect();
        assert!(!d.is_empty(), "mesh has no triangles");
        d.sort_by(|a, b| a.partial_cmp(b).expect("diameters are ordered"));
        let n = d.len();
        if n % 2 == 1 {
            d[n / 2]
        } else {
            (d[n / 2 - 1] + d[n / 2]) / R::from_int(2)
        }
    }
}

impl TriangleMesh<f64> {
    /// Embeds a double-precision mesh into another scalar type exactly.
    pub fn lift<R: Real>(&self) -> TriangleMesh<R> {
        TriangleMesh {
            vertices: self
                .vertices
                .iter()
                .map(|p| Point2::new(R::from_f64(p.x), R::from_f64(p.y)))
                .collect(),
            triangles: self.triangles.clone(),
            provenance: self.provenance,
        }
    }
}

/// One rung of a mesh sequence: refinement index, triangle count, and
/// characteristic size. Structured and nested sequences satisfy
/// `n = n_base·k²` and `h = h_base/k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeshLevel<R> {
    pub k: u32,
    pub n: usize,
    pub h: R,
}

/// A uniform `(base·k)²`-cell grid on the unit square, each cell split into
/// two triangles, pushed through the warp map
///
/// ```text
/// T(x, y) = (x + s, y + s),   s = warp · sin(2πx) · sin(2πy)
/// ```
///
/// The warp field vanishes on the square's boundary, so boundary vertices
/// stay put; interior vertices shift along the diagonal, which breaks the
/// grid's symmetries while keeping the domain exactly the unit square.
/// `warp = 0` gives the plain uniform triangulation.
pub fn structured_mesh<R: Real>(k: u32, base: u32, warp: R) -> Result<TriangleMesh<R>, MeshError> {
    if k == 0 || base == 0 {
        return Err(MeshError::InvalidLevel { k, base });
    }
    if warp < R::zero() {
        return Err(MeshError::WarpTooLarge {
            warp: warp.to_f64(),
        });
    }
    let m = base as usize * k as usize;
    let mp1 = m + 1;

    let mut vertices = Vec::with_capacity(mp1 * mp1);
    for i in 0..=m {
        let x = R::from_ratio(i as i64, m as i64);
        for j in 0..=m {
            let y = R::from_ratio(j as i64, m as i64);
            let interior = i > 0 && i < m && j > 0 && j < m;
            if interior && warp > R::zero() {
                let s = warp * (R::two_pi() * x).sin() * (R::two_pi() * y).sin();
                vertices.push(Point2::new(x + s, y + s));
            } else {
                vertices.push(Point2::new(x, y));
            }
        }
    }

    let idx = |i: usize, j: usize| i * mp1 + j;
    let mut triangles = Vec::with_capacity(2 * m * m);
    for i in 0..m {
        for j in 0..m {
            triangles.push([idx(i, j), idx(i + 1, j), idx(i + 1, j + 1)]);
            triangles.push([idx(i, j), idx(i + 1, j + 1), idx(i, j + 1)]);
        }
    }

    let mesh = TriangleMesh {
        vertices,
        triangles,
        provenance: Provenance::Structured,
    };
    if warp > R::zero() {
        for t in 0..mesh.triangles.len() {
            if !(mesh.triangle(t).signed_area() > R::zero()) {
                return Err(MeshError::WarpTooLarge {
                    warp: warp.to_f64(),
                });
            }
        }
    }
    Ok(mesh)
}

/// Refines every triangle of `coarse` into `k²` similar subtriangles by
/// k-secting its edges. Vertices shared between neighbouring coarse
/// triangles are deduplicated exactly (by index, never by coordinate
/// comparison), so the refined mesh is conforming whenever the coarse mesh
/// is. `k = 1` returns the input unchanged.
pub fn nested_mesh<R: Real>(coarse: &TriangleMesh<R>, k: u32) -> Result<TriangleMesh<R>, MeshError> {
    if k == 0 {
        return Err(MeshError::InvalidLevel { k, base: 1 });
    }
    let kk = k as usize;
    let mut vertices = coarse.vertices.clone();
    let mut triangles = Vec::with_capacity(coarse.triangles.len() * kk * kk);
    // (low vertex, high vertex, steps from low) -> refined vertex index
    let mut edge_nodes: HashMap<(usize, usize, usize), usize> = HashMap::new();

    let w = kk + 1;
    let mut node = vec![usize::MAX; w * w];
    for tri in &coarse.triangles {
        let [i0, i1, i2] = *tri;
        let (v0, v1, v2) = (vertices[i0], vertices[i1], vertices[i2]);
        // Lattice point (a, b) sits at v0 + (a/k)(v1−v0) + (b/k)(v2−v0).
        for a in 0..=kk {
            for b in 0..=(kk - a) {
                node[a * w + b] = if a == 0 && b == 0 {
                    i0
                } else if a == kk {
                    i1
                } else if b == kk {
                    i2
                } else if b == 0 {
                    edge_node(&mut vertices, &mut edge_nodes, i0, i1, a, kk)
                } else if a == 0 {
                    edge_node(&mut vertices, &mut edge_nodes, i0, i2, b, kk)
                } else if a + b == kk {
                    edge_node(&mut vertices, &mut edge_nodes, i1, i2, b, kk)
                } else {
                    let fa = R::from_ratio(a as i64, kk as i64);
                    let fb = R::from_ratio(b as i64, kk as i64);
                    vertices.push(Point2::new(
                        v0.x + fa * (v1.x - v0.x) + fb * (v2.x - v0.x),
                        v0.y + fa * (v1.y - v0.y) + fb * (v2.y - v0.y),
                    ));
                    vertices.len() - 1
                };
            }
        }
        for a in 0..kk {
            for b in 0..(kk - a) {
                triangles.push([node[a * w + b], node[(a + 1) * w + b], node[a * w + b + 1]]);
                if a + b + 2 <= kk {
                    triangles.push([
                        node[(a + 1) * w + b],
                        node[(a + 1) * w + b + 1],
                        node[a * w + b + 1],
                    ]);
                }
            }
        }
    }

    Ok(TriangleMesh {
        vertices,
        triangles,
        provenance: if k == 1 {
            coarse.provenance
        } else {
            Provenance::NestedUnstructured
        },
    })
}

/// A point `steps/k` of the way from `from` to `to`, created once per
/// undirected edge and reused by every triangle that touches the edge.
fn edge_node<R: Real>(
    vertices: &mut Vec<Point2<R>>,
    cache: &mut HashMap<(usize, usize, usize), usize>,
    from: usize,
    to: usize,
    steps: usize,
    k: usize,
) -> usize {
    let (lo, hi, s) = if from < to {
        (from, to, steps)
    } else {
        (to, from, k - steps)
    };
    if let Some(&id) = cache.get(&(lo, hi, s)) {
        return id;
    }
    let f = R::from_ratio(s as i64, k as i64);
    let (p, q) = (vertices[lo], vertices[hi]);
    vertices.push(Point2::new(p.x + f * (q.x - p.x), p.y + f * (q.y - p.y)));
    let id = vertices.len() - 1;
    cache.insert((lo, hi, s), id);
    id
}

/// Rotates the mesh about the square's center (1/2, 1/2) by
/// `quarter_turns` 90° steps (taken modulo 4). One step maps (x, y) to
/// (1−y, x). Connectivity and orientation are untouched.
pub fn rotate_mesh<R: Real>(mesh: &TriangleMesh<R>, quarter_turns: u32) -> TriangleMesh<R> {
    let qt = quarter_turns % 4;
    let one = R::one();
    let mut vertices = mesh.vertices.clone();
    for _ in 0..qt {
        for v in &mut vertices {
            *v = Point2::new(one - v.y, v.x);
        }
    }
    TriangleMesh {
        vertices,
        triangles: mesh.triangles.clone(),
        provenance: if qt == 0 {
            mesh.provenance
        } else {
            Provenance::Rotated
        },
    }
}

/// Splits a triangle into four by the edge points with barycentric
/// coordinates (α, 0, 1−α), (0, β, 1−β), and (γ, 1−γ, 0), all of which must
/// lie strictly inside their edges (0 < α, β, γ < 1).
///
/// The three corner subtriangles come first, in vertex order, and the inner
/// subtriangle last. Their area fractions are (1−α)(1−γ), γ(1−β), αβ, and
/// βγ + α(1−β−γ); at α = β = γ = 1/2 the split is the medial one and every
/// fraction is 1/4. Orientation is preserved.
pub fn split4<R: Real>(tri: &Triangle<R>, alpha: R, beta: R, gamma: R) -> [Triangle<R>; 4] {
    for t in [alpha, beta, gamma] {
        debug_assert!(
            t > R::zero() && t < R::one(),
            "edge fractions must lie strictly inside (0, 1)"
        );
    }
    let [v1, v2, v3] = tri.v;
    let pa = lerp(v3, v1, alpha);
    let pb = lerp(v3, v2, beta);
    let pc = lerp(v2, v1, gamma);
    [
        Triangle::new(v1, pc, pa),
        Triangle::new(pc, v2, pb),
        Triangle::new(pa, pb, v3),
        Triangle::new(pb, pa, pc),
    ]
}

fn lerp<R: Real>(p: Point2<R>, q: Point2<R>, t: R) -> Point2<R> {
    Point2::new(p.x + t * (q.x - p.x), p.y + t * (q.y - p.y))
}
