//! Points, triangles, and the barycentric/Cartesian mapping.

use crate::scalar::Real;
use thiserror::Error;

/// Geometry construction errors.
#[derive(Debug, Error)]
pub enum GeometryError {
    /// Barycentric weights do not sum to 1 within the mode tolerance.
    #[error("barycentric weights sum to 1{sum_deviation:+e}, outside tolerance")]
    BarycentricSum { sum_deviation: f64 },
}

/// A point in the Cartesian plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point2<R> {
    pub x: R,
    pub y: R,
}

impl<R: Real> Point2<R> {
    pub fn new(x: R, y: R) -> Self {
        Point2 { x, y }
    }
}

/// A location relative to a triangle, stored as all three barycentric
/// weights (λ₁, λ₂, λ₃).
///
/// The weights must sum to 1 within 8 units of the mode epsilon. Negative
/// components are allowed: they describe points outside the triangle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BarycentricPoint<R> {
    pub lambda: [R; 3],
}

impl<R: Real> BarycentricPoint<R> {
    /// Builds a barycentric point after checking the unit-sum invariant.
    pub fn new(lambda: [R; 3]) -> Result<Self, GeometryError> {
        let sum = lambda[0] + lambda[1] + lambda[2];
        let deviation = sum - R::one();
        if deviation.abs() > R::epsilon() * R::from_f64(8.0) {
            return Err(GeometryError::BarycentricSum {
                sum_deviation: deviation.to_f64(),
            });
        }
        Ok(BarycentricPoint { lambda })
    }

    /// The centroid (1/3, 1/3, 1/3).
    pub fn centroid() -> Self {
        let third = R::from_ratio(1, 3);
        BarycentricPoint {
            lambda: [third, third, third],
        }
    }
}

/// A triangle given by three Cartesian vertices.
///
/// The mesh generators and quadrature routines expect counterclockwise
/// orientation, i.e. `signed_area() > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Triangle<R> {
    pub v: [Point2<R>; 3],
}

impl<R: Real> Triangle<R> {
    pub fn new(v1: Point2<R>, v2: Point2<R>, v3: Point2<R>) -> Self {
        Triangle { v: [v1, v2, v3] }
    }

    /// The reference triangle (0,0), (1,0), (0,1) with area 1/2.
    pub fn reference() -> Self {
        Triangle::new(
            Point2::new(R::zero(), R::zero()),
            Point2::new(R::one(), R::zero()),
            Point2::new(R::zero(), R::one()),
        )
    }

    /// One half the cross product of the edge vectors; positive for
    /// counterclockwise vertices, zero for a degenerate triangle.
    pub fn signed_area(&self) -> R {
        let [a, b, c] = &self.v;
        ((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y)) * R::from_f64(0.5)
    }

    /// Longest edge length.
    pub fn diameter(&self) -> R {
        let [a, b, c] = &self.v;
        let sq = |p: &Point2<R>, q: &Point2<R>| {
            let dx = q.x - p.x;
            let dy = q.y - p.y;
            dx * dx + dy * dy
        };
        let m = R::max_by_value(sq(a, b), R::max_by_value(sq(b, c), sq(c, a)));
        m.sqrt()
    }

    /// Maps barycentric weights to the Cartesian point λ₁·v1 + λ₂·v2 + λ₃·v3.
    pub fn bary_to_cart(&self, b: &BarycentricPoint<R>) -> Point2<R> {
        let [l1, l2, l3] = b.lambda;
        let [a, p, q] = &self.v;
        Point2::new(
            l1 * a.x + l2 * p.x + l3 * q.x,
            l1 * a.y + l2 * p.y + l3 * q.y,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Qd;

    #[test]
    fn centroid_maps_to_cartesian_centroid() {
        let tri = Triangle::<f64>::reference();
        let c = tri.bary_to_cart(&BarycentricPoint::centroid());
        assert!((c.x - 1.0 / 3.0).abs() < 1e-15);
        assert!((c.y - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn vertex_weights_map_to_vertices() {
        let tri = Triangle::<f64>::reference();
        let b = BarycentricPoint::new([1.0, 0.0, 0.0]).unwrap();
        let p = tri.bary_to_cart(&b);
        assert_eq!((p.x, p.y), (0.0, 0.0));
    }

    #[test]
    fn affine_combination_matches_matrix_oracle() {
        // Independent check: x = V·λ with V the 2×3 vertex matrix.
        let tri = Triangle::new(
            Point2::new(2.0, 0.0),
            Point2::new(4.0, 0.0),
            Point2::new(2.0, 2.0),
        );
        let b = BarycentricPoint::new([0.25, 0.5, 0.25]).unwrap();
        let p = tri.bary_to_cart(&b);
        assert_eq!((p.x, p.y), (3.0, 0.5));

        let b2 = BarycentricPoint::new([0.5, 0.25, 0.25]).unwrap();
        let p2 = tri.bary_to_cart(&b2);
        assert_eq!((p2.x, p2.y), (2.5, 0.5));
    }

    #[test]
    fn reference_triangle_area_is_half() {
        assert_eq!(Triangle::<f64>::reference().signed_area(), 0.5);
        let double = Triangle::new(
            Point2::new(0.0, 0.0),
            Point2::new(2.0, 0.0),
            Point2::new(0.0, 2.0),
        );
        assert_eq!(double.signed_area(), 2.0);
        let collinear = Triangle::new(
            Point2::new(0.0, 0.0),
            Point2::new(1.0, 0.0),
            Point2::new(2.0, 0.0),
        );
        assert_eq!(collinear.signed_area(), 0.0);
    }

    #[test]
    fn signed_area_orientation() {
        let tri = Triangle::<f64>::reference();
        let swapped = Triangle::new(tri.v[0], tri.v[2], tri.v[1]);
        assert_eq!(swapped.signed_area(), -tri.signed_area());
        let rotated = Triangle::new(tri.v[1], tri.v[2], tri.v[0]);
        assert_eq!(rotated.signed_area(), tri.signed_area());
    }

    #[test]
    fn diameter_examples() {
        assert!((Triangle::<f64>::reference().diameter() - 2f64.sqrt()).abs() < 1e-15);
        let pythagorean = Triangle::new(
            Point2::new(0.0, 0.0),
            Point2::new(3.0, 0.0),
            Point2::new(0.0, 4.0),
        );
        assert_eq!(pythagorean.diameter(), 5.0);
    }

    #[test]
    fn barycentric_sum_is_checked() {
        assert!(BarycentricPoint::new([0.5, 0.5, 0.1]).is_err());
        assert!(BarycentricPoint::new([0.7, 0.4, -0.1]).is_ok());
        let q = BarycentricPoint::new([Qd::from_f64(0.25), Qd::from_f64(0.25), Qd::from_f64(0.5)]);
        assert!(q.is_ok());
    }

    #[test]
    fn extended_mode_mapping_matches_double() {
        let tri = Triangle::<Qd>::reference();
        let b = BarycentricPoint::new([
            Qd::from_f64(0.1),
            Qd::from_f64(0.6),
            Qd::from_ratio(3, 10),
        ]);
        // 0.1 + 0.6 as binary doubles miss 0.7 by more than 8·eps in
        // extended mode; build the complement instead.
        assert!(b.is_err());
        let l1 = Qd::from_ratio(1, 10);
        let l2 = Qd::from_ratio(6, 10);
        let b = BarycentricPoint::new([l1, l2, Qd::ONE - l1 - l2]).unwrap();
        let p = tri.bary_to_cart(&b);
        assert!((p.x.to_f64() - 0.6).abs() < 1e-15);
        assert!((p.y.to_f64() - 0.3).abs() < 1e-15);
    }
}
