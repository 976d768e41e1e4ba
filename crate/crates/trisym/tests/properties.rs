//! Property suites: orbit expansion invariants on randomly drawn
//! parameters, the moment formula against an independent symbolic route,
//! affine covariance of rule application, and bit-level determinism of the
//! generators.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use trisym::geometry::{Point2, Triangle};
use trisym::mesh::unstructured_mesh;
use trisym::rules::{load_builtin_rule, monomial_moment, Orbit, QuadratureRule};

fn orbit_rule(orbits: Vec<Orbit<f64>>) -> QuadratureRule<f64> {
    QuadratureRule { degree: 1, orbits }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    // A three-point orbit expands to the three distinct permutations of
    // (λ₁, (1−λ₁)/2, (1−λ₁)/2), every one summing to 1 and carrying the
    // orbit weight.
    #[test]
    fn type1_expansion_invariants(lambda1 in 1e-4..0.999f64, weight in 0.01..1.0f64) {
        prop_assume!((lambda1 - 1.0 / 3.0).abs() > 1e-6);
        let rule = orbit_rule(vec![Orbit::Type1 { lambda1, weight }]);
        let points = rule.points().unwrap();
        prop_assert_eq!(points.len(), 3);
        let other = (1.0 - lambda1) / 2.0;
        for (b, w) in &points {
            prop_assert_eq!(*w, weight);
            prop_assert!((b.lambda.iter().sum::<f64>() - 1.0).abs() < 1e-15);
            let mut sorted = b.lambda.to_vec();
            sorted.sort_by(f64::total_cmp);
            let mut expected = vec![lambda1, other, other];
            expected.sort_by(f64::total_cmp);
            prop_assert_eq!(sorted, expected);
        }
        // all three positions of λ₁ occur
        for slot in 0..3 {
            prop_assert!(points.iter().any(|(b, _)| b.lambda[slot] == lambda1));
        }
    }

    // A six-point orbit expands to all six permutations, emitted in
    // descending lexicographic order.
    #[test]
    fn type2_expansion_invariants(lambda1 in 1e-4..0.9f64, t in 1e-3..0.999f64, weight in 0.01..1.0f64) {
        let lambda2 = (1.0 - lambda1) * t;
        let lambda3 = 1.0 - lambda1 - lambda2;
        prop_assume!(lambda2 > 1e-4 && lambda3 > 1e-4);
        prop_assume!((lambda1 - lambda2).abs() > 1e-6);
        prop_assume!((lambda2 - lambda3).abs() > 1e-6);
        prop_assume!((lambda1 - lambda3).abs() > 1e-6);
        let rule = orbit_rule(vec![Orbit::Type2 { lambda1, lambda2, weight }]);
        let points = rule.points().unwrap();
        prop_assert_eq!(points.len(), 6);
        for pair in points.windows(2) {
            let (a, b) = (&pair[0].0.lambda, &pair[1].0.lambda);
            prop_assert!(a.as_slice() > b.as_slice(), "not descending: {a:?} then {b:?}");
        }
        for (b, w) in &points {
            prop_assert_eq!(*w, weight);
            let mut sorted = b.lambda.to_vec();
            sorted.sort_by(f64::total_cmp);
            let mut expected = vec![lambda1, lambda2, lambda3];
            expected.sort_by(f64::total_cmp);
            prop_assert_eq!(sorted, expected);
        }
    }

    // Expanding the same rule twice yields bit-identical points.
    #[test]
    fn expansion_is_deterministic(lambda1 in 1e-4..0.999f64, weight in 0.01..1.0f64) {
        prop_assume!((lambda1 - 1.0 / 3.0).abs() > 1e-6);
        let rule = orbit_rule(vec![Orbit::Type1 { lambda1, weight }]);
        let a = rule.points().unwrap();
        let b = rule.points().unwrap();
        for ((pa, wa), (pb, wb)) in a.iter().zip(&b) {
            prop_assert_eq!(pa.lambda, pb.lambda);
            prop_assert_eq!(wa, wb);
        }
    }
}

fn binomial(n: u32, k: u32) -> BigInt {
    let mut c = BigInt::from(1);
    for i in 0..k {
        c = c * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    c
}

/// Independent symbolic route to ∫∫ x^p·y^q over the reference triangle:
/// integrate out y, expand (1−x)^{q+1} binomially, and integrate term by
/// term, all in exact rational arithmetic.
fn moment_by_binomial_sum(p: u32, q: u32) -> BigRational {
    let mut sum = BigRational::zero();
    for j in 0..=(q + 1) {
        let term = BigRational::new(
            binomial(q + 1, j),
            BigInt::from(q + 1) * BigInt::from(p + j + 1),
        );
        if j % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    sum
}

#[test]
fn moment_formula_matches_the_symbolic_route_for_all_degrees_up_to_twelve() {
    for p in 0..=12 {
        for q in 0..=(12 - p) {
            let m = monomial_moment(p, q).unwrap();
            let closed = BigRational::new(
                BigInt::from(m.numerator),
                BigInt::from(m.denominator),
            );
            assert_eq!(closed, moment_by_binomial_sum(p, q), "p={p} q={q}");
        }
    }
}

/// Rule application commutes with orientation-preserving affine maps:
/// applying the rule to f on the mapped triangle equals det·(the rule
/// applied to f∘T on the original), exactly as algebra and to round-off in
/// floating point.
#[test]
fn rule_application_is_affine_covariant_over_a_hundred_random_maps() {
    let rule = load_builtin_rule::<f64>(5).unwrap();
    let f = |x: f64, y: f64| (0.7 * x - 0.3 * y).sin() + x * y + 0.25;
    let tri = Triangle::new(
        Point2::new(0.1, -0.2),
        Point2::new(1.3, 0.4),
        Point2::new(0.2, 1.1),
    );
    let reference = rule.integrate_on_triangle(&tri, f).unwrap();

    let mut rng = ChaCha8Rng::seed_from_u64(100);
    let mut checked = 0;
    while checked < 100 {
        let mut c = || rng.gen_range(-2.0..2.0f64);
        let (a, b, cc, d, tx, ty) = (c(), c(), c(), c(), c(), c());
        let det = a * d - b * cc;
        if det < 0.05 {
            continue;
        }
        let map = |p: &Point2<f64>| Point2::new(a * p.x + b * p.y + tx, cc * p.x + d * p.y + ty);
        let mapped = Triangle::new(map(&tri.v[0]), map(&tri.v[1]), map(&tri.v[2]));

        let lhs = rule.integrate_on_triangle(&mapped, f).unwrap();
        let pulled_back = |x: f64, y: f64| f(a * x + b * y + tx, cc * x + d * y + ty);
        let rhs = det * rule.integrate_on_triangle(&tri, pulled_back).unwrap();
        assert!(
            (lhs - rhs).abs() <= 1e-12 * (1.0 + lhs.abs()),
            "map {checked}: {lhs} vs {rhs}"
        );
        checked += 1;
    }

    // the original integral was not disturbed by any of this
    assert_eq!(rule.integrate_on_triangle(&tri, f).unwrap(), reference);
}

#[test]
fn mesh_generation_is_bit_deterministic() {
    let a = unstructured_mesh(2, 5, 12345).unwrap();
    let b = unstructured_mesh(2, 5, 12345).unwrap();
    assert_eq!(a.triangles, b.triangles);
    for (pa, pb) in a.vertices.iter().zip(&b.vertices) {
        assert_eq!(pa.x.to_bits(), pb.x.to_bits());
        assert_eq!(pa.y.to_bits(), pb.y.to_bits());
    }
}
