//! The subdivision-ratio experiment: how much of the quadrature error one
//! uniform midpoint split removes, compared against the closed-form
//! prediction for a degree-`d` rule.

use super::oracle::cached_reference;
use super::{Integrand, LabError};
use crate::geometry::Triangle;
use crate::mesh::split4;
use crate::rules::{integrate_points_on_triangle, QuadratureRule};
use crate::scalar::Real;
use crate::summation::CompensatedSum;

/// One level of the experiment: triangles of diameter `h` and the signed
/// quadrature error `e` of the rule summed over them.
#[derive(Debug, Clone, Copy)]
pub struct RatioLevel<R> {
    pub h: R,
    pub e: R,
}

/// Measured error ratios e_{ℓ+1}/e_ℓ under repeated uniform splits, next
/// to the predicted limit (3 + (−1)^{d+1}) / 2^{d+3}.
#[derive(Debug, Clone)]
pub struct RatioExperiment<R> {
    pub rule_degree: u32,
    pub levels: Vec<RatioLevel<R>>,
    pub measured_ratios: Vec<R>,
    pub predicted_ratio: R,
}

/// Deepest level the experiment will expand to; level ℓ holds 4^ℓ
/// triangles, and 4⁹ already strains memory for extended scalars.
const MAX_LEVELS: u32 = 10;

/// Applies `rule` to `f` on `tri`, then on its four midpoint children,
/// then on sixteen grandchildren, and so on for `levels` levels, recording
/// the signed error against an adaptively computed reference at each
/// level and the ratio between consecutive errors.
///
/// Fails with [`LabError::ExactIntegration`] when the first-level error
/// already sits at the precision floor — the typical sign that `f` is a
/// polynomial within the rule's degree, leaving nothing to measure.
pub fn subdivision_ratio_experiment<R: Real>(
    rule: &QuadratureRule<R>,
    f: &Integrand<R>,
    tri: &Triangle<R>,
    levels: u32,
) -> Result<RatioExperiment<R>, LabError> {
    if !(2..=MAX_LEVELS).contains(&levels) {
        return Err(LabError::InvalidConfig {
            reason: format!("levels must lie in 2..={MAX_LEVELS} (got {levels})"),
        });
    }

    // In double mode the target subdivision tolerance is unreachable, so
    // the reference settles for what the mode can represent.
    let rock_bottom = R::parse_decimal("1e-30").unwrap_or_else(|_| R::epsilon());
    let tol = R::max_by_value(rock_bottom, R::from_int(100) * R::epsilon());
    let reference = cached_reference(f, tri, tol)?;

    let points = rule.points()?;
    let half = R::from_ratio(1, 2);
    let diameter = tri.diameter();

    let mut current = vec![*tri];
    let mut recorded = Vec::with_capacity(levels as usize);
    for level in 0..levels {
        let mut acc = CompensatedSum::new();
        for t in &current {
            acc.add(integrate_points_on_triangle(&points, t, |x, y| {
                f.eval(x, y)
            })?);
        }
        let e = acc.value() - reference;
        let h = diameter * R::from_ratio(1, 1 << level);
        recorded.push(RatioLevel { h, e });

        if level + 1 < levels {
            let mut next = Vec::with_capacity(4 * current.len());
            for t in &current {
                next.extend_from_slice(&split4(t, half, half, half));
            }
            current = next;
        }
    }

    let floor = R::from_int(100) * R::epsilon() * reference.abs();
    if recorded[0].e.abs() <= floor {
        return Err(LabError::ExactIntegration);
    }

    let measured_ratios = recorded
        .windows(2)
        .map(|w| w[1].e / w[0].e)
        .collect();
    let d = rule.degree;
    let numerator = if d % 2 == 1 { 4 } else { 2 };
    Ok(RatioExperiment {
        rule_degree: d,
        levels: recorded,
        measured_ratios,
        predicted_ratio: R::from_ratio(numerator, 1i64 << (d + 3)),
    })
}
