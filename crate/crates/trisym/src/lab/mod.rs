//! The convergence laboratory: test integrands, reference integrals,
//! mesh-level integration, rate fitting, and the subdivision-ratio
//! experiment.
//!
//! Everything runs in a caller-chosen precision mode. Double mode uses the
//! built-in rules as they are; extended mode re-polishes them once per
//! process (memoized) so that rule error sits far below quad-double
//! round-off instead of at the double-precision floor.

mod integrand;
mod oracle;
mod ratio;
mod report;
mod study;

pub use integrand::{closed_form_agreement, closed_form_integral, standard_integrand};
pub use oracle::{adaptive_reference, cached_reference};
pub use ratio::{subdivision_ratio_experiment, RatioExperiment, RatioLevel};
pub use report::{study_csv, study_plot, study_summary_json};
pub use study::{run_study, ConvergenceStudy, Sequence, StudyLevel, StudyPlan};

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use crate::mesh::{MeshError, TriangleMesh};
use crate::refine::refine_rule;
use crate::rules::{
    integrate_points_on_triangle, load_builtin_rule, QuadratureRule, RuleError,
};
use crate::scalar::{PrecisionMode, Qd, Real};
use crate::summation::CompensatedSum;

/// Laboratory failure modes.
#[derive(Debug, thiserror::Error)]
pub enum LabError {
    /// Rate fitting needs at least two usable levels.
    #[error("need at least two levels to fit a rate (got {got})")]
    InsufficientLevels { got: usize },
    /// An error value is exactly zero at working precision; rates are
    /// meaningless and the caller should switch modes.
    #[error("level {level} has zero error at working precision; switch modes")]
    ZeroError { level: usize },
    /// A mesh element was degenerate during integration.
    #[error("mesh element {element} is degenerate (signed area {area:e})")]
    DegenerateElement { element: usize, area: f64 },
    /// The adaptive reference did not reach its tolerance.
    #[error("adaptive reference failed: {reason}")]
    ReferenceFailure { reason: String },
    /// The rule integrates the function exactly at every level, so there
    /// are no error ratios to measure.
    #[error("the rule integrates this function exactly; no ratios to measure")]
    ExactIntegration,
    /// A study or experiment was configured outside its preconditions.
    #[error("invalid configuration: {reason}")]
    InvalidConfig { reason: String },
    /// Re-polishing a rule for extended mode failed.
    #[error("could not refine the degree-{degree} rule: {reason}")]
    RefineFailed { degree: u32, reason: String },
    /// A study level failed; the refinement index is attached.
    #[error("study level k={k}: {source}")]
    LevelFailure {
        k: u32,
        #[source]
        source: Box<LabError>,
    },
    #[error(transparent)]
    Rule(#[from] RuleError),
    #[error(transparent)]
    Mesh(#[from] MeshError),
}

/// A function to integrate over the plane, with an optional exact unit
/// square integral.
///
/// The `description` doubles as the identity under which adaptive reference
/// values are cached, so distinct integrands must carry distinct
/// descriptions. When `exact_integral` is set by [`standard_integrand`], it has
/// been checked once per process against the adaptive oracle in extended
/// mode; ad-hoc integrands built with [`Integrand::new`] are unchecked.
pub struct Integrand<R> {
    f: Box<dyn Fn(R, R) -> R + Send + Sync>,
    pub exact_integral: Option<R>,
    pub description: String,
}

impl<R: Real> Integrand<R> {
    pub fn new(
        description: impl Into<String>,
        exact_integral: Option<R>,
        f: impl Fn(R, R) -> R + Send + Sync + 'static,
    ) -> Self {
        Integrand {
            f: Box::new(f),
            exact_integral,
            description: description.into(),
        }
    }

    pub fn eval(&self, x: R, y: R) -> R {
        (self.f)(x, y)
    }
}

/// The theoretical convergence rate of the degree-`d` rule under uniform
/// refinement: `d+1` for odd `d`, but `d+2` for even `d`.
pub fn expected_rate(d: u32) -> u32 {
    if d % 2 == 0 {
        d + 2
    } else {
        d + 1
    }
}

/// Integrates `f` over every mesh element and accumulates the element
/// values with a compensated sum in element order, so the result is
/// bit-reproducible.
pub fn integrate_mesh<R: Real>(
    mesh: &TriangleMesh<R>,
    rule: &QuadratureRule<R>,
    f: &Integrand<R>,
) -> Result<R, LabError> {
    let points = rule.points()?;
    let mut acc = CompensatedSum::new();
    for t in 0..mesh.triangles.len() {
        let tri = mesh.triangle(t);
        match integrate_points_on_triangle(&points, &tri, |x, y| f.eval(x, y)) {
            Ok(v) => acc.add(v),
            Err(RuleError::DegenerateTriangle { area }) => {
                return Err(LabError::DegenerateElement { element: t, area })
            }
            Err(e) => return Err(e.into()),
        }
    }
    Ok(acc.value())
}

/// Fits convergence rates to `(h, ε)` pairs sorted by strictly decreasing
/// `h` with all ε > 0.
///
/// Returns the consecutive pairwise rates log(εᵢ/εᵢ₊₁)/log(hᵢ/hᵢ₊₁) and the
/// least-squares slope of log ε against log h. The fit runs in double
/// precision: rates carry no more meaning than that, and even ε values far
/// below the double floor keep accurate logarithms.
pub fn estimate_rate<R: Real>(levels: &[(R, R)]) -> Result<(Vec<f64>, f64), LabError> {
    if levels.len() < 2 {
        return Err(LabError::InsufficientLevels { got: levels.len() });
    }
    let mut logs = Vec::with_capacity(levels.len());
    for (i, (h, eps)) in levels.iter().enumerate() {
        let (h, eps) = (h.to_f64(), eps.to_f64());
        if !(eps > 0.0) {
            return Err(LabError::ZeroError { level: i });
        }
        debug_assert!(h > 0.0, "characteristic sizes must be positive");
        logs.push((h.ln(), eps.ln()));
    }
    for pair in logs.windows(2) {
        debug_assert!(pair[1].0 < pair[0].0, "h must strictly decrease");
    }

    let pairwise = logs
        .windows(2)
        .map(|w| (w[0].1 - w[1].1) / (w[0].0 - w[1].0))
        .collect();

    let n = logs.len() as f64;
    let mean_x = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mean_x) * (p.0 - mean_x)).sum();
    let sxy: f64 = logs.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    Ok((pairwise, sxy / sxx))
}

/// The quadrature rule appropriate to the precision mode of `R`: the
/// built-in double-precision rule as stored, or — in extended mode — that
/// rule re-polished to quad-double accuracy. Polished rules are memoized
/// per process in serialized form, so repeated studies share one
/// refinement.
pub fn mode_rule<R: Real>(degree: u32) -> Result<QuadratureRule<R>, LabError> {
    match R::MODE {
        PrecisionMode::Double => Ok(load_builtin_rule::<R>(degree)?),
        PrecisionMode::Extended => {
            static POLISHED: OnceLock<Mutex<HashMap<u32, serde_json::Value>>> = OnceLock::new();
            let cache = POLISHED.get_or_init(|| Mutex::new(HashMap::new()));
            let mut guard = cache.lock().expect("rule cache lock");
            if !guard.contains_key(&degree) {
                let seed = load_builtin_rule::<Qd>(degree)?;
                let tol = Qd::parse_decimal("1e-40").expect("constant parses");
                let (rule, _report) =
                    refine_rule(&seed, tol, 100).map_err(|e| LabError::RefineFailed {
                        degree,
                        reason: e.to_string(),
                    })?;
                guard.insert(degree, rule.to_json());
            }
            let value = guard.get(&degree).expect("just inserted");
            Ok(QuadratureRule::<R>::from_json(value)?)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{structured_mesh, unstructured_mesh};

    #[test]
    fn expected_rate_is_one_or_two_above_the_degree() {
        assert_eq!(expected_rate(3), 4);
        assert_eq!(expected_rate(4), 6);
        assert_eq!(expected_rate(11), 12);
        for d in 1..=11 {
            let gain = expected_rate(d) - d;
            assert_eq!(gain, if d % 2 == 0 { 2 } else { 1 });
        }
    }

    #[test]
    fn two_point_rate_is_the_log_ratio() {
        let (pairwise, global) = estimate_rate(&[(1.0, 1e-2), (0.1, 1e-4)]).unwrap();
        assert!((pairwise[0] - 2.0).abs() < 1e-12);
        assert!((global - 2.0).abs() < 1e-12);
    }

    #[test]
    fn synthetic_power_law_is_recovered_exactly() {
        let levels: Vec<(f64, f64)> = (1..=6)
            .map(|k| {
                let h = 1.0 / k as f64;
                (h, 3.7 * h.powi(4))
            })
            .collect();
        let (pairwise, global) = estimate_rate(&levels).unwrap();
        assert!((global - 4.0).abs() < 1e-12, "global {global}");
        for p in pairwise {
            assert!((p - 4.0).abs() < 1e-12);
        }
    }

    #[test]
    fn degenerate_rate_inputs_are_rejected() {
        assert!(matches!(
            estimate_rate(&[(1.0, 1e-3)]),
            Err(LabError::InsufficientLevels { got: 1 })
        ));
        assert!(matches!(
            estimate_rate(&[(1.0, 1e-3), (0.5, 0.0)]),
            Err(LabError::ZeroError { level: 1 })
        ));
    }

    #[test]
    fn constant_integrates_to_the_mesh_area() {
        let mesh = unstructured_mesh(1, 5, 42).unwrap();
        let rule = load_builtin_rule::<f64>(3).unwrap();
        let one = Integrand::new("1", Some(1.0), |_, _| 1.0);
        let v = integrate_mesh(&mesh, &rule, &one).unwrap();
        assert!((v - 1.0).abs() < 1e-12);
    }

    #[test]
    fn degree_four_rule_is_exact_for_a_degree_four_monomial() {
        // ∫∫ x²y² over the unit square = 1/9, and the mesh is polynomial-
        // exact piecewise, so only round-off remains.
        let mesh = structured_mesh::<f64>(1, 3, 0.0).unwrap();
        let rule = load_builtin_rule::<f64>(4).unwrap();
        let f = Integrand::new("x2y2", Some(1.0 / 9.0), |x, y| x * x * y * y);
        let v = integrate_mesh(&mesh, &rule, &f).unwrap();
        assert!((v - 1.0 / 9.0).abs() < 1e-12, "got {v}");
    }

    #[test]
    fn degenerate_elements_carry_their_index() {
        let mut mesh = unstructured_mesh(1, 2, 1).unwrap();
        // collapse one triangle
        let [a, b, _] = mesh.triangles[3];
        mesh.triangles[3] = [a, b, a];
        let rule = load_builtin_rule::<f64>(2).unwrap();
        let one = Integrand::new("1", None, |_, _| 1.0);
        match integrate_mesh(&mesh, &rule, &one) {
            Err(LabError::DegenerateElement { element: 3, .. }) => {}
            other => panic!("expected a degenerate element error, got {other:?}"),
        }
    }

    #[test]
    fn mode_rules_verify_at_their_mode_tolerance() {
        let d = 6u32;
        let double = mode_rule::<f64>(d).unwrap();
        let tol = 1e-13;
        assert_eq!(
            double.verify_degree(tol).unwrap().achieved_degree,
            Some(d)
        );
        let extended = mode_rule::<Qd>(d).unwrap();
        let tol = Qd::parse_decimal("1e-28").unwrap();
        assert_eq!(
            extended.verify_degree(tol).unwrap().achieved_degree,
            Some(d)
        );
    }
}
