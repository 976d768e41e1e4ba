//! Convergence studies: integrate the standard test function over a
//! refinement sequence, record per-level errors, and fit rates.

use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::integrand::standard_integrand;
use super::{
    estimate_rate, expected_rate, integrate_mesh, mode_rule, Integrand, LabError,
};
use crate::mesh::{nested_mesh, rotate_mesh, structured_mesh, unstructured_mesh, TriangleMesh};
use crate::rules::QuadratureRule;
use crate::scalar::{PrecisionMode, Real};
use crate::summation::CompensatedSum;

/// The family of meshes a study refines through.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sequence {
    /// Uniform grids on the unit square, optionally warped.
    Structured,
    /// Uniform k-fold subdivisions of one unstructured coarse mesh.
    NestedUnstructured,
    /// An independently generated unstructured mesh per level.
    IndependentUnstructured,
}

impl Sequence {
    pub fn name(&self) -> &'static str {
        match self {
            Sequence::Structured => "structured",
            Sequence::NestedUnstructured => "nested",
            Sequence::IndependentUnstructured => "independent",
        }
    }
}

impl FromStr for Sequence {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "structured" => Ok(Sequence::Structured),
            "nested" => Ok(Sequence::NestedUnstructured),
            "independent" | "unstructured" => Ok(Sequence::IndependentUnstructured),
            other => Err(format!(
                "unknown sequence '{other}' (expected structured, nested, or unstructured)"
            )),
        }
    }
}

/// Configuration for a convergence study. Levels k = 1..=k_max use meshes
/// of m = base·k divisions per side.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StudyPlan {
    pub sequence: Sequence,
    pub degree: u32,
    pub k_max: u32,
    pub base: u32,
    /// Interior-vertex warp amplitude for structured meshes.
    pub warp: f64,
    /// RNG seed: level k draws from seed+k, and the nested sequence builds
    /// its coarse mesh from the seed itself.
    pub seed: u64,
    /// Average each level over four quarter-turn rotations
    /// (independent-unstructured only).
    pub rotations: bool,
}

impl StudyPlan {
    /// A plan with the desk-scale defaults: base 5, no warp, seed 1, no
    /// rotation averaging.
    pub fn new(sequence: Sequence, degree: u32, k_max: u32) -> Self {
        StudyPlan {
            sequence,
            degree,
            k_max,
            base: 5,
            warp: 0.0,
            seed: 1,
            rotations: false,
        }
    }

    /// Checks every precondition without touching a mesh or a rule, so
    /// misconfigurations surface before any computation starts.
    pub fn validate(&self) -> Result<(), LabError> {
        let fail = |reason: String| Err(LabError::InvalidConfig { reason });
        if !(1..=11).contains(&self.degree) {
            return fail(format!("rule degree must lie in 1..=11 (got {})", self.degree));
        }
        if self.k_max == 0 {
            return fail("k_max must be at least 1".into());
        }
        if self.base == 0 {
            return fail("base must be at least 1".into());
        }
        if !(self.warp >= 0.0 && self.warp.is_finite()) {
            return fail(format!("warp must be finite and non-negative (got {})", self.warp));
        }
        if self.warp != 0.0 && self.sequence != Sequence::Structured {
            return fail("warp applies only to the structured sequence".into());
        }
        if self.rotations && self.sequence != Sequence::IndependentUnstructured {
            return fail(
                "rotation averaging applies only to the independent-unstructured sequence"
                    .into(),
            );
        }
        Ok(())
    }
}

/// One refinement level of a completed study.
#[derive(Debug, Clone)]
pub struct StudyLevel<R> {
    pub k: u32,
    /// Element count.
    pub n: usize,
    /// Characteristic size: 1/(base·k) for structured and nested meshes,
    /// the median element diameter for independent ones.
    pub h: R,
    pub i_tilde: R,
    /// Relative error |I − Ĩ| / |I|.
    pub epsilon: R,
    /// True when ε sits at the precision floor; such levels stay in the
    /// record but are excluded from the rate fit.
    pub dropped: bool,
    /// Signed relative errors of the four rotated copies, when rotation
    /// averaging is on.
    pub rotation_errors: Option<[R; 4]>,
}

/// A completed study: the plan, the per-level record sorted by k, and the
/// fitted rates.
#[derive(Debug, Clone)]
pub struct ConvergenceStudy<R> {
    pub plan: StudyPlan,
    pub precision: PrecisionMode,
    pub levels: Vec<StudyLevel<R>>,
    /// log(εᵢ/εᵢ₊₁)/log(hᵢ/hᵢ₊₁) for consecutive kept levels.
    pub fitted_rate_pairwise: Vec<f64>,
    /// Least-squares slope of log ε against log h over the kept levels.
    pub fitted_rate_global: f64,
}

impl<R> ConvergenceStudy<R> {
    pub fn rule_degree(&self) -> u32 {
        self.plan.degree
    }

    pub fn expected_rate(&self) -> u32 {
        expected_rate(self.plan.degree)
    }
}

/// Runs the study described by `plan` in the precision mode of `R`,
/// integrating the standard test function at every level and fitting
/// convergence rates to the levels that sit above the precision floor.
pub fn run_study<R: Real>(plan: &StudyPlan) -> Result<ConvergenceStudy<R>, LabError> {
    plan.validate()?;
    let rule = mode_rule::<R>(plan.degree)?;
    let f = standard_integrand::<R>();
    let exact = f.exact_integral.expect("standard integrand stores its integral");
    let scale = R::one() / exact.abs();

    let coarse: Option<TriangleMesh<R>> = match plan.sequence {
        Sequence::NestedUnstructured => {
            Some(unstructured_mesh(1, plan.base, plan.seed)?.lift())
        }
        _ => None,
    };

    let mut levels = Vec::with_capacity(plan.k_max as usize);
    for k in 1..=plan.k_max {
        let level = run_level(plan, &rule, &f, exact, scale, coarse.as_ref(), k)
            .map_err(|e| LabError::LevelFailure {
                k,
                source: Box::new(e),
            })?;
        levels.push(level);
    }

    flag_floor_levels(&mut levels);
    let kept: Vec<(R, R)> = levels
        .iter()
        .filter(|l| !l.dropped)
        .map(|l| (l.h, l.epsilon))
        .collect();
    let (fitted_rate_pairwise, fitted_rate_global) = estimate_rate(&kept)?;

    Ok(ConvergenceStudy {
        plan: plan.clone(),
        precision: R::MODE,
        levels,
        fitted_rate_pairwise,
        fitted_rate_global,
    })
}

fn run_level<R: Real>(
    plan: &StudyPlan,
    rule: &QuadratureRule<R>,
    f: &Integrand<R>,
    exact: R,
    scale: R,
    coarse: Option<&TriangleMesh<R>>,
    k: u32,
) -> Result<StudyLevel<R>, LabError> {
    let grid_h = || R::from_ratio(1, (plan.base as i64) * (k as i64));
    let (mesh, h) = match plan.sequence {
        Sequence::Structured => {
            let m = structured_mesh::<R>(k, plan.base, R::from_f64(plan.warp))?;
            (m, grid_h())
        }
        Sequence::NestedUnstructured => {
            let m = nested_mesh(coarse.expect("coarse mesh precomputed"), k)?;
            (m, grid_h())
        }
        Sequence::IndependentUnstructured => {
            let m = unstructured_mesh(k, plan.base, plan.seed + k as u64)?.lift();
            let h = m.median_diameter();
            (m, h)
        }
    };
    let n = mesh.triangles.len();

    if !plan.rotations {
        let i_tilde = integrate_mesh(&mesh, rule, f)?;
        let epsilon = (exact - i_tilde).abs() * scale;
        return Ok(StudyLevel {
            k,
            n,
            h,
            i_tilde,
            epsilon,
            dropped: false,
            rotation_errors: None,
        });
    }

    // Rotation averaging: integrate the four quarter-turn copies, record
    // their signed relative errors, and let the symmetric pollution terms
    // cancel in the mean.
    let mut errors = [R::zero(); 4];
    let mut acc = CompensatedSum::new();
    for (turn, slot) in errors.iter_mut().enumerate() {
        let rotated = rotate_mesh(&mesh, turn as u32);
        let value = integrate_mesh(&rotated, rule, f)?;
        *slot = (value - exact) * scale;
        acc.add(value);
    }
    let i_tilde = acc.value() * R::from_ratio(1, 4);
    let epsilon = (exact - i_tilde).abs() * scale;
    Ok(StudyLevel {
        k,
        n,
        h,
        i_tilde,
        epsilon,
        dropped: false,
        rotation_errors: Some(errors),
    })
}

/// Flags levels whose relative error is within two orders of magnitude of
/// the mode epsilon; rate fits over such levels measure round-off, not
/// convergence.
fn flag_floor_levels<R: Real>(levels: &mut [StudyLevel<R>]) {
    let floor = R::from_int(100) * R::epsilon();
    for level in levels {
        if level.epsilon < floor {
            level.dropped = true;
        }
    }
}
