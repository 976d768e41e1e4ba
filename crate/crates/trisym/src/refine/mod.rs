//! Refinement of seed rules to extended precision.
//!
//! A rule of degree d must reproduce the exact moments of all monomials
//! x^p·y^q with p+q ≤ d. Starting from a double-precision seed, a damped
//! Gauss–Newton (Levenberg–Marquardt) iteration drives the moment
//! residuals from the seed's ~1e-16 down to the extended-precision floor,
//! keeping the orbit structure fixed throughout.

mod linalg;

use crate::rules::{monomial_moment, Orbit, OrbitKind, QuadratureRule, RuleError};
use crate::scalar::Real;
use linalg::Matrix;
use thiserror::Error;

/// Errors from moment-system evaluation and refinement.
#[derive(Debug, Error)]
pub enum RefineError<R: Real> {
    /// The unknown vector does not match the system layout.
    #[error("unknown vector has length {got}, system expects {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    /// Iteration exhausted `max_iter` without meeting the tolerance.
    #[error("no convergence after {} iterations (residual {})", report.iterations, report.final_residual_norm)]
    NoConvergence { report: RefinementReport<R> },
    /// An orbit collapsed during iteration (Type1 onto the centroid, or a
    /// Type2 permutation collision).
    #[error("orbit {orbit_index} degenerated during iteration")]
    StructureLost { orbit_index: usize },
    /// Moment or expansion failure bubbling up from the rule layer.
    #[error(transparent)]
    Rule(#[from] RuleError),
}

/// Convergence summary of one [`refine_rule`] run.
#[derive(Debug, Clone)]
pub struct RefinementReport<R> {
    pub initial_residual_norm: R,
    pub final_residual_norm: R,
    /// Euclidean norm of the last accepted step (zero when none was taken).
    pub final_step_norm: R,
    pub iterations: u32,
    pub converged: bool,
}

/// The nonlinear least-squares system "rule moments = exact moments" for a
/// fixed degree and orbit structure.
///
/// Unknowns are packed orbit by orbit: Type0 contributes its weight,
/// Type1 (λ₁, w), Type2 (λ₁, λ₂, w). Residuals carry one entry per
/// monomial p+q ≤ d in lexicographic (p, q) order.
pub struct MomentSystem {
    degree: u32,
    structure: Vec<OrbitKind>,
}

impl MomentSystem {
    pub fn for_rule<R: Real>(rule: &QuadratureRule<R>) -> Self {
        MomentSystem {
            degree: rule.degree,
            structure: rule.orbits.iter().map(Orbit::kind).collect(),
        }
    }

    /// Number of packed unknowns: n₀ + 2·n₁ + 3·n₂.
    pub fn unknown_count(&self) -> usize {
        self.structure
            .iter()
            .map(|k| match k {
                OrbitKind::Type0 => 1,
                OrbitKind::Type1 => 2,
                OrbitKind::Type2 => 3,
            })
            .sum()
    }

    /// Number of residual entries: (d+1)(d+2)/2.
    pub fn residual_dim(&self) -> usize {
        let d = self.degree as usize;
        (d + 1) * (d + 2) / 2
    }

    /// Flattens a rule's parameters and weights into the unknown vector.
    pub fn pack<R: Real>(&self, rule: &QuadratureRule<R>) -> Vec<R> {
        let mut x = Vec::with_capacity(self.unknown_count());
        for orbit in &rule.orbits {
            match *orbit {
                Orbit::Type0 { weight } => x.push(weight),
                Orbit::Type1 { lambda1, weight } => {
                    x.push(lambda1);
                    x.push(weight);
                }
                Orbit::Type2 {
                    lambda1,
                    lambda2,
                    weight,
                } => {
                    x.push(lambda1);
                    x.push(lambda2);
                    x.push(weight);
                }
            }
        }
        x
    }

    /// Rebuilds a rule from an unknown vector (inverse of [`Self::pack`]).
    pub fn unpack<R: Real>(&self, x: &[R]) -> Result<QuadratureRule<R>, RefineError<R>> {
        self.check_len(x)?;
        let mut orbits = Vec::with_capacity(self.structure.len());
        let mut i = 0;
        for kind in &self.structure {
            match kind {
                OrbitKind::Type0 => {
                    orbits.push(Orbit::Type0 { weight: x[i] });
                    i += 1;
                }
                OrbitKind::Type1 => {
                    orbits.push(Orbit::Type1 {
                        lambda1: x[i],
                        weight: x[i + 1],
                    });
                    i += 2;
                }
                OrbitKind::Type2 => {
                    orbits.push(Orbit::Type2 {
                        lambda1: x[i],
                        lambda2: x[i + 1],
                        weight: x[i + 2],
                    });
                    i += 3;
                }
            }
        }
        Ok(QuadratureRule {
            degree: self.degree,
            orbits,
        })
    }

    fn check_len<R: Real>(&self, x: &[R]) -> Result<(), RefineError<R>> {
        if x.len() != self.unknown_count() {
            return Err(RefineError::DimensionMismatch {
                expected: self.unknown_count(),
                got: x.len(),
            });
        }
        Ok(())
    }

    /// Residuals r_pq = Σᵢ wᵢ·λ₂ᵢ^p·λ₃ᵢ^q − m(p,q)/A_ref.
    pub fn moment_residuals<R: Real>(&self, x: &[R]) -> Result<Vec<R>, RefineError<R>> {
        self.check_len(x)?;
        let mut r = vec![R::zero(); self.residual_dim()];
        self.accumulate(x, &mut r, None)?;
        let mut idx = 0;
        for p in 0..=self.degree {
            for q in 0..=(self.degree - p) {
                let exact = monomial_moment(p, q)?.value_over_reference::<R>();
                r[idx] = r[idx] - exact;
                idx += 1;
            }
        }
        Ok(r)
    }

    /// Analytic Jacobian ∂r/∂x, row per monomial, column per unknown.
    pub fn residual_jacobian<R: Real>(&self, x: &[R]) -> Result<Matrix<R>, RefineError<R>> {
        self.check_len(x)?;
        let mut jac = Matrix::zeros(self.residual_dim(), self.unknown_count());
        self.accumulate(x, &mut [], Some(&mut jac))?;
        Ok(jac)
    }

    /// Shared evaluation walk: adds each orbit's weighted monomial sums
    /// into `values` and/or its partial derivatives into `jac`.
    fn accumulate<R: Real>(
        &self,
        x: &[R],
        values: &mut [R],
        mut jac: Option<&mut Matrix<R>>,
    ) -> Result<(), RefineError<R>> {
        let half = R::from_f64(0.5);
        let mut col = 0;
        for kind in &self.structure {
            // Per-point slot variables (the values placed in the λ₂ and λ₃
            // positions) and their derivatives w.r.t. this orbit's
            // parameter columns.
            let (vars, dvars, perms, w, n_params): (Vec<R>, Vec<[R; 2]>, &[[usize; 3]], R, usize) =
                match kind {
                    OrbitKind::Type0 => {
                        let third = R::from_ratio(1, 3);
                        (vec![third], vec![[R::zero(), R::zero()]], &[[0, 0, 0]], x[col], 0)
                    }
                    OrbitKind::Type1 => {
                        let l1 = x[col];
                        let mu = (R::one() - l1) * half;
                        (
                            vec![l1, mu],
                            vec![[R::one(), R::zero()], [-half, R::zero()]],
                            &[[0, 1, 1], [1, 0, 1], [1, 1, 0]],
                            x[col + 1],
                            1,
                        )
                    }
                    OrbitKind::Type2 => {
                        let l1 = x[col];
                        let l2 = x[col + 1];
                        let l3 = R::one() - l1 - l2;
                        (
                            vec![l1, l2, l3],
                            vec![
                                [R::one(), R::zero()],
                                [R::zero(), R::one()],
                                [-R::one(), -R::one()],
                            ],
                            &[
                                [0, 1, 2],
                                [0, 2, 1],
                                [1, 0, 2],
                                [1, 2, 0],
                                [2, 0, 1],
                                [2, 1, 0],
                            ],
                            x[col + 2],
                            2,
                        )
                    }
                };
            let w_col = col + n_params;

            let mut row = 0;
            for p in 0..=self.degree {
                for q in 0..=(self.degree - p) {
                    let mut sum = R::zero();
                    let mut dsum = [R::zero(), R::zero()];
                    for perm in perms {
                        let a = vars[perm[1]];
                        let b = vars[perm[2]];
                        let ap = a.powi(p as i32);
                        let bq = b.powi(q as i32);
                        sum = sum + ap * bq;
                        if jac.is_some() {
                            // d(a^p·b^q)/dparam via the chain rule through
                            // both slots.
                            let da = dvars[perm[1]];
                            let db = dvars[perm[2]];
                            for (t, term) in dsum.iter_mut().enumerate() {
                                let mut g = R::zero();
                                if p > 0 {
                                    g = g + R::from_int(p as i64)
                                        * a.powi(p as i32 - 1)
                                        * bq
                                        * da[t];
                                }
                                if q > 0 {
                                    g = g + R::from_int(q as i64)
                                        * ap
                                        * b.powi(q as i32 - 1)
                                        * db[t];
                                }
                                *term = *term + g;
                            }
                        }
                    }
                    if !values.is_empty() {
                        values[row] = values[row] + w * sum;
                    }
                    if let Some(jac) = jac.as_deref_mut() {
                        for t in 0..n_params {
                            *jac.at_mut(row, col + t) = w * dsum[t];
                        }
                        *jac.at_mut(row, w_col) = sum;
                    }
                    row += 1;
                }
            }
            col = w_col + 1;
        }
        Ok(())
    }
}

fn l2_norm<R: Real>(v: &[R]) -> R {
    let mut s = R::zero();
    for x in v {
        s = s + *x * *x;
    }
    s.sqrt()
}

/// Checks the degenerate-orbit guard on a candidate unknown vector.
fn structure_intact<R: Real>(sys: &MomentSystem, x: &[R]) -> Result<(), usize> {
    let guard = R::from_f64(1e-20);
    let third = R::from_ratio(1, 3);
    let mut col = 0;
    for (index, kind) in sys.structure.iter().enumerate() {
        match kind {
            OrbitKind::Type0 => col += 1,
            OrbitKind::Type1 => {
                if (x[col] - third).abs() < guard {
                    return Err(index);
                }
                col += 2;
            }
            OrbitKind::Type2 => {
                let l1 = x[col];
                let l2 = x[col + 1];
                let l3 = R::one() - l1 - l2;
                if (l1 - l2).abs() < guard || (l1 - l3).abs() < guard || (l2 - l3).abs() < guard {
                    return Err(index);
                }
                col += 3;
            }
        }
    }
    Ok(())
}

/// Default residual-norm tolerance for refinement.
pub fn default_tolerance<R: Real>() -> R {
    R::parse_decimal("1e-30").expect("constant parses")
}

/// Refines `seed` by Levenberg–Marquardt on its moment system.
///
/// Returns the refined rule and a convergence report. The orbit structure
/// (n₀, n₁, n₂) is preserved; iteration stops when the residual norm drops
/// below `tol`, when a step's norm falls below 1e-32, or after `max_iter`
/// iterations (an error carrying the report).
pub fn refine_rule<R: Real>(
    seed: &QuadratureRule<R>,
    tol: R,
    max_iter: u32,
) -> Result<(QuadratureRule<R>, RefinementReport<R>), RefineError<R>> {
    let sys = MomentSystem::for_rule(seed);
    let mut x = sys.pack(seed);
    let step_tol = R::parse_decimal("1e-32").expect("constant parses");

    let mut residual = sys.moment_residuals(&x)?;
    let initial_norm = l2_norm(&residual);
    let mut norm = initial_norm;
    let mut report = RefinementReport {
        initial_residual_norm: initial_norm,
        final_residual_norm: norm,
        final_step_norm: R::zero(),
        iterations: 0,
        converged: norm < tol,
    };
    if report.converged {
        return Ok((seed.clone(), report));
    }

    // Seeds sit close to the solution, so damping starts essentially off.
    let mut damping = R::parse_decimal("1e-12").expect("constant parses");
    let ten = R::from_f64(10.0);

    for iteration in 1..=max_iter {
        report.iterations = iteration;
        let jac = sys.residual_jacobian(&x)?;
        let jtj = jac.gram();
        let jtr = jac.transpose_times(&residual);

        // Retry the step with stronger damping until it reduces the
        // residual (or damping blows past any useful scale).
        let mut stepped = false;
        for _ in 0..60 {
            let mut system = jtj.clone();
            for i in 0..system.rows() {
                *system.at_mut(i, i) = *system.at_mut(i, i) + damping;
            }
            let Some(delta) = system.cholesky_solve_neg(&jtr) else {
                damping = damping * ten;
                continue;
            };
            let candidate: Vec<R> = x.iter().zip(&delta).map(|(a, d)| *a + *d).collect();
            if let Err(orbit_index) = structure_intact(&sys, &candidate) {
                return Err(RefineError::StructureLost { orbit_index });
            }
            let cand_residual = sys.moment_residuals(&candidate)?;
            let cand_norm = l2_norm(&cand_residual);
            if cand_norm <= norm {
                x = candidate;
                residual = cand_residual;
                norm = cand_norm;
                report.final_step_norm = l2_norm(&delta);
                damping = R::max_by_value(
                    damping * R::from_f64(0.25),
                    R::parse_decimal("1e-40").expect("constant parses"),
                );
                stepped = true;
                break;
            }
            damping = damping * ten;
        }
        report.final_residual_norm = norm;
        if norm < tol || (stepped && report.final_step_norm < step_tol) {
            report.converged = norm < tol;
            break;
        }
        if !stepped {
            break;
        }
    }

    report.converged = norm < tol;
    if !report.converged && report.final_step_norm >= step_tol {
        return Err(RefineError::NoConvergence { report });
    }
    let refined = sys.unpack(&x)?;
    Ok((refined, report))
}
