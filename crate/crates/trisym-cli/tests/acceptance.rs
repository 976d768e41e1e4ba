//! End-to-end acceptance gates, one test per release criterion. Each runs
//! at the stated tolerance and wall-clock budget; the per-test harness line
//! is the pass/fail record. Run with `--nocapture` to see the measured
//! rates, residuals, and timings behind each verdict.

use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use trisym::geometry::{Point2, Triangle};
use trisym::lab::{
    adaptive_reference, closed_form_agreement, expected_rate, mode_rule, run_study,
    standard_integrand, study_csv, study_summary_json, subdivision_ratio_experiment, Integrand,
    Sequence, StudyPlan,
};
use trisym::refine::{refine_rule, MomentSystem};
use trisym::rules::{load_builtin_rule, monomial_moment};
use trisym::{Qd, Real};

/// Stated degree, point count, and convergence rate of every builtin rule.
const TABLE: [(u32, usize, u32); 11] = [
    (1, 1, 2),
    (2, 3, 4),
    (3, 4, 4),
    (4, 6, 6),
    (5, 7, 6),
    (6, 12, 8),
    (7, 13, 8),
    (8, 16, 10),
    (9, 19, 10),
    (10, 25, 12),
    (11, 27, 12),
];

fn qd(s: &str) -> Qd {
    Qd::parse_decimal(s).expect("constant parses")
}

fn reference_triangle<R: Real>() -> Triangle<R> {
    Triangle::new(
        Point2::new(R::zero(), R::zero()),
        Point2::new(R::one(), R::zero()),
        Point2::new(R::zero(), R::one()),
    )
}

#[test]
fn criterion_1_rule_table() {
    let start = Instant::now();

    let output = Command::new(env!("CARGO_BIN_EXE_trisym"))
        .args(["rules", "list"])
        .output()
        .expect("binary runs");
    assert!(output.status.success(), "rules list exited with failure");
    let stdout = String::from_utf8(output.stdout).expect("utf-8 output");
    let mut lines = stdout.lines();
    let header: Vec<&str> = lines.next().expect("header").split_whitespace().collect();
    assert_eq!(header, ["d", "n", "p"]);
    let rows: Vec<Vec<String>> = lines
        .map(|l| l.split_whitespace().map(str::to_owned).collect())
        .collect();
    assert_eq!(rows.len(), TABLE.len(), "table must list d=1..11");
    for (row, (d, n, p)) in rows.iter().zip(TABLE) {
        assert_eq!(
            row,
            &[d.to_string(), n.to_string(), p.to_string()],
            "row for degree {d}"
        );
    }

    for (d, n, _) in TABLE {
        let rule = load_builtin_rule::<f64>(d).expect("builtin rule loads");
        assert_eq!(rule.point_count(), n, "degree {d} point count");
        let check = rule.verify_degree(1e-13).expect("verification runs");
        assert!(
            check.achieved_degree >= Some(d),
            "degree {d} rule only achieved {:?} at 1e-13",
            check.achieved_degree
        );
    }

    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(1), "took {elapsed:?}");
    println!("criterion 1: table and double-mode degree checks in {elapsed:?}");
}

#[test]
fn criterion_2_rule_refinement() {
    let start = Instant::now();
    let tol = qd("1e-40");
    let residual_gate = qd("1e-30");
    let verify_tol = qd("1e-28");

    let mut worst = Qd::ZERO;
    for (d, _, _) in TABLE {
        let seed = load_builtin_rule::<Qd>(d).expect("builtin rule loads");
        let (refined, report) = refine_rule(&seed, tol, 100).expect("refinement runs");
        assert!(
            report.converged,
            "degree {d} refinement stalled at residual {}",
            report.final_residual_norm.to_decimal_string()
        );
        assert!(
            report.final_residual_norm < residual_gate,
            "degree {d} residual {} not below 1e-30",
            report.final_residual_norm.to_decimal_string()
        );
        worst = Qd::max_by_value(worst, report.final_residual_norm);

        let check = refined.verify_degree(verify_tol).expect("verification runs");
        assert!(
            check.achieved_degree >= Some(d),
            "refined degree-{d} rule only achieved {:?} at 1e-28",
            check.achieved_degree
        );
    }

    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(300), "took {elapsed:?}");
    println!(
        "criterion 2: all 11 rules refined (worst residual {:.3e}) in {elapsed:?}",
        worst.to_f64()
    );
}

fn assert_rate_in_window(d: u32, rate: f64, context: &str) {
    let p = expected_rate(d) as f64;
    assert!(
        rate >= p - 0.25 && rate <= p + 0.5,
        "{context} degree {d}: fitted rate {rate:.4} outside [{:.2}, {:.2}]",
        p - 0.25,
        p + 0.5
    );
}

fn structured_rate<R: Real>(d: u32) -> f64 {
    let plan = StudyPlan::new(Sequence::Structured, d, 5);
    run_study::<R>(&plan).expect("study runs").fitted_rate_global
}

#[test]
fn criterion_3_even_odd_convergence_law() {
    let double_start = Instant::now();
    let mut summary = Vec::new();
    for d in 1..=5 {
        let rate = structured_rate::<f64>(d);
        assert_rate_in_window(d, rate, "structured double");
        summary.push(format!("d={d}:{rate:.3}"));
    }
    let double_elapsed = double_start.elapsed();
    assert!(
        double_elapsed < Duration::from_secs(60),
        "double block took {double_elapsed:?}"
    );

    let extended_start = Instant::now();
    for d in 6..=9 {
        let rate = structured_rate::<Qd>(d);
        assert_rate_in_window(d, rate, "structured extended");
        summary.push(format!("d={d}:{rate:.3}"));
    }
    let extended_elapsed = extended_start.elapsed();
    assert!(
        extended_elapsed < Duration::from_secs(1800),
        "extended block took {extended_elapsed:?}"
    );

    println!(
        "criterion 3: structured rates {} (double {double_elapsed:?}, extended {extended_elapsed:?})",
        summary.join(" ")
    );
}

#[test]
fn criterion_4_nested_unstructured_rates() {
    let start = Instant::now();
    let mut summary = Vec::new();
    for d in 1..=4 {
        let plan = StudyPlan::new(Sequence::NestedUnstructured, d, 5);
        let rate = run_study::<f64>(&plan).expect("study runs").fitted_rate_global;
        assert_rate_in_window(d, rate, "nested unstructured");
        summary.push(format!("d={d}:{rate:.3}"));
    }
    println!(
        "criterion 4: nested rates {} in {:?}",
        summary.join(" "),
        start.elapsed()
    );
}

#[test]
fn criterion_5_subdivision_ratio() {
    let start = Instant::now();
    let f = standard_integrand::<Qd>();
    let tri = reference_triangle::<Qd>();

    let mut summary = Vec::new();
    for (d, expected) in [(1u32, 4i64), (2, 16), (3, 16), (4, 64)] {
        let rule = mode_rule::<Qd>(d).expect("rule available");
        let experiment =
            subdivision_ratio_experiment(&rule, &f, &tri, 6).expect("experiment runs");

        let predicted = experiment.predicted_ratio;
        let stated = Qd::from_ratio(1, expected);
        assert!(
            (predicted - stated).abs().to_f64() == 0.0,
            "degree {d} predicted ratio is not 1/{expected}"
        );

        let measured = *experiment.measured_ratios.last().expect("ratios nonempty");
        let deviation = ((measured - predicted) / predicted).abs().to_f64();
        assert!(
            deviation <= 0.05,
            "degree {d}: finest ratio {} vs prediction 1/{expected} is {:.2}% off",
            measured.to_decimal_string(),
            100.0 * deviation
        );
        summary.push(format!("d={d}:{:+.2}%", 100.0 * deviation));
    }

    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(60), "took {elapsed:?}");
    println!(
        "criterion 5: finest-level ratio deviations {} in {elapsed:?}",
        summary.join(" ")
    );
}

#[test]
fn criterion_6_exact_integral_cross_check() {
    let start = Instant::now();
    let (closed, oracle) = closed_form_agreement().expect("adaptive reference converges");
    let diff = (closed - oracle).abs();
    assert!(
        diff <= qd("1e-25"),
        "closed form {} vs adaptive reference {} differ by {}",
        closed.to_decimal_string(),
        oracle.to_decimal_string(),
        diff.to_decimal_string()
    );
    println!(
        "criterion 6: closed form agrees with adaptive reference to {:.3e} in {:?}",
        diff.to_f64(),
        start.elapsed()
    );
}

/// The moment table must match what an adaptive integrator measures for
/// every monomial the refinement system touches.
fn check_moments_against_adaptive_integration() {
    let tri = reference_triangle::<f64>();
    for total in 0..=12u32 {
        for p in 0..=total {
            let q = total - p;
            let stated: f64 = monomial_moment(p, q).expect("within table").value();
            let f = Integrand::new(format!("x^{p} y^{q}"), None, move |x: f64, y: f64| {
                x.powi(p as i32) * y.powi(q as i32)
            });
            let measured = adaptive_reference(&f, &tri, 1e-13).expect("reference converges");
            assert!(
                (measured - stated).abs() <= 1e-12,
                "moment ({p},{q}): adaptive {measured:e} vs stated {stated:e}"
            );
        }
    }
}

/// Integrating a pulled-back function on the reference triangle and scaling
/// by the Jacobian determinant must reproduce the mapped-triangle integral.
fn check_affine_covariance() {
    let rule = load_builtin_rule::<f64>(5).expect("builtin rule loads");
    let tri = Triangle::new(
        Point2::new(0.1, -0.2),
        Point2::new(1.3, 0.4),
        Point2::new(0.2, 1.1),
    );
    let f = |x: f64, y: f64| (0.7 * x - 0.3 * y).sin() + x * y + 0.25;
    let base = rule.integrate_on_triangle(&tri, f).expect("rule evaluates");

    let mut rng = ChaCha8Rng::seed_from_u64(100);
    let mut checked = 0;
    while checked < 100 {
        let m: [f64; 6] = std::array::from_fn(|_| rng.gen_range(-2.0..2.0));
        let det = m[0] * m[3] - m[1] * m[2];
        if det < 0.05 {
            continue;
        }
        let map = |p: Point2<f64>| {
            Point2::new(m[0] * p.x + m[1] * p.y + m[4], m[2] * p.x + m[3] * p.y + m[5])
        };
        let mapped = Triangle::new(map(tri.v[0]), map(tri.v[1]), map(tri.v[2]));

        let lhs = rule.integrate_on_triangle(&mapped, f).expect("rule evaluates");
        let pulled_back = |x: f64, y: f64| f(m[0] * x + m[1] * y + m[4], m[2] * x + m[3] * y + m[5]);
        let rhs = det
            * rule
                .integrate_on_triangle(&tri, pulled_back)
                .expect("rule evaluates");
        assert!(
            (lhs - rhs).abs() <= 1e-12 * (1.0 + lhs.abs()),
            "map {checked}: {lhs:e} vs {rhs:e}"
        );
        checked += 1;
    }

    let again = rule.integrate_on_triangle(&tri, f).expect("rule evaluates");
    assert!(base == again, "base integral drifted across evaluations");
}

/// Analytic Jacobian columns must agree with extended-precision central
/// differences for every builtin orbit structure.
fn check_jacobian_against_finite_differences() {
    let h = qd("1e-20");
    let two_h = h + h;
    for (d, _, _) in TABLE {
        let rule = load_builtin_rule::<Qd>(d).expect("builtin rule loads");
        let sys = MomentSystem::for_rule(&rule);
        let x = sys.pack(&rule);
        let jac = sys.residual_jacobian(&x).expect("Jacobian evaluates");
        for j in 0..x.len() {
            let mut xp = x.clone();
            xp[j] = xp[j] + h;
            let mut xm = x.clone();
            xm[j] = xm[j] - h;
            let rp = sys.moment_residuals(&xp).expect("residuals evaluate");
            let rm = sys.moment_residuals(&xm).expect("residuals evaluate");
            for i in 0..rp.len() {
                let fd = (rp[i] - rm[i]) / two_h;
                let an = jac.at(i, j);
                let denom = Qd::max_by_value(an.abs(), Qd::ONE);
                let rel = ((fd - an) / denom).abs().to_f64();
                assert!(rel < 1e-8, "d={d} entry ({i},{j}): rel {rel:e}");
            }
        }
    }
}

/// Rerunning a study — RNG, rotation averaging, and all — must reproduce
/// every reported number bit for bit.
fn check_study_determinism() {
    let mut plan = StudyPlan::new(Sequence::IndependentUnstructured, 2, 2);
    plan.seed = 9;
    plan.rotations = true;

    let first = run_study::<f64>(&plan).expect("study runs");
    let second = run_study::<f64>(&plan).expect("study runs");

    assert_eq!(study_csv(&first), study_csv(&second));
    assert_eq!(study_summary_json(&first), study_summary_json(&second));
    assert_eq!(
        first.fitted_rate_global.to_bits(),
        second.fitted_rate_global.to_bits()
    );
    for (a, b) in first.levels.iter().zip(&second.levels) {
        assert_eq!(a.i_tilde.to_bits(), b.i_tilde.to_bits(), "level {}", a.k);
        assert_eq!(a.epsilon.to_bits(), b.epsilon.to_bits(), "level {}", a.k);
        let (ra, rb) = (a.rotation_errors.unwrap(), b.rotation_errors.unwrap());
        for (ea, eb) in ra.iter().zip(&rb) {
            assert_eq!(ea.to_bits(), eb.to_bits(), "level {} rotations", a.k);
        }
    }
}

#[test]
fn criterion_7_property_suites() {
    let start = Instant::now();
    check_moments_against_adaptive_integration();
    check_affine_covariance();
    check_jacobian_against_finite_differences();
    check_study_determinism();
    println!(
        "criterion 7: moments, covariance, Jacobian, and determinism in {:?}",
        start.elapsed()
    );
}
