//! The oscillatory exponential test integrand and its exact unit-square
//! integral.

use std::sync::OnceLock;

use super::oracle::adaptive_reference;
use super::{Integrand, LabError};
use crate::geometry::{Point2, Triangle};
use crate::scalar::{Qd, Real};

/// ∫∫ over the unit square of exp(x+2y)·(1 + sin(3x+4y) + sin(6x+5y)),
/// evaluated in `R` from integer coefficients so extended mode gets all of
/// its digits. The antiderivative reduces to the single rational prefactor
/// 1/21460 against e, e², e³ and sine/cosine values at integers.
pub fn closed_form_integral<R: Real>() -> R {
    let e = R::one().exp();
    let cos = |k: i64| R::from_int(k).cos();
    let sin = |k: i64| R::from_int(k).sin();
    let block = |a: i64, b: i64| {
        R::from_int(-10730)
            + R::from_int(1073) * (cos(a) + sin(a))
            + R::from_int(340) * cos(b)
            + R::from_int(560) * sin(b)
    };
    let total = R::from_int(9317) + e * block(3, 6) + e * e * block(4, 5)
        - e * e * e * block(7, 11);
    total / R::from_int(21460)
}

fn standard_integrand_unchecked<R: Real>() -> Integrand<R> {
    Integrand::new(
        "exp(x+2y)*(1+sin(3x+4y)+sin(6x+5y))",
        Some(closed_form_integral()),
        |x, y| {
            let linear = |a: i64, b: i64| R::from_int(a) * x + R::from_int(b) * y;
            linear(1, 2).exp() * (R::one() + linear(3, 4).sin() + linear(6, 5).sin())
        },
    )
}

/// The standard test integrand: smooth, oscillatory, and nowhere close to
/// any polynomial a practical rule integrates exactly. Its stored exact
/// integral is validated once per process against the extended-precision
/// adaptive reference; the first call pays for that refinement.
pub fn standard_integrand<R: Real>() -> Integrand<R> {
    static CHECK: OnceLock<Result<(), String>> = OnceLock::new();
    let result = CHECK.get_or_init(|| {
        let (closed, oracle) = closed_form_agreement().map_err(|e| e.to_string())?;
        let diff = (closed - oracle).abs();
        let tol = Qd::parse_decimal("1e-25").expect("constant parses");
        if diff <= tol {
            Ok(())
        } else {
            Err(format!(
                "closed form {} vs adaptive reference {} differ by {}",
                closed.to_decimal_string(),
                oracle.to_decimal_string(),
                diff.to_decimal_string()
            ))
        }
    });
    if let Err(msg) = result {
        panic!("stored unit-square integral failed its oracle check: {msg}");
    }
    standard_integrand_unchecked()
}

/// The closed-form unit-square integral next to an independently computed
/// adaptive reference (extended precision, absolute tolerance 1e-25,
/// memoized per process).
pub fn closed_form_agreement() -> Result<(Qd, Qd), LabError> {
    static ORACLE: OnceLock<Result<Qd, String>> = OnceLock::new();
    let oracle = ORACLE.get_or_init(|| {
        let f = standard_integrand_unchecked::<Qd>();
        let p = |x: i64, y: i64| Point2::new(Qd::from_int(x), Qd::from_int(y));
        let lower = Triangle::new(p(0, 0), p(1, 0), p(1, 1));
        let upper = Triangle::new(p(0, 0), p(1, 1), p(0, 1));
        let tol = Qd::parse_decimal("5e-26").expect("constant parses");
        let run = |tri| adaptive_reference(&f, &tri, tol).map_err(|e| e.to_string());
        Ok(run(lower)? + run(upper)?)
    });
    match oracle {
        Ok(v) => Ok((closed_form_integral::<Qd>(), *v)),
        Err(msg) => Err(LabError::ReferenceFailure { reason: msg.clone() }),
    }
}

#[cfg(test)]
pub(super) fn unchecked_standard_integrand<R: Real>() -> Integrand<R> {
    standard_integrand_unchecked()
}
