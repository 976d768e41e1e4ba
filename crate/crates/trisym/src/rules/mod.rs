//! Symmetric quadrature rules on the reference triangle: orbit
//! representation, expansion to points and weights, evaluation on a
//! physical triangle, exact monomial moments, and degree verification.
//!
//! Rules store one weight per orbit, normalized so the expanded weights
//! sum to 1; the physical triangle's area multiplies at evaluation time.

mod catalog;

pub use catalog::load_builtin_rule;

use crate::geometry::{BarycentricPoint, Point2, Triangle};
use crate::scalar::Real;
use crate::summation::CompensatedSum;
use serde_json::{json, Value};
use thiserror::Error;

/// Errors from rule construction, expansion, and evaluation.
#[derive(Debug, Error)]
pub enum RuleError {
    /// An orbit's permutations are not pairwise distinct.
    #[error("orbit {index} of kind {kind:?} does not expand to distinct points")]
    DegenerateOrbit { index: usize, kind: OrbitKind },
    /// Evaluation target has non-positive signed area.
    #[error("triangle has non-positive signed area {area:e}")]
    DegenerateTriangle { area: f64 },
    /// Moment requested beyond the supported monomial range.
    #[error("monomial moment ({p},{q}) exceeds the supported total degree 40")]
    OutOfRange { p: u32, q: u32 },
    /// No built-in rule for this degree.
    #[error("no built-in rule of degree {degree}; the catalog covers 1..=11")]
    UnsupportedDegree { degree: u32 },
    /// Malformed rule JSON.
    #[error("invalid rule JSON: {reason}")]
    InvalidJson { reason: String },
}

/// Symmetry class of a quadrature-point orbit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrbitKind {
    /// The centroid; one point.
    Type0,
    /// Permutations of (λ₁, (1−λ₁)/2, (1−λ₁)/2); three points.
    Type1,
    /// Permutations of (λ₁, λ₂, 1−λ₁−λ₂); six points.
    Type2,
}

/// One orbit of a symmetric rule: its parameters and the weight shared by
/// every point in the orbit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Orbit<R> {
    Type0 { weight: R },
    Type1 { lambda1: R, weight: R },
    Type2 { lambda1: R, lambda2: R, weight: R },
}

impl<R: Real> Orbit<R> {
    pub fn kind(&self) -> OrbitKind {
        match self {
            Orbit::Type0 { .. } => OrbitKind::Type0,
            Orbit::Type1 { .. } => OrbitKind::Type1,
            Orbit::Type2 { .. } => OrbitKind::Type2,
        }
    }

    pub fn weight(&self) -> R {
        match *self {
            Orbit::Type0 { weight } => weight,
            Orbit::Type1 { weight, .. } => weight,
            Orbit::Type2 { weight, .. } => weight,
        }
    }

    /// Number of points the orbit expands to.
    pub fn size(&self) -> usize {
        match self {
            Orbit::Type0 { .. } => 1,
            Orbit::Type1 { .. } => 3,
            Orbit::Type2 { .. } => 6,
        }
    }

    /// Barycentric parameter columns (λ₁ for Type1; λ₁, λ₂ for Type2).
    pub fn params(&self) -> Vec<R> {
        match *self {
            Orbit::Type0 { .. } => vec![],
            Orbit::Type1 { lambda1, .. } => vec![lambda1],
            Orbit::Type2 {
                lambda1, lambda2, ..
            } => vec![lambda1, lambda2],
        }
    }

    fn expand_into(
        &self,
        index: usize,
        out: &mut Vec<(BarycentricPoint<R>, R)>,
    ) -> Result<(), RuleError> {
        let mut perms: Vec<[R; 3]> = match *self {
            Orbit::Type0 { .. } => {
                out.push((BarycentricPoint::centroid(), self.weight()));
                return Ok(());
            }
            Orbit::Type1 { lambda1, .. } => {
                let mu = (R::one() - lambda1) * R::from_f64(0.5);
                vec![[lambda1, mu, mu], [mu, lambda1, mu], [mu, mu, lambda1]]
            }
            Orbit::Type2 {
                lambda1, lambda2, ..
            } => {
                let l3 = R::one() - lambda1 - lambda2;
                let (a, b, c) = (lambda1, lambda2, l3);
                vec![
                    [a, b, c],
                    [a, c, b],
                    [b, a, c],
                    [b, c, a],
                    [c, a, b],
                    [c, b, a],
                ]
            }
        };
        perms.sort_by(|x, y| cmp_lex(y, x));
        // Permutations that agree to within a few ulps collapse onto each
        // other (λ₁ = 1/3 rounded to working precision must count as the
        // centroid), so distinctness is checked with a tolerance.
        let tol = R::epsilon() * R::from_f64(8.0);
        let coincide = |a: &[R; 3], b: &[R; 3]| {
            a.iter().zip(b).all(|(x, y)| (*x - *y).abs() <= tol)
        };
        if perms.windows(2).any(|w| coincide(&w[0], &w[1])) {
            return Err(RuleError::DegenerateOrbit {
                index,
                kind: self.kind(),
            });
        }
        for lambda in perms {
            let point = BarycentricPoint { lambda };
            out.push((point, self.weight()));
        }
        Ok(())
    }

    /// Expands the orbit to its points, each carrying the orbit weight, in
    /// lexicographically descending (λ₁, λ₂, λ₃) order.
    pub fn expand(&self) -> Result<Vec<(BarycentricPoint<R>, R)>, RuleError> {
        let mut out = Vec::with_capacity(self.size());
        self.expand_into(0, &mut out)?;
        Ok(out)
    }
}

fn cmp_lex<R: Real>(a: &[R; 3], b: &[R; 3]) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.partial_cmp(y) {
            Some(std::cmp::Ordering::Equal) => continue,
            Some(ord) => return ord,
            None => unreachable!("orbit parameters are finite"),
        }
    }
    std::cmp::Ordering::Equal
}

/// A symmetric quadrature rule: a degree of exactness and the orbits that
/// realize it.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule<R> {
    pub degree: u32,
    pub orbits: Vec<Orbit<R>>,
}

impl<R: Real> QuadratureRule<R> {
    /// Orbit counts (n₀, n₁, n₂) by type.
    pub fn orbit_counts(&self) -> (usize, usize, usize) {
        let mut counts = (0, 0, 0);
        for o in &self.orbits {
            match o.kind() {
                OrbitKind::Type0 => counts.0 += 1,
                OrbitKind::Type1 => counts.1 += 1,
                OrbitKind::Type2 => counts.2 += 1,
            }
        }
        counts
    }

    /// Total point count n = n₀ + 3·n₁ + 6·n₂.
    pub fn point_count(&self) -> usize {
        self.orbits.iter().map(Orbit::size).sum()
    }

    /// Concatenated orbit expansions, one entry per quadrature point.
    pub fn points(&self) -> Result<Vec<(BarycentricPoint<R>, R)>, RuleError> {
        let mut out = Vec::with_capacity(self.point_count());
        for (index, orbit) in self.orbits.iter().enumerate() {
            orbit.expand_into(index, &mut out)?;
        }
        Ok(out)
    }

    /// Sum of all expanded point weights (1 for a consistent rule).
    pub fn weight_sum(&self) -> R {
        let mut acc = CompensatedSum::new();
        for o in &self.orbits {
            acc.add(o.weight() * R::from_int(o.size() as i64));
        }
        acc.value()
    }

    /// True when every expanded point lies inside the closed triangle.
    pub fn all_points_interior(&self) -> bool {
        self.points().map_or(false, |pts| {
            pts.iter()
                .all(|(b, _)| b.lambda.iter().all(|l| *l >= R::zero()))
        })
    }

    /// True when every orbit weight is positive.
    pub fn all_weights_positive(&self) -> bool {
        self.orbits.iter().all(|o| o.weight() > R::zero())
    }

    /// Applies the rule to `f` on `tri`, returning
    /// A(tri) · Σᵢ wᵢ·f(xᵢ) with a compensated fixed-order sum.
    pub fn integrate_on_triangle(
        &self,
        tri: &Triangle<R>,
        f: impl Fn(R, R) -> R,
    ) -> Result<R, RuleError> {
        let points = self.points()?;
        integrate_points_on_triangle(&points, tri, f)
    }

    /// Checks which monomial degrees the rule integrates exactly.
    ///
    /// For each total degree m the report records the largest relative
    /// residual over the monomials x^p·y^q with p+q = m on the reference
    /// triangle; scanning stops two degrees past the first failure.
    pub fn verify_degree(&self, tol: R) -> Result<DegreeCheck<R>, RuleError> {
        let points = self.points()?;
        let mut residuals = Vec::new();
        let mut first_failure: Option<u32> = None;
        let mut m = 0u32;
        loop {
            if m > MAX_MOMENT_DEGREE {
                break;
            }
            let mut worst = R::zero();
            for p in (0..=m).rev() {
                let q = m - p;
                let exact = monomial_moment(p, q)?.value_over_reference::<R>();
                let mut acc = CompensatedSum::new();
                for (b, w) in &points {
                    acc.add(*w * b.lambda[1].powi(p as i32) * b.lambda[2].powi(q as i32));
                }
                let rel = ((acc.value() - exact) / exact).abs();
                worst = R::max_by_value(worst, rel);
            }
            residuals.push(worst);
            if first_failure.is_none() && worst >= tol {
                first_failure = Some(m);
            }
            if let Some(fail) = first_failure {
                if m >= fail + 2 {
                    break;
                }
            }
            m += 1;
        }
        let achieved_degree = match first_failure {
            Some(0) => None,
            Some(fail) => Some(fail - 1),
            None => Some(MAX_MOMENT_DEGREE),
        };
        Ok(DegreeCheck {
            achieved_degree,
            max_residual_by_degree: residuals,
        })
    }

    /// Serializes the rule as JSON with full-precision decimal strings.
    pub fn to_json(&self) -> Value {
        let digits = R::significant_digits();
        let orbits: Vec<Value> = self
            .orbits
            .iter()
            .map(|o| {
                let kind = match o.kind() {
                    OrbitKind::Type0 => "type0",
                    OrbitKind::Type1 => "type1",
                    OrbitKind::Type2 => "type2",
                };
                let params: Vec<Value> = o
                    .params()
                    .iter()
                    .map(|p| Value::String(p.to_decimal_string()))
                    .collect();
                json!({
                    "kind": kind,
                    "params": params,
                    "weight": o.weight().to_decimal_string(),
                })
            })
            .collect();
        json!({
            "degree": self.degree,
            "orbits": orbits,
            "precision_digits": digits,
        })
    }

    /// Parses a rule from the JSON layout produced by [`Self::to_json`].
    pub fn from_json(value: &Value) -> Result<Self, RuleError> {
        let bad = |reason: &str| RuleError::InvalidJson {
            reason: reason.to_string(),
        };
        let degree = value
            .get("degree")
            .and_then(Value::as_u64)
            .ok_or_else(|| bad("missing integer field `degree`"))? as u32;
        let orbits_json = value
            .get("orbits")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing array field `orbits`"))?;
        let parse_scalar = |v: &Value| -> Result<R, RuleError> {
            let s = v.as_str().ok_or_else(|| bad("numbers must be decimal strings"))?;
            let x: R = R::parse_decimal(s).map_err(|_| RuleError::InvalidJson {
                reason: format!("unparseable decimal {s:?}"),
            })?;
            if !x.to_f64().is_finite() {
                return Err(bad("non-finite value"));
            }
            Ok(x)
        };
        let mut orbits = Vec::with_capacity(orbits_json.len());
        for entry in orbits_json {
            let kind = entry
                .get("kind")
                .and_then(Value::as_str)
                .ok_or_else(|| bad("orbit missing `kind`"))?;
            let params = entry
                .get("params")
                .and_then(Value::as_array)
                .ok_or_else(|| bad("orbit missing `params`"))?;
            let weight = parse_scalar(
                entry
                    .get("weight")
                    .ok_or_else(|| bad("orbit missing `weight`"))?,
            )?;
            let orbit = match (kind, params.len()) {
                ("type0", 0) => Orbit::Type0 { weight },
                ("type1", 1) => Orbit::Type1 {
                    lambda1: parse_scalar(&params[0])?,
                    weight,
                },
                ("type2", 2) => Orbit::Type2 {
                    lambda1: parse_scalar(&params[0])?,
                    lambda2: parse_scalar(&params[1])?,
                    weight,
                },
                _ => {
                    return Err(RuleError::InvalidJson {
                        reason: format!("kind {kind:?} with {} params", params.len()),
                    })
                }
            };
            orbits.push(orbit);
        }
        Ok(QuadratureRule { degree, orbits })
    }
}

/// Result of [`QuadratureRule::verify_degree`].
#[derive(Debug, Clone)]
pub struct DegreeCheck<R> {
    /// Largest m₀ such that every total degree ≤ m₀ stays under tolerance;
    /// `None` when even the constant monomial fails.
    pub achieved_degree: Option<u32>,
    /// Worst relative residual per total degree, from 0 upward.
    pub max_residual_by_degree: Vec<R>,
}

/// Applies pre-expanded rule points to `f` on `tri`.
pub fn integrate_points_on_triangle<R: Real>(
    points: &[(BarycentricPoint<R>, R)],
    tri: &Triangle<R>,
    f: impl Fn(R, R) -> R,
) -> Result<R, RuleError> {
    let area = tri.signed_area();
    if area <= R::zero() {
        return Err(RuleError::DegenerateTriangle {
            area: area.to_f64(),
        });
    }
    let mut acc = CompensatedSum::new();
    for (b, w) in points {
        let Point2 { x, y } = tri.bary_to_cart(b);
        acc.add(*w * f(x, y));
    }
    Ok(area * acc.value())
}

/// Exact reference-triangle moment of a monomial, as a rational number.
///
/// ∫∫ x^p·y^q over {x,y ≥ 0, x+y ≤ 1} equals p!·q!/(p+q+2)!, which reduces
/// to 1 / (C(p+q, p)·(p+q+1)·(p+q+2)) — the numerator is always 1, so the
/// fraction is already in lowest terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RationalMoment {
    pub p: u32,
    pub q: u32,
    pub numerator: u128,
    pub denominator: u128,
}

/// Largest supported total degree p+q for exact moments; the denominator
/// stays well inside u128 (and i64) up to here.
pub const MAX_MOMENT_DEGREE: u32 = 40;

/// Computes the exact moment p!·q!/(p+q+2)! over the reference triangle.
pub fn monomial_moment(p: u32, q: u32) -> Result<RationalMoment, RuleError> {
    let s = p + q;
    if s > MAX_MOMENT_DEGREE {
        return Err(RuleError::OutOfRange { p, q });
    }
    let mut binom: u128 = 1;
    for i in 1..=(p.min(q) as u128) {
        binom = binom * (s as u128 - p.min(q) as u128 + i) / i;
    }
    let denominator = binom * (s as u128 + 1) * (s as u128 + 2);
    Ok(RationalMoment {
        p,
        q,
        numerator: 1,
        denominator,
    })
}

impl RationalMoment {
    /// The moment as a scalar.
    pub fn value<R: Real>(&self) -> R {
        R::from_ratio(self.numerator as i64, self.denominator as i64)
    }

    /// The moment divided by the reference area 1/2, i.e. the value a
    /// unit-normalized rule must reproduce.
    pub fn value_over_reference<R: Real>(&self) -> R {
        R::from_ratio(2 * self.numerator as i64, self.denominator as i64)
    }
}
