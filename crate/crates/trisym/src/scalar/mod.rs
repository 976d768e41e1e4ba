//! The precision contract: one trait, two number types.
//!
//! Every numerical routine in this crate is generic over [`Real`], so a whole
//! computation runs either in IEEE double (`f64`) or in quad-double ([`Qd`],
//! about 63 significant decimal digits). The choice is made at the call site
//! by instantiating the generic; there is no runtime tagging and no way to mix
//! the two inside one computation.
//!
//! Conversions are asymmetric by design: `from_f64` embeds a double exactly,
//! while `to_f64` rounds.

mod qd;
mod qd_consts;

use std::fmt;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};

pub use qd::Qd;

/// Which arithmetic a computation runs in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PrecisionMode {
    Double,
    Extended,
}

impl PrecisionMode {
    pub fn name(self) -> &'static str {
        match self {
            PrecisionMode::Double => "double",
            PrecisionMode::Extended => "extended",
        }
    }
}

impl std::str::FromStr for PrecisionMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "double" | "f64" => Ok(PrecisionMode::Double),
            "extended" | "qd" | "quad" => Ok(PrecisionMode::Extended),
            other => Err(format!("unknown precision mode '{other}'")),
        }
    }
}

/// Failed to parse a decimal string as a scalar.
#[derive(Debug, Clone, thiserror::Error)]
#[error("cannot parse '{input}' as a decimal number")]
pub struct ScalarParseError {
    pub input: String,
}

/// A real-number type the numerical kernels can be generic over.
///
/// `from_f64` must be exact; `to_f64` rounds to nearest. The transcendental
/// functions are expected to be faithful to within a few units in the last
/// place of the format.
pub trait Real:
    Copy
    + PartialEq
    + PartialOrd
    + fmt::Debug
    + fmt::Display
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + Send
    + Sync
    + 'static
{
    const MODE: PrecisionMode;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_f64(v: f64) -> Self;
    fn from_int(v: i64) -> Self;
    fn to_f64(self) -> f64;

    /// Unit roundoff of the format.
    fn epsilon() -> Self;
    /// Significant decimal digits the format carries.
    fn significant_digits() -> u32;

    fn abs(self) -> Self;
    fn sqrt(self) -> Self;
    fn exp(self) -> Self;
    fn sin(self) -> Self;
    fn cos(self) -> Self;
    fn powi(self, n: i32) -> Self;
    /// The constant 2π at full working precision.
    fn two_pi() -> Self;

    /// Parses a decimal string at full precision.
    fn parse_decimal(s: &str) -> Result<Self, ScalarParseError>;
    /// Full-precision decimal string; parsing it back loses at most a few
    /// units in the last place (and nothing at all for `f64`).
    fn to_decimal_string(self) -> String;

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_int(num) / Self::from_int(den)
    }

    fn max_by_value(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    fn min_by_value(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }
}

impl Real for f64 {
    const MODE: PrecisionMode = PrecisionMode::Double;

    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_f64(v: f64) -> Self {
        v
    }
    fn from_int(v: i64) -> Self {
        v as f64
    }
    fn to_f64(self) -> f64 {
        self
    }
    fn epsilon() -> Self {
        f64::EPSILON
    }
    fn significant_digits() -> u32 {
        16
    }
    fn abs(self) -> Self {
        f64::abs(self)
    }
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    fn exp(self) -> Self {
        f64::exp(self)
    }
    fn sin(self) -> Self {
        f64::sin(self)
    }
    fn cos(self) -> Self {
        f64::cos(self)
    }
    fn powi(self, n: i32) -> Self {
        f64::powi(self, n)
    }
    fn two_pi() -> Self {
        std::f64::consts::TAU
    }
    fn parse_decimal(s: &str) -> Result<Self, ScalarParseError> {
        s.trim().parse::<f64>().map_err(|_| ScalarParseError {
            input: s.to_string(),
        })
    }
    fn to_decimal_string(self) -> String {
        // shortest representation that round-trips exactly
        let s = format!("{self}");
        if s.contains('.') || s.contains('e') || s.contains("inf") || s.contains("NaN") {
            s
        } else {
            format!("{s}.0")
        }
    }
}

impl Real for Qd {
    const MODE: PrecisionMode = PrecisionMode::Extended;

    fn zero() -> Self {
        Qd::ZERO
    }
    fn one() -> Self {
        Qd::ONE
    }
    fn from_f64(v: f64) -> Self {
        Qd::from_f64(v)
    }
    fn from_int(v: i64) -> Self {
        Qd::from_int(v)
    }
    fn to_f64(self) -> f64 {
        Qd::to_f64(&self)
    }
    fn epsilon() -> Self {
        Qd::EPSILON
    }
    fn significant_digits() -> u32 {
        63
    }
    fn abs(self) -> Self {
        Qd::abs(self)
    }
    fn sqrt(self) -> Self {
        Qd::sqrt(self)
    }
    fn exp(self) -> Self {
        Qd::exp(self)
    }
    fn sin(self) -> Self {
        Qd::sin(self)
    }
    fn cos(self) -> Self {
        Qd::cos(self)
    }
    fn powi(self, n: i32) -> Self {
        Qd::powi(self, n)
    }
    fn two_pi() -> Self {
        qd_consts::TWO_PI
    }
    fn parse_decimal(s: &str) -> Result<Self, ScalarParseError> {
        s.parse()
    }
    fn to_decimal_string(self) -> String {
        Qd::to_decimal_string(&self, 64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f64_decimal_strings_round_trip_exactly() {
        for v in [0.05, -0.5625, 1.0 / 3.0, 6.02e23, 1e-300, 0.0] {
            let s = v.to_decimal_string();
            assert_eq!(f64::parse_decimal(&s).unwrap(), v, "{s}");
        }
    }

    #[test]
    fn from_f64_is_exact_into_extended() {
        let v = 0.1f64; // not a dyadic rational, but exact as a double
        let q = Qd::from_f64(v);
        assert_eq!(q.to_f64(), v);
        assert_eq!(q.0[1], 0.0);
    }

    #[test]
    fn precision_mode_parses() {
        assert_eq!(
            "extended".parse::<PrecisionMode>().unwrap(),
            PrecisionMode::Extended
        );
        assert_eq!(
            "DOUBLE".parse::<PrecisionMode>().unwrap(),
            PrecisionMode::Double
        );
        assert!("float128".parse::<PrecisionMode>().is_err());
    }
}
