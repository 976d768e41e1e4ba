//! Quad-double arithmetic: an unevaluated sum of four doubles giving roughly
//! 212 bits (63 decimal digits) of precision.
//!
//! The representation is kept canonical: components are non-overlapping and
//! decreasing in magnitude, so the leading component is the correctly rounded
//! double approximation of the full value. All operations renormalize before
//! returning. Error-free transformations (`two_sum`, `two_prod`) follow the
//! classic Dekker/Knuth constructions, with `two_prod` built on fused
//! multiply-add. Comparison is lexicographic on components, which is exact for
//! canonical values.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use super::qd_consts;
use super::ScalarParseError;

/// Sum of `a + b` and the exact rounding error, for arbitrary doubles.
#[inline(always)]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

/// Like `two_sum` but requires |a| >= |b| (or a == 0).
#[inline(always)]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let err = b - (s - a);
    (s, err)
}

/// Product `a * b` and the exact rounding error, via FMA.
#[inline(always)]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let err = a.mul_add(b, -p);
    (p, err)
}

/// Distributes a + b + c into (high, mid, low) parts, in place.
#[inline(always)]
fn three_sum(a: &mut f64, b: &mut f64, c: &mut f64) {
    let (t1, t2) = two_sum(*a, *b);
    let (s, t3) = two_sum(*c, t1);
    let (m, l) = two_sum(t2, t3);
    *a = s;
    *b = m;
    *c = l;
}

/// Renormalizes four components into canonical non-overlapping form.
#[inline]
fn renorm4(c0: &mut f64, c1: &mut f64, c2: &mut f64, c3: &mut f64) {
    if c0.is_infinite() {
        return;
    }
    let (s, e3) = quick_two_sum(*c2, *c3);
    let (s, e2) = quick_two_sum(*c1, s);
    let (h, e1) = quick_two_sum(*c0, s);
    *c0 = h;
    *c1 = e1;
    *c2 = e2;
    *c3 = e3;

    let mut s0 = *c0;
    let mut s1 = *c1;
    let mut s2 = 0.0;
    let mut s3 = 0.0;
    if s1 != 0.0 {
        let (a, b) = quick_two_sum(s1, *c2);
        s1 = a;
        s2 = b;
        if s2 != 0.0 {
            let (a, b) = quick_two_sum(s2, *c3);
            s2 = a;
            s3 = b;
        } else {
            let (a, b) = quick_two_sum(s1, *c3);
            s1 = a;
            s2 = b;
        }
    } else {
        let (a, b) = quick_two_sum(s0, *c2);
        s0 = a;
        s1 = b;
        if s1 != 0.0 {
            let (a, b) = quick_two_sum(s1, *c3);
            s1 = a;
            s2 = b;
        } else {
            let (a, b) = quick_two_sum(s0, *c3);
            s0 = a;
            s1 = b;
        }
    }
    *c0 = s0;
    *c1 = s1;
    *c2 = s2;
    *c3 = s3;
}

/// Renormalizes five components down to four.
#[inline]
fn renorm5(c0: &mut f64, c1: &mut f64, c2: &mut f64, c3: &mut f64, c4: f64) {
    if c0.is_infinite() {
        return;
    }
    let (s, e4) = quick_two_sum(*c3, c4);
    let (s, e3) = quick_two_sum(*c2, s);
    let (s, e2) = quick_two_sum(*c1, s);
    let (h, e1) = quick_two_sum(*c0, s);
    *c0 = h;
    *c1 = e1;
    *c2 = e2;
    *c3 = e3;
    let c4 = e4;

    let mut s0 = *c0;
    let mut s1 = *c1;
    let mut s2 = 0.0;
    let mut s3 = 0.0;
    if s1 != 0.0 {
        let (a, b) = quick_two_sum(s1, *c2);
        s1 = a;
        s2 = b;
        if s2 != 0.0 {
            let (a, b) = quick_two_sum(s2, *c3);
            s2 = a;
            s3 = b;
            if s3 != 0.0 {
                s3 += c4;
            } else {
                let (a, b) = quick_two_sum(s2, c4);
                s2 = a;
                s3 = b;
            }
        } else {
            let (a, b) = quick_two_sum(s1, *c3);
            s1 = a;
            s2 = b;
            if s2 != 0.0 {
                let (a, b) = quick_two_sum(s2, c4);
                s2 = a;
                s3 = b;
            } else {
                let (a, b) = quick_two_sum(s1, c4);
                s1 = a;
                s2 = b;
            }
        }
    } else {
        let (a, b) = quick_two_sum(s0, *c2);
        s0 = a;
        s1 = b;
        if s1 != 0.0 {
            let (a, b) = quick_two_sum(s1, *c3);
            s1 = a;
            s2 = b;
            if s2 != 0.0 {
                let (a, b) = quick_two_sum(s2, c4);
                s2 = a;
                s3 = b;
            } else {
                let (a, b) = quick_two_sum(s1, c4);
                s1 = a;
                s2 = b;
            }
        } else {
            let (a, b) = quick_two_sum(s0, *c3);
            s0 = a;
            s1 = b;
            if s1 != 0.0 {
                let (a, b) = quick_two_sum(s1, c4);
                s1 = a;
                s2 = b;
            } else {
                let (a, b) = quick_two_sum(s0, c4);
                s0 = a;
                s1 = b;
            }
        }
    }
    *c0 = s0;
    *c1 = s1;
    *c2 = s2;
    *c3 = s3;
}

/// Accumulates `c` into the two-part running sum (`a`, `b`), returning any
/// component that has settled (is too large to be disturbed by later input).
#[inline(always)]
fn quick_three_accum(a: &mut f64, b: &mut f64, c: f64) -> f64 {
    let (s, nb) = two_sum(*b, c);
    let (s, na) = two_sum(*a, s);
    *a = na;
    *b = nb;
    let za = *a != 0.0;
    let zb = *b != 0.0;
    if za && zb {
        return s;
    }
    if !zb {
        *b = *a;
        *a = s;
    } else {
        *a = s;
    }
    0.0
}

/// A quad-double value: the exact sum of its four components.
#[derive(Clone, Copy, Debug, Default)]
pub struct Qd(pub [f64; 4]);

impl Qd {
    pub const ZERO: Qd = Qd([0.0; 4]);
    pub const ONE: Qd = Qd([1.0, 0.0, 0.0, 0.0]);

    /// Unit roundoff of the quad-double format, 2^-209.
    pub const EPSILON: Qd = Qd([1.215432671457254e-63, 0.0, 0.0, 0.0]);

    #[inline]
    pub fn from_f64(v: f64) -> Qd {
        Qd([v, 0.0, 0.0, 0.0])
    }

    #[inline]
    pub fn from_int(v: i64) -> Qd {
        debug_assert!(v.abs() < (1i64 << 53));
        Qd([v as f64, 0.0, 0.0, 0.0])
    }

    /// Builds from raw components, renormalizing into canonical form.
    pub fn from_components(c: [f64; 4]) -> Qd {
        let [mut c0, mut c1, mut c2, mut c3] = c;
        renorm4(&mut c0, &mut c1, &mut c2, &mut c3);
        Qd([c0, c1, c2, c3])
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.0[0] == 0.0
    }

    #[inline]
    pub fn is_negative(&self) -> bool {
        self.0[0] < 0.0
    }

    #[inline]
    pub fn is_finite(&self) -> bool {
        self.0[0].is_finite()
    }

    /// Rounds to the nearest double.
    #[inline]
    pub fn to_f64(&self) -> f64 {
        ((self.0[3] + self.0[2]) + self.0[1]) + self.0[0]
    }

    #[inline]
    pub fn abs(self) -> Qd {
        if self.is_negative() {
            -self
        } else {
            self
        }
    }

    /// Multiplies by a power of two given as an exact double. Exact.
    #[inline]
    pub fn mul_pwr2(self, k: f64) -> Qd {
        Qd([self.0[0] * k, self.0[1] * k, self.0[2] * k, self.0[3] * k])
    }

    pub fn sqr(self) -> Qd {
        self * self
    }

    pub fn floor(self) -> Qd {
        let mut c = [self.0[0].floor(), 0.0, 0.0, 0.0];
        if c[0] == self.0[0] {
            c[1] = self.0[1].floor();
            if c[1] == self.0[1] {
                c[2] = self.0[2].floor();
                if c[2] == self.0[2] {
                    c[3] = self.0[3].floor();
                }
            }
            return Qd::from_components(c);
        }
        Qd(c)
    }

    /// Rounds to the nearest integer, halfway away from zero on the leading
    /// component with a correction from the trailing ones.
    pub fn nint(self) -> Qd {
        fn nint1(d: f64) -> f64 {
            if d == d.floor() {
                d
            } else {
                (d + 0.5).floor()
            }
        }
        let mut c = [nint1(self.0[0]), 0.0, 0.0, 0.0];
        if c[0] == self.0[0] {
            c[1] = nint1(self.0[1]);
            if c[1] == self.0[1] {
                c[2] = nint1(self.0[2]);
                if c[2] == self.0[2] {
                    c[3] = nint1(self.0[3]);
                }
            }
            return Qd::from_components(c);
        }
        if (c[0] - self.0[0]).abs() == 0.5 && self.0[1] < 0.0 {
            c[0] -= 1.0;
        }
        Qd(c)
    }

    pub fn recip(self) -> Qd {
        Qd::ONE / self
    }

    /// Integer power by binary exponentiation.
    pub fn powi(self, n: i32) -> Qd {
        if n == 0 {
            return Qd::ONE;
        }
        let mut base = self;
        let mut e = n.unsigned_abs();
        let mut acc = Qd::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            e >>= 1;
            if e > 0 {
                base = base * base;
            }
        }
        if n < 0 {
            acc.recip()
        } else {
            acc
        }
    }

    /// Square root by Newton iteration on the reciprocal square root.
    pub fn sqrt(self) -> Qd {
        if self.is_zero() {
            return Qd::ZERO;
        }
        if self.is_negative() {
            return Qd([f64::NAN, 0.0, 0.0, 0.0]);
        }
        let mut r = Qd::from_f64(1.0 / self.0[0].sqrt());
        let h = self.mul_pwr2(0.5);
        let half = Qd::from_f64(0.5);
        for _ in 0..3 {
            r = r + r * (half - h * r.sqr());
        }
        r * self
    }

    /// Exponential. Reduces by ln 2, scales the remainder by 2^-16, runs a
    /// short Taylor series for expm1, then squares back up.
    pub fn exp(self) -> Qd {
        let x0 = self.0[0];
        if x0 <= -746.0 {
            return Qd::ZERO;
        }
        if x0 >= 710.0 {
            return Qd([f64::INFINITY, 0.0, 0.0, 0.0]);
        }
        if self.is_zero() {
            return Qd::ONE;
        }

        let k = 65536.0; // 2^16
        let m = (x0 / std::f64::consts::LN_2 + 0.5).floor();
        let r = (self - qd_consts::LN_2 * Qd::from_f64(m)).mul_pwr2(1.0 / k);
        let thresh = 1.0 / k * Qd::EPSILON.0[0];

        let mut p = r.sqr();
        let mut s = r + p.mul_pwr2(0.5);
        p = p * r;
        let mut t = p * qd_consts::INV_FACT[0];
        let mut i = 0;
        loop {
            s = s + t;
            p = p * r;
            i += 1;
            t = p * qd_consts::INV_FACT[i];
            if t.0[0].abs() <= thresh || i >= 9 {
                break;
            }
        }
        s = s + t;

        for _ in 0..16 {
            s = s.mul_pwr2(2.0) + s.sqr();
        }
        s = s + Qd::ONE;
        s.mul_pwr2(2f64.powi(m as i32))
    }

    /// Taylor kernel for sin and cos on |a| <= pi/32.
    fn sincos_taylor(a: Qd) -> (Qd, Qd) {
        if a.is_zero() {
            return (Qd::ZERO, Qd::ONE);
        }
        let thresh = 0.5 * Qd::EPSILON.0[0] * a.0[0].abs();
        let x = -a.sqr();
        let mut s = a;
        let mut p = a;
        let mut i = 0usize;
        loop {
            p = p * x;
            let t = p * qd_consts::INV_FACT[i];
            s = s + t;
            i += 2;
            if i >= qd_consts::INV_FACT.len() || t.0[0].abs() <= thresh {
                break;
            }
        }
        let cos = (Qd::ONE - s.sqr()).sqrt();
        (s, cos)
    }

    /// Reduces self modulo 2π, π/2, π/16; returns (j, k, remainder) with
    /// self ≡ j·π/2 + k·π/16 + remainder, |j| ≤ 2, |k| ≤ 4, |rem| ≤ π/32.
    fn trig_reduce(self) -> (i32, i32, Qd) {
        let z = (self / qd_consts::TWO_PI).nint();
        let r = self - qd_consts::TWO_PI * z;

        let q = (r.0[0] / qd_consts::PI_HALF.0[0] + 0.5).floor();
        let mut t = r - qd_consts::PI_HALF * Qd::from_f64(q);
        let j = q as i32;

        let q = (t.0[0] / qd_consts::PI_SIXTEENTH.0[0] + 0.5).floor();
        t = t - qd_consts::PI_SIXTEENTH * Qd::from_f64(q);
        let k = q as i32;

        debug_assert!((-2..=2).contains(&j), "lost in trig reduction");
        debug_assert!(k.abs() <= 4, "lost in trig reduction");
        (j, k, t)
    }

    pub fn sin(self) -> Qd {
        if self.is_zero() {
            return Qd::ZERO;
        }
        let (j, k, t) = self.trig_reduce();
        let abs_k = k.unsigned_abs() as usize;

        if k == 0 {
            let (sin_t, cos_t) = Qd::sincos_taylor(t);
            return match j {
                0 => sin_t,
                1 => cos_t,
                -1 => -cos_t,
                _ => -sin_t,
            };
        }

        let u = qd_consts::COS_TABLE[abs_k - 1];
        let v = qd_consts::SIN_TABLE[abs_k - 1];
        let (sin_t, cos_t) = Qd::sincos_taylor(t);
        match j {
            0 => {
                if k > 0 {
                    u * sin_t + v * cos_t
                } else {
                    u * sin_t - v * cos_t
                }
            }
            1 => {
                if k > 0 {
                    u * cos_t - v * sin_t
                } else {
                    u * cos_t + v * sin_t
                }
            }
            -1 => {
                if k > 0 {
                    v * sin_t - u * cos_t
                } else {
                    -u * cos_t - v * sin_t
                }
            }
            _ => {
                if k > 0 {
                    -u * sin_t - v * cos_t
                } else {
                    v * cos_t - u * sin_t
                }
            }
        }
    }

    pub fn cos(self) -> Qd {
        if self.is_zero() {
            return Qd::ONE;
        }
        let (j, k, t) = self.trig_reduce();
        let abs_k = k.unsigned_abs() as usize;

        if k == 0 {
            let (sin_t, cos_t) = Qd::sincos_taylor(t);
            return match j {
                0 => cos_t,
                1 => -sin_t,
                -1 => sin_t,
                _ => -cos_t,
            };
        }

        let u = qd_consts::COS_TABLE[abs_k - 1];
        let v = qd_consts::SIN_TABLE[abs_k - 1];
        let (sin_t, cos_t) = Qd::sincos_taylor(t);
        match j {
            0 => {
                if k > 0 {
                    u * cos_t - v * sin_t
                } else {
                    u * cos_t + v * sin_t
                }
            }
            1 => {
                if k > 0 {
                    -u * sin_t - v * cos_t
                } else {
                    v * cos_t - u * sin_t
                }
            }
            -1 => {
                if k > 0 {
                    u * sin_t + v * cos_t
                } else {
                    u * sin_t - v * cos_t
                }
            }
            _ => {
                if k > 0 {
                    v * sin_t - u * cos_t
                } else {
                    -u * cos_t - v * sin_t
                }
            }
        }
    }

    /// Full-precision decimal string, round-trippable through `FromStr` to
    /// within a couple of units in the last place.
    pub fn to_decimal_string(&self, sig_digits: usize) -> String {
        let n = sig_digits.max(1);
        if !self.is_finite() {
            return format!("{}", self.0[0]);
        }
        if self.is_zero() {
            return "0".to_string();
        }
        let neg = self.is_negative();
        let mut r = self.abs();

        let mut e = r.0[0].abs().log10().floor() as i32;
        r = if e > 0 {
            r * Qd::from_f64(10.0).powi(e).recip()
        } else if e < 0 {
            r * Qd::from_f64(10.0).powi(-e)
        } else {
            r
        };
        while r.0[0] >= 10.0 {
            r = r / Qd::from_f64(10.0);
            e += 1;
        }
        while r.0[0] < 1.0 {
            r = r * Qd::from_f64(10.0);
            e -= 1;
        }

        // one guard digit for rounding
        let mut digits = vec![0i32; n + 1];
        for d in digits.iter_mut() {
            let dig = r.0[0] as i32;
            *d = dig;
            r = (r - Qd::from_int(dig as i64)) * Qd::from_f64(10.0);
        }
        // repair drift from the repeated multiply
        for i in (1..=n).rev() {
            if digits[i] < 0 {
                digits[i] += 10;
                digits[i - 1] -= 1;
            } else if digits[i] > 9 {
                digits[i] -= 10;
                digits[i - 1] += 1;
            }
        }
        // round on the guard digit
        if digits[n] >= 5 {
            let mut i = n - 1;
            loop {
                digits[i] += 1;
                if digits[i] < 10 {
                    break;
                }
                digits[i] = 0;
                if i == 0 {
                    // 9.99... rolled over to 10.0...
                    digits[0] = 1;
                    e += 1;
                    break;
                }
                i -= 1;
            }
        }
        digits.truncate(n);

        let mut out = String::with_capacity(n + 8);
        if neg {
            out.push('-');
        }
        out.push(char::from_digit(digits[0] as u32, 10).unwrap());
        if n > 1 {
            out.push('.');
            for &d in &digits[1..] {
                out.push(char::from_digit(d as u32, 10).unwrap());
            }
        }
        out.push('e');
        out.push_str(&e.to_string());
        out
    }
}

impl PartialEq for Qd {
    fn eq(&self, other: &Self) -> bool {
        self.0 == other.0
    }
}

impl PartialOrd for Qd {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        for i in 0..4 {
            match self.0[i].partial_cmp(&other.0[i]) {
                Some(Ordering::Equal) => continue,
                o => return o,
            }
        }
        Some(Ordering::Equal)
    }
}

impl Neg for Qd {
    type Output = Qd;
    #[inline]
    fn neg(self) -> Qd {
        Qd([-self.0[0], -self.0[1], -self.0[2], -self.0[3]])
    }
}

impl Add for Qd {
    type Output = Qd;
    /// Accurate addition: merges the components of both operands in order of
    /// decreasing magnitude and renormalizes.
    fn add(self, rhs: Qd) -> Qd {
        let a = self.0;
        let b = rhs.0;
        let mut i = 0usize;
        let mut j = 0usize;
        let mut k = 0usize;
        let mut x = [0.0f64; 4];

        let mut u = if a[i].abs() > b[j].abs() {
            let t = a[i];
            i += 1;
            t
        } else {
            let t = b[j];
            j += 1;
            t
        };
        let mut v = if i < 4 && (j >= 4 || a[i].abs() > b[j].abs()) {
            let t = a[i];
            i += 1;
            t
        } else {
            let t = b[j];
            j += 1;
            t
        };
        let (nu, nv) = quick_two_sum(u, v);
        u = nu;
        v = nv;

        while k < 4 {
            if i >= 4 && j >= 4 {
                x[k] = u;
                if k < 3 {
                    k += 1;
                    x[k] = v;
                }
                break;
            }
            let t = if i >= 4 {
                let t = b[j];
                j += 1;
                t
            } else if j >= 4 || a[i].abs() > b[j].abs() {
                let t = a[i];
                i += 1;
                t
            } else {
                let t = b[j];
                j += 1;
                t
            };
            let s = quick_three_accum(&mut u, &mut v, t);
            if s != 0.0 {
                x[k] = s;
                k += 1;
            }
        }

        // fold any leftover input into the lowest slot
        for idx in i..4 {
            x[3] += a[idx];
        }
        for idx in j..4 {
            x[3] += b[idx];
        }

        Qd::from_components(x)
    }
}

impl Sub for Qd {
    type Output = Qd;
    #[inline]
    fn sub(self, rhs: Qd) -> Qd {
        self + (-rhs)
    }
}

impl Mul for Qd {
    type Output = Qd;
    /// Full product with all O(eps^3) cross terms.
    fn mul(self, rhs: Qd) -> Qd {
        let a = self.0;
        let b = rhs.0;

        let (p0, mut q0) = two_prod(a[0], b[0]);
        let (mut p1, mut q1) = two_prod(a[0], b[1]);
        let (mut p2, mut q2) = two_prod(a[1], b[0]);
        let (mut p3, q3) = two_prod(a[0], b[2]);
        let (mut p4, q4) = two_prod(a[1], b[1]);
        let (mut p5, q5) = two_prod(a[2], b[0]);

        three_sum(&mut p1, &mut p2, &mut q0);

        // six-three sum of (p2, q1, q2, p3, p4, p5)
        three_sum(&mut p2, &mut q1, &mut q2);
        three_sum(&mut p3, &mut p4, &mut p5);
        let (s0, t0) = two_sum(p2, p3);
        let (s1, t1) = two_sum(q1, p4);
        let mut s2 = q2 + p5;
        let (s1, t0) = two_sum(s1, t0);
        s2 += t0 + t1;

        let s1 = s1 + (a[0] * b[3] + a[1] * b[2] + a[2] * b[1] + a[3] * b[0] + q0 + q3 + q4 + q5);

        let mut c0 = p0;
        let mut c1 = p1;
        let mut c2 = s0;
        let mut c3 = s1;
        renorm5(&mut c0, &mut c1, &mut c2, &mut c3, s2);
        Qd([c0, c1, c2, c3])
    }
}

impl Div for Qd {
    type Output = Qd;
    /// Long division: five quotient terms, then renormalize.
    fn div(self, rhs: Qd) -> Qd {
        let q0 = self.0[0] / rhs.0[0];
        let mut r = self - rhs * Qd::from_f64(q0);
        let q1 = r.0[0] / rhs.0[0];
        r = r - rhs * Qd::from_f64(q1);
        let q2 = r.0[0] / rhs.0[0];
        r = r - rhs * Qd::from_f64(q2);
        let q3 = r.0[0] / rhs.0[0];
        r = r - rhs * Qd::from_f64(q3);
        let q4 = r.0[0] / rhs.0[0];

        let mut c0 = q0;
        let mut c1 = q1;
        let mut c2 = q2;
        let mut c3 = q3;
        renorm5(&mut c0, &mut c1, &mut c2, &mut c3, q4);
        Qd([c0, c1, c2, c3])
    }
}

impl AddAssign for Qd {
    fn add_assign(&mut self, rhs: Qd) {
        *self = *self + rhs;
    }
}
impl SubAssign for Qd {
    fn sub_assign(&mut self, rhs: Qd) {
        *self = *self - rhs;
    }
}
impl MulAssign for Qd {
    fn mul_assign(&mut self, rhs: Qd) {
        *self = *self * rhs;
    }
}
impl DivAssign for Qd {
    fn div_assign(&mut self, rhs: Qd) {
        *self = *self / rhs;
    }
}

impl From<f64> for Qd {
    fn from(v: f64) -> Qd {
        Qd::from_f64(v)
    }
}

impl fmt::Display for Qd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(64);
        f.pad(&self.to_decimal_string(digits))
    }
}

impl FromStr for Qd {
    type Err = ScalarParseError;

    /// Parses a plain or scientific decimal. Digits are consumed in chunks of
    /// fifteen so every intermediate step is exact in a double.
    fn from_str(s: &str) -> Result<Qd, ScalarParseError> {
        let s = s.trim();
        let bad = || ScalarParseError {
            input: s.to_string(),
        };
        if s.is_empty() {
            return Err(bad());
        }
        let bytes = s.as_bytes();
        let mut pos = 0usize;
        let mut neg = false;
        match bytes[pos] {
            b'+' => pos += 1,
            b'-' => {
                neg = true;
                pos += 1;
            }
            _ => {}
        }

        let mut digits = String::new();
        let mut frac_len = 0i32;
        let mut seen_point = false;
        let mut seen_digit = false;
        while pos < bytes.len() {
            match bytes[pos] {
                b'0'..=b'9' => {
                    digits.push(bytes[pos] as char);
                    if seen_point {
                        frac_len += 1;
                    }
                    seen_digit = true;
                    pos += 1;
                }
                b'.' if !seen_point => {
                    seen_point = true;
                    pos += 1;
                }
                b'e' | b'E' => break,
                _ => return Err(bad()),
            }
        }
        if !seen_digit {
            return Err(bad());
        }

        let mut exp10 = 0i32;
        if pos < bytes.len() {
            // at 'e' or 'E'
            let tail = &s[pos + 1..];
            exp10 = tail.parse::<i32>().map_err(|_| bad())?;
        }

        let mut r = Qd::ZERO;
        let mut rest = digits.as_str();
        while !rest.is_empty() {
            let take = rest.len().min(15);
            let (chunk, tail) = rest.split_at(take);
            let v = chunk.parse::<u64>().map_err(|_| bad())?;
            r = r * Qd::from_f64(10f64.powi(take as i32)) + Qd::from_f64(v as f64);
            rest = tail;
        }

        let e = exp10 - frac_len;
        if e > 0 {
            r = r * Qd::from_f64(10.0).powi(e);
        } else if e < 0 {
            r = r / Qd::from_f64(10.0).powi(-e);
        }
        Ok(if neg { -r } else { r })
    }
}
