//! Compensated (Neumaier) summation.
//!
//! Mesh-level integration accumulates thousands of per-element values whose
//! partial sums can exceed individual terms by orders of magnitude; the
//! running compensation keeps the accumulated rounding error at a few ulps
//! independent of length, and a fixed accumulation order keeps results
//! bit-identical across runs.

use crate::scalar::Real;

/// Running compensated sum (Neumaier's variant of Kahan's algorithm).
#[derive(Debug, Clone, Copy)]
pub struct CompensatedSum<R> {
    sum: R,
    compensation: R,
}

impl<R: Real> CompensatedSum<R> {
    pub fn new() -> Self {
        CompensatedSum {
            sum: R::zero(),
            compensation: R::zero(),
        }
    }

    /// Adds one term, steering the lost low-order part into the
    /// compensation no matter which operand dominates.
    pub fn add(&mut self, x: R) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation = self.compensation + ((self.sum - t) + x);
        } else {
            self.compensation = self.compensation + ((x - t) + self.sum);
        }
        self.sum = t;
    }

    /// The compensated total.
    pub fn value(&self) -> R {
        self.sum + self.compensation
    }
}

impl<R: Real> Default for CompensatedSum<R> {
    fn default() -> Self {
        Self::new()
    }
}

impl<R: Real> FromIterator<R> for CompensatedSum<R> {
    fn from_iter<I: IntoIterator<Item = R>>(iter: I) -> Self {
        let mut acc = CompensatedSum::new();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Qd;

    #[test]
    fn recovers_terms_cancelled_by_a_large_intermediate() {
        // Naive left-to-right summation returns 0 here.
        let terms = [1.0, 1e100, 1.0, -1e100];
        let acc: CompensatedSum<f64> = terms.iter().copied().collect();
        assert_eq!(acc.value(), 2.0);
    }

    #[test]
    fn matches_exact_sum_on_alternating_series() {
        let mut acc = CompensatedSum::<f64>::new();
        let mut exact = 0.0f64;
        for i in 1..=10_000 {
            let x = if i % 2 == 0 { 0.1 } else { -0.05 };
            acc.add(x);
            exact += x;
        }
        // 5000·0.1 − 5000·0.05 = 250 exactly in decimal.
        assert!((acc.value() - 250.0).abs() < 1e-12);
        assert!((acc.value() - 250.0).abs() <= (exact - 250.0).abs());
    }

    #[test]
    fn deterministic_for_a_fixed_order() {
        let terms: Vec<f64> = (0..1000).map(|i| ((i * 37 + 11) % 997) as f64 / 997.0).collect();
        let a: CompensatedSum<f64> = terms.iter().copied().collect();
        let b: CompensatedSum<f64> = terms.iter().copied().collect();
        assert_eq!(a.value().to_bits(), b.value().to_bits());
    }

    #[test]
    fn extended_mode_accumulation() {
        let mut acc = CompensatedSum::<Qd>::new();
        for _ in 0..81 {
            acc.add(Qd::from_ratio(1, 81));
        }
        let err = (acc.value() - Qd::ONE).abs();
        assert!(err < Qd::EPSILON * Qd::from_f64(16.0), "err = {err}");
    }
}
