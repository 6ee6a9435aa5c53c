//! Compensated accumulation and double-double arithmetic.
//!
//! Kernel coefficients span many orders of magnitude (binomial-expanded
//! constructions carry near-cancelling terms up to ~1e17), so plain summation
//! would cost up to ~1e2 absolute error. Neumaier's variant of Kahan summation
//! keeps a *sum* within one ulp, but cannot repair errors already committed in
//! forming the summands; where products themselves need to cancel exactly
//! (polynomial evaluation with huge coefficients) the `Dd` double-double type
//! carries ~106 significand bits through the whole computation.

use num_complex::Complex64;

#[derive(Clone, Copy, Default)]
pub struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

#[derive(Clone, Copy, Default)]
pub struct NeumaierC {
    re: Neumaier,
    im: Neumaier,
}

impl NeumaierC {
    pub fn add(&mut self, z: Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

/// Unevaluated sum `hi + lo` with `|lo| ≤ ulp(hi)/2`: an error-free f64 pair.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

/// Error-free sum of two f64 (Knuth two-sum, no magnitude precondition).
#[inline]
fn two_sum(a: f64, b: f64) -> Dd {
    let s = a + b;
    let bb = s - a;
    Dd {
        hi: s,
        lo: (a - (s - bb)) + (b - bb),
    }
}

/// Renormalizing sum; requires `|a| ≥ |b|` or a = 0.
#[inline]
fn quick_two_sum(a: f64, b: f64) -> Dd {
    let s = a + b;
    Dd { hi: s, lo: b - (s - a) }
}

/// Error-free product via fused multiply-add.
#[inline]
fn two_prod(a: f64, b: f64) -> Dd {
    let p = a * b;
    Dd {
        hi: p,
        lo: a.mul_add(b, -p),
    }
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };

    #[inline]
    pub fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    #[inline]
    pub fn add(self, rhs: Dd) -> Dd {
        let s = two_sum(self.hi, rhs.hi);
        quick_two_sum(s.hi, s.lo + self.lo + rhs.lo)
    }

    #[inline]
    pub fn mul_f64(self, b: f64) -> Dd {
        let p = two_prod(self.hi, b);
        quick_two_sum(p.hi, p.lo + self.lo * b)
    }

    /// `t^k` built by repeated double-double multiplication.
    pub fn pow_f64(t: f64, k: u32) -> Dd {
        let mut acc = Dd::from_f64(1.0);
        for _ in 0..k {
            acc = acc.mul_f64(t);
        }
        acc
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.hi + self.lo
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_cancelled_tail() {
        // 1e17 + 1 - 1e17 loses the 1 in plain f64 summation.
        let mut acc = Neumaier::default();
        acc.add(1e17);
        acc.add(1.0);
        acc.add(-1e17);
        assert_eq!(acc.value(), 1.0);
    }

    #[test]
    fn complex_components_independent() {
        let mut acc = NeumaierC::default();
        acc.add(Complex64::new(1e16, -1.0));
        acc.add(Complex64::new(2.0, 1e16));
        acc.add(Complex64::new(-1e16, -1e16));
        assert_eq!(acc.value(), Complex64::new(2.0, -1.0));
    }

    #[test]
    fn dd_product_is_error_free() {
        // [TRIVIAL] (1 + 2^-30)² = 1 + 2^-29 + 2^-60: the tail lands in lo.
        let a = 1.0 + (2f64).powi(-30);
        let p = two_prod(a, a);
        assert_eq!(p.hi, 1.0 + (2f64).powi(-29));
        assert_eq!(p.lo, (2f64).powi(-60));
    }

    #[test]
    fn dd_sum_keeps_112_bits() {
        let s = Dd::from_f64(1e17).add(Dd::from_f64(0.25));
        assert_eq!(s.hi, 1e17);
        assert_eq!(s.lo, 0.25);
        let back = s.add(Dd::from_f64(-1e17));
        assert_eq!(back.value(), 0.25);
    }

    #[test]
    fn dd_pow_matches_exact_small_case() {
        // 1.5^5 = 7.59375 is exact in f64; the dd chain must agree exactly.
        let p = Dd::pow_f64(1.5, 5);
        assert_eq!(p.value(), 7.59375);
        assert_eq!(p.lo, 0.0);
    }
}
