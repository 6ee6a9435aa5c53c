//! Extended-precision scalar and complex arithmetic.
//!
//! The Bernstein constructions in `approx` expand polynomials whose
//! intermediate coefficients grow like `(3 + c)^n / d^n` while the final
//! values stay moderate, so everything is computed in software floats wide
//! enough that the cancellation is exact to well below one f64 ulp, and only
//! the finished coefficients are rounded back to f64.

use astro_float::{BigFloat, Consts, RoundingMode, Sign};
use num_complex::Complex64;

use crate::error::{DelayError, Result};

const RM: RoundingMode = RoundingMode::ToEven;

/// Working precision for one construction: enough bits that blown-up
/// intermediates still leave 320 bits of headroom under the result scale.
pub fn required_bits(n: usize, alpha: f64, theta: f64) -> Result<usize> {
    let c = (-alpha * theta).exp();
    let d = 1.0 - c;
    if d <= 0.0 {
        return Err(DelayError::domain(format!(
            "alpha * theta = {} underflows the Bernstein substitution",
            alpha * theta
        )));
    }
    let per_order = ((3.0 + c) / d).log2().max(1.0);
    let bits = (n as f64) * per_order + 320.0;
    if !bits.is_finite() {
        return Err(DelayError::numeric("precision estimate overflowed"));
    }
    let p = 64 * ((bits / 64.0).ceil() as usize).max(4);
    if p > 16384 {
        return Err(DelayError::capacity(format!(
            "order {n} with alpha {alpha} and theta {theta} needs {p} bits of \
             working precision (cap 16384)"
        )));
    }
    Ok(p)
}

/// Precision context: all operations round to `p` bits, to nearest-even.
pub struct HpCtx {
    pub p: usize,
    cc: Consts,
}

impl HpCtx {
    pub fn new(p: usize) -> Result<Self> {
        let cc = Consts::new()
            .map_err(|e| DelayError::numeric(format!("constants cache: {e:?}")))?;
        Ok(HpCtx { p, cc })
    }

    pub fn f(&self, x: f64) -> BigFloat {
        BigFloat::from_f64(x, self.p)
    }

    pub fn add(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.add(b, self.p, RM)
    }

    pub fn sub(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.sub(b, self.p, RM)
    }

    pub fn mul(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.mul(b, self.p, RM)
    }

    pub fn div(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.div(b, self.p, RM)
    }

    pub fn exp(&mut self, a: &BigFloat) -> BigFloat {
        a.exp(self.p, RM, &mut self.cc)
    }

    pub fn ln(&mut self, a: &BigFloat) -> BigFloat {
        a.ln(self.p, RM, &mut self.cc)
    }

    pub fn sin_cos(&mut self, a: &BigFloat) -> (BigFloat, BigFloat) {
        let s = a.sin(self.p, RM, &mut self.cc);
        let c = a.cos(self.p, RM, &mut self.cc);
        (s, c)
    }

    pub fn c_from(&self, z: Complex64) -> HpC {
        HpC {
            re: self.f(z.re),
            im: self.f(z.im),
        }
    }

    pub fn c_add(&self, a: &HpC, b: &HpC) -> HpC {
        HpC {
            re: self.add(&a.re, &b.re),
            im: self.add(&a.im, &b.im),
        }
    }

    pub fn c_mul_real(&self, a: &HpC, r: &BigFloat) -> HpC {
        HpC {
            re: self.mul(&a.re, r),
            im: self.mul(&a.im, r),
        }
    }

    /// `e^z` for complex `z` split into `e^re (cos im + i sin im)`.
    pub fn c_exp(&mut self, z: &HpC) -> HpC {
        let mag = self.exp(&z.re);
        let (s, c) = self.sin_cos(&z.im);
        HpC {
            re: self.mul(&mag, &c),
            im: self.mul(&mag, &s),
        }
    }

    /// `base^w` for a strictly positive real base and complex exponent.
    pub fn c_pow(&mut self, base: &BigFloat, w: &HpC) -> Result<HpC> {
        if base.is_zero() || base.is_negative() {
            return Err(DelayError::numeric(
                "complex power requires a strictly positive real base",
            ));
        }
        let lnb = self.ln(base);
        let arg = self.c_mul_real(w, &lnb);
        Ok(self.c_exp(&arg))
    }
}

/// Complex number as a pair of `BigFloat` components.
#[derive(Clone, Debug)]
pub struct HpC {
    pub re: BigFloat,
    pub im: BigFloat,
}

impl HpC {
    pub fn zero(ctx: &HpCtx) -> Self {
        ctx.c_from(Complex64::new(0.0, 0.0))
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(to_f64(&self.re), to_f64(&self.im))
    }
}

/// Correctly rounded conversion to f64 (round to nearest, ties to even).
///
/// `as_raw_parts` exposes the MSB-aligned mantissa as little-endian words, so
/// the value is `sign * M * 2^(e - 64*len)` with the top bit of the last word
/// set. The top 53 bits become the significand; the bits below feed the
/// rounding decision, with the lower words folded into a sticky bit.
pub fn to_f64(x: &BigFloat) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x.is_inf_pos() {
        return f64::INFINITY;
    }
    if x.is_inf_neg() {
        return f64::NEG_INFINITY;
    }
    if x.is_zero() {
        return 0.0;
    }
    let Some((words, _prec, sign, exp, _)) = x.as_raw_parts() else {
        return f64::NAN;
    };
    let nw = words.len();
    debug_assert!(nw >= 1 && words[nw - 1] >> 63 == 1, "mantissa not normalized");
    let hi = words[nw - 1] as u128;
    let lo = if nw >= 2 { words[nw - 2] as u128 } else { 0 };
    let top: u128 = (hi << 64) | lo;
    let mut sticky = false;
    for &w in &words[..nw.saturating_sub(2)] {
        if w != 0 {
            sticky = true;
            break;
        }
    }
    // fraction = top / 2^128 ∈ [1/2, 1); value = sign * fraction * 2^exp.
    let mut m = (top >> (128 - 53)) as u64;
    let rest = top & ((1u128 << (128 - 53)) - 1);
    let half = 1u128 << (128 - 53 - 1);
    if rest > half || (rest == half && (sticky || m & 1 == 1)) {
        m += 1;
        if m == 1u64 << 53 {
            // Carry out of the significand: renormalize.
            return assemble(sign, m >> 1, exp as i64 + 1);
        }
    }
    assemble(sign, m, exp as i64)
}

fn assemble(sign: Sign, m: u64, exp: i64) -> f64 {
    // value = m * 2^(exp - 53), m ∈ [2^52, 2^53).
    let e2 = exp - 53;
    let mag = if (-900..=971).contains(&e2) {
        (m as f64) * (2f64).powi(e2 as i32)
    } else if e2 > 971 {
        f64::INFINITY
    } else {
        // powi(k) for k < -1023 overflows in the reciprocal, so split the
        // power. Both factors are exact, the single rounding happens in the
        // final product (subnormal-aware), and deep underflow gives 0.
        (m as f64) * (2f64).powi(-600) * (2f64).powi((e2 + 600) as i32)
    };
    match sign {
        Sign::Neg => -mag,
        Sign::Pos => mag,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn roundtrip_simple() {
        let ctx = HpCtx::new(192).unwrap();
        for x in [
            0.0,
            1.0,
            -1.0,
            0.1,
            -3.6,
            1e300,
            -1e300,
            1e-300,
            std::f64::consts::PI,
            f64::MIN_POSITIVE,
        ] {
            let b = ctx.f(x);
            assert_eq!(to_f64(&b), x, "roundtrip failed for {x}");
        }
    }

    #[test]
    fn tie_rounds_to_even() {
        let ctx = HpCtx::new(256).unwrap();
        // 1 + 2^-53 is exactly halfway between 1 and the next f64 up.
        let x = ctx.add(&ctx.f(1.0), &ctx.f(2f64.powi(-53)));
        assert_eq!(to_f64(&x), 1.0);
        // Nudging it by 2^-120 (a bit in a lower word) must break the tie up.
        let y = ctx.add(&x, &ctx.f(2f64.powi(-120)));
        assert_eq!(to_f64(&y), 1.0 + 2f64.powi(-52));
        // 1 + 3*2^-53 ties between m = 2^52+1 and 2^52+2; even picks the latter.
        let z = ctx.add(&ctx.f(1.0), &ctx.f(3.0 * 2f64.powi(-53)));
        assert_eq!(to_f64(&z), 1.0 + 2.0 * 2f64.powi(-52));
        // 2 - 2^-60 rounds up with a carry out of the 53-bit significand.
        let w = ctx.sub(&ctx.f(2.0), &ctx.f(2f64.powi(-60)));
        assert_eq!(to_f64(&w), 2.0);
    }

    #[test]
    fn arithmetic_matches_f64_for_exact_cases() {
        let ctx = HpCtx::new(192).unwrap();
        let a = ctx.f(1.5);
        let b = ctx.f(-5.1);
        assert_eq!(to_f64(&ctx.add(&a, &b)), 1.5 + -5.1);
        assert_eq!(to_f64(&ctx.mul(&a, &b)), 1.5 * -5.1);
    }

    #[test]
    fn exp_ln_consistency() {
        let mut ctx = HpCtx::new(256).unwrap();
        let x = ctx.f(0.37);
        let e = ctx.exp(&x);
        let back = ctx.ln(&e);
        let diff = to_f64(&ctx.sub(&back, &x)).abs();
        assert!(diff < 1e-60, "exp/ln roundtrip off by {diff}");
        // [DERIVED] exp of the binary64 nearest 0.37, to 17 digits.
        assert!((to_f64(&e) - 1.447_734_614_663_324_5).abs() < 1e-15);
    }

    #[test]
    fn complex_pow_matches_f64_path() {
        let mut ctx = HpCtx::new(256).unwrap();
        // [DERIVED] 0.7^(-(1+2i)) = e^{-(1+2i) ln 0.7}
        let base = ctx.f(0.7);
        let w = ctx.c_from(Complex64::new(-1.0, -2.0));
        let got = ctx.c_pow(&base, &w).unwrap().to_c64();
        let want = Complex64::new(0.7, 0.0).powc(Complex64::new(-1.0, -2.0));
        assert!((got - want).norm() < 1e-13 * want.norm());
    }

    #[test]
    fn required_bits_policy() {
        // alpha=1, theta=1: (3+c)/d ≈ 5.33, log2 ≈ 2.41; n=40 → ceil((96.6+320)/64)*64.
        let p = required_bits(40, 1.0, 1.0).unwrap();
        assert_eq!(p, 448);
        assert!(required_bits(1, 1.0, 1.0).unwrap() >= 320);
        assert!(required_bits(100000, 1.0, 1.0).is_err());
    }

    proptest! {
        #[test]
        fn roundtrip_random(x in prop::num::f64::NORMAL) {
            let ctx = HpCtx::new(128).unwrap();
            prop_assert_eq!(to_f64(&ctx.f(x)), x);
        }

        #[test]
        fn sum_matches_twosum(a in -1e15f64..1e15, b in -1e15f64..1e15) {
            // 128-bit addition of two f64s rounds back to fl(a+b).
            let ctx = HpCtx::new(128).unwrap();
            let s = ctx.add(&ctx.f(a), &ctx.f(b));
            prop_assert_eq!(to_f64(&s), a + b);
        }
    }
}
