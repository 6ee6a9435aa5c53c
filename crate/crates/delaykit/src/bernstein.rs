//! Bernstein-polynomial coefficient constructions in extended precision.
//!
//! Under the substitution `x = e^{−αt}` the elementary delay becomes a
//! continuous function on `[c, 1]`, `c = e^{−αϑ}`, and Bernstein operators
//! give uniformly convergent polynomial approximants in `x`, i.e. sums of
//! stable exponentials `e^{−αjt}`. Expanding the Bernstein form into the
//! monomial basis is catastrophically ill-conditioned — intermediates grow
//! like `((3+c)/d)^n` while the result stays O(1) — so all expansions run in
//! `hp` arithmetic and only final coefficients are rounded to f64.

use num_complex::Complex64;

use crate::error::{DelayError, Result};
use crate::hp::{required_bits, to_f64, HpC, HpCtx};

/// Coefficients of the ψ₀ (unit-target) Bernstein construction, as hi/lo
/// f64 pairs per exponent `e^{−αjt}`, `j = 0..n`.
///
/// The coefficients are huge alternating integers (about `1e17` at `n = 40`)
/// whose sum is O(1); a single f64 per coefficient would bury the value under
/// storage noise, and the pair keeps evaluation error near the true value's
/// own scale when summed with compensation.
pub fn theta0_pairs(theta: f64, alpha: f64, n: usize) -> Result<Vec<(f64, f64)>> {
    let p = required_bits(n, alpha, theta)?;
    let mut ctx = HpCtx::new(p)?;
    let at = ctx.mul(&ctx.f(alpha), &ctx.f(theta));
    let c = ctx.exp(&at.neg());
    // Inclusive step: ψ₀(k/n) = 1 iff k/n ≥ c, with ψ₀(0) = 0.
    let n_hp = ctx.f(n as f64);
    let psi: Vec<bool> = (0..=n)
        .map(|k| {
            if k == 0 {
                false
            } else {
                let xi = ctx.div(&ctx.f(k as f64), &n_hp);
                matches!(xi.cmp(&c), Some(o) if o >= 0)
            }
        })
        .collect();
    let binom_n = binomial_row(&ctx, n);
    let mut b: Vec<_> = (0..=n).map(|_| ctx.f(0.0)).collect();
    for k in 0..=n {
        if !psi[k] {
            continue;
        }
        // C(n,k) x^k (1−x)^{n−k} = Σ_m C(n,k) C(n−k,m) (−1)^m x^{k+m}
        let row = binomial_row(&ctx, n - k);
        for (m, cm) in row.iter().enumerate() {
            let mut add = ctx.mul(&binom_n[k], cm);
            if m % 2 == 1 {
                add = add.neg();
            }
            b[k + m] = ctx.add(&b[k + m], &add);
        }
    }
    Ok(b
        .iter()
        .map(|v| {
            let hi = to_f64(v);
            let lo = to_f64(&ctx.sub(v, &ctx.f(hi)));
            (hi, lo)
        })
        .collect())
}

/// Monomial coefficients `b_j` of the θ_λ Bernstein construction
/// `(1−c)^{−n} Σ_k C(n,k) Φ_λ(k/n) (x−c)^k (1−x)^{n−k}`, kept in hp.
///
/// `b_0` is returned alongside because the caller replaces that constant
/// (unstable) aggregate by a stable surrogate and needs it at full precision.
pub fn theta_lambda_coeffs(
    lambda: Complex64,
    theta: f64,
    alpha: f64,
    n: usize,
    ctx: &mut HpCtx,
) -> Result<Vec<HpC>> {
    let at = ctx.mul(&ctx.f(alpha), &ctx.f(theta));
    let c = ctx.exp(&at.neg());
    let d = ctx.sub(&ctx.f(1.0), &c);
    let mut dn = ctx.f(1.0);
    for _ in 0..n {
        dn = ctx.mul(&dn, &d);
    }
    // Exponent of Φ: −λ/α.
    let alpha_hp = ctx.f(alpha);
    let w_exp = HpC {
        re: ctx.div(&ctx.f(lambda.re), &alpha_hp).neg(),
        im: ctx.div(&ctx.f(lambda.im), &alpha_hp).neg(),
    };
    let binom_n = binomial_row(ctx, n);
    // Powers (x−c)^k, coefficients in x, built incrementally.
    let mut xc_pows: Vec<Vec<_>> = Vec::with_capacity(n + 1);
    xc_pows.push(vec![ctx.f(1.0)]);
    for k in 1..=n {
        let prev = &xc_pows[k - 1];
        let mut cur: Vec<_> = (0..=k).map(|_| ctx.f(0.0)).collect();
        for (i, pi) in prev.iter().enumerate() {
            cur[i + 1] = ctx.add(&cur[i + 1], pi);
            let shifted = ctx.mul(pi, &c);
            cur[i] = ctx.sub(&cur[i], &shifted);
        }
        xc_pows.push(cur);
    }
    let n_hp = ctx.f(n as f64);
    let mut b: Vec<HpC> = (0..=n).map(|_| HpC::zero(ctx)).collect();
    for k in 0..=n {
        // Φ_λ(k/n) = (c + d·k/n)^{−λ/α}
        let mu = ctx.div(&ctx.f(k as f64), &n_hp);
        let base = ctx.add(&c, &ctx.mul(&d, &mu));
        let phi = ctx.c_pow(&base, &w_exp)?;
        let scale = ctx.div(&binom_n[k], &dn);
        let wk = ctx.c_mul_real(&phi, &scale);
        // (1−x)^{n−k} = Σ_m C(n−k,m)(−1)^m x^m
        let row = binomial_row(ctx, n - k);
        for (i, xci) in xc_pows[k].iter().enumerate() {
            let u = ctx.c_mul_real(&wk, xci);
            for (m, cm) in row.iter().enumerate() {
                let mut add = ctx.c_mul_real(&u, cm);
                if m % 2 == 1 {
                    add.re = add.re.neg();
                    add.im = add.im.neg();
                }
                b[i + m] = ctx.c_add(&b[i + m], &add);
            }
        }
    }
    Ok(b)
}

/// Stable surrogate for the constant function 1 on `[0, ϑ]`: a polynomial
/// `q(x) = 1 − T_m(x̃(x))/T_m(x̃(0))` in `x = e^{−αt}` with `q(0) = 0`
/// structurally (no constant term, hence no unstable part).
///
/// `x̃` maps `[c, 1]` onto `[−1, 1]`, so the sup error on the support is
/// exactly `1/|T_m(x̃(0))|`, which decays geometrically in `m`. The degree is
/// chosen to minimize that error plus the f64 coefficient-storage noise
/// `Σ|q_j|·2^{−52}`; past the optimum the coefficients blow up faster than
/// the error shrinks.
pub struct UnitSurrogate {
    pub m: usize,
    /// `q_1..q_m` in hp (the constant `q_0` is exactly zero).
    pub coeffs: Vec<astro_float::BigFloat>,
    /// Sup error `1/|T_m(x̃(0))|` on the support.
    #[allow(dead_code)]
    pub sup_err: f64,
}

pub fn unit_surrogate(theta: f64, alpha: f64, cap: usize, ctx: &mut HpCtx) -> Result<UnitSurrogate> {
    if cap < 1 {
        return Err(DelayError::domain("surrogate degree cap must be >= 1"));
    }
    let at = ctx.mul(&ctx.f(alpha), &ctx.f(theta));
    let c = ctx.exp(&at.neg());
    let d = ctx.sub(&ctx.f(1.0), &c);
    // x̃(x) = (2x − (1+c))/d = A·x + B
    let a_lin = ctx.div(&ctx.f(2.0), &d);
    let b_lin = ctx.div(&ctx.add(&ctx.f(1.0), &c), &d).neg();
    let two = ctx.f(2.0);

    let mut t_prev = vec![ctx.f(1.0)];
    let mut t_cur = vec![b_lin.clone(), a_lin.clone()];
    let mut best: Option<(usize, Vec<astro_float::BigFloat>, f64, f64)> = None;
    for m in 1..=cap {
        // Candidate from T_m (held in t_cur).
        let t0 = to_f64(&t_cur[0]);
        if t0 != 0.0 {
            let sup_err = 1.0 / t0.abs();
            let mut coeffs = Vec::with_capacity(m);
            let mut coeff_mass = 0.0f64;
            for tj in t_cur.iter().skip(1) {
                let q = ctx.div(tj, &t_cur[0]).neg();
                coeff_mass += to_f64(&q).abs();
                coeffs.push(q);
            }
            let net = sup_err + coeff_mass * 2f64.powi(-52);
            if best.as_ref().map_or(true, |(_, _, _, bn)| net < *bn) {
                best = Some((m, coeffs, sup_err, net));
            }
        }
        if m == cap {
            break;
        }
        // T_{m+1} = 2(Ax+B)·T_m − T_{m−1}
        let mut next: Vec<_> = (0..=m + 1).map(|_| ctx.f(0.0)).collect();
        for (i, ti) in t_cur.iter().enumerate() {
            let tb = ctx.mul(&ctx.mul(&two, &b_lin), ti);
            next[i] = ctx.add(&next[i], &tb);
            let ta = ctx.mul(&ctx.mul(&two, &a_lin), ti);
            next[i + 1] = ctx.add(&next[i + 1], &ta);
        }
        for (i, ti) in t_prev.iter().enumerate() {
            next[i] = ctx.sub(&next[i], ti);
        }
        t_prev = std::mem::take(&mut t_cur);
        t_cur = next;
    }
    let (m, coeffs, sup_err, _) = best.ok_or_else(|| {
        DelayError::numeric("unit surrogate search found no usable Chebyshev degree")
    })?;
    Ok(UnitSurrogate { m, coeffs, sup_err })
}

/// Row of exact binomial coefficients `C(n, 0..=n)` in hp.
fn binomial_row(ctx: &HpCtx, n: usize) -> Vec<astro_float::BigFloat> {
    let mut row = Vec::with_capacity(n + 1);
    let mut cur = ctx.f(1.0);
    row.push(cur.clone());
    for k in 0..n {
        // C(n,k+1) = C(n,k)·(n−k)/(k+1); exact at working precision.
        cur = ctx.mul(&cur, &ctx.f((n - k) as f64));
        cur = ctx.div(&cur, &ctx.f((k + 1) as f64));
        row.push(cur.clone());
    }
    row
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials_are_exact() {
        let ctx = HpCtx::new(256).unwrap();
        let row = binomial_row(&ctx, 12);
        let want = [1.0, 12.0, 66.0, 220.0, 495.0, 792.0, 924.0];
        for (k, w) in want.iter().enumerate() {
            assert_eq!(to_f64(&row[k]), *w);
            assert_eq!(to_f64(&row[12 - k]), *w);
        }
    }

    #[test]
    fn theta0_order_one_is_single_exponential() {
        // [DERIVED] n=1, α=1, ϑ=1: ψ₀(0)=0, ψ₀(1)=1 → B₁(x) = x, i.e. e^{−t}.
        let pairs = theta0_pairs(1.0, 1.0, 1).unwrap();
        assert_eq!(pairs[0], (0.0, 0.0));
        assert_eq!(pairs[1], (1.0, 0.0));
    }

    #[test]
    fn theta0_psi_cutoff_at_n5() {
        // [DERIVED] α=1, ϑ=1: c = e^{−1} ≈ 0.3679; k/5 < c for k ≤ 1.
        // The lowest surviving x-power is then x^2 (from k = 2).
        let pairs = theta0_pairs(1.0, 1.0, 5).unwrap();
        assert_eq!(pairs[0], (0.0, 0.0));
        assert_eq!(pairs[1], (0.0, 0.0));
        assert!(pairs[2].0 != 0.0);
    }

    #[test]
    fn theta0_coefficient_magnitudes_need_pairs() {
        // At n=40 the raw coefficients reach ~1e17 while summing to O(1);
        // this is the scale that forces the hi/lo representation.
        let pairs = theta0_pairs(1.0, 1.0, 40).unwrap();
        let max_abs = pairs.iter().map(|(h, _)| h.abs()).fold(0.0, f64::max);
        assert!(max_abs > 1e16, "expected huge coefficients, got {max_abs}");
        let sum_hi: f64 = pairs.iter().map(|(h, _)| h).sum();
        let sum_lo: f64 = pairs.iter().map(|(_, l)| l).sum();
        // The compensated total at t=0 is B_n(1) = Σ_k C(n,k)ψ₀(k/n)/2^n-ish…
        // concretely it must be O(1), not O(1e17).
        assert!((sum_hi + sum_lo).abs() < 10.0, "sum {}", sum_hi + sum_lo);
    }

    #[test]
    fn lambda_coeffs_match_quadrature_fingerprint() {
        // [DERIVED] n=1, λ=1, α=1, ϑ=1: w_0 = Φ(0)/d = e/d at k=0 gives
        // b = w_0(1−x) + w_1(x−c) with w_1 = Φ(1)/d = 1/d;
        // b_0 = w_0 − w_1 c = (e − c)/d, b_1 = w_1 − w_0 = (1 − e)/d.
        let mut ctx = HpCtx::new(256).unwrap();
        let b = theta_lambda_coeffs(Complex64::new(1.0, 0.0), 1.0, 1.0, 1, &mut ctx).unwrap();
        let c = (-1.0f64).exp();
        let d = 1.0 - c;
        let e = std::f64::consts::E;
        assert!((b[0].to_c64().re - (e - c) / d).abs() < 1e-14);
        assert!((b[1].to_c64().re - (1.0 - e) / d).abs() < 1e-14);
        assert_eq!(b[0].to_c64().im, 0.0);
    }

    #[test]
    fn surrogate_degree_selection_frozen() {
        // [DERIVED] optimum degrees found by scanning sup error + storage
        // noise in 120-digit arithmetic.
        let mut ctx = HpCtx::new(1024).unwrap();
        let s = unit_surrogate(1.0, 1.0, 16, &mut ctx).unwrap();
        assert_eq!(s.m, 16);
        assert!((s.sup_err - 3.353e-10).abs() < 2e-13, "sup {}", s.sup_err);
        let s40 = unit_surrogate(1.0, 1.0, 40, &mut ctx).unwrap();
        assert_eq!(s40.m, 16, "past the optimum storage noise dominates");
        let s5 = unit_surrogate(1.0, 1.0, 5, &mut ctx).unwrap();
        assert_eq!(s5.m, 5);
        assert!((s5.sup_err - 1.763e-3).abs() < 2e-6);
        let mut ctx2 = HpCtx::new(1024).unwrap();
        let s02 = unit_surrogate(1.0, 0.2, 40, &mut ctx2).unwrap();
        assert_eq!(s02.m, 10);
    }

    #[test]
    fn surrogate_vanishes_at_origin_structurally() {
        // q has no constant term by construction; evaluating the surrogate
        // kernel at x = 0 (t → ∞) gives exactly 0, so no unstable content.
        let mut ctx = HpCtx::new(512).unwrap();
        let s = unit_surrogate(0.7, 1.3, 9, &mut ctx).unwrap();
        assert_eq!(s.coeffs.len(), s.m);
        // And on the support the surrogate is within sup_err of 1.
        let c = (-1.3f64 * 0.7).exp();
        for i in 0..=20 {
            let x = c + (1.0 - c) * i as f64 / 20.0;
            let mut val = 0.0;
            let mut xp = 1.0;
            for q in &s.coeffs {
                xp *= x;
                val += to_f64(q) * xp;
            }
            assert!(
                (val - 1.0).abs() <= s.sup_err * (1.0 + 1e-6) + 1e-12,
                "surrogate off at x={x}: {val} vs 1 ± {}",
                s.sup_err
            );
        }
    }
}
