//! Adaptive Simpson quadrature.
//!
//! One shared panel budget protects every integral in the crate: when the
//! budget is exhausted the partial result is returned inside a
//! `Convergence` error instead of silently looping. Acceptance is local:
//! a panel is kept once the Richardson error estimate drops below the
//! panel's share `tol * len / total_len` of the caller's tolerance.

use num_complex::Complex64;

use crate::error::{DelayError, Result};

/// Hard cap on the number of refined panels per integral.
pub const PANEL_CAP: usize = 1 << 20;

/// Richardson-corrected Simpson value over one panel.
#[inline]
fn simpson(fa: Complex64, fm: Complex64, fb: Complex64, len: f64) -> Complex64 {
    (fa + fm * 4.0 + fb) * (len / 6.0)
}

struct Panel {
    a: f64,
    b: f64,
    fa: Complex64,
    fm: Complex64,
    fb: Complex64,
    coarse: Complex64,
}

/// Integrates a complex-valued function over `[a, b]`.
///
/// `tol_per_len` is the absolute tolerance per unit length; panel acceptance
/// uses `tol_per_len * panel_len`. `min_width` stops refinement of kinks that
/// quadrature can never resolve (the accumulated estimate is still returned).
fn adaptive(
    f: &dyn Fn(f64) -> Complex64,
    a: f64,
    b: f64,
    tol_per_len: f64,
    budget: &mut usize,
) -> Result<Complex64> {
    if a == b {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let min_width = (b - a).abs() * 1e-13;
    let fa = f(a);
    let fb = f(b);
    let m0 = 0.5 * (a + b);
    let fm = f(m0);
    let mut stack = vec![Panel {
        a,
        b,
        fa,
        fm,
        fb,
        coarse: simpson(fa, fm, fb, b - a),
    }];
    let mut acc = Complex64::new(0.0, 0.0);
    let mut exhausted = false;
    while let Some(p) = stack.pop() {
        let len = p.b - p.a;
        let mid = 0.5 * (p.a + p.b);
        let fml = f(p.a + 0.25 * len);
        let fmr = f(mid + 0.25 * len);
        if !(fml.is_finite()
            && fmr.is_finite()
            && p.fa.is_finite()
            && p.fm.is_finite()
            && p.fb.is_finite())
        {
            return Err(DelayError::numeric(format!(
                "integrand not finite inside [{}, {}]",
                p.a, p.b
            )));
        }
        let left = simpson(p.fa, fml, p.fm, 0.5 * len);
        let right = simpson(p.fm, fmr, p.fb, 0.5 * len);
        let fine = left + right;
        let err = (fine - p.coarse) / 15.0;
        // A panel whose midpoint rounds onto an endpoint cannot be split
        // further; without this guard it would re-push itself forever.
        let splittable = p.a < mid && mid < p.b;
        let accept = err.norm() <= tol_per_len * len.abs()
            || len.abs() <= min_width
            || !splittable
            || exhausted;
        if accept {
            acc += fine + err;
            continue;
        }
        *budget = budget.saturating_sub(1);
        if *budget == 0 {
            // Out of panels: drain the stack with the best available values.
            exhausted = true;
        }
        stack.push(Panel {
            a: p.a,
            b: mid,
            fa: p.fa,
            fm: fml,
            fb: p.fm,
            coarse: left,
        });
        stack.push(Panel {
            a: mid,
            b: p.b,
            fa: p.fm,
            fm: fmr,
            fb: p.fb,
            coarse: right,
        });
    }
    if exhausted {
        Err(DelayError::Convergence { best: acc.re })
    } else {
        Ok(acc)
    }
}

/// Integral of a complex integrand over `[a, b]` to absolute tolerance `tol`.
pub fn integrate_complex(
    f: impl Fn(f64) -> Complex64,
    a: f64,
    b: f64,
    tol: f64,
) -> Result<Complex64> {
    check_range(a, b, tol)?;
    let mut budget = PANEL_CAP;
    let total = (b - a).abs().max(f64::MIN_POSITIVE);
    adaptive(&f, a, b, tol / total, &mut budget)
}

/// Integral of a real integrand over `[a, b]` to absolute tolerance `tol`.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> Result<f64> {
    let g = |t: f64| Complex64::new(f(t), 0.0);
    integrate_complex(g, a, b, tol).map(|v| v.re)
}

/// `∫ |f|` over `[a, b]`.
///
/// The integrand `|f|` has kinks wherever `f` crosses zero, which stalls
/// Simpson refinement. Panels are therefore pre-split at sign changes of
/// `Re f` located by a scan-and-bisect pass, and at any caller-supplied
/// breakpoints (support edges, interpolation nodes).
pub fn l1_norm_of(
    f: impl Fn(f64) -> Complex64,
    a: f64,
    b: f64,
    tol: f64,
    breakpoints: &[f64],
) -> Result<f64> {
    check_range(a, b, tol)?;
    if a == b {
        return Ok(0.0);
    }
    let mut cuts: Vec<f64> = vec![a, b];
    for &p in breakpoints {
        if p > a && p < b {
            cuts.push(p);
        }
    }
    cuts.sort_by(|x, y| x.partial_cmp(y).unwrap());
    cuts.dedup();
    let mut points = Vec::new();
    for w in cuts.windows(2) {
        points.push(w[0]);
        points.extend(sign_changes(&f, w[0], w[1]));
    }
    points.push(b);
    points.sort_by(|x, y| x.partial_cmp(y).unwrap());
    points.dedup();

    let total = (b - a).abs();
    let tol_per_len = tol / total;
    let mut budget = PANEL_CAP;
    let mut sum = 0.0;
    let g = |t: f64| Complex64::new(f(t).norm(), 0.0);
    for w in points.windows(2) {
        sum += adaptive(&g, w[0], w[1], tol_per_len, &mut budget)?.re;
    }
    Ok(sum)
}

/// Zero crossings of `Re f` inside `(a, b)` from a 256-interval scan.
fn sign_changes(f: &impl Fn(f64) -> Complex64, a: f64, b: f64) -> Vec<f64> {
    const SCAN: usize = 256;
    let mut roots = Vec::new();
    let h = (b - a) / SCAN as f64;
    let mut t0 = a;
    let mut v0 = f(t0).re;
    for i in 1..=SCAN {
        let t1 = if i == SCAN { b } else { a + h * i as f64 };
        let v1 = f(t1).re;
        if v0 == 0.0 && t0 > a {
            roots.push(t0);
        } else if v0 * v1 < 0.0 {
            roots.push(bisect(f, t0, t1, v0));
        }
        t0 = t1;
        v0 = v1;
    }
    roots
}

fn bisect(f: &impl Fn(f64) -> Complex64, mut lo: f64, mut hi: f64, flo: f64) -> f64 {
    let sign_lo = flo.signum();
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid).re.signum() == sign_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn check_range(a: f64, b: f64, tol: f64) -> Result<()> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(DelayError::domain("integration limits must be finite"));
    }
    if b < a {
        return Err(DelayError::domain(format!(
            "integration range is reversed: [{a}, {b}]"
        )));
    }
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(DelayError::domain(format!(
            "quadrature tolerance must be positive and finite, got {tol}"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact() {
        // Simpson integrates cubics exactly; the adaptive layer must not
        // perturb that beyond roundoff.
        let v = integrate(|t| t * t * t - 2.0 * t, 0.0, 2.0, 1e-12).unwrap();
        assert!((v - 0.0).abs() < 1e-13, "got {v}");
    }

    #[test]
    fn oscillatory_integral() {
        // [DERIVED] ∫_0^10 sin(7t) dt = (1 - cos(70)) / 7.
        let exact = (1.0 - (70.0f64).cos()) / 7.0;
        let v = integrate(|t| (7.0 * t).sin(), 0.0, 10.0, 1e-11).unwrap();
        assert!((v - exact).abs() < 1e-10, "got {v}, want {exact}");
    }

    #[test]
    fn complex_exponential() {
        // [DERIVED] ∫_0^1 e^{(1+2i)t} dt = (e^{1+2i} - 1) / (1+2i).
        let z = Complex64::new(1.0, 2.0);
        let exact = (z.exp() - 1.0) / z;
        let v = integrate_complex(|t| (z * t).exp(), 0.0, 1.0, 1e-12).unwrap();
        assert!((v - exact).norm() < 1e-11);
    }

    #[test]
    fn l1_with_sign_changes() {
        // [DERIVED] ∫_0^{2π} |sin t| dt = 4.
        let v = l1_norm_of(
            |t| Complex64::new(t.sin(), 0.0),
            0.0,
            2.0 * std::f64::consts::PI,
            1e-11,
            &[],
        )
        .unwrap();
        assert!((v - 4.0).abs() < 1e-10, "got {v}");
    }

    #[test]
    fn l1_respects_breakpoints() {
        // Piecewise integrand with a jump at t = 1; the breakpoint keeps the
        // discontinuity on a panel edge.
        let f = |t: f64| {
            if t < 1.0 {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(-2.0, 0.0)
            }
        };
        let v = l1_norm_of(f, 0.0, 2.0, 1e-12, &[1.0]).unwrap();
        assert!((v - 3.0).abs() < 1e-11, "got {v}");
    }

    #[test]
    fn reversed_range_rejected() {
        assert!(integrate(|_| 1.0, 1.0, 0.0, 1e-9).is_err());
    }

    #[test]
    fn non_finite_integrand_is_numeric_error() {
        let r = integrate(|t| 1.0 / t, 0.0, 1.0, 1e-9);
        match r {
            Err(DelayError::Numeric(_)) | Err(DelayError::Convergence { .. }) => {}
            other => panic!("expected numeric failure, got {other:?}"),
        }
    }
}
