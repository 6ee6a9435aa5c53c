//! Stable finite-dimensional approximants of elementary delays and kernels.
//!
//! The target class: `θ_λ^k(t) = (−t)^k e^{λt}` on `[0, ϑ]` with `Re λ ≥ 0`
//! (anything stable is kept exact). The construction is the Bernstein
//! operator after the substitution `x = e^{−αt}`, which produces a sum of
//! stable exponentials `e^{−αjt}`, `j ≥ 1`, plus a constant aggregate. The
//! constant is itself a small multiple of the unit target and is replaced by
//! the stable unit surrogate, so the published kernel never contains a
//! `Re λ ≥ 0` term. Errors are always measured by quadrature, never trusted
//! from bounds.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bernstein;
use crate::error::{require_finite, require_finite_c, DelayError, Result};
use crate::hp::{required_bits, HpC, HpCtx};
use crate::kernel::{AtomicDistribution, ExpPolyTerm, FiniteKernel};
use crate::laplace::Decomposition;
use crate::quad;

/// Degree cap for any Bernstein construction.
pub const MAX_ORDER: usize = 1000;

#[derive(Clone, Debug, PartialEq)]
pub struct ApproxConfig {
    /// Decay rate of the stable basis: exponents are `−α·j`.
    pub alpha: f64,
    /// Bernstein order n of the main construction.
    pub order: usize,
    /// Degree cap for the unit-surrogate replacement of the constant term.
    pub theta0_order: usize,
    /// Optional accuracy target carried for reporting.
    pub target_eps: Option<f64>,
}

impl ApproxConfig {
    pub fn new(alpha: f64, order: usize) -> Result<Self> {
        let cfg = ApproxConfig {
            alpha,
            order,
            theta0_order: order,
            target_eps: None,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_theta0_order(mut self, theta0_order: usize) -> Result<Self> {
        self.theta0_order = theta0_order;
        self.validate()?;
        Ok(self)
    }

    fn validate(&self) -> Result<()> {
        require_finite(self.alpha, "alpha")?;
        if self.alpha <= 0.0 {
            return Err(DelayError::domain(format!(
                "alpha must be > 0, got {}",
                self.alpha
            )));
        }
        if self.order < 1 || self.order > MAX_ORDER {
            return Err(DelayError::domain(format!(
                "order must be in 1..={MAX_ORDER}, got {}",
                self.order
            )));
        }
        if self.theta0_order < 1 || self.theta0_order > MAX_ORDER {
            return Err(DelayError::domain(format!(
                "theta0_order must be in 1..={MAX_ORDER}, got {}",
                self.theta0_order
            )));
        }
        if let Some(e) = self.target_eps {
            if !(e > 0.0 && e.is_finite()) {
                return Err(DelayError::domain(format!("target_eps must be > 0, got {e}")));
            }
        }
        Ok(())
    }
}

/// What an approximant approximates.
#[derive(Clone, Debug, PartialEq)]
pub enum ApproxTarget {
    /// `θ_λ^k` on `[0, theta]`.
    Theta {
        lambda: Complex64,
        k: u32,
        theta: f64,
    },
    /// A full kernel, named for reporting.
    Kernel { description: String },
}

/// Stable approximant with construction metadata and a measured L1 error.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "ApproximantJson", into = "ApproximantJson")]
pub struct Approximant {
    pub kernel: FiniteKernel,
    pub config: ApproxConfig,
    pub measured_eps: f64,
    pub target: ApproxTarget,
}

#[derive(Serialize, Deserialize)]
struct ApproximantJson {
    kernel: FiniteKernel,
    alpha: f64,
    order: usize,
    measured_eps: f64,
}

impl TryFrom<ApproximantJson> for Approximant {
    type Error = DelayError;
    fn try_from(a: ApproximantJson) -> Result<Self> {
        Ok(Approximant {
            kernel: a.kernel,
            config: ApproxConfig::new(a.alpha, a.order)?,
            measured_eps: a.measured_eps,
            target: ApproxTarget::Kernel {
                description: "loaded".into(),
            },
        })
    }
}

impl From<Approximant> for ApproximantJson {
    fn from(a: Approximant) -> Self {
        ApproximantJson {
            kernel: a.kernel,
            alpha: a.config.alpha,
            order: a.config.order,
            measured_eps: a.measured_eps,
        }
    }
}

/// `‖θ_λ‖_{L1}` on `[0, ϑ]` in closed form.
pub fn theta_norm(lambda: Complex64, theta: f64) -> f64 {
    if lambda.re == 0.0 {
        theta
    } else {
        ((lambda.re * theta).exp() - 1.0) / lambda.re
    }
}

fn measure_eps(
    kernel: &FiniteKernel,
    target: impl Fn(f64) -> Complex64,
    theta: f64,
    norm_scale: f64,
) -> Result<f64> {
    // 1e-10: frozen-value tests compare at 1e-7, and the adaptive estimate
    // can undershoot by an order of magnitude when kinks cluster below the
    // scan resolution.
    let tol = 1e-10 * (1.0 + norm_scale);
    quad::l1_norm_of(|t| kernel.eval(t) - target(t), 0.0, theta, tol, &[])
}

/// Approximant of the unit target `θ_0` on `[0, ϑ]` by the ψ₀ Bernstein
/// construction of order `cfg.order`.
///
/// Coefficients are stored as hi/lo pairs (two terms per exponent) because
/// their magnitudes dwarf the O(1) values they sum to; compensated kernel
/// evaluation then recovers the value to near its own ulp.
pub fn approx_theta0(theta: f64, cfg: &ApproxConfig) -> Result<Approximant> {
    cfg.validate()?;
    require_finite(theta, "theta")?;
    if theta <= 0.0 {
        return Err(DelayError::domain(format!("theta must be > 0, got {theta}")));
    }
    let n = cfg.order;
    let pairs = bernstein::theta0_pairs(theta, cfg.alpha, n)?;
    let mut terms = Vec::new();
    for (j, &(hi, lo)) in pairs.iter().enumerate() {
        let lam = Complex64::new(-cfg.alpha * j as f64, 0.0);
        if hi != 0.0 {
            terms.push(ExpPolyTerm::new(Complex64::new(hi, 0.0), lam, 0)?);
        }
        if lo != 0.0 {
            terms.push(ExpPolyTerm::new(Complex64::new(lo, 0.0), lam, 0)?);
        }
    }
    let kernel = FiniteKernel::new(terms, (0.0, theta), true)?;
    let measured_eps = measure_eps(&kernel, |_| Complex64::new(1.0, 0.0), theta, theta)?;
    Ok(Approximant {
        kernel,
        config: cfg.clone(),
        measured_eps,
        target: ApproxTarget::Theta {
            lambda: Complex64::new(0.0, 0.0),
            k: 0,
            theta,
        },
    })
}

/// Approximant of `θ_λ` on `[0, ϑ]`.
///
/// `Re λ < 0` returns the target itself (it is already stable) with error 0.
/// `λ = 0` routes to `approx_theta0`. Otherwise the Bernstein construction
/// runs in hp, the constant aggregate `b_0` is replaced by `b_0 ·
/// unit-surrogate`, and the merged coefficients are rounded to f64.
pub fn approx_theta_lambda(
    lambda: Complex64,
    theta: f64,
    cfg: &ApproxConfig,
) -> Result<Approximant> {
    cfg.validate()?;
    require_finite_c(lambda, "lambda")?;
    require_finite(theta, "theta")?;
    if theta <= 0.0 {
        return Err(DelayError::domain(format!("theta must be > 0, got {theta}")));
    }
    if lambda.re < 0.0 {
        let kernel = FiniteKernel::elementary(lambda, theta, 0)?;
        return Ok(Approximant {
            kernel,
            config: cfg.clone(),
            measured_eps: 0.0,
            target: ApproxTarget::Theta {
                lambda,
                k: 0,
                theta,
            },
        });
    }
    if lambda == Complex64::new(0.0, 0.0) {
        return approx_theta0(theta, cfg);
    }
    let n = cfg.order;
    let p = required_bits(n.max(cfg.theta0_order), cfg.alpha, theta)?;
    let mut ctx = HpCtx::new(p)?;
    let b = bernstein::theta_lambda_coeffs(lambda, theta, cfg.alpha, n, &mut ctx)?;
    let surrogate = bernstein::unit_surrogate(theta, cfg.alpha, cfg.theta0_order, &mut ctx)?;
    // g_j = b_j + b_0 q_j, j ≥ 1; the constant aggregate is distributed onto
    // the stable surrogate exponentials.
    let top = n.max(surrogate.m);
    let mut terms = Vec::with_capacity(top);
    for j in 1..=top {
        let mut g = if j <= n { b[j].clone() } else { HpC::zero(&ctx) };
        if j <= surrogate.m {
            let scaled = ctx.c_mul_real(&b[0], &surrogate.coeffs[j - 1]);
            g = ctx.c_add(&g, &scaled);
        }
        let mut coeff = g.to_c64();
        if lambda.im == 0.0 {
            coeff.im = 0.0;
        }
        if coeff == Complex64::new(0.0, 0.0) {
            continue;
        }
        let lam = Complex64::new(-cfg.alpha * j as f64, 0.0);
        terms.push(ExpPolyTerm::new(coeff, lam, 0)?);
    }
    let kernel = FiniteKernel::new(terms, (0.0, theta), lambda.im == 0.0)?;
    let norm = theta_norm(lambda, theta);
    let measured_eps = measure_eps(&kernel, |t| (lambda * t).exp(), theta, norm)?;
    Ok(Approximant {
        kernel,
        config: cfg.clone(),
        measured_eps,
        target: ApproxTarget::Theta {
            lambda,
            k: 0,
            theta,
        },
    })
}

/// Lifts an elementary-delay approximant to `θ_λ^k` by `(−t)^k`
/// multiplication and re-measures the error (the lift contracts it by at
/// most `ϑ^k`).
pub fn approx_derivative(base: &Approximant, k: u32) -> Result<Approximant> {
    let ApproxTarget::Theta {
        lambda,
        k: base_k,
        theta,
    } = base.target
    else {
        return Err(DelayError::domain(
            "derivative lift needs an elementary-delay approximant",
        ));
    };
    if base_k != 0 {
        return Err(DelayError::domain(
            "derivative lift must start from the k = 0 approximant",
        ));
    }
    if k == 0 {
        return Ok(base.clone());
    }
    let kernel = base.kernel.derivative_lift(k)?;
    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
    let target = move |t: f64| sign * t.powi(k as i32) * (lambda * t).exp();
    let norm = theta.powi(k as i32) * theta_norm(lambda, theta);
    let measured_eps = measure_eps(&kernel, target, theta, norm)?;
    Ok(Approximant {
        kernel,
        config: base.config.clone(),
        measured_eps,
        target: ApproxTarget::Theta { lambda, k, theta },
    })
}

/// Stable approximant of a whole decomposition, one kernel piece per distinct
/// delay, plus the transported a-priori bound `ε̃ = Σ ϑ^k ‖weight‖ εᵢ`.
#[derive(Clone, Debug)]
pub struct AssembledApprox {
    /// Pieces sorted by support start; supports are `[d, d+ϑ]` per delay `d`.
    pub pieces: Vec<FiniteKernel>,
    pub config: ApproxConfig,
    /// Quadrature-measured L1 distance to the decomposition's kernel.
    pub measured_eps: f64,
}

impl AssembledApprox {
    pub fn eval(&self, t: f64) -> Complex64 {
        self.pieces.iter().map(|p| p.eval(t)).sum()
    }

    /// The single kernel when every component shares one delay (always the
    /// case for decompositions produced from a `FiniteKernel`).
    pub fn single(&self) -> Option<&FiniteKernel> {
        if self.pieces.len() == 1 {
            Some(&self.pieces[0])
        } else {
            None
        }
    }
}

/// Replaces every unstable component of `dec` by a lifted stable approximant
/// and reassembles. Returns the approximant and the transported error bound.
pub fn approx_kernel(dec: &Decomposition, cfg: &ApproxConfig) -> Result<(AssembledApprox, f64)> {
    cfg.validate()?;
    if dec.components.is_empty() {
        return Err(DelayError::domain("decomposition has no components"));
    }
    let theta = dec.theta;
    // One base approximant per distinct unstable λ.
    let mut bases: Vec<(Complex64, Approximant)> = Vec::new();
    let mut base_for = |lambda: Complex64| -> Result<Approximant> {
        if let Some((_, a)) = bases.iter().find(|(l, _)| *l == lambda) {
            return Ok(a.clone());
        }
        let a = approx_theta_lambda(lambda, theta, cfg)?;
        bases.push((lambda, a.clone()));
        Ok(a)
    };
    let mut bound = 0.0f64;
    let mut weight_mass = 0.0f64;
    // (delay, merged kernel on [0, ϑ]) before shifting.
    let mut by_delay: Vec<(f64, FiniteKernel)> = Vec::new();
    for comp in &dec.components {
        let piece = if comp.lambda.re < 0.0 {
            FiniteKernel::elementary(comp.lambda, theta, comp.k)?
        } else {
            let base = base_for(comp.lambda)?;
            let lifted = approx_derivative(&base, comp.k)?;
            let transport = theta.powi(comp.k as i32) * comp.weight_norm();
            bound += transport * base.measured_eps;
            weight_mass += transport * theta_norm(comp.lambda, theta);
            lifted.kernel
        };
        for &(d, c) in &comp.weight {
            let scaled = FiniteKernel::scale_add(c, &piece, Complex64::new(0.0, 0.0), &piece)?;
            match by_delay.iter_mut().find(|(dd, _)| *dd == d) {
                Some((_, k)) => {
                    *k = FiniteKernel::scale_add(
                        Complex64::new(1.0, 0.0),
                        k,
                        Complex64::new(1.0, 0.0),
                        &scaled,
                    )?
                }
                None => by_delay.push((d, scaled)),
            }
        }
    }
    by_delay.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let mut pieces = Vec::with_capacity(by_delay.len());
    let mut breakpoints = Vec::new();
    for (d, k) in by_delay {
        let shifted = k.shift_support(d)?;
        breakpoints.push(shifted.support().0);
        breakpoints.push(shifted.support().1);
        pieces.push(shifted);
    }
    let lo = pieces.first().map(|p| p.support().0).unwrap();
    let hi = pieces
        .iter()
        .map(|p| p.support().1)
        .fold(f64::NEG_INFINITY, f64::max);
    let tol = 1e-10 * (1.0 + weight_mass);
    let pieces_ref = &pieces;
    let measured_eps = quad::l1_norm_of(
        |t| {
            let approx: Complex64 = pieces_ref.iter().map(|p| p.eval(t)).sum();
            approx - dec.eval_time(t)
        },
        lo,
        hi,
        tol,
        &breakpoints,
    )?;
    Ok((
        AssembledApprox {
            pieces,
            config: cfg.clone(),
            measured_eps,
        },
        bound,
    ))
}

/// Low-pass lumped variant: `Σ γᵢ e^{−a(t−tᵢ)} h(t−tᵢ)` with taps at
/// `tᵢ = iϑ/n`, fitted to `θ_λ` by least squares on a uniform grid over
/// `[0, ϑ + 5/a]`.
#[derive(Clone, Debug, Serialize)]
pub struct LowpassLumped {
    pub a: f64,
    pub taps: AtomicDistribution,
    #[serde(skip)]
    pub residual_l1: f64,
    #[serde(skip)]
    pub theta: f64,
}

impl LowpassLumped {
    /// `(Σ γᵢ e^{−s tᵢ}) / (s + a)`.
    pub fn transfer_at(&self, s: Complex64) -> Complex64 {
        let num: Complex64 = self
            .taps
            .impulses()
            .iter()
            .map(|&(t, g)| g * (-s * t).exp())
            .sum();
        num / (s + self.a)
    }

    /// Time response `Σ γᵢ e^{−a(t−tᵢ)} h(t−tᵢ)`.
    pub fn eval(&self, t: f64) -> Complex64 {
        self.taps
            .impulses()
            .iter()
            .filter(|&&(ti, _)| t >= ti)
            .map(|&(ti, g)| g * (-self.a * (t - ti)).exp())
            .sum()
    }
}

pub fn lowpass_lumped(
    lambda: Complex64,
    theta: f64,
    a: f64,
    n: usize,
    fit_grid: usize,
) -> Result<LowpassLumped> {
    require_finite_c(lambda, "lambda")?;
    require_finite(theta, "theta")?;
    require_finite(a, "filter pole a")?;
    if theta <= 0.0 || a <= 0.0 || n < 1 {
        return Err(DelayError::domain(
            "lowpass fit needs theta > 0, a > 0, n >= 1",
        ));
    }
    if fit_grid < 10 * n {
        return Err(DelayError::domain(format!(
            "fit_grid must be at least 10n = {}, got {fit_grid}",
            10 * n
        )));
    }
    let taps: Vec<f64> = (0..n).map(|i| i as f64 * theta / n as f64).collect();
    let window = theta + 5.0 / a;
    let grid: Vec<f64> = (0..fit_grid)
        .map(|g| g as f64 * window / (fit_grid - 1) as f64)
        .collect();
    let psi = |t: f64, ti: f64| {
        if t >= ti {
            (-a * (t - ti)).exp()
        } else {
            0.0
        }
    };
    // Normal equations: (MᵀM) γ = Mᵀ y with M real, y complex.
    let mut nn = vec![0.0f64; n * n];
    let mut rhs = vec![Complex64::new(0.0, 0.0); n];
    for &t in &grid {
        let row: Vec<f64> = taps.iter().map(|&ti| psi(t, ti)).collect();
        let y = if t <= theta {
            (lambda * t).exp()
        } else {
            Complex64::new(0.0, 0.0)
        };
        for i in 0..n {
            if row[i] == 0.0 {
                continue;
            }
            for j in 0..n {
                nn[i * n + j] += row[i] * row[j];
            }
            rhs[i] += row[i] * y;
        }
    }
    let gamma = solve_complex(&mut nn, &mut rhs, n)?;
    let taps_dist = AtomicDistribution::new(
        taps.iter().copied().zip(gamma.iter().copied()).collect(),
    )?;
    let lumped = LowpassLumped {
        a,
        taps: taps_dist,
        residual_l1: 0.0,
        theta,
    };
    let norm = theta_norm(lambda, theta);
    let mut brk = taps.clone();
    brk.push(theta);
    let residual_l1 = quad::l1_norm_of(
        |t| {
            let target = if t <= theta {
                (lambda * t).exp()
            } else {
                Complex64::new(0.0, 0.0)
            };
            lumped.eval(t) - target
        },
        0.0,
        window,
        1e-9 * (1.0 + norm),
        &brk,
    )?;
    Ok(LowpassLumped {
        residual_l1,
        ..lumped
    })
}

/// Gaussian elimination with partial pivoting for a real matrix and complex
/// right-hand side.
fn solve_complex(m: &mut [f64], rhs: &mut [Complex64], n: usize) -> Result<Vec<Complex64>> {
    let scale = m
        .iter()
        .map(|v| v.abs())
        .fold(0.0f64, f64::max)
        .max(f64::MIN_POSITIVE);
    for col in 0..n {
        let (pivot_row, pivot) = (col..n)
            .map(|r| (r, m[r * n + col]))
            .max_by(|a, b| a.1.abs().partial_cmp(&b.1.abs()).unwrap())
            .unwrap();
        if pivot.abs() <= 1e-12 * scale {
            return Err(DelayError::numeric(
                "rank-deficient fit matrix: taps too dense for the filter pole",
            ));
        }
        if pivot_row != col {
            for j in 0..n {
                m.swap(col * n + j, pivot_row * n + j);
            }
            rhs.swap(col, pivot_row);
        }
        for r in col + 1..n {
            let f = m[r * n + col] / m[col * n + col];
            if f == 0.0 {
                continue;
            }
            for j in col..n {
                m[r * n + j] -= f * m[col * n + j];
            }
            let adj = rhs[col] * f;
            rhs[r] -= adj;
        }
    }
    let mut x = vec![Complex64::new(0.0, 0.0); n];
    for col in (0..n).rev() {
        let mut acc = rhs[col];
        for j in col + 1..n {
            acc -= m[col * n + j] * x[j];
        }
        x[col] = acc / m[col * n + col];
    }
    Ok(x)
}

/// The conservative a-priori order bound `n ≥ 4ϑ³β²/ε³ · e^{5·Reλ·ϑ}` with
/// `β = (e^{Reλ·ϑ} − 1)/(1 − e^{−αϑ})`; saturates at `u64::MAX`.
pub fn order_bound(lambda: Complex64, theta: f64, alpha: f64, eps: f64) -> Result<u64> {
    require_finite_c(lambda, "lambda")?;
    require_finite(theta, "theta")?;
    require_finite(alpha, "alpha")?;
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(DelayError::domain(format!("eps must be > 0, got {eps}")));
    }
    if lambda.re < 0.0 {
        return Err(DelayError::domain(
            "order bound applies to Re lambda >= 0 targets",
        ));
    }
    if theta <= 0.0 || alpha <= 0.0 {
        return Err(DelayError::domain("theta and alpha must be > 0"));
    }
    let num = (lambda.re * theta).exp() - 1.0;
    if num == 0.0 {
        return Ok(1);
    }
    let beta = num / (1.0 - (-alpha * theta).exp());
    let bound = 4.0 * theta.powi(3) * beta * beta / eps.powi(3) * (5.0 * lambda.re * theta).exp();
    if !bound.is_finite() || bound >= u64::MAX as f64 {
        return Ok(u64::MAX);
    }
    Ok((bound.ceil() as u64).max(1))
}

/// Smallest order `n ≤ n_max` whose measured error meets `eps`, found by
/// doubling then bisection (the measured error is monotone enough in
/// practice; the returned approximant's `measured_eps` is authoritative).
pub fn select_order(
    lambda: Complex64,
    theta: f64,
    alpha: f64,
    eps: f64,
    n_max: usize,
) -> Result<Approximant> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(DelayError::domain(format!("eps must be > 0, got {eps}")));
    }
    if n_max < 1 {
        return Err(DelayError::domain("n_max must be >= 1"));
    }
    let build = |n: usize| -> Result<Approximant> {
        let cfg = ApproxConfig {
            alpha,
            order: n,
            theta0_order: n,
            target_eps: Some(eps),
        };
        approx_theta_lambda(lambda, theta, &cfg)
    };
    let mut best: Option<Approximant> = None;
    let track = |a: &Approximant, best: &mut Option<Approximant>| {
        if best
            .as_ref()
            .map_or(true, |b| a.measured_eps < b.measured_eps)
        {
            *best = Some(a.clone());
        }
    };
    // Doubling phase.
    let mut lo = 0usize;
    let mut hit: Option<(usize, Approximant)> = None;
    let mut n = 1usize;
    loop {
        let a = build(n)?;
        track(&a, &mut best);
        if a.measured_eps <= eps {
            hit = Some((n, a));
            break;
        }
        if n >= n_max {
            break;
        }
        lo = n;
        n = (n * 2).min(n_max);
    }
    let Some((mut hi, mut found)) = hit else {
        return Err(DelayError::NotAchieved {
            best: Box::new(best.expect("at least one candidate was built")),
        });
    };
    // Bisection for the smallest passing order in (lo, hi].
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        let a = build(mid)?;
        track(&a, &mut best);
        if a.measured_eps <= eps {
            hi = mid;
            found = a;
        } else {
            lo = mid;
        }
    }
    Ok(found)
}
