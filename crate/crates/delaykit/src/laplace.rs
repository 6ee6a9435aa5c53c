//! Laplace transforms of elementary delays and the kernel decomposition.
//!
//! The transform of the elementary delay, `θ̂_λ(s) = (1 − e^{−(s−λ)ϑ})/(s−λ)`,
//! is entire: the apparent pole at `s = λ` cancels. Numerically the closed
//! form loses all digits near that point, so inside `|s−λ|ϑ < 0.05` the value
//! comes from the power series instead. Every kernel then reduces, by a shift
//! to `[0, ϑ]` and the substitution `t^m e^{λt} = (−1)^m (−t)^m e^{λt}`, to a
//! weighted sum of these transforms: the `Decomposition`.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::acc::NeumaierC;
use crate::error::{require_finite, require_finite_c, DelayError, Result};
use crate::kernel::{FiniteKernel, MAX_POWER};
use crate::quad;

/// Radius (in units of `|s−λ|ϑ`) below which the series branch is used.
pub const SERIES_SWITCH: f64 = 0.05;

/// `θ̂_λ^{(k)}(s)`, the k-th derivative of the elementary-delay transform,
/// evaluated as an entire function.
pub fn theta_hat(lambda: Complex64, theta: f64, k: u32, s: Complex64) -> Result<Complex64> {
    require_finite_c(lambda, "lambda")?;
    require_finite_c(s, "s")?;
    require_finite(theta, "theta")?;
    if theta <= 0.0 {
        return Err(DelayError::domain(format!("theta must be > 0, got {theta}")));
    }
    if k > MAX_POWER {
        return Err(DelayError::capacity(format!(
            "derivative order {k} exceeds cap {MAX_POWER}"
        )));
    }
    let z = s - lambda;
    let x = z * theta;
    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
    if x.norm() < SERIES_SWITCH {
        // θ̂^{(k)}(s) = (−1)^k ϑ^{k+1} Σ_m (−x)^m / (m! (k+m+1))
        let mut term = Complex64::new(1.0 / (k as f64 + 1.0), 0.0);
        let mut acc = term;
        for m in 1..=60u32 {
            let km = (k + m) as f64;
            term *= -x / m as f64 * (km / (km + 1.0));
            acc += term;
            if term.norm() < 1e-17 * acc.norm() {
                break;
            }
        }
        Ok(sign * theta.powi(k as i32 + 1) * acc)
    } else {
        // θ̂^{(k)}(s) = (−1)^k k!/z^{k+1} (1 − e^{−x} Σ_{i=0}^k x^i/i!)
        // k!/z^{k+1} is built factor by factor to avoid overflow of k! and z^k.
        let mut front = 1.0 / z;
        for i in 1..=k {
            front *= i as f64 / z;
        }
        let mut inner = Complex64::new(1.0, 0.0);
        let mut pow = Complex64::new(1.0, 0.0);
        for i in 1..=k {
            pow *= x / i as f64;
            inner += pow;
        }
        Ok(sign * front * (Complex64::new(1.0, 0.0) - (-x).exp() * inner))
    }
}

/// One elementary block of a decomposition: `weight(s) · θ̂_λ^{(k)}(s)` with
/// `weight(s) = Σ coeff · e^{−s·delay}`.
#[derive(Clone, Debug, PartialEq)]
pub struct ElementaryComponent {
    pub lambda: Complex64,
    pub k: u32,
    /// `(delay, coeff)` pairs with strictly increasing delays.
    pub weight: Vec<(f64, Complex64)>,
}

impl ElementaryComponent {
    pub fn new(lambda: Complex64, k: u32, weight: Vec<(f64, Complex64)>) -> Result<Self> {
        require_finite_c(lambda, "lambda")?;
        if k > MAX_POWER {
            return Err(DelayError::capacity(format!(
                "derivative order {k} exceeds cap {MAX_POWER}"
            )));
        }
        let mut prev = f64::NEG_INFINITY;
        for &(d, c) in &weight {
            require_finite(d, "weight delay")?;
            require_finite_c(c, "weight coefficient")?;
            if d < 0.0 {
                return Err(DelayError::domain(format!("weight delay {d} < 0")));
            }
            if d <= prev {
                return Err(DelayError::domain(
                    "weight delays must be strictly increasing",
                ));
            }
            prev = d;
        }
        Ok(ElementaryComponent { lambda, k, weight })
    }

    /// `Σ coeff · e^{−s·delay}`.
    pub fn weight_at(&self, s: Complex64) -> Result<Complex64> {
        let mut acc = Complex64::new(0.0, 0.0);
        for &(d, c) in &self.weight {
            if s.re * d < -700.0 {
                return Err(DelayError::domain(format!(
                    "e^{{-s d}} overflows for Re s = {} and delay {d}",
                    s.re
                )));
            }
            acc += c * (-s * d).exp();
        }
        Ok(acc)
    }

    /// Sum of coefficient magnitudes: the atomic A-norm of the weight.
    pub fn weight_norm(&self) -> f64 {
        self.weight.iter().map(|(_, c)| c.norm()).sum()
    }
}

/// Lemma-1 form of a kernel: base length ϑ plus elementary components.
#[derive(Clone, Debug, PartialEq)]
pub struct Decomposition {
    pub theta: f64,
    pub components: Vec<ElementaryComponent>,
}

impl Decomposition {
    /// Time-domain value `Σ coeff · (−(t−d))^k e^{λ(t−d)}` over components,
    /// each term active for `t − d ∈ [0, ϑ]`.
    pub fn eval_time(&self, t: f64) -> Complex64 {
        let mut acc = NeumaierC::default();
        for comp in &self.components {
            for &(d, c) in &comp.weight {
                let tau = t - d;
                if tau >= 0.0 && tau <= self.theta {
                    acc.add(c * (-tau).powi(comp.k as i32) * (comp.lambda * tau).exp());
                }
            }
        }
        acc.value()
    }

    /// Transform value `Σ weight(s) · θ̂_λ^{(k)}(s)`.
    pub fn transfer_at(&self, s: Complex64) -> Result<Complex64> {
        let mut acc = NeumaierC::default();
        for comp in &self.components {
            let w = comp.weight_at(s)?;
            acc.add(w * theta_hat(comp.lambda, self.theta, comp.k, s)?);
        }
        Ok(acc.value())
    }
}

/// Decomposes a kernel into elementary components: shift to `[0, ϑ]`,
/// map `t^m e^{λt} ↦ (−1)^m θ_λ^m`, attach the delay ϑ₁ to every weight.
pub fn decompose(kernel: &FiniteKernel) -> Result<Decomposition> {
    let (t1, t2) = kernel.support();
    let theta = t2 - t1;
    let based = kernel.shift_support(-t1)?;
    let mut components: Vec<ElementaryComponent> = Vec::new();
    for term in based.terms() {
        let sign = if term.power % 2 == 0 { 1.0 } else { -1.0 };
        let coeff = term.coeff * sign;
        match components.iter_mut().find(|c| {
            c.k == term.power
                && (c.lambda.re - term.lambda.re).abs() <= 1e-14
                && (c.lambda.im - term.lambda.im).abs() <= 1e-14
        }) {
            Some(c) => c.weight[0].1 += coeff,
            None => components.push(ElementaryComponent {
                lambda: term.lambda,
                k: term.power,
                weight: vec![(t1, coeff)],
            }),
        }
    }
    components.retain(|c| c.weight[0].1 != Complex64::new(0.0, 0.0));
    components.sort_by(|a, b| {
        (a.lambda.re, a.lambda.im, a.k)
            .partial_cmp(&(b.lambda.re, b.lambda.im, b.k))
            .unwrap()
    });
    Ok(Decomposition { theta, components })
}

/// Direct numerical transform `∫ k(t) e^{−st} dt`: the independent oracle
/// against which `transfer_at` is checked.
pub fn numeric_laplace(kernel: &FiniteKernel, s: Complex64, tol: f64) -> Result<Complex64> {
    require_finite_c(s, "s")?;
    let (a, b) = kernel.support();
    quad::integrate_complex(|t| kernel.eval(t) * (-s * t).exp(), a, b, tol)
}

/// Log-spaced (or caller-supplied) frequency grid, strictly increasing.
#[derive(Clone, Debug, PartialEq)]
pub struct FrequencyGrid {
    omegas: Vec<f64>,
}

impl FrequencyGrid {
    pub fn new(omegas: Vec<f64>) -> Result<Self> {
        if omegas.is_empty() {
            return Err(DelayError::domain("frequency grid is empty"));
        }
        let mut prev = 0.0f64;
        for &w in &omegas {
            require_finite(w, "frequency")?;
            if w <= prev {
                return Err(DelayError::domain(
                    "frequencies must be positive and strictly increasing",
                ));
            }
            prev = w;
        }
        Ok(FrequencyGrid { omegas })
    }

    /// `ω_i = 10^(log10 min + i/per_decade)` up to `max` inclusive.
    pub fn log_spaced(min: f64, max: f64, per_decade: usize) -> Result<Self> {
        require_finite(min, "grid min")?;
        require_finite(max, "grid max")?;
        if !(min > 0.0 && max > min && per_decade >= 1) {
            return Err(DelayError::domain(
                "log grid needs 0 < min < max and per_decade >= 1",
            ));
        }
        let decades = (max / min).log10();
        let n = (decades * per_decade as f64).round() as usize;
        let l0 = min.log10();
        let omegas = (0..=n)
            .map(|i| 10f64.powf(l0 + i as f64 / per_decade as f64))
            .collect();
        FrequencyGrid::new(omegas)
    }

    pub fn omegas(&self) -> &[f64] {
        &self.omegas
    }

    pub fn min(&self) -> f64 {
        self.omegas[0]
    }

    pub fn max(&self) -> f64 {
        *self.omegas.last().unwrap()
    }

    /// Density in points per decade (over the whole span).
    pub fn points_per_decade(&self) -> f64 {
        let span = (self.max() / self.min()).log10();
        if span <= 0.0 {
            f64::INFINITY
        } else {
            (self.omegas.len() - 1) as f64 / span
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct FreqPoint {
    pub omega: f64,
    pub value: Complex64,
    pub mag_db: f64,
    pub phase_rad: f64,
}

/// Transfer values on a grid with dB magnitude and unwrapped phase.
pub fn frequency_response(dec: &Decomposition, grid: &FrequencyGrid) -> Result<Vec<FreqPoint>> {
    frequency_response_sum(std::slice::from_ref(dec), grid)
}

/// Same, for an operator given as a sum of kernel pieces.
pub fn frequency_response_sum(
    decs: &[Decomposition],
    grid: &FrequencyGrid,
) -> Result<Vec<FreqPoint>> {
    let values: Vec<Complex64> = grid
        .omegas()
        .par_iter()
        .map(|&w| {
            let s = Complex64::new(0.0, w);
            let mut acc = Complex64::new(0.0, 0.0);
            for d in decs {
                acc += d.transfer_at(s)?;
            }
            Ok(acc)
        })
        .collect::<Result<_>>()?;
    let mut out = Vec::with_capacity(values.len());
    let mut prev_phase = 0.0f64;
    for (i, (&w, v)) in grid.omegas().iter().zip(&values).enumerate() {
        let mut phase = v.arg();
        if i > 0 {
            while phase - prev_phase > std::f64::consts::PI {
                phase -= 2.0 * std::f64::consts::PI;
            }
            while prev_phase - phase > std::f64::consts::PI {
                phase += 2.0 * std::f64::consts::PI;
            }
        }
        prev_phase = phase;
        out.push(FreqPoint {
            omega: w,
            value: *v,
            mag_db: 20.0 * v.norm().log10(),
            phase_rad: phase,
        });
    }
    Ok(out)
}
