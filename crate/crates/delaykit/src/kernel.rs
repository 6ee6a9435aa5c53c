//! Exponential-polynomial kernels on a bounded interval and their algebra.
//!
//! A `FiniteKernel` is `Σ c_i t^{j_i} e^{λ_i t}` on a closed support
//! `[ϑ₁, ϑ₂]` and exactly zero elsewhere. The class is closed under linear
//! combination, multiplication by `(−t)^k` (derivative lift) and time shift,
//! which is all the decomposition and approximation layers need.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::acc::{Dd, NeumaierC};
use crate::error::{require_finite, require_finite_c, DelayError, Result};
use crate::quad;

/// Highest admissible polynomial power; keeps factorials and binomial
/// re-expansions inside f64 range.
pub const MAX_POWER: u32 = 64;

/// Coalescing tolerance on (λ, power) equality in `scale_add`.
pub const COALESCE_TOL: f64 = 1e-14;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExpPolyTerm {
    pub coeff: Complex64,
    pub lambda: Complex64,
    pub power: u32,
}

impl ExpPolyTerm {
    pub fn new(coeff: Complex64, lambda: Complex64, power: u32) -> Result<Self> {
        require_finite_c(coeff, "term coefficient")?;
        require_finite_c(lambda, "term exponent")?;
        if power > MAX_POWER {
            return Err(DelayError::capacity(format!(
                "polynomial power {power} exceeds cap {MAX_POWER}"
            )));
        }
        Ok(ExpPolyTerm {
            coeff,
            lambda,
            power,
        })
    }

    fn eval(&self, t: f64) -> Complex64 {
        self.coeff * t.powi(self.power as i32) * (self.lambda * t).exp()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StabilityClass {
    /// All exponents satisfy Re λ < 0.
    Stable,
    /// Some exponent has Re λ ≥ 0.
    Unstable,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "KernelJson", into = "KernelJson")]
pub struct FiniteKernel {
    terms: Vec<ExpPolyTerm>,
    support: (f64, f64),
    real_valued: bool,
    lattice: Option<Lattice>,
}

/// Evaluation plan for kernels whose exponents all lie on `{−αm : m ∈ ℕ}`.
///
/// Approximant kernels carry near-cancelling coefficients up to ~1e17, so
/// per-term evaluation (independently rounded exponentials) loses up to
/// `eps·Σ|cᵢ|` absolutely. On a lattice the kernel is a polynomial in
/// `x = e^{−αt}` and double-double Horner evaluation keeps the cancellation
/// exact; the only f64-level rounding left is in `x` itself, which enters
/// through the (small) derivative of the polynomial rather than its (huge)
/// coefficients.
#[derive(Clone, Debug, PartialEq)]
struct Lattice {
    alpha: f64,
    /// `buckets[m]` holds the `(coeff, power)` pairs of the terms at
    /// `λ = −αm`.
    buckets: Vec<Vec<(Complex64, u32)>>,
}

/// Largest lattice index worth bucketing; beyond this the spread of exponents
/// makes the Horner chain longer than per-term evaluation is worth.
const MAX_LATTICE_INDEX: usize = 4096;

fn detect_lattice(terms: &[ExpPolyTerm]) -> Option<Lattice> {
    if terms.is_empty() {
        return None;
    }
    let mut mags: Vec<f64> = Vec::new();
    for t in terms {
        if t.lambda.im != 0.0 || t.lambda.re > 0.0 {
            return None;
        }
        if t.lambda.re < 0.0 {
            mags.push(-t.lambda.re);
        }
    }
    mags.sort_by(|a, b| a.partial_cmp(b).unwrap());
    mags.dedup();
    // Pitch candidates: the smallest magnitude, and the smallest gap between
    // neighbours (constructions may zero out the low-order exponents, leaving
    // a lattice that starts above its pitch).
    let mut candidates = Vec::new();
    match mags.first() {
        Some(&first) => candidates.push(first),
        // Every exponent is zero: a pure polynomial, x never enters.
        None => candidates.push(1.0),
    }
    let min_gap = mags
        .windows(2)
        .map(|w| w[1] - w[0])
        .filter(|d| *d > 0.0)
        .fold(f64::INFINITY, f64::min);
    if min_gap.is_finite() && min_gap < candidates[0] {
        candidates.push(min_gap);
        // The gap itself carries rounding noise when the exponents were built
        // as fl(alpha * j); dividing the smallest magnitude by its inferred
        // index recovers the generator exactly in that case.
        let idx = (candidates[0] / min_gap).round();
        if idx >= 1.0 && idx <= MAX_LATTICE_INDEX as f64 {
            candidates.push(candidates[0] / idx);
        }
    }
    candidates.into_iter().find_map(|a| try_lattice(terms, a))
}

fn try_lattice(terms: &[ExpPolyTerm], alpha: f64) -> Option<Lattice> {
    let mut buckets: Vec<Vec<(Complex64, u32)>> = Vec::new();
    for t in terms {
        let m = (-t.lambda.re / alpha).round();
        if !(0.0..=MAX_LATTICE_INDEX as f64).contains(&m) {
            return None;
        }
        let m = m as usize;
        // The lattice point must reproduce the stored exponent bit for bit,
        // otherwise Horner would evaluate a different kernel.
        if -(alpha * m as f64) != t.lambda.re {
            return None;
        }
        if buckets.len() <= m {
            buckets.resize_with(m + 1, Vec::new);
        }
        buckets[m].push((t.coeff, t.power));
    }
    Some(Lattice { alpha, buckets })
}

impl Lattice {
    fn eval(&self, t: f64) -> Complex64 {
        let x = (-self.alpha * t).exp();
        let mut re = Dd::ZERO;
        let mut im = Dd::ZERO;
        for bucket in self.buckets.iter().rev() {
            re = re.mul_f64(x);
            im = im.mul_f64(x);
            for &(c, k) in bucket {
                let tk = Dd::pow_f64(t, k);
                re = re.add(tk.mul_f64(c.re));
                im = im.add(tk.mul_f64(c.im));
            }
        }
        Complex64::new(re.value(), im.value())
    }
}

impl FiniteKernel {
    /// Builds a kernel after validating supports, finiteness and, when
    /// `real_valued` is requested, the conjugate-pairing of complex terms.
    pub fn new(terms: Vec<ExpPolyTerm>, support: (f64, f64), real_valued: bool) -> Result<Self> {
        require_finite(support.0, "support start")?;
        require_finite(support.1, "support end")?;
        if support.0 < 0.0 {
            return Err(DelayError::domain(format!(
                "support must start at a nonnegative time, got {}",
                support.0
            )));
        }
        if support.1 <= support.0 {
            return Err(DelayError::domain(format!(
                "support must satisfy start < end, got [{}, {}]",
                support.0, support.1
            )));
        }
        for t in &terms {
            require_finite_c(t.coeff, "term coefficient")?;
            require_finite_c(t.lambda, "term exponent")?;
            if t.power > MAX_POWER {
                return Err(DelayError::capacity(format!(
                    "polynomial power {} exceeds cap {MAX_POWER}",
                    t.power
                )));
            }
        }
        if real_valued {
            check_conjugate_pairing(&terms)?;
        }
        let lattice = detect_lattice(&terms);
        Ok(FiniteKernel {
            terms,
            support,
            real_valued,
            lattice,
        })
    }

    /// Elementary distributed delay `(−t)^k e^{λt}` on `[0, theta]`.
    pub fn elementary(lambda: Complex64, theta: f64, k: u32) -> Result<Self> {
        require_finite_c(lambda, "lambda")?;
        require_finite(theta, "theta")?;
        if theta <= 0.0 {
            return Err(DelayError::domain(format!("theta must be > 0, got {theta}")));
        }
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let term = ExpPolyTerm::new(Complex64::new(sign, 0.0), lambda, k)?;
        FiniteKernel::new(vec![term], (0.0, theta), lambda.im == 0.0)
    }

    pub fn terms(&self) -> &[ExpPolyTerm] {
        &self.terms
    }

    pub fn support(&self) -> (f64, f64) {
        self.support
    }

    pub fn is_real_valued(&self) -> bool {
        self.real_valued
    }

    pub fn stability(&self) -> StabilityClass {
        if self.terms.iter().all(|t| t.lambda.re < 0.0) {
            StabilityClass::Stable
        } else {
            StabilityClass::Unstable
        }
    }

    /// Pointwise value; exactly zero outside the closed support.
    pub fn eval(&self, t: f64) -> Complex64 {
        if t < self.support.0 || t > self.support.1 {
            return Complex64::new(0.0, 0.0);
        }
        if let Some(lat) = &self.lattice {
            return lat.eval(t);
        }
        let mut acc = NeumaierC::default();
        for term in &self.terms {
            acc.add(term.eval(t));
        }
        acc.value()
    }

    /// `a·f + b·g` for kernels on the same support. Terms with equal
    /// `(λ, power)` within `COALESCE_TOL` are merged; exact-zero coefficients
    /// are dropped.
    pub fn scale_add(a: Complex64, f: &FiniteKernel, b: Complex64, g: &FiniteKernel) -> Result<Self> {
        require_finite_c(a, "scale factor a")?;
        require_finite_c(b, "scale factor b")?;
        if f.support != g.support {
            return Err(DelayError::domain(format!(
                "mismatched supports [{}, {}] vs [{}, {}]; shift or split first",
                f.support.0, f.support.1, g.support.0, g.support.1
            )));
        }
        let mut merged: Vec<ExpPolyTerm> = Vec::with_capacity(f.terms.len() + g.terms.len());
        let scaled = f
            .terms
            .iter()
            .map(|t| (a * t.coeff, t.lambda, t.power))
            .chain(g.terms.iter().map(|t| (b * t.coeff, t.lambda, t.power)));
        for (coeff, lambda, power) in scaled {
            match merged.iter_mut().find(|m| {
                m.power == power
                    && (m.lambda.re - lambda.re).abs() <= COALESCE_TOL
                    && (m.lambda.im - lambda.im).abs() <= COALESCE_TOL
            }) {
                Some(m) => m.coeff += coeff,
                None => merged.push(ExpPolyTerm {
                    coeff,
                    lambda,
                    power,
                }),
            }
        }
        merged.retain(|t| t.coeff != Complex64::new(0.0, 0.0));
        let real = (a.im == 0.0 && b.im == 0.0 && f.real_valued && g.real_valued)
            || check_conjugate_pairing(&merged).is_ok();
        FiniteKernel::new(merged, f.support, real)
    }

    /// Multiplies the kernel by `(−t)^k`: every power grows by `k`, every
    /// coefficient flips sign `k` times. Support is unchanged.
    pub fn derivative_lift(&self, k: u32) -> Result<Self> {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let terms = self
            .terms
            .iter()
            .map(|t| ExpPolyTerm::new(t.coeff * sign, t.lambda, t.power + k))
            .collect::<Result<Vec<_>>>()?;
        FiniteKernel::new(terms, self.support, self.real_valued)
    }

    /// Time shift `k'(t) = k(t − delay)`, re-expanding `(t−d)^j e^{λ(t−d)}`
    /// in the term basis with the binomial theorem.
    pub fn shift_support(&self, delay: f64) -> Result<Self> {
        require_finite(delay, "delay")?;
        let start = self.support.0 + delay;
        if start < 0.0 {
            return Err(DelayError::domain(format!(
                "shift by {delay} moves the support start to {start} < 0"
            )));
        }
        if delay == 0.0 {
            return Ok(self.clone());
        }
        let mut out: Vec<ExpPolyTerm> = Vec::new();
        for term in &self.terms {
            let phase = (-term.lambda * delay).exp();
            let j = term.power;
            // (t−d)^j = Σ_m C(j,m) t^m (−d)^{j−m}
            let mut binom = 1.0f64;
            for m in (0..=j).rev() {
                let c = term.coeff * phase * binom * (-delay).powi((j - m) as i32);
                push_coalesced(&mut out, c, term.lambda, m);
                if m > 0 {
                    // C(j, m−1) = C(j, m) · m / (j − m + 1)
                    binom = binom * m as f64 / (j - m + 1) as f64;
                }
            }
        }
        out.retain(|t| t.coeff != Complex64::new(0.0, 0.0));
        FiniteKernel::new(out, (start, self.support.1 + delay), self.real_valued)
    }

    /// `∫ |k(t)| dt` over the support by adaptive quadrature.
    pub fn l1_norm(&self, tol: f64) -> Result<f64> {
        quad::l1_norm_of(|t| self.eval(t), self.support.0, self.support.1, tol, &[])
    }
}

fn push_coalesced(out: &mut Vec<ExpPolyTerm>, coeff: Complex64, lambda: Complex64, power: u32) {
    match out.iter_mut().find(|m| {
        m.power == power
            && (m.lambda.re - lambda.re).abs() <= COALESCE_TOL
            && (m.lambda.im - lambda.im).abs() <= COALESCE_TOL
    }) {
        Some(m) => m.coeff += coeff,
        None => out.push(ExpPolyTerm {
            coeff,
            lambda,
            power,
        }),
    }
}

/// Every complex term must have a conjugate partner (conjugated λ and c,
/// same power) for the kernel to be real on its support.
fn check_conjugate_pairing(terms: &[ExpPolyTerm]) -> Result<()> {
    let tol = 1e-12;
    let needs_partner =
        |t: &ExpPolyTerm| t.lambda.im.abs() > tol || t.coeff.im.abs() > tol * (1.0 + t.coeff.re.abs());
    let mut used = vec![false; terms.len()];
    for (i, t) in terms.iter().enumerate() {
        if used[i] || !needs_partner(t) {
            continue;
        }
        let close = |a: Complex64, b: Complex64| {
            (a.re - b.re).abs() <= tol * (1.0 + a.re.abs())
                && (a.im - b.im).abs() <= tol * (1.0 + a.im.abs())
        };
        let partner = terms.iter().enumerate().position(|(jj, u)| {
            jj != i
                && !used[jj]
                && u.power == t.power
                && close(u.lambda, t.lambda.conj())
                && close(u.coeff, t.coeff.conj())
        });
        match partner {
            Some(jj) => {
                used[i] = true;
                used[jj] = true;
            }
            None => {
                return Err(DelayError::domain(format!(
                    "kernel marked real_valued but term {i} (λ = {}, c = {}) has no \
                     conjugate partner",
                    t.lambda, t.coeff
                )))
            }
        }
    }
    Ok(())
}

/// Purely atomic distribution `Σ f_n δ(t − t_n)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<[f64; 3]>", into = "Vec<[f64; 3]>")]
pub struct AtomicDistribution {
    impulses: Vec<(f64, Complex64)>,
}

impl AtomicDistribution {
    pub fn new(impulses: Vec<(f64, Complex64)>) -> Result<Self> {
        let mut prev = -1.0f64;
        for &(t, w) in &impulses {
            require_finite(t, "impulse time")?;
            require_finite_c(w, "impulse weight")?;
            if t < 0.0 {
                return Err(DelayError::domain(format!("impulse time {t} < 0")));
            }
            if t <= prev {
                return Err(DelayError::domain(
                    "impulse times must be strictly increasing",
                ));
            }
            prev = t;
        }
        Ok(AtomicDistribution { impulses })
    }

    pub fn empty() -> Self {
        AtomicDistribution { impulses: vec![] }
    }

    pub fn impulses(&self) -> &[(f64, Complex64)] {
        &self.impulses
    }

    /// Atomic part of the A-norm: `Σ |f_n|`.
    pub fn weight_sum(&self) -> f64 {
        self.impulses.iter().map(|(_, w)| w.norm()).sum()
    }
}

impl TryFrom<Vec<[f64; 3]>> for AtomicDistribution {
    type Error = DelayError;
    fn try_from(rows: Vec<[f64; 3]>) -> Result<Self> {
        AtomicDistribution::new(
            rows.into_iter()
                .map(|[t, re, im]| (t, Complex64::new(re, im)))
                .collect(),
        )
    }
}

impl From<AtomicDistribution> for Vec<[f64; 3]> {
    fn from(a: AtomicDistribution) -> Self {
        a.impulses.iter().map(|&(t, w)| [t, w.re, w.im]).collect()
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    c: [f64; 2],
    lambda: [f64; 2],
    j: u32,
}

#[derive(Serialize, Deserialize)]
struct KernelJson {
    support: [f64; 2],
    real: bool,
    terms: Vec<TermJson>,
}

impl TryFrom<KernelJson> for FiniteKernel {
    type Error = DelayError;
    fn try_from(k: KernelJson) -> Result<Self> {
        let terms = k
            .terms
            .into_iter()
            .map(|t| {
                ExpPolyTerm::new(
                    Complex64::new(t.c[0], t.c[1]),
                    Complex64::new(t.lambda[0], t.lambda[1]),
                    t.j,
                )
            })
            .collect::<Result<Vec<_>>>()?;
        FiniteKernel::new(terms, (k.support[0], k.support[1]), k.real)
    }
}

impl From<FiniteKernel> for KernelJson {
    fn from(k: FiniteKernel) -> Self {
        KernelJson {
            support: [k.support.0, k.support.1],
            real: k.real_valued,
            terms: k
                .terms
                .iter()
                .map(|t| TermJson {
                    c: [t.coeff.re, t.coeff.im],
                    lambda: [t.lambda.re, t.lambda.im],
                    j: t.power,
                })
                .collect(),
        }
    }
}
