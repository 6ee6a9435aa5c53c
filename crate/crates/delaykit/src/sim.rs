//! Delay state-space realization and fixed-step simulation.
//!
//! A stable kernel on `[0, ϑ]` realizes as an ODE driven by `u(t)` and
//! `u(t−ϑ)`: each term `c·t^j e^{λt}` contributes a Jordan chain whose
//! delayed-input injections cancel the tail of the exponential beyond the
//! support. The integrator is fixed-step RK4 with a linear-interpolation
//! history buffer for the delayed input.

use std::io::{self, Write};

use num_complex::Complex64;
use serde::Serialize;

use crate::approx::{approx_theta_lambda, ApproxConfig};
use crate::error::{DelayError, Result};
use crate::kernel::{FiniteKernel, StabilityClass};
use crate::quad;

/// `ẋ = Ax + B0·u(t) + Bd·u(t−ϑ)`, `y = Cx + D0·u(t) + Dd·u(t−ϑ)`.
#[derive(Clone, Debug)]
pub struct DelayStateSpace {
    /// Row-major `dim × dim` state matrix.
    pub a: Vec<Complex64>,
    pub b0: Vec<Complex64>,
    pub bd: Vec<Complex64>,
    pub c: Vec<Complex64>,
    pub d0: Complex64,
    pub dd: Complex64,
    pub theta: f64,
    pub dim: usize,
}

impl DelayStateSpace {
    /// Transfer `C(sI−A)^{−1}(B0 + Bd·e^{−sϑ}) + D0 + Dd·e^{−sϑ}`.
    pub fn transfer_at(&self, s: Complex64) -> Result<Complex64> {
        let n = self.dim;
        let delay = (-s * self.theta).exp();
        let mut m = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for j in 0..n {
                m[i * n + j] = -self.a[i * n + j];
            }
            m[i * n + i] += s;
        }
        let mut rhs: Vec<Complex64> = (0..n).map(|i| self.b0[i] + self.bd[i] * delay).collect();
        solve_dense(&mut m, &mut rhs, n)?;
        let mut y = self.d0 + self.dd * delay;
        for i in 0..n {
            y += self.c[i] * rhs[i];
        }
        Ok(y)
    }

    fn derivative(&self, x: &[Complex64], u: f64, ud: f64, out: &mut [Complex64]) {
        let n = self.dim;
        for i in 0..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..n {
                acc += self.a[i * n + j] * x[j];
            }
            out[i] = acc + self.b0[i] * u + self.bd[i] * ud;
        }
    }

    fn output(&self, x: &[Complex64], u: f64, ud: f64) -> f64 {
        let mut y = self.d0 * u + self.dd * ud;
        for i in 0..self.dim {
            y += self.c[i] * x[i];
        }
        y.re
    }
}

fn solve_dense(m: &mut [Complex64], rhs: &mut [Complex64], n: usize) -> Result<()> {
    let scale = m.iter().map(|v| v.norm()).fold(f64::MIN_POSITIVE, f64::max);
    for col in 0..n {
        let (pivot_row, pivot) = (col..n)
            .map(|r| (r, m[r * n + col]))
            .max_by(|a, b| a.1.norm().partial_cmp(&b.1.norm()).unwrap())
            .unwrap();
        if pivot.norm() <= 1e-14 * scale {
            return Err(DelayError::numeric("singular resolvent system"));
        }
        if pivot_row != col {
            for j in 0..n {
                m.swap(col * n + j, pivot_row * n + j);
            }
            rhs.swap(col, pivot_row);
        }
        for row in col + 1..n {
            let factor = m[row * n + col] / pivot;
            if factor == Complex64::new(0.0, 0.0) {
                continue;
            }
            for j in col..n {
                let sub = factor * m[col * n + j];
                m[row * n + j] -= sub;
            }
            let sub = factor * rhs[col];
            rhs[row] -= sub;
        }
    }
    for col in (0..n).rev() {
        let mut v = rhs[col];
        for j in col + 1..n {
            v -= m[col * n + j] * rhs[j];
        }
        rhs[col] = v / m[col * n + col];
    }
    Ok(())
}

/// Realization of a stable kernel on `[0, ϑ]`.
///
/// Term `c·t^j e^{λt}` becomes a chain `ẋ_1 = λx_1 + w`, `ẋ_i = λx_i +
/// x_{i−1}`, output `c·j!·x_{j+1}`, where `w` injects `u(t)` at stage 1 and
/// `u(t−ϑ)` at stage `m+1` with coefficient `−e^{λϑ}ϑ^m/m!`. The delayed
/// injections reproduce the exact truncated transfer
/// `j!/z^{j+1} − e^{−zϑ} Σ_m (j!/m!)·ϑ^m/z^{j+1−m}` with `z = s−λ`.
pub fn realize(kernel: &FiniteKernel) -> Result<DelayStateSpace> {
    let (lo, hi) = kernel.support();
    if lo != 0.0 {
        return Err(DelayError::domain(format!(
            "realization requires support starting at 0, got [{lo}, {hi}]"
        )));
    }
    if kernel.stability() != StabilityClass::Stable {
        return Err(DelayError::domain(
            "kernel has an exponent with Re λ >= 0; realizing it directly is unstable, \
             construct a stable approximant first",
        ));
    }
    let theta = hi;
    let dim: usize = kernel.terms().iter().map(|t| t.power as usize + 1).sum();
    let mut a = vec![Complex64::new(0.0, 0.0); dim * dim];
    let mut b0 = vec![Complex64::new(0.0, 0.0); dim];
    let mut bd = vec![Complex64::new(0.0, 0.0); dim];
    let mut c = vec![Complex64::new(0.0, 0.0); dim];
    let mut offset = 0usize;
    for term in kernel.terms() {
        let j = term.power as usize;
        let n = j + 1;
        let gain = (term.lambda * theta).exp();
        let mut factorial = 1.0f64;
        let mut theta_pow = 1.0f64;
        for m in 0..n {
            let row = offset + m;
            a[row * dim + row] = term.lambda;
            if m > 0 {
                a[row * dim + row - 1] = Complex64::new(1.0, 0.0);
                factorial *= m as f64;
                theta_pow *= theta;
            }
            bd[row] = -gain * (theta_pow / factorial);
        }
        b0[offset] = Complex64::new(1.0, 0.0);
        c[offset + j] = term.coeff * factorial;
        offset += n;
    }
    Ok(DelayStateSpace {
        a,
        b0,
        bd,
        c,
        d0: Complex64::new(0.0, 0.0),
        dd: Complex64::new(0.0, 0.0),
        theta,
        dim,
    })
}

/// Input signal; zero for `t < 0`.
#[derive(Clone, Debug)]
pub enum Signal {
    Zero,
    Step(f64),
    Sine { amplitude: f64, omega: f64 },
    Samples { dt: f64, values: Vec<f64> },
}

impl Signal {
    pub fn eval(&self, t: f64) -> f64 {
        if t < 0.0 {
            return 0.0;
        }
        match self {
            Signal::Zero => 0.0,
            Signal::Step(a) => *a,
            Signal::Sine { amplitude, omega } => amplitude * (omega * t).sin(),
            Signal::Samples { dt, values } => {
                let pos = t / dt;
                let idx = pos.floor() as usize;
                if values.is_empty() || idx + 1 >= values.len() {
                    return *values.last().unwrap_or(&0.0);
                }
                let frac = pos - idx as f64;
                values[idx] * (1.0 - frac) + values[idx + 1] * frac
            }
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SimConfig {
    pub dt: f64,
    pub t_end: f64,
}

impl SimConfig {
    pub fn new(dt: f64, t_end: f64) -> Result<Self> {
        if !(dt > 0.0 && dt.is_finite() && t_end > 0.0 && t_end.is_finite()) {
            return Err(DelayError::domain(format!(
                "simulation needs dt > 0 and horizon > 0, got dt={dt}, T={t_end}"
            )));
        }
        if t_end / dt > 1e7 {
            return Err(DelayError::capacity(format!(
                "T/dt = {:.3e} exceeds the 1e7 step cap",
                t_end / dt
            )));
        }
        Ok(SimConfig { dt, t_end })
    }

    fn steps(&self) -> usize {
        (self.t_end / self.dt).round() as usize
    }
}

/// Uniform-grid simulation output.
#[derive(Clone, Debug)]
pub struct SimTrace {
    pub times: Vec<f64>,
    pub signals: Vec<(String, Vec<f64>)>,
}

impl SimTrace {
    pub fn signal(&self, name: &str) -> Option<&[f64]> {
        self.signals
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, v)| v.as_slice())
    }

    /// CSV with header `t,<signal>...` and `%.9e` values.
    pub fn write_csv(&self, w: &mut impl Write) -> io::Result<()> {
        write!(w, "t")?;
        for (name, _) in &self.signals {
            write!(w, ",{name}")?;
        }
        writeln!(w)?;
        for (i, &t) in self.times.iter().enumerate() {
            write!(w, "{}", fmt_e(t, 9))?;
            for (_, vals) in &self.signals {
                write!(w, ",{}", fmt_e(vals[i], 9))?;
            }
            writeln!(w)?;
        }
        Ok(())
    }
}

/// C-style `%.<prec>e` formatting: two-digit exponent with explicit sign,
/// stable across platforms for byte-identical outputs.
pub fn fmt_e(x: f64, prec: usize) -> String {
    let s = format!("{:.*e}", prec, x);
    let (mant, exp) = s.split_once('e').unwrap();
    let (sign, digits) = match exp.strip_prefix('-') {
        Some(d) => ('-', d),
        None => ('+', exp),
    };
    if digits.len() >= 2 {
        format!("{mant}e{sign}{digits}")
    } else {
        format!("{mant}e{sign}0{digits}")
    }
}

struct History {
    dt: f64,
    values: Vec<f64>,
}

impl History {
    fn at(&self, t: f64) -> f64 {
        if t < 0.0 || self.values.is_empty() {
            return 0.0;
        }
        let pos = t / self.dt;
        let idx = pos.floor() as usize;
        if idx + 1 >= self.values.len() {
            return *self.values.last().unwrap();
        }
        let frac = pos - idx as f64;
        self.values[idx] * (1.0 - frac) + self.values[idx + 1] * frac
    }
}

/// RK4 simulation of a realized block.
///
/// The undelayed input is evaluated exactly at substage times; the delayed
/// input reads a grid-sampled history buffer through linear interpolation
/// (the `dt ≤ ϑ/10` rule keeps the buffer causal at every substage).
pub fn simulate_block(sys: &DelayStateSpace, input: &Signal, cfg: &SimConfig) -> Result<SimTrace> {
    if cfg.dt > sys.theta / 10.0 {
        return Err(DelayError::domain(format!(
            "dt = {} exceeds theta/10 = {}",
            cfg.dt,
            sys.theta / 10.0
        )));
    }
    let steps = cfg.steps();
    let dt = cfg.dt;
    let mut hist = History {
        dt,
        values: Vec::with_capacity(steps + 1),
    };
    let mut x = vec![Complex64::new(0.0, 0.0); sys.dim];
    let mut times = Vec::with_capacity(steps + 1);
    let mut us = Vec::with_capacity(steps + 1);
    let mut ys = Vec::with_capacity(steps + 1);

    let mut k1 = vec![Complex64::new(0.0, 0.0); sys.dim];
    let mut k2 = k1.clone();
    let mut k3 = k1.clone();
    let mut k4 = k1.clone();
    let mut tmp = k1.clone();

    for step in 0..=steps {
        let t = step as f64 * dt;
        let u = input.eval(t);
        hist.values.push(u);
        times.push(t);
        us.push(u);
        ys.push(sys.output(&x, u, hist.at(t - sys.theta)));
        if step == steps {
            break;
        }

        let um = input.eval(t + 0.5 * dt);
        let ue = input.eval(t + dt);
        let udm = hist.at(t + 0.5 * dt - sys.theta);
        let ude = hist.at(t + dt - sys.theta);

        sys.derivative(&x, u, hist.at(t - sys.theta), &mut k1);
        for i in 0..sys.dim {
            tmp[i] = x[i] + 0.5 * dt * k1[i];
        }
        sys.derivative(&tmp, um, udm, &mut k2);
        for i in 0..sys.dim {
            tmp[i] = x[i] + 0.5 * dt * k2[i];
        }
        sys.derivative(&tmp, um, udm, &mut k3);
        for i in 0..sys.dim {
            tmp[i] = x[i] + dt * k3[i];
        }
        sys.derivative(&tmp, ue, ude, &mut k4);
        for i in 0..sys.dim {
            x[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
    }
    Ok(SimTrace {
        times,
        signals: vec![("u".into(), us), ("y".into(), ys)],
    })
}

/// Exact-operator oracle: `y(t) = ∫ f(τ) u(t−τ) dτ` by per-sample adaptive
/// quadrature. Works for unstable kernels too.
pub fn convolve_direct(kernel: &FiniteKernel, input: &Signal, cfg: &SimConfig) -> Result<SimTrace> {
    let (lo, hi) = kernel.support();
    let width = hi - lo;
    if cfg.dt > width / 10.0 {
        return Err(DelayError::domain(format!(
            "dt = {} exceeds support width/10 = {}",
            cfg.dt,
            width / 10.0
        )));
    }
    let steps = cfg.steps();
    let mut times = Vec::with_capacity(steps + 1);
    let mut us = Vec::with_capacity(steps + 1);
    let mut ys = Vec::with_capacity(steps + 1);
    for step in 0..=steps {
        let t = step as f64 * cfg.dt;
        // The input's switch at time zero is a kink at τ = t.
        let upper = hi.min(t);
        let y = if upper <= lo {
            0.0
        } else {
            quad::integrate_complex(
                |tau| kernel.eval(tau) * input.eval(t - tau),
                lo,
                upper,
                1e-9,
            )?
            .re
        };
        times.push(t);
        us.push(input.eval(t));
        ys.push(y);
    }
    Ok(SimTrace {
        times,
        signals: vec![("u".into(), us), ("y".into(), ys)],
    })
}

/// Small-gain certificate: `margin = 1 − (‖n‖+‖d‖)·max(ε_n, ε_d)`.
///
/// `‖(n d)‖` is taken as `‖n‖+‖d‖`, the value for which the proof inequality
/// `‖n∗a + d∗b‖ ≤ (‖n‖+‖d‖)·max(‖a‖,‖b‖)` holds termwise.
pub fn small_gain_margin(norm_n: f64, norm_d: f64, eps_n: f64, eps_d: f64) -> Result<(f64, bool)> {
    for (v, name) in [
        (norm_n, "norm_n"),
        (norm_d, "norm_d"),
        (eps_n, "eps_n"),
        (eps_d, "eps_d"),
    ] {
        if !(v >= 0.0 && v.is_finite()) {
            return Err(DelayError::domain(format!(
                "{name} must be finite and >= 0, got {v}"
            )));
        }
    }
    let margin = 1.0 - (norm_n + norm_d) * eps_n.max(eps_d);
    Ok((margin, margin > 0.0))
}

#[derive(Clone, Debug, Serialize)]
pub struct DemoSummary {
    pub dc_ideal: f64,
    pub dc_app: f64,
    pub sup_diff: f64,
    pub order: usize,
    pub eps_measured: f64,
    pub margin: f64,
}

#[derive(Clone, Debug)]
pub struct DemoOutput {
    pub trace_ideal: SimTrace,
    pub trace_app: SimTrace,
    pub summary: DemoSummary,
}

const DEMO_SIGNALS: [&str; 5] = ["u2", "e1", "e2", "y1", "y2"];
const INSTABILITY_ABORT: f64 = 1e6;

fn demo_trace(times: Vec<f64>, cols: [Vec<f64>; 5]) -> SimTrace {
    SimTrace {
        times,
        signals: DEMO_SIGNALS
            .iter()
            .zip(cols)
            .map(|(n, v)| (n.to_string(), v))
            .collect(),
    }
}

/// Convolution `∫₀¹ e^τ · y(t−τ) dτ` of the exact elementary kernel with a
/// piecewise-linear history, integrated segment-by-segment with Simpson
/// (the integrand is smooth within each history segment).
fn exact_theta1_conv(hist: &History, t: f64) -> f64 {
    let mut acc = 0.0;
    let n_seg = (1.0 / hist.dt).ceil() as usize;
    for seg in 0..n_seg {
        let a = (seg as f64 * hist.dt).min(1.0);
        let b = ((seg + 1) as f64 * hist.dt).min(1.0);
        if b <= a {
            break;
        }
        let g = |tau: f64| tau.exp() * hist.at(t - tau);
        let m = 0.5 * (a + b);
        acc += (b - a) / 6.0 * (g(a) + 4.0 * g(m) + g(b));
    }
    acc
}

/// Feedback demo of the first-order unstable plant with unit input delay,
/// `ẏ2 = y2 + e2(t−1)`, under the distributed-delay controller
/// `y1 = 2e·e1 − 2(θ_1 ∗ y1)`. Unit step at the plant disturbance input u2,
/// zero reference u1.
///
/// The ideal loop runs the controller's internal convolution against the
/// exact kernel `e^τ` with a per-step fixed point (the convolution has no
/// instantaneous mass, so the iteration contracts immediately). The
/// approximate loop realizes the order-`order` stable approximant of θ_1 and
/// integrates the whole loop as one explicit RK4 system.
pub fn closed_loop_demo(order: usize, cfg: &SimConfig) -> Result<DemoOutput> {
    if order < 1 {
        return Err(DelayError::domain(
            "demo order must be >= 1; order 0 drops the distributed-delay term \
             (see closed_loop_unstable_surrogate)",
        ));
    }
    if cfg.dt > 0.01 {
        return Err(DelayError::domain(format!(
            "demo requires dt <= 0.01, got {}",
            cfg.dt
        )));
    }
    let trace_ideal = demo_ideal_loop(cfg)?;

    let acfg = ApproxConfig::new(1.0, order)?;
    let app = approx_theta_lambda(Complex64::new(1.0, 0.0), 1.0, &acfg)?;
    let sys = realize(&app.kernel)?;
    let trace_app = demo_approx_loop(&sys, cfg)?;

    let y2i = trace_ideal.signal("y2").unwrap();
    let y2a = trace_app.signal("y2").unwrap();
    let sup_diff = y2i
        .iter()
        .zip(y2a)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0f64, f64::max);
    // Factor norms for this plant are ‖n‖ = 1 and ‖d‖ = 3; only the
    // denominator factor is perturbed, and it carries the θ_1 term with
    // weight 2, so ε_d = 2·ε.
    let (margin, _) = small_gain_margin(1.0, 3.0, 0.0, 2.0 * app.measured_eps)?;
    Ok(DemoOutput {
        summary: DemoSummary {
            dc_ideal: *y2i.last().unwrap(),
            dc_app: *y2a.last().unwrap(),
            sup_diff,
            order,
            eps_measured: app.measured_eps,
            margin,
        },
        trace_ideal,
        trace_app,
    })
}

fn check_abort(t: f64, name: &str, v: f64) -> Result<()> {
    if !v.is_finite() || v.abs() > INSTABILITY_ABORT {
        return Err(DelayError::Instability {
            t,
            signal: name.to_string(),
            value: v,
        });
    }
    Ok(())
}

fn demo_ideal_loop(cfg: &SimConfig) -> Result<SimTrace> {
    let dt = cfg.dt;
    let steps = cfg.steps();
    let two_e = 2.0 * std::f64::consts::E;
    let u2 = Signal::Step(1.0);

    let mut y1_hist = History {
        dt,
        values: Vec::with_capacity(steps + 1),
    };
    let mut times = Vec::with_capacity(steps + 1);
    let mut cols: [Vec<f64>; 5] = std::array::from_fn(|_| Vec::with_capacity(steps + 1));
    let mut y2 = 0.0f64;

    // y1(0): e1(0) = −y2(0) = 0 and the convolution over empty history is 0.
    let mut y1 = 0.0f64;
    for step in 0..=steps {
        let t = step as f64 * dt;
        if step > 0 {
            // Advance the plant through [t−dt, t] with RK4; the delayed plant
            // input e2(s−1) = u2(s−1) + y1(s−1) reads only history older than
            // the current step.
            let t0 = t - dt;
            let e2_delayed = |s: f64| u2.eval(s - 1.0) + y1_hist.at(s - 1.0);
            let f = |s: f64, y: f64| y + e2_delayed(s);
            let k1 = f(t0, y2);
            let k2 = f(t0 + 0.5 * dt, y2 + 0.5 * dt * k1);
            let k3 = f(t0 + 0.5 * dt, y2 + 0.5 * dt * k2);
            let k4 = f(t0 + dt, y2 + dt * k3);
            y2 += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

            // Controller fixed point at the new time: the candidate y1(t)
            // only enters through the interpolated newest history segment.
            y1_hist.values.push(y1_hist.values.last().copied().unwrap_or(0.0));
            let e1 = -y2;
            let mut cand = *y1_hist.values.last().unwrap();
            for _ in 0..5 {
                *y1_hist.values.last_mut().unwrap() = cand;
                let next = two_e * e1 - 2.0 * exact_theta1_conv(&y1_hist, t);
                if (next - cand).abs() <= 1e-12 * (1.0 + cand.abs()) {
                    cand = next;
                    break;
                }
                cand = next;
            }
            *y1_hist.values.last_mut().unwrap() = cand;
            y1 = cand;
        } else {
            y1_hist.values.push(y1);
        }
        check_abort(t, "y2", y2)?;
        check_abort(t, "y1", y1)?;
        let u2v = u2.eval(t);
        times.push(t);
        cols[0].push(u2v);
        cols[1].push(-y2);
        cols[2].push(u2v + y1);
        cols[3].push(y1);
        cols[4].push(y2);
    }
    Ok(demo_trace(times, cols))
}

fn demo_approx_loop(sys: &DelayStateSpace, cfg: &SimConfig) -> Result<SimTrace> {
    let dt = cfg.dt;
    let steps = cfg.steps();
    let two_e = 2.0 * std::f64::consts::E;
    let u2 = Signal::Step(1.0);
    let dim = sys.dim;

    // Combined state: plant y2 followed by the approximant block states; the
    // controller output y1 = 2e·(−y2) − 2·Re(C z) is algebraic in the state.
    let mut y2 = 0.0f64;
    let mut z = vec![Complex64::new(0.0, 0.0); dim];
    let mut y1_hist = History {
        dt,
        values: Vec::with_capacity(steps + 1),
    };
    let mut times = Vec::with_capacity(steps + 1);
    let mut cols: [Vec<f64>; 5] = std::array::from_fn(|_| Vec::with_capacity(steps + 1));

    let y1_of = |y2v: f64, zv: &[Complex64]| -> f64 {
        let mut conv = Complex64::new(0.0, 0.0);
        for i in 0..dim {
            conv += sys.c[i] * zv[i];
        }
        two_e * (-y2v) - 2.0 * conv.re
    };

    let mut kz = vec![vec![Complex64::new(0.0, 0.0); dim]; 4];
    let mut ztmp = vec![Complex64::new(0.0, 0.0); dim];

    for step in 0..=steps {
        let t = step as f64 * dt;
        let y1 = y1_of(y2, &z);
        y1_hist.values.push(y1);
        check_abort(t, "y2", y2)?;
        check_abort(t, "y1", y1)?;
        let u2v = u2.eval(t);
        times.push(t);
        cols[0].push(u2v);
        cols[1].push(-y2);
        cols[2].push(u2v + y1);
        cols[3].push(y1);
        cols[4].push(y2);
        if step == steps {
            break;
        }

        // One RK4 step of the joint system; delayed terms read histories.
        let mut ky = [0.0f64; 4];
        let stage_t = [t, t + 0.5 * dt, t + 0.5 * dt, t + dt];
        let stage_w = [0.0, 0.5, 0.5, 1.0];
        for s in 0..4 {
            let (y2s, zs): (f64, &[Complex64]) = if s == 0 {
                (y2, &z)
            } else {
                for i in 0..dim {
                    ztmp[i] = z[i] + stage_w[s] * dt * kz[s - 1][i];
                }
                (y2 + stage_w[s] * dt * ky[s - 1], &ztmp)
            };
            let ts = stage_t[s];
            let y1s = y1_of(y2s, zs);
            let y1d = y1_hist.at(ts - sys.theta);
            ky[s] = y2s + (u2.eval(ts - 1.0) + y1_hist.at(ts - 1.0));
            let (ks, rest) = kz.split_at_mut(s + 1);
            let _ = rest;
            let kslot = &mut ks[s];
            for i in 0..dim {
                let mut acc = Complex64::new(0.0, 0.0);
                for j in 0..dim {
                    acc += sys.a[i * dim + j] * zs[j];
                }
                kslot[i] = acc + sys.b0[i] * y1s + sys.bd[i] * y1d;
            }
        }
        y2 += dt / 6.0 * (ky[0] + 2.0 * ky[1] + 2.0 * ky[2] + ky[3]);
        for i in 0..dim {
            z[i] += dt / 6.0 * (kz[0][i] + 2.0 * kz[1][i] + 2.0 * kz[2][i] + kz[3][i]);
        }
    }
    Ok(demo_trace(times, cols))
}

/// The demo loop with the distributed-delay controller term dropped
/// (`y1 = 2e·e1` only). The plant pole at +1 is then uncompensated and the
/// loop diverges; the expected outcome is the instability abort.
pub fn closed_loop_unstable_surrogate(cfg: &SimConfig) -> Result<SimTrace> {
    let dt = cfg.dt;
    let steps = cfg.steps();
    let two_e = 2.0 * std::f64::consts::E;
    let u2 = Signal::Step(1.0);
    let mut y1_hist = History {
        dt,
        values: Vec::with_capacity(steps + 1),
    };
    let mut times = Vec::with_capacity(steps + 1);
    let mut cols: [Vec<f64>; 5] = std::array::from_fn(|_| Vec::with_capacity(steps + 1));
    let mut y2 = 0.0f64;
    for step in 0..=steps {
        let t = step as f64 * dt;
        if step > 0 {
            let t0 = t - dt;
            let e2_delayed = |s: f64| u2.eval(s - 1.0) + y1_hist.at(s - 1.0);
            let f = |s: f64, y: f64| y + e2_delayed(s);
            let k1 = f(t0, y2);
            let k2 = f(t0 + 0.5 * dt, y2 + 0.5 * dt * k1);
            let k3 = f(t0 + 0.5 * dt, y2 + 0.5 * dt * k2);
            let k4 = f(t0 + dt, y2 + dt * k3);
            y2 += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        let y1 = two_e * (-y2);
        y1_hist.values.push(y1);
        check_abort(t, "y2", y2)?;
        check_abort(t, "y1", y1)?;
        let u2v = u2.eval(t);
        times.push(t);
        cols[0].push(u2v);
        cols[1].push(-y2);
        cols[2].push(u2v + y1);
        cols[3].push(y1);
        cols[4].push(y2);
    }
    Ok(demo_trace(times, cols))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::ExpPolyTerm;
    use crate::laplace::decompose;

    fn c64(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn realize_theta_minus_one() {
        // [TRIVIAL] Fig.-level structure: 1 state, gain −e^{−1} on the
        // delayed input.
        let k = FiniteKernel::elementary(c64(-1.0, 0.0), 1.0, 0).unwrap();
        let sys = realize(&k).unwrap();
        assert_eq!(sys.dim, 1);
        assert_eq!(sys.a[0], c64(-1.0, 0.0));
        assert_eq!(sys.b0[0], c64(1.0, 0.0));
        assert!((sys.bd[0] - c64(-(-1.0f64).exp(), 0.0)).norm() < 1e-15);
        assert_eq!(sys.c[0], c64(1.0, 0.0));
        // [DERIVED] θ̂_{−1}(0) = 1 − e^{−1}.
        let g0 = sys.transfer_at(c64(0.0, 0.0)).unwrap();
        assert!((g0.re - (1.0 - (-1.0f64).exp())).abs() < 1e-12);
    }

    #[test]
    fn realize_rejects_unstable_and_shifted() {
        let unstable = FiniteKernel::elementary(c64(1.0, 0.0), 1.0, 0).unwrap();
        assert!(realize(&unstable).is_err());
        let shifted = FiniteKernel::new(
            vec![ExpPolyTerm::new(c64(1.0, 0.0), c64(-1.0, 0.0), 0).unwrap()],
            (0.5, 1.5),
            true,
        )
        .unwrap();
        assert!(realize(&shifted).is_err());
    }

    #[test]
    fn realization_transfer_matches_decomposition() {
        // [DERIVED] dual route: resolvent solve vs elementary θ̂ sums.
        let k = FiniteKernel::new(
            vec![
                ExpPolyTerm::new(c64(0.8, 0.0), c64(-1.0, 0.0), 2).unwrap(),
                ExpPolyTerm::new(c64(-0.3, 0.0), c64(-2.5, 0.0), 0).unwrap(),
            ],
            (0.0, 1.5),
            true,
        )
        .unwrap();
        let sys = realize(&k).unwrap();
        let dec = decompose(&k).unwrap();
        for s in [
            c64(0.0, 0.0),
            c64(0.0, 1.0),
            c64(0.0, 10.0),
            c64(2.0, -3.0),
            c64(0.5, 100.0),
        ] {
            let a = sys.transfer_at(s).unwrap();
            let b = dec.transfer_at(s).unwrap();
            assert!((a - b).norm() < 1e-10, "s={s}: {a} vs {b}");
        }
    }

    #[test]
    fn impulse_response_matches_kernel() {
        // [DERIVED] h(t) = C e^{At} B0 + C e^{A(t−ϑ)} Bd·h(t−ϑ) equals the
        // kernel pointwise; the matrix exponential action is integrated by
        // RK4 on the homogeneous system with state jumps at 0 and ϑ.
        let k = FiniteKernel::new(
            vec![
                ExpPolyTerm::new(c64(1.2, 0.0), c64(-0.7, 0.0), 1).unwrap(),
                ExpPolyTerm::new(c64(0.4, 0.0), c64(-2.0, 0.0), 0).unwrap(),
            ],
            (0.0, 1.0),
            true,
        )
        .unwrap();
        let sys = realize(&k).unwrap();
        let dt = 1e-4;
        let mut x: Vec<Complex64> = sys.b0.clone();
        let mut worst = 0.0f64;
        let steps = (2.0 / dt) as usize;
        let mut k1 = vec![c64(0.0, 0.0); sys.dim];
        let mut k2 = k1.clone();
        let mut k3 = k1.clone();
        let mut k4 = k1.clone();
        let mut tmp = k1.clone();
        for step in 0..=steps {
            let t = step as f64 * dt;
            if (t - sys.theta).abs() < 0.5 * dt {
                for i in 0..sys.dim {
                    x[i] += sys.bd[i];
                }
            }
            let h: Complex64 = (0..sys.dim).map(|i| sys.c[i] * x[i]).sum();
            let want = k.eval(t.min(sys.theta - 1e-12).max(0.0));
            // Compare away from the support edge where the jump lands.
            if (t - sys.theta).abs() > 2.0 * dt && t < 2.0 {
                let want = if t > sys.theta { c64(0.0, 0.0) } else { want };
                worst = worst.max((h - want).norm());
            }
            sys.derivative(&x, 0.0, 0.0, &mut k1);
            for i in 0..sys.dim {
                tmp[i] = x[i] + 0.5 * dt * k1[i];
            }
            sys.derivative(&tmp, 0.0, 0.0, &mut k2);
            for i in 0..sys.dim {
                tmp[i] = x[i] + 0.5 * dt * k2[i];
            }
            sys.derivative(&tmp, 0.0, 0.0, &mut k3);
            for i in 0..sys.dim {
                tmp[i] = x[i] + dt * k3[i];
            }
            sys.derivative(&tmp, 0.0, 0.0, &mut k4);
            for i in 0..sys.dim {
                x[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
            }
        }
        assert!(worst < 1e-6, "worst {worst}");
    }

    #[test]
    fn zero_input_zero_trace() {
        // [TRIVIAL]
        let k = FiniteKernel::elementary(c64(-1.0, 0.0), 1.0, 0).unwrap();
        let sys = realize(&k).unwrap();
        let cfg = SimConfig::new(0.01, 2.0).unwrap();
        let tr = simulate_block(&sys, &Signal::Zero, &cfg).unwrap();
        assert!(tr.signal("y").unwrap().iter().all(|&v| v == 0.0));
        assert_eq!(tr.times[0], 0.0);
    }

    #[test]
    fn step_reaches_dc_gain() {
        // [DERIVED] step input: y(∞) = ∫₀¹ e^{−τ}dτ = 1 − e^{−1}.
        let k = FiniteKernel::elementary(c64(-1.0, 0.0), 1.0, 0).unwrap();
        let sys = realize(&k).unwrap();
        // The delayed-input jump at t = ϑ costs one O(dt) step whose effect
        // decays like e^{−(t−ϑ)}; the horizon buys the tolerance back.
        let cfg = SimConfig::new(0.005, 15.0).unwrap();
        let tr = simulate_block(&sys, &Signal::Step(1.0), &cfg).unwrap();
        let last = *tr.signal("y").unwrap().last().unwrap();
        assert!((last - (1.0 - (-1.0f64).exp())).abs() < 1e-9, "got {last}");
    }

    #[test]
    fn dt_rule_enforced() {
        let k = FiniteKernel::elementary(c64(-1.0, 0.0), 1.0, 0).unwrap();
        let sys = realize(&k).unwrap();
        let cfg = SimConfig::new(0.2, 2.0).unwrap();
        assert!(simulate_block(&sys, &Signal::Zero, &cfg).is_err());
        assert!(SimConfig::new(1e-9, 1e7).is_err());
    }

    #[test]
    fn rk4_self_convergence() {
        // Halving dt moves the trace by less than 1e-6 for a smooth input.
        let k = FiniteKernel::new(
            vec![ExpPolyTerm::new(c64(1.0, 0.0), c64(-1.5, 0.0), 1).unwrap()],
            (0.0, 1.0),
            true,
        )
        .unwrap();
        let sys = realize(&k).unwrap();
        let sine = Signal::Sine {
            amplitude: 1.0,
            omega: 2.0,
        };
        let t1 = simulate_block(&sys, &sine, &SimConfig::new(0.002, 4.0).unwrap()).unwrap();
        let t2 = simulate_block(&sys, &sine, &SimConfig::new(0.001, 4.0).unwrap()).unwrap();
        let y1 = t1.signal("y").unwrap();
        let y2 = t2.signal("y").unwrap();
        let sup = y1
            .iter()
            .enumerate()
            .map(|(i, &v)| (v - y2[2 * i]).abs())
            .fold(0.0f64, f64::max);
        assert!(sup < 1e-6, "sup {sup}");
    }

    #[test]
    fn convolve_running_integral() {
        // [TRIVIAL] θ_0 kernel, unit input: y(t) = min(t, 1).
        let k = FiniteKernel::elementary(c64(0.0, 0.0), 1.0, 0).unwrap();
        let cfg = SimConfig::new(0.05, 3.0).unwrap();
        let tr = convolve_direct(&k, &Signal::Step(1.0), &cfg).unwrap();
        for (&t, &y) in tr.times.iter().zip(tr.signal("y").unwrap()) {
            assert!((y - t.min(1.0)).abs() < 1e-8, "t={t} y={y}");
        }
    }

    #[test]
    fn convolve_unstable_kernel() {
        // [DERIVED] θ_1 kernel, unit input, t ≥ 1: y = e − 1.
        let k = FiniteKernel::elementary(c64(1.0, 0.0), 1.0, 0).unwrap();
        let cfg = SimConfig::new(0.1, 2.0).unwrap();
        let tr = convolve_direct(&k, &Signal::Step(1.0), &cfg).unwrap();
        let last = *tr.signal("y").unwrap().last().unwrap();
        assert!((last - (std::f64::consts::E - 1.0)).abs() < 1e-8);
    }

    #[test]
    fn oracle_agreement() {
        // Cross-oracle: RK4 realization vs per-sample quadrature.
        let k = FiniteKernel::new(
            vec![
                ExpPolyTerm::new(c64(0.9, 0.0), c64(-1.0, 0.0), 0).unwrap(),
                ExpPolyTerm::new(c64(-0.2, 0.0), c64(-3.0, 0.0), 1).unwrap(),
            ],
            (0.0, 1.0),
            true,
        )
        .unwrap();
        let sys = realize(&k).unwrap();
        let sine = Signal::Sine {
            amplitude: 1.0,
            omega: 3.0,
        };
        let cfg = SimConfig::new(0.001, 3.0).unwrap();
        let a = simulate_block(&sys, &sine, &cfg).unwrap();
        let b = convolve_direct(&k, &sine, &cfg).unwrap();
        let sup = a
            .signal("y")
            .unwrap()
            .iter()
            .zip(b.signal("y").unwrap())
            .map(|(x, y)| (x - y).abs())
            .fold(0.0f64, f64::max);
        assert!(sup < 1e-4, "sup {sup}");
    }

    #[test]
    fn small_gain_values() {
        // [TRIVIAL] zero errors leave the full margin.
        assert_eq!(small_gain_margin(1.0, 3.0, 0.0, 0.0).unwrap(), (1.0, true));
        // [DERIVED] ‖n‖=1, ‖d‖=3: threshold is max ε < 1/4.
        let (m, ok) = small_gain_margin(1.0, 3.0, 0.0, 0.2499).unwrap();
        assert!(ok && m > 0.0);
        let (m, ok) = small_gain_margin(1.0, 3.0, 0.0, 0.2501).unwrap();
        assert!(!ok && m < 0.0);
        // Monotone in each ε.
        let (m1, _) = small_gain_margin(1.0, 3.0, 0.1, 0.0).unwrap();
        let (m2, _) = small_gain_margin(1.0, 3.0, 0.2, 0.0).unwrap();
        assert!(m2 < m1);
        assert!(small_gain_margin(-1.0, 0.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn fmt_e_matches_c_printf() {
        assert_eq!(fmt_e(1.0, 9), "1.000000000e+00");
        assert_eq!(fmt_e(-0.0123456789, 9), "-1.234567890e-02");
        assert_eq!(fmt_e(6.022e23, 3), "6.022e+23");
        assert_eq!(fmt_e(0.0, 2), "0.00e+00");
        assert_eq!(fmt_e(1e-300, 2), "1.00e-300");
    }

    #[test]
    fn csv_shape() {
        let tr = SimTrace {
            times: vec![0.0, 0.5],
            signals: vec![("y".into(), vec![1.0, -2.0])],
        };
        let mut buf = Vec::new();
        tr.write_csv(&mut buf).unwrap();
        let s = String::from_utf8(buf).unwrap();
        assert_eq!(
            s,
            "t,y\n0.000000000e+00,1.000000000e+00\n5.000000000e-01,-2.000000000e+00\n"
        );
    }

    #[test]
    fn demo_reproduces_bezout_dc() {
        // [DERIVED] loop DC = 2e − 1 ≈ 4.436564; order 16 lands within 5%,
        // frozen terminal and sup-difference from the simulation oracle.
        let cfg = SimConfig::new(0.005, 20.0).unwrap();
        let out = closed_loop_demo(16, &cfg).unwrap();
        let dc = 2.0 * std::f64::consts::E - 1.0;
        assert!((out.summary.dc_ideal - dc).abs() < 2e-3, "ideal {}", out.summary.dc_ideal);
        assert!(
            (out.summary.dc_app - 4.657792).abs() < 2e-3,
            "app {}",
            out.summary.dc_app
        );
        assert!((out.summary.dc_app - dc).abs() / dc < 0.05);
        assert!(out.summary.sup_diff < 0.25, "sup {}", out.summary.sup_diff);
        assert!((out.summary.sup_diff - 0.2212).abs() < 5e-3);
        assert!(out.summary.margin > 0.0);
        assert!((out.summary.eps_measured - 0.01955088588).abs() < 1e-7);
    }

    #[test]
    fn demo_low_order_still_bounded() {
        // [DERIVED] n=5 exceeds the small-gain threshold yet simulates
        // bounded; the certificate is sufficient, not necessary.
        let cfg = SimConfig::new(0.005, 20.0).unwrap();
        let out = closed_loop_demo(5, &cfg).unwrap();
        assert!((out.summary.dc_app - 5.222).abs() < 5e-2, "app {}", out.summary.dc_app);
        assert!(out.summary.sup_diff < 1.0);
    }

    #[test]
    fn surrogate_diverges() {
        // [DERIVED] dropping the delay term uncovers the +1 plant pole; the
        // abort fires near t ≈ 12.7.
        let cfg = SimConfig::new(0.005, 20.0).unwrap();
        match closed_loop_unstable_surrogate(&cfg) {
            Err(DelayError::Instability { t, .. }) => {
                assert!((t - 12.725).abs() < 0.1, "aborted at {t}");
            }
            other => panic!("expected instability, got {other:?}"),
        }
    }

    #[test]
    fn demo_validation() {
        let cfg = SimConfig::new(0.005, 1.0).unwrap();
        assert!(closed_loop_demo(0, &cfg).is_err());
        let coarse = SimConfig::new(0.02, 1.0).unwrap();
        assert!(closed_loop_demo(4, &coarse).is_err());
    }
}
