//! A-norm distances, graph balls, and frequency-domain error reports.

use num_complex::Complex64;
use serde::Serialize;

use crate::approx::LowpassLumped;
use crate::error::{DelayError, Result};
use crate::kernel::{AtomicDistribution, FiniteKernel};
use crate::laplace::{Decomposition, FrequencyGrid};
use crate::quad;

/// A-norm ball around a stable kernel.
#[derive(Clone, Debug)]
pub struct GraphBall {
    pub center: FiniteKernel,
    radius: f64,
}

impl GraphBall {
    pub fn new(center: FiniteKernel, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(DelayError::domain(format!(
                "ball radius must be positive and finite, got {radius}"
            )));
        }
        Ok(GraphBall { center, radius })
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct GridSummary {
    pub min: f64,
    pub max: f64,
    pub pts: usize,
}

/// Frequency-domain comparison of a kernel against an approximant transfer.
///
/// `l1_error` is `None` when the comparand carries an atomic factor (the
/// low-pass variant): the A-distance to such objects is never small, so a
/// number here would mislead.
#[derive(Clone, Debug, Serialize)]
pub struct ErrorReport {
    #[serde(rename = "l1")]
    pub l1_error: Option<f64>,
    #[serde(rename = "hinf")]
    pub hinf_error: f64,
    pub phase_defect: f64,
    pub grid: GridSummary,
    #[serde(skip)]
    pub tol: f64,
}

/// L1 distance between two kernels over the union of their supports.
///
/// Both kernels evaluate to zero outside their own support, so the integrand
/// is simply `|f − g|` with the four support edges pinned as breakpoints.
pub fn a_norm_distance(f: &FiniteKernel, g: &FiniteKernel, tol: f64) -> Result<f64> {
    let (fl, fh) = f.support();
    let (gl, gh) = g.support();
    let lo = fl.min(gl);
    let hi = fh.max(gh);
    quad::l1_norm_of(
        |t| f.eval(t) - g.eval(t),
        lo,
        hi,
        tol,
        &[fl, fh, gl, gh],
    )
}

pub fn in_ball(f: &FiniteKernel, ball: &GraphBall, tol: f64) -> Result<bool> {
    Ok(a_norm_distance(f, &ball.center, tol)? <= ball.radius + tol)
}

/// `‖g − p‖_A = ‖g‖_{L1} + Σ|pᵢ|`: the function part and the atomic part of
/// the difference never interact, so the distance splits exactly.
pub fn atomic_distance(g: &FiniteKernel, p: &AtomicDistribution, tol: f64) -> Result<f64> {
    Ok(g.l1_norm(tol)? + p.weight_sum())
}

/// Comparand of [`frequency_error`]: a second kernel, or the low-pass lumped
/// surrogate whose transfer is closed-form.
///
/// The kernel variant takes the kernel itself, not its decomposition: the
/// compensated lattice evaluation is what keeps huge-coefficient approximants
/// usable as comparands.
#[derive(Clone, Copy)]
pub enum TransferOperand<'a> {
    Kernel(&'a FiniteKernel),
    Lumped(&'a LowpassLumped),
}

fn dec_support(dec: &Decomposition) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for comp in &dec.components {
        for &(d, _) in &comp.weight {
            lo = lo.min(d);
            hi = hi.max(d + dec.theta);
        }
    }
    if lo.is_finite() {
        (lo, hi)
    } else {
        (0.0, 0.0)
    }
}

/// Frequency-domain error report over a mandated grid.
///
/// The grid must span at least [1e-2, 1e3] rad/time at 50 points per decade;
/// sup norms over a continuum need a declared search density to mean anything.
///
/// For a kernel comparand the error transform is integrated in the time
/// domain, `ê(iω) = ∫ (f−g)(t) e^{−iωt} dt`, rather than evaluated as a
/// difference of transfers: expanded approximant kernels carry coefficients
/// up to ~1e10 whose term-by-term transforms cancel catastrophically, while
/// their time evaluation is compensated and accurate. The H∞ value is the
/// grid maximum refined by golden-section search between the neighbouring
/// grid points.
pub fn frequency_error(
    f: &Decomposition,
    g: TransferOperand,
    grid: &FrequencyGrid,
    l1_supplied: Option<f64>,
) -> Result<ErrorReport> {
    if grid.min() > 1e-2 || grid.max() < 1e3 || grid.points_per_decade() < 50.0 {
        return Err(DelayError::domain(format!(
            "frequency grid must span [1e-2, 1e3] rad/time at >= 50 points per decade; \
             got [{:.3e}, {:.3e}] at {:.1}",
            grid.min(),
            grid.max(),
            grid.points_per_decade()
        )));
    }

    let (l1_error, tol) = match g {
        TransferOperand::Kernel(gk) => {
            let l1 = match l1_supplied {
                Some(v) => v,
                None => {
                    let (fl, fh) = dec_support(f);
                    let (gl, gh) = gk.support();
                    // Norm-relative tolerance, same policy as the approximant
                    // measurement: |f−g| has kinked zero clusters whose panel
                    // estimates stall below a scale-relative floor.
                    let scale = quad::l1_norm_of(|t| f.eval_time(t), fl, fh, 1e-8, &[])?;
                    quad::l1_norm_of(
                        |t| f.eval_time(t) - gk.eval(t),
                        fl.min(gl),
                        fh.max(gh),
                        1e-10 * (1.0 + scale),
                        &[fl, fh, gl, gh],
                    )?
                }
            };
            (Some(l1), 1e-10 * (1.0 + l1))
        }
        TransferOperand::Lumped(_) => (None, 0.0),
    };

    // Error value at iω; also returns f̂(iω) so the phase defect can reuse it.
    let err_at = |w: f64| -> Result<(Complex64, Complex64)> {
        let s = Complex64::new(0.0, w);
        let fv = f.transfer_at(s)?;
        let e = match g {
            TransferOperand::Kernel(gk) => {
                let (fl, fh) = dec_support(f);
                let (gl, gh) = gk.support();
                quad::integrate_complex(
                    |t| (f.eval_time(t) - gk.eval(t)) * (-s * t).exp(),
                    fl.min(gl),
                    fh.max(gh),
                    tol,
                )?
            }
            TransferOperand::Lumped(lp) => fv - lp.transfer_at(s),
        };
        Ok((e, fv))
    };

    let omegas = grid.omegas();
    let mut hinf = 0.0f64;
    let mut argmax = 0usize;
    let mut phase_defect = 0.0f64;
    for (i, &w) in omegas.iter().enumerate() {
        let (e, fv) = err_at(w)?;
        let mag = e.norm();
        if mag > hinf {
            hinf = mag;
            argmax = i;
        }
        let gv = fv - e;
        let dphi = fv.arg() - gv.arg();
        let defect = fv.norm() * (Complex64::new(1.0, 0.0) - Complex64::new(0.0, dphi).exp()).norm();
        phase_defect = phase_defect.max(defect);
    }

    // Golden-section refinement of the H∞ maximum between the grid
    // neighbours of the argmax.
    let lo = omegas[argmax.saturating_sub(1)];
    let hi = omegas[(argmax + 1).min(omegas.len() - 1)];
    if hi > lo {
        let inv_phi = 0.5 * (5.0f64.sqrt() - 1.0);
        let mut a = lo;
        let mut b = hi;
        let mut x1 = b - inv_phi * (b - a);
        let mut x2 = a + inv_phi * (b - a);
        let mut f1 = err_at(x1)?.0.norm();
        let mut f2 = err_at(x2)?.0.norm();
        for _ in 0..40 {
            if (b - a).abs() <= 1e-10 * b.abs() {
                break;
            }
            if f1 < f2 {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + inv_phi * (b - a);
                f2 = err_at(x2)?.0.norm();
            } else {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - inv_phi * (b - a);
                f1 = err_at(x1)?.0.norm();
            }
            hinf = hinf.max(f1).max(f2);
        }
    }

    Ok(ErrorReport {
        l1_error,
        hinf_error: hinf,
        phase_defect,
        grid: GridSummary {
            min: grid.min(),
            max: grid.max(),
            pts: omegas.len(),
        },
        tol,
    })
}
