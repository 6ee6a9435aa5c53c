//! Transforms of elementary delays and the two-route transform oracle.
//!
//! Run with `cargo run --example laplace_transforms`.

use delaykit::{
    decompose, frequency_response, numeric_laplace, theta_hat, ExpPolyTerm, FiniteKernel,
    FrequencyGrid, Result,
};
use num_complex::Complex64;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn main() -> Result<()> {
    // θ̂_λ(s) = (1 - e^{-(s-λ)ϑ})/(s - λ) has a removable singularity at
    // s = λ; the series branch makes the evaluation exact there.
    let lambda = c(2.0, 3.0);
    for k in 0..4 {
        let at_pole = theta_hat(lambda, 1.0, k, lambda)?;
        let exact = 1.0 / (k as f64 + 1.0);
        println!(
            "theta_hat^({k}) at s = lambda: {:+.15e}  (exact magnitude 1/{}: {:+.15e})",
            at_pole.re,
            k + 1,
            exact
        );
    }
    // Near the pole the closed form and the series agree through the switch.
    for ds in [1e-1, 1e-2, 1e-3] {
        let v = theta_hat(lambda, 1.0, 0, lambda + c(ds, 0.0))?;
        println!("  s = lambda + {ds:>5}: {:+.15}", v.re);
    }

    // Any kernel decomposes into elementary delays with quasipolynomial
    // weights; the decomposition's transfer must match direct numerical
    // integration of f(t)e^{-st}.
    let kernel = FiniteKernel::new(
        vec![
            ExpPolyTerm::new(c(1.0, 0.0), c(0.5, 0.0), 1)?,
            ExpPolyTerm::new(c(0.3, 0.0), c(-2.0, 0.0), 0)?,
        ],
        (0.5, 1.5),
        true,
    )?;
    let dec = decompose(&kernel)?;
    println!(
        "decomposition: theta = {}, {} elementary components",
        dec.theta,
        dec.components.len()
    );
    for s in [c(0.0, 0.0), c(1.0, 1.0), c(0.0, 10.0)] {
        let fast = dec.transfer_at(s)?;
        let slow = numeric_laplace(&kernel, s, 1e-12)?;
        println!(
            "s = {s}: transfer {:+.12e}{:+.12e}i   |routes differ| = {:.2e}",
            fast.re,
            fast.im,
            (fast - slow).norm()
        );
    }

    // Plot-ready frequency response on a log grid.
    let grid = FrequencyGrid::log_spaced(1e-1, 1e2, 10)?;
    let pts = frequency_response(&dec, &grid)?;
    println!("\nomega, |F|, phase for the first points:");
    for p in pts.iter().take(4) {
        println!(
            "  {:>8.4} rad/s  {:>8.4} dB  {:>8.4} rad",
            p.omega, p.mag_db, p.phase_rad
        );
    }
    Ok(())
}
