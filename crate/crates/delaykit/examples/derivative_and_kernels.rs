//! Lifting approximants to monomial-weighted kernels and assembling full
//! multi-term approximations with an a-priori bound.
//!
//! Run with `cargo run --example derivative_and_kernels`.

use delaykit::{
    approx_derivative, approx_kernel, approx_theta_lambda, decompose, ApproxConfig, ExpPolyTerm,
    FiniteKernel, Result,
};
use num_complex::Complex64;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn main() -> Result<()> {
    let cfg = ApproxConfig::new(1.0, 12)?;

    // The derivative lift transports an approximant of θ_λ to one of the
    // kernel (-t)^k e^{λt}; the L1 error scales by at most ϑ^k.
    let base = approx_theta_lambda(c(1.0, 0.0), 1.0, &cfg)?;
    println!("base eps = {:.6e}", base.measured_eps);
    for k in 1..=3 {
        let lifted = approx_derivative(&base, k)?;
        println!(
            "  k = {k}: lifted eps = {:.6e}  (transport bound {:.6e})",
            lifted.measured_eps,
            base.measured_eps // ϑ = 1, so ϑ^k = 1
        );
    }

    // approx_kernel handles a whole kernel: unstable components are
    // replaced by approximants, stable ones are kept exactly, and the
    // returned bound sums the per-component errors with their weights.
    let kernel = FiniteKernel::new(
        vec![
            ExpPolyTerm::new(c(0.6, 0.0), c(1.0, 0.0), 1)?,
            ExpPolyTerm::new(c(1.0, 0.0), c(-2.0, 0.0), 0)?,
        ],
        (0.0, 1.0),
        true,
    )?;
    let dec = decompose(&kernel)?;
    let (assembled, bound) = approx_kernel(&dec, &cfg)?;
    println!(
        "\nassembled approximant: {} piece(s), measured eps = {:.6e}, bound = {:.6e}",
        assembled.pieces.len(),
        assembled.measured_eps,
        bound
    );
    assert!(assembled.measured_eps <= bound + 1e-12);

    // A delayed kernel produces a shifted piece.
    let delayed = FiniteKernel::new(
        vec![ExpPolyTerm::new(c(1.0, 0.0), c(1.0, 0.0), 0)?],
        (1.0, 2.0),
        true,
    )?;
    let (assembled, bound) = approx_kernel(&decompose(&delayed)?, &cfg)?;
    let piece = &assembled.pieces[0];
    println!(
        "delayed kernel: piece support {:?}, bound = {:.6e}",
        piece.support(),
        bound
    );
    Ok(())
}
