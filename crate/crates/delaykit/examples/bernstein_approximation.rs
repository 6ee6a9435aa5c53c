//! Stable Bernstein approximants of the unstable elementary delay θ_1.
//!
//! Run with `cargo run --example bernstein_approximation`.

use delaykit::{approx_theta_lambda, order_bound, ApproxConfig, Result};
use num_complex::Complex64;

fn main() -> Result<()> {
    let lambda = Complex64::new(1.0, 0.0);
    let theta = 1.0;

    println!("L1 error of the order-n approximant of theta_1 (alpha = 1):");
    println!("{:>4}  {:>14}  {:>8}", "n", "measured eps", "terms");
    for n in [1, 2, 5, 10, 20, 40] {
        let cfg = ApproxConfig::new(1.0, n)?;
        let app = approx_theta_lambda(lambda, theta, &cfg)?;
        println!(
            "{n:>4}  {:>14.6e}  {:>8}",
            app.measured_eps,
            app.kernel.terms().len()
        );
        // Every exponent of the output is strictly stable.
        assert!(app
            .kernel
            .terms()
            .iter()
            .all(|t| t.lambda.re < 0.0));
    }

    // A slower basis (alpha = 1/5) changes the error curve.
    println!("\nsame target, alpha = 1/5:");
    for n in [5, 40] {
        let cfg = ApproxConfig::new(0.2, n)?;
        let app = approx_theta_lambda(lambda, theta, &cfg)?;
        println!("  n = {n:>2}: eps = {:.6e}", app.measured_eps);
    }

    // The a-priori order bound is extremely pessimistic next to the
    // measured error; it certifies convergence, not practical order.
    let eps = 0.05;
    let n_bound = order_bound(lambda, theta, 1.0, eps)?;
    let cfg = ApproxConfig::new(1.0, 8)?;
    let app = approx_theta_lambda(lambda, theta, &cfg)?;
    println!(
        "\na-priori order for eps = {eps}: n >= {n_bound}; measured eps at n = 8 is already {:.4e}",
        app.measured_eps
    );
    Ok(())
}
