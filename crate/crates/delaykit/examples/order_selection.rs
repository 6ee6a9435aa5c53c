//! Choosing the approximation order for an error target.
//!
//! Run with `cargo run --example order_selection`.

use delaykit::{order_bound, select_order, DelayError, Result};
use num_complex::Complex64;

fn main() -> Result<()> {
    let lambda = Complex64::new(1.0, 0.0);

    // select_order searches by doubling and then bisecting on the measured
    // error, so the returned order is the smallest that meets the target.
    for eps in [0.1, 0.02] {
        let app = select_order(lambda, 1.0, 1.0, eps, 64)?;
        println!(
            "eps = {eps}: order {} with measured eps {:.6e}",
            app.config.order, app.measured_eps
        );
    }

    // The a-priori bound for the same targets is far larger; it certifies
    // that a finite order exists but is useless for picking one.
    for eps in [0.1, 0.02] {
        match order_bound(lambda, 1.0, 1.0, eps) {
            Ok(n) => println!("a-priori bound for eps = {eps}: n >= {n}"),
            Err(e) => println!("a-priori bound for eps = {eps}: {e}"),
        }
    }

    // An unreachable target within the order cap reports the best attempt
    // instead of silently degrading.
    match select_order(lambda, 1.0, 1.0, 1e-4, 8) {
        Err(DelayError::NotAchieved { best }) => {
            println!(
                "eps = 1e-4 with cap 8: not achieved, best was order {} at {:.6e}",
                best.config.order, best.measured_eps
            );
        }
        other => println!("unexpected: {other:?}"),
    }
    Ok(())
}
