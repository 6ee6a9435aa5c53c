//! The low-pass lumped approximation: a first-order filter driven by a
//! train of weighted delayed impulses.
//!
//! Run with `cargo run --example lowpass_variant`.

use delaykit::{lowpass_lumped, Result};
use num_complex::Complex64;

fn main() -> Result<()> {
    let lambda = Complex64::new(0.0, 0.0);
    let theta = 1.0;

    // The surrogate is Σ γ_i e^{-a(t - t_i)} h(t - t_i): useful when the
    // tap spacing ϑ/n stays of the order of the filter time constant 1/a.
    println!("target theta_0 on [0, 1]:");
    println!(
        "{:>6} {:>6} {:>14} {:>18}",
        "a", "taps", "residual L1", "|L(0) - f(0)|"
    );
    for (a, n) in [(10.0, 10), (30.0, 30), (100.0, 100)] {
        let lp = lowpass_lumped(lambda, theta, a, n, 40 * n)?;
        let dc_err = (lp.transfer_at(Complex64::new(0.0, 0.0)) - Complex64::new(1.0, 0.0)).norm();
        println!(
            "{a:>6} {n:>6} {:>14.6e} {:>18.6e}",
            lp.residual_l1, dc_err
        );
    }

    // The tap weights themselves are a distribution in the algebra; their
    // weight sum controls the atomic part of the surrogate's A-norm.
    let lp = lowpass_lumped(lambda, theta, 30.0, 30, 1200)?;
    let weight_sum = lp.taps.weight_sum();
    println!(
        "\na = 30: {} taps, atomic weight sum {:.6}",
        lp.taps.impulses().len(),
        weight_sum
    );
    let first: Vec<(f64, f64)> = lp
        .taps
        .impulses()
        .iter()
        .take(4)
        .map(|(t, w)| (*t, w.re))
        .collect();
    println!("first taps (t, weight): {first:?}");

    // The surrogate is strictly proper: its gain dies off past the filter
    // corner, unlike the distributed-delay target whose transform only
    // oscillates.
    for w in [1.0, 10.0, 100.0, 1000.0] {
        let g = lp.transfer_at(Complex64::new(0.0, w)).norm();
        println!("|L(i{w:>6})| = {g:.6e}");
    }
    Ok(())
}
