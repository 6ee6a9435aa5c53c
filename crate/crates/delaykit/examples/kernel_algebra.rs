//! Exponential-polynomial kernels: construction, algebra, norms.
//!
//! Run with `cargo run --example kernel_algebra`.

use delaykit::{ExpPolyTerm, FiniteKernel, Result};
use num_complex::Complex64;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn main() -> Result<()> {
    // The elementary distributed delay θ_1: kernel e^t on [0, 1].
    let theta1 = FiniteKernel::elementary(c(1.0, 0.0), 1.0, 0)?;
    println!("theta_1 support {:?}", theta1.support());
    println!("theta_1 stability {:?}", theta1.stability());
    println!("theta_1 L1 norm  {:.12} (= e - 1)", theta1.l1_norm(1e-12)?);

    // A two-term kernel t·e^{-t} - 0.5·e^{-3t} on [0, 2].
    let mixed = FiniteKernel::new(
        vec![
            ExpPolyTerm::new(c(1.0, 0.0), c(-1.0, 0.0), 1)?,
            ExpPolyTerm::new(c(-0.5, 0.0), c(-3.0, 0.0), 0)?,
        ],
        (0.0, 2.0),
        true,
    )?;
    println!("mixed stability {:?}", mixed.stability());
    println!("mixed L1 norm   {:.12}", mixed.l1_norm(1e-10)?);
    println!("mixed at t=0.7  {:.12}", mixed.eval(0.7).re);

    // Linear combinations stay in the class (same support required; equal
    // (λ, power) terms merge).
    let theta_m2 = FiniteKernel::elementary(c(-2.0, 0.0), 1.0, 0)?;
    let combo = FiniteKernel::scale_add(c(2.0, 0.0), &theta1, c(-1.0, 0.0), &theta_m2)?;
    println!("combo terms {}", combo.terms().len());
    let triangle = 2.0 * theta1.l1_norm(1e-10)? + theta_m2.l1_norm(1e-10)?;
    println!(
        "combo L1 norm {:.9} <= triangle bound {:.9}",
        combo.l1_norm(1e-10)?,
        triangle
    );

    // Shifting the support translates the operator in time: the kernel of
    // the composition with a pure delay d.
    let shifted = theta1.shift_support(0.5)?;
    println!("shifted support {:?}", shifted.support());
    println!(
        "shift preserves the norm: {:.12}",
        shifted.l1_norm(1e-12)?
    );

    // Kernels serialize losslessly to JSON.
    let json = serde_json::to_string_pretty(&mixed).expect("serializable");
    let back: FiniteKernel = serde_json::from_str(&json).expect("round trip");
    assert_eq!(back, mixed);
    println!("JSON round trip ok ({} bytes)", json.len());
    Ok(())
}
