//! Distances, graph-topology balls, the atomic lower bound, and the
//! frequency-domain error certificate.
//!
//! Run with `cargo run --example error_metrics`.

use delaykit::{
    a_norm_distance, approx_theta_lambda, atomic_distance, decompose, frequency_error, in_ball,
    ApproxConfig, AtomicDistribution, FiniteKernel, FrequencyGrid, GraphBall, Result,
    TransferOperand,
};
use num_complex::Complex64;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn main() -> Result<()> {
    let theta1 = FiniteKernel::elementary(c(1.0, 0.0), 1.0, 0)?;

    // A-norm distance between kernels is the L1 norm of the difference.
    let theta0 = FiniteKernel::elementary(c(0.0, 0.0), 1.0, 0)?;
    let d = a_norm_distance(&theta1, &theta0, 1e-10)?;
    println!("||theta_1 - theta_0||_A = {d:.9} (= e - 2)");

    // Ball membership in the graph topology.
    let ball = GraphBall::new(theta1.clone(), 0.75)?;
    println!(
        "theta_0 in B(theta_1, 0.75)? {}",
        in_ball(&theta0, &ball, 1e-10)?
    );

    // No purely atomic distribution comes close: the L1 mass of the kernel
    // is an exact lower bound on the distance.
    let atoms = AtomicDistribution::new(vec![
        (0.0, c(0.5, 0.0)),
        (0.5, c(-0.2, 0.0)),
        (1.0, c(0.8, 0.0)),
    ])?;
    let ad = atomic_distance(&theta1, &atoms, 1e-10)?;
    println!(
        "distance to an atomic distribution: {ad:.9} >= ||theta_1||_L1 = {:.9}",
        theta1.l1_norm(1e-10)?
    );

    // Frequency-domain certificate: H-infinity error and phase defect of an
    // approximant, both dominated by the L1 error (Theorem-level inequality).
    let cfg = ApproxConfig::new(1.0, 16)?;
    let app = approx_theta_lambda(c(1.0, 0.0), 1.0, &cfg)?;
    let f = decompose(&theta1)?;
    let grid = FrequencyGrid::log_spaced(1e-2, 1e3, 50)?;
    let report = frequency_error(&f, TransferOperand::Kernel(&app.kernel), &grid, None)?;
    println!("\norder-16 approximant of theta_1:");
    println!("  l1_error     = {:?}", report.l1_error);
    println!("  hinf_error   = {:.9e}", report.hinf_error);
    println!("  phase_defect = {:.9e}", report.phase_defect);
    let l1 = report.l1_error.unwrap();
    assert!(report.hinf_error <= l1 + 1e-8);
    assert!(report.phase_defect <= 2.0 * l1 + 1e-8);
    println!("  hinf <= l1 and phase <= 2*l1 hold");
    Ok(())
}
