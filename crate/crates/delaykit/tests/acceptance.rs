//! Acceptance gate: one test per shipping criterion, each printing a single
//! pass/fail line. Run with `--nocapture` to see the lines on success.

use std::f64::consts::E;
use std::time::Instant;

use delaykit::{
    approx_derivative, approx_theta_lambda, atomic_distance, closed_loop_demo,
    closed_loop_unstable_surrogate, convolve_direct, decompose, frequency_error, numeric_laplace,
    realize, select_order, simulate_block, small_gain_margin, theta_hat, ApproxConfig,
    AtomicDistribution, DelayError, ExpPolyTerm, FiniteKernel, FrequencyGrid, SimConfig, Signal,
    TransferOperand,
};
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn verdict(n: u32, slug: &str, ok: bool, t0: Instant, detail: &str) {
    let elapsed = t0.elapsed().as_secs_f64();
    let word = if ok { "PASS" } else { "FAIL" };
    println!("criterion {n} ({slug}): {word} [{elapsed:.2} s] {detail}");
    assert!(ok, "criterion {n} ({slug}) failed: {detail}");
}

fn theta_one() -> FiniteKernel {
    FiniteKernel::new(
        vec![ExpPolyTerm::new(c64(1.0, 0.0), c64(1.0, 0.0), 0).unwrap()],
        (0.0, 1.0),
        true,
    )
    .unwrap()
}

fn random_kernel(rng: &mut ChaCha8Rng) -> FiniteKernel {
    let n_terms = rng.gen_range(1..=3);
    let terms = (0..n_terms)
        .map(|_| {
            ExpPolyTerm::new(
                c64(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)),
                c64(rng.gen_range(-3.0..1.5), rng.gen_range(-3.0..3.0)),
                rng.gen_range(0..3),
            )
            .unwrap()
        })
        .collect();
    let lo = rng.gen_range(0.0..0.5);
    let width = rng.gen_range(0.3..1.5);
    FiniteKernel::new(terms, (lo, lo + width), false).unwrap()
}

fn random_stable_kernel(rng: &mut ChaCha8Rng) -> FiniteKernel {
    let n_terms = rng.gen_range(1..=3);
    let terms = (0..n_terms)
        .map(|_| {
            ExpPolyTerm::new(
                c64(rng.gen_range(-1.5..1.5), 0.0),
                c64(rng.gen_range(-3.0..-0.3), 0.0),
                rng.gen_range(0..3),
            )
            .unwrap()
        })
        .collect();
    let theta = rng.gen_range(0.5..1.2);
    FiniteKernel::new(terms, (0.0, theta), true).unwrap()
}

#[test]
fn criterion_1_removable_singularity() {
    let t0 = Instant::now();
    let lambdas = [c64(0.0, 0.0), c64(1.0, 0.0), c64(2.0, 3.0)];
    let thetas = [0.5f64, 1.0];
    let mut worst = 0.0f64;
    for &lambda in &lambdas {
        for &theta in &thetas {
            for k in 0u32..=4 {
                // [DERIVED] ∫₀^ϑ (−t)^k dt = (−1)^k ϑ^{k+1}/(k+1), independent
                // of λ; checked by symbolic integration.
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                let want = sign * theta.powi(k as i32 + 1) / (k as f64 + 1.0);
                let got = theta_hat(lambda, theta, k, lambda).unwrap();
                let rel = (got - want).norm() / want.abs();
                worst = worst.max(rel);
            }
        }
    }
    let ok = worst <= 1e-12 && t0.elapsed().as_secs_f64() < 1.0;
    verdict(
        1,
        "removable-singularity exactness",
        ok,
        t0,
        &format!("worst relative error {worst:.3e} (tolerance 1e-12)"),
    );
}

#[test]
fn criterion_2_transform_oracle_equivalence() {
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x0002);
    let mut worst = 0.0f64;
    for _ in 0..10 {
        let kernel = random_kernel(&mut rng);
        let dec = decompose(&kernel).unwrap();
        for _ in 0..20 {
            let s = c64(rng.gen_range(0.0..4.0), rng.gen_range(-40.0..40.0));
            let fast = dec.transfer_at(s).unwrap();
            let slow = numeric_laplace(&kernel, s, 1e-11).unwrap();
            worst = worst.max((fast - slow).norm());
        }
    }
    let ok = worst < 1e-8 && t0.elapsed().as_secs_f64() < 10.0;
    verdict(
        2,
        "transform oracle equivalence",
        ok,
        t0,
        &format!("worst |Δ| {worst:.3e} over 10 kernels x 20 RHP points (tolerance 1e-8)"),
    );
}

#[test]
fn criterion_3_bernstein_convergence() {
    let t0 = Instant::now();
    let lambda = c64(1.0, 0.0);
    let mut ok = true;
    let mut detail = String::new();
    for &alpha in &[1.0, 0.2] {
        let e5 = approx_theta_lambda(lambda, 1.0, &ApproxConfig::new(alpha, 5).unwrap())
            .unwrap()
            .measured_eps;
        let e40 = approx_theta_lambda(lambda, 1.0, &ApproxConfig::new(alpha, 40).unwrap())
            .unwrap()
            .measured_eps;
        ok &= e40 < e5 / 2.0 && e40 < 0.2;
        detail.push_str(&format!("alpha={alpha}: eps(5)={e5:.4e} eps(40)={e40:.4e}; "));
    }
    ok &= t0.elapsed().as_secs_f64() < 30.0;
    verdict(3, "Bernstein convergence", ok, t0, detail.trim_end());
}

#[test]
fn criterion_4_l1_dominates_hinf() {
    let t0 = Instant::now();
    let target = decompose(&theta_one()).unwrap();
    let grid = FrequencyGrid::log_spaced(1e-2, 1e3, 50).unwrap();
    let mut ok = true;
    let mut detail = String::new();
    for &alpha in &[1.0, 0.2] {
        for &n in &[5usize, 40] {
            let app = approx_theta_lambda(c64(1.0, 0.0), 1.0, &ApproxConfig::new(alpha, n).unwrap())
                .unwrap();
            let rep =
                frequency_error(&target, TransferOperand::Kernel(&app.kernel), &grid, None)
                    .unwrap();
            let l1 = rep.l1_error.unwrap();
            ok &= rep.hinf_error <= l1 + 1e-8 && rep.phase_defect <= 2.0 * l1 + 1e-8;
            detail.push_str(&format!(
                "(a={alpha},n={n}): hinf={:.3e} <= l1={:.3e}, phase={:.3e} <= 2*l1; ",
                rep.hinf_error, l1, rep.phase_defect
            ));
        }
    }
    ok &= t0.elapsed().as_secs_f64() < 30.0;
    verdict(4, "L1 dominates Hinf", ok, t0, detail.trim_end());
}

#[test]
fn criterion_5_atomic_impossibility() {
    let t0 = Instant::now();
    let g = theta_one();
    let floor = E - 1.0;
    let mut rng = ChaCha8Rng::seed_from_u64(0x0005);
    let mut worst = f64::INFINITY;
    for _ in 0..50 {
        let n = rng.gen_range(1..=6);
        let mut atoms: Vec<(f64, Complex64)> = (0..n)
            .map(|_| {
                (
                    rng.gen_range(0.0..2.0),
                    c64(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)),
                )
            })
            .collect();
        atoms.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        atoms.dedup_by(|a, b| a.0 == b.0);
        let p = AtomicDistribution::new(atoms).unwrap();
        let d = atomic_distance(&g, &p, 1e-9).unwrap();
        worst = worst.min(d);
    }
    // The quadrature tolerance is the only slack against the exact e−1 floor.
    let ok = worst >= floor - 1e-9 && t0.elapsed().as_secs_f64() < 5.0;
    verdict(
        5,
        "atomic impossibility",
        ok,
        t0,
        &format!("min distance {worst:.12} vs floor e-1 = {floor:.12}"),
    );
}

#[test]
fn criterion_6_derivative_lift_transport() {
    let t0 = Instant::now();
    let mut ok = true;
    let mut detail = String::new();
    for &theta in &[0.5f64, 1.0] {
        let base =
            approx_theta_lambda(c64(1.0, 0.0), theta, &ApproxConfig::new(1.0, 12).unwrap())
                .unwrap();
        for k in 1u32..=3 {
            let lifted = approx_derivative(&base, k).unwrap();
            let cap = theta.powi(k as i32) * base.measured_eps + 1e-9;
            ok &= lifted.measured_eps <= cap;
            detail.push_str(&format!(
                "(theta={theta},k={k}): {:.3e} <= {:.3e}; ",
                lifted.measured_eps, cap
            ));
        }
    }
    ok &= t0.elapsed().as_secs_f64() < 20.0;
    verdict(6, "derivative-lift transport", ok, t0, detail.trim_end());
}

#[test]
fn criterion_7_realization_fidelity() {
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x0007);
    let cfg = SimConfig::new(1e-3, 4.0).unwrap();
    let freq = FrequencyGrid::log_spaced(1e-2, 1e3, 10).unwrap();
    let mut worst_time = 0.0f64;
    let mut worst_freq = 0.0f64;
    for _ in 0..5 {
        let kernel = random_stable_kernel(&mut rng);
        let sys = realize(&kernel).unwrap();
        let input = Signal::Sine {
            amplitude: 1.0,
            omega: rng.gen_range(0.8..3.0),
        };
        let sim = simulate_block(&sys, &input, &cfg).unwrap();
        let conv = convolve_direct(&kernel, &input, &cfg).unwrap();
        let ys = sim.signal("y").unwrap();
        let yc = conv.signal("y").unwrap();
        for (a, b) in ys.iter().zip(yc) {
            worst_time = worst_time.max((a - b).abs());
        }
        let dec = decompose(&kernel).unwrap();
        for &w in freq.omegas() {
            let s = c64(0.0, w);
            let d = (sys.transfer_at(s).unwrap() - dec.transfer_at(s).unwrap()).norm();
            worst_freq = worst_freq.max(d);
        }
    }
    let ok = worst_time <= 1e-4 && worst_freq <= 1e-8 && t0.elapsed().as_secs_f64() < 60.0;
    verdict(
        7,
        "realization fidelity",
        ok,
        t0,
        &format!("sup time diff {worst_time:.3e} (<= 1e-4), sup freq diff {worst_freq:.3e} (<= 1e-8)"),
    );
}

#[test]
fn criterion_8_stabilization_demo() {
    let t0 = Instant::now();
    // [DERIVED] closed-loop DC gain of the demo plant is 2e−1.
    let dc = 2.0 * E - 1.0;
    let cfg = SimConfig::new(0.005, 20.0).unwrap();

    let selected = select_order(c64(1.0, 0.0), 1.0, 1.0, 0.02, 64).unwrap();
    let order = selected.config.order;
    let out = closed_loop_demo(order, &cfg).unwrap();
    let bounded = out
        .trace_app
        .signal("y2")
        .unwrap()
        .iter()
        .all(|v| v.is_finite() && v.abs() < 1e6);
    let terminal_ok = (out.summary.dc_app - dc).abs() <= 0.05 * dc;
    let sup_ok = out.summary.sup_diff <= 0.25;

    let aborts = matches!(
        closed_loop_unstable_surrogate(&cfg),
        Err(DelayError::Instability { .. })
    );

    // Order-5 observation: report boundedness; the small-gain verdict at
    // n=5 is logged, not asserted.
    let out5 = closed_loop_demo(5, &cfg).unwrap();
    let bounded5 = out5
        .trace_app
        .signal("y2")
        .unwrap()
        .iter()
        .all(|v| v.is_finite() && v.abs() < 1e6);

    let ok = bounded && terminal_ok && sup_ok && aborts && bounded5
        && t0.elapsed().as_secs_f64() < 120.0;
    verdict(
        8,
        "stabilization demo",
        ok,
        t0,
        &format!(
            "order={order} terminal {:.6} vs {dc:.6} (5% band), sup diff {:.4} (<= 0.25), \
             surrogate aborts: {aborts}; order=5 observation: bounded={bounded5} \
             eps={:.4e} margin={:.4}",
            out.summary.dc_app, out.summary.sup_diff,
            out5.summary.eps_measured, out5.summary.margin
        ),
    );
}

#[test]
fn criterion_9_small_gain_arithmetic() {
    let t0 = Instant::now();
    let below = small_gain_margin(1.0, 3.0, 0.2499, 0.2499).unwrap();
    let above = small_gain_margin(1.0, 3.0, 0.2501, 0.2501).unwrap();
    let ok = below.1 && below.0 > 0.0 && !above.1 && above.0 <= 0.0;
    // e/(3+e) ≈ 0.4754 is the competing threshold in the source analysis;
    // logged for the discrepancy record, not asserted.
    let competing = E / (3.0 + E);
    verdict(
        9,
        "small-gain arithmetic",
        ok && t0.elapsed().as_secs_f64() < 1.0,
        t0,
        &format!(
            "threshold max eps < 1/4 confirmed (margins {:.4e} / {:.4e}); \
             competing stated threshold e/(3+e) = {competing:.4}",
            below.0, above.0
        ),
    );
}
