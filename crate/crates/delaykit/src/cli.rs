//! Command-line front end.
//!
//! Exit codes are part of the contract: 0 success, 2 validation, 3 accuracy
//! target not achieved, 4 instability abort, 5 internal numeric failure.
//! All file outputs are byte-deterministic for identical inputs: CSV floats
//! use fixed-width scientific notation and JSON key order follows the struct
//! declarations.

use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::approx::{approx_kernel, select_order, ApproxConfig, AssembledApprox};
use crate::error::{DelayError, Result};
use crate::kernel::{AtomicDistribution, ExpPolyTerm, FiniteKernel};
use crate::laplace::{decompose, frequency_response_sum, Decomposition, FreqPoint, FrequencyGrid};
use crate::metrics::{a_norm_distance, atomic_distance, frequency_error, TransferOperand};
use crate::sim::{
    closed_loop_demo, closed_loop_unstable_surrogate, convolve_direct, fmt_e, realize,
    simulate_block, SimConfig, SimTrace, Signal,
};

#[derive(Parser)]
#[command(
    name = "delaykit",
    about = "Distributed-delay kernels: approximation, frequency response, simulation",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Construct a stable approximant; optionally sweep orders into a CSV
    Approx(ApproxArgs),
    /// Frequency response CSV, plus an error report when comparing two inputs
    Bode(BodeArgs),
    /// Time-domain response of a kernel to a test signal
    Simulate(SimulateArgs),
    /// Closed-loop stabilization demo of the unstable delayed plant
    DemoStabilize(DemoArgs),
    /// A-norm utilities: kernel norm, kernel distance, atomic lower bound
    Norms(NormsArgs),
}

/// Kernel source shared by subcommands: either a JSON file or the inline
/// single-term form `t^power · e^{lambda t}` on `[0, theta]`.
#[derive(Args)]
struct KernelInput {
    /// Kernel or approximant JSON file
    #[arg(long, value_name = "FILE", conflicts_with_all = ["lambda", "theta", "power"])]
    kernel: Option<PathBuf>,

    /// Exponent `re` or `re,im` of the inline kernel
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true,
          required_unless_present = "kernel")]
    lambda: Option<Complex64>,

    /// Support end of the inline kernel
    #[arg(long, required_unless_present = "kernel")]
    theta: Option<f64>,

    /// Monomial power of the inline kernel
    #[arg(long, default_value_t = 0)]
    power: u32,
}

impl KernelInput {
    /// Loads the input as kernel pieces (one piece unless the file is a
    /// multi-piece approximant).
    fn load(&self) -> Result<Vec<FiniteKernel>> {
        if let Some(path) = &self.kernel {
            return load_pieces(path);
        }
        let lambda = self.lambda.unwrap();
        let theta = self.theta.unwrap();
        let term = ExpPolyTerm::new(Complex64::new(1.0, 0.0), lambda, self.power)?;
        Ok(vec![FiniteKernel::new(
            vec![term],
            (0.0, theta),
            lambda.im == 0.0,
        )?])
    }

    fn load_single(&self, what: &str) -> Result<FiniteKernel> {
        let mut pieces = self.load()?;
        if pieces.len() != 1 {
            return Err(DelayError::domain(format!(
                "{what} needs a single-kernel input, got {} pieces",
                pieces.len()
            )));
        }
        Ok(pieces.pop().unwrap())
    }
}

fn parse_complex(s: &str) -> std::result::Result<Complex64, String> {
    let (re, im) = match s.split_once(',') {
        Some((a, b)) => (a, Some(b)),
        None => (s, None),
    };
    let re: f64 = re.trim().parse().map_err(|e| format!("bad real part: {e}"))?;
    let im: f64 = match im {
        Some(b) => b.trim().parse().map_err(|e| format!("bad imaginary part: {e}"))?,
        None => 0.0,
    };
    Ok(Complex64::new(re, im))
}

/// On-disk approximant: the assembled pieces plus the construction record.
#[derive(Serialize, Deserialize)]
struct ApproxJson {
    alpha: f64,
    order: usize,
    theta0_order: usize,
    measured_eps: f64,
    bound: f64,
    pieces: Vec<FiniteKernel>,
}

fn load_pieces(path: &Path) -> Result<Vec<FiniteKernel>> {
    let mut text = String::new();
    File::open(path)
        .and_then(|mut f| f.read_to_string(&mut text))
        .map_err(|e| DelayError::domain(format!("cannot read {}: {e}", path.display())))?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| DelayError::domain(format!("{} is not JSON: {e}", path.display())))?;
    if value.get("pieces").is_some() {
        let a: ApproxJson = serde_json::from_value(value)
            .map_err(|e| DelayError::domain(format!("bad approximant file: {e}")))?;
        if a.pieces.is_empty() {
            return Err(DelayError::domain("approximant file has no pieces"));
        }
        Ok(a.pieces)
    } else {
        let k: FiniteKernel = serde_json::from_value(value)
            .map_err(|e| DelayError::domain(format!("bad kernel file: {e}")))?;
        Ok(vec![k])
    }
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| DelayError::domain(format!("cannot write {}: {e}", path.display())))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut w = create(path)?;
    serde_json::to_writer_pretty(&mut w, value)
        .map_err(|e| DelayError::numeric(format!("serialization failed: {e}")))?;
    writeln!(w).map_err(|e| DelayError::numeric(format!("write failed: {e}")))?;
    Ok(())
}

#[derive(Args)]
struct ApproxArgs {
    #[command(flatten)]
    input: KernelInput,

    /// Decay rate of the stable basis e^{-alpha j t}
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,

    /// Approximation order n
    #[arg(long, conflicts_with = "eps")]
    order: Option<usize>,

    /// L1 error target; the order is then auto-selected (inline power-0 form only)
    #[arg(long)]
    eps: Option<f64>,

    /// Order cap for the theta_0 residual re-approximation
    #[arg(long)]
    theta0_order: Option<usize>,

    /// Largest order tried by --eps selection
    #[arg(long, default_value_t = 64)]
    max_order: usize,

    /// Approximant JSON output
    #[arg(long, default_value = "approximant.json")]
    out: PathBuf,

    /// Order sweep `lo:hi` writing an `n,l1_error` CSV
    #[arg(long, value_name = "LO:HI")]
    sweep: Option<String>,

    /// Sweep CSV output
    #[arg(long, default_value = "sweep.csv")]
    sweep_out: PathBuf,
}

fn cmd_approx(args: &ApproxArgs) -> Result<()> {
    let pieces = args.input.load()?;
    if pieces.len() != 1 {
        return Err(DelayError::domain(
            "approx expects a single kernel, not an already-assembled approximant",
        ));
    }
    let kernel = &pieces[0];
    let dec = decompose(kernel)?;

    if args.order.is_none() && args.eps.is_none() && args.sweep.is_none() {
        return Err(DelayError::domain(
            "nothing to do: give --order, --eps, or --sweep",
        ));
    }

    let build = |order: usize| -> Result<(AssembledApprox, f64)> {
        let mut cfg = ApproxConfig::new(args.alpha, order)?;
        if let Some(t0) = args.theta0_order {
            cfg = cfg.with_theta0_order(t0)?;
        }
        approx_kernel(&dec, &cfg)
    };

    let order = match (args.order, args.eps) {
        (Some(n), _) => Some(n),
        (None, Some(eps)) => {
            if args.input.kernel.is_some() || args.input.power != 0 {
                return Err(DelayError::domain(
                    "--eps order selection works on the inline elementary form \
                     (--lambda/--theta with power 0)",
                ));
            }
            let picked = select_order(
                args.input.lambda.unwrap(),
                args.input.theta.unwrap(),
                args.alpha,
                eps,
                args.max_order,
            )?;
            Some(picked.config.order)
        }
        (None, None) => None,
    };

    if let Some(order) = order {
        let (assembled, bound) = build(order)?;
        write_json(
            &args.out,
            &ApproxJson {
                alpha: assembled.config.alpha,
                order: assembled.config.order,
                theta0_order: assembled.config.theta0_order,
                measured_eps: assembled.measured_eps,
                bound,
                pieces: assembled.pieces,
            },
        )?;
        println!(
            "order={} measured_eps={} bound={} -> {}",
            order,
            fmt_e(assembled.measured_eps, 9),
            fmt_e(bound, 9),
            args.out.display()
        );
    }

    if let Some(spec) = &args.sweep {
        let (lo, hi) = parse_sweep(spec)?;
        let rows: Vec<(usize, f64)> = {
            use rayon::prelude::*;
            (lo..=hi)
                .into_par_iter()
                .map(|n| build(n).map(|(a, _)| (n, a.measured_eps)))
                .collect::<Result<_>>()?
        };
        let mut w = create(&args.sweep_out)?;
        writeln!(w, "n,l1_error").map_err(io_write)?;
        for (n, eps) in &rows {
            writeln!(w, "{n},{}", fmt_e(*eps, 9)).map_err(io_write)?;
        }
        println!("sweep {lo}:{hi} -> {}", args.sweep_out.display());
    }
    Ok(())
}

fn io_write(e: std::io::Error) -> DelayError {
    DelayError::numeric(format!("write failed: {e}"))
}

fn parse_sweep(spec: &str) -> Result<(usize, usize)> {
    let parse = || -> Option<(usize, usize)> {
        let (a, b) = spec.split_once(':')?;
        Some((a.trim().parse().ok()?, b.trim().parse().ok()?))
    };
    let (lo, hi) = parse()
        .ok_or_else(|| DelayError::domain(format!("sweep must be lo:hi, got {spec:?}")))?;
    if lo < 1 || hi < lo {
        return Err(DelayError::domain(format!(
            "sweep needs 1 <= lo <= hi, got {lo}:{hi}"
        )));
    }
    if hi > 512 {
        return Err(DelayError::capacity(format!("sweep cap is 512, got {hi}")));
    }
    Ok((lo, hi))
}

#[derive(Args)]
struct BodeArgs {
    #[command(flatten)]
    input: KernelInput,

    /// Second input for an error report (kernel or approximant JSON)
    #[arg(long, value_name = "FILE")]
    compare: Option<PathBuf>,

    /// Grid minimum [rad/s]
    #[arg(long, default_value_t = 1e-2)]
    wmin: f64,

    /// Grid maximum [rad/s]
    #[arg(long, default_value_t = 1e3)]
    wmax: f64,

    /// Grid points per decade
    #[arg(long, default_value_t = 50)]
    ppd: usize,

    /// Response CSV for the first input
    #[arg(long, default_value = "bode.csv")]
    out: PathBuf,

    /// Response CSV for the second input
    #[arg(long, default_value = "bode2.csv")]
    out2: PathBuf,

    /// Error report JSON (written when --compare is given)
    #[arg(long, default_value = "report.json")]
    report: PathBuf,
}

fn write_bode_csv(path: &Path, points: &[FreqPoint]) -> Result<()> {
    let mut w = create(path)?;
    writeln!(w, "omega,re,im,mag_db,phase_rad").map_err(io_write)?;
    for p in points {
        writeln!(
            w,
            "{},{},{},{},{}",
            fmt_e(p.omega, 12),
            fmt_e(p.value.re, 12),
            fmt_e(p.value.im, 12),
            fmt_e(p.mag_db, 12),
            fmt_e(p.phase_rad, 12)
        )
        .map_err(io_write)?;
    }
    Ok(())
}

fn decompose_all(pieces: &[FiniteKernel]) -> Result<Vec<Decomposition>> {
    pieces.iter().map(decompose).collect()
}

fn cmd_bode(args: &BodeArgs) -> Result<()> {
    let grid = FrequencyGrid::log_spaced(args.wmin, args.wmax, args.ppd)?;
    let pieces = args.input.load()?;
    let decs = decompose_all(&pieces)?;
    write_bode_csv(&args.out, &frequency_response_sum(&decs, &grid)?)?;
    println!("response -> {}", args.out.display());

    if let Some(cmp) = &args.compare {
        let pieces2 = load_pieces(cmp)?;
        let decs2 = decompose_all(&pieces2)?;
        write_bode_csv(&args.out2, &frequency_response_sum(&decs2, &grid)?)?;
        if decs.len() != 1 || decs2.len() != 1 {
            return Err(DelayError::domain(
                "the error report compares single-kernel operators; \
                 multi-piece approximants are not supported here",
            ));
        }
        let report = frequency_error(&decs[0], TransferOperand::Kernel(&pieces2[0]), &grid, None)?;
        write_json(&args.report, &report)?;
        println!(
            "report: hinf_error={} -> {}",
            fmt_e(report.hinf_error, 9),
            args.report.display()
        );
    }
    Ok(())
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    input: KernelInput,

    /// Integrate the state-space realization instead of direct convolution
    #[arg(long)]
    realize: bool,

    /// Add a direct-convolution oracle column (requires --realize)
    #[arg(long, requires = "realize")]
    oracle: bool,

    /// Test signal: `step[:amp]`, `sine:amp:omega`, or `csv:file`
    #[arg(long, default_value = "step")]
    signal: String,

    /// Time step
    #[arg(long, default_value_t = 1e-3)]
    dt: f64,

    /// Horizon
    #[arg(long, default_value_t = 10.0)]
    horizon: f64,

    /// Trace CSV output
    #[arg(long, default_value = "trace.csv")]
    out: PathBuf,
}

fn parse_signal(spec: &str) -> Result<Signal> {
    let bad = |msg: &str| DelayError::domain(format!("bad signal {spec:?}: {msg}"));
    let mut parts = spec.split(':');
    match parts.next().unwrap() {
        "step" => {
            let amp = match parts.next() {
                Some(a) => a.parse().map_err(|_| bad("amplitude must be a number"))?,
                None => 1.0,
            };
            Ok(Signal::Step(amp))
        }
        "sine" => {
            let amp: f64 = parts
                .next()
                .ok_or_else(|| bad("sine needs amp:omega"))?
                .parse()
                .map_err(|_| bad("amplitude must be a number"))?;
            let omega: f64 = parts
                .next()
                .ok_or_else(|| bad("sine needs amp:omega"))?
                .parse()
                .map_err(|_| bad("omega must be a number"))?;
            Ok(Signal::Sine {
                amplitude: amp,
                omega,
            })
        }
        "csv" => {
            let path = parts.next().ok_or_else(|| bad("csv needs a file path"))?;
            load_signal_csv(Path::new(path))
        }
        _ => Err(bad("expected step, sine, or csv")),
    }
}

/// Reads a `t,u` CSV (header optional) into a sampled signal; the grid step
/// is taken from the first two rows.
fn load_signal_csv(path: &Path) -> Result<Signal> {
    let mut text = String::new();
    File::open(path)
        .and_then(|mut f| f.read_to_string(&mut text))
        .map_err(|e| DelayError::domain(format!("cannot read {}: {e}", path.display())))?;
    let mut times = Vec::new();
    let mut values = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let mut cols = line.split(',');
        let (t, u) = (cols.next().unwrap_or(""), cols.next().unwrap_or(""));
        match (t.trim().parse::<f64>(), u.trim().parse::<f64>()) {
            (Ok(t), Ok(u)) => {
                times.push(t);
                values.push(u);
            }
            // A non-numeric first row is the header.
            _ if times.is_empty() => continue,
            _ => {
                return Err(DelayError::domain(format!(
                    "bad row in {}: {line:?}",
                    path.display()
                )))
            }
        }
    }
    if times.len() < 2 {
        return Err(DelayError::domain("signal CSV needs at least two rows"));
    }
    let dt = times[1] - times[0];
    if !(dt > 0.0) {
        return Err(DelayError::domain("signal CSV times must increase"));
    }
    Ok(Signal::Samples { dt, values })
}

fn cmd_simulate(args: &SimulateArgs) -> Result<()> {
    let kernel = args.input.load_single("simulate")?;
    let signal = parse_signal(&args.signal)?;
    let cfg = SimConfig::new(args.dt, args.horizon)?;

    let mut trace: SimTrace;
    if args.realize {
        let sys = realize(&kernel)?;
        trace = simulate_block(&sys, &signal, &cfg)?;
        if args.oracle {
            let oracle = convolve_direct(&kernel, &signal, &cfg)?;
            let sup = trace
                .signal("y")
                .unwrap()
                .iter()
                .zip(oracle.signal("y").unwrap())
                .map(|(a, b)| (a - b).abs())
                .fold(0.0f64, f64::max);
            let y_oracle = oracle.signal("y").unwrap().to_vec();
            trace.signals.push(("y_oracle".into(), y_oracle));
            println!("oracle sup-difference = {}", fmt_e(sup, 6));
        }
    } else {
        trace = convolve_direct(&kernel, &signal, &cfg)?;
    }

    // Open-loop runs do not abort mid-flight; runaway outputs are flagged
    // after the fact.
    for (&t, &y) in trace.times.iter().zip(trace.signal("y").unwrap()) {
        if !y.is_finite() || y.abs() > 1e6 {
            return Err(DelayError::Instability {
                t,
                signal: "y".into(),
                value: y,
            });
        }
    }

    let mut w = create(&args.out)?;
    trace.write_csv(&mut w).map_err(io_write)?;
    println!("trace -> {}", args.out.display());
    Ok(())
}

#[derive(Args)]
struct DemoArgs {
    /// Approximation order (0 runs the doomed no-delay-term surrogate)
    #[arg(long, conflicts_with = "eps")]
    order: Option<usize>,

    /// L1 error target; the order is auto-selected
    #[arg(long)]
    eps: Option<f64>,

    /// Largest order tried by --eps selection
    #[arg(long, default_value_t = 64)]
    max_order: usize,

    /// Time step
    #[arg(long, default_value_t = 0.005)]
    dt: f64,

    /// Horizon
    #[arg(long, default_value_t = 20.0)]
    horizon: f64,

    /// Output directory for trace_ideal.csv, trace_app.csv, summary.json
    #[arg(long, default_value = ".")]
    outdir: PathBuf,
}

fn cmd_demo(args: &DemoArgs) -> Result<()> {
    let cfg = SimConfig::new(args.dt, args.horizon)?;
    let order = match (args.order, args.eps) {
        (Some(n), _) => n,
        (None, Some(eps)) => {
            let picked = select_order(Complex64::new(1.0, 0.0), 1.0, 1.0, eps, args.max_order)?;
            picked.config.order
        }
        (None, None) => {
            return Err(DelayError::domain("give --order or --eps"));
        }
    };

    if order == 0 {
        // Expected to abort: the distributed-delay term is what stabilizes
        // the loop.
        let trace = closed_loop_unstable_surrogate(&cfg)?;
        let path = args.outdir.join("trace_surrogate.csv");
        let mut w = create(&path)?;
        trace.write_csv(&mut w).map_err(io_write)?;
        println!("surrogate stayed bounded -> {}", path.display());
        return Ok(());
    }

    let out = closed_loop_demo(order, &cfg)?;
    let ideal_path = args.outdir.join("trace_ideal.csv");
    let app_path = args.outdir.join("trace_app.csv");
    let summary_path = args.outdir.join("summary.json");
    let mut w = create(&ideal_path)?;
    out.trace_ideal.write_csv(&mut w).map_err(io_write)?;
    let mut w = create(&app_path)?;
    out.trace_app.write_csv(&mut w).map_err(io_write)?;
    write_json(&summary_path, &out.summary)?;
    let paper_threshold = std::f64::consts::E / (3.0 + std::f64::consts::E);
    println!(
        "order={} eps={} margin={} (threshold max eps < 0.25; paper states {:.4})",
        out.summary.order,
        fmt_e(out.summary.eps_measured, 6),
        fmt_e(out.summary.margin, 6),
        paper_threshold
    );
    println!(
        "dc_ideal={} dc_app={} sup_diff={} -> {}",
        fmt_e(out.summary.dc_ideal, 6),
        fmt_e(out.summary.dc_app, 6),
        fmt_e(out.summary.sup_diff, 6),
        summary_path.display()
    );
    Ok(())
}

#[derive(Args)]
struct NormsArgs {
    #[command(flatten)]
    input: KernelInput,

    /// Second kernel for an A-norm distance
    #[arg(long, value_name = "FILE", conflicts_with = "atomic")]
    compare: Option<PathBuf>,

    /// Atomic distribution `t:w[,t:w...]` for the atomic lower bound
    #[arg(long)]
    atomic: Option<String>,

    /// Quadrature tolerance
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
}

fn parse_atomic(spec: &str) -> Result<AtomicDistribution> {
    let mut impulses = Vec::new();
    for part in spec.split(',') {
        let (t, w) = part
            .split_once(':')
            .ok_or_else(|| DelayError::domain(format!("atomic entries are t:w, got {part:?}")))?;
        let t: f64 = t
            .trim()
            .parse()
            .map_err(|_| DelayError::domain(format!("bad impulse time {t:?}")))?;
        let w: f64 = w
            .trim()
            .parse()
            .map_err(|_| DelayError::domain(format!("bad impulse weight {w:?}")))?;
        impulses.push((t, Complex64::new(w, 0.0)));
    }
    impulses.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    AtomicDistribution::new(impulses)
}

#[derive(Serialize)]
struct NormsOut {
    #[serde(skip_serializing_if = "Option::is_none")]
    l1_norm: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    a_norm_distance: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    atomic_distance: Option<f64>,
}

fn cmd_norms(args: &NormsArgs) -> Result<()> {
    let kernel = args.input.load_single("norms")?;
    let mut out = NormsOut {
        l1_norm: None,
        a_norm_distance: None,
        atomic_distance: None,
    };
    if let Some(cmp) = &args.compare {
        let pieces = load_pieces(cmp)?;
        if pieces.len() != 1 {
            return Err(DelayError::domain("norms --compare needs a single kernel"));
        }
        out.a_norm_distance = Some(a_norm_distance(&kernel, &pieces[0], args.tol)?);
    } else if let Some(spec) = &args.atomic {
        let p = parse_atomic(spec)?;
        out.atomic_distance = Some(atomic_distance(&kernel, &p, args.tol)?);
    } else {
        out.l1_norm = Some(kernel.l1_norm(args.tol)?);
    }
    let text = serde_json::to_string(&out)
        .map_err(|e| DelayError::numeric(format!("serialization failed: {e}")))?;
    println!("{text}");
    Ok(())
}

fn exit_code(e: &DelayError) -> i32 {
    match e {
        DelayError::Domain(_) | DelayError::Capacity(_) => 2,
        DelayError::NotAchieved { .. } => 3,
        DelayError::Instability { .. } => 4,
        DelayError::Convergence { .. } | DelayError::Numeric(_) => 5,
    }
}

fn init_threads() {
    if let Ok(v) = std::env::var("DELAYKIT_THREADS") {
        if let Ok(n) = v.parse::<usize>() {
            if n >= 1 {
                // A pool may already exist (library embedding); that is fine.
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build_global();
            }
        }
    }
}

fn dispatch(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Approx(a) => cmd_approx(a),
        Command::Bode(a) => cmd_bode(a),
        Command::Simulate(a) => cmd_simulate(a),
        Command::DemoStabilize(a) => cmd_demo(a),
        Command::Norms(a) => cmd_norms(a),
    }
}

pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let is_help = matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            );
            let _ = e.print();
            return if is_help { 0 } else { 2 };
        }
    };
    init_threads();
    match dispatch(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
