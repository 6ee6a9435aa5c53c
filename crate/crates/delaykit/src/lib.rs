//! Distributed-delay convolution operators: kernel algebra, Laplace
//! transforms, stable finite-dimensional approximants, and time-domain
//! simulation.
//!
//! The central objects are [`FiniteKernel`] (an exponential-polynomial
//! convolution kernel with compact support) and [`Approximant`] (a stable
//! kernel close to an unstable target in the L1 norm, which controls the
//! induced operator norm on every Lp). See the `examples/` directory for a
//! tour of each capability.

pub mod approx;
pub mod cli;
pub mod error;
pub mod kernel;
pub mod laplace;
pub mod metrics;
pub mod quad;
pub mod sim;

pub(crate) mod acc;
pub(crate) mod bernstein;
pub(crate) mod hp;

pub use approx::{
    approx_derivative, approx_kernel, approx_theta0, approx_theta_lambda, lowpass_lumped,
    order_bound, select_order, ApproxConfig, ApproxTarget, Approximant, AssembledApprox,
    LowpassLumped,
};
pub use error::{DelayError, Result};
pub use kernel::{AtomicDistribution, ExpPolyTerm, FiniteKernel, StabilityClass};
pub use laplace::{
    decompose, frequency_response, frequency_response_sum, numeric_laplace, theta_hat,
    Decomposition, ElementaryComponent, FreqPoint, FrequencyGrid,
};
pub use metrics::{
    a_norm_distance, atomic_distance, frequency_error, in_ball, ErrorReport, GraphBall,
    TransferOperand,
};
pub use sim::{
    closed_loop_demo, closed_loop_unstable_surrogate, convolve_direct, realize, simulate_block,
    small_gain_margin, DelayStateSpace, DemoOutput, DemoSummary, SimConfig, SimTrace, Signal,
};
