//! Statevector simulation, QAOA evaluation and optimization.

mod benchmark;
mod optimize;
mod qaoa;
mod split;
mod state;

pub use benchmark::{
    run_benchmark, run_rng, BenchmarkResult, BenchmarkSettings, LayerSummary, RunFailure, RunLayer, RunRecord,
};
pub use optimize::{
    grid_start, local_optimize, optimize, optimize_layers, GradientMethod, LayerRecord,
    LocalOptimum, OptimizerConfig, RunResult,
};
pub use qaoa::{QaoaEvaluator, QaoaParams};
pub use state::{expectation, run_circuit, sample, sample_with, StateVector};
