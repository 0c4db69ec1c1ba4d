use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::optimize::{optimize_layers, OptimizerConfig};
use super::qaoa::{QaoaEvaluator, QaoaParams};
use super::state::sample_with;
use crate::compile::{compile_cost_layer, count_resources, ResourceReport, Strategy};
use crate::cop::CopInstance;
use crate::encode::{encode, Encoding};
use crate::error::{Error, Result};
use crate::metrics::{GroundTruth, RatioTable, ThresholdPoint, ENUMERATION_CAP};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct BenchmarkSettings {
    pub encoding: Encoding,
    pub strategy: Strategy,
    pub max_layers: usize,
    pub runs: usize,
    pub seed: u64,
    /// Draws per layer for the sampled ratio.
    pub samples: usize,
    /// Penalty weight; the instance's suggested value when absent.
    pub penalty: Option<f64>,
    pub optimizer: OptimizerConfig,
    /// Worker threads; all available when absent.
    pub jobs: Option<usize>,
}

impl Default for BenchmarkSettings {
    fn default() -> Self {
        Self {
            encoding: Encoding::Hubo,
            strategy: Strategy::Gray,
            max_layers: 10,
            runs: 100,
            seed: 0,
            samples: 10_000,
            penalty: None,
            optimizer: OptimizerConfig::default(),
            jobs: None,
        }
    }
}

/// One depth of one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunLayer {
    pub layers: usize,
    /// Angles for the unnormalized cost polynomial.
    pub params: QaoaParams,
    pub expectation: f64,
    /// Exact ratio, available up to the enumeration cap.
    pub ratio_exact: Option<f64>,
    pub ratio_sampled: f64,
    /// Exact ratio when available, otherwise the sampled one.
    pub ratio: f64,
    pub objective: f64,
    pub iterations: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub run: usize,
    pub seed: u64,
    pub layers: Vec<RunLayer>,
}

impl RunRecord {
    /// Shallowest depth whose ratio is at most `threshold`.
    pub fn first_crossing(&self, threshold: f64) -> Option<usize> {
        self.layers.iter().find(|l| l.ratio <= threshold).map(|l| l.layers)
    }
}

fn mean_std(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    if xs.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// Statistics over runs at one depth.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayerSummary {
    pub layers: usize,
    pub resources: ResourceReport,
    pub mean_ratio: f64,
    pub std_ratio: f64,
    pub mean_objective: f64,
    pub std_objective: f64,
    pub mean_expectation: f64,
}

/// A run that stopped with an error.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunFailure {
    pub run: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkResult {
    pub encoding: Encoding,
    pub strategy: Strategy,
    pub num_qubits: usize,
    pub penalty: f64,
    pub truth: GroundTruth,
    pub summaries: Vec<LayerSummary>,
    /// Successful runs only; statistics ignore the failures.
    pub runs: Vec<RunRecord>,
    #[serde(default)]
    pub failures: Vec<RunFailure>,
}

impl BenchmarkResult {
    pub fn is_partial(&self) -> bool {
        !self.failures.is_empty()
    }

    /// Mean ratio against resources, one point per depth.
    pub fn series(&self) -> Vec<ThresholdPoint> {
        self.summaries
            .iter()
            .map(|s| ThresholdPoint {
                layers: s.layers,
                total_gates: s.resources.total_gates,
                cnot: s.resources.total_cnot,
                single_qubit: s.resources.total_single_qubit,
                ratio: s.mean_ratio,
            })
            .collect()
    }

    /// Resources of the run that reaches `threshold` at the fewest layers.
    pub fn threshold_point(&self, threshold: f64) -> Option<ThresholdPoint> {
        let (run, layers) = self
            .runs
            .iter()
            .filter_map(|r| r.first_crossing(threshold).map(|p| (r, p)))
            .min_by_key(|&(_, p)| p)?;
        let s = &self.summaries[layers - 1];
        Some(ThresholdPoint {
            layers,
            total_gates: s.resources.total_gates,
            cnot: s.resources.total_cnot,
            single_qubit: s.resources.total_single_qubit,
            ratio: run.layers[layers - 1].ratio,
        })
    }
}

/// Seed for run `run`: the base seed with the run index as stream.
pub fn run_rng(seed: u64, run: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(run as u64);
    rng
}

/// Encodes `inst`, then performs `settings.runs` independent layerwise
/// optimizations and scores every depth against `truth`.
pub fn run_benchmark(
    inst: &CopInstance,
    truth: &GroundTruth,
    settings: &BenchmarkSettings,
) -> Result<BenchmarkResult> {
    if settings.runs == 0 || settings.max_layers == 0 {
        return Err(Error::Format("a benchmark needs at least one run and one layer".into()));
    }
    let penalty = settings.penalty.unwrap_or_else(|| inst.suggested_penalty());
    let (poly, layout) = encode(inst, settings.encoding, penalty)?;
    let q = layout.num_qubits();
    let eval = QaoaEvaluator::new(&poly)?;
    let table = RatioTable::new(inst, &layout, truth)?;
    let cost = count_resources(&compile_cost_layer(
        &poly,
        1.0,
        settings.strategy,
        &layout.registers(),
    ));

    let one_run = |run: usize| -> Result<RunRecord> {
        let mut rng = run_rng(settings.seed, run);
        let result = optimize_layers(&eval, settings.max_layers, &settings.optimizer, &mut rng)?;
        let mut layers = Vec::with_capacity(result.layers.len());
        for rec in result.layers {
            let state = eval.state(&eval.from_original_params(&rec.params))?;
            let ratio_exact = if q <= ENUMERATION_CAP {
                Some(table.exact(&state)?)
            } else {
                None
            };
            let draws = sample_with(&state, settings.samples, &mut rng);
            let ratio_sampled = table.sampled(&draws);
            let ratio = ratio_exact.unwrap_or(ratio_sampled);
            layers.push(RunLayer {
                layers: rec.layers,
                params: rec.params,
                expectation: rec.expectation,
                ratio_exact,
                ratio_sampled,
                ratio,
                objective: truth.objective_at(ratio),
                iterations: rec.iterations,
                converged: rec.converged,
            });
        }
        Ok(RunRecord {
            run,
            seed: settings.seed,
            layers,
        })
    };
    let jobs = settings.jobs.unwrap_or(0);
    let outcomes: Vec<Result<RunRecord>> = if jobs == 1 {
        (0..settings.runs).map(one_run).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| Error::Format(e.to_string()))?;
        pool.install(|| (0..settings.runs).into_par_iter().map(one_run).collect())
    };
    let mut runs = Vec::with_capacity(outcomes.len());
    let mut failures = Vec::new();
    for (run, outcome) in outcomes.into_iter().enumerate() {
        match outcome {
            Ok(r) => runs.push(r),
            Err(e) => failures.push((run, e)),
        }
    }
    if runs.is_empty() {
        let (run, e) = failures.swap_remove(0);
        return Err(Error::Run {
            run,
            source: Box::new(e),
        });
    }
    let failures = failures
        .into_iter()
        .map(|(run, e)| RunFailure {
            run,
            message: e.to_string(),
        })
        .collect();

    let summaries = (1..=settings.max_layers)
        .map(|p| {
            let pick = |f: &dyn Fn(&RunLayer) -> f64| -> Vec<f64> {
                runs.iter().map(|r| f(&r.layers[p - 1])).collect()
            };
            let (mean_ratio, std_ratio) = mean_std(&pick(&|l| l.ratio));
            let (mean_objective, std_objective) = mean_std(&pick(&|l| l.objective));
            let (mean_expectation, _) = mean_std(&pick(&|l| l.expectation));
            LayerSummary {
                layers: p,
                resources: ResourceReport::new(q, cost, p),
                mean_ratio,
                std_ratio,
                mean_objective,
                std_objective,
                mean_expectation,
            }
        })
        .collect();

    Ok(BenchmarkResult {
        encoding: settings.encoding,
        strategy: settings.strategy,
        num_qubits: q,
        penalty,
        truth: truth.clone(),
        summaries,
        runs,
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::ground_truth;

    fn tiny() -> CopInstance {
        let mut inst = CopInstance::new(3, 3).unwrap();
        for (i, v, c) in [(0, 0, 1.0), (0, 1, 2.5), (1, 2, -1.0), (2, 0, 0.5)] {
            inst.add_linear(i, v, c).unwrap();
        }
        inst.add_quadratic(0, 1, 0, 0, 2.0).unwrap();
        inst.add_quadratic(1, 2, 1, 2, -1.5).unwrap();
        inst
    }

    fn settings(runs: usize) -> BenchmarkSettings {
        BenchmarkSettings {
            max_layers: 2,
            runs,
            seed: 7,
            samples: 500,
            jobs: Some(1),
            ..Default::default()
        }
    }

    #[test]
    fn single_run_statistics() {
        let inst = tiny();
        let truth = ground_truth(&inst).unwrap();
        let res = run_benchmark(&inst, &truth, &settings(1)).unwrap();
        assert_eq!(res.runs.len(), 1);
        for (s, l) in res.summaries.iter().zip(&res.runs[0].layers) {
            assert_eq!(s.mean_ratio, l.ratio);
            assert_eq!(s.std_ratio, 0.0);
            assert_eq!(s.mean_objective, l.objective);
            let exact = l.ratio_exact.unwrap();
            assert!((0.0..=1.0).contains(&exact));
            assert!((l.objective - (truth.c_min + exact * (truth.c_max - truth.c_min))).abs() < 1e-9);
        }
        assert_eq!(res.summaries[1].resources.layers, 2);
    }

    #[test]
    fn parallel_matches_serial() {
        let inst = tiny();
        let truth = ground_truth(&inst).unwrap();
        let serial = run_benchmark(&inst, &truth, &settings(3)).unwrap();
        let mut s = settings(3);
        s.jobs = Some(2);
        let parallel = run_benchmark(&inst, &truth, &s).unwrap();
        assert_eq!(serial, parallel);
        assert_ne!(serial.runs[0].layers[0].params, serial.runs[1].layers[0].params);
    }

    #[test]
    fn threshold_point_uses_fewest_layers() {
        let inst = tiny();
        let truth = ground_truth(&inst).unwrap();
        let res = run_benchmark(&inst, &truth, &settings(2)).unwrap();
        let best = res.runs.iter().flat_map(|r| &r.layers).map(|l| l.ratio).fold(f64::INFINITY, f64::min);
        let pt = res.threshold_point(best).unwrap();
        assert!(pt.ratio <= best);
        assert!(res.threshold_point(-1.0).is_none());
    }
}
