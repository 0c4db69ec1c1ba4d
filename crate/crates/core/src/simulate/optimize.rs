use std::f64::consts::{FRAC_PI_2, PI};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::qaoa::{QaoaEvaluator, QaoaParams};
use crate::encode::PauliPolynomial;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GradientMethod {
    #[default]
    Adjoint,
    FiniteDifference,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct OptimizerConfig {
    pub max_iterations: usize,
    /// Stop once the gradient's Euclidean norm drops below this.
    pub tolerance: f64,
    pub gradient: GradientMethod,
    pub fd_step: f64,
    /// Points per axis of the jittered starting grid for one layer.
    pub grid: usize,
    pub max_backtracks: usize,
    /// Sufficient-decrease constant of the line search.
    pub armijo: f64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            max_iterations: 500,
            tolerance: 1e-5,
            gradient: GradientMethod::Adjoint,
            fd_step: 1e-4,
            grid: 16,
            max_backtracks: 40,
            armijo: 1e-4,
        }
    }
}

/// Outcome of one local optimization, in normalized units.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalOptimum {
    pub params: QaoaParams,
    pub value: f64,
    pub iterations: usize,
    pub gradient_norm: f64,
    pub converged: bool,
    /// Best value seen after each iteration, starting with the initial point.
    pub history: Vec<f64>,
}

/// Optimized angles for one depth, in the units of the original polynomial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayerRecord {
    pub layers: usize,
    pub params: QaoaParams,
    pub expectation: f64,
    pub iterations: usize,
    pub gradient_norm: f64,
    pub converged: bool,
    pub history: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub layers: Vec<LayerRecord>,
}

impl RunResult {
    pub fn last(&self) -> Option<&LayerRecord> {
        self.layers.last()
    }
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn check_finite(value: f64, iteration: usize) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonFinite { value, iteration })
    }
}

fn value_and_gradient(
    eval: &QaoaEvaluator,
    x: &[f64],
    config: &OptimizerConfig,
) -> Result<(f64, Vec<f64>)> {
    let params = QaoaParams::from_vec(x)?;
    match config.gradient {
        GradientMethod::Adjoint => {
            let (v, g) = eval.value_and_gradient(&params)?;
            Ok((v, g.to_vec()))
        }
        GradientMethod::FiniteDifference => {
            let v = eval.value(&params)?;
            let g = eval.finite_difference_gradient(&params, config.fd_step)?;
            Ok((v, g.to_vec()))
        }
    }
}

/// Gradient descent with Barzilai–Borwein steps safeguarded by Armijo
/// backtracking, starting from `start` (normalized units).
pub fn local_optimize(
    eval: &QaoaEvaluator,
    start: &QaoaParams,
    config: &OptimizerConfig,
) -> Result<LocalOptimum> {
    let mut x = start.to_vec();
    let (mut f, mut g) = value_and_gradient(eval, &x, config)?;
    check_finite(f, 0)?;
    let mut history = vec![f];
    let mut step = 0.1 / g.iter().fold(1e-12f64, |a, v| a.max(v.abs())).max(1.0);
    let mut iterations = 0;
    let mut converged = norm(&g) < config.tolerance;
    while !converged && iterations < config.max_iterations {
        iterations += 1;
        let g2 = dot(&g, &g);
        let mut alpha = step;
        let mut trial: Vec<f64> = x.iter().zip(&g).map(|(a, b)| a - alpha * b).collect();
        let (mut ft, mut gt) = value_and_gradient(eval, &trial, config)?;
        let mut accepted = ft <= f - config.armijo * alpha * g2;
        let mut backtracks = 0;
        while !accepted && backtracks < config.max_backtracks {
            backtracks += 1;
            alpha *= 0.5;
            trial = x.iter().zip(&g).map(|(a, b)| a - alpha * b).collect();
            ft = eval.value(&QaoaParams::from_vec(&trial)?)?;
            check_finite(ft, iterations)?;
            accepted = ft <= f - config.armijo * alpha * g2;
        }
        check_finite(ft, iterations)?;
        if !accepted {
            history.push(f);
            break;
        }
        if backtracks > 0 {
            let (fv, gv) = value_and_gradient(eval, &trial, config)?;
            ft = fv;
            gt = gv;
        }
        let s: Vec<f64> = trial.iter().zip(&x).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = gt.iter().zip(&g).map(|(a, b)| a - b).collect();
        let sy = dot(&s, &y);
        step = if sy > 0.0 {
            (dot(&s, &s) / sy).clamp(1e-8, 1e3)
        } else {
            (alpha * 2.0).min(1e3)
        };
        x = trial;
        f = ft;
        g = gt;
        history.push(f);
        converged = norm(&g) < config.tolerance;
    }
    Ok(LocalOptimum {
        params: QaoaParams::from_vec(&x)?,
        value: f,
        iterations,
        gradient_norm: norm(&g),
        converged,
        history,
    })
}

/// Best point of a `grid × grid` lattice over `γ ∈ [0, π)`, `β ∈ [0, π/2)`
/// with every point shifted by one random offset per axis.
pub fn grid_start<R: Rng>(eval: &QaoaEvaluator, grid: usize, rng: &mut R) -> Result<QaoaParams> {
    let grid = grid.max(1);
    let (ug, ub): (f64, f64) = (rng.gen(), rng.gen());
    let mut best = (f64::INFINITY, QaoaParams::new(vec![0.0], vec![0.0])?);
    for i in 0..grid {
        for j in 0..grid {
            let p = QaoaParams::new(
                vec![(i as f64 + ug) * PI / grid as f64],
                vec![(j as f64 + ub) * FRAC_PI_2 / grid as f64],
            )?;
            let v = eval.value(&p)?;
            if v < best.0 {
                best = (v, p);
            }
        }
    }
    Ok(best.1)
}

/// Optimizes depths `1..=max_layers` in turn: depth 1 from the best grid
/// point, every later depth from the interpolated previous optimum.
pub fn optimize_layers<R: Rng>(
    eval: &QaoaEvaluator,
    max_layers: usize,
    config: &OptimizerConfig,
    rng: &mut R,
) -> Result<RunResult> {
    let mut layers = Vec::with_capacity(max_layers);
    let mut start = grid_start(eval, config.grid, rng)?;
    for p in 1..=max_layers {
        let opt = local_optimize(eval, &start, config)?;
        layers.push(LayerRecord {
            layers: p,
            params: eval.to_original_params(&opt.params),
            expectation: eval.to_original(opt.value),
            iterations: opt.iterations,
            gradient_norm: opt.gradient_norm,
            converged: opt.converged,
            history: opt.history.iter().map(|&v| eval.to_original(v)).collect(),
        });
        start = opt.params.interpolate();
    }
    Ok(RunResult { layers })
}

/// [`optimize_layers`] on a fresh evaluator with a generator seeded from `seed`.
pub fn optimize(
    poly: &PauliPolynomial,
    max_layers: usize,
    config: &OptimizerConfig,
    seed: u64,
) -> Result<RunResult> {
    let eval = QaoaEvaluator::new(poly)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    optimize_layers(&eval, max_layers, config, &mut rng)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_z_reaches_ground_state() {
        let mut z = PauliPolynomial::new(1);
        z.add_term([0], 1.0).unwrap();
        let run = optimize(&z, 1, &OptimizerConfig::default(), 3).unwrap();
        let rec = run.last().unwrap();
        assert!(rec.expectation <= -0.99, "{}", rec.expectation);
        assert!(rec.history.windows(2).all(|w| w[1] <= w[0]));
    }

    #[test]
    fn zero_polynomial_keeps_start() {
        let eval = QaoaEvaluator::new(&PauliPolynomial::new(2)).unwrap();
        let start = QaoaParams::new(vec![0.3], vec![0.2]).unwrap();
        let opt = local_optimize(&eval, &start, &OptimizerConfig::default()).unwrap();
        assert_eq!(opt.params, start);
        assert_eq!(opt.value, 0.0);
    }

    #[test]
    fn ring_improves_with_depth() {
        let q = 6;
        let mut ring = PauliPolynomial::new(q);
        for k in 0..q {
            ring.add_term([k, (k + 1) % q], 1.0).unwrap();
        }
        let run = optimize(&ring, 3, &OptimizerConfig::default(), 11).unwrap();
        let e: Vec<f64> = run.layers.iter().map(|r| r.expectation).collect();
        assert!(e[1] <= e[0] + 1e-9 && e[2] <= e[1] + 1e-9, "{e:?}");
        assert!(e[0] < -2.9);
        for r in &run.layers {
            assert_eq!(r.params.layers(), r.layers);
        }
    }

    #[test]
    fn finite_difference_mode_agrees() {
        let mut p = PauliPolynomial::new(3);
        p.add_term([0, 1], 1.0).unwrap();
        p.add_term([1, 2], -0.5).unwrap();
        p.add_term([0, 1, 2], 0.7).unwrap();
        let eval = QaoaEvaluator::new(&p).unwrap();
        let start = QaoaParams::new(vec![0.4], vec![0.3]).unwrap();
        let a = local_optimize(&eval, &start, &OptimizerConfig::default()).unwrap();
        let config = OptimizerConfig {
            gradient: GradientMethod::FiniteDifference,
            ..Default::default()
        };
        let b = local_optimize(&eval, &start, &config).unwrap();
        assert!((a.value - b.value).abs() < 1e-6);
    }

    #[test]
    fn same_seed_same_run() {
        let mut p = PauliPolynomial::new(3);
        p.add_term([0, 2], 1.0).unwrap();
        p.add_term([1], 0.3).unwrap();
        let c = OptimizerConfig::default();
        assert_eq!(optimize(&p, 2, &c, 5).unwrap(), optimize(&p, 2, &c, 5).unwrap());
    }
}
