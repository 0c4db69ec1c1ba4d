use hubo_core::cop::mkcs_benchmark_instance;
use hubo_core::encode::{encode, Encoding};
use hubo_core::metrics::{decode_index, ground_truth, Decoded, RatioTable};
use hubo_core::simulate::{
    expectation, optimize, run_benchmark, sample, BenchmarkSettings, OptimizerConfig, QaoaEvaluator,
    StateVector,
};

#[test]
fn uniform_state_expectation_on_coloring() {
    let inst = mkcs_benchmark_instance();
    let average = inst.assignments().map(|s| inst.evaluate(&s).unwrap()).sum::<f64>() / 1024.0;
    let (hubo, _) = encode(&inst, Encoding::Hubo, 7.0).unwrap();
    let uniform = StateVector::uniform(10).unwrap();
    assert!((expectation(&hubo, &uniform).unwrap() - average).abs() < 1e-12);
    assert!((average - 2.25).abs() < 1e-12);

    // Independent bits: E[x x'] = 1/4 per monochromatic pair and
    // E[(1 − S)²] = 2 for S ~ Bin(4, 1/2).
    let lambda = 7.0;
    let (qubo, _) = encode(&inst, Encoding::Qubo, lambda).unwrap();
    let uniform = StateVector::uniform(20).unwrap();
    let want = 9.0 * 4.0 * 0.25 + lambda * 5.0 * 2.0;
    assert!((expectation(&qubo, &uniform).unwrap() - want).abs() < 1e-9);
}

#[test]
fn sampled_cost_is_unbiased() {
    let inst = mkcs_benchmark_instance();
    let (poly, layout) = encode(&inst, Encoding::Hubo, 4.0).unwrap();
    let run = optimize(&poly, 1, &OptimizerConfig::default(), 2).unwrap();
    let eval = QaoaEvaluator::new(&poly).unwrap();
    let state = eval.state(&eval.from_original_params(&run.layers[0].params)).unwrap();
    let exact = expectation(&poly, &state).unwrap();
    let count = 200;
    let estimates: Vec<f64> = (0..200)
        .map(|seed| sample(&state, count, seed).iter().map(|&b| poly.energy(b)).sum::<f64>() / count as f64)
        .collect();
    let mean = estimates.iter().sum::<f64>() / estimates.len() as f64;
    let var = estimates.iter().map(|e| (e - mean).powi(2)).sum::<f64>() / (estimates.len() - 1) as f64;
    let se = (var / estimates.len() as f64).sqrt();
    assert!((mean - exact).abs() < 3.0 * se, "mean {mean}, exact {exact}, se {se}");
    assert!(matches!(decode_index(0, &layout), Decoded::Valid(_)));
}

#[test]
fn sampled_ratio_tracks_exact_ratio() {
    let inst = mkcs_benchmark_instance();
    let truth = ground_truth(&inst).unwrap();
    let (poly, layout) = encode(&inst, Encoding::Hubo, 4.0).unwrap();
    let eval = QaoaEvaluator::new(&poly).unwrap();
    let run = optimize(&poly, 2, &OptimizerConfig::default(), 9).unwrap();
    let state = eval.state(&eval.from_original_params(&run.layers[1].params)).unwrap();
    let table = RatioTable::new(&inst, &layout, &truth).unwrap();
    let exact = table.exact(&state).unwrap();
    let within = (0..20).filter(|&seed| (table.sampled(&sample(&state, 10_000, seed)) - exact).abs() <= 0.02).count();
    assert!(within >= 19, "{within}/20");
}

#[test]
fn benchmark_is_seed_deterministic() {
    let inst = mkcs_benchmark_instance().delete_variable(4).unwrap();
    let truth = ground_truth(&inst).unwrap();
    let settings = BenchmarkSettings {
        max_layers: 2,
        runs: 2,
        seed: 3,
        samples: 200,
        ..Default::default()
    };
    let a = run_benchmark(&inst, &truth, &settings).unwrap();
    let b = run_benchmark(&inst, &truth, &settings).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.num_qubits, 8);
}
