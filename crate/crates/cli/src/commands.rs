use std::fs;
use std::path::PathBuf;

use hubo_core::compile::{compile_cost_layer, count_resources, scaling_formulas};
use hubo_core::cop::{
    builtin_gap_benchmark, gap_instance, ip_benchmark, mkcs_benchmark_instance, parse_instance,
    size_ladder, write_instance, ProblemFile,
};
use hubo_core::encode::encode;
use hubo_core::metrics::{calibrate_penalty, content_hash, gates_to_threshold, ground_truth, ThresholdPoint};
use hubo_core::simulate::{run_benchmark, BenchmarkResult, BenchmarkSettings};
use hubo_core::{CopInstance, Encoding, GroundTruth, ResourceReport};
use serde::Serialize;
use serde_json::json;

use crate::config::{BenchmarkConfig, Problem};
use crate::output::{num, opt, OutputDir};
use crate::Failure;

type Builder = Box<dyn Fn(Option<f64>) -> hubo_core::Result<CopInstance>>;

const MAX_DOUBLINGS: usize = 30;

/// Builds the configured instance, applying the constraint penalty and the
/// optional calibration.
pub fn load_instance(cfg: &BenchmarkConfig) -> Result<CopInstance, Failure> {
    let config_err = |e: hubo_core::Error| Failure::Config(e.to_string());
    let builder: Option<Builder> = match cfg.problem {
        Problem::Gap => Some(Box::new(|p| gap_instance(&builtin_gap_benchmark(), p))),
        Problem::Ip => Some(Box::new(|p| ip_benchmark().instance(p))),
        Problem::Mkcs => None,
        Problem::File => {
            let path = cfg.instance.as_ref().expect("validated");
            let text = fs::read_to_string(path)
                .map_err(|e| Failure::Config(format!("cannot read {}: {e}", path.display())))?;
            match ProblemFile::parse(&text) {
                Ok(file) => Some(Box::new(move |p| with_penalty(&file, p).instance())),
                Err(as_problem) => {
                    let inst = parse_instance(&text).map_err(|as_instance| {
                        Failure::Config(format!(
                            "{}: neither a problem file ({as_problem}) nor an instance file ({as_instance})",
                            path.display()
                        ))
                    })?;
                    if cfg.constraint_penalty.is_some() || cfg.calibrate {
                        return Err(Failure::Config(
                            "constraint penalties of an instance file are fixed; use a problem file".into(),
                        ));
                    }
                    return Ok(inst);
                }
            }
        }
    };
    let Some(build) = builder else {
        if cfg.constraint_penalty.is_some() {
            return Err(Failure::Config("this problem has no constraint penalties".into()));
        }
        return Ok(mkcs_benchmark_instance());
    };
    if !cfg.calibrate {
        return build(cfg.constraint_penalty).map_err(config_err);
    }
    let start = match cfg.constraint_penalty {
        Some(p) => p,
        None => build(None).map_err(config_err)?.suggested_penalty(),
    };
    let (lambda, inst) = calibrate_penalty(|p| build(Some(p)), start, MAX_DOUBLINGS)?;
    println!("calibrated constraint penalty: {lambda}");
    Ok(inst)
}

fn with_penalty(file: &ProblemFile, penalty: Option<f64>) -> ProblemFile {
    let mut file = file.clone();
    if penalty.is_some() {
        match &mut file {
            ProblemFile::Gap(f) => f.penalty = penalty,
            ProblemFile::Ip(f) => f.penalty = penalty,
            ProblemFile::Mkcs(_) => {}
        }
    }
    file
}

fn penalty_for(cfg: &BenchmarkConfig, inst: &CopInstance) -> f64 {
    cfg.penalty.unwrap_or_else(|| inst.suggested_penalty())
}

fn open(cfg: &BenchmarkConfig, command: &str) -> Result<(CopInstance, OutputDir), Failure> {
    let inst = load_instance(cfg)?;
    let mut out = OutputDir::create(cfg, command, &content_hash(&inst))?;
    out.write("instance.txt", write_instance(&inst))?;
    out.write("config.toml", cfg.to_toml())?;
    Ok((inst, out))
}

#[derive(Serialize)]
struct LayoutSummary {
    encoding: Encoding,
    n: usize,
    m: usize,
    register_width: usize,
    num_qubits: usize,
    registers: Vec<Vec<usize>>,
    penalty: f64,
    terms: usize,
    max_order: usize,
    order_histogram: Vec<(usize, usize)>,
}

pub fn cmd_encode(cfg: &BenchmarkConfig) -> Result<PathBuf, Failure> {
    let (inst, mut out) = open(cfg, "encode")?;
    for enc in cfg.encoding.encodings() {
        let penalty = penalty_for(cfg, &inst);
        let (poly, layout) = encode(&inst, enc, penalty)?;
        out.write(&format!("poly-{enc}.txt"), poly.to_dump())?;
        let summary = LayoutSummary {
            encoding: enc,
            n: layout.n(),
            m: layout.m(),
            register_width: layout.register_width(),
            num_qubits: layout.num_qubits(),
            registers: layout.registers(),
            penalty,
            terms: poly.num_non_identity_terms(),
            max_order: poly.max_order(),
            order_histogram: poly.order_histogram().into_iter().collect(),
        };
        out.write_json(&format!("layout-{enc}.json"), &summary)?;
        println!(
            "{enc}: {} qubits, {} terms, max order {}, penalty {penalty}",
            summary.num_qubits, summary.terms, summary.max_order
        );
    }
    out.finish(cfg)
}

pub fn cmd_compile(cfg: &BenchmarkConfig) -> Result<PathBuf, Failure> {
    let (inst, mut out) = open(cfg, "compile")?;
    let mut rows = Vec::new();
    println!("encoding  qubits  cnot/layer  rz/layer  rx/layer  dense cnot  dense rz");
    for enc in cfg.encoding.encodings() {
        let (poly, layout) = encode(&inst, enc, penalty_for(cfg, &inst))?;
        let circuit = compile_cost_layer(&poly, 1.0, cfg.strategy, &layout.registers());
        let counts = count_resources(&circuit);
        let report = ResourceReport::new(layout.num_qubits(), counts, cfg.layers.max);
        let dense = scaling_formulas(inst.n(), inst.m(), enc);
        out.write(&format!("circuit-{enc}.txt"), circuit.to_text())?;
        out.write_json(
            &format!("resources-{enc}.json"),
            &json!({
                "encoding": enc,
                "strategy": cfg.strategy,
                "gamma": 1.0,
                "cost_layer": counts,
                "report": report,
                "dense_bound": dense,
            }),
        )?;
        println!(
            "{enc:<8}  {:>6}  {:>10}  {:>8}  {:>8}  {:>10}  {:>8}",
            report.num_qubits, counts.cnot, counts.rz, report.rx_per_layer, dense.cnot_per_layer, dense.rz_per_layer
        );
        rows.push(vec![
            enc.to_string(),
            cfg.strategy.to_string(),
            report.num_qubits.to_string(),
            counts.cnot.to_string(),
            counts.rz.to_string(),
            report.rx_per_layer.to_string(),
            dense.cnot_per_layer.to_string(),
            dense.rz_per_layer.to_string(),
            report.layers.to_string(),
            report.total_cnot.to_string(),
            report.total_single_qubit.to_string(),
            report.total_gates.to_string(),
        ]);
    }
    out.write_csv(
        "resources.csv",
        &[
            "encoding",
            "strategy",
            "qubits",
            "cnot_per_layer",
            "rz_per_layer",
            "rx_per_layer",
            "dense_cnot_per_layer",
            "dense_rz_per_layer",
            "layers",
            "total_cnot",
            "total_single_qubit",
            "total_gates",
        ],
        &rows,
    )?;
    out.finish(cfg)
}

fn settings(cfg: &BenchmarkConfig, encoding: Encoding) -> BenchmarkSettings {
    BenchmarkSettings {
        encoding,
        strategy: cfg.strategy,
        max_layers: cfg.layers.max,
        runs: cfg.runs,
        seed: cfg.seed,
        samples: cfg.samples,
        penalty: cfg.penalty,
        optimizer: cfg.optimizer.clone(),
        jobs: cfg.jobs,
    }
}

fn run_one(
    cfg: &BenchmarkConfig,
    inst: &CopInstance,
    truth: &GroundTruth,
    encoding: Encoding,
    out: &mut OutputDir,
    label: &str,
) -> Result<BenchmarkResult, Failure> {
    let res = run_benchmark(inst, truth, &settings(cfg, encoding))?;
    if res.is_partial() {
        out.mark_partial();
        for f in &res.failures {
            out.note(format!("{label}{encoding} run {} failed: {}", f.run, f.message));
        }
    }
    Ok(res)
}

const SERIES_HEADER: [&str; 11] = [
    "encoding",
    "layers",
    "total_gates",
    "cnot",
    "single_qubit",
    "mean_ratio",
    "std_ratio",
    "mean_objective",
    "std_objective",
    "mean_expectation",
    "runs",
];

fn series_rows(cfg: &BenchmarkConfig, res: &BenchmarkResult) -> Vec<Vec<String>> {
    res.summaries
        .iter()
        .filter(|s| cfg.layers.contains(s.layers))
        .map(|s| {
            vec![
                res.encoding.to_string(),
                s.layers.to_string(),
                s.resources.total_gates.to_string(),
                s.resources.total_cnot.to_string(),
                s.resources.total_single_qubit.to_string(),
                num(s.mean_ratio),
                num(s.std_ratio),
                num(s.mean_objective),
                num(s.std_objective),
                num(s.mean_expectation),
                res.runs.len().to_string(),
            ]
        })
        .collect()
}

const THRESHOLD_FIELDS: [&str; 6] = ["reached", "layers", "total_gates", "cnot", "single_qubit", "ratio"];

fn threshold_fields(p: Option<ThresholdPoint>) -> Vec<String> {
    vec![
        p.is_some().to_string(),
        opt(p.map(|p| p.layers)),
        opt(p.map(|p| p.total_gates)),
        opt(p.map(|p| p.cnot)),
        opt(p.map(|p| p.single_qubit)),
        opt(p.map(|p| p.ratio)),
    ]
}

#[derive(Serialize)]
struct TaggedRun<'a> {
    encoding: Encoding,
    #[serde(flatten)]
    run: &'a hubo_core::simulate::RunRecord,
}

pub fn cmd_benchmark(cfg: &BenchmarkConfig) -> Result<PathBuf, Failure> {
    let (inst, mut out) = open(cfg, "benchmark")?;
    let truth = ground_truth(&inst)?;
    out.write_json("truth.json", &truth)?;
    println!("ground truth: c_min {}, c_max {}", truth.c_min, truth.c_max);
    let threshold = cfg.threshold();
    let mut series = Vec::new();
    let mut thresholds = Vec::new();
    let mut runs = Vec::new();
    let mut results = Vec::new();
    for enc in cfg.encoding.encodings() {
        let res = run_one(cfg, &inst, &truth, enc, &mut out, "")?;
        for s in res.summaries.iter().filter(|s| cfg.layers.contains(s.layers)) {
            println!(
                "{enc} p={:<2} gates {:>6}  cnot {:>6}  A {:.4} ± {:.4}  objective {:.4}",
                s.layers,
                s.resources.total_gates,
                s.resources.total_cnot,
                s.mean_ratio,
                s.std_ratio,
                s.mean_objective
            );
        }
        series.extend(series_rows(cfg, &res));
        for (method, point) in [
            ("best_run", res.threshold_point(threshold)),
            ("mean", gates_to_threshold(&res.series(), threshold)),
        ] {
            let mut row = vec![enc.to_string(), method.to_owned(), num(threshold)];
            row.extend(threshold_fields(point));
            thresholds.push(row);
        }
        runs.extend(res.runs.iter().map(|run| serde_json::to_value(TaggedRun { encoding: enc, run })));
        results.push(res);
    }
    if let [qubo, hubo] = &results[..] {
        report_reduction("", qubo.threshold_point(threshold), hubo.threshold_point(threshold), threshold);
    }
    out.write_csv("series.csv", &SERIES_HEADER, &series)?;
    let mut header = vec!["encoding", "method", "threshold"];
    header.extend(THRESHOLD_FIELDS);
    out.write_csv("threshold.csv", &header, &thresholds)?;
    let runs = runs
        .into_iter()
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| Failure::Runtime(e.to_string()))?;
    out.write_jsonl("runs.jsonl", &runs)?;
    finish_checked(out, cfg)
}

fn report_reduction(prefix: &str, qubo: Option<ThresholdPoint>, hubo: Option<ThresholdPoint>, threshold: f64) {
    match (qubo, hubo) {
        (Some(q), Some(h)) if q.cnot > 0 => println!(
            "{prefix}CNOTs to reach A ≤ {threshold}: qubo {} (p={}), hubo {} (p={}), hubo/qubo {:.1}%",
            q.cnot,
            q.layers,
            h.cnot,
            h.layers,
            100.0 * h.cnot as f64 / q.cnot as f64
        ),
        (q, h) => println!(
            "{prefix}CNOTs to reach A ≤ {threshold}: qubo {}, hubo {}",
            q.map_or("not reached".into(), |p| p.cnot.to_string()),
            h.map_or("not reached".into(), |p| p.cnot.to_string())
        ),
    }
}

fn finish_checked(out: OutputDir, cfg: &BenchmarkConfig) -> Result<PathBuf, Failure> {
    let partial = out.is_partial();
    let path = out.finish(cfg)?;
    if partial {
        return Err(Failure::Runtime(format!(
            "some runs failed; partial results in {}",
            path.display()
        )));
    }
    Ok(path)
}

pub fn cmd_scaling(cfg: &BenchmarkConfig) -> Result<PathBuf, Failure> {
    let (inst, mut out) = open(cfg, "scaling")?;
    let truth = ground_truth(&inst)?;
    let reduction = cfg.reduction();
    let ladder = size_ladder(&inst, reduction, Some(&truth.argmin))?;
    let threshold = cfg.threshold();
    let mut rows = Vec::new();
    let mut series = Vec::new();
    for rung in &ladder {
        let size = rung.n() * rung.m();
        let truth = ground_truth(rung)?;
        let label = format!("size {size}: ");
        let mut points = Vec::new();
        for enc in cfg.encoding.encodings() {
            let res = run_one(cfg, rung, &truth, enc, &mut out, &label)?;
            let point = res.threshold_point(threshold);
            let mut row = vec![
                size.to_string(),
                rung.n().to_string(),
                rung.m().to_string(),
                enc.to_string(),
                res.num_qubits.to_string(),
                res.summaries[0].resources.cnot_per_layer.to_string(),
                res.summaries[0].resources.rz_per_layer.to_string(),
                num(truth.c_min),
                num(truth.c_max),
                num(threshold),
            ];
            row.extend(threshold_fields(point));
            rows.push(row);
            for mut s in series_rows(cfg, &res) {
                s.insert(0, size.to_string());
                series.push(s);
            }
            points.push(point);
        }
        if let [q, h] = points[..] {
            report_reduction(&label, q, h, threshold);
        } else {
            let p = points[0];
            println!("{label}{}", p.map_or("threshold not reached".into(), |p| format!("{} CNOTs (p={})", p.cnot, p.layers)));
        }
    }
    let mut header = vec![
        "size",
        "n",
        "m",
        "encoding",
        "qubits",
        "cnot_per_layer",
        "rz_per_layer",
        "c_min",
        "c_max",
        "threshold",
    ];
    header.extend(THRESHOLD_FIELDS);
    out.write_csv("scaling.csv", &header, &rows)?;
    let mut header = vec!["size"];
    header.extend(SERIES_HEADER);
    out.write_csv("series.csv", &header, &series)?;
    finish_checked(out, cfg)
}
