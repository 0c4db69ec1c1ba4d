//! Exhaustive ground truth, decoding and the approximation ratio.

mod cache;

pub use cache::{content_hash, GroundTruthCache};

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cop::{Assignment, CopInstance};
use crate::encode::{Encoding, QubitLayout};
use crate::error::{Error, Result};
use crate::simulate::StateVector;

/// Largest search space [`brute_force`] accepts.
pub const SEARCH_LIMIT: f64 = 1e8;

/// Widest state the exact ratio enumerates by default.
pub const ENUMERATION_CAP: usize = 20;

/// Extremes of the objective over feasible assignments.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroundTruth {
    pub c_min: f64,
    pub c_max: f64,
    pub argmin: Assignment,
    pub argmax: Assignment,
    pub num_feasible: u64,
    pub feasibility: String,
}

impl GroundTruth {
    /// `r = (C_max − C) / (C_max − C_min)`, or 1 when the range is empty.
    pub fn rescaled(&self, c: f64) -> f64 {
        let range = self.c_max - self.c_min;
        if range > 0.0 {
            (self.c_max - c) / range
        } else {
            1.0
        }
    }

    /// Objective corresponding to an approximation ratio, infeasible
    /// outcomes counted at `C_max`.
    pub fn objective_at(&self, ratio: f64) -> f64 {
        self.c_min + ratio * (self.c_max - self.c_min)
    }
}

#[derive(Clone)]
struct Extremes {
    min: Option<(f64, Vec<usize>)>,
    max: Option<(f64, Vec<usize>)>,
    count: u64,
}

impl Extremes {
    fn empty() -> Self {
        Self {
            min: None,
            max: None,
            count: 0,
        }
    }

    fn observe(&mut self, c: f64, s: &[usize]) {
        self.count += 1;
        if self.min.as_ref().map_or(true, |(m, _)| c < *m) {
            self.min = Some((c, s.to_vec()));
        }
        if self.max.as_ref().map_or(true, |(m, _)| c > *m) {
            self.max = Some((c, s.to_vec()));
        }
    }

    // `other` covers assignments later in enumeration order, so ties keep `self`.
    fn merge(mut self, other: Self) -> Self {
        self.count += other.count;
        if let Some((c, s)) = other.min {
            if self.min.as_ref().map_or(true, |(m, _)| c < *m) {
                self.min = Some((c, s));
            }
        }
        if let Some((c, s)) = other.max {
            if self.max.as_ref().map_or(true, |(m, _)| c > *m) {
                self.max = Some((c, s));
            }
        }
        self
    }
}

/// Scans all `m^n` assignments; `C_min`/`C_max` are taken over those passing
/// `feasible`. Ties resolve to the first assignment in enumeration order.
pub fn brute_force<F>(inst: &CopInstance, feasible: F) -> Result<GroundTruth>
where
    F: Fn(&[usize]) -> bool + Sync,
{
    let size = inst.search_space_size();
    if size > SEARCH_LIMIT {
        return Err(Error::SearchSpace {
            size,
            limit: SEARCH_LIMIT,
        });
    }
    let scan = |prefix: Option<usize>| {
        let mut ext = Extremes::empty();
        let free = inst.n() - usize::from(prefix.is_some());
        let sub = CopInstance::new(free, inst.m()).expect("m is positive");
        for tail in sub.assignments() {
            let s: Vec<usize> = match prefix {
                Some(v) => std::iter::once(v).chain(tail.iter().copied()).collect(),
                None => tail,
            };
            if feasible(&s) {
                ext.observe(inst.evaluate_unchecked(&s), &s);
            }
        }
        ext
    };
    let ext = if inst.n() >= 2 && size >= 65536.0 {
        (0..inst.m())
            .into_par_iter()
            .map(|v| scan(Some(v)))
            .collect::<Vec<_>>()
            .into_iter()
            .fold(Extremes::empty(), Extremes::merge)
    } else {
        scan(None)
    };
    let (Some((c_min, argmin)), Some((c_max, argmax))) = (ext.min, ext.max) else {
        return Err(Error::NoFeasibleAssignment);
    };
    Ok(GroundTruth {
        c_min,
        c_max,
        argmin: argmin.into(),
        argmax: argmax.into(),
        num_feasible: ext.count,
        feasibility: inst.constraints().describe(),
    })
}

/// [`brute_force`] with the instance's own constraint predicate.
pub fn ground_truth(inst: &CopInstance) -> Result<GroundTruth> {
    brute_force(inst, |s| inst.is_feasible(s))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Decoded {
    Valid(Assignment),
    /// The first variable whose register is not a valid code word.
    Invalid { variable: usize },
}

/// QUBO registers must be exactly one-hot; HUBO registers must hold an
/// index below `m` (LSB first).
pub fn decode(bits: &[bool], layout: &QubitLayout) -> Decoded {
    debug_assert_eq!(bits.len(), layout.num_qubits());
    let mut values = Vec::with_capacity(layout.n());
    for i in 0..layout.n() {
        let reg = &bits[layout.register(i)];
        let value = match layout.encoding() {
            Encoding::Qubo => {
                let mut hot = reg.iter().enumerate().filter(|(_, &b)| b).map(|(v, _)| v);
                match (hot.next(), hot.next()) {
                    (Some(v), None) => Some(v),
                    _ => None,
                }
            }
            Encoding::Hubo => {
                let v = reg.iter().rev().fold(0, |acc, &b| acc << 1 | usize::from(b));
                (v < layout.m()).then_some(v)
            }
        };
        match value {
            Some(v) => values.push(v),
            None => return Decoded::Invalid { variable: i },
        }
    }
    Decoded::Valid(values.into())
}

/// [`decode`] for a basis-state index (qubit `q` is bit `q`).
pub fn decode_index(b: usize, layout: &QubitLayout) -> Decoded {
    let bits: Vec<bool> = (0..layout.num_qubits()).map(|q| b >> q & 1 == 1).collect();
    decode(&bits, layout)
}

/// Rescaled quality `r(b)` of every feasible basis state; everything else
/// (invalid codes, constraint violations) contributes zero.
#[derive(Debug, Clone)]
pub struct RatioTable {
    num_qubits: usize,
    entries: Vec<(usize, f64)>,
    lookup: HashMap<usize, f64>,
}

impl RatioTable {
    pub fn new(inst: &CopInstance, layout: &QubitLayout, truth: &GroundTruth) -> Result<Self> {
        let size = inst.search_space_size();
        if size > SEARCH_LIMIT {
            return Err(Error::SearchSpace {
                size,
                limit: SEARCH_LIMIT,
            });
        }
        let mut entries = Vec::new();
        for s in inst.assignments() {
            if inst.is_feasible(&s) {
                let b = layout.basis_index(&s)?;
                entries.push((b, truth.rescaled(inst.evaluate_unchecked(&s))));
            }
        }
        let lookup = entries.iter().copied().collect();
        Ok(Self {
            num_qubits: layout.num_qubits(),
            entries,
            lookup,
        })
    }

    pub fn num_feasible_states(&self) -> usize {
        self.entries.len()
    }

    /// `A = 1 − Σ_{b feasible} r(b) |ψ_b|²`.
    pub fn exact(&self, state: &StateVector) -> Result<f64> {
        if state.num_qubits() != self.num_qubits {
            return Err(Error::WidthMismatch {
                expected: self.num_qubits,
                got: state.num_qubits(),
            });
        }
        let amps = state.amplitudes();
        let weight: f64 = self.entries.iter().map(|&(b, r)| r * amps[b].norm_sqr()).sum();
        Ok((1.0 - weight).clamp(0.0, 1.0))
    }

    /// `A ≈ 1 − N^{−1} Σ_samples δ(b) r(b)`.
    pub fn sampled(&self, samples: &[usize]) -> f64 {
        if samples.is_empty() {
            return 1.0;
        }
        let weight: f64 = samples.iter().map(|b| self.lookup.get(b).copied().unwrap_or(0.0)).sum();
        1.0 - weight / samples.len() as f64
    }
}

/// Exact approximation ratio of `state`; limited to [`ENUMERATION_CAP`] qubits.
pub fn approximation_ratio_exact(
    state: &StateVector,
    inst: &CopInstance,
    layout: &QubitLayout,
    truth: &GroundTruth,
) -> Result<f64> {
    if layout.num_qubits() > ENUMERATION_CAP {
        return Err(Error::QubitCap {
            qubits: layout.num_qubits(),
            cap: ENUMERATION_CAP,
        });
    }
    RatioTable::new(inst, layout, truth)?.exact(state)
}

/// Monte-Carlo ratio from sampled basis-state indices.
pub fn approximation_ratio_sampled(
    samples: &[usize],
    inst: &CopInstance,
    layout: &QubitLayout,
    truth: &GroundTruth,
) -> Result<f64> {
    Ok(RatioTable::new(inst, layout, truth)?.sampled(samples))
}

/// One point of a quality-versus-resources series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdPoint {
    pub layers: usize,
    pub total_gates: usize,
    pub cnot: usize,
    pub single_qubit: usize,
    pub ratio: f64,
}

/// First point (series ordered by layers) with `ratio ≤ threshold`.
pub fn gates_to_threshold(series: &[ThresholdPoint], threshold: f64) -> Option<ThresholdPoint> {
    series.iter().find(|p| p.ratio <= threshold).copied()
}

/// Doubles `lambda` until the exhaustive minimum of `build(lambda)` over
/// all assignments is feasible. Returns the final weight and instance.
pub fn calibrate_penalty<F>(build: F, mut lambda: f64, max_doublings: usize) -> Result<(f64, CopInstance)>
where
    F: Fn(f64) -> Result<CopInstance>,
{
    for _ in 0..=max_doublings {
        let inst = build(lambda)?;
        let all = brute_force(&inst, |_| true)?;
        if inst.is_feasible(&all.argmin) {
            return Ok((lambda, inst));
        }
        lambda *= 2.0;
    }
    Err(Error::InvalidPenalty(lambda))
}
