use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use super::split::Split;
use super::state::StateVector;
use crate::encode::{diagonal_of, PauliPolynomial, DEFAULT_QUBIT_CAP};
use crate::error::{Error, Result};

/// Distinct energies above which the phase lookup table is skipped.
const MAX_DISTINCT_ENERGIES: usize = 1 << 16;

/// Amplitudes the gradient may keep for intermediate states.
const MAX_CACHED_AMPLITUDES: usize = 1 << 24;

/// Layer angles `γ_1..γ_p`, `β_1..β_p`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QaoaParams {
    pub gammas: Vec<f64>,
    pub betas: Vec<f64>,
}

impl QaoaParams {
    pub fn new(gammas: Vec<f64>, betas: Vec<f64>) -> Result<Self> {
        if gammas.len() != betas.len() {
            return Err(Error::ParameterLength {
                gammas: gammas.len(),
                betas: betas.len(),
            });
        }
        Ok(Self { gammas, betas })
    }

    pub fn layers(&self) -> usize {
        self.gammas.len()
    }

    /// `[γ_1..γ_p, β_1..β_p]`.
    pub fn to_vec(&self) -> Vec<f64> {
        self.gammas.iter().chain(&self.betas).copied().collect()
    }

    pub fn from_vec(x: &[f64]) -> Result<Self> {
        if x.len() % 2 != 0 {
            return Err(Error::ParameterLength {
                gammas: x.len() - x.len() / 2,
                betas: x.len() / 2,
            });
        }
        let (g, b) = x.split_at(x.len() / 2);
        Ok(Self {
            gammas: g.to_vec(),
            betas: b.to_vec(),
        })
    }

    /// Start for `p + 1` layers from optimal `p`-layer angles:
    /// `θ_i = (i−1)/p · θ_{i−1} + (p−i+1)/p · θ_i` for `i = 1..p+1`, with
    /// `θ_0 = θ_{p+1} = 0`.
    pub fn interpolate(&self) -> Self {
        fn grow(v: &[f64]) -> Vec<f64> {
            let p = v.len();
            if p == 0 {
                return vec![0.0];
            }
            let at = |k: usize| if k >= 1 && k <= p { v[k - 1] } else { 0.0 };
            (1..=p + 1)
                .map(|i| ((i - 1) as f64 * at(i - 1) + (p + 1 - i) as f64 * at(i)) / p as f64)
                .collect()
        }
        Self {
            gammas: grow(&self.gammas),
            betas: grow(&self.betas),
        }
    }
}

struct PhaseTable {
    index: Vec<u32>,
    values: Vec<f64>,
}

impl PhaseTable {
    fn build(energies: &[f64]) -> Option<Self> {
        let mut values: Vec<f64> = energies.to_vec();
        values.sort_by(f64::total_cmp);
        values.dedup();
        if values.len() > MAX_DISTINCT_ENERGIES || values.len() * 4 > energies.len() {
            return None;
        }
        let index = energies
            .iter()
            .map(|e| values.binary_search_by(|v| v.total_cmp(e)).unwrap() as u32)
            .collect();
        Some(Self { index, values })
    }
}

/// Dense QAOA simulator for a fixed cost polynomial.
///
/// Angles are taken in normalized units: the cost is
/// `H' = (H − J_∅) / max|J_T|`, so `γ' = γ · max|J_T|`.
pub struct QaoaEvaluator {
    num_qubits: usize,
    energies: Vec<f64>,
    offset: f64,
    scale: f64,
    table: Option<PhaseTable>,
    pool: Mutex<Vec<Split>>,
}

impl QaoaEvaluator {
    pub fn new(poly: &PauliPolynomial) -> Result<Self> {
        let mut energies = diagonal_of(poly, DEFAULT_QUBIT_CAP)?;
        let offset = poly.constant();
        let max = poly.max_abs_coefficient();
        let scale = if max > 0.0 { max } else { 1.0 };
        for e in &mut energies {
            *e = (*e - offset) / scale;
        }
        let table = PhaseTable::build(&energies);
        Ok(Self {
            num_qubits: poly.num_qubits(),
            energies,
            offset,
            scale,
            table,
            pool: Mutex::new(Vec::new()),
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Normalized diagonal `E'_b`.
    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    /// Maps a normalized expectation back to the original energy scale.
    pub fn to_original(&self, value: f64) -> f64 {
        self.offset + self.scale * value
    }

    /// Converts normalized angles to angles for the unnormalized polynomial.
    pub fn to_original_params(&self, params: &QaoaParams) -> QaoaParams {
        QaoaParams {
            gammas: params.gammas.iter().map(|g| g / self.scale).collect(),
            betas: params.betas.clone(),
        }
    }

    pub fn from_original_params(&self, params: &QaoaParams) -> QaoaParams {
        QaoaParams {
            gammas: params.gammas.iter().map(|g| g * self.scale).collect(),
            betas: params.betas.clone(),
        }
    }

    fn phase(&self, psi: &mut Split, gamma: f64) {
        match &self.table {
            Some(t) => {
                let (sin, cos): (Vec<f64>, Vec<f64>) = t.values.iter().map(|&e| (gamma * e).sin_cos()).unzip();
                psi.phase_lookup(&t.index, &cos, &sin);
            }
            None => psi.phase(&self.energies, gamma),
        }
    }

    /// A buffer of the right length with unspecified contents.
    fn take(&self) -> Split {
        let reused = self.pool.lock().map(|mut p| p.pop()).unwrap_or(None);
        reused.unwrap_or_else(|| Split::uniform(self.num_qubits))
    }

    fn give(&self, buf: Split) {
        if let Ok(mut p) = self.pool.lock() {
            p.push(buf);
        }
    }

    fn evolve(&self, params: &QaoaParams) -> Split {
        let mut psi = self.take();
        psi.set_uniform();
        for (&g, &b) in params.gammas.iter().zip(&params.betas) {
            self.phase(&mut psi, g);
            psi.mix(self.num_qubits, b);
        }
        psi
    }

    /// `Π_l e^{−iβ_l B} e^{−iγ_l H'} |+⟩`.
    pub fn state(&self, params: &QaoaParams) -> Result<StateVector> {
        let psi = self.evolve(params);
        let state = psi.to_state();
        self.give(psi);
        Ok(state)
    }

    /// Normalized expectation `⟨H'⟩`.
    pub fn value(&self, params: &QaoaParams) -> Result<f64> {
        let psi = self.evolve(params);
        let value = psi.energy(&self.energies);
        self.give(psi);
        Ok(value)
    }

    /// Normalized expectation and its exact gradient, obtained by running
    /// the circuit backwards once with a co-state.
    pub fn value_and_gradient(&self, params: &QaoaParams) -> Result<(f64, QaoaParams)> {
        let p = params.layers();
        let q = self.num_qubits;
        if p << q > MAX_CACHED_AMPLITUDES {
            return self.value_and_gradient_uncached(params);
        }
        let mut psi = self.take();
        psi.set_uniform();
        let mut phased = Vec::with_capacity(p);
        for (&g, &b) in params.gammas.iter().zip(&params.betas) {
            self.phase(&mut psi, g);
            let mut keep = self.take();
            keep.copy_from(&psi);
            phased.push(keep);
            psi.mix(q, b);
        }
        let value = psi.energy(&self.energies);
        let mut lam = self.take();
        lam.set_times_energy(&psi, &self.energies);
        let mut grad = QaoaParams {
            gammas: vec![0.0; p],
            betas: vec![0.0; p],
        };
        for l in (0..p).rev() {
            lam.mix(q, -params.betas[l]);
            grad.betas[l] = 2.0 * lam.x_sum_im(&phased[l], q);
            grad.gammas[l] = 2.0 * lam.energy_inner_im(&phased[l], &self.energies);
            self.phase(&mut lam, -params.gammas[l]);
        }
        for buf in phased.into_iter().chain([psi, lam]) {
            self.give(buf);
        }
        Ok((value, grad))
    }

    /// Same as [`Self::value_and_gradient`] but reconstructs intermediate
    /// states by running the state backwards as well.
    fn value_and_gradient_uncached(&self, params: &QaoaParams) -> Result<(f64, QaoaParams)> {
        let p = params.layers();
        let q = self.num_qubits;
        let mut psi = self.evolve(params);
        let value = psi.energy(&self.energies);
        let mut lam = self.take();
        lam.set_times_energy(&psi, &self.energies);
        let mut grad = QaoaParams {
            gammas: vec![0.0; p],
            betas: vec![0.0; p],
        };
        for l in (0..p).rev() {
            grad.betas[l] = 2.0 * lam.x_sum_im(&psi, q);
            psi.mix(q, -params.betas[l]);
            lam.mix(q, -params.betas[l]);
            grad.gammas[l] = 2.0 * lam.energy_inner_im(&psi, &self.energies);
            self.phase(&mut psi, -params.gammas[l]);
            self.phase(&mut lam, -params.gammas[l]);
        }
        self.give(psi);
        self.give(lam);
        Ok((value, grad))
    }

    /// Central differences with step `h` in every angle.
    pub fn finite_difference_gradient(&self, params: &QaoaParams, h: f64) -> Result<QaoaParams> {
        let x = params.to_vec();
        let mut g = vec![0.0; x.len()];
        for k in 0..x.len() {
            let mut plus = x.clone();
            let mut minus = x.clone();
            plus[k] += h;
            minus[k] -= h;
            let fp = self.value(&QaoaParams::from_vec(&plus)?)?;
            let fm = self.value(&QaoaParams::from_vec(&minus)?)?;
            g[k] = (fp - fm) / (2.0 * h);
        }
        QaoaParams::from_vec(&g)
    }
}
