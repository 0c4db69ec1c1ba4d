use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::split::Split;
use crate::compile::{Circuit, Gate};
use crate::encode::{diagonal_of, PauliPolynomial, DEFAULT_QUBIT_CAP};
use crate::error::{Error, Result};

/// Widest diagonal materialized at once when streaming expectations.
const STREAM_QUBITS: usize = 20;

/// `2^q` complex amplitudes; qubit `k` is bit `k` of the basis index.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amps: Vec<Complex64>,
}

fn check_width(q: usize) -> Result<()> {
    if q > DEFAULT_QUBIT_CAP {
        return Err(Error::QubitCap {
            qubits: q,
            cap: DEFAULT_QUBIT_CAP,
        });
    }
    Ok(())
}

#[inline]
fn rx_pairs(lo: &mut [Complex64], hi: &mut [Complex64], c: f64, s: f64) {
    for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
        let (x, y) = (*a, *b);
        *a = Complex64::new(c * x.re + s * y.im, c * x.im - s * y.re);
        *b = Complex64::new(s * x.im + c * y.re, c * y.im - s * x.re);
    }
}

/// `cos(θ/2) I − i sin(θ/2) X` on the qubit with pair distance `stride`.
#[inline]
fn rx_stride(amps: &mut [Complex64], stride: usize, c: f64, s: f64) {
    for block in amps.chunks_exact_mut(2 * stride) {
        let (lo, hi) = block.split_at_mut(stride);
        rx_pairs(lo, hi, c, s);
    }
}

/// `Σ_{k<n} f(k)` with four independent accumulators.
#[inline]
pub(crate) fn lane_sum<F: Fn(usize) -> f64>(n: usize, f: F) -> f64 {
    let mut acc = [0.0; 4];
    let whole = n / 4 * 4;
    for k in (0..whole).step_by(4) {
        acc[0] += f(k);
        acc[1] += f(k + 1);
        acc[2] += f(k + 2);
        acc[3] += f(k + 3);
    }
    for k in whole..n {
        acc[0] += f(k);
    }
    (acc[0] + acc[1]) + (acc[2] + acc[3])
}

impl StateVector {
    /// `|0…0⟩`.
    pub fn zero(num_qubits: usize) -> Result<Self> {
        Self::basis(num_qubits, 0)
    }

    pub fn basis(num_qubits: usize, b: usize) -> Result<Self> {
        check_width(num_qubits)?;
        let len = 1usize << num_qubits;
        if b >= len {
            return Err(Error::QubitIndex {
                index: b,
                num_qubits,
            });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); len];
        amps[b] = Complex64::new(1.0, 0.0);
        Ok(Self { num_qubits, amps })
    }

    /// `|+⟩^{⊗q}`.
    pub fn uniform(num_qubits: usize) -> Result<Self> {
        check_width(num_qubits)?;
        let len = 1usize << num_qubits;
        let a = Complex64::new(1.0 / (len as f64).sqrt(), 0.0);
        Ok(Self {
            num_qubits,
            amps: vec![a; len],
        })
    }

    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        if !amps.len().is_power_of_two() {
            return Err(Error::NotPowerOfTwo(amps.len()));
        }
        let num_qubits = amps.len().trailing_zeros() as usize;
        check_width(num_qubits)?;
        Ok(Self { num_qubits, amps })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(Complex64::norm_sqr).collect()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(Complex64::norm_sqr).sum()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum()
    }

    fn check_qubit(&self, q: usize) -> Result<()> {
        if q >= self.num_qubits {
            return Err(Error::QubitIndex {
                index: q,
                num_qubits: self.num_qubits,
            });
        }
        Ok(())
    }

    pub fn apply_gate(&mut self, gate: &Gate) -> Result<()> {
        match *gate {
            Gate::H(q) => {
                self.check_qubit(q)?;
                let r = std::f64::consts::FRAC_1_SQRT_2;
                for block in self.amps.chunks_exact_mut(2 << q) {
                    let (lo, hi) = block.split_at_mut(1 << q);
                    for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                        let (x, y) = (*a, *b);
                        *a = (x + y) * r;
                        *b = (x - y) * r;
                    }
                }
            }
            Gate::Rx(q, theta) => {
                self.check_qubit(q)?;
                let (s, c) = (theta / 2.0).sin_cos();
                rx_stride(&mut self.amps, 1 << q, c, s);
            }
            Gate::Rz(q, theta) => {
                self.check_qubit(q)?;
                let down = Complex64::from_polar(1.0, -theta / 2.0);
                let up = down.conj();
                for block in self.amps.chunks_exact_mut(2 << q) {
                    let (lo, hi) = block.split_at_mut(1 << q);
                    lo.iter_mut().for_each(|a| *a *= down);
                    hi.iter_mut().for_each(|a| *a *= up);
                }
            }
            Gate::Cnot { control, target } => {
                self.check_qubit(control)?;
                self.check_qubit(target)?;
                if control == target {
                    return Err(Error::InvalidPair(control, target));
                }
                let (cm, tm) = (1usize << control, 1usize << target);
                for b in 0..self.amps.len() {
                    if b & cm != 0 && b & tm == 0 {
                        self.amps.swap(b, b | tm);
                    }
                }
            }
        }
        Ok(())
    }

    /// `RX(2β)` on every qubit, i.e. `exp(−iβ Σ_k X_k)`.
    pub fn apply_mixer(&mut self, beta: f64) {
        let mut split = Split::from_state(self);
        split.mix(self.num_qubits, beta);
        *self = split.to_state();
    }

    /// Multiplies amplitude `b` by `exp(−iγ E_b)`.
    pub fn apply_diagonal_phase(&mut self, energies: &[f64], gamma: f64) -> Result<()> {
        if energies.len() != self.amps.len() {
            return Err(Error::WidthMismatch {
                expected: self.num_qubits,
                got: energies.len().trailing_zeros() as usize,
            });
        }
        for (a, &e) in self.amps.iter_mut().zip(energies) {
            let (s, c) = (gamma * e).sin_cos();
            *a *= Complex64::new(c, -s);
        }
        Ok(())
    }

    pub fn apply_global_phase(&mut self, phi: f64) {
        let f = Complex64::from_polar(1.0, phi);
        self.amps.iter_mut().for_each(|a| *a *= f);
    }
}

/// Applies the gates of `circuit` in order, then its recorded global phase.
pub fn run_circuit(circuit: &Circuit, initial: StateVector) -> Result<StateVector> {
    if circuit.num_qubits() != initial.num_qubits() {
        return Err(Error::WidthMismatch {
            expected: circuit.num_qubits(),
            got: initial.num_qubits(),
        });
    }
    let mut state = initial;
    for g in circuit.gates() {
        state.apply_gate(g)?;
    }
    if circuit.global_phase() != 0.0 {
        state.apply_global_phase(circuit.global_phase());
    }
    Ok(state)
}

/// `Σ_b |ψ_b|² E_b`. Above 20 qubits the diagonal is built in 2^20-entry
/// slices instead of all at once.
pub fn expectation(poly: &PauliPolynomial, state: &StateVector) -> Result<f64> {
    let q = state.num_qubits();
    if poly.num_qubits() != q {
        return Err(Error::WidthMismatch {
            expected: q,
            got: poly.num_qubits(),
        });
    }
    if q <= STREAM_QUBITS {
        let diag = diagonal_of(poly, DEFAULT_QUBIT_CAP)?;
        return Ok(state.amps.iter().zip(&diag).map(|(a, e)| a.norm_sqr() * e).sum());
    }
    let low = STREAM_QUBITS;
    let low_mask = (1usize << low) - 1;
    let masks: Vec<(usize, f64)> = poly
        .terms()
        .map(|(t, c)| (t.iter().fold(0usize, |m, &k| m | 1 << k), c))
        .collect();
    let mut total = 0.0;
    let mut table = vec![0.0; 1 << low];
    for (hi, chunk) in state.amps.chunks_exact(1 << low).enumerate() {
        table.iter_mut().for_each(|x| *x = 0.0);
        for &(mask, c) in &masks {
            let odd = ((mask >> low) & hi).count_ones() % 2 == 1;
            table[mask & low_mask] += if odd { -c } else { c };
        }
        crate::encode::wht_unnormalized_in_place(&mut table)?;
        total += chunk.iter().zip(&table).map(|(a, e)| a.norm_sqr() * e).sum::<f64>();
    }
    Ok(total)
}

/// `count` independent draws from `|ψ_b|²` by inverse-CDF lookup.
pub fn sample(state: &StateVector, count: usize, seed: u64) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_with(state, count, &mut rng)
}

pub fn sample_with<R: Rng>(state: &StateVector, count: usize, rng: &mut R) -> Vec<usize> {
    let mut cdf = Vec::with_capacity(state.amps.len());
    let mut acc = 0.0;
    for a in &state.amps {
        acc += a.norm_sqr();
        cdf.push(acc);
    }
    let last = cdf.len() - 1;
    (0..count)
        .map(|_| {
            let u = rng.gen::<f64>() * acc;
            cdf.partition_point(|&c| c <= u).min(last)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compile::compile_term_chain;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    #[test]
    fn empty_circuit_is_identity() {
        let s = StateVector::uniform(3).unwrap();
        assert_eq!(run_circuit(&Circuit::new(3), s.clone()).unwrap(), s);
        assert!(run_circuit(&Circuit::new(2), s).is_err());
    }

    #[test]
    fn hadamard_on_zero() {
        let mut s = StateVector::zero(1).unwrap();
        s.apply_gate(&Gate::H(0)).unwrap();
        for a in s.amplitudes() {
            assert!((a - Complex64::new(FRAC_1_SQRT_2, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn two_qubit_chain_phases() {
        let mut c = Circuit::new(2);
        c.extend(compile_term_chain(&[0, 1], 1.0, PI / 4.0)).unwrap();
        let phase = |b| run_circuit(&c, StateVector::basis(2, b).unwrap()).unwrap().amplitudes()[b];
        let p00 = phase(0b00);
        assert!((phase(0b11) / p00 - 1.0).norm() < 1e-12);
        assert!((phase(0b01) / p00 - Complex64::i()).norm() < 1e-12);
        assert!((p00 - Complex64::from_polar(1.0, -PI / 4.0)).norm() < 1e-12);
    }

    #[test]
    fn cnot_permutes_basis() {
        let mut s = StateVector::basis(3, 0b001).unwrap();
        s.apply_gate(&Gate::Cnot { control: 0, target: 2 }).unwrap();
        assert_eq!(s.amplitudes()[0b101], Complex64::new(1.0, 0.0));
        assert!(s.apply_gate(&Gate::Cnot { control: 1, target: 1 }).is_err());
        assert!(s.apply_gate(&Gate::H(3)).is_err());
    }

    #[test]
    fn mixer_equals_individual_rx() {
        let q = 17;
        let mut a = StateVector::uniform(q).unwrap();
        a.apply_diagonal_phase(&(0..1 << q).map(|b| (b % 7) as f64).collect::<Vec<_>>(), 0.3).unwrap();
        let mut b = a.clone();
        a.apply_mixer(0.37);
        for k in 0..q {
            b.apply_gate(&Gate::Rx(k, 0.74)).unwrap();
        }
        let diff: f64 = a.amplitudes().iter().zip(b.amplitudes()).map(|(x, y)| (x - y).norm()).sum();
        assert!(diff < 1e-10);
    }

    #[test]
    fn expectation_examples() {
        let mut poly = PauliPolynomial::new(2);
        poly.add_term([], 1.5).unwrap();
        poly.add_term([0], 2.0).unwrap();
        poly.add_term([0, 1], -1.0).unwrap();
        let u = StateVector::uniform(2).unwrap();
        assert!((expectation(&poly, &u).unwrap() - 1.5).abs() < 1e-12);
        let b = StateVector::basis(2, 0b01).unwrap();
        assert_eq!(expectation(&poly, &b).unwrap(), poly.energy(0b01));
    }

    #[test]
    fn streaming_expectation_matches_direct() {
        let q = 21;
        let mut poly = PauliPolynomial::new(q);
        poly.add_term([], 0.5).unwrap();
        poly.add_term([20], 1.0).unwrap();
        poly.add_term([3, 20], -2.0).unwrap();
        poly.add_term([0, 7], 0.25).unwrap();
        let b = (1 << 20) | (1 << 3) | 1;
        let s = StateVector::basis(q, b).unwrap();
        assert!((expectation(&poly, &s).unwrap() - poly.energy(b)).abs() < 1e-12);
    }

    #[test]
    fn sampling() {
        let s = StateVector::basis(3, 5).unwrap();
        assert!(sample(&s, 100, 1).iter().all(|&b| b == 5));
        let u = StateVector::uniform(2).unwrap();
        let n = 100_000;
        let draws = sample(&u, n, 42);
        let sigma = (n as f64 * 0.25 * 0.75).sqrt();
        for k in 0..4 {
            let f = draws.iter().filter(|&&b| b == k).count() as f64;
            assert!((f - n as f64 / 4.0).abs() < 5.0 * sigma);
        }
        assert_eq!(sample(&u, 50, 9), sample(&u, 50, 9));
    }
}
