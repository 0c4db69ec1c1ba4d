//! QUBO (one-hot) and HUBO (binary) encodings of assignment-form problems
//! into diagonal Pauli-Z polynomials.

mod poly;
mod wht;

pub use poly::{diagonal_of, PauliPolynomial, DEFAULT_QUBIT_CAP};
pub use wht::{r_coefficient, wht, wht_unnormalized_in_place};

use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::cop::CopInstance;
use crate::error::{Error, Result};

/// Terms below this fraction of the largest coefficient are dropped.
pub const PRUNE_THRESHOLD: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Encoding {
    Qubo,
    Hubo,
}

impl fmt::Display for Encoding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Encoding::Qubo => "qubo",
            Encoding::Hubo => "hubo",
        })
    }
}

impl FromStr for Encoding {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "qubo" => Ok(Encoding::Qubo),
            "hubo" => Ok(Encoding::Hubo),
            other => Err(Error::Format(format!("unknown encoding `{other}`"))),
        }
    }
}

/// `⌈log2 m⌉`, with `ceil_log2(1) = 0`.
pub fn ceil_log2(m: usize) -> usize {
    m.next_power_of_two().trailing_zeros() as usize
}

/// Placement of problem variables on qubits. Variable `i` owns the
/// contiguous register `i·k .. (i+1)·k` with `k = m` (QUBO, one qubit per
/// value) or `k = ⌈log2 m⌉` (HUBO, bit `a` of the value index, LSB first).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct QubitLayout {
    encoding: Encoding,
    n: usize,
    m: usize,
    d: usize,
}

impl QubitLayout {
    pub fn new(encoding: Encoding, n: usize, m: usize) -> Self {
        Self {
            encoding,
            n,
            m,
            d: ceil_log2(m),
        }
    }

    pub fn encoding(&self) -> Encoding {
        self.encoding
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// Qubits per variable.
    pub fn register_width(&self) -> usize {
        match self.encoding {
            Encoding::Qubo => self.m,
            Encoding::Hubo => self.d,
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.n * self.register_width()
    }

    /// QUBO: qubit of `(variable, value)`; HUBO: qubit of `(variable, bit)`.
    pub fn qubit_of(&self, i: usize, k: usize) -> usize {
        debug_assert!(i < self.n && k < self.register_width());
        i * self.register_width() + k
    }

    pub fn variable_of(&self, qubit: usize) -> usize {
        qubit / self.register_width()
    }

    pub fn register(&self, i: usize) -> Range<usize> {
        let k = self.register_width();
        i * k..(i + 1) * k
    }

    pub fn registers(&self) -> Vec<Vec<usize>> {
        (0..self.n).map(|i| self.register(i).collect()).collect()
    }

    /// Canonical bitstring of an assignment, `bits[q]` for qubit `q`.
    pub fn encode_assignment(&self, s: &[usize]) -> Result<Vec<bool>> {
        if s.len() != self.n {
            return Err(Error::AssignmentLength {
                expected: self.n,
                got: s.len(),
            });
        }
        let mut bits = vec![false; self.num_qubits()];
        for (i, &v) in s.iter().enumerate() {
            if v >= self.m {
                return Err(Error::AssignmentValue {
                    index: i,
                    value: v,
                    m: self.m,
                });
            }
            match self.encoding {
                Encoding::Qubo => bits[self.qubit_of(i, v)] = true,
                Encoding::Hubo => {
                    for a in 0..self.d {
                        bits[self.qubit_of(i, a)] = v >> a & 1 == 1;
                    }
                }
            }
        }
        Ok(bits)
    }

    /// Basis-state index of an assignment (qubit `q` is bit `q`).
    pub fn basis_index(&self, s: &[usize]) -> Result<usize> {
        if self.num_qubits() >= usize::BITS as usize {
            return Err(Error::QubitCap {
                qubits: self.num_qubits(),
                cap: usize::BITS as usize - 1,
            });
        }
        let bits = self.encode_assignment(s)?;
        Ok(bits
            .iter()
            .enumerate()
            .fold(0, |b, (q, &x)| b | (usize::from(x) << q)))
    }
}

fn check_penalty(lambda: f64) -> Result<()> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::InvalidPenalty(lambda));
    }
    Ok(())
}

/// One qubit per (variable, value), `x → (1 − Z)/2`, plus
/// `λ (1 − Σ_v x_{i,v})²` per variable.
pub fn encode_qubo(inst: &CopInstance, lambda_onehot: f64) -> Result<(PauliPolynomial, QubitLayout)> {
    check_penalty(lambda_onehot)?;
    let layout = QubitLayout::new(Encoding::Qubo, inst.n(), inst.m());
    let mut poly = PauliPolynomial::new(layout.num_qubits());
    let (n, m) = (inst.n(), inst.m());

    let mut linear = vec![0.0; n * m];
    let mut quad: Vec<((usize, usize), f64)> = Vec::new();
    let mut constant = inst.constant();
    for i in 0..n {
        for v in 0..m {
            linear[layout.qubit_of(i, v)] += inst.linear(i, v);
        }
    }
    for ((i, j), block) in inst.quadratic_blocks() {
        for v in 0..m {
            for w in 0..m {
                let c = block[v * m + w];
                if c != 0.0 {
                    quad.push(((layout.qubit_of(i, v), layout.qubit_of(j, w)), c));
                }
            }
        }
    }
    let lambda = lambda_onehot;
    for i in 0..n {
        constant += lambda;
        for v in 0..m {
            linear[layout.qubit_of(i, v)] -= lambda;
            for w in v + 1..m {
                quad.push(((layout.qubit_of(i, v), layout.qubit_of(i, w)), 2.0 * lambda));
            }
        }
    }

    poly.add_canonical(Vec::new(), constant);
    for (q, &c) in linear.iter().enumerate() {
        poly.add_canonical(Vec::new(), c / 2.0);
        poly.add_canonical(vec![q], -c / 2.0);
    }
    for ((a, b), c) in quad {
        let (a, b) = if a < b { (a, b) } else { (b, a) };
        poly.add_canonical(Vec::new(), c / 4.0);
        poly.add_canonical(vec![a], -c / 4.0);
        poly.add_canonical(vec![b], -c / 4.0);
        poly.add_canonical(vec![a, b], c / 4.0);
    }
    poly.prune(PRUNE_THRESHOLD);
    Ok((poly, layout))
}

/// `⌈log2 m⌉` qubits per variable. Linear rows, padded with `lambda_invalid`
/// on the unused indices `m..2^d`, and zero-padded pair blocks are mapped to
/// Z-monomials by (two-sided) Walsh–Hadamard transforms; like terms are
/// merged globally before pruning.
pub fn encode_hubo(inst: &CopInstance, lambda_invalid: f64) -> Result<(PauliPolynomial, QubitLayout)> {
    let layout = QubitLayout::new(Encoding::Hubo, inst.n(), inst.m());
    let (n, m, d) = (inst.n(), inst.m(), layout.d());
    let size = 1usize << d;
    if size != m {
        check_penalty(lambda_invalid)?;
    }
    let mut poly = PauliPolynomial::new(layout.num_qubits());
    poly.add_canonical(Vec::new(), inst.constant());

    let subset = |i: usize, mask: usize| -> Vec<usize> {
        (0..d).filter(|a| mask >> a & 1 == 1).map(|a| layout.qubit_of(i, a)).collect()
    };

    for i in 0..n {
        let mut row = vec![lambda_invalid; size];
        row[..m].copy_from_slice(inst.linear_row(i));
        let coeffs = wht(&row)?;
        for (mask, c) in coeffs.into_iter().enumerate() {
            poly.add_canonical(subset(i, mask), c);
        }
    }
    let mut padded = vec![0.0; size * size];
    for ((i, j), block) in inst.quadratic_blocks() {
        if block.iter().all(|&c| c == 0.0) {
            continue;
        }
        padded.iter_mut().for_each(|x| *x = 0.0);
        for v in 0..m {
            padded[v * size..v * size + m].copy_from_slice(&block[v * m..(v + 1) * m]);
        }
        wht::wht_2d(&mut padded, size);
        for s1 in 0..size {
            for s2 in 0..size {
                let mut key = subset(i, s1);
                key.extend(subset(j, s2));
                poly.add_canonical(key, padded[s1 * size + s2]);
            }
        }
    }
    poly.prune(PRUNE_THRESHOLD);
    Ok((poly, layout))
}

/// Dispatches to [`encode_qubo`] or [`encode_hubo`].
pub fn encode(inst: &CopInstance, encoding: Encoding, lambda: f64) -> Result<(PauliPolynomial, QubitLayout)> {
    match encoding {
        Encoding::Qubo => encode_qubo(inst, lambda),
        Encoding::Hubo => encode_hubo(inst, lambda),
    }
}
