//! QAOA circuit synthesis: parity-network cost layers, X mixers and gate
//! accounting.

mod gray;
mod resources;

pub use gray::{compile_dense_lattice, gray_sequence};
pub use resources::{count_resources, scaling_formulas, GateCounts, ResourceReport};

use std::collections::{BTreeMap, HashMap};
use std::fmt::{self, Write as _};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::encode::PauliPolynomial;
use crate::error::{Error, Result};

/// Groups wider than this many qubits are never walked as a lattice.
pub const MAX_LATTICE_QUBITS: usize = 12;

/// `RZ(θ) = diag(e^{−iθ/2}, e^{iθ/2})`, `RX(θ) = exp(−iθX/2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Gate {
    H(usize),
    Rx(usize, f64),
    Rz(usize, f64),
    Cnot { control: usize, target: usize },
}

impl Gate {
    fn max_qubit(&self) -> usize {
        match *self {
            Gate::H(q) | Gate::Rx(q, _) | Gate::Rz(q, _) => q,
            Gate::Cnot { control, target } => control.max(target),
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Gate::H(q) => write!(f, "H {q}"),
            Gate::Rx(q, t) => write!(f, "RX {q} {t:.16e}"),
            Gate::Rz(q, t) => write!(f, "RZ {q} {t:.16e}"),
            Gate::Cnot { control, target } => write!(f, "CNOT {control} {target}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    /// Every term on its own CNOT ladder.
    Chain,
    /// Terms grouped per variable pair and walked in Gray-code order.
    #[default]
    Gray,
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strategy::Chain => "chain",
            Strategy::Gray => "gray",
        })
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "chain" => Ok(Strategy::Chain),
            "gray" => Ok(Strategy::Gray),
            other => Err(Error::Format(format!("unknown strategy `{other}`"))),
        }
    }
}

/// Gate list over `num_qubits` qubits. `global_phase` is the angle `φ` of the
/// dropped factor `e^{iφ}` contributed by identity terms.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Circuit {
    num_qubits: usize,
    gates: Vec<Gate>,
    global_phase: f64,
}

impl Circuit {
    pub fn new(num_qubits: usize) -> Self {
        Self {
            num_qubits,
            gates: Vec::new(),
            global_phase: 0.0,
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn global_phase(&self) -> f64 {
        self.global_phase
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        if gate.max_qubit() >= self.num_qubits {
            return Err(Error::QubitIndex {
                index: gate.max_qubit(),
                num_qubits: self.num_qubits,
            });
        }
        if let Gate::Cnot { control, target } = gate {
            if control == target {
                return Err(Error::InvalidPair(control, target));
            }
        }
        self.gates.push(gate);
        Ok(())
    }

    pub fn extend(&mut self, gates: impl IntoIterator<Item = Gate>) -> Result<()> {
        gates.into_iter().try_for_each(|g| self.push(g))
    }

    /// Appends another circuit of the same width, phases included.
    pub fn append(&mut self, other: &Circuit) -> Result<()> {
        if other.num_qubits != self.num_qubits {
            return Err(Error::WidthMismatch {
                expected: self.num_qubits,
                got: other.num_qubits,
            });
        }
        self.gates.extend_from_slice(&other.gates);
        self.global_phase += other.global_phase;
        Ok(())
    }

    /// `# qubits N` header, a `# global_phase φ` line when `φ ≠ 0`, then
    /// one gate per line.
    pub fn to_text(&self) -> String {
        let mut out = format!("# qubits {}\n", self.num_qubits);
        if self.global_phase != 0.0 {
            let _ = writeln!(out, "# global_phase {:.16e}", self.global_phase);
        }
        for g in &self.gates {
            let _ = writeln!(out, "{g}");
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut circuit: Option<Circuit> = None;
        for (n, raw) in text.lines().enumerate() {
            let line = raw.trim();
            let err = |message: String| Error::Parse { line: n + 1, message };
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('#') {
                let rest = rest.trim();
                if let Some(q) = rest.strip_prefix("qubits") {
                    let q = q.trim().parse().map_err(|_| err("bad qubit count".into()))?;
                    circuit = Some(Circuit::new(q));
                } else if let Some(phi) = rest.strip_prefix("global_phase") {
                    let c = circuit
                        .as_mut()
                        .ok_or_else(|| err("global phase before `# qubits` header".into()))?;
                    c.global_phase = phi.trim().parse().map_err(|_| err("bad global phase".into()))?;
                }
                continue;
            }
            let c = circuit
                .as_mut()
                .ok_or_else(|| err("gate before `# qubits` header".into()))?;
            let fields: Vec<&str> = line.split_whitespace().collect();
            let int = |s: &str| s.parse::<usize>().map_err(|_| err(format!("bad qubit `{s}`")));
            let angle = |s: &str| s.parse::<f64>().map_err(|_| err(format!("bad angle `{s}`")));
            let gate = match fields.as_slice() {
                ["H", q] => Gate::H(int(q)?),
                ["RX", q, t] => Gate::Rx(int(q)?, angle(t)?),
                ["RZ", q, t] => Gate::Rz(int(q)?, angle(t)?),
                ["CNOT", a, b] => Gate::Cnot {
                    control: int(a)?,
                    target: int(b)?,
                },
                _ => return Err(err(format!("unrecognized gate `{line}`"))),
            };
            c.push(gate).map_err(|e| err(e.to_string()))?;
        }
        circuit.ok_or_else(|| Error::Parse {
            line: 0,
            message: "missing `# qubits` header".into(),
        })
    }
}

/// `exp(−iγ J Z_T)`: CNOTs `T[k] → T[k+1]` gather the parity on the last
/// qubit, `RZ(2γJ)` rotates it and the ladder is undone. An empty `T` emits
/// nothing (its phase belongs to the caller).
pub fn compile_term_chain(term: &[usize], coefficient: f64, gamma: f64) -> Vec<Gate> {
    let Some(&last) = term.last() else {
        return Vec::new();
    };
    let ladder: Vec<Gate> = term
        .windows(2)
        .map(|w| Gate::Cnot {
            control: w[0],
            target: w[1],
        })
        .collect();
    let mut out = ladder.clone();
    out.push(Gate::Rz(last, 2.0 * gamma * coefficient));
    out.extend(ladder.into_iter().rev());
    out
}

fn cnot_count(gates: &[Gate]) -> usize {
    gates.iter().filter(|g| matches!(g, Gate::Cnot { .. })).count()
}

/// `exp(−iγH)` up to the global phase `−γ J_∅`, which is recorded on the
/// circuit. `registers` lists each variable's qubits; the Gray strategy
/// groups terms by the variable pair they touch (single-variable terms join
/// the lowest pair group containing that variable) and keeps a group's
/// lattice walk only when it needs strictly fewer CNOTs than chaining its
/// terms. Terms spanning more than two variables are chained.
pub fn compile_cost_layer(
    poly: &PauliPolynomial,
    gamma: f64,
    strategy: Strategy,
    registers: &[Vec<usize>],
) -> Circuit {
    let mut circuit = Circuit::new(poly.num_qubits());
    circuit.global_phase = -gamma * poly.constant();
    let gates = match strategy {
        Strategy::Chain => poly
            .non_identity_terms()
            .flat_map(|(t, c)| compile_term_chain(t, c, gamma))
            .collect(),
        Strategy::Gray => gray_layer(poly, gamma, registers),
    };
    circuit
        .extend(gates)
        .expect("polynomial terms index valid qubits");
    circuit
}

fn gray_layer(poly: &PauliPolynomial, gamma: f64, registers: &[Vec<usize>]) -> Vec<Gate> {
    let mut var_of: HashMap<usize, usize> = HashMap::new();
    let mut members: Vec<Vec<usize>> = registers.to_vec();
    for (v, reg) in registers.iter().enumerate() {
        for &q in reg {
            var_of.insert(q, v);
        }
    }
    for q in 0..poly.num_qubits() {
        if let std::collections::hash_map::Entry::Vacant(e) = var_of.entry(q) {
            e.insert(members.len());
            members.push(vec![q]);
        }
    }

    let mut groups: BTreeMap<Vec<usize>, Vec<(&[usize], f64)>> = BTreeMap::new();
    let mut singles = Vec::new();
    let mut wide = Vec::new();
    for (term, c) in poly.non_identity_terms() {
        let mut vars: Vec<usize> = term.iter().map(|q| var_of[q]).collect();
        vars.sort_unstable();
        vars.dedup();
        match vars.len() {
            1 => singles.push((vars[0], term, c)),
            2 => groups.entry(vars).or_default().push((term, c)),
            _ => wide.push((term, c)),
        }
    }
    for (v, term, c) in singles {
        let home = groups
            .keys()
            .find(|k| k.len() == 2 && k.contains(&v))
            .cloned()
            .unwrap_or_else(|| vec![v]);
        groups.entry(home).or_default().push((term, c));
    }

    let mut blocks: Vec<(usize, Vec<Gate>)> = Vec::new();
    for (vars, terms) in &groups {
        let mut qubits: Vec<usize> = vars.iter().flat_map(|&v| members[v].iter().copied()).collect();
        qubits.sort_unstable();
        let chain: Vec<Gate> = terms
            .iter()
            .flat_map(|&(t, c)| compile_term_chain(t, c, gamma))
            .collect();
        let mut best = chain;
        if qubits.len() <= MAX_LATTICE_QUBITS {
            let position: HashMap<usize, usize> = qubits.iter().enumerate().map(|(i, &q)| (q, i)).collect();
            let coeffs: BTreeMap<usize, f64> = terms
                .iter()
                .map(|&(t, c)| (t.iter().fold(0, |m, q| m | 1 << position[q]), c))
                .collect();
            let lattice = compile_dense_lattice(&qubits, &coeffs, gamma);
            if cnot_count(&lattice) < cnot_count(&best) {
                best = lattice;
            }
        }
        blocks.push((qubits[0], best));
    }
    for (t, c) in wide {
        blocks.push((t[0], compile_term_chain(t, c, gamma)));
    }
    blocks.sort_by_key(|(low, _)| *low);
    blocks.into_iter().flat_map(|(_, g)| g).collect()
}

/// Hadamards on every qubit, then per layer `k` the cost layer at `γ_k` and
/// `RX(2β_k)` on every qubit.
pub fn qaoa_circuit(
    poly: &PauliPolynomial,
    gammas: &[f64],
    betas: &[f64],
    strategy: Strategy,
    registers: &[Vec<usize>],
) -> Result<Circuit> {
    if gammas.len() != betas.len() || gammas.is_empty() {
        return Err(Error::ParameterLength {
            gammas: gammas.len(),
            betas: betas.len(),
        });
    }
    let q = poly.num_qubits();
    let mut circuit = Circuit::new(q);
    circuit.extend((0..q).map(Gate::H))?;
    for (&gamma, &beta) in gammas.iter().zip(betas) {
        circuit.append(&compile_cost_layer(poly, gamma, strategy, registers))?;
        circuit.extend((0..q).map(|k| Gate::Rx(k, 2.0 * beta)))?;
    }
    Ok(circuit)
}
