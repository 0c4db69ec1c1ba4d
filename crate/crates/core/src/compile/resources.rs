use serde::{Deserialize, Serialize};

use super::{Circuit, Gate};
use crate::encode::{ceil_log2, Encoding};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct GateCounts {
    pub h: usize,
    pub rx: usize,
    pub rz: usize,
    pub cnot: usize,
}

impl GateCounts {
    pub fn single_qubit(&self) -> usize {
        self.h + self.rx + self.rz
    }

    pub fn total(&self) -> usize {
        self.single_qubit() + self.cnot
    }
}

pub fn count_resources(circuit: &Circuit) -> GateCounts {
    let mut c = GateCounts::default();
    for g in circuit.gates() {
        match g {
            Gate::H(_) => c.h += 1,
            Gate::Rx(..) => c.rx += 1,
            Gate::Rz(..) => c.rz += 1,
            Gate::Cnot { .. } => c.cnot += 1,
        }
    }
    c
}

/// Per-layer and total gate counts of a `layers`-deep QAOA circuit:
/// `total = layers × per-layer + hadamard_init`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResourceReport {
    pub num_qubits: usize,
    pub layers: usize,
    pub cnot_per_layer: usize,
    pub rz_per_layer: usize,
    pub rx_per_layer: usize,
    pub hadamard_init: usize,
    pub total_cnot: usize,
    pub total_single_qubit: usize,
    pub total_gates: usize,
}

impl ResourceReport {
    /// Report for `layers` repetitions of a cost layer with the given counts,
    /// one RX per qubit per layer and one initial Hadamard per qubit.
    pub fn new(num_qubits: usize, cost_layer: GateCounts, layers: usize) -> Self {
        Self::from_parts(num_qubits, cost_layer.cnot, cost_layer.rz, layers)
    }

    fn from_parts(num_qubits: usize, cnot: usize, rz: usize, layers: usize) -> Self {
        let single = layers * (rz + num_qubits) + num_qubits;
        Self {
            num_qubits,
            layers,
            cnot_per_layer: cnot,
            rz_per_layer: rz,
            rx_per_layer: num_qubits,
            hadamard_init: num_qubits,
            total_cnot: layers * cnot,
            total_single_qubit: single,
            total_gates: single + layers * cnot,
        }
    }

    pub fn with_layers(&self, layers: usize) -> Self {
        Self::from_parts(self.num_qubits, self.cnot_per_layer, self.rz_per_layer, layers)
    }

    pub fn gates_per_layer(&self) -> usize {
        self.cnot_per_layer + self.rz_per_layer + self.rx_per_layer
    }
}

/// Dense worst-case counts for one layer: every pair of variables fully
/// coupled. QUBO: `n·m` qubits, `2·C(n,2)·m²` CNOTs, `n·m + C(n,2)·m²` RZs;
/// HUBO: `n·⌈log2 m⌉` qubits, `C(n,2)·(2^{2d} − 2)` CNOTs and
/// `C(n,2)·(2^{2d} − 1)` RZs.
pub fn scaling_formulas(n: usize, m: usize, encoding: Encoding) -> ResourceReport {
    let pairs = n * n.saturating_sub(1) / 2;
    match encoding {
        Encoding::Qubo => ResourceReport::from_parts(n * m, 2 * pairs * m * m, n * m + pairs * m * m, 1),
        Encoding::Hubo => {
            let d = ceil_log2(m);
            let lattice = 1usize << (2 * d);
            ResourceReport::from_parts(n * d, pairs * (lattice - 2), pairs * (lattice - 1), 1)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compile::{compile_term_chain, qaoa_circuit, Strategy};
    use crate::cop::mkcs_benchmark_instance;
    use crate::encode::encode_hubo;

    #[test]
    fn empty_and_chain_counts() {
        assert_eq!(count_resources(&Circuit::new(3)), GateCounts::default());
        let mut c = Circuit::new(3);
        c.extend(compile_term_chain(&[0, 1, 2], 1.0, 1.0)).unwrap();
        let k = count_resources(&c);
        assert_eq!((k.cnot, k.rz), (4, 1));
    }

    #[test]
    fn qaoa_totals() {
        let (p, l) = encode_hubo(&mkcs_benchmark_instance(), 1.0).unwrap();
        let c = qaoa_circuit(&p, &[0.1; 3], &[0.2; 3], Strategy::Chain, &l.registers()).unwrap();
        let k = count_resources(&c);
        assert_eq!((k.cnot, k.rz, k.rx, k.h), (270, 81, 30, 10));
        let r = ResourceReport::new(10, GateCounts { cnot: 90, rz: 27, ..Default::default() }, 3);
        assert_eq!(r.total_gates, k.total());
        assert_eq!(r.total_cnot, 270);
        assert_eq!(r.gates_per_layer(), 127);
    }

    #[test]
    fn scaling_examples() {
        for e in [Encoding::Qubo, Encoding::Hubo] {
            assert_eq!(scaling_formulas(1, 4, e).cnot_per_layer, 0);
        }
        let q = scaling_formulas(5, 4, Encoding::Qubo);
        assert_eq!((q.num_qubits, q.cnot_per_layer, q.rz_per_layer), (20, 320, 180));
        let h = scaling_formulas(5, 4, Encoding::Hubo);
        assert_eq!((h.num_qubits, h.cnot_per_layer, h.rz_per_layer), (10, 140, 150));
    }

    #[test]
    fn affine_in_layers() {
        let r = ResourceReport::new(10, GateCounts { cnot: 60, rz: 27, ..Default::default() }, 1);
        let totals: Vec<usize> = (1..=5).map(|p| r.with_layers(p).total_gates).collect();
        assert!(totals.windows(2).all(|w| w[1] - w[0] == 97));
        assert_eq!(totals[0], 10 + 97);
    }
}
