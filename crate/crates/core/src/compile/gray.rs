use std::collections::BTreeMap;

use super::Gate;

/// Reflected-binary walk over the nonempty subsets of `d` elements, as bit
/// masks: `k ^ (k >> 1)` for `k = 1 .. 2^d − 1`. Starts at `{0}` and ends at
/// `{d − 1}`; consecutive masks differ in one bit.
pub fn gray_sequence(d: usize) -> Vec<usize> {
    (1..1usize << d).map(|k| k ^ (k >> 1)).collect()
}

fn high_bit(mask: usize) -> usize {
    usize::BITS as usize - 1 - mask.leading_zeros() as usize
}

enum Step {
    Cnot(usize, usize),
    Rz { qubit: usize, mask: usize, angle: f64 },
}

/// Phase polynomial on `qubits` (sorted) by walking [`gray_sequence`].
///
/// `coefficients` is keyed by masks over positions in `qubits`. The parity
/// of the current subset lives on its highest qubit; every other qubit keeps
/// its input value, and the walk ends with all qubits restored. `RZ(2γJ)` is
/// emitted only for nonzero `J`. CNOT runs between two emitted rotations on
/// the same accumulator are then replaced by the direct symmetric-difference
/// controls when those number at most two, and adjacent identical CNOTs
/// cancel. A dense set costs `2^d − 2` CNOTs and `2^d − 1` rotations.
pub fn compile_dense_lattice(qubits: &[usize], coefficients: &BTreeMap<usize, f64>, gamma: f64) -> Vec<Gate> {
    let d = qubits.len();
    if coefficients.iter().all(|(&s, &j)| s == 0 || j == 0.0) {
        return Vec::new();
    }
    let mut steps = Vec::new();
    let mut current = 0usize;
    for g in gray_sequence(d) {
        if current != 0 {
            let (hi_old, hi_new) = (high_bit(current), high_bit(g));
            if hi_new > hi_old {
                steps.push(Step::Cnot(qubits[hi_old], qubits[hi_new]));
            } else {
                steps.push(Step::Cnot(qubits[high_bit(g ^ current)], qubits[hi_old]));
            }
        }
        current = g;
        if let Some(&j) = coefficients.get(&g) {
            if j != 0.0 {
                steps.push(Step::Rz {
                    qubit: qubits[high_bit(g)],
                    mask: g,
                    angle: 2.0 * gamma * j,
                });
            }
        }
    }

    let mut shortened: Vec<Gate> = Vec::with_capacity(steps.len());
    let mut segment: Vec<(usize, usize)> = Vec::new();
    let mut last: Option<(usize, usize)> = None;
    for step in steps {
        match step {
            Step::Cnot(c, t) => segment.push((c, t)),
            Step::Rz { qubit, mask, angle } => {
                if let Some((last_qubit, last_mask)) = last {
                    let diff = last_mask ^ mask;
                    if !segment.is_empty()
                        && last_qubit == qubit
                        && segment.iter().all(|&(_, t)| t == qubit)
                        && diff.count_ones() <= 2
                    {
                        segment = (0..d)
                            .filter(|a| diff >> a & 1 == 1)
                            .map(|a| (qubits[a], qubit))
                            .collect();
                    }
                }
                shortened.extend(segment.drain(..).map(|(control, target)| Gate::Cnot { control, target }));
                shortened.push(Gate::Rz(qubit, angle));
                last = Some((qubit, mask));
            }
        }
    }
    shortened.extend(segment.drain(..).map(|(control, target)| Gate::Cnot { control, target }));

    let mut out: Vec<Gate> = Vec::with_capacity(shortened.len());
    for gate in shortened {
        if matches!(gate, Gate::Cnot { .. }) && out.last() == Some(&gate) {
            out.pop();
        } else {
            out.push(gate);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn counts(gates: &[Gate]) -> (usize, usize) {
        let cnot = gates.iter().filter(|g| matches!(g, Gate::Cnot { .. })).count();
        (cnot, gates.len() - cnot)
    }

    #[test]
    fn sequence_is_a_hamiltonian_path() {
        assert_eq!(gray_sequence(1), vec![1]);
        assert_eq!(gray_sequence(2), vec![1, 3, 2]);
        for d in 1..=6 {
            let seq = gray_sequence(d);
            assert_eq!(seq.len(), (1 << d) - 1);
            assert_eq!(seq[0].count_ones(), 1);
            assert!(seq.windows(2).all(|w| (w[0] ^ w[1]).count_ones() == 1));
            let mut sorted = seq.clone();
            sorted.sort_unstable();
            sorted.dedup();
            assert_eq!(sorted.len(), seq.len());
        }
    }

    #[test]
    fn dense_counts() {
        for d in 1..=6 {
            let qubits: Vec<usize> = (0..d).collect();
            let coeffs: BTreeMap<usize, f64> = (1..1 << d).map(|s| (s, 1.0)).collect();
            let (cnot, rz) = counts(&compile_dense_lattice(&qubits, &coeffs, 0.3));
            assert_eq!((cnot, rz), ((1 << d) - 2, (1 << d) - 1), "d = {d}");
        }
    }

    #[test]
    fn empty_coefficients_emit_nothing() {
        assert!(compile_dense_lattice(&[0, 1], &BTreeMap::new(), 1.0).is_empty());
        assert!(compile_dense_lattice(&[0, 1], &BTreeMap::from([(0, 2.0)]), 1.0).is_empty());
    }
}
