//! Fixtures shared by the benchmarks.

use hubo_core::cop::{builtin_gap_benchmark, gap_instance, mkcs_benchmark_instance};
use hubo_core::encode::encode;
use hubo_core::{CopInstance, Encoding, PauliPolynomial, QubitLayout};

pub fn gap() -> CopInstance {
    gap_instance(&builtin_gap_benchmark(), None).expect("built-in tables are valid")
}

pub fn mkcs() -> CopInstance {
    mkcs_benchmark_instance()
}

pub fn encoded(inst: &CopInstance, encoding: Encoding) -> (PauliPolynomial, QubitLayout) {
    encode(inst, encoding, inst.suggested_penalty()).expect("benchmark instances encode")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_have_expected_widths() {
        assert_eq!(encoded(&gap(), Encoding::Qubo).1.num_qubits(), 20);
        assert_eq!(encoded(&mkcs(), Encoding::Hubo).1.num_qubits(), 10);
    }
}
