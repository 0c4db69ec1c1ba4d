//! Assignment-form combinatorial optimization on gate-model circuits.
//!
//! The pipeline runs [`cop`] instances through an [`encode`]r (one-hot QUBO or
//! binary HUBO) into a diagonal Pauli-Z polynomial, [`compile`]s the QAOA cost
//! layer into CNOT/RZ parity networks, [`simulate`]s QAOA on a dense
//! statevector and scores the result with the [`metrics`] module.

pub mod compile;
pub mod cop;
pub mod encode;
pub mod error;
pub mod metrics;
pub mod simulate;

pub use compile::{Circuit, Gate, ResourceReport, Strategy};
pub use cop::{Assignment, CopInstance, GapData};
pub use encode::{Encoding, PauliPolynomial, QubitLayout};
pub use error::{Error, Result};
pub use metrics::GroundTruth;
pub use simulate::{QaoaParams, StateVector};
