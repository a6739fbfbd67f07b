//! Characterization of the qubit-level process: truth tables, χ-matrix
//! tomography, process fidelity and Haar-averaged mean gate fidelity.

mod chi;
mod fidelity;
mod process;
pub mod rng;
mod truth;

pub use chi::{chi_from_process, chi_from_unitary, pauli_basis, process_fidelity, PauliOperator, ProcessMatrix};
pub use fidelity::{haar_state, mean_gate_fidelity_mc, FidelityReport, DEFAULT_SAMPLES};
pub use process::{simulate_process, QubitProcess};
pub use truth::{simulate_truth_table, TruthTable};
