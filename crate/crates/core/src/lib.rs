//! Pulse-level simulation of a Toffoli gate on a string of three trapped-ion
//! qubits that share one center-of-mass phonon mode.
//!
//! The crate is organized bottom-up:
//!
//! * [`fockspace`] – the composite qubits ⊗ truncated-oscillator space, states,
//!   operators and the motional partial trace.
//! * [`pulsegen`] – carrier and blue-sideband Hamiltonians and propagators,
//!   with addressing crosstalk and mode-detuning noise.
//! * [`sequences`] – pulse programs, the built-in 15-pulse Toffoli sequence,
//!   its reference unitary, and the text file format for sequences.
//! * [`tomo`] – truth tables, χ-matrix process tomography, process fidelity
//!   and the Haar-averaged mean gate fidelity.

pub mod error;
pub mod fockspace;
pub mod linalg;
pub mod pulsegen;
pub mod sequences;
pub mod tomo;

pub use error::{Error, Result};
pub use fockspace::{CompositeBasis, DensityMatrix, OperatorMatrix, StateVector};
pub use pulsegen::{NoiseConfig, PhysicalParams, PulseKind, PulseSpec};
pub use sequences::{GateUnitary, PulseSequence, Segment};
pub use tomo::{FidelityReport, ProcessMatrix, QubitProcess, TruthTable};

/// Complex scalar used throughout the crate.
pub type C64 = num_complex::Complex64;
