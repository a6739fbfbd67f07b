//! Python module `toffoli`.
//!
//! Matrices cross the boundary as nested lists of Python `complex` values.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use toffoli_core::linalg::CMatrix;
use toffoli_core::sequences::{self, format};
use toffoli_core::tomo;
use toffoli_core::{CompositeBasis, C64};

fn err(e: toffoli_core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_rows(m: &CMatrix) -> Vec<Vec<num_complex_shim::Complex>> {
    m.row_iter()
        .map(|r| r.iter().map(|z| num_complex_shim::Complex(*z)).collect())
        .collect()
}

mod num_complex_shim {
    use pyo3::prelude::*;
    use pyo3::types::PyComplex;

    /// Wrapper converting to a Python `complex`.
    pub struct Complex(pub super::C64);

    impl<'py> IntoPyObject<'py> for Complex {
        type Target = PyComplex;
        type Output = Bound<'py, PyComplex>;
        type Error = std::convert::Infallible;

        fn into_pyobject(self, py: Python<'py>) -> Result<Self::Output, Self::Error> {
            Ok(PyComplex::from_doubles(py, self.0.re, self.0.im))
        }
    }
}

#[pyclass(name = "PhysicalParams", from_py_object)]
#[derive(Clone)]
struct PyPhysicalParams {
    inner: toffoli_core::PhysicalParams,
}

#[pymethods]
impl PyPhysicalParams {
    #[new]
    #[pyo3(signature = (omega_sb_hz = 3300.0, omega_carrier_hz = 50000.0))]
    fn new(omega_sb_hz: f64, omega_carrier_hz: f64) -> PyResult<Self> {
        Ok(Self {
            inner: toffoli_core::PhysicalParams::from_hz(omega_sb_hz, omega_carrier_hz).map_err(err)?,
        })
    }

    /// Rad/s.
    #[getter]
    fn omega_sb(&self) -> f64 {
        self.inner.omega_sb
    }

    #[getter]
    fn omega_carrier(&self) -> f64 {
        self.inner.omega_carrier
    }
}

#[pyclass(name = "NoiseConfig", from_py_object)]
#[derive(Clone)]
struct PyNoiseConfig {
    inner: toffoli_core::NoiseConfig,
}

#[pymethods]
impl PyNoiseConfig {
    #[new]
    #[pyo3(signature = (epsilon = 0.0, detuning_hz = 0.0, qubit_prep_error = 0.0, motional_prep_error = 0.0))]
    fn new(epsilon: f64, detuning_hz: f64, qubit_prep_error: f64, motional_prep_error: f64) -> PyResult<Self> {
        let inner = toffoli_core::NoiseConfig {
            qubit_prep_error,
            motional_prep_error,
            ..toffoli_core::NoiseConfig::ideal()
                .with_addressing(epsilon)
                .with_detuning_hz(detuning_hz)
        };
        inner.validate().map_err(err)?;
        Ok(Self { inner })
    }

    #[getter]
    fn epsilon(&self) -> f64 {
        self.inner.addressing_ratio
    }

    /// Rad/s.
    #[getter]
    fn detuning(&self) -> f64 {
        self.inner.detuning
    }

    fn __repr__(&self) -> String {
        format!("{:?}", self.inner)
    }
}

#[pyclass(name = "PulseSequence", from_py_object)]
#[derive(Clone)]
struct PyPulseSequence {
    inner: sequences::PulseSequence,
}

#[pymethods]
impl PyPulseSequence {
    /// Parses the text sequence format.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        Ok(Self {
            inner: format::parse_sequence(text).map_err(err)?,
        })
    }

    fn serialize(&self) -> String {
        format::serialize_sequence(&self.inner)
    }

    #[getter]
    fn name(&self) -> String {
        self.inner.name.clone()
    }

    #[getter]
    fn num_ions(&self) -> usize {
        self.inner.num_ions
    }

    /// `(kind, ion, theta, phi)` tuples.
    fn pulses(&self) -> Vec<(String, usize, f64, f64)> {
        self.inner
            .pulses
            .iter()
            .map(|p| {
                let kind = match p.kind {
                    toffoli_core::PulseKind::Carrier => "carrier",
                    toffoli_core::PulseKind::BlueSideband => "sb",
                };
                (kind.to_string(), p.ion, p.theta, p.phi)
            })
            .collect()
    }

    /// Seconds.
    #[pyo3(signature = (params = None))]
    fn duration(&self, params: Option<PyPhysicalParams>) -> f64 {
        let params = params.map(|p| p.inner).unwrap_or_default();
        sequences::sequence_duration(&self.inner, &params)
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }
}

#[pyclass(name = "ProcessMatrix")]
struct PyProcessMatrix {
    inner: tomo::ProcessMatrix,
}

#[pymethods]
impl PyProcessMatrix {
    #[getter]
    fn labels(&self) -> Vec<String> {
        self.inner.labels.clone()
    }

    fn trace(&self) -> f64 {
        self.inner.trace()
    }

    fn min_eigenvalue(&self) -> f64 {
        self.inner.min_eigenvalue()
    }

    fn abs(&self) -> Vec<Vec<f64>> {
        self.inner.abs_matrix()
    }

    fn entries(&self) -> Vec<Vec<num_complex_shim::Complex>> {
        to_rows(&self.inner.chi)
    }

    /// `Re Tr(χ_ideal χ)` against the reference Toffoli gate.
    fn fidelity(&self) -> PyResult<f64> {
        let ideal = tomo::chi_from_unitary(&sequences::reference_toffoli_unitary()).map_err(err)?;
        tomo::process_fidelity(&self.inner, &ideal).map_err(err)
    }
}

#[pyclass(name = "QubitProcess")]
struct PyQubitProcess {
    inner: tomo::QubitProcess,
}

#[pymethods]
impl PyQubitProcess {
    fn leakage(&self) -> f64 {
        self.inner.leakage()
    }

    fn motional_excitation(&self) -> f64 {
        self.inner.motional_excitation()
    }

    /// Process fidelity with the reference Toffoli gate.
    fn process_fidelity(&self) -> PyResult<f64> {
        self.inner
            .entanglement_fidelity(&sequences::reference_toffoli_unitary())
            .map_err(err)
    }

    fn chi(&self) -> PyResult<PyProcessMatrix> {
        Ok(PyProcessMatrix {
            inner: tomo::chi_from_process(&self.inner).map_err(err)?,
        })
    }

    /// Rows are inputs, columns outputs; `shots = 0` gives exact probabilities.
    #[pyo3(signature = (shots = 100, seed = 0))]
    fn truth_table(&self, shots: u64, seed: u64) -> PyResult<Vec<Vec<f64>>> {
        Ok(tomo::simulate_truth_table(&self.inner, shots, seed)
            .map_err(err)?
            .probabilities)
    }

    /// `(estimate, std_error, analytic_crosscheck)`.
    #[pyo3(signature = (samples = 10_000, seed = 0))]
    fn mean_gate_fidelity(&self, py: Python<'_>, samples: usize, seed: u64) -> PyResult<(f64, f64, f64)> {
        let reference = sequences::reference_toffoli_unitary();
        let r = py
            .detach(|| tomo::mean_gate_fidelity_mc(&self.inner, &reference, samples, seed))
            .map_err(err)?;
        Ok((r.estimate, r.std_error, r.analytic_crosscheck))
    }
}

#[pyfunction]
fn toffoli_sequence() -> PyPulseSequence {
    PyPulseSequence {
        inner: sequences::toffoli_sequence(),
    }
}

#[pyfunction]
fn reference_unitary() -> Vec<Vec<num_complex_shim::Complex>> {
    to_rows(sequences::reference_toffoli_unitary().matrix())
}

fn basis_for(seq: &PyPulseSequence, n_max: usize) -> PyResult<CompositeBasis> {
    CompositeBasis::new(seq.inner.num_ions, n_max).map_err(err)
}

/// `n = 0` block of the simulated propagator.
#[pyfunction]
#[pyo3(signature = (seq, params = None, noise = None, n_max = 4))]
fn gate_unitary(
    seq: &PyPulseSequence,
    params: Option<PyPhysicalParams>,
    noise: Option<PyNoiseConfig>,
    n_max: usize,
) -> PyResult<Vec<Vec<num_complex_shim::Complex>>> {
    let basis = basis_for(seq, n_max)?;
    let u = sequences::sequence_unitary(
        &seq.inner,
        &params.map(|p| p.inner).unwrap_or_default(),
        &noise.map(|n| n.inner).unwrap_or_default(),
        &basis,
    )
    .map_err(err)?;
    Ok(to_rows(sequences::restrict_to_qubits(&u, &basis).matrix()))
}

/// Global-phase-aligned max deviation from the reference Toffoli gate.
#[pyfunction]
#[pyo3(signature = (seq, params = None, noise = None, n_max = 4))]
fn unitary_deviation(
    seq: &PyPulseSequence,
    params: Option<PyPhysicalParams>,
    noise: Option<PyNoiseConfig>,
    n_max: usize,
) -> PyResult<f64> {
    let check = sequences::check_against_reference(
        &seq.inner,
        &params.map(|p| p.inner).unwrap_or_default(),
        &noise.map(|n| n.inner).unwrap_or_default(),
        &basis_for(seq, n_max)?,
    )
    .map_err(err)?;
    Ok(check.deviation)
}

#[pyfunction]
#[pyo3(signature = (seq, params = None, noise = None, n_max = 4))]
fn simulate_process(
    seq: &PyPulseSequence,
    params: Option<PyPhysicalParams>,
    noise: Option<PyNoiseConfig>,
    n_max: usize,
) -> PyResult<PyQubitProcess> {
    let inner = tomo::simulate_process(
        &seq.inner,
        &params.map(|p| p.inner).unwrap_or_default(),
        &noise.map(|n| n.inner).unwrap_or_default(),
        &basis_for(seq, n_max)?,
    )
    .map_err(err)?;
    Ok(PyQubitProcess { inner })
}

#[pymodule]
fn toffoli(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPhysicalParams>()?;
    m.add_class::<PyNoiseConfig>()?;
    m.add_class::<PyPulseSequence>()?;
    m.add_class::<PyQubitProcess>()?;
    m.add_class::<PyProcessMatrix>()?;
    m.add_function(wrap_pyfunction!(toffoli_sequence, m)?)?;
    m.add_function(wrap_pyfunction!(reference_unitary, m)?)?;
    m.add_function(wrap_pyfunction!(gate_unitary, m)?)?;
    m.add_function(wrap_pyfunction!(unitary_deviation, m)?)?;
    m.add_function(wrap_pyfunction!(simulate_process, m)?)?;
    Ok(())
}
