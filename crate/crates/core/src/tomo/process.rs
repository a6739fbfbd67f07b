use crate::fockspace::CompositeBasis;
use crate::linalg::{self, CMatrix};
use crate::pulsegen::{NoiseConfig, PhysicalParams};
use crate::sequences::{self, GateUnitary, PulseSequence};
use crate::{Error, Result, C64};

/// Linear map on qubit density matrices, `E(ρ) = Σ_k K_k ρ K_k†`.
///
/// Built by preparing the input ⊗ motional state, applying the composite
/// propagator and tracing out the mode; preparation errors enter as weighted
/// branches. The Kraus form is exact, no sampling is involved.
#[derive(Clone, Debug)]
pub struct QubitProcess {
    num_qubits: usize,
    kraus: Vec<CMatrix>,
    /// Expected phonon population left after the gate for a maximally mixed
    /// qubit input.
    motional_excitation: f64,
}

impl QubitProcess {
    pub fn from_kraus(num_qubits: usize, kraus: Vec<CMatrix>) -> Result<Self> {
        let d = 1usize << num_qubits;
        if let Some(k) = kraus.iter().find(|k| k.nrows() != d || k.ncols() != d) {
            return Err(Error::DimensionMismatch {
                expected: d,
                actual: k.nrows().max(k.ncols()),
            });
        }
        Ok(Self {
            num_qubits,
            kraus,
            motional_excitation: 0.0,
        })
    }

    /// `ρ ↦ U ρ U†`.
    pub fn from_unitary(u: &GateUnitary) -> Self {
        Self {
            num_qubits: u.num_qubits(),
            kraus: vec![u.matrix().clone()],
            motional_excitation: 0.0,
        }
    }

    pub fn identity(num_qubits: usize) -> Self {
        Self::from_unitary(&GateUnitary::identity(num_qubits))
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        1 << self.num_qubits
    }

    pub fn kraus(&self) -> &[CMatrix] {
        &self.kraus
    }

    pub fn motional_excitation(&self) -> f64 {
        self.motional_excitation
    }

    /// `1 − Tr E(1/d)`: population lost from the qubit space.
    pub fn leakage(&self) -> f64 {
        let d = self.dim() as f64;
        1.0 - self.kraus.iter().map(|k| k.norm_squared()).sum::<f64>() / d
    }

    pub fn apply(&self, rho: &CMatrix) -> Result<CMatrix> {
        let d = self.dim();
        if rho.nrows() != d || rho.ncols() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                actual: rho.nrows(),
            });
        }
        Ok(self
            .kraus
            .iter()
            .fold(CMatrix::zeros(d, d), |acc, k| acc + k * rho * k.adjoint()))
    }

    /// `Σ_k |⟨φ|K_k|ψ⟩|²`, i.e. `⟨φ|E(|ψ⟩⟨ψ|)|φ⟩`.
    pub fn transition_fidelity(&self, psi: &nalgebra::DVector<C64>, phi: &nalgebra::DVector<C64>) -> f64 {
        self.kraus
            .iter()
            .map(|k| phi.dotc(&(k * psi)).norm_sqr())
            .sum()
    }

    /// `Σ_k |Tr(U†K_k)|² / d²`.
    pub fn entanglement_fidelity(&self, ideal: &GateUnitary) -> Result<f64> {
        if ideal.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: ideal.dim(),
            });
        }
        let d = self.dim() as f64;
        Ok(self
            .kraus
            .iter()
            .map(|k| linalg::hs_inner(ideal.matrix(), k).norm_sqr())
            .sum::<f64>()
            / (d * d))
    }

    /// Choi matrix `Σ_ab |a⟩⟨b| ⊗ E(|a⟩⟨b|)`.
    pub fn choi(&self) -> CMatrix {
        let d = self.dim();
        let mut j = CMatrix::zeros(d * d, d * d);
        for k in &self.kraus {
            // vec(K) = Σ_a |a⟩ ⊗ K|a⟩
            let v = CMatrix::from_fn(d * d, 1, |i, _| k[(i % d, i / d)]);
            j += &v * v.adjoint();
        }
        j
    }

    /// Frobenius distance between the Choi matrices of two maps.
    pub fn distance(&self, other: &QubitProcess) -> Result<f64> {
        if self.num_qubits != other.num_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: other.dim(),
            });
        }
        Ok((self.choi() - other.choi()).norm())
    }
}

/// Qubit-level map realized by `seq` under `noise`.
pub fn simulate_process(
    seq: &PulseSequence,
    params: &PhysicalParams,
    noise: &NoiseConfig,
    basis: &CompositeBasis,
) -> Result<QubitProcess> {
    noise.validate()?;
    params.validate()?;
    let u = sequences::sequence_unitary(seq, params, noise, basis)?;
    let nq = basis.num_qubits();
    let q = basis.qubit_dim();
    let levels = basis.fock_levels();
    let entries = u.entries();

    let motional = [(0usize, 1.0 - noise.motional_prep_error), (1, noise.motional_prep_error)];
    let p = noise.qubit_prep_error;
    let mut kraus = Vec::new();
    let mut excitation = 0.0;
    for &(n0, w_motion) in motional.iter().filter(|(_, w)| *w > 0.0) {
        // Rows ⟨a, n| U |b, n0⟩ for each final phonon number n.
        let blocks: Vec<CMatrix> = (0..levels)
            .map(|n| CMatrix::from_fn(q, q, |a, b| entries[(a * levels + n, b * levels + n0)]))
            .collect();
        excitation += w_motion
            * blocks[1..].iter().map(|b| b.norm_squared()).sum::<f64>()
            / q as f64;
        for flips in 0..q {
            let count = flips.count_ones() as i32;
            let w_flip = p.powi(count) * (1.0 - p).powi(nq as i32 - count);
            if w_flip == 0.0 {
                continue;
            }
            let amp = (w_motion * w_flip).sqrt();
            for block in &blocks {
                // K = amp · block · X^flips
                let k = CMatrix::from_fn(q, q, |a, b| block[(a, b ^ flips)] * amp);
                if k.norm_squared() > 0.0 {
                    kraus.push(k);
                }
            }
        }
    }
    Ok(QubitProcess {
        num_qubits: nq,
        kraus,
        motional_excitation: excitation,
    })
}
