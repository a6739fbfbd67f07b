//! Composite Hilbert space of `num_qubits` ion qubits and one truncated
//! harmonic-oscillator mode.
//!
//! Qubit words are bit patterns with ion 1 in the most significant bit and
//! `|S⟩ ↦ 1`, `|D⟩ ↦ 0`, so ascending words for three ions read
//! `|DDD⟩, |DDS⟩, …, |SSS⟩`. The Fock level varies fastest in the flat index:
//! `index = word · (n_max + 1) + n`.

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::linalg::{self, CMatrix};
use crate::{Error, Result, C64};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CompositeBasis {
    num_qubits: usize,
    n_max: usize,
}

impl Default for CompositeBasis {
    fn default() -> Self {
        Self {
            num_qubits: 3,
            n_max: 4,
        }
    }
}

impl CompositeBasis {
    /// The built-in sequences reach `n = 2`, so `n_max ≥ 2` is required.
    pub fn new(num_qubits: usize, n_max: usize) -> Result<Self> {
        if num_qubits == 0 || num_qubits > 8 {
            return Err(Error::InvalidParameter(format!(
                "num_qubits must be in 1..=8, got {num_qubits}"
            )));
        }
        if n_max < 2 {
            return Err(Error::InvalidParameter(format!(
                "n_max must be at least 2, got {n_max}"
            )));
        }
        Ok(Self { num_qubits, n_max })
    }

    pub fn three_ion(n_max: usize) -> Result<Self> {
        Self::new(3, n_max)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn fock_levels(&self) -> usize {
        self.n_max + 1
    }

    /// Dimension of the qubit register alone, `2^num_qubits`.
    pub fn qubit_dim(&self) -> usize {
        1 << self.num_qubits
    }

    pub fn dimension(&self) -> usize {
        self.qubit_dim() * self.fock_levels()
    }

    pub fn index(&self, word: usize, n: usize) -> Result<usize> {
        if word >= self.qubit_dim() {
            return Err(Error::IndexOutOfRange(format!(
                "qubit word {word:#b} has more than {} bits",
                self.num_qubits
            )));
        }
        if n > self.n_max {
            return Err(Error::IndexOutOfRange(format!(
                "Fock level {n} exceeds n_max = {}",
                self.n_max
            )));
        }
        Ok(word * self.fock_levels() + n)
    }

    /// Inverse of [`index`](Self::index).
    pub fn decompose(&self, index: usize) -> Result<(usize, usize)> {
        if index >= self.dimension() {
            return Err(Error::IndexOutOfRange(format!(
                "flat index {index} outside dimension {}",
                self.dimension()
            )));
        }
        Ok((index / self.fock_levels(), index % self.fock_levels()))
    }

    /// Bit mask of ion `ion` (1-based) inside a qubit word.
    pub fn ion_mask(&self, ion: usize) -> Result<usize> {
        if ion == 0 || ion > self.num_qubits {
            return Err(Error::InvalidIon {
                ion,
                num_ions: self.num_qubits,
            });
        }
        Ok(1 << (self.num_qubits - ion))
    }

    /// `true` when ion `ion` is in `|S⟩` within `word`.
    pub fn ion_in_s(&self, word: usize, ion: usize) -> Result<bool> {
        Ok(word & self.ion_mask(ion)? != 0)
    }

    /// Label such as `"SSD"` for a qubit word.
    pub fn word_label(&self, word: usize) -> String {
        (0..self.num_qubits)
            .map(|k| {
                if word & (1 << (self.num_qubits - 1 - k)) != 0 {
                    'S'
                } else {
                    'D'
                }
            })
            .collect()
    }

    /// Parse a label of `S`/`D` characters (or `1`/`0`) into a qubit word.
    pub fn word_from_label(&self, label: &str) -> Result<usize> {
        let chars: Vec<char> = label.chars().collect();
        if chars.len() != self.num_qubits {
            return Err(Error::IndexOutOfRange(format!(
                "label {label:?} must have {} characters",
                self.num_qubits
            )));
        }
        chars.iter().try_fold(0usize, |acc, c| match c {
            'S' | 's' | '1' => Ok((acc << 1) | 1),
            'D' | 'd' | '0' => Ok(acc << 1),
            other => Err(Error::IndexOutOfRange(format!(
                "unknown qubit symbol {other:?} in {label:?}"
            ))),
        })
    }

    pub fn basis_state(&self, word: usize, n: usize) -> Result<StateVector> {
        let mut amplitudes = DVector::zeros(self.dimension());
        amplitudes[self.index(word, n)?] = C64::new(1.0, 0.0);
        Ok(StateVector {
            basis: *self,
            amplitudes,
        })
    }

    pub fn identity(&self) -> OperatorMatrix {
        let d = self.dimension();
        OperatorMatrix {
            basis: *self,
            entries: CMatrix::identity(d, d),
        }
    }

    /// Phonon-number operator `a†a` on the composite space.
    pub fn number_operator(&self) -> OperatorMatrix {
        let d = self.dimension();
        let mut entries = CMatrix::zeros(d, d);
        for i in 0..d {
            entries[(i, i)] = C64::new((i % self.fock_levels()) as f64, 0.0);
        }
        OperatorMatrix {
            basis: *self,
            entries,
        }
    }
}

/// Flat index of `(word, n)` in `basis`.
pub fn basis_index(basis: &CompositeBasis, word: usize, n: usize) -> Result<usize> {
    basis.index(word, n)
}

pub fn basis_state(basis: &CompositeBasis, word: usize, n: usize) -> Result<StateVector> {
    basis.basis_state(word, n)
}

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    basis: CompositeBasis,
    amplitudes: DVector<C64>,
}

impl StateVector {
    pub fn from_amplitudes(basis: CompositeBasis, amplitudes: DVector<C64>) -> Result<Self> {
        if amplitudes.len() != basis.dimension() {
            return Err(Error::DimensionMismatch {
                expected: basis.dimension(),
                actual: amplitudes.len(),
            });
        }
        Ok(Self { basis, amplitudes })
    }

    pub fn basis(&self) -> &CompositeBasis {
        &self.basis
    }

    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.amplitudes
    }

    pub fn amplitude(&self, word: usize, n: usize) -> Result<C64> {
        Ok(self.amplitudes[self.basis.index(word, n)?])
    }

    pub fn population(&self, word: usize, n: usize) -> Result<f64> {
        Ok(self.amplitude(word, n)?.norm_sqr())
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    /// Population of Fock level `n`, summed over qubit words.
    pub fn phonon_population(&self, n: usize) -> f64 {
        let levels = self.basis.fock_levels();
        if n >= levels {
            return 0.0;
        }
        self.amplitudes
            .iter()
            .skip(n)
            .step_by(levels)
            .map(|z| z.norm_sqr())
            .sum()
    }

    pub fn to_density(&self) -> DensityMatrix {
        DensityMatrix {
            entries: &self.amplitudes * self.amplitudes.adjoint(),
        }
    }
}

/// Total population on the top retained rung `n = n_max`.
pub fn leakage_probability(psi: &StateVector) -> f64 {
    psi.phonon_population(psi.basis.n_max)
}

#[derive(Clone, Debug, PartialEq)]
pub struct OperatorMatrix {
    basis: CompositeBasis,
    entries: CMatrix,
}

impl OperatorMatrix {
    pub fn from_entries(basis: CompositeBasis, entries: CMatrix) -> Result<Self> {
        let d = basis.dimension();
        if entries.nrows() != d || entries.ncols() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                actual: entries.nrows().max(entries.ncols()),
            });
        }
        Ok(Self { basis, entries })
    }

    pub fn basis(&self) -> &CompositeBasis {
        &self.basis
    }

    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }

    pub fn into_entries(self) -> CMatrix {
        self.entries
    }

    pub fn element(&self, row: (usize, usize), col: (usize, usize)) -> Result<C64> {
        let r = self.basis.index(row.0, row.1)?;
        let c = self.basis.index(col.0, col.1)?;
        Ok(self.entries[(r, c)])
    }

    pub fn adjoint(&self) -> Self {
        Self {
            basis: self.basis,
            entries: self.entries.adjoint(),
        }
    }

    /// Operator product `self · rhs` (apply `rhs` first).
    pub fn compose(&self, rhs: &Self) -> Result<Self> {
        self.check_basis(&rhs.basis)?;
        Ok(Self {
            basis: self.basis,
            entries: &self.entries * &rhs.entries,
        })
    }

    pub fn commutator(&self, rhs: &Self) -> Result<Self> {
        self.check_basis(&rhs.basis)?;
        Ok(Self {
            basis: self.basis,
            entries: &self.entries * &rhs.entries - &rhs.entries * &self.entries,
        })
    }

    pub fn unitarity_error(&self) -> f64 {
        linalg::unitarity_error(&self.entries)
    }

    pub fn hermiticity_error(&self) -> f64 {
        linalg::hermiticity_error(&self.entries)
    }

    pub fn max_abs(&self) -> f64 {
        linalg::max_abs(&self.entries)
    }

    fn check_basis(&self, other: &CompositeBasis) -> Result<()> {
        if *other != self.basis {
            return Err(Error::DimensionMismatch {
                expected: self.basis.dimension(),
                actual: other.dimension(),
            });
        }
        Ok(())
    }
}

/// `ψ' = U ψ`.
pub fn apply_unitary(u: &OperatorMatrix, psi: &StateVector) -> Result<StateVector> {
    if u.basis != psi.basis {
        return Err(Error::DimensionMismatch {
            expected: u.basis.dimension(),
            actual: psi.basis.dimension(),
        });
    }
    Ok(StateVector {
        basis: psi.basis,
        amplitudes: &u.entries * &psi.amplitudes,
    })
}

/// Density matrix over either the composite space or the bare qubit register.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    entries: CMatrix,
}

impl DensityMatrix {
    pub fn from_entries(entries: CMatrix) -> Result<Self> {
        if entries.nrows() != entries.ncols() {
            return Err(Error::DimensionMismatch {
                expected: entries.nrows(),
                actual: entries.ncols(),
            });
        }
        Ok(Self { entries })
    }

    /// `|ψ⟩⟨ψ|` for a bare amplitude vector.
    pub fn from_pure(amplitudes: &DVector<C64>) -> Self {
        Self {
            entries: amplitudes * amplitudes.adjoint(),
        }
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }

    pub fn into_entries(self) -> CMatrix {
        self.entries
    }

    pub fn trace(&self) -> C64 {
        self.entries.trace()
    }

    pub fn hermiticity_error(&self) -> f64 {
        linalg::hermiticity_error(&self.entries)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        linalg::hermitian_eigenvalues(&self.entries)
            .first()
            .copied()
            .unwrap_or(0.0)
    }
}

/// `(ρ_q)_{ab} = Σ_n ρ_{(a,n),(b,n)}`.
pub fn partial_trace_motion(rho: &DensityMatrix, basis: &CompositeBasis) -> Result<DensityMatrix> {
    if rho.dim() != basis.dimension() {
        return Err(Error::DimensionMismatch {
            expected: basis.dimension(),
            actual: rho.dim(),
        });
    }
    let q = basis.qubit_dim();
    let levels = basis.fock_levels();
    let entries = CMatrix::from_fn(q, q, |a, b| {
        (0..levels)
            .map(|n| rho.entries[(a * levels + n, b * levels + n)])
            .sum()
    });
    Ok(DensityMatrix { entries })
}

/// `|⟨ψ|φ⟩|²`.
pub fn state_fidelity(psi: &StateVector, phi: &StateVector) -> Result<f64> {
    if psi.basis != phi.basis {
        return Err(Error::DimensionMismatch {
            expected: psi.basis.dimension(),
            actual: phi.basis.dimension(),
        });
    }
    Ok(psi.amplitudes.dotc(&phi.amplitudes).norm_sqr())
}

/// `⟨ψ|ρ|ψ⟩` for a bare amplitude vector against a density matrix of the same
/// dimension.
pub fn state_fidelity_mixed(psi: &DVector<C64>, rho: &DensityMatrix) -> Result<f64> {
    if psi.len() != rho.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            actual: psi.len(),
        });
    }
    Ok(psi.dotc(&(&rho.entries * psi)).re)
}
