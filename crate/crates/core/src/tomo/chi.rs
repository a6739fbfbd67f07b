use serde::Serialize;

use super::process::QubitProcess;
use crate::linalg::{self, CMatrix};
use crate::sequences::GateUnitary;
use crate::{Error, Result, C64};

/// Orthonormal Pauli string `P/√(2^N)` with its label, e.g. `"IXZ"`.
#[derive(Clone, Debug)]
pub struct PauliOperator {
    pub label: String,
    pub matrix: CMatrix,
}

fn single_paulis() -> [(char, CMatrix); 4] {
    let o = C64::new(0.0, 0.0);
    let l = C64::new(1.0, 0.0);
    let i = C64::new(0.0, 1.0);
    [
        ('I', CMatrix::from_row_slice(2, 2, &[l, o, o, l])),
        ('X', CMatrix::from_row_slice(2, 2, &[o, l, l, o])),
        ('Y', CMatrix::from_row_slice(2, 2, &[o, -i, i, o])),
        ('Z', CMatrix::from_row_slice(2, 2, &[l, o, o, -l])),
    ]
}

/// `4^N` Pauli strings in lexicographic (I, X, Y, Z) order, first qubit
/// leftmost.
pub fn pauli_basis(num_qubits: usize) -> Vec<PauliOperator> {
    let singles = single_paulis();
    let norm = 1.0 / ((1usize << num_qubits) as f64).sqrt();
    (0..1usize << (2 * num_qubits))
        .map(|m| {
            let mut label = String::with_capacity(num_qubits);
            let mut matrix = CMatrix::identity(1, 1);
            for q in 0..num_qubits {
                let digit = (m >> (2 * (num_qubits - 1 - q))) & 3;
                label.push(singles[digit].0);
                matrix = linalg::kron(&matrix, &singles[digit].1);
            }
            PauliOperator {
                label,
                matrix: matrix.scale(norm),
            }
        })
        .collect()
}

/// χ-matrix over the Pauli strings `P_m = √d·A_m`:
/// `E(ρ) = Σ_mn χ_mn P_m ρ P_n†`, so trace-preserving maps have `Tr χ = 1`.
#[derive(Clone, Debug, Serialize)]
pub struct ProcessMatrix {
    pub num_qubits: usize,
    pub labels: Vec<String>,
    #[serde(skip)]
    pub chi: CMatrix,
}

impl ProcessMatrix {
    pub fn trace(&self) -> f64 {
        self.chi.trace().re
    }

    pub fn hermiticity_error(&self) -> f64 {
        linalg::max_abs(&(&self.chi - self.chi.adjoint()))
    }

    pub fn min_eigenvalue(&self) -> f64 {
        linalg::hermitian_eigenvalues(&self.chi)
            .first()
            .copied()
            .unwrap_or(0.0)
    }

    pub fn abs_matrix(&self) -> Vec<Vec<f64>> {
        self.chi
            .row_iter()
            .map(|r| r.iter().map(|z| z.norm()).collect())
            .collect()
    }

    /// `Σ_mn χ_mn P_m ρ P_n†`.
    pub fn apply(&self, rho: &CMatrix) -> CMatrix {
        let basis = pauli_basis(self.num_qubits);
        let d = 1 << self.num_qubits;
        let rho = rho.scale(d as f64);
        let left: Vec<CMatrix> = basis.iter().map(|a| &a.matrix * &rho).collect();
        let mut out = CMatrix::zeros(d, d);
        for (m, lm) in left.iter().enumerate() {
            for (n, an) in basis.iter().enumerate() {
                let c = self.chi[(m, n)];
                if c.norm() > 0.0 {
                    out += (lm * an.matrix.adjoint()) * c;
                }
            }
        }
        out
    }
}

fn pauli_vectorization(num_qubits: usize) -> (Vec<String>, CMatrix) {
    let basis = pauli_basis(num_qubits);
    let d = 1 << num_qubits;
    // Column m holds vec(A_m) with vec(A)[a·d + r] = A[r, a].
    let v = CMatrix::from_fn(d * d, basis.len(), |i, m| basis[m].matrix[(i % d, i / d)]);
    (basis.into_iter().map(|p| p.label).collect(), v)
}

/// `χ = u u† / d` with `u_m = Tr(A_m† U)`.
pub fn chi_from_unitary(u: &GateUnitary) -> Result<ProcessMatrix> {
    let err = u.unitarity_error();
    if err > 1e-9 {
        return Err(Error::NotUnitary(err));
    }
    let num_qubits = u.num_qubits();
    let basis = pauli_basis(num_qubits);
    let coeffs = CMatrix::from_fn(basis.len(), 1, |m, _| linalg::hs_inner(&basis[m].matrix, u.matrix()));
    Ok(ProcessMatrix {
        num_qubits,
        labels: basis.into_iter().map(|p| p.label).collect(),
        chi: (&coeffs * coeffs.adjoint()).unscale((1usize << num_qubits) as f64),
    })
}

/// Single-qubit preparation states `|0⟩, |1⟩, |+⟩, |+i⟩`.
fn tomography_states() -> [CMatrix; 4] {
    let h = C64::new(0.5, 0.0);
    let o = C64::new(0.0, 0.0);
    let l = C64::new(1.0, 0.0);
    let hi = C64::new(0.0, 0.5);
    [
        CMatrix::from_row_slice(2, 2, &[l, o, o, o]),
        CMatrix::from_row_slice(2, 2, &[o, o, o, l]),
        CMatrix::from_row_slice(2, 2, &[h, h, h, h]),
        CMatrix::from_row_slice(2, 2, &[h, -hi, hi, h]),
    ]
}

/// Coefficients expressing `|a⟩⟨b|` (index `2a + b`) in the preparation states.
fn unit_coefficients() -> [[C64; 4]; 4] {
    let o = C64::new(0.0, 0.0);
    let l = C64::new(1.0, 0.0);
    let i = C64::new(0.0, 1.0);
    let up = C64::new(-0.5, -0.5);
    let dn = C64::new(-0.5, 0.5);
    [
        [l, o, o, o],
        // |0⟩⟨1| = ρ₊ + iρ₊ᵢ − (1+i)/2 (ρ₀ + ρ₁)
        [up, up, l, i],
        // |1⟩⟨0| = ρ₊ − iρ₊ᵢ − (1−i)/2 (ρ₀ + ρ₁)
        [dn, dn, l, -i],
        [o, l, o, o],
    ]
}

/// Linear-inversion tomography from the map's action on the `4^N` product
/// preparation states.
pub fn chi_from_process(process: &QubitProcess) -> Result<ProcessMatrix> {
    let nq = process.num_qubits();
    let d = 1usize << nq;
    let states = tomography_states();
    let coeff = unit_coefficients();

    let outputs: Vec<CMatrix> = (0..1usize << (2 * nq))
        .map(|k| {
            let input = (0..nq).fold(CMatrix::identity(1, 1), |acc, q| {
                linalg::kron(&acc, &states[(k >> (2 * (nq - 1 - q))) & 3])
            });
            process.apply(&input)
        })
        .collect::<Result<_>>()?;

    let mut choi = CMatrix::zeros(d * d, d * d);
    for a in 0..d {
        for b in 0..d {
            let mut image = CMatrix::zeros(d, d);
            for (k, out) in outputs.iter().enumerate() {
                let mut c = C64::new(1.0, 0.0);
                for q in 0..nq {
                    let shift = nq - 1 - q;
                    let unit = 2 * ((a >> shift) & 1) + ((b >> shift) & 1);
                    c *= coeff[unit][(k >> (2 * shift)) & 3];
                    if c.norm() == 0.0 {
                        break;
                    }
                }
                if c.norm() > 0.0 {
                    image += out * c;
                }
            }
            for r in 0..d {
                for s in 0..d {
                    choi[(a * d + r, b * d + s)] = image[(r, s)];
                }
            }
        }
    }

    let (labels, v) = pauli_vectorization(nq);
    let chi = (v.adjoint() * choi * v).unscale(d as f64);
    Ok(ProcessMatrix {
        num_qubits: nq,
        labels,
        chi: (&chi + chi.adjoint()).scale(0.5),
    })
}

/// `Re Tr(χ_ideal χ_exp)`.
pub fn process_fidelity(chi_exp: &ProcessMatrix, chi_ideal: &ProcessMatrix) -> Result<f64> {
    if chi_exp.num_qubits != chi_ideal.num_qubits {
        return Err(Error::DimensionMismatch {
            expected: chi_ideal.chi.nrows(),
            actual: chi_exp.chi.nrows(),
        });
    }
    Ok((&chi_ideal.chi * &chi_exp.chi).trace().re)
}
