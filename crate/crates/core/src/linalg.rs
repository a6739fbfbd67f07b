//! Small dense complex linear-algebra helpers on top of `nalgebra`.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::{Error, Result, C64};

pub type CMatrix = DMatrix<C64>;

/// Tolerance used to reject non-Hermitian generators.
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Largest elementwise modulus.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// max |M − M†|, scaled by max(1, max|M|) so that Hamiltonians in rad/s
/// are judged on relative precision.
pub fn hermiticity_error(m: &CMatrix) -> f64 {
    let scale = max_abs(m).max(1.0);
    max_abs(&(m - m.adjoint())) / scale
}

/// max |U†U − 1|.
pub fn unitarity_error(u: &CMatrix) -> f64 {
    let n = u.nrows();
    max_abs(&(u.adjoint() * u - CMatrix::identity(n, n)))
}

/// `exp(−i·H·t)` for Hermitian `H` via eigendecomposition.
pub fn expm_hermitian(h: &CMatrix, t: f64) -> Result<CMatrix> {
    if h.nrows() != h.ncols() {
        return Err(Error::DimensionMismatch {
            expected: h.nrows(),
            actual: h.ncols(),
        });
    }
    let err = hermiticity_error(h);
    if err > HERMITIAN_TOL {
        return Err(Error::NotHermitian(err));
    }
    let n = h.nrows();
    if t == 0.0 {
        return Ok(CMatrix::identity(n, n));
    }
    // Symmetrize so the solver sees an exactly Hermitian input.
    let sym = (h + h.adjoint()).scale(0.5);
    let eig = SymmetricEigen::new(sym);
    let v = &eig.eigenvectors;
    let mut scaled = v.clone();
    for (j, &lambda) in eig.eigenvalues.iter().enumerate() {
        let phase = C64::from_polar(1.0, -lambda * t);
        let mut col = scaled.column_mut(j);
        col *= phase;
    }
    Ok(&scaled * v.adjoint())
}

/// Hermitian eigenvalues in ascending order.
pub fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    let sym = (m + m.adjoint()).scale(0.5);
    let mut vals: Vec<f64> = SymmetricEigen::new(sym).eigenvalues.iter().copied().collect();
    vals.sort_by(|a, b| a.total_cmp(b));
    vals
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Trace of `a† b` (the Hilbert–Schmidt inner product).
pub fn hs_inner(a: &CMatrix, b: &CMatrix) -> C64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn two_level_rotation_matches_closed_form() {
        // H = (Ω/2)(cos φ σx + sin φ σy); exp(−iHt) = cos(Ωt/2) − i sin(Ωt/2)(cos φ σx + sin φ σy)
        let omega = 2.3;
        let phi = 0.7;
        let t = 1.9;
        let h = CMatrix::from_row_slice(
            2,
            2,
            &[
                c(0.0, 0.0),
                C64::from_polar(omega / 2.0, -phi),
                C64::from_polar(omega / 2.0, phi),
                c(0.0, 0.0),
            ],
        );
        let u = expm_hermitian(&h, t).unwrap();
        let (s, co) = (omega * t / 2.0).sin_cos();
        let expected = CMatrix::from_row_slice(
            2,
            2,
            &[
                c(co, 0.0),
                c(0.0, -1.0) * C64::from_polar(s, -phi),
                c(0.0, -1.0) * C64::from_polar(s, phi),
                c(co, 0.0),
            ],
        );
        assert!(max_abs(&(u - expected)) < 1e-12);
    }

    #[test]
    fn zero_time_is_identity_and_inverse_time_undoes() {
        let h = CMatrix::from_fn(4, 4, |i, j| {
            if i == j {
                c(i as f64, 0.0)
            } else if i < j {
                c(0.3 * (i + j) as f64, 0.1 * j as f64)
            } else {
                c(0.3 * (i + j) as f64, -0.1 * i as f64)
            }
        });
        let id = CMatrix::identity(4, 4);
        assert_eq!(expm_hermitian(&h, 0.0).unwrap(), id);
        let fwd = expm_hermitian(&h, 0.8).unwrap();
        let back = expm_hermitian(&h, -0.8).unwrap();
        assert!(max_abs(&(fwd * back - id)) < 1e-10);
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        assert!(matches!(expm_hermitian(&m, 1.0), Err(Error::NotHermitian(_))));
    }
}
