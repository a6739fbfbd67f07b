use nalgebra::DVector;
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use super::process::QubitProcess;
use super::rng;
use crate::sequences::GateUnitary;
use crate::{Error, Result, C64};

pub const DEFAULT_SAMPLES: usize = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FidelityReport {
    pub estimate: f64,
    pub std_error: f64,
    pub samples: usize,
    pub seed: u64,
    /// `(d·F_pro + 1)/(d + 1)`.
    pub analytic_crosscheck: f64,
}

/// Normalized vector of i.i.d. complex Gaussians: Haar-distributed on the
/// unit sphere of `C^dim`.
pub fn haar_state<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DVector<C64> {
    let v = DVector::from_fn(dim, |_, _| {
        C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let norm = v.norm();
    v.unscale(norm)
}

/// Monte-Carlo mean of `⟨ψ|U†E(|ψ⟩⟨ψ|)U|ψ⟩` over Haar-random `ψ`.
///
/// Sample `i` uses stream `(seed, i)` and the sum runs in index order, so the
/// report is identical for any thread count.
pub fn mean_gate_fidelity_mc(
    process: &QubitProcess,
    ideal: &GateUnitary,
    samples: usize,
    seed: u64,
) -> Result<FidelityReport> {
    if samples == 0 {
        return Err(Error::InvalidParameter("samples must be at least 1".into()));
    }
    let d = process.dim();
    if ideal.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            actual: ideal.dim(),
        });
    }
    let values: Vec<f64> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut r = rng::stream(seed, i as u64);
            let psi = haar_state(d, &mut r);
            let target = ideal.matrix() * &psi;
            process.transition_fidelity(&psi, &target)
        })
        .collect();
    let n = samples as f64;
    let mean = values.iter().sum::<f64>() / n;
    let std_error = if samples > 1 {
        let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
        (var / n).sqrt()
    } else {
        0.0
    };
    let f_pro = process.entanglement_fidelity(ideal)?;
    let df = d as f64;
    Ok(FidelityReport {
        estimate: mean,
        std_error,
        samples,
        seed,
        analytic_crosscheck: (df * f_pro + 1.0) / (df + 1.0),
    })
}
