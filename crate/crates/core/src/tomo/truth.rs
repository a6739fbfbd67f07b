use rand::Rng;
use serde::Serialize;

use super::process::QubitProcess;
use super::rng;
use crate::linalg::CMatrix;
use crate::sequences::GateUnitary;
use crate::{Error, Result, C64};

/// Output-word probabilities for every basis input. Row `i` is input word `i`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TruthTable {
    pub probabilities: Vec<Vec<f64>>,
    /// Shots per input row; `0` means exact probabilities.
    pub shots: u64,
    pub seed: u64,
}

/// Streams for truth-table rows live above the Monte-Carlo sample range.
const ROW_STREAM_OFFSET: u64 = 1 << 62;

pub fn simulate_truth_table(process: &QubitProcess, shots: u64, seed: u64) -> Result<TruthTable> {
    let d = process.dim();
    let mut probabilities = Vec::with_capacity(d);
    for input in 0..d {
        let mut rho = CMatrix::zeros(d, d);
        rho[(input, input)] = C64::new(1.0, 0.0);
        let out = process.apply(&rho)?;
        let exact: Vec<f64> = (0..d).map(|k| out[(k, k)].re.max(0.0)).collect();
        let row = if shots == 0 {
            exact
        } else {
            sample_row(&exact, shots, &mut rng::stream(seed, ROW_STREAM_OFFSET + input as u64))
        };
        probabilities.push(row);
    }
    Ok(TruthTable {
        probabilities,
        shots,
        seed,
    })
}

/// One multinomial draw of size `shots`, returned as frequencies.
fn sample_row<R: Rng>(probs: &[f64], shots: u64, rng: &mut R) -> Vec<f64> {
    let total: f64 = probs.iter().sum();
    let mut counts = vec![0u64; probs.len()];
    for _ in 0..shots {
        let mut u = rng.random::<f64>() * total;
        let mut pick = probs.len() - 1;
        for (k, &p) in probs.iter().enumerate() {
            if u < p {
                pick = k;
                break;
            }
            u -= p;
        }
        // Never land on a zero-probability outcome through rounding.
        if probs[pick] == 0.0 {
            pick = probs.iter().rposition(|&p| p > 0.0).unwrap_or(pick);
        }
        counts[pick] += 1;
    }
    counts.iter().map(|&c| c as f64 / shots as f64).collect()
}

impl TruthTable {
    pub fn dim(&self) -> usize {
        self.probabilities.len()
    }

    /// Most likely output word of `ideal` for each input.
    pub fn ideal_outputs(ideal: &GateUnitary) -> Vec<usize> {
        let m = ideal.matrix();
        (0..ideal.dim())
            .map(|col| {
                (0..ideal.dim())
                    .max_by(|&a, &b| m[(a, col)].norm_sqr().total_cmp(&m[(b, col)].norm_sqr()))
                    .unwrap_or(col)
            })
            .collect()
    }

    /// Mean over inputs of the probability of the ideal output word.
    pub fn mean_correct_probability(&self, ideal: &GateUnitary) -> Result<f64> {
        if ideal.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: ideal.dim(),
            });
        }
        let outputs = Self::ideal_outputs(ideal);
        Ok(outputs
            .iter()
            .enumerate()
            .map(|(row, &col)| self.probabilities[row][col])
            .sum::<f64>()
            / self.dim() as f64)
    }
}
