//! Pulse programs, the built-in Toffoli sequence and its reference unitary.

pub mod format;

pub use format::{parse_angle, parse_sequence, serialize_sequence};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};
use std::fmt;

use crate::fockspace::{CompositeBasis, OperatorMatrix};
use crate::linalg::{self, CMatrix};
use crate::pulsegen::{self, NoiseConfig, PhysicalParams, PulseSpec};
use crate::{Error, Result, C64};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Segment {
    Encoding,
    ControlledNot,
    Decoding,
}

impl Segment {
    pub fn name(&self) -> &'static str {
        match self {
            Segment::Encoding => "encoding",
            Segment::ControlledNot => "controlled-not",
            Segment::Decoding => "decoding",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name.to_ascii_lowercase().as_str() {
            "encoding" => Some(Segment::Encoding),
            "controlled-not" | "controllednot" | "cnot" => Some(Segment::ControlledNot),
            "decoding" => Some(Segment::Decoding),
            _ => None,
        }
    }
}

impl fmt::Display for Segment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Inclusive 1-based pulse range belonging to a logical segment.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SegmentRange {
    pub segment: Segment,
    pub first: usize,
    pub last: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PulseSequence {
    pub name: String,
    pub num_ions: usize,
    pub pulses: Vec<PulseSpec>,
    pub segments: Vec<SegmentRange>,
}

impl PulseSequence {
    pub fn new(name: impl Into<String>, num_ions: usize, pulses: Vec<PulseSpec>) -> Result<Self> {
        let seq = Self {
            name: name.into(),
            num_ions,
            pulses,
            segments: Vec::new(),
        };
        seq.validate()?;
        Ok(seq)
    }

    pub fn empty(num_ions: usize) -> Self {
        Self {
            name: "empty".into(),
            num_ions,
            pulses: Vec::new(),
            segments: Vec::new(),
        }
    }

    pub fn with_segment(mut self, segment: Segment, first: usize, last: usize) -> Result<Self> {
        self.segments.push(SegmentRange {
            segment,
            first,
            last,
        });
        self.validate()?;
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.pulses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pulses.is_empty()
    }

    pub fn segment(&self, segment: Segment) -> Option<&SegmentRange> {
        self.segments.iter().find(|s| s.segment == segment)
    }

    /// Sub-program holding pulses `first..=last` (1-based).
    pub fn slice(&self, first: usize, last: usize) -> Result<Self> {
        if first == 0 || first > last || last > self.pulses.len() {
            return Err(Error::IndexOutOfRange(format!(
                "pulse range {first}..={last} outside 1..={}",
                self.pulses.len()
            )));
        }
        Ok(Self {
            name: format!("{}[{first}..={last}]", self.name),
            num_ions: self.num_ions,
            pulses: self.pulses[first - 1..last].to_vec(),
            segments: Vec::new(),
        })
    }

    pub fn segment_sequence(&self, segment: Segment) -> Result<Self> {
        let range = self
            .segment(segment)
            .ok_or_else(|| Error::InvalidParameter(format!("sequence has no {segment} segment")))?;
        self.slice(range.first, range.last)
    }

    pub fn validate(&self) -> Result<()> {
        if self.num_ions == 0 {
            return Err(Error::InvalidParameter("a sequence needs at least one ion".into()));
        }
        for p in &self.pulses {
            if p.ion == 0 || p.ion > self.num_ions {
                return Err(Error::InvalidIon {
                    ion: p.ion,
                    num_ions: self.num_ions,
                });
            }
        }
        for s in &self.segments {
            if s.first == 0 || s.first > s.last || s.last > self.pulses.len() {
                return Err(Error::IndexOutOfRange(format!(
                    "segment {} range {}..={} outside 1..={}",
                    s.segment,
                    s.first,
                    s.last,
                    self.pulses.len()
                )));
            }
        }
        Ok(())
    }
}

/// Row 7 of the published table prints the phase as a bare `1`. Candidates
/// are tried in this order against the reference unitary.
pub const PULSE7_PHASE_CANDIDATES: [f64; 4] = [1.0, 0.0, PI / 2.0, PI];

/// Phase of pulse 7 that satisfies the reference-unitary check.
pub const PULSE7_PHASE: f64 = PI;

/// The 15-pulse Toffoli program on ions (c1, c2, t) = (1, 2, 3).
pub fn toffoli_sequence() -> PulseSequence {
    toffoli_sequence_with_pulse7_phase(PULSE7_PHASE)
}

pub fn toffoli_sequence_with_pulse7_phase(pulse7_phase: f64) -> PulseSequence {
    let r2 = SQRT_2;
    let inv_r2 = FRAC_1_SQRT_2;
    let sb = PulseSpec::sideband;
    let c = PulseSpec::carrier;
    let pulses = vec![
        // encoding
        sb(1, PI, 1.5 * PI),
        sb(2, PI / r2, 1.5 * PI),
        sb(1, PI / (2.0 * r2), PI / 2.0),
        sb(1, PI, 0.0),
        sb(1, PI / (2.0 * r2), PI / 2.0),
        // motion-controlled NOT on the target
        c(3, PI / 2.0, 0.0),
        sb(3, PI / 2.0, pulse7_phase),
        sb(3, r2 * PI, PI / 2.0),
        sb(3, PI / 2.0, 0.0),
        c(3, PI / 2.0, (inv_r2 - 1.0) * PI),
        // decoding
        sb(1, PI / (2.0 * r2), (-0.5 + inv_r2) * PI),
        sb(1, PI, (-1.0 + inv_r2) * PI),
        sb(1, PI / (2.0 * r2), (-0.5 + inv_r2) * PI),
        sb(2, PI / r2, (0.5 + inv_r2) * PI),
        sb(1, PI, (0.5 + inv_r2) * PI),
    ];
    PulseSequence {
        name: "toffoli".into(),
        num_ions: 3,
        pulses,
        segments: vec![
            SegmentRange {
                segment: Segment::Encoding,
                first: 1,
                last: 5,
            },
            SegmentRange {
                segment: Segment::ControlledNot,
                first: 6,
                last: 10,
            },
            SegmentRange {
                segment: Segment::Decoding,
                first: 11,
                last: 15,
            },
        ],
    }
}

/// `U = U_last ··· U_1` over the composite space.
pub fn sequence_unitary(
    seq: &PulseSequence,
    params: &PhysicalParams,
    noise: &NoiseConfig,
    basis: &CompositeBasis,
) -> Result<OperatorMatrix> {
    if seq.num_ions != basis.num_qubits() {
        return Err(Error::DimensionMismatch {
            expected: basis.num_qubits(),
            actual: seq.num_ions,
        });
    }
    let steps = seq
        .pulses
        .par_iter()
        .map(|p| pulsegen::pulse_unitary(p, params, noise, basis))
        .collect::<Result<Vec<_>>>()?;
    let total = steps
        .iter()
        .fold(CMatrix::identity(basis.dimension(), basis.dimension()), |acc, u| {
            u.entries() * acc
        });
    OperatorMatrix::from_entries(*basis, total)
}

pub fn sequence_duration(seq: &PulseSequence, params: &PhysicalParams) -> f64 {
    seq.pulses.iter().map(|p| pulsegen::pulse_duration(p, params)).sum()
}

/// Square matrix over the qubit-word basis `|DDD⟩ … |SSS⟩`.
#[derive(Clone, Debug, PartialEq)]
pub struct GateUnitary {
    matrix: CMatrix,
}

impl GateUnitary {
    pub fn from_matrix(matrix: CMatrix) -> Result<Self> {
        let d = matrix.nrows();
        if d != matrix.ncols() || !d.is_power_of_two() || d < 2 {
            return Err(Error::DimensionMismatch {
                expected: d.next_power_of_two().max(2),
                actual: matrix.ncols(),
            });
        }
        Ok(Self { matrix })
    }

    pub fn identity(num_qubits: usize) -> Self {
        let d = 1 << num_qubits;
        Self {
            matrix: CMatrix::identity(d, d),
        }
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn num_qubits(&self) -> usize {
        self.dim().trailing_zeros() as usize
    }

    pub fn unitarity_error(&self) -> f64 {
        linalg::unitarity_error(&self.matrix)
    }

    /// `1 − ‖M‖²_F / d`; zero for a unitary, positive when amplitude leaves
    /// the restricted slice.
    pub fn norm_deficit(&self) -> f64 {
        let d = self.dim() as f64;
        1.0 - self.matrix.norm_squared() / d
    }

    /// `|Tr(self† · other)| / d`.
    pub fn trace_overlap(&self, other: &GateUnitary) -> f64 {
        linalg::hs_inner(&self.matrix, &other.matrix).norm() / self.dim() as f64
    }

    /// Max elementwise deviation after removing the best global phase.
    pub fn aligned_deviation(&self, other: &GateUnitary) -> f64 {
        let overlap = linalg::hs_inner(&self.matrix, &other.matrix);
        let phase = if overlap.norm() > 0.0 {
            overlap / overlap.norm()
        } else {
            C64::new(1.0, 0.0)
        };
        linalg::max_abs(&(self.matrix.map(|z| z * phase) - &other.matrix))
    }
}

/// Action on the `n = 0` slice: `⟨w, 0| U |w', 0⟩`.
pub fn restrict_to_qubits(u: &OperatorMatrix, basis: &CompositeBasis) -> GateUnitary {
    let q = basis.qubit_dim();
    let levels = basis.fock_levels();
    let entries = u.entries();
    GateUnitary {
        matrix: CMatrix::from_fn(q, q, |a, b| entries[(a * levels, b * levels)]),
    }
}

/// `exp(−iπ/(2√2)·σ_Z,t) · T`, where `T` is the identity on the first six
/// words and `[[0, i], [−i, 0]]` on `{|SSD⟩, |SSS⟩}`; `σ_Z = +1` on `|D⟩`.
pub fn reference_toffoli_unitary() -> GateUnitary {
    let i = C64::new(0.0, 1.0);
    let mut t = CMatrix::identity(8, 8);
    t[(6, 6)] = C64::new(0.0, 0.0);
    t[(7, 7)] = C64::new(0.0, 0.0);
    t[(6, 7)] = i;
    t[(7, 6)] = -i;
    let angle = PI / (2.0 * SQRT_2);
    let phase = CMatrix::from_fn(8, 8, |a, b| {
        if a != b {
            C64::new(0.0, 0.0)
        } else if a & 1 == 0 {
            C64::from_polar(1.0, -angle)
        } else {
            C64::from_polar(1.0, angle)
        }
    });
    GateUnitary { matrix: phase * t }
}

/// Result of checking a candidate program against the reference unitary.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UnitaryCheck {
    pub overlap: f64,
    pub deviation: f64,
    pub norm_deficit: f64,
}

pub fn check_against_reference(
    seq: &PulseSequence,
    params: &PhysicalParams,
    noise: &NoiseConfig,
    basis: &CompositeBasis,
) -> Result<UnitaryCheck> {
    let u = sequence_unitary(seq, params, noise, basis)?;
    let r = restrict_to_qubits(&u, basis);
    let reference = reference_toffoli_unitary();
    Ok(UnitaryCheck {
        overlap: reference.trace_overlap(&r),
        deviation: r.aligned_deviation(&reference),
        norm_deficit: r.norm_deficit(),
    })
}

/// Selected phase, if any, and every `(candidate, check)` tried.
pub type PhaseScan = (Option<f64>, Vec<(f64, UnitaryCheck)>);

/// Tries [`PULSE7_PHASE_CANDIDATES`] in order and returns the first phase whose
/// ideal sequence matches the reference unitary to `tol`, together with the
/// checks of every candidate tried.
pub fn resolve_pulse7_phase(tol: f64) -> Result<PhaseScan> {
    let basis = CompositeBasis::default();
    let params = PhysicalParams::default();
    let mut tried = Vec::new();
    for &phi in &PULSE7_PHASE_CANDIDATES {
        let seq = toffoli_sequence_with_pulse7_phase(phi);
        let check = check_against_reference(&seq, &params, &NoiseConfig::ideal(), &basis)?;
        tried.push((phi, check));
        if check.deviation < tol {
            return Ok((Some(phi), tried));
        }
    }
    Ok((None, tried))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fockspace::apply_unitary;

    #[test]
    fn toffoli_transcription() {
        let seq = toffoli_sequence();
        assert_eq!(seq.len(), 15);
        assert_eq!(seq.pulses[1], PulseSpec::sideband(2, PI / SQRT_2, 1.5 * PI));
        assert_eq!(
            seq.pulses[9],
            PulseSpec::carrier(3, PI / 2.0, (FRAC_1_SQRT_2 - 1.0) * PI)
        );
        assert_eq!(seq.pulses[7], PulseSpec::sideband(3, SQRT_2 * PI, PI / 2.0));
        let ranges: Vec<_> = seq.segments.iter().map(|s| (s.first, s.last)).collect();
        assert_eq!(ranges, vec![(1, 5), (6, 10), (11, 15)]);
        for (k, p) in seq.pulses.iter().enumerate() {
            let carrier = matches!(p.kind, crate::PulseKind::Carrier);
            assert_eq!(carrier, k == 5 || k == 9, "pulse {}", k + 1);
        }
    }

    #[test]
    fn literal_pulse7_phase_is_kept_available() {
        let seq = toffoli_sequence_with_pulse7_phase(1.0);
        assert_eq!(seq.pulses[6].phi, 1.0);
    }

    #[test]
    fn empty_sequence_is_identity() {
        let b = CompositeBasis::default();
        let u = sequence_unitary(
            &PulseSequence::empty(3),
            &PhysicalParams::default(),
            &NoiseConfig::ideal(),
            &b,
        )
        .unwrap();
        assert_eq!(u, b.identity());
        assert_eq!(sequence_duration(&PulseSequence::empty(3), &PhysicalParams::default()), 0.0);
        assert_eq!(restrict_to_qubits(&u, &b), GateUnitary::identity(3));
    }

    #[test]
    fn encoding_pulses_deposit_two_phonons_for_ss() {
        let b = CompositeBasis::default();
        let seq = toffoli_sequence().slice(1, 2).unwrap();
        let u = sequence_unitary(&seq, &PhysicalParams::default(), &NoiseConfig::ideal(), &b).unwrap();
        for t in 0..2 {
            let out = apply_unitary(&u, &b.basis_state(0b110 | t, 0).unwrap()).unwrap();
            assert!((out.population(t, 2).unwrap() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn reference_unitary_entries() {
        let u = reference_toffoli_unitary();
        assert!((u.matrix()[(6, 7)].norm() - 1.0).abs() < 1e-15);
        assert!((u.matrix()[(0, 0)].norm() - 1.0).abs() < 1e-15);
        assert!(u.unitarity_error() < 1e-15);
        assert!(u.norm_deficit().abs() < 1e-14);
    }

    #[test]
    fn duration_arithmetic() {
        let seq = toffoli_sequence();
        let p = PhysicalParams::default();
        let sideband_area: f64 = seq
            .pulses
            .iter()
            .filter(|p| p.kind == crate::PulseKind::BlueSideband)
            .map(|p| p.theta)
            .sum();
        assert!((sideband_area / PI - 9.2426).abs() < 1e-4);
        let t = sequence_duration(&seq, &p);
        assert!((t - 1.410e-3).abs() < 5e-6, "duration {t}");
        let fast = PhysicalParams {
            omega_sb: 2.0 * p.omega_sb,
            ..p
        };
        let carrier_part = 2.0 * (PI / 2.0) / p.omega_carrier;
        let halved = (t - carrier_part) / 2.0 + carrier_part;
        assert!((sequence_duration(&seq, &fast) - halved).abs() < 1e-15);
    }

    #[test]
    fn segment_accessors() {
        let seq = toffoli_sequence();
        let cnot = seq.segment_sequence(Segment::ControlledNot).unwrap();
        assert_eq!(cnot.len(), 5);
        assert_eq!(cnot.pulses[0], seq.pulses[5]);
        assert!(seq.slice(0, 3).is_err());
        assert!(seq.slice(3, 16).is_err());
        assert!(PulseSequence::empty(3).with_segment(Segment::Encoding, 1, 2).is_err());
    }

    #[test]
    fn ion_count_must_match_basis() {
        let b = CompositeBasis::new(2, 4).unwrap();
        assert!(sequence_unitary(
            &toffoli_sequence(),
            &PhysicalParams::default(),
            &NoiseConfig::ideal(),
            &b
        )
        .is_err());
    }
}
