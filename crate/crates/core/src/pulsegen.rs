//! Carrier and blue-sideband pulse Hamiltonians and their propagators.
//!
//! Rotating-frame convention (one ion, one two-level manifold):
//!
//! ```text
//! H = −(g/2)·r·(e^{iφ}|S-side⟩⟨D-side| + e^{−iφ}|D-side⟩⟨S-side|)
//! ```
//!
//! where the manifold is `{|D,n⟩, |S,n⟩}` for the carrier and
//! `{|D,n+1⟩, |S,n⟩}` for the blue sideband, `r = 1` (carrier) or `√(n+1)`
//! (sideband), and `g` is the Rabi frequency seen by that ion. With the pulse
//! area `θ = Ω·t` the propagator on a manifold, ordered (D-side, S-side), is
//!
//! ```text
//! [[cos(Θ/2),          i·e^{−iφ}·sin(Θ/2)],
//!  [i·e^{iφ}·sin(Θ/2), cos(Θ/2)         ]],   Θ = θ·r
//! ```
//!
//! i.e. `R(θ, φ) = exp[iθ/2·(e^{iφ}σ⁺ + e^{−iφ}σ⁻)]` with `σ⁺ = |S⟩⟨D|`.
//! The built-in Toffoli sequence reproduces its reference unitary exactly
//! under this convention.
//!
//! Noise: neighbours of the addressed ion see the same pulse at a reduced
//! Rabi frequency (`addressing_ratio`), and a mode-frequency offset adds
//! `δ·a†a` for the duration of every pulse.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::fockspace::{CompositeBasis, OperatorMatrix};
use crate::linalg::{self, CMatrix};
use crate::{Error, Result, C64};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PulseKind {
    /// `|S,n⟩ ↔ |D,n⟩`
    Carrier,
    /// `|S,n⟩ ↔ |D,n+1⟩`
    BlueSideband,
}

/// One laser pulse: transition, addressed ion (1-based), area and phase.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PulseSpec {
    pub kind: PulseKind,
    pub ion: usize,
    pub theta: f64,
    pub phi: f64,
}

impl PulseSpec {
    pub fn new(kind: PulseKind, ion: usize, theta: f64, phi: f64) -> Result<Self> {
        if !theta.is_finite() || theta < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "pulse area must be finite and non-negative, got {theta}"
            )));
        }
        if !phi.is_finite() {
            return Err(Error::InvalidParameter(format!("pulse phase must be finite, got {phi}")));
        }
        if ion == 0 {
            return Err(Error::InvalidIon { ion, num_ions: 0 });
        }
        Ok(Self {
            kind,
            ion,
            theta,
            phi,
        })
    }

    pub fn carrier(ion: usize, theta: f64, phi: f64) -> Self {
        Self {
            kind: PulseKind::Carrier,
            ion,
            theta,
            phi,
        }
    }

    pub fn sideband(ion: usize, theta: f64, phi: f64) -> Self {
        Self {
            kind: PulseKind::BlueSideband,
            ion,
            theta,
            phi,
        }
    }

    fn check_ion(&self, num_ions: usize) -> Result<()> {
        if self.ion == 0 || self.ion > num_ions {
            return Err(Error::InvalidIon {
                ion: self.ion,
                num_ions,
            });
        }
        Ok(())
    }
}

/// Rabi frequencies in rad/s.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhysicalParams {
    /// Blue-sideband Rabi frequency on the `n = 0` rung.
    pub omega_sb: f64,
    pub omega_carrier: f64,
}

impl Default for PhysicalParams {
    fn default() -> Self {
        Self {
            omega_sb: 2.0 * PI * 3300.0,
            omega_carrier: 2.0 * PI * 50_000.0,
        }
    }
}

impl PhysicalParams {
    pub fn from_hz(sideband_hz: f64, carrier_hz: f64) -> Result<Self> {
        let p = Self {
            omega_sb: 2.0 * PI * sideband_hz,
            omega_carrier: 2.0 * PI * carrier_hz,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.omega_sb > 0.0 && self.omega_sb.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "sideband Rabi frequency must be positive, got {}",
                self.omega_sb
            )));
        }
        if !(self.omega_carrier > 0.0 && self.omega_carrier.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "carrier Rabi frequency must be positive, got {}",
                self.omega_carrier
            )));
        }
        Ok(())
    }

    /// Rabi frequency that defines the pulse area for `kind`.
    pub fn rabi(&self, kind: PulseKind) -> f64 {
        match kind {
            PulseKind::Carrier => self.omega_carrier,
            PulseKind::BlueSideband => self.omega_sb,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoiseConfig {
    /// Neighbour-to-addressed Rabi frequency ratio ε.
    pub addressing_ratio: f64,
    /// Same ratio for ions two sites away.
    pub next_nearest_ratio: f64,
    /// COM mode frequency offset δ in rad/s.
    pub detuning: f64,
    /// Independent per-ion flip probability at initialization.
    pub qubit_prep_error: f64,
    /// Probability that the mode starts in `n = 1`.
    pub motional_prep_error: f64,
}

impl Default for NoiseConfig {
    fn default() -> Self {
        Self::ideal()
    }
}

impl NoiseConfig {
    pub fn ideal() -> Self {
        Self {
            addressing_ratio: 0.0,
            next_nearest_ratio: 0.0,
            detuning: 0.0,
            qubit_prep_error: 0.0,
            motional_prep_error: 0.0,
        }
    }

    pub fn with_addressing(mut self, ratio: f64) -> Self {
        self.addressing_ratio = ratio;
        self
    }

    pub fn with_detuning(mut self, detuning: f64) -> Self {
        self.detuning = detuning;
        self
    }

    pub fn with_detuning_hz(self, hz: f64) -> Self {
        self.with_detuning(2.0 * PI * hz)
    }

    pub fn is_ideal(&self) -> bool {
        *self == Self::ideal()
    }

    /// `true` when the pulse propagators equal the analytic block rotations.
    pub fn is_coherent_ideal(&self) -> bool {
        self.addressing_ratio == 0.0 && self.next_nearest_ratio == 0.0 && self.detuning == 0.0
    }

    pub fn validate(&self) -> Result<()> {
        let unit = |name: &str, v: f64| {
            if (0.0..=1.0).contains(&v) {
                Ok(())
            } else {
                Err(Error::InvalidParameter(format!("{name} must lie in [0, 1], got {v}")))
            }
        };
        unit("addressing_ratio", self.addressing_ratio)?;
        unit("next_nearest_ratio", self.next_nearest_ratio)?;
        unit("qubit_prep_error", self.qubit_prep_error)?;
        unit("motional_prep_error", self.motional_prep_error)?;
        if !self.detuning.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "detuning must be finite, got {}",
                self.detuning
            )));
        }
        Ok(())
    }

    fn coupling_ratio(&self, distance: usize) -> f64 {
        match distance {
            0 => 1.0,
            1 => self.addressing_ratio,
            2 => self.next_nearest_ratio,
            _ => 0.0,
        }
    }
}

/// Adds the coupling of ion `ion` with Rabi frequency `g` to `h`.
fn add_ion_coupling(
    h: &mut CMatrix,
    basis: &CompositeBasis,
    kind: PulseKind,
    ion: usize,
    g: f64,
    phi: f64,
) -> Result<()> {
    let mask = basis.ion_mask(ion)?;
    let n_max = basis.n_max();
    let raise = C64::from_polar(-0.5 * g, phi);
    for word in (0..basis.qubit_dim()).filter(|w| w & mask != 0) {
        let d_word = word ^ mask;
        for n in 0..=n_max {
            let (d_level, rung) = match kind {
                PulseKind::Carrier => (n, 1.0),
                PulseKind::BlueSideband => (n + 1, ((n + 1) as f64).sqrt()),
            };
            // |S, n_max⟩ has no sideband partner inside the truncation.
            if d_level > n_max {
                continue;
            }
            let s = basis.index(word, n)?;
            let d = basis.index(d_word, d_level)?;
            h[(s, d)] += raise * rung;
            h[(d, s)] += raise.conj() * rung;
        }
    }
    Ok(())
}

/// Rotating-frame Hamiltonian (rad/s) active during `spec`.
pub fn pulse_hamiltonian(
    spec: &PulseSpec,
    params: &PhysicalParams,
    noise: &NoiseConfig,
    basis: &CompositeBasis,
) -> Result<OperatorMatrix> {
    spec.check_ion(basis.num_qubits())?;
    let dim = basis.dimension();
    let omega = params.rabi(spec.kind);
    let mut h = CMatrix::zeros(dim, dim);
    for ion in 1..=basis.num_qubits() {
        let ratio = noise.coupling_ratio(ion.abs_diff(spec.ion));
        if ratio != 0.0 {
            add_ion_coupling(&mut h, basis, spec.kind, ion, omega * ratio, spec.phi)?;
        }
    }
    if noise.detuning != 0.0 {
        let levels = basis.fock_levels();
        for i in 0..dim {
            h[(i, i)] += C64::new(noise.detuning * (i % levels) as f64, 0.0);
        }
    }
    OperatorMatrix::from_entries(*basis, h)
}

/// `exp(−i·H·t)`.
pub fn propagator(h: &OperatorMatrix, t: f64) -> Result<OperatorMatrix> {
    let u = linalg::expm_hermitian(h.entries(), t)?;
    OperatorMatrix::from_entries(*h.basis(), u)
}

/// Pulse length in seconds. Sideband areas refer to the `n = 0` rung.
pub fn pulse_duration(spec: &PulseSpec, params: &PhysicalParams) -> f64 {
    spec.theta / params.rabi(spec.kind)
}

pub fn pulse_unitary(
    spec: &PulseSpec,
    params: &PhysicalParams,
    noise: &NoiseConfig,
    basis: &CompositeBasis,
) -> Result<OperatorMatrix> {
    let h = pulse_hamiltonian(spec, params, noise, basis)?;
    propagator(&h, pulse_duration(spec, params))
}

/// Noise-free propagator assembled from closed-form two-level rotations.
pub fn pulse_unitary_analytic(spec: &PulseSpec, basis: &CompositeBasis) -> Result<OperatorMatrix> {
    spec.check_ion(basis.num_qubits())?;
    let mask = basis.ion_mask(spec.ion)?;
    let n_max = basis.n_max();
    let mut u = CMatrix::identity(basis.dimension(), basis.dimension());
    let i = C64::new(0.0, 1.0);
    for word in (0..basis.qubit_dim()).filter(|w| w & mask != 0) {
        let d_word = word ^ mask;
        for n in 0..=n_max {
            let (d_level, rung) = match spec.kind {
                PulseKind::Carrier => (n, 1.0),
                PulseKind::BlueSideband => (n + 1, ((n + 1) as f64).sqrt()),
            };
            if d_level > n_max {
                continue;
            }
            let s = basis.index(word, n)?;
            let d = basis.index(d_word, d_level)?;
            let (sin, cos) = (0.5 * spec.theta * rung).sin_cos();
            u[(d, d)] = C64::new(cos, 0.0);
            u[(s, s)] = C64::new(cos, 0.0);
            u[(d, s)] = i * C64::from_polar(sin, -spec.phi);
            u[(s, d)] = i * C64::from_polar(sin, spec.phi);
        }
    }
    OperatorMatrix::from_entries(*basis, u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fockspace::apply_unitary;
    use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};

    fn basis() -> CompositeBasis {
        CompositeBasis::default()
    }

    #[test]
    fn carrier_commutes_with_phonon_number() {
        let b = basis();
        let spec = PulseSpec::carrier(2, PI / 2.0, 0.3);
        let h = pulse_hamiltonian(&spec, &PhysicalParams::default(), &NoiseConfig::ideal(), &b).unwrap();
        let c = h.commutator(&b.number_operator()).unwrap();
        assert!(c.max_abs() < 1e-12);
    }

    #[test]
    fn sideband_rungs_follow_sqrt_law() {
        let b = basis();
        let p = PhysicalParams::default();
        let spec = PulseSpec::sideband(1, PI, 0.0);
        let h = pulse_hamiltonian(&spec, &p, &NoiseConfig::ideal(), &b).unwrap();
        let rung = |n| h.element((0b000, n + 1), (0b100, n)).unwrap().norm();
        assert!((rung(1) / rung(0) - SQRT_2).abs() < 1e-14);
        assert!((rung(0) - p.omega_sb / 2.0).abs() < 1e-9);
    }

    #[test]
    fn hamiltonians_are_hermitian() {
        let b = basis();
        let noise = NoiseConfig::ideal().with_addressing(0.07).with_detuning_hz(100.0);
        for spec in [PulseSpec::carrier(1, 1.0, 2.0), PulseSpec::sideband(2, 1.0, -0.4)] {
            let h = pulse_hamiltonian(&spec, &PhysicalParams::default(), &noise, &b).unwrap();
            assert_eq!(h.entries(), &h.entries().adjoint());
        }
    }

    #[test]
    fn invalid_ion_is_rejected() {
        let b = basis();
        let spec = PulseSpec::carrier(4, PI, 0.0);
        let err = pulse_hamiltonian(&spec, &PhysicalParams::default(), &NoiseConfig::ideal(), &b);
        assert_eq!(err.unwrap_err(), Error::InvalidIon { ion: 4, num_ions: 3 });
        assert!(pulse_unitary_analytic(&PulseSpec::sideband(0, PI, 0.0), &b).is_err());
        assert!(PulseSpec::new(PulseKind::Carrier, 1, -1.0, 0.0).is_err());
    }

    #[test]
    fn durations() {
        let p = PhysicalParams::default();
        let sb = pulse_duration(&PulseSpec::sideband(1, PI, 0.0), &p);
        assert!((sb - 1.0 / 6600.0).abs() < 1e-15);
        assert!((sb * 1e6 - 151.515).abs() < 1e-3);
        assert_eq!(pulse_duration(&PulseSpec::sideband(1, 0.0, 0.0), &p), 0.0);
        let c = pulse_duration(&PulseSpec::carrier(1, PI / 2.0, 0.0), &p);
        assert!((c - 5.0e-6).abs() < 1e-15);
    }

    #[test]
    fn zero_area_is_identity() {
        let b = basis();
        let noise = NoiseConfig::ideal().with_addressing(0.07);
        for spec in [PulseSpec::carrier(1, 0.0, 1.0), PulseSpec::sideband(3, 0.0, 1.0)] {
            let u = pulse_unitary(&spec, &PhysicalParams::default(), &noise, &b).unwrap();
            assert_eq!(u, b.identity());
            assert_eq!(pulse_unitary_analytic(&spec, &b).unwrap(), b.identity());
        }
    }

    #[test]
    fn first_encoding_pulse_moves_s0_to_d1() {
        let b = basis();
        let u = pulse_unitary(
            &PulseSpec::sideband(1, PI, 1.5 * PI),
            &PhysicalParams::default(),
            &NoiseConfig::ideal(),
            &b,
        )
        .unwrap();
        for rest in 0..4 {
            let out = apply_unitary(&u, &b.basis_state(0b100 | rest, 0).unwrap()).unwrap();
            assert!((out.population(rest, 1).unwrap() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn partial_sideband_pulse_population() {
        let b = basis();
        let u = pulse_unitary(
            &PulseSpec::sideband(2, PI * FRAC_1_SQRT_2, 1.5 * PI),
            &PhysicalParams::default(),
            &NoiseConfig::ideal(),
            &b,
        )
        .unwrap();
        let out = apply_unitary(&u, &b.basis_state(0b010, 0).unwrap()).unwrap();
        let expected = (PI / (2.0 * SQRT_2)).sin().powi(2);
        assert!((out.population(0b000, 1).unwrap() - expected).abs() < 1e-12);
        assert!((expected - 0.8031).abs() < 1e-3);
    }

    #[test]
    fn top_rung_is_uncoupled() {
        let b = basis();
        let u = pulse_unitary_analytic(&PulseSpec::sideband(1, 1.3, 0.2), &b).unwrap();
        let top = b.index(0b100, b.n_max()).unwrap();
        let col = u.entries().column(top);
        for (i, z) in col.iter().enumerate() {
            let expected = if i == top { 1.0 } else { 0.0 };
            assert!((z - C64::new(expected, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn analytic_matches_two_level_formula_on_isolated_manifold() {
        // Carrier on ion 3 with all other ions in D: manifold {|DDD,0⟩, |DDS,0⟩}.
        let b = basis();
        let (theta, phi) = (1.1, 0.4);
        let u = pulse_unitary(
            &PulseSpec::carrier(3, theta, phi),
            &PhysicalParams::default(),
            &NoiseConfig::ideal(),
            &b,
        )
        .unwrap();
        let d = u.element((0b000, 0), (0b000, 0)).unwrap();
        let sd = u.element((0b001, 0), (0b000, 0)).unwrap();
        assert!((d - C64::new((theta / 2.0).cos(), 0.0)).norm() < 1e-12);
        assert!((sd - C64::new(0.0, 1.0) * C64::from_polar((theta / 2.0).sin(), phi)).norm() < 1e-12);
    }
}
