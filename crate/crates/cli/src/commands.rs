use std::path::Path;

use serde::Serialize;
use toffoli_core::sequences::{
    reference_toffoli_unitary, restrict_to_qubits, sequence_duration, sequence_unitary, PulseSequence,
};
use toffoli_core::tomo::{
    chi_from_process, chi_from_unitary, mean_gate_fidelity_mc, process_fidelity, simulate_process,
    simulate_truth_table, FidelityReport,
};
use toffoli_core::{CompositeBasis, GateUnitary, QubitProcess};

use crate::config::{OutputFormat, RunConfig, SequenceSource};
use crate::output::{self, num};
use crate::{CliError, CommandOutput};

/// Deviation threshold for the unitary verdict.
pub const UNITARY_TOL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum SweepAxis {
    Epsilon,
    Detuning,
}

impl std::str::FromStr for SweepAxis {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "epsilon" => Ok(SweepAxis::Epsilon),
            "detuning" => Ok(SweepAxis::Detuning),
            other => Err(CliError::Usage(format!(
                "unknown sweep axis {other:?} (expected epsilon or detuning)"
            ))),
        }
    }
}

struct Prepared {
    seq: PulseSequence,
    basis: CompositeBasis,
    reference: GateUnitary,
}

fn prepare(config: &RunConfig) -> Result<Prepared, CliError> {
    config.validate()?;
    let seq = config.load_sequence()?;
    if seq.num_ions != 3 {
        return Err(CliError::Usage(format!(
            "sequence acts on {} ions; the Toffoli reference needs 3",
            seq.num_ions
        )));
    }
    let basis = config.basis(&seq)?;
    Ok(Prepared {
        seq,
        basis,
        reference: reference_toffoli_unitary(),
    })
}

fn process(config: &RunConfig, p: &Prepared) -> Result<QubitProcess, CliError> {
    Ok(simulate_process(&p.seq, &config.physical, &config.noise, &p.basis)?)
}

fn labels(basis: &CompositeBasis) -> Vec<String> {
    (0..basis.qubit_dim()).map(|w| basis.word_label(w)).collect()
}

fn ok(body: String, summary: String) -> CommandOutput {
    CommandOutput {
        body,
        summary,
        passed: true,
    }
}

#[derive(Serialize)]
struct UnitarySummary {
    deviation: f64,
    overlap: f64,
    leakage: f64,
    verdict: &'static str,
}

fn unitary_summary(config: &RunConfig, p: &Prepared) -> Result<(GateUnitary, UnitarySummary), CliError> {
    let u = sequence_unitary(&p.seq, &config.physical, &config.noise, &p.basis)?;
    let r = restrict_to_qubits(&u, &p.basis);
    let deviation = r.aligned_deviation(&p.reference);
    let leakage = r.norm_deficit().max(0.0);
    let pass = deviation < UNITARY_TOL && leakage <= UNITARY_TOL;
    let summary = UnitarySummary {
        deviation,
        overlap: p.reference.trace_overlap(&r),
        leakage,
        verdict: if pass { "PASS" } else { "FAIL" },
    };
    Ok((r, summary))
}

/// Simulated `n = 0` restriction next to the reference unitary.
pub fn cmd_unitary(config: &RunConfig) -> Result<CommandOutput, CliError> {
    #[derive(Serialize)]
    struct Result_<'a> {
        labels: Vec<String>,
        simulated: Vec<Vec<[f64; 2]>>,
        reference: Vec<Vec<[f64; 2]>>,
        #[serde(flatten)]
        summary: &'a UnitarySummary,
        tolerance: f64,
        duration_s: f64,
    }

    let p = prepare(config)?;
    let (r, summary) = unitary_summary(config, &p)?;
    let labels = labels(&p.basis);
    let body = match config.format {
        OutputFormat::Json => output::json(
            config,
            &Result_ {
                labels: labels.clone(),
                simulated: output::complex_rows(r.matrix()),
                reference: output::complex_rows(p.reference.matrix()),
                summary: &summary,
                tolerance: UNITARY_TOL,
                duration_s: sequence_duration(&p.seq, &config.physical),
            },
        )?,
        OutputFormat::Csv => {
            let mut header = vec!["matrix".to_string(), "row".to_string()];
            header.extend(output::complex_header(&labels));
            let mut rows = Vec::new();
            for (name, m) in [("simulated", r.matrix()), ("reference", p.reference.matrix())] {
                for (i, l) in labels.iter().enumerate() {
                    let mut row = vec![name.to_string(), l.clone()];
                    row.extend(output::complex_cells(m, i));
                    rows.push(row);
                }
            }
            output::csv(&header, &rows)?
        }
    };
    let line = format!(
        "deviation {:.3e}  leakage {:.3e}  {}",
        summary.deviation, summary.leakage, summary.verdict
    );
    Ok(CommandOutput {
        body,
        summary: line,
        passed: !config.noise.is_ideal() || summary.verdict == "PASS",
    })
}

/// Output-word probabilities for every basis input.
pub fn cmd_truth_table(config: &RunConfig) -> Result<CommandOutput, CliError> {
    #[derive(Serialize)]
    struct Result_ {
        labels: Vec<String>,
        shots: u64,
        seed: u64,
        probabilities: Vec<Vec<f64>>,
        mean_correct: f64,
    }

    let p = prepare(config)?;
    let e = process(config, &p)?;
    let table = simulate_truth_table(&e, config.shots, config.seed)?;
    let mean_correct = table.mean_correct_probability(&p.reference)?;
    let labels = labels(&p.basis);
    let body = match config.format {
        OutputFormat::Json => output::json(
            config,
            &Result_ {
                labels,
                shots: table.shots,
                seed: table.seed,
                probabilities: table.probabilities,
                mean_correct,
            },
        )?,
        OutputFormat::Csv => {
            let mut header = vec!["input".to_string()];
            header.extend(labels.iter().cloned());
            let rows: Vec<Vec<String>> = table
                .probabilities
                .iter()
                .zip(&labels)
                .map(|(row, l)| std::iter::once(l.clone()).chain(row.iter().map(|&x| num(x))).collect())
                .collect();
            output::csv(&header, &rows)?
        }
    };
    Ok(ok(body, format!("mean correct output probability {mean_correct:.4}")))
}

/// χ-matrix of the simulated process with trace, positivity and fidelity.
pub fn cmd_chi(config: &RunConfig, complex: bool) -> Result<CommandOutput, CliError> {
    #[derive(Serialize)]
    struct Result_ {
        labels: Vec<String>,
        trace: f64,
        min_eigenvalue: f64,
        hermiticity_error: f64,
        process_fidelity: f64,
        abs: Vec<Vec<f64>>,
        #[serde(skip_serializing_if = "Option::is_none")]
        complex: Option<Vec<Vec<[f64; 2]>>>,
    }

    let p = prepare(config)?;
    let e = process(config, &p)?;
    let chi = chi_from_process(&e)?;
    let f_pro = process_fidelity(&chi, &chi_from_unitary(&p.reference)?)?;
    let summary = format!(
        "Tr chi {:.6}  min eigenvalue {:.3e}  F_pro {:.6}",
        chi.trace(),
        chi.min_eigenvalue(),
        f_pro
    );
    let body = match config.format {
        OutputFormat::Json => output::json(
            config,
            &Result_ {
                labels: chi.labels.clone(),
                trace: chi.trace(),
                min_eigenvalue: chi.min_eigenvalue(),
                hermiticity_error: chi.hermiticity_error(),
                process_fidelity: f_pro,
                abs: chi.abs_matrix(),
                complex: complex.then(|| output::complex_rows(&chi.chi)),
            },
        )?,
        OutputFormat::Csv => {
            let mut header = vec!["label".to_string()];
            let mut rows = Vec::with_capacity(chi.labels.len());
            if complex {
                header.extend(output::complex_header(&chi.labels));
                for (i, l) in chi.labels.iter().enumerate() {
                    let mut row = vec![l.clone()];
                    row.extend(output::complex_cells(&chi.chi, i));
                    rows.push(row);
                }
            } else {
                header.extend(chi.labels.iter().cloned());
                for (l, r) in chi.labels.iter().zip(chi.abs_matrix()) {
                    rows.push(std::iter::once(l.clone()).chain(r.into_iter().map(num)).collect());
                }
            }
            output::csv(&header, &rows)?
        }
    };
    Ok(ok(body, summary))
}

fn fidelity_report(config: &RunConfig, p: &Prepared, e: &QubitProcess) -> Result<FidelityReport, CliError> {
    if config.samples == 0 {
        return Err(CliError::Usage("--samples must be at least 1".into()));
    }
    Ok(mean_gate_fidelity_mc(e, &p.reference, config.samples, config.seed)?)
}

const FIDELITY_COLUMNS: [&str; 6] = [
    "estimate",
    "std_error",
    "samples",
    "seed",
    "analytic_crosscheck",
    "process_fidelity",
];

/// Monte-Carlo mean gate fidelity with the analytic cross-check.
pub fn cmd_fidelity(config: &RunConfig) -> Result<CommandOutput, CliError> {
    #[derive(Serialize)]
    struct Result_ {
        #[serde(flatten)]
        report: FidelityReport,
        process_fidelity: f64,
    }

    let p = prepare(config)?;
    let e = process(config, &p)?;
    let report = fidelity_report(config, &p, &e)?;
    let f_pro = e.entanglement_fidelity(&p.reference)?;
    let body = match config.format {
        OutputFormat::Json => output::json(
            config,
            &Result_ {
                report,
                process_fidelity: f_pro,
            },
        )?,
        OutputFormat::Csv => output::csv(
            &FIDELITY_COLUMNS.map(String::from),
            &[vec![
                num(report.estimate),
                num(report.std_error),
                report.samples.to_string(),
                report.seed.to_string(),
                num(report.analytic_crosscheck),
                num(f_pro),
            ]],
        )?,
    };
    Ok(ok(
        body,
        format!(
            "F_mean {:.4} ± {:.4}  (analytic {:.4})",
            report.estimate, report.std_error, report.analytic_crosscheck
        ),
    ))
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepRow {
    pub value: f64,
    pub f_mean: f64,
    pub std_error: f64,
    pub f_pro: f64,
    pub duration_s: f64,
}

/// One row per value of `axis`; detuning values are in Hz.
pub fn cmd_sweep(config: &RunConfig, axis: SweepAxis, values: &[f64]) -> Result<CommandOutput, CliError> {
    #[derive(Serialize)]
    struct Result_ {
        axis: SweepAxis,
        rows: Vec<SweepRow>,
    }

    if values.is_empty() {
        return Err(CliError::Usage("sweep needs at least one value".into()));
    }
    let mut rows = Vec::with_capacity(values.len());
    for &value in values {
        let point = match axis {
            SweepAxis::Epsilon => config.clone().with_epsilon(value),
            SweepAxis::Detuning => config.clone().with_detuning_hz(value),
        };
        let p = prepare(&point)?;
        let e = process(&point, &p)?;
        let report = fidelity_report(&point, &p, &e)?;
        rows.push(SweepRow {
            value,
            f_mean: report.estimate,
            std_error: report.std_error,
            f_pro: e.entanglement_fidelity(&p.reference)?,
            duration_s: sequence_duration(&p.seq, &point.physical),
        });
    }
    let summary = format!("{} points along {:?}", rows.len(), axis);
    let body = match config.format {
        OutputFormat::Json => output::json(config, &Result_ { axis, rows })?,
        OutputFormat::Csv => output::csv(
            &["value", "f_mean", "std_error", "f_pro", "duration_s"].map(String::from),
            &rows
                .iter()
                .map(|r| vec![num(r.value), num(r.f_mean), num(r.std_error), num(r.f_pro), num(r.duration_s)])
                .collect::<Vec<_>>(),
        )?,
    };
    Ok(ok(body, summary))
}

/// Unitary check, exact truth table, χ summary and fidelity for the pulse
/// program in `path`.
pub fn cmd_run(config: &RunConfig, path: &Path) -> Result<CommandOutput, CliError> {
    #[derive(Serialize)]
    struct Result_ {
        name: String,
        pulses: usize,
        duration_s: f64,
        unitary: UnitarySummary,
        truth_table: Vec<Vec<f64>>,
        mean_correct: f64,
        chi_trace: f64,
        chi_min_eigenvalue: f64,
        process_fidelity: f64,
        fidelity: FidelityReport,
    }

    let config = RunConfig {
        sequence: SequenceSource::File(path.to_path_buf()),
        ..config.clone()
    };
    let p = prepare(&config)?;
    let (_, unitary) = unitary_summary(&config, &p)?;
    let e = process(&config, &p)?;
    let table = simulate_truth_table(&e, 0, config.seed)?;
    let mean_correct = table.mean_correct_probability(&p.reference)?;
    let chi = chi_from_process(&e)?;
    let f_pro = process_fidelity(&chi, &chi_from_unitary(&p.reference)?)?;
    let fidelity = fidelity_report(&config, &p, &e)?;
    let result = Result_ {
        name: p.seq.name.clone(),
        pulses: p.seq.len(),
        duration_s: sequence_duration(&p.seq, &config.physical),
        unitary,
        truth_table: table.probabilities,
        mean_correct,
        chi_trace: chi.trace(),
        chi_min_eigenvalue: chi.min_eigenvalue(),
        process_fidelity: f_pro,
        fidelity,
    };
    let summary = format!(
        "{}: {} pulses, unitary {}, F_pro {:.4}, F_mean {:.4}",
        result.name, result.pulses, result.unitary.verdict, f_pro, fidelity.estimate
    );
    let body = match config.format {
        OutputFormat::Json => output::json(&config, &result)?,
        OutputFormat::Csv => output::csv(
            &[
                "name",
                "pulses",
                "duration_s",
                "deviation",
                "leakage",
                "verdict",
                "mean_correct",
                "chi_trace",
                "process_fidelity",
                "f_mean",
                "std_error",
                "analytic_crosscheck",
            ]
            .map(String::from),
            &[vec![
                result.name.clone(),
                result.pulses.to_string(),
                num(result.duration_s),
                num(result.unitary.deviation),
                num(result.unitary.leakage),
                result.unitary.verdict.to_string(),
                num(mean_correct),
                num(result.chi_trace),
                num(f_pro),
                num(fidelity.estimate),
                num(fidelity.std_error),
                num(fidelity.analytic_crosscheck),
            ]],
        )?,
    };
    Ok(ok(body, summary))
}
