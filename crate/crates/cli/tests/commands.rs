use std::io::Write;
use std::process::Command;

use serde_json::Value;
use toffoli_cli::{
    cmd_chi, cmd_fidelity, cmd_run, cmd_sweep, cmd_truth_table, cmd_unitary, OutputFormat, RunConfig,
    SequenceSource, SweepAxis,
};
use toffoli_core::sequences::format::serialize_sequence;
use toffoli_core::sequences::toffoli_sequence;
use toffoli_core::tomo::chi_from_unitary;
use toffoli_core::sequences::reference_toffoli_unitary;

fn json(body: &str) -> Value {
    serde_json::from_str(body).unwrap()
}

fn quick() -> RunConfig {
    RunConfig {
        samples: 2_000,
        ..RunConfig::default()
    }
}

fn seq_file(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

#[test]
fn unitary_ideal_passes() {
    let out = cmd_unitary(&quick()).unwrap();
    assert!(out.passed);
    let v = json(&out.body);
    assert_eq!(v["result"]["verdict"], "PASS");
    assert!(v["result"]["deviation"].as_f64().unwrap() < 1e-9);
    assert_eq!(v["result"]["labels"][0], "DDD");
    assert_eq!(v["result"]["labels"][7], "SSS");
    assert_eq!(v["config"]["sequence"], "builtin:toffoli");
    assert_eq!(v["config"]["n_max"], 4);
}

#[test]
fn unitary_noisy_reports_without_failing() {
    let out = cmd_unitary(&quick().with_epsilon(0.07)).unwrap();
    assert!(out.passed);
    let v = json(&out.body);
    assert!(v["result"]["deviation"].as_f64().unwrap() > 0.0);
    assert!(v["result"]["leakage"].as_f64().unwrap() > 0.0);
}

#[test]
fn unitary_of_empty_sequence_fails() {
    let f = seq_file("# nothing\n");
    let config = RunConfig {
        sequence: SequenceSource::File(f.path().to_path_buf()),
        ..quick()
    };
    let out = cmd_unitary(&config).unwrap();
    assert!(!out.passed);
    assert_eq!(out.exit_code(), 1);
    let v = json(&out.body);
    assert_eq!(v["result"]["verdict"], "FAIL");
    // The simulated block is the identity.
    let sim = &v["result"]["simulated"];
    for i in 0..8 {
        for j in 0..8 {
            let re = sim[i][j][0].as_f64().unwrap();
            assert!((re - if i == j { 1.0 } else { 0.0 }).abs() < 1e-12);
        }
    }
}

#[test]
fn unitary_csv_shape() {
    let out = cmd_unitary(&quick().with_format(OutputFormat::Csv)).unwrap();
    let lines: Vec<&str> = out.body.lines().collect();
    assert_eq!(lines.len(), 17);
    assert!(lines[0].starts_with("matrix,row,DDD_re,DDD_im,"));
    assert_eq!(lines[0].split(',').count(), 18);
    assert!(lines[1].starts_with("simulated,DDD,"));
    assert!(lines[9].starts_with("reference,DDD,"));
}

#[test]
fn exact_ideal_truth_table_is_permutation() {
    let config = RunConfig { shots: 0, ..quick() };
    let v = json(&cmd_truth_table(&config).unwrap().body);
    assert!((v["result"]["mean_correct"].as_f64().unwrap() - 1.0).abs() < 1e-9);
    let rows = v["result"]["probabilities"].as_array().unwrap();
    for (i, row) in rows.iter().enumerate() {
        let target = [0, 1, 2, 3, 4, 5, 7, 6][i];
        assert!((row[target].as_f64().unwrap() - 1.0).abs() < 1e-9);
    }
}

#[test]
fn sampled_truth_table_is_reproducible() {
    let config = RunConfig {
        seed: 11,
        ..RunConfig::noisy().with_format(OutputFormat::Csv)
    };
    let a = cmd_truth_table(&config).unwrap();
    let b = cmd_truth_table(&config).unwrap();
    assert_eq!(a, b);
    let header = a.body.lines().next().unwrap();
    assert_eq!(header, "input,DDD,DDS,DSD,DSS,SDD,SDS,SSD,SSS");
    let other = cmd_truth_table(&RunConfig { seed: 12, ..config }).unwrap();
    assert_ne!(a.body, other.body);
}

#[test]
fn chi_ideal_matches_reference_support() {
    let v = json(&cmd_chi(&quick(), false).unwrap().body);
    let abs = v["result"]["abs"].as_array().unwrap();
    let reference = chi_from_unitary(&reference_toffoli_unitary()).unwrap();
    for (i, row) in abs.iter().enumerate() {
        for (j, x) in row.as_array().unwrap().iter().enumerate() {
            let expected = reference.chi[(i, j)].norm();
            assert!((x.as_f64().unwrap() - expected).abs() < 1e-9);
        }
    }
    assert_eq!(v["result"]["labels"].as_array().unwrap().len(), 64);
    assert!((v["result"]["process_fidelity"].as_f64().unwrap() - 1.0).abs() < 1e-9);
}

#[test]
fn chi_of_identity_sequence_is_single_entry() {
    let f = seq_file("");
    let config = RunConfig {
        sequence: SequenceSource::File(f.path().to_path_buf()),
        ..quick()
    };
    let v = json(&cmd_chi(&config, true).unwrap().body);
    let abs = v["result"]["abs"].as_array().unwrap();
    for (i, row) in abs.iter().enumerate() {
        for (j, x) in row.as_array().unwrap().iter().enumerate() {
            let expected = if i == 0 && j == 0 { 1.0 } else { 0.0 };
            assert!((x.as_f64().unwrap() - expected).abs() < 1e-12);
        }
    }
    assert_eq!(v["result"]["labels"][0], "III");
    assert!(v["result"]["complex"].is_array());
}

#[test]
fn chi_noisy_has_reduced_fidelity() {
    let out = cmd_chi(&quick().with_epsilon(0.07).with_format(OutputFormat::Csv), false).unwrap();
    assert!(out.summary.contains("F_pro"));
    assert_eq!(out.body.lines().count(), 65);
    let v = json(&cmd_chi(&quick().with_epsilon(0.07), false).unwrap().body);
    assert!(v["result"]["process_fidelity"].as_f64().unwrap() < 1.0 - 1e-3);
}

#[test]
fn fidelity_ideal_is_one() {
    let v = json(&cmd_fidelity(&quick()).unwrap().body);
    assert!((v["result"]["estimate"].as_f64().unwrap() - 1.0).abs() < 1e-9);
    assert_eq!(v["result"]["samples"], 2000);
}

#[test]
fn fidelity_noisy_defaults_in_band() {
    let config = RunConfig::noisy();
    let a = cmd_fidelity(&config).unwrap();
    let v = json(&a.body);
    let est = v["result"]["estimate"].as_f64().unwrap();
    let se = v["result"]["std_error"].as_f64().unwrap();
    let cross = v["result"]["analytic_crosscheck"].as_f64().unwrap();
    assert!((0.68..=0.88).contains(&est), "{est}");
    assert!((est - cross).abs() < 3.0 * se);
    assert_eq!(a, cmd_fidelity(&config).unwrap());
}

#[test]
fn epsilon_sweep_is_monotone() {
    let out = cmd_sweep(&quick(), SweepAxis::Epsilon, &[0.0, 0.02, 0.05, 0.07]).unwrap();
    let v = json(&out.body);
    let rows = v["result"]["rows"].as_array().unwrap();
    let f_pro: Vec<f64> = rows.iter().map(|r| r["f_pro"].as_f64().unwrap()).collect();
    assert!(f_pro.windows(2).all(|w| w[1] <= w[0] + 1e-12), "{f_pro:?}");
    let last = 1.0 - rows[3]["f_mean"].as_f64().unwrap();
    assert!((0.06..=0.18).contains(&last), "{last}");
    assert!((rows[0]["duration_s"].as_f64().unwrap() - 1.410e-3).abs() < 5e-6);
}

#[test]
fn detuning_sweep_peaks_at_zero() {
    let out = cmd_sweep(
        &quick().with_format(OutputFormat::Csv),
        SweepAxis::Detuning,
        &[-50.0, 0.0, 50.0, 100.0],
    )
    .unwrap();
    let mut lines = out.body.lines();
    assert_eq!(lines.next().unwrap(), "value,f_mean,std_error,f_pro,duration_s");
    let f_mean: Vec<f64> = lines
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    let max = f_mean.iter().cloned().fold(f64::MIN, f64::max);
    assert_eq!(f_mean[1], max);
}

#[test]
fn sweep_needs_values() {
    assert!(cmd_sweep(&quick(), SweepAxis::Epsilon, &[]).is_err());
    assert!("bogus".parse::<SweepAxis>().is_err());
}

#[test]
fn run_characterizes_file() {
    let f = seq_file(&serialize_sequence(&toffoli_sequence()));
    let v = json(&cmd_run(&quick(), f.path()).unwrap().body);
    assert_eq!(v["result"]["name"], "toffoli");
    assert_eq!(v["result"]["pulses"], 15);
    assert_eq!(v["result"]["unitary"]["verdict"], "PASS");
    assert!((v["result"]["mean_correct"].as_f64().unwrap() - 1.0).abs() < 1e-9);
    assert!((v["result"]["chi_trace"].as_f64().unwrap() - 1.0).abs() < 1e-9);
}

#[test]
fn config_validation() {
    assert!(cmd_unitary(&RunConfig { n_max: 1, ..quick() }).is_err());
    assert!(cmd_unitary(&quick().with_epsilon(-0.1)).is_err());
    assert!(cmd_fidelity(&RunConfig { samples: 0, ..quick() }).is_err());
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_toffoli"))
}

#[test]
fn binary_exit_codes() {
    let ok = bin().args(["unitary"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&ok.stderr).contains("PASS"));

    let empty = seq_file("");
    let fail = bin()
        .args(["unitary", "--sequence"])
        .arg(empty.path())
        .output()
        .unwrap();
    assert_eq!(fail.status.code(), Some(1));

    let bad = seq_file("sb 1 pi\n");
    let parse = bin().args(["unitary", "--sequence"]).arg(bad.path()).output().unwrap();
    assert_eq!(parse.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&parse.stderr).contains("line 1"));

    let usage = bin().args(["sweep", "--axis", "nonsense", "--values", "1"]).output().unwrap();
    assert_eq!(usage.status.code(), Some(2));
}

#[test]
fn binary_writes_out_file_and_accepts_pi_literals() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fid.csv");
    let status = bin()
        .args(["fidelity", "--format", "csv", "--samples", "500", "--epsilon", "0.02pi", "--out"])
        .arg(&path)
        .status()
        .unwrap();
    assert!(status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("estimate,std_error,samples,seed,analytic_crosscheck,process_fidelity\n"));
    assert_eq!(text.lines().count(), 2);
}

#[test]
fn bundled_program_file_is_the_builtin_sequence() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../sequences/toffoli.seq");
    let text = std::fs::read_to_string(path).unwrap();
    assert_eq!(toffoli_core::sequences::format::parse_sequence(&text).unwrap(), toffoli_sequence());
}
