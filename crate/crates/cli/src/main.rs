use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use toffoli_cli::{
    cmd_chi, cmd_fidelity, cmd_run, cmd_sweep, cmd_truth_table, cmd_unitary, CliError, CommandOutput,
    OutputFormat, RunConfig, SequenceSource, SweepAxis,
};
use toffoli_core::sequences::format::parse_angle;
use toffoli_core::tomo::DEFAULT_SAMPLES;

fn number(text: &str) -> Result<f64, String> {
    parse_angle(text)
}

#[derive(Parser)]
#[command(name = "toffoli", version, about = "Pulse-level simulator of a three-ion Toffoli gate")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Nearest-neighbour crosstalk ratio ε.
    #[arg(long, global = true, default_value = "0", value_parser = number)]
    epsilon: f64,
    /// Mode detuning in Hz (converted to rad/s).
    #[arg(long, global = true, default_value = "0", value_parser = number)]
    detuning_hz: f64,
    /// Blue-sideband Rabi frequency on n = 0, in Hz.
    #[arg(long, global = true, default_value = "3300", value_parser = number)]
    omega_sb_hz: f64,
    /// Carrier Rabi frequency in Hz.
    #[arg(long, global = true, default_value = "50000", value_parser = number)]
    omega_carrier_hz: f64,
    /// Per-ion state-preparation flip probability.
    #[arg(long, global = true, default_value = "0", value_parser = number)]
    qubit_prep_error: f64,
    /// Probability that the mode starts in n = 1.
    #[arg(long, global = true, default_value = "0", value_parser = number)]
    motional_prep_error: f64,
    /// Highest retained Fock level.
    #[arg(long, global = true, default_value_t = 4)]
    nmax: usize,
    /// Shots per truth-table row (0 for exact probabilities).
    #[arg(long, global = true, default_value_t = 100)]
    shots: u64,
    /// Haar samples for the mean gate fidelity.
    #[arg(long, global = true, default_value_t = DEFAULT_SAMPLES)]
    samples: usize,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: OutputFormat,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Pulse program file; defaults to the built-in Toffoli sequence.
    #[arg(long, global = true)]
    sequence: Option<PathBuf>,
    /// Worker threads for the parallel parts (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Compare the simulated gate with the reference unitary.
    Unitary,
    /// Populations of every output word for each basis input.
    TruthTable,
    /// Process matrix in the Pauli basis.
    Chi {
        /// Also emit the complex entries.
        #[arg(long)]
        complex: bool,
    },
    /// Monte-Carlo mean gate fidelity.
    Fidelity,
    /// Fidelity along one noise axis.
    Sweep {
        #[arg(long, value_enum)]
        axis: SweepAxis,
        /// Comma-separated values; Hz for the detuning axis.
        #[arg(long, required = true, value_delimiter = ',', value_parser = number)]
        values: Vec<f64>,
    },
    /// Full characterization of a pulse program file.
    Run { file: PathBuf },
}

impl Cli {
    fn config(&self) -> Result<RunConfig, CliError> {
        let mut config = RunConfig {
            physical: toffoli_core::PhysicalParams::from_hz(self.omega_sb_hz, self.omega_carrier_hz)?,
            n_max: self.nmax,
            shots: self.shots,
            samples: self.samples,
            seed: self.seed,
            format: self.format,
            sequence: match &self.sequence {
                Some(p) => SequenceSource::File(p.clone()),
                None => SequenceSource::Builtin,
            },
            ..RunConfig::default()
        }
        .with_epsilon(self.epsilon)
        .with_detuning_hz(self.detuning_hz);
        config.noise.qubit_prep_error = self.qubit_prep_error;
        config.noise.motional_prep_error = self.motional_prep_error;
        config.validate()?;
        Ok(config)
    }

    fn execute(&self) -> Result<CommandOutput, CliError> {
        let config = self.config()?;
        match &self.command {
            Command::Unitary => cmd_unitary(&config),
            Command::TruthTable => cmd_truth_table(&config),
            Command::Chi { complex } => cmd_chi(&config, *complex),
            Command::Fidelity => cmd_fidelity(&config),
            Command::Sweep { axis, values } => cmd_sweep(&config, *axis, values),
            Command::Run { file } => cmd_run(&config, file),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.threads > 0 {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let out = match cli.execute() {
        Ok(out) => out,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let written = match &cli.out {
        Some(path) => std::fs::write(path, &out.body).map_err(|e| format!("{}: {e}", path.display())),
        None => {
            print!("{}", out.body);
            Ok(())
        }
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    eprintln!("{}", out.summary);
    ExitCode::from(out.exit_code() as u8)
}
