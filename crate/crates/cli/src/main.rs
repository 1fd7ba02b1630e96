mod circuit;
mod commands;
mod document;
mod error;
mod states;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use commands::{BellArgs, CircuitArg, GroupArgs, Outcome, SuppressArgs};
use document::Emit;
use error::CliError;

/// Bosonic stabilizer analysis of linear optical circuits.
#[derive(Parser, Debug)]
#[command(name = "bsf", version)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value = "text", global = true)]
    emit: Emit,

    /// Worker threads for the data-parallel paths (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Lift the brute-force oracle guard.
    #[arg(long, global = true)]
    force: bool,

    /// Seed for sampled audit states.
    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct CircuitSource {
    /// Circuit in the mini-language, e.g. "fourier(2)@0,1; phase(1/4)@0".
    #[arg(long, required_unless_present = "circuit_file", conflicts_with = "circuit_file")]
    circuit: Option<String>,

    /// Read the circuit from a file, one stage per line.
    #[arg(long)]
    circuit_file: Option<PathBuf>,
}

impl CircuitSource {
    fn load(&self) -> Result<CircuitArg, CliError> {
        match (&self.circuit, &self.circuit_file) {
            (Some(text), _) => Ok(CircuitArg { text: text.clone(), flag: "--circuit" }),
            (None, Some(path)) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))?;
                Ok(CircuitArg { text, flag: "--circuit-file" })
            }
            (None, None) => Err(CliError::input("a circuit is required")),
        }
    }
}

#[derive(Args, Debug)]
struct GroupSource {
    /// Stabilizer generator, a monomial written in the circuit language; repeatable.
    #[arg(long = "gen")]
    gens: Vec<String>,

    /// Character value on the matching generator, in turns (0, 1/2, 0.25, ...); repeatable.
    #[arg(long = "char")]
    chars: Vec<String>,
}

impl From<GroupSource> for GroupArgs {
    fn from(g: GroupSource) -> Self {
        GroupArgs { gens: g.gens, chars: g.chars }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Outcome distribution of an input state through a circuit.
    Evolve {
        #[command(flatten)]
        circuit: CircuitSource,
        /// Occupation list ("1,0,2") or named state (psi+, psi-, phi+, phi-, beta+, beta-, alpha); `*` tensors factors.
        #[arg(long)]
        input: String,
    },
    /// Outcomes forbidden by a stabilizer group and character.
    Suppress {
        #[command(flatten)]
        circuit: CircuitSource,
        #[command(flatten)]
        group: GroupSource,
        /// Photon number.
        #[arg(long)]
        n: Option<usize>,
        /// Mode count (default: the smallest that fits the circuit and generators).
        #[arg(long)]
        modes: Option<usize>,
        /// Stabilized input used for the audit column instead of a sampled one.
        #[arg(long)]
        input: Option<String>,
    },
    /// Character probabilities from measuring a stabilizer group after a circuit.
    Measure {
        #[command(flatten)]
        circuit: CircuitSource,
        #[command(flatten)]
        group: GroupSource,
        #[arg(long)]
        input: String,
    },
    /// Success probability, entanglement measure and instrument of the ancilla Bell measurement.
    Bell {
        /// Copies per rail group.
        #[arg(long)]
        m: Option<usize>,
        /// Emit the (m, P_m, E_m) table.
        #[arg(long)]
        table: bool,
        /// Last row of the table.
        #[arg(long, requires = "table")]
        m_max: Option<usize>,
        /// Include Kraus rows and POVM matrices.
        #[arg(long)]
        povm: bool,
        /// Rebuild the instrument by brute force and compare.
        #[arg(long)]
        oracle: bool,
    },
}

fn run(cli: Cli) -> Result<Outcome, CliError> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(CliError::input("--threads must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::internal(format!("thread pool: {e}")))?;
    }
    match cli.command {
        Command::Evolve { circuit, input } => commands::evolve_cmd(&circuit.load()?, &input),
        Command::Suppress { circuit, group, n, modes, input } => commands::suppress_cmd(SuppressArgs {
            circuit: &circuit.load()?,
            group: group.into(),
            photons: n,
            modes,
            input,
            seed: cli.seed,
        }),
        Command::Measure { circuit, group, input } => commands::measure_cmd(&circuit.load()?, group.into(), &input),
        Command::Bell { m, table, m_max, povm, oracle } => {
            commands::bell_cmd(BellArgs { m, table, m_max, povm, oracle, force: cli.force })
        }
    }
}

fn fail(e: &CliError) -> ExitCode {
    eprintln!("{e}");
    ExitCode::from(e.kind.exit_code() as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let emit = cli.emit;
    let outcome = match run(cli) {
        Ok(o) => o,
        Err(e) => return fail(&e),
    };
    let text = match outcome.doc.render(emit) {
        Ok(t) => t,
        Err(e) => return fail(&e),
    };
    let mut stdout = std::io::stdout().lock();
    if stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush()).is_err() {
        return ExitCode::from(1);
    }
    match outcome.failure {
        Some(e) => fail(&e),
        None => ExitCode::SUCCESS,
    }
}
