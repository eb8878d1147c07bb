mod commands;
mod envelope;
mod error;
mod table;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::Value;

use commands::{EnumerateArgs, Input, Output, Rank2Args, ScreenArgs};
use envelope::{digest, ReportEnvelope};
use error::CliError;

#[derive(Parser)]
#[command(name = "zplus", version, about = "Frobenius-Perron dimensions, rank bounds and dimension screens for Z+-rings")]
struct Cli {
    /// Print a JSON report envelope instead of tables.
    #[arg(long, global = true)]
    json: bool,
    /// Omit the timestamp so reports are byte-identical across runs.
    #[arg(long, global = true)]
    deterministic: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the Z+-ring axioms and transitivity.
    Validate { file: PathBuf },
    /// FP dimensions d, the left vector p and FPdim(A).
    Fpdim { file: PathBuf },
    /// Characteristic-polynomial bounds for each generator, or one element.
    Bounds {
        file: PathBuf,
        /// Comma-separated coordinates, e.g. "1,0,2".
        #[arg(long)]
        element: Option<String>,
    },
    /// Checks on a ring with projective dimensions and a Cartan matrix.
    Catdata { file: PathBuf },
    /// Rank-two rings X² = aX + b.
    Rank2(Rank2Args),
    /// Screen prime dimensions for Hopf and quasi-Hopf algebras.
    ScreenPrime(ScreenArgs),
    /// Enumerate transitive integral Z+-rings up to a cap.
    Enumerate(EnumerateArgs),
}

/// The input digest is known before the computation, so error reports carry it too.
fn run(command: &Command) -> (String, Result<Output, CliError>) {
    let with_file = |p: &PathBuf, f: &dyn Fn(&Input) -> Result<Output, CliError>| match commands::read_input(p) {
        Ok(input) => (digest(&input.bytes), f(&input)),
        Err(e) => (String::new(), Err(e)),
    };
    match command {
        Command::Validate { file } => with_file(file, &commands::validate),
        Command::Fpdim { file } => with_file(file, &commands::fpdim),
        Command::Bounds { file, element } => with_file(file, &|i| commands::bounds(i, element.as_deref())),
        Command::Catdata { file } => with_file(file, &commands::catdata),
        Command::Rank2(args) => (commands::args_digest(args), commands::rank2(args)),
        Command::ScreenPrime(args) => match &args.profile {
            Some(p) => with_file(p, &|i| commands::screen_prime(args, Some(i))),
            None => (commands::args_digest(args), commands::screen_prime(args, None)),
        },
        Command::Enumerate(args) => (commands::args_digest(args), commands::enumerate(args)),
    }
}

fn subcommand_name(command: &Command) -> &'static str {
    match command {
        Command::Validate { .. } => "validate",
        Command::Fpdim { .. } => "fpdim",
        Command::Bounds { .. } => "bounds",
        Command::Catdata { .. } => "catdata",
        Command::Rank2(_) => "rank2",
        Command::ScreenPrime(_) => "screen-prime",
        Command::Enumerate(_) => "enumerate",
    }
}

fn print_json(v: &ReportEnvelope) {
    let mut s = serde_json::to_string_pretty(v).expect("envelope serializes");
    s.push('\n');
    let _ = std::io::stdout().write_all(s.as_bytes());
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let name = subcommand_name(&cli.command);
    let (input_digest, result) = run(&cli.command);
    match result {
        Ok(out) => {
            if cli.json {
                print_json(&ReportEnvelope::new(name, input_digest, out.payload, cli.deterministic));
            } else {
                print!("{}", out.text);
            }
            ExitCode::from(out.exit)
        }
        Err(e) => {
            if cli.json {
                let payload: Value = e.to_json();
                print_json(&ReportEnvelope::new(name, input_digest, payload, cli.deterministic));
            } else {
                eprintln!("error: {}", e.message);
            }
            ExitCode::from(e.kind.exit_code())
        }
    }
}
