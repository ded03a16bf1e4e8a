use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use huliu_cli::commands::{self, Outcome, VerifyKind};
use huliu_cli::fuzz::FuzzConfig;

/// Exact verification of Leibniz and Hu-Liu algebras derived from special
/// Z2-graded associative algebras, and of linear xi-groups.
///
/// Exit codes: 0 holds, 1 falsified or negative, 2 input error, 3 unknown.
#[derive(Debug, Parser)]
#[command(name = "huliu", version)]
struct Cli {
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check the identities a file should satisfy.
    Verify {
        path: PathBuf,
        /// Defaults to the natural check for the file's kind.
        #[arg(long, value_enum)]
        kind: Option<VerifyKind>,
    },
    /// Print a basis of the annihilator (span of all squares <x,x>).
    Annihilator { path: PathBuf },
    /// Decide simplicity: exit 0 simple, 1 not simple, 3 unknown.
    Simple {
        path: PathBuf,
        /// Use Hu-Liu ideals (also closed under the square bracket).
        #[arg(long)]
        huliu: bool,
        /// Seed of the randomized irreducibility search.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Derive the Leibniz (or Hu-Liu) brackets of a graded algebra.
    Derive {
        path: PathBuf,
        /// Emit both brackets as a huliu file.
        #[arg(long)]
        huliu: bool,
        /// Output file; standard output when omitted.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Tangent space of a linear xi-group and its bracket verification.
    Tangent { path: PathBuf },
    /// Check the xi-group laws on seeded random elements.
    XiCheck {
        path: PathBuf,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Re-evaluate a printed witness against an algebra file.
    Replay { path: PathBuf, witness: PathBuf },
    /// Random trivial extensions through every verifier.
    Fuzz {
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Largest dimension of the even part.
        #[arg(long, default_value_t = 2)]
        dim0: usize,
        /// Largest dimension of the odd part.
        #[arg(long, default_value_t = 2)]
        dim1: usize,
        /// Where failing algebras are written.
        #[arg(long)]
        dump_dir: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> Outcome {
    let json = cli.json;
    match cli.command {
        Command::Verify { path, kind } => commands::verify(&path, kind, json),
        Command::Annihilator { path } => commands::annihilator(&path, json),
        Command::Simple { path, huliu, seed } => commands::simple(&path, huliu, seed, json),
        Command::Derive { path, huliu, output } => commands::derive(&path, huliu, output.as_deref(), json),
        Command::Tangent { path } => commands::tangent(&path, json),
        Command::XiCheck { path, samples, seed } => commands::xi_check(&path, samples, seed, json),
        Command::Replay { path, witness } => commands::replay(&path, &witness, json),
        Command::Fuzz {
            trials,
            seed,
            dim0,
            dim1,
            dump_dir,
        } => commands::fuzz(
            FuzzConfig {
                trials,
                seed,
                dim0,
                dim1,
            },
            dump_dir,
            json,
        ),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // usage errors share the input-error code; help and version succeed
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let outcome = run(cli);
    let _ = std::io::stdout().write_all(outcome.stdout.as_bytes());
    let _ = std::io::stderr().write_all(outcome.stderr.as_bytes());
    ExitCode::from(outcome.code as u8)
}
