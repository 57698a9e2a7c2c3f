use std::process::ExitCode;

use clap::{Parser, Subcommand};
use wellposed_cli::{execute, Command, CommonArgs};

#[derive(Debug, Parser)]
#[command(name = "wellposed", version, about = "Lipschitz certificates for posterior maps and their empirical checks")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Debug, Subcommand)]
enum Sub {
    /// Compute a Lipschitz certificate.
    Certify(CommonArgs),
    /// Certify, then sweep seeded data pairs against the certificate.
    Verify(CommonArgs),
    /// Monte Carlo posterior contraction rate.
    Contraction(CommonArgs),
    /// Cell-averaged posterior error against `L·ε`.
    Renyi(CommonArgs),
    /// Per-j Lipschitz constants of the discretised Wiener family.
    Wiener(CommonArgs),
    /// Every applicable Poincaré bound against the spectral oracle.
    Poincare(CommonArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, args) = match cli.command {
        Sub::Certify(a) => (Command::Certify, a),
        Sub::Verify(a) => (Command::Verify, a),
        Sub::Contraction(a) => (Command::Contraction, a),
        Sub::Renyi(a) => (Command::Renyi, a),
        Sub::Wiener(a) => (Command::Wiener, a),
        Sub::Poincare(a) => (Command::Poincare, a),
    };
    match execute(command, &args) {
        Ok(run) => {
            println!("{}: {}", command.as_str(), run.summary);
            for f in &run.files {
                println!("wrote {}", f.display());
            }
            if run.passed {
                ExitCode::SUCCESS
            } else {
                eprintln!("{}: check failed; see the report for the offending data", command.as_str());
                ExitCode::from(2)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
