use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use pd_cli::{audit, commands, figures, CliError, CliResult};
use posterior_dynamics::psi::NumericMode;

#[derive(Parser)]
#[command(name = "posterior-dynamics", version, about = "Expected posterior probability of the truth")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Exact,
    Float,
    Auto,
}

impl From<Mode> for NumericMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Exact => NumericMode::Exact,
            Mode::Float => NumericMode::Float,
            Mode::Auto => NumericMode::Auto,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Compute ψ(n) for a scenario file.
    Psi {
        file: PathBuf,
        /// Override the scenario's numeric mode.
        #[arg(long, value_enum)]
        mode: Option<Mode>,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Run an audit suite: turan, bessel, logconcavity, orders, appendix_a4, asymptotics or all.
    Audit {
        suite: String,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Reproduce figure 1, 2, 3 or all.
    Figures {
        which: String,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
}

fn configure_threads() -> CliResult<()> {
    let Ok(raw) = std::env::var("PD_THREADS") else { return Ok(()) };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Schema(format!("PD_THREADS must be a positive integer, got {raw:?}")))?;
    // A pool that is already built keeps its size; nothing else to do.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

fn execute(cli: Cli) -> CliResult<()> {
    configure_threads()?;
    match cli.command {
        Command::Psi { file, mode, out } => {
            let (run, files) = commands::cmd_psi(&file, mode.map(Into::into), &out)?;
            println!("{}", run.summary());
            for f in files {
                println!("wrote {}", f.display());
            }
        }
        Command::Audit { suite, seed, out } => {
            let (suites, path) = audit::cmd_audit(&suite, seed, &out)?;
            print!("{}", audit::summary_table(&suites));
            println!("wrote {}", path.display());
            let failed: usize = suites.iter().map(|s| s.failures()).sum();
            if failed > 0 {
                return Err(CliError::AuditFailed(failed));
            }
        }
        Command::Figures { which, out } => {
            for (run, files) in figures::cmd_figures(&figures::parse_which(&which)?, &out)? {
                println!("{}", run.summary());
                for f in files {
                    println!("wrote {}", f.display());
                }
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
