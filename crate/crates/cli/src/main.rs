use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand};
use witt_core::harness::{apply_cmd, dump_cmd, run, ConfigLayer, RunConfig};

const USAGE_ERROR: u8 = 2;

#[derive(Parser)]
#[command(name = "witt", version, about = "Exact checks for the Witt composite operators on sl(2) Verma modules")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run verification suites and print or write the report.
    Run(RunArgs),
    /// Apply a named operator to a polynomial in z.
    Apply {
        #[arg(long, default_value = "1")]
        h: String,
        /// sl2.Lm1, sl2.L0, sl2.Lp1, qr(k) or current(i)
        op: String,
        /// Polynomial such as "1 + 7/2*z^3"
        vec: String,
    },
    /// Print the shift components of a named operator.
    Dump {
        #[arg(long, default_value = "1")]
        h: String,
        op: String,
    },
}

#[derive(Args)]
struct RunArgs {
    /// key = value file; command-line flags override it
    #[arg(long)]
    config: Option<PathBuf>,
    /// Comma-separated weights, e.g. "1/2,1"
    #[arg(long)]
    h: Option<String>,
    #[arg(long = "K")]
    k: Option<String>,
    #[arg(long = "N")]
    n: Option<String>,
    /// Comma-separated subset of sl2,thm1a,thm1b,octahedron,overlay,tensor,burnside
    #[arg(long)]
    suites: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// json or csv
    #[arg(long)]
    format: Option<String>,
    /// Octahedron model fixture to load instead of the bundled one
    #[arg(long)]
    fixture: Option<PathBuf>,
}

fn usage(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("witt: {msg}");
    ExitCode::from(USAGE_ERROR)
}

fn config_from(args: RunArgs) -> Result<RunConfig, String> {
    let base = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
            ConfigLayer::parse(&text).map_err(|e| e.to_string())?
        }
        None => ConfigLayer::default(),
    };
    let path_string = |p: Option<PathBuf>| p.map(|p| p.to_string_lossy().into_owned());
    let over = ConfigLayer {
        h: args.h,
        k: args.k,
        n: args.n,
        suites: args.suites,
        out: path_string(args.out),
        format: args.format,
        fixture: path_string(args.fixture),
    };
    RunConfig::from_layer(&base.merge(over)).map_err(|e| e.to_string())
}

fn run_command(args: RunArgs) -> ExitCode {
    let config = match config_from(args) {
        Ok(c) => c,
        Err(e) => return usage(e),
    };
    let report = match run(&config) {
        Ok(r) => r,
        Err(e) => return usage(e),
    };
    let text = report.render();
    match &config.out {
        None => print!("{text}"),
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                return usage(format!("cannot write {}: {e}", path.display()));
            }
            let stamp = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
            let mut log = path.clone().into_os_string();
            log.push(".log");
            let line = format!("finished_unix={stamp} status={}\n", if report.passed() { "pass" } else { "fail" });
            if let Err(e) = std::fs::write(&log, line) {
                eprintln!("witt: cannot write log {}: {e}", PathBuf::from(log).display());
            }
        }
    }
    ExitCode::from(report.exit_code() as u8)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { USAGE_ERROR } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match cli.command {
        Command::Run(args) => run_command(args),
        Command::Apply { h, op, vec } => match apply_cmd(&op, &h, &vec) {
            Ok(out) => {
                println!("{out}");
                ExitCode::SUCCESS
            }
            Err(e) => usage(e),
        },
        Command::Dump { h, op } => match dump_cmd(&op, &h) {
            Ok(out) => {
                println!("{out}");
                ExitCode::SUCCESS
            }
            Err(e) => usage(e),
        },
    }
}
