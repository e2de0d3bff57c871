use clap::Parser;
use momspec::cli::{self, Command};
use momspec::Error;
use std::path::PathBuf;
use std::process::ExitCode;

/// Spectral analysis of momentum operators on interval complements.
#[derive(Parser, Debug)]
#[command(name = "momspec", version, about)]
struct Args {
    /// Subcommand: coeffs | pointspec | density | poles | evolve |
    /// intertwine | inner | decompose | cantor
    command: String,

    /// Path to the JSON config document.
    #[arg(short, long)]
    config: PathBuf,

    /// Write the CSV here instead of stdout.
    #[arg(short, long)]
    out: Option<PathBuf>,

    /// Run the module invariant suites after the computation and report
    /// pass/fail per invariant (exit code 3 on failure).
    #[arg(long)]
    verify: bool,

    /// Seed for the randomized property suites.
    #[arg(long, default_value_t = 0xC0FFEE)]
    seed: u64,

    /// Trials per property suite.
    #[arg(long, default_value_t = 500)]
    trials: usize,

    /// Re-unitarize boundary matrices by polar projection instead of
    /// rejecting near-unitary inputs.
    #[arg(long)]
    project_unitary: bool,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let Some(cmd) = Command::parse(&args.command) else {
        eprintln!("unknown subcommand `{}`", args.command);
        return ExitCode::from(2);
    };
    let doc = match std::fs::read_to_string(&args.config) {
        Ok(d) => d,
        Err(e) => {
            eprintln!("cannot read {}: {e}", args.config.display());
            return ExitCode::from(2);
        }
    };
    let mut cfg = match cli::RunConfig::from_json(&doc) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(2);
        }
    };
    if args.project_unitary {
        cfg.project_unitary = true;
    }

    let output = match cli::run(cmd, &cfg) {
        Ok(o) => o,
        Err(e @ (Error::Schema { .. } | Error::InvalidInterlacing(_) | Error::Dimension(_))) => {
            eprintln!("{e}");
            return ExitCode::from(2);
        }
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(1);
        }
    };
    for w in &output.warnings {
        eprintln!("{w}");
    }
    if let Some(path) = &args.out {
        if let Err(e) = std::fs::write(path, &output.csv) {
            eprintln!("cannot write {}: {e}", path.display());
            return ExitCode::from(1);
        }
    } else {
        use std::io::Write;
        let stdout = std::io::stdout();
        let mut lock = stdout.lock();
        if let Err(e) = lock.write_all(output.csv.as_bytes()) {
            if e.kind() == std::io::ErrorKind::BrokenPipe {
                return ExitCode::SUCCESS;
            }
            eprintln!("cannot write to stdout: {e}");
            return ExitCode::from(1);
        }
    }

    if args.verify {
        let (lines, ok) = cli::run_verification(cmd, args.seed, args.trials);
        for line in lines {
            eprintln!("{line}");
        }
        if !ok {
            return ExitCode::from(3);
        }
    }
    ExitCode::SUCCESS
}
