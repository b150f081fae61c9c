//! `affine`: runs the verification suites and writes a report.
//!
//! Exit status: 0 when every check passes, 1 when any check fails, 2 on a
//! usage or configuration error.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use affine_triple::report::Format;
use affine_triple::suite::{run, Config, Suite};
use clap::{Parser, ValueEnum};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SuiteArg {
    Algebra,
    Reps,
    Plancherel,
    Spectral,
    All,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Self {
        match s {
            SuiteArg::Algebra => Suite::Algebra,
            SuiteArg::Reps => Suite::Reps,
            SuiteArg::Plancherel => Suite::Plancherel,
            SuiteArg::Spectral => Suite::Spectral,
            SuiteArg::All => Suite::All,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
    Text,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Json => Format::Json,
            FormatArg::Csv => Format::Csv,
            FormatArg::Text => Format::Text,
        }
    }
}

/// Numerical verification of the affine-group algebra and its spectral triple.
#[derive(Debug, Parser)]
#[command(name = "affine", version)]
struct Cli {
    /// Which suite to run; overrides the config file.
    #[arg(long, value_enum)]
    suite: Option<SuiteArg>,
    /// JSON config file; missing fields take their defaults.
    #[arg(long)]
    config: Option<PathBuf>,
    /// JSON array of atoms to use instead of the default family.
    #[arg(long)]
    atoms: Option<PathBuf>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: FormatArg,
    /// Worker threads for the inner numerics.
    #[arg(long)]
    threads: Option<usize>,
    /// Omit the timestamp and zero the runtimes, for byte-identical reports.
    #[arg(long)]
    no_timestamp: bool,
}

fn usage(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut config = match &cli.config {
        Some(path) => match std::fs::read_to_string(path) {
            Ok(text) => match Config::from_json(&text) {
                Ok(c) => c,
                Err(e) => return usage(format!("{}: {e}", path.display())),
            },
            Err(e) => return usage(format!("{}: {e}", path.display())),
        },
        None => Config::default(),
    };
    if let Some(s) = cli.suite {
        config.suite = s.into();
    }
    if cli.atoms.is_some() {
        config.atoms = cli.atoms.clone();
    }
    if cli.threads.is_some() {
        config.threads = cli.threads;
    }
    if let Err(e) = config.validate() {
        return usage(e);
    }
    if let Some(n) = config.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            return usage(format!("thread pool: {e}"));
        }
    }
    // an unreadable atom file is a usage error, not a failed check
    if let Err(e) = config.family() {
        return usage(e);
    }

    let mut report = match run(config.suite, &config, !cli.no_timestamp) {
        Ok(r) => r,
        Err(e) => return usage(e),
    };
    if !cli.no_timestamp {
        report.timestamp = SystemTime::now().duration_since(UNIX_EPOCH).ok().map(|d| d.as_secs());
    }

    let format = cli.format.into();
    let written = match &cli.out {
        Some(path) => report.save(format, path),
        None => report.write(format, &mut std::io::stdout().lock()),
    };
    if let Err(e) = written {
        eprintln!("error: writing report: {e}");
        return ExitCode::from(2);
    }

    let failures = report.failures();
    if failures.is_empty() {
        ExitCode::SUCCESS
    } else {
        let mut err = std::io::stderr().lock();
        let _ = writeln!(err, "{} of {} checks failed:", failures.len(), report.checks.len());
        for name in failures {
            let _ = writeln!(err, "  {name}");
        }
        ExitCode::from(1)
    }
}
