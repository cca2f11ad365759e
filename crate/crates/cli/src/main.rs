use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use tdlc::dynamics::Probe;
use tdlc_cli::report::{emit_csv, emit_json, run_scenario, Flags};
use tdlc_cli::scenario::{load_scenario, Check};
use tdlc_cli::suites::{run_suites, suites_csv, suites_exit_code, suites_json};
use tdlc_cli::CliError;

#[derive(Parser)]
#[command(name = "tdlc", version, about = "Exact entropy and scale for endomorphisms of t.d.l.c. groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Clone)]
struct Common {
    /// Cotrajectory table length.
    #[arg(long, global = true, default_value_t = 64)]
    probe: usize,
    /// Steps for tidy-below checks and the U+ search.
    #[arg(long = "tidy-probe", global = true, default_value_t = 16)]
    tidy_probe: usize,
    /// Family size for nub and scale candidates.
    #[arg(long, global = true, default_value_t = 3)]
    resolution: usize,
    /// Number of base subgroups examined.
    #[arg(long, global = true, default_value_t = 4)]
    base: usize,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Treat unresolved or inconclusive results as failures.
    #[arg(long, global = true)]
    strict: bool,
    /// Add wall-clock timings to the output.
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    Entropy { scenario: PathBuf },
    Scale { scenario: PathBuf },
    Nub { scenario: PathBuf },
    Tidy { scenario: PathBuf },
    Cotraj {
        scenario: PathBuf,
        /// Index of the base subgroup.
        #[arg(long = "base-index", default_value_t = 0)]
        base_index: usize,
    },
    /// Run the checks listed in the scenario.
    Report { scenario: PathBuf },
    /// Run property suites over the built-in catalog.
    Verify {
        #[arg(default_value = "all")]
        suites: Vec<String>,
    },
}

fn single(kind: &str) -> Vec<Check> {
    vec![Check { kind: kind.into(), args: Default::default() }]
}

fn write(common: &Common, text: &str) -> Result<(), CliError> {
    match &common.out {
        Some(p) => std::fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn run(cli: Cli) -> Result<i32, CliError> {
    let c = &cli.common;
    if c.probe == 0 || c.tidy_probe == 0 {
        return Err(CliError::Invalid("probe limits must be positive".into()));
    }
    let flags = Flags {
        probe: Probe { n_max: c.probe, tidy: c.tidy_probe, base: c.base, resolution: c.resolution },
        timing: c.timing,
    };
    let (path, checks) = match cli.command {
        Command::Verify { suites } => {
            let results = run_suites(&suites, flags)?;
            let text = match c.format {
                Format::Json => emit_json(&suites_json(&results, flags)),
                Format::Csv => suites_csv(&results),
            };
            write(c, &text)?;
            return Ok(suites_exit_code(&results, c.strict));
        }
        Command::Entropy { scenario } => (scenario, Some(single("entropy"))),
        Command::Scale { scenario } => (scenario, Some(single("scale"))),
        Command::Nub { scenario } => (scenario, Some(single("nub"))),
        Command::Tidy { scenario } => (scenario, Some(single("tidy"))),
        Command::Cotraj { scenario, base_index } => {
            let mut ch = single("cotraj");
            ch[0].args.insert("base".into(), json!(base_index));
            (scenario, Some(ch))
        }
        Command::Report { scenario } => (scenario, None),
    };
    let sc = load_scenario(&path)?;
    let report = run_scenario(&sc, checks.as_deref(), flags)?;
    let text = match c.format {
        Format::Json => emit_json(&report.json),
        Format::Csv => emit_csv(&report.rows),
    };
    write(c, &text)?;
    Ok(if report.status.failed {
        1
    } else if report.status.unresolved && c.strict {
        3
    } else {
        0
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("tdlc: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
