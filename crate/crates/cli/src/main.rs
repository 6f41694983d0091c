use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand};
use trivalent::closure::UniverseSpec;
use trivalent::Result;
use trivalent_cli::commands::{self, Outcome, EXIT_NEGATIVE, EXIT_OK};
use trivalent_cli::config::{split_list, Format, Mode, RunConfig, SchemeSet};
use trivalent_cli::suite::{self, SuiteConfig};

/// Three-valued consequence: validity checks, two-step derivations, scheme
/// listings, closures over bounded universes, and the verification suite.
#[derive(Parser)]
#[command(name = "trivalent", version)]
struct Cli {
    /// TOML file with defaults for any flag (same names, kebab-case).
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide an inference for each requested scheme and standard.
    Check {
        inference: String,
        /// Preset name, `id:<code>`, or scheme file. Repeatable.
        #[arg(long)]
        scheme: Vec<String>,
        /// `ss`, `tt`, `st`, `ts`, or `<premise>/<conclusion>` value sets such as `1i/1`. Repeatable.
        #[arg(long)]
        standard: Vec<String>,
        /// Accept scheme files that are not Boolean normal and monotonic.
        #[arg(long)]
        allow_non_bnm: bool,
    },
    /// Derive a classically valid inference from tt steps and one ss step.
    Derive {
        inference: String,
        #[arg(long)]
        tt_scheme: Option<String>,
        #[arg(long)]
        ss_scheme: Option<String>,
    },
    /// List the sixteen BNM schemes, or check a scheme file.
    Schemes {
        /// Mark the strong, weak and middle presets.
        #[arg(long)]
        named: bool,
        /// Check the tables in this file instead of listing.
        #[arg(long, value_name = "FILE")]
        check: Option<PathBuf>,
    },
    /// Close an inference-set file within a universe.
    Closure {
        file: PathBuf,
        #[arg(long, value_enum)]
        mode: Option<Mode>,
        #[command(flatten)]
        universe: UniverseArgs,
    },
    /// Run the verification suite.
    Verify {
        #[arg(long)]
        seed: Option<u64>,
        /// Size of the random corpus.
        #[arg(long)]
        sample: Option<usize>,
        /// Restrict to these claims (comma-separated or repeated).
        #[arg(long)]
        only: Vec<String>,
        #[arg(long, value_enum)]
        schemes: Option<SchemeSet>,
        /// Omit the timestamp and per-claim runtimes.
        #[arg(long)]
        no_timestamp: bool,
    },
}

#[derive(Args)]
struct UniverseArgs {
    /// Comma-separated atoms.
    #[arg(long, value_delimiter = ',')]
    atoms: Option<Vec<String>>,
    #[arg(long)]
    depth: Option<usize>,
    /// Largest premise set.
    #[arg(long)]
    cap: Option<usize>,
    /// Comma-separated reserve atoms.
    #[arg(long, value_delimiter = ',')]
    reserve: Option<Vec<String>>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = run(cli).unwrap_or_else(|e| commands::failure(&e));
    let code = outcome.code;
    if code == EXIT_OK || code == EXIT_NEGATIVE {
        let mut out = std::io::stdout().lock();
        let _ = out.write_all(outcome.output.as_bytes());
    } else {
        eprint!("{}", outcome.output);
    }
    ExitCode::from(code as u8)
}

fn run(cli: Cli) -> Result<Outcome> {
    let cfg = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    let format = cli.format.or(cfg.format).unwrap_or_default();
    let or_list = |flag: Vec<String>, key: &Option<Vec<String>>, default: &str| {
        if !flag.is_empty() {
            split_list(&flag)
        } else {
            key.clone().unwrap_or_else(|| vec![default.to_string()])
        }
    };
    match cli.command {
        Command::Check {
            inference,
            scheme,
            standard,
            allow_non_bnm,
        } => commands::check(
            &inference,
            &or_list(scheme, &cfg.scheme, "strong"),
            &or_list(standard, &cfg.standard, "st"),
            allow_non_bnm || cfg.allow_non_bnm.unwrap_or(false),
            format,
        ),
        Command::Derive {
            inference,
            tt_scheme,
            ss_scheme,
        } => {
            let tt = tt_scheme.or(cfg.tt_scheme.clone()).unwrap_or_else(|| "strong".into());
            let ss = ss_scheme.or(cfg.ss_scheme.clone()).unwrap_or_else(|| "strong".into());
            commands::derive(&inference, &tt, &ss, format)
        }
        Command::Schemes { named, check } => commands::schemes(named, check.as_deref(), format),
        Command::Closure { file, mode, universe } => {
            let text = std::fs::read_to_string(&file).map_err(|e| {
                trivalent::Error::Precondition(format!("cannot read {}: {e}", file.display()))
            })?;
            let mode = mode.or(cfg.mode).unwrap_or_default();
            let flags = RunConfig {
                atoms: universe.atoms,
                depth: universe.depth,
                cap: universe.cap,
                reserve: universe.reserve,
                ..RunConfig::default()
            };
            // Flags beat the config file, which beats the file header.
            let pick = |header: Option<UniverseSpec>| flags.universe(cfg.universe(header.unwrap_or_default()));
            commands::closure(&text, mode, pick, format)
        }
        Command::Verify {
            seed,
            sample,
            only,
            schemes,
            no_timestamp,
        } => {
            let no_timestamp = no_timestamp || cfg.no_timestamp.unwrap_or(false);
            let only = if only.is_empty() {
                cfg.only.clone().unwrap_or_default()
            } else {
                split_list(&only)
            };
            let defaults = SuiteConfig::default();
            let suite_cfg = SuiteConfig {
                seed: seed.or(cfg.seed).unwrap_or(defaults.seed),
                sample: sample.or(cfg.sample).unwrap_or(defaults.sample),
                schemes: schemes.or(cfg.schemes).unwrap_or_default(),
                only,
                timed: !no_timestamp,
                ..defaults
            };
            let timestamp = (!no_timestamp).then(|| {
                SystemTime::now()
                    .duration_since(UNIX_EPOCH)
                    .map_or(0, |d| d.as_secs())
            });
            let report = suite::run(&suite_cfg, timestamp)?;
            let output = match format {
                Format::Json => report.to_json(),
                Format::Text => report.to_text(),
            };
            Ok(Outcome {
                output,
                code: if report.passed() { EXIT_OK } else { EXIT_NEGATIVE },
            })
        }
    }
}
