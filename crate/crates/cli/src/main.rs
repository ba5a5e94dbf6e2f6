//! `persuade`: exact Bayesian persuasion with payments from the command line.

#![allow(clippy::result_large_err)]

mod error;
mod report;
mod solve;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use persuade_core::campaign::{self, Config, Suite};
use persuade_core::fixtures;
use persuade_core::io::{instance_to_json, parse_instance, scheme_to_json};
use persuade_core::multi::DEFAULT_COLUMN_LIMIT;
use persuade_core::PaymentModel;

use error::{exit, CliError};
use solve::{Method, Request};

#[derive(Parser)]
#[command(name = "persuade", version, about = "Optimal signaling schemes with payments, in exact arithmetic")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve an instance under a payment model.
    Solve(SolveArgs),
    /// Write a built-in instance to disk.
    Examples(ExamplesArgs),
    /// Run the seeded property campaigns.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct SolveArgs {
    /// Instance JSON file.
    #[arg(required_unless_present = "example", conflicts_with = "example")]
    input: Option<PathBuf>,
    /// Use a built-in instance instead of a file.
    #[arg(long, value_parser = fixtures::NAMES)]
    example: Option<String>,
    /// Payment model; defaults to the one named in the instance file.
    #[arg(long, value_parser = parse_model)]
    model: Option<PaymentModel>,
    #[arg(long, value_enum, default_value = "lp")]
    method: Method,
    /// Write the scheme JSON here.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Skip the LP cross-check of fast and cutting-plane solves.
    #[arg(long)]
    no_verify: bool,
    /// Cap on 2^N x |states| allocation columns.
    #[arg(long, env = "PERSUADE_SIZE_LIMIT", default_value_t = DEFAULT_COLUMN_LIMIT)]
    size_limit: usize,
}

#[derive(Args)]
struct ExamplesArgs {
    /// Built-in instance name, or `all`.
    name: String,
    /// Output file (one instance) or directory (`all`); defaults to `<name>.json`
    /// in the current directory.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value = "all", value_parser = parse_suite)]
    suite: Suite,
    #[arg(long, default_value_t = 50)]
    seeds: u64,
    #[arg(long, default_value_t = 1)]
    first_seed: u64,
    #[arg(long, default_value_t = 3)]
    max_actions: usize,
    #[arg(long, default_value_t = 3)]
    max_types: usize,
    #[arg(long, default_value_t = 3)]
    max_receivers: usize,
    #[arg(long, default_value_t = 6)]
    max_states: usize,
    /// Where failing instances are written.
    #[arg(long, default_value = "counterexamples")]
    counterexamples: PathBuf,
    #[arg(long, env = "PERSUADE_SIZE_LIMIT", default_value_t = DEFAULT_COLUMN_LIMIT)]
    size_limit: usize,
}

fn parse_model(text: &str) -> Result<PaymentModel, String> {
    PaymentModel::parse(text).ok_or_else(|| format!("unknown payment model {text:?} (zero, nonnegative, budget_balanced, arbitrary)"))
}

fn parse_suite(text: &str) -> Result<Suite, String> {
    Suite::parse(text).ok_or_else(|| format!("unknown suite {text:?} (single, multi, reduction, all)"))
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|source| CliError::Io { path: dir.to_path_buf(), source })?;
    }
    fs::write(path, text).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn cmd_solve(args: SolveArgs) -> Result<u8, CliError> {
    let file = match (&args.input, &args.example) {
        (Some(path), _) => parse_instance(&read(path)?)?,
        (None, Some(name)) => persuade_core::io::InstanceFile { instance: fixtures::by_name(name)?, payment_model: None },
        (None, None) => return Err(CliError::Usage("an input file or --example is required".into())),
    };
    let model = args
        .model
        .or(file.payment_model)
        .ok_or_else(|| CliError::Usage("no payment model: pass --model or set payment_model in the instance".into()))?;
    let req = Request { model, method: args.method, verify: !args.no_verify, column_limit: args.size_limit };
    let report = solve::run(&file.instance, &req)?;
    println!("{report}");
    if let Some(out) = &args.out {
        write(out, &scheme_to_json(&report.solved.scheme_doc(&report.dual)))?;
        println!("scheme written to {}", out.display());
    }
    Ok(if report.all_ok() { exit::OK } else { exit::MISMATCH })
}

fn cmd_examples(args: ExamplesArgs) -> Result<u8, CliError> {
    let names: Vec<&str> = if args.name == "all" { fixtures::NAMES.to_vec() } else { vec![args.name.as_str()] };
    for name in names {
        let instance = fixtures::by_name(name)?;
        let path = match (&args.out, args.name == "all") {
            (Some(dir), true) => dir.join(format!("{name}.json")),
            (Some(file), false) => file.clone(),
            (None, _) => PathBuf::from(format!("{name}.json")),
        };
        write(&path, &instance_to_json(&instance, None))?;
        println!("{name} -> {}", path.display());
    }
    Ok(exit::OK)
}

fn slug(name: &str) -> String {
    let s: String = name.chars().map(|c| if c.is_ascii_alphanumeric() { c.to_ascii_lowercase() } else { '-' }).collect();
    s.split('-').filter(|p| !p.is_empty()).collect::<Vec<_>>().join("-")
}

fn cmd_verify(args: VerifyArgs) -> Result<u8, CliError> {
    if args.max_actions < 2 || args.max_types < 2 || args.max_receivers < 2 || args.max_states < 1 || args.seeds == 0 {
        return Err(CliError::Usage("size caps: actions, types and receivers at least 2, states and seeds at least 1".into()));
    }
    let cfg = Config {
        first_seed: args.first_seed,
        seeds: args.seeds,
        max_actions: args.max_actions,
        max_types: args.max_types,
        max_receivers: args.max_receivers,
        max_states: args.max_states,
        column_limit: args.size_limit,
        ..Config::default()
    };
    let reports = campaign::run(args.suite, &cfg);
    let mut failed = false;
    for rep in &reports {
        println!("{rep}");
        for f in &rep.failures {
            failed = true;
            print!("    seed {}: {}", f.seed, f.detail);
            if let Some(inst) = &f.instance {
                let path = args.counterexamples.join(format!("{}-seed{}.json", slug(rep.name), f.seed));
                write(&path, &instance_to_json(inst, None))?;
                print!(" (instance: {})", path.display());
            }
            println!();
        }
        failed |= !rep.ok();
    }
    Ok(if failed { exit::FAILED } else { exit::OK })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Solve(a) => cmd_solve(a),
        Command::Examples(a) => cmd_examples(a),
        Command::Verify(a) => cmd_verify(a),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
