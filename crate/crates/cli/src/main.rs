use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use liecyclic_core::catalog::list_families;
use liecyclic_core::exactalg::{Bindings, Poly};
use liecyclic_core::harness::{
    cmd_check, cmd_check_all, cmd_classify, cmd_report, cmd_search_nonexistence, AlgebraFile, Grid, ReportFormat,
    VerificationReport, DEFAULT_SEED,
};

#[derive(Parser)]
#[command(name = "liecyclic", version, about = "Cyclic left-invariant metrics on Lie groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// List catalog families.
    List {
        #[arg(long)]
        json: bool,
    },
    /// Verify one family, or every family with --all.
    Check {
        #[arg(required_unless_present = "all")]
        id: Option<String>,
        #[arg(long, conflicts_with = "id")]
        all: bool,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// Classify an algebra file.
    Classify {
        file: PathBuf,
        /// Parameter binding `name=value`; repeatable.
        #[arg(long = "bind", value_name = "NAME=VALUE")]
        bind: Vec<String>,
    },
    /// Bounded nonexistence search over a rational grid.
    Search {
        branch: String,
        /// `lo:hi:step`, rationals allowed.
        #[arg(long, default_value = "-2:2:1/2")]
        grid: String,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Aggregate report of every check and search.
    Report {
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
}

fn parse_bindings(items: &[String]) -> Result<Bindings> {
    let mut out = Bindings::new();
    for item in items {
        let Some((name, value)) = item.split_once('=') else {
            bail!("--bind {item:?}: expected NAME=VALUE");
        };
        let v: Poly = value.trim().parse().with_context(|| format!("--bind {name}"))?;
        out.insert(name.trim().to_string(), v);
    }
    Ok(out)
}

fn print_check(reports: &[VerificationReport], json: bool) -> Result<bool> {
    if json {
        println!("{}", serde_json::to_string_pretty(reports)?);
    } else {
        for r in reports {
            let defects: Vec<&str> = r.cyclic_defects.iter().map(|d| d.defect.as_str()).collect();
            println!(
                "{} {} verdict={} defects=[{}] claim: {}",
                if r.pass { "PASS" } else { "FAIL" },
                r.label(),
                serde_json::to_value(r.verdict)?.as_str().unwrap_or("?"),
                defects.join(", "),
                r.claimed_condition
            );
        }
    }
    let failing: Vec<String> = reports.iter().filter(|r| !r.pass).map(|r| r.label()).collect();
    if !failing.is_empty() {
        eprintln!("failing: {}", failing.join(", "));
    }
    Ok(failing.is_empty())
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::List { json } => {
            let all = list_families();
            if json {
                println!("{}", serde_json::to_string_pretty(&all)?);
            } else {
                for f in all {
                    println!("{:<18} {}D  {}", f.id, f.dim, f.provenance);
                }
            }
            Ok(true)
        }
        Command::Check { id, all, seed, json } => {
            let reports = if all {
                cmd_check_all(seed)?
            } else {
                cmd_check(id.as_deref().unwrap_or_default(), seed)?
            };
            print_check(&reports, json)
        }
        Command::Classify { file, bind } => {
            let text = std::fs::read_to_string(&file).with_context(|| format!("reading {}", file.display()))?;
            let parsed = AlgebraFile::from_json(&text).with_context(|| format!("parsing {}", file.display()))?;
            let report = cmd_classify(&parsed, &parse_bindings(&bind)?)?;
            println!("{}", serde_json::to_string_pretty(&report)?);
            Ok(true)
        }
        Command::Search { branch, grid, seed } => {
            let grid: Grid = grid.parse()?;
            let report = cmd_search_nonexistence(&branch, &grid, seed)?;
            println!("{}", serde_json::to_string_pretty(&report)?);
            if !report.pass {
                eprintln!("failing: {}", report.branch);
            }
            Ok(report.pass)
        }
        Command::Report { format, out, seed } => {
            let fmt = match format {
                Format::Json => ReportFormat::Json,
                Format::Text => ReportFormat::Text,
            };
            let (report, rendered) = cmd_report(fmt, out.as_deref(), seed)?;
            if out.is_none() {
                print!("{rendered}");
            }
            if !report.failing.is_empty() {
                eprintln!("failing: {}", report.failing.join(", "));
            }
            Ok(report.pass)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
