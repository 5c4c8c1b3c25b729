//! Command-line interface of the `phan` binary.
//!
//! Exit codes: 0 when every verdict passes, 1 when one fails, 2 for input
//! errors, including a refused out-of-bound run.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::error::Error;
use crate::field::is_prime;
use crate::phan::io::parse_family;
use crate::phan::{BoundVerdict, PhanFamily};
use crate::report::{suites_report, Pipeline, RunReport};
use crate::verify::all_suites;

#[derive(Debug, Parser)]
#[command(
    name = "phan",
    version,
    about = "Build generalized Phan geometries and verify their topology"
)]
pub struct Cli {
    /// Cap on worker threads (default: all cores)
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Write the structured report to this file
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Include wall-clock timings in the report (makes it non-reproducible)
    #[arg(long, global = true)]
    pub timings: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct SpecArgs {
    /// Family file in the phan-spec/1 format
    #[arg(long)]
    pub spec: PathBuf,
    /// Run even if the field-size bound fails
    #[arg(long)]
    pub force: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build the geometry and print its statistics
    Build {
        #[command(flatten)]
        spec: SpecArgs,
        /// Export the facets of the order complex to this file
        #[arg(long)]
        facets: Option<PathBuf>,
    },
    /// Reduced integral homology and sphericity
    Homology {
        #[command(flatten)]
        spec: SpecArgs,
        /// Target sphere dimension (default n - 1)
        #[arg(long, allow_hyphen_values = true)]
        dim: Option<isize>,
        /// Also run the bounded fundamental-group check
        #[arg(long)]
        pi1: bool,
    },
    /// Cohen-Macaulay check over all links
    CmCheck {
        #[command(flatten)]
        spec: SpecArgs,
    },
    /// Replay the filtration and check every stage
    FiltrationVerify {
        #[command(flatten)]
        spec: SpecArgs,
        /// Start from an isotropic point so that the checks must fail
        #[arg(long)]
        negative_control: bool,
    },
    /// Tabulate the field-size bound
    BoundsTable {
        #[arg(long, default_value_t = 4)]
        max_n: usize,
        #[arg(long, default_value_t = 32)]
        max_q: u64,
        #[arg(long, default_value_t = 2)]
        max_m: usize,
    },
    /// Property suites on generated instances
    LemmaTests {
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

enum Failure {
    Input(String),
    Run(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(_) | Error::InvalidSpec(_) | Error::BoundViolated(_) => {
                Failure::Input(e.to_string())
            }
            other => Failure::Run(other.to_string()),
        }
    }
}

fn load(path: &Path) -> std::result::Result<PhanFamily, Failure> {
    let text =
        fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    parse_family(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn pipeline(
    command: &str,
    spec: &SpecArgs,
    timings: bool,
) -> std::result::Result<Pipeline, Failure> {
    let family = load(&spec.spec)?;
    Pipeline::new(command, family, spec.force, timings).map_err(|e| match e {
        Error::BoundViolated(msg) => Failure::Input(format!(
            "refusing to run: the bound {msg}; pass --force to run anyway"
        )),
        other => other.into(),
    })
}

fn write(path: &Path, text: &str) -> std::result::Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn prime_power(q: u64) -> Option<(u32, u32)> {
    let p = (2..=q).find(|d| q % d == 0)?;
    let (mut r, mut e) = (q, 0);
    while r % p == 0 {
        r /= p;
        e += 1;
    }
    (r == 1 && is_prime(p as u32)).then_some((p as u32, e))
}

#[derive(Debug, Serialize)]
pub struct BoundRow {
    pub general: BoundVerdict,
    pub chambers: BoundVerdict,
}

/// Every `(n, q, m, sigma order)` up to the limits, with the bound for
/// arbitrary flags and for full chambers.
pub fn bounds_table(max_n: usize, max_q: u64, max_m: usize) -> Vec<BoundRow> {
    let mut rows = Vec::new();
    for n in 1..=max_n {
        for q in 2..=max_q {
            let Some((_, e)) = prime_power(q) else {
                continue;
            };
            for m in 1..=max_m {
                let orders: &[u8] = if e % 2 == 0 { &[1, 2] } else { &[1] };
                for &s in orders {
                    rows.push(BoundRow {
                        general: BoundVerdict::evaluate(n, q, m, s, false),
                        chambers: BoundVerdict::evaluate(n, q, m, s, true),
                    });
                }
            }
        }
    }
    rows
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn finish(report: RunReport, out: &Option<PathBuf>) -> std::result::Result<bool, Failure> {
    println!("{}", report.summary());
    if let Some(path) = out {
        write(path, &report.to_json())?;
    }
    Ok(report.passed())
}

fn dispatch(cli: &Cli) -> std::result::Result<bool, Failure> {
    match &cli.command {
        Command::Build { spec, facets } => {
            let p = pipeline("build", spec, cli.timings)?;
            if let Some(path) = facets {
                write(path, &p.complex().export_facets())?;
            }
            finish(p.finish(), &cli.out)
        }
        Command::Homology { spec, dim, pi1 } => {
            let mut p = pipeline("homology", spec, cli.timings)?;
            p.homology(*dim, *pi1);
            finish(p.finish(), &cli.out)
        }
        Command::CmCheck { spec } => {
            let mut p = pipeline("cm-check", spec, cli.timings)?;
            p.homology(None, false);
            p.cohen_macaulay()?;
            finish(p.finish(), &cli.out)
        }
        Command::FiltrationVerify {
            spec,
            negative_control,
        } => {
            let mut p = pipeline("filtration-verify", spec, cli.timings)?;
            p.homology(None, false);
            p.filtration(*negative_control)?;
            finish(p.finish(), &cli.out)
        }
        Command::BoundsTable {
            max_n,
            max_q,
            max_m,
        } => {
            let rows = bounds_table(*max_n, *max_q, *max_m);
            println!("n\tq\tm\tsigma\tbound\tholds\tchamber bound\tholds");
            for r in &rows {
                let g = &r.general;
                println!(
                    "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
                    g.n,
                    g.q,
                    g.m,
                    g.sigma_order,
                    g.inequality,
                    yes_no(g.satisfied),
                    r.chambers.inequality,
                    yes_no(r.chambers.satisfied)
                );
            }
            if let Some(path) = &cli.out {
                write(
                    path,
                    &serde_json::to_string_pretty(&rows).expect("plain data serializes"),
                )?;
            }
            Ok(true)
        }
        Command::LemmaTests { seed } => finish(suites_report(all_suites(*seed)?), &cli.out),
    }
}

pub fn run(cli: Cli) -> ExitCode {
    if let Some(k) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match dispatch(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Run(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

/// Parses the process arguments and runs.
pub fn main() -> ExitCode {
    run(Cli::parse())
}

pub fn parse_from<I, T>(args: I) -> std::result::Result<Cli, clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    Cli::try_parse_from(args)
}
