//! The `coarsekit` command line: argument parsing, scalar selection and
//! report rendering. [`run`] does everything except printing and exiting.

mod commands;
mod report;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub use report::{Document, OutputFormat, Report, Table};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ScalarKind {
    /// Integers if every number parses as one, else f64, else rationals.
    Auto,
    Int,
    F64,
    Rational,
}

#[derive(Debug, Parser)]
#[command(
    name = "coarsekit",
    version,
    about = "Finite-scale coarse geometry workbench"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub options: Options,
}

#[derive(Clone, Debug, Args)]
pub struct Options {
    /// Report layout; `machine` prints stable key=value lines.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,
    /// Comparison tolerance (rounded down for integers).
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tolerance: f64,
    /// Seed for randomized suites.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads; results do not depend on it.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Number type used for distances.
    #[arg(long, global = true, value_enum, default_value_t = ScalarKind::Auto)]
    pub scalar: ScalarKind,
    /// Also write every emitted document into this directory.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Debug, Subcommand)]
pub enum Command {
    /// Check the metric axioms of every member.
    Validate { family: PathBuf },
    /// List the r-components of every member.
    Components {
        family: PathBuf,
        #[arg(long)]
        r: String,
    },
    /// Check an asdim certificate.
    CoverCheck {
        family: PathBuf,
        certificate: PathBuf,
    },
    /// Push the covers of a certificate down to the quotient by a group action.
    QuotientCover {
        family: PathBuf,
        action: PathBuf,
        certificate: PathBuf,
    },
    /// ℓᵖ product of the members of a family, with optional product covers.
    Product {
        family: PathBuf,
        /// Exponent: a number >= 1 or `inf`.
        #[arg(long, default_value = "1")]
        p: String,
        /// Asdim certificate whose colored covers are multiplied.
        #[arg(long)]
        covers: Option<PathBuf>,
        /// Entry of the certificate to use.
        #[arg(long, default_value_t = 0)]
        entry: usize,
        /// Disjointness scale checked on the product cover.
        #[arg(long)]
        r: Option<String>,
    },
    /// Search for an (r, n)-decomposition with pieces of bounded diameter.
    Decompose {
        family: PathBuf,
        #[arg(long)]
        r: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        bound: String,
        /// Exhaustive search (the default); answers are decisive.
        #[arg(long, conflicts_with = "greedy")]
        exact: bool,
        /// Greedy search; a miss is reported as unknown.
        #[arg(long)]
        greedy: bool,
    },
    /// Check a staged decomposition certificate.
    CheckCert {
        family: PathBuf,
        certificate: PathBuf,
    },
    /// Check a fibering witness.
    CheckFibering {
        source: PathBuf,
        target: PathBuf,
        witness: PathBuf,
    },
    /// Control and properness envelopes of a map.
    MapAnalyze {
        source: PathBuf,
        target: PathBuf,
        map: PathBuf,
        /// Second map; reports the closeness constant.
        #[arg(long)]
        compare: Option<PathBuf>,
    },
    /// Evaluate φ_t(r).
    Phi {
        #[arg(long)]
        rho: String,
        #[arg(long)]
        t: f64,
        #[arg(long)]
        r: f64,
    },
    /// Run the nine φ properties on random samples.
    PhiSuite {
        /// ρ to test; the standard family when absent.
        #[arg(long)]
        rho: Option<String>,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
    /// Distance between two cone points `label@height`.
    ConeDist {
        family: PathBuf,
        #[arg(long)]
        rho: String,
        /// Member id; the first member when absent.
        #[arg(long)]
        member: Option<String>,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        /// Comma-separated heights for the chain oracle.
        #[arg(long)]
        heights: Option<String>,
    },
    /// Minimax ultrametric of every member.
    Ultrametric {
        family: PathBuf,
        /// Also partition into closed r-balls.
        #[arg(long)]
        r: Option<String>,
    },
    /// Ray-tree map from pieces and the sets Y(1), ..., Y(N).
    RayTree {
        family: PathBuf,
        pieces: PathBuf,
        shells: PathBuf,
    },
    /// Check an Assouad–Nagata control certificate.
    AnCheck {
        family: PathBuf,
        certificate: PathBuf,
    },
}

/// The arguments after the program name, with `--jobs` removed so that the
/// echo does not depend on it.
fn echo(argv: &[String]) -> Vec<String> {
    let mut out = Vec::new();
    let mut skip = false;
    for a in argv.iter().skip(1) {
        if skip {
            skip = false;
        } else if a == "--jobs" {
            skip = true;
        } else if !a.starts_with("--jobs=") {
            out.push(a.clone());
        }
    }
    out
}

/// Parses `argv` (program name first) and runs the command.
pub fn run(argv: &[String]) -> Report {
    let command = echo(argv);
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let mut report = Report {
                command,
                ..Report::default()
            };
            match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    report.message = Some(e.to_string());
                }
                _ => report.error = Some(e.to_string().trim_end().to_string()),
            }
            return report;
        }
    };
    let format = cli.options.format;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.options.jobs.unwrap_or(0))
        .build();
    let mut report = match pool {
        Ok(pool) => pool.install(|| commands::execute(&cli)),
        Err(e) => Report {
            error: Some(format!("cannot start worker threads: {e}")),
            ..Report::default()
        },
    };
    report.command = command;
    report.format = format;
    if report.error.is_none() {
        if let Some(dir) = &cli.options.out {
            if let Err(e) = write_documents(dir, &report.documents) {
                report.error = Some(e);
            }
        }
    }
    report
}

fn write_documents(dir: &std::path::Path, docs: &[Document]) -> Result<(), String> {
    std::fs::create_dir_all(dir).map_err(|e| format!("{}: {e}", dir.display()))?;
    for d in docs {
        let path = dir.join(format!("{}.txt", d.name));
        std::fs::write(&path, &d.text).map_err(|e| format!("{}: {e}", path.display()))?;
    }
    Ok(())
}
