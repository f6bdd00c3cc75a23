//! `catnet` command-line driver: run verification suites and emit reports.

mod config;
mod emit;
mod suites;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::config::{Config, Settings};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("data: {0}")]
    Data(#[from] catnet::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

#[derive(Debug, Parser)]
#[command(name = "catnet", version, about = "Verification suites for categorical lattice models")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Global {
    /// JSON config file; flags override its fields.
    #[arg(long, global = true)]
    pub config: Option<String>,
    /// Report path, `-` for standard output.
    #[arg(long, global = true)]
    pub out: Option<String>,
    #[arg(long, global = true)]
    pub tolerance: Option<f64>,
    /// Seed, decimal or `0x` hexadecimal.
    #[arg(long, global = true, value_parser = config::parse_seed)]
    pub seed: Option<u64>,
    /// Largest dimension handled with dense matrices.
    #[arg(long, global = true)]
    pub dense_cap: Option<usize>,
    /// Largest dimension handled with sparse matrices.
    #[arg(long, global = true)]
    pub sparse_cap: Option<usize>,
    /// Record wall-clock runtimes (reports are then not byte-reproducible).
    #[arg(long, global = true)]
    pub timings: bool,
}

#[derive(Debug, Args, Default, Clone)]
pub struct DataArgs {
    /// Builtin name or JSON file.
    #[arg(long)]
    pub category: Option<String>,
    /// Builtin module name or JSON file.
    #[arg(long)]
    pub module: Option<String>,
    /// Builtin central functor.
    #[arg(long)]
    pub central: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Pentagon, hexagon and unitarity of category, module and functor data.
    Validate {
        #[command(flatten)]
        data: DataArgs,
    },
    /// Haag duality of a fusion or module spin chain.
    Chain {
        #[command(flatten)]
        data: DataArgs,
        /// Comma-separated simples of the site object.
        #[arg(long)]
        site: Option<String>,
        /// Number of sites.
        #[arg(long)]
        n: Option<usize>,
    },
    /// Local topological order axioms.
    Lto {
        #[command(flatten)]
        data: DataArgs,
        /// `levin_wen` or `toric_pauli`.
        #[arg(long)]
        model: Option<String>,
        /// `WxH`: vertices for Levin-Wen, plaquettes for the Pauli model.
        #[arg(long)]
        lattice: Option<String>,
        /// `bulk`, `smooth`, `rough` or `module`.
        #[arg(long)]
        boundary: Option<String>,
        /// Comma-separated axiom numbers.
        #[arg(long)]
        axioms: Option<String>,
    },
    /// Boundary algebra extraction for the Levin-Wen model.
    Boundary {
        #[command(flatten)]
        data: DataArgs,
        #[arg(long)]
        lattice: Option<String>,
        /// Region `x0,y0,x1,y1`.
        #[arg(long)]
        lambda: Option<String>,
        /// Region `x0,y0,x1,y1`.
        #[arg(long)]
        delta: Option<String>,
    },
    /// Braided categorical net: algebras, cone decomposition, cocycles.
    Net {
        #[command(flatten)]
        data: DataArgs,
        #[arg(long)]
        site: Option<String>,
        /// Region `WxH` at the origin.
        #[arg(long)]
        region: Option<String>,
        /// Largest region checked over all ordering triples.
        #[arg(long)]
        exhaustive: Option<usize>,
    },
    /// Tube algebra and Drinfeld-center simples.
    Tube {
        #[command(flatten)]
        data: DataArgs,
    },
    /// DHR braiding of half-braided bimodules over a fusion chain.
    Dhr {
        #[command(flatten)]
        data: DataArgs,
        #[arg(long)]
        n: Option<usize>,
    },
    /// Every suite at its default size.
    All,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("catnet: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<bool, CliError> {
    let file = match &cli.global.config {
        Some(p) => Config::load(p)?,
        None => Config::default(),
    };
    let settings = Settings::resolve(&cli.global, &file)?;
    let report = suites::dispatch(&cli.command, &file, &settings)?;
    let passed = report.passed();
    let doc = emit::document(&report, &settings);
    let text = emit::canonical(&doc);
    let summary = emit::summary(&report);
    match settings.out.as_deref() {
        Some("-") => {
            println!("{text}");
            eprint!("{summary}");
        }
        Some(path) => {
            std::fs::write(path, format!("{text}\n"))?;
            print!("{summary}");
        }
        None => print!("{summary}"),
    }
    Ok(passed)
}
