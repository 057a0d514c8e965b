use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod render;

use commands::{run, Failure};

#[derive(Parser, Debug)]
#[command(name = "spencer", version, about = "Spencer cohomology, involutivity and characteristics of symbolic PDE systems")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: Opts,
}

#[derive(Args, Debug, Clone)]
pub struct Opts {
    /// Highest symbol degree computed.
    #[arg(long, global = true, default_value_t = 8)]
    pub max_degree: usize,
    /// Seed for every randomized ("generic basis") step.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Scalar field for characteristic covectors: rationals or Gaussian rationals.
    #[arg(long, global = true, value_enum, default_value_t = Field::Q)]
    pub field: Field,
    /// Subspace V* of T*, e.g. "dx, dy+dz".
    #[arg(long, global = true)]
    pub vstar: Option<String>,
    /// Subspace W of T, e.g. "@x - @y".
    #[arg(long, global = true)]
    pub w: Option<String>,
    /// Order k of the equivalence reduction.
    #[arg(long, global = true)]
    pub order: Option<usize>,
    /// Acyclicity depth.
    #[arg(long, global = true)]
    pub m: Option<usize>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Field {
    Q,
    Qi,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Orders, cohomology, involutivity and I-properties; with --vstar also
    /// characteristics, both theorem checks and the E1 page.
    Analyze { file: PathBuf },
    /// Spencer cohomology table; with --vstar also the δ′ and restricted tables.
    Cohomology { file: PathBuf },
    /// Cartan test per order, I1/I2/I3 and (with --m) acyclicity.
    Involutive { file: PathBuf },
    /// Restriction to W (--w, or the annihilator of --vstar).
    Restrict { file: PathBuf },
    /// Equivalence reduction to first order (--order, default r_min).
    Reduce { file: PathBuf },
    /// Descended system and the least descender.
    Descend { file: PathBuf },
    /// Characteristicity of --vstar, or a search for non-characteristic subspaces.
    Char { file: PathBuf },
    /// E0, E1, E2 of the spectral sequence along --vstar.
    E1table { file: PathBuf },
    /// Cell-by-cell restriction formula, pencil equivalence, or the exact-sequence Euler sums.
    Verify {
        #[arg(value_enum)]
        what: Verify,
        file: PathBuf,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verify {
    Thm1,
    Thm2,
    Corollary,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 3,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(out) => {
            print!("{}", out.render(cli.opts.format));
            ExitCode::SUCCESS
        }
        Err(f) => {
            let Failure { code, .. } = f;
            match cli.opts.format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&f.to_json()).expect("serializable")),
                Format::Text => eprintln!("error: {}", f.message),
            }
            ExitCode::from(code)
        }
    }
}
