//! `tamesep`: generate instances, certify them and run experiments.
//!
//! Exit codes: 0 on success, 2 when a certificate or bound check fails,
//! 1 on any operational error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod output;

#[derive(Parser, Debug)]
#[command(name = "tamesep", version, about = "Intersection graphs of translated convex shapes")]
pub struct Cli {
    /// Root seed for randomised steps.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Output file (or directory for `experiment`); stdout when omitted.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Generate an instance or graph file.
    Gen(GenArgs),
    /// Build the intersection graph of an instance.
    Graph { input: PathBuf },
    /// Certify that an instance is (c, ⊑_s)-tame.
    TameCheck {
        input: PathBuf,
        /// Thinness bound; defaults to the instance's expected or measured thinness.
        #[arg(long)]
        c: Option<usize>,
        /// Comparability parameter such as `1` or `5/2`; defaults to the expected or measured s*.
        #[arg(long)]
        s: Option<String>,
    },
    /// Strong coloring numbers `col_{≺,r}` for `r = 1..=r_max`.
    Col {
        input: PathBuf,
        /// `volume`, `given`, `identity` or a JSON file holding a vertex array.
        #[arg(long, default_value = "volume")]
        order: String,
        #[arg(long, default_value_t = 8)]
        r_max: usize,
    },
    /// Find and verify a balanced separator.
    Sep {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::BfsLayer)]
        method: Method,
        /// Radius for the ordering method.
        #[arg(long, default_value_t = 2)]
        r: usize,
        /// Ordering for the ordering method, as for `col`.
        #[arg(long, default_value = "volume")]
        order: String,
    },
    /// Box-projection dichotomy certificate.
    Dichotomy {
        input: PathBuf,
        #[arg(long)]
        k: usize,
    },
    /// Run an experiment from a JSON config.
    Experiment { config: PathBuf },
    /// Run the seeded lemma property suites.
    VerifyLemmas {
        #[arg(long, default_value_t = 1000)]
        pairs: usize,
        #[arg(long, default_value_t = 200)]
        families: usize,
        #[arg(long, default_value_t = 500)]
        interval_pairs: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Exact,
    BfsLayer,
    Ordering,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Wedge,
    NarrowRectangles,
    StarPath,
    RandomBox,
    Sstar,
    Lshape,
    HubStar,
    Path,
    Cycle,
    Complete,
    Grid,
}

#[derive(Args, Debug)]
pub struct GenArgs {
    #[arg(long, value_enum)]
    pub family: Family,
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub r: Option<usize>,
    #[arg(long)]
    pub t: Option<usize>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub d: Option<usize>,
    /// Rectangle thickness for narrow-rectangles, as a rational.
    #[arg(long)]
    pub thickness: Option<String>,
    /// `bounded` or `heavy-tail`.
    #[arg(long, default_value = "bounded")]
    pub profile: String,
    #[arg(long)]
    pub max_thinness: Option<usize>,
    #[arg(long, default_value_t = 4)]
    pub h_max: usize,
    /// Hub tower level sizes, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub counts: Vec<usize>,
    /// Hub tower path lengths, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub lengths: Vec<usize>,
    /// Grid width and height.
    #[arg(long)]
    pub w: Option<usize>,
    #[arg(long)]
    pub h: Option<usize>,
}

fn init_threads() -> Result<(), commands::CliError> {
    let Ok(v) = std::env::var("TAMESEP_THREADS") else { return Ok(()) };
    let n: usize = v.parse().map_err(|_| commands::CliError::Usage(format!("TAMESEP_THREADS={v:?} is not a count")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| commands::CliError::Usage(e.to_string()))
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match init_threads().and_then(|()| commands::run(&cli)) {
        Ok(commands::Status::Ok) => ExitCode::SUCCESS,
        Ok(commands::Status::Violation) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
