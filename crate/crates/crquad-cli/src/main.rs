use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crquad_cli::census::CensusParams;
use crquad_cli::{CmdOutput, Exit};

/// Exact graded automorphism algebras of CR model quadrics.
#[derive(Parser)]
#[command(name = "crquad", version, about)]
struct Cli {
    /// Render reports as human-readable text instead of JSON.
    #[arg(long, global = true)]
    text: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Validate a quadric file and report the nondegeneracy conditions.
    Validate { file: PathBuf },
    /// Weight components of aut Q with dimensions (and optional bases).
    Components {
        file: PathBuf,
        /// Stop at this weight even if components keep coming.
        #[arg(long)]
        max_weight: Option<i32>,
        /// Include the canonical bases in the report.
        #[arg(long)]
        emit_basis: bool,
    },
    /// Rigidity and exceptionality, both decision paths, conditions (I)/(II).
    Decide {
        file: PathBuf,
        /// Witness-search budget for the condition checks.
        #[arg(long, default_value_t = 64)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Classify seeded random quadrics of a CR type by the length of g_+.
    Census {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Worker count (default: CRQUAD_JOBS or all cores). Output is
        /// identical for any value.
        #[arg(long)]
        jobs: Option<usize>,
        /// Directory for quadric files of exceptional hits.
        #[arg(long, default_value = ".")]
        save_dir: PathBuf,
    },
    /// Commutative-algebra quadrics and the explicit Poincare automorphisms.
    Raq {
        #[command(subcommand)]
        sub: RaqCmd,
    },
    /// Characteristic-module quotient dimensions and the a-solution space.
    Charmod {
        file: PathBuf,
        /// Quotient dimensions are reported for degrees 0..=D (at least k+2).
        #[arg(long)]
        max_degree: Option<usize>,
    },
    /// Emit a catalog quadric (heisenberg:<n>, last:<n>, palinchak-q5,
    /// raq-dual, raq-split).
    Catalog {
        name: String,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum RaqCmd {
    /// Build the quadric file of an algebra.
    Build {
        #[arg(long)]
        algebra: PathBuf,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Decide the algebra's quadric and verify the expected five components.
    Check {
        #[arg(long)]
        algebra: PathBuf,
        #[arg(long, default_value_t = 64)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Apply the Poincare map at a point; values are comma-separated
    /// COMPLEX/RATIONAL lists of length n.
    Map {
        #[arg(long)]
        algebra: PathBuf,
        #[arg(long)]
        a: String,
        #[arg(long)]
        r: String,
        #[arg(long)]
        z: String,
        #[arg(long)]
        w: String,
    },
}

fn default_jobs() -> usize {
    if let Ok(v) = std::env::var("CRQUAD_JOBS") {
        if let Ok(j) = v.parse::<usize>() {
            if j >= 1 {
                return j;
            }
        }
    }
    std::thread::available_parallelism().map_or(1, |p| p.get())
}

fn run(cli: &Cli) -> crquad::Result<CmdOutput> {
    match &cli.cmd {
        Cmd::Validate { file } => crquad_cli::cmd_validate(file),
        Cmd::Components { file, max_weight, emit_basis } => {
            crquad_cli::cmd_components(file, *max_weight, *emit_basis)
        }
        Cmd::Decide { file, trials, seed } => crquad_cli::cmd_decide(file, *trials, *seed),
        Cmd::Census { n, k, samples, seed, jobs, save_dir } => {
            let params = CensusParams {
                n: *n,
                k: *k,
                samples: *samples,
                seed: *seed,
                jobs: jobs.unwrap_or_else(default_jobs),
                save_dir: save_dir.clone(),
            };
            crquad_cli::cmd_census(&params)
        }
        Cmd::Raq { sub } => match sub {
            RaqCmd::Build { algebra, out } => crquad_cli::cmd_raq_build(algebra, out),
            RaqCmd::Check { algebra, trials, seed } => {
                crquad_cli::cmd_raq_check(algebra, *trials, *seed)
            }
            RaqCmd::Map { algebra, a, r, z, w } => crquad_cli::cmd_raq_map(algebra, a, r, z, w),
        },
        Cmd::Charmod { file, max_degree } => crquad_cli::cmd_charmod(file, *max_degree),
        Cmd::Catalog { name, out } => crquad_cli::cmd_catalog(name, out.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Usage problems are input errors (exit 1); --help/--version are
            // clean exits.
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(&cli) {
        Ok(out) => {
            print!("{}", if cli.text { out.text } else { out.json });
            ExitCode::from(out.exit.code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            let code = match e {
                crquad::Error::InternalInconsistency(_) => 2,
                _ => 1,
            };
            ExitCode::from(code)
        }
    }
}
