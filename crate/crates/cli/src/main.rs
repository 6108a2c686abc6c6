use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;

/// Finite workbench for binary homogeneous structures.
#[derive(Parser, Debug)]
#[command(name = "homoglab", version)]
struct Cli {
    /// Print reports as JSON.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Distance monoid tables.
    #[command(subcommand)]
    Monoid(MonoidCmd),
    /// Saturated R-metric spaces.
    #[command(subcommand)]
    Urysohn(UrysohnCmd),
    /// Compare closed-form dividing with the brute-force oracle in a space.
    Indep(IndepArgs),
    /// Extension problems.
    #[command(subcommand)]
    Extend(ExtendCmd),
    /// Counterexample scenarios and non-homogeneity fixtures.
    #[command(subcommand)]
    Example(ExampleCmd),
    /// Definable equivalence relations.
    #[command(subcommand)]
    Equiv(EquivCmd),
    /// Homogeneity up to a size bound.
    #[command(subcommand)]
    Homog(HomogCmd),
}

#[derive(Subcommand, Debug)]
enum MonoidCmd {
    /// Validate the axioms of a monoid file.
    Check { file: PathBuf },
    /// Simplicity, idempotents, SU-rank and the coordinatization chain.
    Analyze { file: PathBuf },
}

#[derive(Subcommand, Debug)]
enum UrysohnCmd {
    Build {
        #[arg(long)]
        monoid: PathBuf,
        /// Minimum number of points.
        #[arg(short = 'n')]
        n: usize,
        #[arg(short = 'k')]
        k: usize,
        #[arg(short = 'm', default_value_t = 3)]
        m: usize,
        /// Give up beyond this many points; defaults to max(4n, 64).
        #[arg(long)]
        max_size: Option<usize>,
        #[arg(short = 'o')]
        out: PathBuf,
    },
}

#[derive(Args, Debug)]
struct IndepArgs {
    #[arg(long)]
    space: PathBuf,
    #[arg(long)]
    a: usize,
    #[arg(long)]
    b: usize,
    #[arg(long, value_delimiter = ',')]
    base: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum FamilyName {
    Urysohn,
    Bipede,
    Omegapede,
    Crosscut,
}

/// Fragment parameters shared by `extend solve` and `example verify`.
#[derive(Args, Debug, Default)]
struct FragmentArgs {
    /// Feet (bipede), classes and points (ω-pede), or ground size (remarks).
    #[arg(short = 'n')]
    n: Option<usize>,
    /// Saturation level, or the tuple size for the remark fixtures.
    #[arg(short = 'k')]
    k: Option<usize>,
    /// Witness multiplicity.
    #[arg(short = 'm')]
    m: Option<usize>,
    /// Crosscut shape as P-classes,Q-classes,cell size.
    #[arg(long, value_delimiter = ',', num_args = 3)]
    cells: Option<Vec<usize>>,
    /// Space file, for the Urysohn family.
    #[arg(long)]
    space: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum ExtendCmd {
    /// Reduce a problem to two-type steps and solve them in order.
    Solve {
        #[arg(long, value_enum)]
        family: FamilyName,
        #[arg(long)]
        problem: PathBuf,
        #[command(flatten)]
        fragment: FragmentArgs,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ExampleName {
    Crosscut,
    Bipede,
    Omegapede,
    Remark41,
    Remark46,
}

#[derive(Subcommand, Debug)]
enum ExampleCmd {
    /// Regenerate the fragment and run its scenario.
    Verify {
        #[arg(value_enum)]
        which: ExampleName,
        #[command(flatten)]
        fragment: FragmentArgs,
        /// Compare the regenerated structure with this file.
        #[arg(long)]
        fixture: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
enum EquivCmd {
    Discover {
        #[arg(long)]
        structure: PathBuf,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Expect {
    Homogeneous,
    NonHomogeneous,
}

#[derive(Subcommand, Debug)]
enum HomogCmd {
    Check {
        #[arg(long)]
        structure: PathBuf,
        #[arg(short = 'k')]
        k: usize,
        /// Exit 1 unless the verdict is this one.
        #[arg(long, value_enum)]
        expect: Option<Expect>,
    },
}

/// How a successful run ended.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Status {
    Verified,
    Violated,
    Inconclusive,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Ok(seed) = std::env::var("HOMOGLAB_SEED") {
        if seed.parse::<u64>().is_err() {
            eprintln!("warning: ignoring HOMOGLAB_SEED={seed:?}, not an unsigned integer");
        }
    }
    match commands::run(&cli) {
        Ok(Status::Verified) => ExitCode::from(0),
        Ok(Status::Violated) => ExitCode::from(1),
        Ok(Status::Inconclusive) => ExitCode::from(3),
        Err(e) => {
            eprintln!("error: {e:#}");
            match e.downcast_ref::<homoglab::Error>() {
                Some(homoglab::Error::Infeasible { .. }) => ExitCode::from(1),
                _ => ExitCode::from(2),
            }
        }
    }
}
