mod commands;
mod output;
mod parse;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use output::{Format, Report};

/// Exact invariant theory for polyhedral groups and Automorphic Lie Algebras.
#[derive(Parser)]
#[command(name = "alia-kit", version)]
struct Cli {
    /// Output format; CSV renders the primary table of the JSON document.
    #[arg(long = "out", visible_alias = "format", global = true, value_enum, default_value = "json")]
    out: Format,
    /// Same as --out json.
    #[arg(long, global = true, conflicts_with = "out")]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

/// A group, either as one word ("D5", "Y") or as a kind plus --N.
#[derive(Args, Clone)]
pub struct GroupArgs {
    #[arg(long = "group", visible_alias = "kind")]
    pub group: String,
    #[arg(long = "N", visible_alias = "n")]
    pub n: Option<u32>,
    /// Use the preferred cover (D_2N for even N) instead of the standard matrix group.
    #[arg(long)]
    pub cover: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Group data and character tables.
    Group {
        #[command(subcommand)]
        what: GroupCommand,
    },
    /// Molien series of an isotypic component.
    Molien {
        #[command(flatten)]
        group: GroupArgs,
        /// Character name; defaults to the trivial character.
        #[arg(long = "char")]
        chi: Option<String>,
        /// Highest degree; defaults to twice the order of the group.
        #[arg(long)]
        bound: Option<usize>,
    },
    /// Ground forms, their exceptional orbits and relation.
    GroundForms {
        #[arg(long = "group", visible_alias = "kind")]
        group: String,
        #[arg(long = "N", visible_alias = "n")]
        n: Option<u32>,
    },
    /// Invariant vectors of a given degree.
    Invariants {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long = "char")]
        chi: String,
        #[arg(long)]
        degree: u32,
    },
    /// Free generators of a module of invariant vectors and their determinant.
    DetInvariants {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long = "char")]
        chi: String,
    },
    /// Automorphic Lie Algebras.
    Alia {
        #[command(subcommand)]
        what: AliaCommand,
    },
    /// Matrices of invariants of the dihedral sl2 algebra.
    Moi {
        #[arg(long = "N", visible_alias = "n")]
        n: u32,
        #[arg(long)]
        j: u32,
    },
    /// Evaluate at a point: invariant vectors with --pole/--point, or the
    /// fixed subalgebra of a Lie algebra with --lie.
    Evaluate(commands::EvaluateArgs),
    /// Root-system cohomology.
    Rootcoh {
        #[command(subcommand)]
        what: RootcohCommand,
    },
    /// Regression suites; exits with 3 if any check fails.
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        suite: verify::Suite,
    },
}

#[derive(Subcommand)]
enum GroupCommand {
    /// Order, orbit data and degrees of the ground forms.
    Info {
        #[arg(long = "kind", visible_alias = "group")]
        kind: String,
        #[arg(long = "N", visible_alias = "n")]
        n: Option<u32>,
    },
    /// Character table with class sizes and centralisers.
    Table {
        #[command(flatten)]
        group: GroupArgs,
    },
    /// Decompositions of the symmetric powers of the natural representation.
    Sympow {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long, default_value_t = 12)]
        max_h: u32,
    },
}

#[derive(Subcommand)]
enum AliaCommand {
    /// Cartan-Weyl normal form of the dihedral sl2 algebra.
    Dihedral {
        #[arg(long = "N", visible_alias = "n")]
        n: u32,
        #[arg(long)]
        j: u32,
        /// a, b, c or generic:CA,CB with rational CA, CB.
        #[arg(long, default_value = "a")]
        orbit: String,
        /// Also evaluate the algebra at this point (inf, a, b, c or a rational).
        #[arg(long)]
        at: Option<String>,
    },
    /// Exploratory search for an element with constant ad-spectrum in the
    /// dihedral sl2 algebra; reports whether one was found.
    CartanSearch {
        #[arg(long = "N", visible_alias = "n")]
        n: u32,
        #[arg(long)]
        j: u32,
        #[arg(long, default_value = "a")]
        orbit: String,
        /// Integer coefficients range over [-max_coeff, max_coeff].
        #[arg(long, default_value_t = 2)]
        max_coeff: u32,
        /// Highest degree of the coefficients in the automorphic function.
        #[arg(long, default_value_t = 0)]
        max_degree: u32,
    },
    /// Generators and structure constants over the ring of invariants.
    Polynomial {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long = "char")]
        chi: String,
        #[arg(long)]
        lie: String,
        /// Refuse groups whose order exceeds this; the largest cases are slow.
        #[arg(long, default_value_t = 24)]
        degree_cap: u32,
    },
}

#[derive(Subcommand)]
enum RootcohCommand {
    /// Admissible cochains of a given norm, optionally up to isomorphism.
    Enumerate(commands::EnumerateArgs),
    /// The norm forced by a pole orbit.
    Kappa {
        #[arg(long)]
        phi: String,
        #[arg(long)]
        pole: String,
    },
}

/// A check that ran and failed; exit code 3.
#[derive(Debug)]
pub struct Failed(pub String);

impl std::fmt::Display for Failed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "check failed: {}", self.0)
    }
}

impl std::error::Error for Failed {}

/// Bad flag values that clap cannot see; exit code 2.
#[derive(Debug)]
pub struct Usage(pub String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for Usage {}

fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if cause.is::<Failed>() {
            return 3;
        }
        if cause.is::<Usage>() {
            return 2;
        }
        match cause.downcast_ref::<alia_core::Error>() {
            Some(alia_core::Error::Inconsistent(_)) => return 3,
            Some(alia_core::Error::InvalidInput(_)) => return 2,
            _ => {}
        }
    }
    1
}

fn limit_threads() -> anyhow::Result<()> {
    if let Ok(v) = std::env::var("ALIAKIT_THREADS") {
        match v.trim().parse::<usize>() {
            Ok(k) if k > 0 => std::env::set_var("RAYON_NUM_THREADS", k.to_string()),
            _ => return Err(Usage(format!("ALIAKIT_THREADS must be a positive integer, got {v:?}")).into()),
        }
    }
    Ok(())
}

fn dispatch(cmd: Command) -> anyhow::Result<Report> {
    use commands as c;
    match cmd {
        Command::Group { what } => match what {
            GroupCommand::Info { kind, n } => c::group_info(&kind, n),
            GroupCommand::Table { group } => c::group_table(&group),
            GroupCommand::Sympow { group, max_h } => c::group_sympow(&group, max_h),
        },
        Command::Molien { group, chi, bound } => c::molien(&group, chi.as_deref(), bound),
        Command::GroundForms { group, n } => c::ground_forms(&group, n),
        Command::Invariants { group, chi, degree } => c::invariants(&group, &chi, degree),
        Command::DetInvariants { group, chi } => c::det_invariants(&group, &chi),
        Command::Alia { what } => match what {
            AliaCommand::Dihedral { n, j, orbit, at } => c::alia_dihedral(n, j, &orbit, at.as_deref()),
            AliaCommand::CartanSearch { n, j, orbit, max_coeff, max_degree } => {
                c::alia_cartan_search(n, j, &orbit, max_coeff, max_degree)
            }
            AliaCommand::Polynomial { group, chi, lie, degree_cap } => {
                c::alia_polynomial(&group, &chi, &lie, degree_cap)
            }
        },
        Command::Moi { n, j } => c::moi(n, j),
        Command::Evaluate(args) => c::evaluate(&args),
        Command::Rootcoh { what } => match what {
            RootcohCommand::Enumerate(args) => c::rootcoh_enumerate(&args),
            RootcohCommand::Kappa { phi, pole } => c::rootcoh_kappa(&phi, &pole),
        },
        Command::Verify { suite } => verify::run(suite),
    }
}

fn run(cli: Cli) -> anyhow::Result<()> {
    limit_threads()?;
    let format = if cli.json { Format::Json } else { cli.out };
    let report = dispatch(cli.command)?;
    print!("{}", report.render(format)?);
    if let Some((path, dot)) = &report.dot {
        write_file(path, dot)?;
    }
    match report.failed {
        Some(what) => Err(Failed(what).into()),
        None => Ok(()),
    }
}

fn write_file(path: &PathBuf, text: &str) -> anyhow::Result<()> {
    std::fs::write(path, text).map_err(|e| anyhow::anyhow!("writing {}: {e}", path.display()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
