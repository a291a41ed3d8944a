mod inspect;
mod report;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};
use nervelab_core::Budget;

#[derive(Parser)]
#[command(name = "nervelab", version, about = "Nerves, dualities and homology of finite 2-categories")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Global {
    /// work budget (node visits); default 50M, or NERVELAB_BUDGET
    #[arg(long, global = true)]
    budget: Option<u64>,
    /// machine-readable output (JSON objects, or JSON lines for verify)
    #[arg(long, global = true)]
    json: bool,
    /// seed for randomized modes
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the n-th oriental as an augmented directed complex
    Oriental {
        n: u32,
        /// also export its chain complex as JSON
        #[arg(long)]
        chains: Option<PathBuf>,
    },
    /// Operations on cell shapes and their maps
    #[command(subcommand)]
    Theta(ThetaCmd),
    /// Inspect, convert and build finite 2-categories
    #[command(subcommand)]
    Cat2(Cat2Cmd),
    /// Nerve constructions for a 2-category
    #[command(subcommand)]
    Nerve(NerveCmd),
    /// Betti numbers and torsion of an exported chain complex
    Homology {
        #[arg(long)]
        input: PathBuf,
        /// top homology degree to report
        #[arg(long)]
        dmax: Option<usize>,
    },
    /// Verification pipelines with machine-readable reports
    #[command(subcommand)]
    Verify(VerifyCmd),
}

#[derive(Subcommand)]
enum ThetaCmd {
    /// Compose two morphism files (g after f)
    Compose { g: PathBuf, f: PathBuf },
    /// Apply the duality flipping the listed levels
    Dual {
        /// shape in disc notation, e.g. "(Δ2; Δ1, Δ3)" (or "(D2; D1, D3)")
        object: String,
        /// comma-separated subset of 1,2; "none" for the empty set
        #[arg(long, default_value = "1,2")]
        levels: String,
    },
    /// Count generating cells per dimension
    Counts { object: String },
}

#[derive(Subcommand)]
enum Cat2Cmd {
    /// Check a 2-category file for well-formedness and the axioms
    Validate {
        #[arg(long)]
        input: PathBuf,
    },
    /// Re-emit a 2-category file in canonical form
    Export {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build the 2-category presented by a shape ("oriental2", "two-disc", "point", or disc notation)
    Realize {
        object: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum NerveCmd {
    /// Lax nerve: simplices are vertex chains with arrows and coherence 2-cells
    Street {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 3)]
        dmax: usize,
        /// export normalized chains (degrees 0..dmax-1 exact)
        #[arg(long)]
        chains: Option<PathBuf>,
    },
    /// Bisimplicial nerve via path categories
    Multi {
        #[arg(long)]
        input: PathBuf,
        /// horizontal truncation
        #[arg(long, default_value_t = 2)]
        pmax: usize,
        /// vertical truncation
        #[arg(long, default_value_t = 2)]
        dmax: usize,
    },
    /// Diagonal of the bisimplicial nerve
    Diag {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 3)]
        dmax: usize,
        #[arg(long)]
        chains: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// Check the explicit contraction of each oriental onto its last vertex
    Homotopy {
        /// verify all orientals up to this dimension
        #[arg(long, default_value_t = 4)]
        n: u32,
        /// damage one coefficient first (negative control; the run must fail)
        #[arg(long)]
        perturb: bool,
    },
    /// Betti agreement of the lax nerve, the diagonal and the total complex
    CompareNerves {
        #[arg(long)]
        input: PathBuf,
        /// truncation level (required when the input is not loop-free)
        #[arg(long)]
        dmax: Option<usize>,
    },
    /// Betti invariance of the lax nerve under the level dualities
    Duality {
        #[arg(long)]
        input: PathBuf,
        /// check a single duality instead of all four
        #[arg(long)]
        levels: Option<String>,
        #[arg(long, default_value_t = 3)]
        dmax: usize,
    },
    /// Counting bijection between maps into path categories and maps off wreaths
    PuSc {
        /// connected test shape (2-category file)
        #[arg(long)]
        t: PathBuf,
        /// target 2-category file
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 2)]
        pmax: usize,
    },
    /// Hypotheses and conclusion of the object-bijective weak equivalence criterion
    DwyerKan {
        /// bundle file with source, target and functor fields
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 3)]
        dmax: usize,
    },
}

fn run(cli: Cli) -> Result<i32> {
    let mut budget = match cli.global.budget {
        Some(limit) => Budget::new(limit),
        None => Budget::standard(),
    };
    let json = cli.global.json;
    match cli.cmd {
        Cmd::Oriental { n, chains } => inspect::cmd_oriental(n, json, chains.as_ref()),
        Cmd::Theta(t) => match t {
            ThetaCmd::Compose { g, f } => inspect::cmd_theta_compose(&g, &f),
            ThetaCmd::Dual { object, levels } => {
                let levels = verify::parse_levels(&levels)?;
                inspect::cmd_theta_dual(&object, &levels, json)
            }
            ThetaCmd::Counts { object } => inspect::cmd_theta_counts(&object, json),
        },
        Cmd::Cat2(c) => match c {
            Cat2Cmd::Validate { input } => inspect::cmd_cat2_validate(&input, json),
            Cat2Cmd::Export { input, out } => inspect::cmd_cat2_export(&input, out.as_ref()),
            Cat2Cmd::Realize { object, out } => inspect::cmd_cat2_realize(&object, out.as_ref()),
        },
        Cmd::Nerve(n) => match n {
            NerveCmd::Street { input, dmax, chains } => {
                inspect::cmd_nerve_street(&input, dmax, json, chains.as_ref(), &mut budget)
            }
            NerveCmd::Multi { input, pmax, dmax } => {
                inspect::cmd_nerve_multi(&input, pmax, dmax, json, &mut budget)
            }
            NerveCmd::Diag { input, dmax, chains } => {
                inspect::cmd_nerve_diag(&input, dmax, json, chains.as_ref(), &mut budget)
            }
        },
        Cmd::Homology { input, dmax } => inspect::cmd_homology(&input, dmax, json),
        Cmd::Verify(v) => match v {
            VerifyCmd::Homotopy { n, perturb } => {
                verify::cmd_verify_homotopy(n, perturb, cli.global.seed, json)
            }
            VerifyCmd::CompareNerves { input, dmax } => {
                verify::cmd_compare_nerves(&input, dmax, json, &mut budget)
            }
            VerifyCmd::Duality { input, levels, dmax } => {
                let levels = levels.as_deref().map(verify::parse_levels).transpose()?;
                verify::cmd_verify_duality(&input, levels, dmax, json, &mut budget)
            }
            VerifyCmd::PuSc { t, input, pmax } => {
                verify::cmd_verify_pu_sc(&t, &input, pmax, json, &mut budget)
            }
            VerifyCmd::DwyerKan { input, dmax } => {
                verify::cmd_dwyer_kan(&input, dmax, json, &mut budget)
            }
        },
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            let budget_hit = e
                .downcast_ref::<nervelab_core::Error>()
                .map(|c| matches!(c, nervelab_core::Error::BudgetExceeded { .. }))
                .unwrap_or(false);
            ExitCode::from(if budget_hit { 3 } else { 2 })
        }
    }
}
