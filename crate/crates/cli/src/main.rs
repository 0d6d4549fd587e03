//! `symchaos`: chaos decisions and certificates for one-sided SFTs.

mod commands;
mod report;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use symchaos_core::criterion::DEFAULT_BUDGET;

use report::{ErrorBody, ErrorEnvelope, Header, TOOL, VERSION};

#[derive(Parser, Debug)]
#[command(name = "symchaos", version, about = "Chaos decisions and certificates for one-sided subshifts of finite type")]
pub struct Cli {
    /// Write the report here instead of stdout.
    #[arg(short, long, global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Transitivity, period, total transitivity, weak mixing, Devaney.
    Analyze { sft: PathBuf },
    /// Hitting times N(U,V) up to a horizon.
    Hit(HitArgs),
    /// Search for a subsystem Y with X × Y transitive.
    Criterion(CriterionArgs),
    /// Build the nested cylinder family and its certificate.
    Construct(ConstructArgs),
    /// Re-check a certificate or report against a shift.
    Verify { cert: PathBuf, sft: PathBuf },
    /// Scrambled pairs with finite Li-Yorke checks.
    Witness(WitnessArgs),
    /// Enveloping monoid of a finite map, or an exhaustive sweep.
    Ellis(EllisArgs),
    /// All chaos flags with provenance.
    Classify(ClassifyArgs),
    /// Seeded random presentations plus a manifest.
    GenCorpus(GenCorpusArgs),
    /// Graphviz export of a presentation, product or decomposition.
    Dot(DotArgs),
}

#[derive(Args, Debug)]
pub struct HitArgs {
    pub sft: PathBuf,
    #[arg(short = 'U', long = "u")]
    pub u: String,
    #[arg(short = 'V', long = "v")]
    pub v: String,
    #[arg(short = 'H', long = "horizon", default_value_t = 64)]
    pub horizon: usize,
    /// Also check the filter law for U1=U, U2=V at this offset.
    #[arg(long)]
    pub filter_n: Option<usize>,
}

#[derive(Args, Debug)]
pub struct CriterionArgs {
    pub sft: PathBuf,
    /// Longest cycle and most SCC pieces tried.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    pub budget: usize,
    /// Write the product presentation X × Y here.
    #[arg(long)]
    pub emit_product: Option<PathBuf>,
    /// Tuple size for the proximal density check; 0 skips it.
    #[arg(long, default_value_t = 0)]
    pub prox_n: usize,
    /// Proximity threshold exponent e, meaning 2^-e.
    #[arg(long, default_value_t = 4)]
    pub eps: u32,
    #[arg(long, default_value_t = 256)]
    pub horizon: usize,
    #[arg(long, default_value_t = 32)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args, Debug)]
pub struct ConstructArgs {
    pub sft: PathBuf,
    #[arg(short = 'N', long = "levels", default_value_t = 3)]
    pub levels: usize,
    #[arg(long)]
    pub proximal: bool,
    /// Admissible return times, e.g. `k%2==0&&k>=4`.
    #[arg(long = "S", default_value = "all")]
    pub s: String,
    #[arg(long)]
    pub transitive_leaves: bool,
}

#[derive(Args, Debug)]
pub struct WitnessArgs {
    pub sft: PathBuf,
    #[arg(long, default_value_t = 1)]
    pub pairs: usize,
    /// Proximity exponent e, meaning 2^-e.
    #[arg(long, default_value_t = 8)]
    pub eprox: u32,
    /// Separation exponent e, meaning 2^-e.
    #[arg(long, default_value_t = 1)]
    pub delta: u32,
    #[arg(long, default_value_t = 4096)]
    pub horizon: usize,
}

#[derive(Args, Debug)]
pub struct EllisArgs {
    /// A map such as `1:2,2:3,3:2`.
    #[arg(long, conflicts_with = "sweep", required_unless_present = "sweep")]
    pub map: Option<String>,
    /// Check every self-map of a set with at most this many points.
    #[arg(long)]
    pub sweep: Option<usize>,
    #[arg(long)]
    pub with_identity: bool,
}

#[derive(Args, Debug)]
pub struct ClassifyArgs {
    pub sft: PathBuf,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    pub budget: usize,
    /// Write scrambled pairs and a construction certificate here when chaotic.
    #[arg(long)]
    pub emit_witnesses: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct GenCorpusArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 10)]
    pub count: usize,
    #[arg(long, default_value_t = 3)]
    pub alphabet_max: usize,
    #[arg(long, default_value_t = 4)]
    pub vertex_max: usize,
    /// `any`, `transitive` or `chaotic-fixed`.
    #[arg(long, default_value = "any")]
    pub class: String,
    /// Directory receiving one JSON file per shift and `manifest.json`.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct DotArgs {
    pub sft: PathBuf,
    /// Export X × Y for this second shift.
    #[arg(long, conflicts_with_all = ["self_product", "decomposition"])]
    pub product: Option<PathBuf>,
    /// Export X × X.
    #[arg(long, conflicts_with = "decomposition")]
    pub self_product: bool,
    /// Export the cyclic-class shift X_0.
    #[arg(long)]
    pub decomposition: bool,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Analyze { .. } => "analyze",
            Command::Hit(_) => "hit",
            Command::Criterion(_) => "criterion",
            Command::Construct(_) => "construct",
            Command::Verify { .. } => "verify",
            Command::Witness(_) => "witness",
            Command::Ellis(_) => "ellis",
            Command::Classify(_) => "classify",
            Command::GenCorpus(_) => "gen-corpus",
            Command::Dot(_) => "dot",
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut header = Header {
        tool: TOOL,
        version: VERSION,
        schema_version: report::SCHEMA_VERSION,
        command: cli.command.name().to_string(),
        seed: None,
        input_sha256: None,
    };
    let outcome = commands::run(&cli, &mut header);
    let failure = match outcome {
        Ok(None) => return ExitCode::SUCCESS,
        Ok(Some(f)) => f,
        Err(f) => {
            let env = ErrorEnvelope {
                header: &header,
                error: ErrorBody {
                    reason: f.reason.clone(),
                    message: f.message.clone(),
                },
            };
            if let Err(e) = report::emit(cli.output.as_ref(), &report::to_pretty(&env)) {
                eprintln!("symchaos: {}", e.message);
            }
            f
        }
    };
    eprintln!("symchaos: {}: {}", failure.reason, failure.message);
    ExitCode::from(failure.code as u8)
}
