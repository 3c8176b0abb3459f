//! `setmap`: command-line front end over `setmap-core`.
//!
//! Exit codes: 0 success, 1 bad input (precondition, schema, usage or I/O),
//! 2 search budget ran out before a verdict, 3 a theorem check found a
//! violation or an internal invariant broke.

mod commands;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use commands::{CliError, Report, Status};

#[derive(Debug, Parser, Serialize)]
#[command(name = "setmap", version, about = "Set mappings generated by pair functions, free sets, arrow relations and tower bounds")]
pub struct Cli {
    /// Emit JSON instead of a table.
    #[arg(long, global = true)]
    pub json: bool,
    /// Fix every search order (the default).
    #[arg(long, global = true, overrides_with = "no_deterministic")]
    #[serde(skip)]
    pub deterministic: bool,
    #[arg(long, global = true, overrides_with = "deterministic")]
    #[serde(skip)]
    pub no_deterministic: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(tag = "name", rename_all = "kebab-case")]
pub enum Command {
    /// Print the set mapping generated by an instance or by a seeded random family.
    Gen(GenArgs),
    /// Maximum free set of a generated mapping.
    Free(FreeArgs),
    /// Sample families looking for one with no free set of the target size.
    Explore(ExploreArgs),
    /// Least type-homogeneous subset of the carrier.
    Homog(HomogArgs),
    /// Run one of the executable lemma or claim checks.
    Verify {
        #[command(subcommand)]
        check: VerifyCmd,
    },
    /// Decide n -> (l_1, ..., l_c)^k.
    Arrow(ArrowArgs),
    /// Exact and symbolic bound expressions.
    Bounds {
        #[command(subcommand)]
        which: BoundsCmd,
    },
    /// Operations on finite forcing conditions.
    Cond {
        #[command(subcommand)]
        op: CondOp,
    },
}

#[derive(Debug, Args, Serialize)]
pub struct GenArgs {
    #[arg(long, conflicts_with = "random")]
    pub instance: Option<PathBuf>,
    /// Arity; overrides the instance's own.
    #[arg(long)]
    pub k: Option<usize>,
    /// Sample a family on this many points instead of reading one.
    #[arg(long, requires = "seed")]
    pub random: Option<usize>,
    /// Ranges of the sampled pair functions.
    #[arg(long, value_delimiter = ',', default_value = "3")]
    pub ranges: Vec<u32>,
    /// Put the max function first in the sampled family.
    #[arg(long)]
    pub with_max: bool,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args, Serialize)]
pub struct FreeArgs {
    #[arg(long)]
    pub instance: PathBuf,
    #[arg(long)]
    pub k: Option<usize>,
    /// Search nodes before giving up.
    #[arg(long, default_value_t = 1_000_000)]
    pub budget: u64,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Profile {
    None,
    InsideMiddleGap,
    AvoidsMiddleGap,
}

#[derive(Debug, Args, Serialize)]
pub struct ExploreArgs {
    #[arg(long)]
    pub target: usize,
    /// Keep only mappings whose images are all smaller than this.
    #[arg(long)]
    pub cap: usize,
    #[arg(long)]
    pub seed: u64,
    /// Families sampled per run.
    #[arg(long)]
    pub budget: u64,
    /// Independent runs, seeded `seed`, `seed + 1`, ...; one JSON line each.
    #[arg(long, default_value_t = 1)]
    pub trials: u64,
    #[arg(long, default_value_t = 8)]
    pub carrier: usize,
    #[arg(long, default_value_t = 2)]
    pub k: usize,
    #[arg(long, value_delimiter = ',', default_value = "3")]
    pub ranges: Vec<u32>,
    #[arg(long)]
    pub with_max: bool,
    #[arg(long, value_enum, default_value_t = Profile::None)]
    pub profile: Profile,
    /// Node budget of each free-set search.
    #[arg(long, default_value_t = 100_000)]
    pub search_budget: u64,
}

#[derive(Debug, Args, Serialize)]
pub struct HomogArgs {
    #[arg(long)]
    pub instance: PathBuf,
    #[arg(long, default_value_t = 5)]
    pub size: usize,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(tag = "check", rename_all = "kebab-case")]
pub enum VerifyCmd {
    /// Homogeneous 5-sets force their middle element into the image of the rest (k = 4).
    Claim4(VerifyArgs),
    /// Quads meeting the case hypotheses put their second element into the image of the rest (k = 3).
    Claim3(VerifyArgs),
    /// Monotonicity of generation under adding pair functions.
    Lemma23(VerifyArgs),
    /// Generation commutes with restriction.
    Lemma24(VerifyArgs),
    /// The club property with bound nu + offset.
    Clubsuit(ClubArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct VerifyArgs {
    /// Check every applicable subset of this instance.
    #[arg(long, conflicts_with = "seed", required_unless_present = "seed")]
    pub instance: Option<PathBuf>,
    /// Run the seeded random suite instead.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, default_value_t = 1000)]
    pub trials: u64,
    /// Node budget of each free-set search in the claim4 suite.
    #[arg(long, default_value_t = 1_000_000)]
    pub budget: u64,
}

#[derive(Debug, Args, Serialize)]
pub struct ClubArgs {
    #[arg(long)]
    pub instance: PathBuf,
    #[arg(long, default_value_t = 1)]
    pub offset: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct ArrowArgs {
    pub n: usize,
    pub k: usize,
    #[arg(long, value_delimiter = ',', required = true)]
    pub targets: Vec<usize>,
    /// Color assignments tried before giving up.
    #[arg(long, default_value_t = 100_000_000)]
    pub budget: u64,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(tag = "bound", rename_all = "kebab-case")]
pub enum BoundsCmd {
    /// Both readings of the upper bound on s_n.
    SUpper { n: u64 },
    /// Tower_n(7).
    TLower { n: u64 },
    /// The Erdos-Rado upper bound for R_k(l; r).
    Er { k: u64, l: u64, r: u64 },
    /// Compare Tower_n(7) against both s_n readings for 2 <= n <= max-n.
    Crossover {
        #[arg(long, default_value_t = 8)]
        max_n: u64,
    },
    /// One stepping-up step from 2l -/-> (l,4)^3.
    StepUp {
        /// Instantiate the parameter.
        #[arg(long)]
        l: Option<u64>,
    },
}

#[derive(Debug, Args, Serialize)]
pub struct BackgroundArgs {
    /// Instance holding the background family.
    #[arg(long)]
    pub instance: PathBuf,
    #[arg(long)]
    pub k: Option<usize>,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(tag = "op", rename_all = "kebab-case")]
pub enum CondOp {
    /// Amalgamate two compatible conditions.
    Amalg {
        first: PathBuf,
        second: PathBuf,
        #[command(flatten)]
        #[serde(flatten)]
        bg: BackgroundArgs,
    },
    /// Add one point to the support.
    Extend {
        file: PathBuf,
        #[arg(long)]
        point: usize,
        #[command(flatten)]
        #[serde(flatten)]
        bg: BackgroundArgs,
    },
    /// Union of a chain, each file extending the one before.
    Chain {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[command(flatten)]
        #[serde(flatten)]
        bg: BackgroundArgs,
    },
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    tool: &'static str,
    version: &'static str,
    command: &'a str,
    seed: Option<u64>,
    deterministic: bool,
    config: &'a Command,
    #[serde(skip_serializing_if = "Option::is_none")]
    result: Option<T>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<serde_json::Value>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let deterministic = !cli.no_deterministic;
    let name = commands::name(&cli.command);
    let envelope = |seed, result, error| Envelope {
        tool: "setmap",
        version: env!("CARGO_PKG_VERSION"),
        command: &name,
        seed,
        deterministic,
        config: &cli.command,
        result,
        error,
    };
    match commands::run(&cli.command) {
        Ok(Report { seed, result, lines, table, status }) => {
            if cli.json {
                match (lines, result) {
                    (true, serde_json::Value::Array(items)) => {
                        for item in items {
                            emit(&to_json(&envelope(seed, Some(item), None), false));
                        }
                    }
                    (_, result) => emit(&to_json(&envelope(seed, Some(result), None), true)),
                }
            } else {
                emit(table.trim_end());
            }
            ExitCode::from(match status {
                Status::Ok => 0,
                Status::Infeasible => 2,
                Status::Violated => 3,
            })
        }
        Err(e) => {
            eprintln!("error: {e}");
            if cli.json {
                let err = serde_json::json!({ "kind": e.kind(), "message": e.to_string() });
                let doc = envelope(None, None::<serde_json::Value>, Some(err));
                emit(&to_json(&doc, true));
            }
            ExitCode::from(e.exit_code())
        }
    }
}

/// One line on stdout; a closed pipe is not an error.
fn emit(line: &str) {
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{line}");
}

fn to_json<T: Serialize>(v: &T, pretty: bool) -> String {
    let s = if pretty { serde_json::to_string_pretty(v) } else { serde_json::to_string(v) };
    s.expect("reports serialize")
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(m) | CliError::Usage(m) => write!(f, "{m}"),
        }
    }
}
