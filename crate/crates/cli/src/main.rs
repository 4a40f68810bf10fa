mod commands;
mod report;

use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use linkrank::NodeSet;

use crate::report::RunReport;

#[derive(Parser, Debug)]
#[command(
    name = "linkrank",
    version,
    about = "PageRank of a set of webpages and its optimal link structures"
)]
struct Cli {
    /// Worker threads for parallel searches and simulations.
    #[arg(long, global = true, env = "LINKRANK_THREADS")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GraphArgs {
    /// Edge-list file: node count on the first line, then one "i j" per line.
    #[arg(long)]
    pub graph: String,

    /// Damping factor.
    #[arg(long, default_value_t = 0.85)]
    pub c: f64,

    /// Personalization vector, one value per line. Uniform when omitted.
    #[arg(long)]
    pub z_file: Option<String>,

    /// Give every dangling node uniform outlinks instead of rejecting it.
    #[arg(long)]
    pub patch_dangling: bool,
}

#[derive(Args, Debug, Clone)]
pub struct ShapeArgs {
    /// Forbid self-links inside the set.
    #[arg(long)]
    pub no_self_links: bool,

    /// Minimum number of external outlinks of the set.
    #[arg(long, default_value_t = 1)]
    pub min_outlinks: usize,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
pub enum ScopeArg {
    All,
    Internal,
    Outlinks,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
pub enum SimKind {
    Visits,
    Return,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// PageRank vector, plus visit vector and set PageRank when --set is given.
    Pagerank {
        #[command(flatten)]
        graph: GraphArgs,
        /// Node set I, comma separated.
        #[arg(long)]
        set: Option<NodeSet>,
    },
    /// Visit vector v, set PageRank and the set V of best external nodes.
    Visits {
        #[command(flatten)]
        graph: GraphArgs,
        /// Node set I, comma separated (e.g. 1,2,3).
        #[arg(long)]
        set: NodeSet,
    },
    /// Effect on the set PageRank of replacing the outlinks of one node.
    Update {
        #[command(flatten)]
        graph: GraphArgs,
        /// Node set I, comma separated (e.g. 1,2,3).
        #[arg(long)]
        set: NodeSet,
        #[arg(long)]
        node: usize,
        #[arg(long)]
        children: NodeSet,
    },
    /// Builds the best link structure for the set over the fixed external part.
    Optimal {
        #[command(flatten)]
        graph: GraphArgs,
        /// Node set I, comma separated (e.g. 1,2,3).
        #[arg(long)]
        set: NodeSet,
        #[command(flatten)]
        shape: ShapeArgs,
        /// Largest set whose orderings are searched exhaustively.
        #[arg(long, default_value_t = linkrank::structures::MAX_PERM)]
        max_perm: usize,
    },
    /// Outlink, internal and website-shape certificates for the current links.
    Verify {
        #[command(flatten)]
        graph: GraphArgs,
        /// Node set I, comma separated (e.g. 1,2,3).
        #[arg(long)]
        set: NodeSet,
        #[command(flatten)]
        shape: ShapeArgs,
    },
    /// Exhaustive search over the links of the set.
    Brute {
        #[command(flatten)]
        graph: GraphArgs,
        /// Node set I, comma separated (e.g. 1,2,3).
        #[arg(long)]
        set: NodeSet,
        /// Maximize the PageRank of this subset of the set instead.
        #[arg(long)]
        target: Option<NodeSet>,
        #[command(flatten)]
        shape: ShapeArgs,
        /// Largest number of free link bits.
        #[arg(long, default_value_t = linkrank::brute::DEFAULT_CAP)]
        cap: u32,
        /// Which links are free; the others are taken from the graph.
        #[arg(long, value_enum, default_value_t = ScopeArg::All)]
        scope: ScopeArg,
    },
    /// Monte Carlo random surfer.
    Simulate {
        #[arg(value_enum)]
        kind: SimKind,
        #[command(flatten)]
        graph: GraphArgs,
        /// Target set for visit counts.
        #[arg(long)]
        set: Option<NodeSet>,
        /// Start node, or the node whose return time is measured.
        #[arg(long)]
        start: usize,
        #[arg(long, default_value_t = 1_000_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = linkrank::sim::DEFAULT_MAX_STEPS)]
        max_steps: u64,
    },
    /// Graphviz DOT rendering.
    ExportDot {
        #[command(flatten)]
        graph: GraphArgs,
        /// Node set I, comma separated.
        #[arg(long)]
        set: Option<NodeSet>,
        /// Label nodes with their visit values.
        #[arg(long)]
        with_v: bool,
        /// Print the DOT text alone instead of a JSON report.
        #[arg(long)]
        raw: bool,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Pagerank { .. } => "pagerank",
            Command::Visits { .. } => "visits",
            Command::Update { .. } => "update",
            Command::Optimal { .. } => "optimal",
            Command::Verify { .. } => "verify",
            Command::Brute { .. } => "brute",
            Command::Simulate { .. } => "simulate",
            Command::ExportDot { .. } => "export-dot",
        }
    }
}

/// Arguments with file paths removed, for the inputs digest.
fn canonical_params(argv: &[String]) -> String {
    let mut out = Vec::new();
    let mut skip = false;
    for arg in argv.iter().skip(1) {
        if skip {
            skip = false;
        } else if arg == "--graph" || arg == "--z-file" {
            skip = true;
        } else if !arg.starts_with("--graph=") && !arg.starts_with("--z-file=") {
            out.push(arg.as_str());
        }
    }
    out.join("\u{0}")
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(threads) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
        {
            eprintln!("warning: {e}");
        }
    }
    let started = Instant::now();
    let name = cli.command.name();
    let outcome = commands::run(&cli.command);
    let (results, digest, code) = match outcome {
        Ok(out) => {
            if let Some(dot) = out.raw {
                print!("{dot}");
                return ExitCode::SUCCESS;
            }
            eprintln!("{name}: {}", out.summary);
            let digest = report::inputs_digest(
                &out.files.iter().map(Vec::as_slice).collect::<Vec<_>>(),
                &canonical_params(&argv),
            );
            (out.results, digest, 0)
        }
        Err(e) => {
            eprintln!("error: {e}");
            let results =
                serde_json::json!({"error": {"kind": e.kind(), "message": e.to_string()}});
            (
                results,
                report::inputs_digest(&[], &canonical_params(&argv)),
                e.exit_code(),
            )
        }
    };
    let mut report = RunReport {
        schema_version: report::SCHEMA_VERSION,
        command: argv.iter().skip(1).cloned().collect(),
        inputs_digest: digest,
        results,
        timing: report::Timing {
            wall_seconds: started.elapsed().as_secs_f64(),
        },
    };
    report::round_floats(&mut report.results);
    report.timing.wall_seconds = report::round_sig(report.timing.wall_seconds, 12);
    match serde_json::to_string_pretty(&report) {
        Ok(text) => println!("{text}"),
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    ExitCode::from(code)
}

impl From<ScopeArg> for linkrank::brute::Scope {
    fn from(s: ScopeArg) -> Self {
        match s {
            ScopeArg::All => linkrank::brute::Scope::All,
            ScopeArg::Internal => linkrank::brute::Scope::Internal,
            ScopeArg::Outlinks => linkrank::brute::Scope::Outlinks,
        }
    }
}
