use std::io::{self, Write};
use std::ops::RangeInclusive;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use rayon::prelude::*;

use chipfire::engine::{simulate, simulate_layers, SimResult, Strategy};
use chipfire::formulas::{fire_profile, FireProfile};
use chipfire::numerics::{height_index, repunit};
use chipfire::schizo::{block_report, inv_sqrt_digits_in, sqrt_digits_in, DEFAULT_MIN_RUN};
use chipfire::sequences::{generate, SequenceId, SequenceKind};
use chipfire::verify::{verify_cell, Mismatch, VerifyPlan};
use chipfire::{Nat, TreeParams};

mod render;

use render::Format;

/// Node-level runs touching more vertices than this need `--force`.
const NODE_GUARD: u64 = 10_000_000;

#[derive(Parser)]
#[command(
    name = "chipfire",
    version,
    about = "Chip-firing on the k-ary tree with a root self-loop"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Stable configuration reached from N chips at the root.
    Stable {
        #[arg(short = 'N', value_parser = parse_nat)]
        chips: Nat,
        #[arg(short, value_parser = parse_tree)]
        k: TreeParams,
        #[command(flatten)]
        out: Output,
    },
    /// Fires per vertex on each layer, root fires and total fires.
    Fires {
        #[arg(short = 'N', value_parser = parse_nat)]
        chips: Nat,
        #[arg(short, value_parser = parse_tree)]
        k: TreeParams,
        #[arg(long, value_enum, default_value_t = Engine::Formula)]
        engine: Engine,
        /// Firing order for `--engine nodes`.
        #[arg(long, default_value = "bfs", value_parser = parse_strategy)]
        strategy: Strategy,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Lift the size guard on node-level simulation.
        #[arg(long)]
        force: bool,
        #[command(flatten)]
        out: Output,
    },
    /// A window of one of the named sequences.
    Seq {
        id: String,
        #[arg(short, value_parser = parse_tree)]
        k: TreeParams,
        /// Number of terms.
        #[arg(short = 'n', default_value_t = 10)]
        count: usize,
        #[arg(long, default_value_t = 1)]
        start: u64,
        /// Emit an `index,value` header line in CSV output.
        #[arg(long)]
        header: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Check every formula against simulation over a grid of (N, k).
    Verify {
        /// A single k or an inclusive range `lo..hi`.
        #[arg(short, value_parser = parse_k_range)]
        k: RangeInclusive<u64>,
        /// Largest pile; every N in 1..=N is checked.
        #[arg(short = 'N', value_parser = parse_u64)]
        n_max: u64,
        /// `none`, `all`, or a comma-separated list of bfs, max, random.
        #[arg(long, default_value = "bfs")]
        strategies: String,
        /// Seeds per random run, counting up from `--seed`.
        #[arg(long, default_value_t = 1)]
        seeds: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: Output,
    },
    /// Digits of sqrt(a(n)) or 1/sqrt(a(n)) and their long digit runs.
    Schizo {
        #[arg(short, value_parser = parse_tree)]
        k: TreeParams,
        #[arg(short)]
        n: usize,
        /// Fractional digits.
        #[arg(short, long = "precision")]
        p: usize,
        #[arg(long)]
        inverse: bool,
        #[arg(long, default_value_t = DEFAULT_MIN_RUN)]
        min_run: usize,
        #[arg(long, default_value_t = 10)]
        radix: u32,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Args)]
struct Output {
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Engine {
    /// Closed forms.
    Formula,
    /// Layer-compressed simulation.
    Layers,
    /// Vertex-by-vertex simulation.
    Nodes,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Mismatch(String),
}

impl From<chipfire::Error> for Failure {
    fn from(e: chipfire::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type CmdResult = Result<String, Failure>;

fn parse_nat(s: &str) -> Result<Nat, String> {
    s.parse::<BigUint>()
        .map_err(|_| format!("`{s}` is not a nonnegative decimal integer"))
}

fn parse_u64(s: &str) -> Result<u64, String> {
    let n = parse_nat(s)?;
    u64::try_from(&n).map_err(|_| format!("{s} is too large"))
}

fn parse_tree(s: &str) -> Result<TreeParams, String> {
    TreeParams::new(parse_u64(s)?).map_err(|e| e.to_string())
}

fn parse_k_range(s: &str) -> Result<RangeInclusive<u64>, String> {
    let (lo, hi) = match s.split_once("..") {
        Some((lo, hi)) => (parse_tree(lo)?, parse_tree(hi.trim_start_matches('='))?),
        None => {
            let k = parse_tree(s)?;
            (k, k)
        }
    };
    let range = u64::from(lo.k())..=u64::from(hi.k());
    if range.is_empty() {
        return Err(format!("empty range {s}"));
    }
    Ok(range)
}

fn parse_strategy(s: &str) -> Result<Strategy, String> {
    s.parse().map_err(|e: chipfire::Error| e.to_string())
}

fn parse_strategies(s: &str) -> Result<Vec<Strategy>, Failure> {
    match s {
        "none" => Ok(Vec::new()),
        "all" => Ok(Strategy::ALL.to_vec()),
        list => list
            .split(',')
            .map(|name| parse_strategy(name.trim()).map_err(Failure::Usage))
            .collect(),
    }
}

fn cmd_stable(chips: &Nat, k: TreeParams, format: Format) -> CmdResult {
    let config = chipfire::numerics::stable_config(chips, k)?;
    render::stable(chips, &config, format)
}

fn node_guard(chips: &Nat, k: TreeParams) -> Result<(), Failure> {
    if chips == &Nat::from(0u32) {
        return Ok(());
    }
    // Every vertex down to one layer past the stable height may be touched.
    let touched = repunit(height_index(chips, k)? + 1, k);
    if touched > Nat::from(NODE_GUARD) {
        return Err(Failure::Usage(format!(
            "node-level simulation would touch {touched} vertices (limit {NODE_GUARD}); \
             use --engine layers or pass --force"
        )));
    }
    Ok(())
}

fn profile_from_sim(chips: &Nat, k: TreeParams, sim: SimResult) -> FireProfile {
    FireProfile {
        chips: chips.clone(),
        k,
        height: sim.fires_by_layer.len(),
        fires: sim.fires_by_layer,
        total: sim.total_fires,
    }
}

fn cmd_fires(
    chips: &Nat,
    k: TreeParams,
    engine: Engine,
    strategy: Strategy,
    seed: u64,
    force: bool,
    format: Format,
) -> CmdResult {
    let profile = match engine {
        Engine::Formula => fire_profile(chips, k),
        Engine::Layers => profile_from_sim(chips, k, simulate_layers(chips, k)?),
        Engine::Nodes => {
            if !force {
                node_guard(chips, k)?;
            }
            profile_from_sim(chips, k, simulate(chips, k, strategy, seed)?)
        }
    };
    render::fires(&profile, format)
}

fn cmd_seq(
    id: &str,
    k: TreeParams,
    start: u64,
    count: usize,
    header: bool,
    format: Format,
) -> CmdResult {
    let kind: SequenceKind = id.parse()?;
    let window = generate(SequenceId::new(kind, k), start, count)?;
    render::sequence(&window, format, header)
}

/// Outcome of a verification sweep. `node_runs` counts node-level runs per cell.
struct Report {
    ks: RangeInclusive<u64>,
    n_max: u64,
    cells: usize,
    node_runs: usize,
    mismatch: Option<Mismatch>,
}

fn cmd_verify(
    ks: RangeInclusive<u64>,
    n_max: u64,
    strategies: &str,
    seeds: u64,
    seed: u64,
    format: Format,
) -> CmdResult {
    if n_max == 0 {
        return Err(Failure::Usage("N must be at least 1".into()));
    }
    if seeds == 0 {
        return Err(Failure::Usage("--seeds must be at least 1".into()));
    }
    let plan = VerifyPlan {
        strategies: parse_strategies(strategies)?,
        seeds: (seed..).take(seeds as usize).collect(),
    };
    let cells: Vec<(u64, u64)> = ks
        .clone()
        .flat_map(|k| (1..=n_max).map(move |n| (k, n)))
        .collect();
    if !plan.strategies.is_empty() {
        for k in ks.clone() {
            node_guard(&Nat::from(n_max), TreeParams::new(k)?)?;
        }
    }
    // Cells are already ordered by (k, N); keep the earliest failure.
    let mismatch = cells
        .par_iter()
        .filter_map(|&(k, n)| {
            let tree = TreeParams::new(k).expect("validated");
            verify_cell(n, tree, &plan).err().map(|m| ((k, n), m))
        })
        .min_by_key(|(cell, _)| *cell)
        .map(|(_, m)| m);
    let node_runs = plan
        .strategies
        .iter()
        .map(|&s| {
            if s == Strategy::RandomEligible {
                plan.seeds.len()
            } else {
                1
            }
        })
        .sum();
    let report = Report {
        ks,
        n_max,
        cells: cells.len(),
        node_runs,
        mismatch,
    };
    let text = render::verify(&report, format)?;
    match report.mismatch {
        None => Ok(text),
        Some(_) => Err(Failure::Mismatch(text)),
    }
}

fn cmd_schizo(
    k: TreeParams,
    n: usize,
    precision: usize,
    inverse: bool,
    min_run: usize,
    radix: u32,
    format: Format,
) -> CmdResult {
    if n == 0 {
        return Err(Failure::Usage("n must be at least 1".into()));
    }
    let value = chipfire::formulas::a_seq(n, k);
    let dump = if inverse {
        inv_sqrt_digits_in(&value, precision, radix)?
    } else {
        sqrt_digits_in(&value, precision, radix)?
    };
    let report = block_report(&dump, min_run)?;
    render::schizo(n, k, &value, &dump, &report, min_run, format)
}

fn run(cli: Cli) -> CmdResult {
    match cli.command {
        Command::Stable { chips, k, out } => cmd_stable(&chips, k, out.format),
        Command::Fires {
            chips,
            k,
            engine,
            strategy,
            seed,
            force,
            out,
        } => cmd_fires(&chips, k, engine, strategy, seed, force, out.format),
        Command::Seq {
            id,
            k,
            count,
            start,
            header,
            out,
        } => cmd_seq(&id, k, start, count, header, out.format),
        Command::Verify {
            k,
            n_max,
            strategies,
            seeds,
            seed,
            out,
        } => cmd_verify(k, n_max, &strategies, seeds, seed, out.format),
        Command::Schizo {
            k,
            n,
            p,
            inverse,
            min_run,
            radix,
            out,
        } => cmd_schizo(k, n, p, inverse, min_run, radix, out.format),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(text) => {
            let mut stdout = io::stdout().lock();
            if stdout.write_all(text.as_bytes()).is_err() {
                return ExitCode::from(2);
            }
            ExitCode::SUCCESS
        }
        Err(Failure::Mismatch(text)) => {
            print!("{text}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
