use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use pbist::bench::{run_bench, setops_cmd, OpKind, SetOp, WorkloadSpec};
use pbist::{Config, Key, Routing};

#[derive(Parser)]
#[command(
    name = "pbist",
    version,
    about = "Parallel-batched interpolation search tree tools"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Time batched operations across worker counts.
    Bench(BenchArgs),
    /// Union, intersection or difference of two key files.
    Setops {
        /// union | intersect | diff
        op: SetOp,
        file_a: PathBuf,
        file_b: PathBuf,
        out: PathBuf,
        #[command(flatten)]
        tree: TreeArgs,
    },
}

#[derive(Args)]
struct TreeArgs {
    /// Leaf threshold.
    #[arg(long = "H", default_value_t = 10)]
    leaf_threshold: usize,
    /// Rebuild factor.
    #[arg(long = "C", default_value_t = 2)]
    rebuild_factor: usize,
    /// Interpolation index exponent.
    #[arg(long = "eps", default_value_t = 0.75)]
    eps: f64,
    /// Sequential cutoff for fork-join work.
    #[arg(long = "cutoff", default_value_t = pbist::primitives::DEFAULT_GRAIN)]
    cutoff: usize,
    /// Route inner nodes by merge-rank instead of the interpolation index.
    #[arg(long)]
    rank_routing: bool,
}

impl TreeArgs {
    fn config(&self) -> Config {
        Config {
            leaf_threshold: self.leaf_threshold,
            rebuild_factor: self.rebuild_factor,
            index_exponent: self.eps,
            seq_cutoff: self.cutoff,
            routing: if self.rank_routing {
                Routing::Rank
            } else {
                Routing::Interpolation
            },
        }
    }
}

#[derive(Args)]
struct BenchArgs {
    /// Keys are drawn from [-range, range].
    #[arg(long, default_value_t = 1_000_000)]
    range: Key,
    /// Inclusion probability of each integer in the initial set.
    #[arg(long, default_value_t = 0.5)]
    prob: f64,
    /// Keys drawn per operation batch (before deduplication).
    #[arg(long, default_value_t = 100_000)]
    batch: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Comma-separated worker counts.
    #[arg(long, value_delimiter = ',', default_value = "1")]
    workers: Vec<usize>,
    /// Comma-separated operations to time.
    #[arg(long, value_delimiter = ',', default_value = "contains,insert,remove")]
    ops: Vec<OpKind>,
    /// Repetitions averaged per cell.
    #[arg(long, default_value_t = 10)]
    reps: usize,
    /// Also time a sequential BTreeSet applying the same batches.
    #[arg(long)]
    baseline: bool,
    /// Emit JSON instead of CSV.
    #[arg(long)]
    json: bool,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    tree: TreeArgs,
}

fn bench(args: BenchArgs) -> Result<(), String> {
    let spec = WorkloadSpec {
        range: args.range,
        prob: args.prob,
        batch: args.batch,
        seed: args.seed,
        ops: args.ops.iter().map(|&op| (op, args.batch)).collect(),
    };
    let report = run_bench(
        &spec,
        args.tree.config(),
        &args.workers,
        args.reps,
        args.baseline,
    )
    .map_err(|e| e.to_string())?;
    let text = if args.json {
        report.to_json()
    } else {
        report.to_csv()
    };
    match args.out {
        Some(path) => fs::write(&path, text).map_err(|e| format!("{}: {e}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Bench(args) => bench(args),
        Command::Setops {
            op,
            file_a,
            file_b,
            out,
            tree,
        } => setops_cmd(op, &file_a, &file_b, &out, tree.config()).map_err(|e| e.to_string()),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(msg) => {
            eprintln!("pbist: {msg}");
            ExitCode::FAILURE
        }
    }
}
