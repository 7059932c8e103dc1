use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use fedsim_cli::compare::{compare, compare_strategies, format_deltas};
use fedsim_cli::report::read_summary_csv;
use fedsim_cli::{execute, CliError, Grid, RunManifest};

/// Federated malware-classification experiments: FedAvg vs DW-FedAvg.
#[derive(Parser)]
#[command(name = "fedsim", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment grid and write round logs and summaries.
    Run(Box<RunArgs>),
    /// Print metric differences (percentage points) between summaries.
    Compare {
        /// Baseline summary CSV. Alone, compares dw-fedavg against fedavg inside it.
        baseline: PathBuf,
        /// Candidate summary CSV.
        candidate: Option<PathBuf>,
    },
}

#[derive(Args)]
struct RunArgs {
    /// Run manifest; flags below override its values.
    #[arg(long)]
    manifest: Option<PathBuf>,
    /// Grid preset (`tables23`: four datasets × 5,10,15 clients × 10,20 rounds × both strategies).
    #[arg(long)]
    grid: Option<String>,
    /// Comma-separated dataset names.
    #[arg(long, visible_alias = "datasets")]
    dataset: Option<String>,
    /// Comma-separated client counts.
    #[arg(long)]
    clients: Option<String>,
    /// Comma-separated round counts.
    #[arg(long)]
    rounds: Option<String>,
    /// fedavg, dw-fedavg, or both comma-separated.
    #[arg(long, visible_alias = "strategies")]
    strategy: Option<String>,
    /// Reward/penalty factor of the dynamic weights.
    #[arg(long)]
    alpha: Option<f64>,
    /// SGD learning rate.
    #[arg(long)]
    lr: Option<f64>,
    /// Mini-batch size.
    #[arg(long)]
    batch_size: Option<usize>,
    /// Local epochs per round.
    #[arg(long)]
    local_epochs: Option<usize>,
    /// Independent repeats per cell; repeat r uses seed + r.
    #[arg(long)]
    repeats: Option<usize>,
    /// Master seed.
    #[arg(long)]
    seed: Option<u64>,
    /// 0 = all cores, 1 = sequential.
    #[arg(long)]
    threads: Option<usize>,
    /// Comma-separated hidden layer widths.
    #[arg(long)]
    hidden: Option<String>,
    /// Share of the data kept as the global holdout.
    #[arg(long)]
    holdout_fraction: Option<f64>,
    /// Share of each client shard kept for its local accuracy.
    #[arg(long)]
    local_test_fraction: Option<f64>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Directory that relative dataset paths resolve against (else $FEDSIM_DATA_DIR).
    #[arg(long)]
    data_dir: Option<PathBuf>,
    #[arg(long, hide = true)]
    literal_dw: bool,
}

fn build_manifest(a: &RunArgs) -> Result<RunManifest, CliError> {
    let mut m = match &a.manifest {
        Some(p) => RunManifest::from_file(p)?,
        None => RunManifest::default(),
    };
    if let Some(g) = &a.grid {
        let keep = std::mem::take(&mut m.grid.datasets);
        m.grid = Grid::preset(g)?;
        if a.dataset.is_none() && !keep.is_empty() {
            m.grid.datasets = keep;
        }
    }
    let grid_flags = [
        ("datasets", &a.dataset),
        ("clients", &a.clients),
        ("rounds", &a.rounds),
        ("strategies", &a.strategy),
    ];
    for (k, v) in grid_flags {
        if let Some(v) = v {
            m.grid.set(k, v)?;
        }
    }
    let d = &mut m.defaults;
    if let Some(v) = a.alpha {
        d.alpha = v;
    }
    if let Some(v) = a.lr {
        d.lr = v;
    }
    if let Some(v) = a.batch_size {
        d.batch_size = v;
    }
    if let Some(v) = a.local_epochs {
        d.local_epochs = v;
    }
    if let Some(v) = a.repeats {
        d.repeats = v;
    }
    if let Some(v) = a.seed {
        d.seed = v;
    }
    if let Some(v) = a.threads {
        d.threads = v;
    }
    if let Some(v) = &a.hidden {
        d.set("hidden", v)?;
    }
    if let Some(v) = a.holdout_fraction {
        d.holdout_fraction = v;
    }
    if let Some(v) = a.local_test_fraction {
        d.local_test_fraction = v;
    }
    if a.literal_dw {
        d.literal_dw = true;
    }
    if let Some(o) = &a.out {
        m.out_dir = o.clone();
    }
    if let Some(dir) = &a.data_dir {
        m.data_dir = Some(dir.clone());
    } else if let Some(dir) = std::env::var_os("FEDSIM_DATA_DIR") {
        if m.data_dir.is_none() {
            m.data_dir = Some(PathBuf::from(dir));
        }
    }
    Ok(m)
}

fn real_main(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Run(args) => {
            let m = build_manifest(&args)?;
            let outcome = execute(&m)?;
            print!("{}", std::fs::read_to_string(&outcome.summary_txt)?);
            println!("summary: {}", outcome.summary_csv.display());
            Ok(())
        }
        Command::Compare {
            baseline,
            candidate,
        } => {
            let base = read_summary_csv(&baseline)?;
            let deltas = match candidate {
                Some(c) => compare(&base, &read_summary_csv(&c)?)?,
                None => compare_strategies(&base)?,
            };
            print!("{}", format_deltas(&deltas));
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() {
                fedsim_cli::EXIT_CONFIG
            } else {
                0
            };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    match real_main(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
