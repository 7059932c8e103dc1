use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use fedsim_core::data::SplitSpec;
use fedsim_core::federation::{run_experiment, ExperimentConfig};
use fedsim_core::nn::TrainConfig;
use fedsim_core::Dataset;

use crate::error::CliError;
use crate::grid::Cell;
use crate::manifest::RunManifest;
use crate::report::{
    format_summary_table, short_hash, write_round_log, write_summary_csv, SummaryRow,
};

#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub rows: Vec<SummaryRow>,
    pub hash: String,
    pub summary_csv: PathBuf,
    pub summary_txt: PathBuf,
    pub meta: PathBuf,
    pub round_logs: Vec<PathBuf>,
}

/// Builds the experiment configuration of one grid cell.
pub fn experiment_config(m: &RunManifest, cell: &Cell, min_max_scale: bool) -> ExperimentConfig {
    let d = &m.defaults;
    ExperimentConfig {
        dataset: cell.dataset.clone(),
        n_clients: cell.clients,
        n_rounds: cell.rounds,
        strategy: cell.strategy,
        alpha: d.alpha,
        train: TrainConfig {
            learning_rate: d.lr,
            batch_size: d.batch_size,
            local_epochs: d.local_epochs,
            seed: 0,
        },
        split: SplitSpec {
            holdout_fraction: d.holdout_fraction,
            ..SplitSpec::default()
        },
        local_test_fraction: d.local_test_fraction,
        hidden_dims: d.hidden.clone(),
        repeats: d.repeats,
        master_seed: d.seed,
        threads: d.threads,
        min_max_scale,
        literal_dw: d.literal_dw,
    }
}

/// Every setting that can change results. Thread count and paths are left out.
pub fn canonical(cfg: &ExperimentConfig) -> String {
    format!(
        "dataset={};clients={};rounds={};strategy={};alpha={:?};lr={:?};batch={};epochs={};\
         holdout={:?};local_test={:?};hidden={:?};repeats={};seed={};scale={};literal_dw={}",
        cfg.dataset,
        cfg.n_clients,
        cfg.n_rounds,
        cfg.strategy,
        cfg.alpha,
        cfg.train.learning_rate,
        cfg.train.batch_size,
        cfg.train.local_epochs,
        cfg.split.holdout_fraction,
        cfg.local_test_fraction,
        cfg.hidden_dims,
        cfg.repeats,
        cfg.master_seed,
        cfg.min_max_scale,
        cfg.literal_dw
    )
}

fn load_all(m: &RunManifest) -> Result<BTreeMap<String, (Dataset, bool)>, CliError> {
    let mut out = BTreeMap::new();
    for name in &m.grid.datasets {
        if out.contains_key(name) {
            continue;
        }
        let src = m.source(name)?;
        let path = src.resolved_path(m.data_dir.as_deref());
        if !path.is_file() {
            return Err(CliError::config(format!(
                "dataset `{name}`: file not found: {} (set its `path` under [dataset.{name}] or pass --data-dir)",
                path.display()
            )));
        }
        let (ds, report) = src
            .load::<f64>(m.data_dir.as_deref())
            .map_err(|e| CliError::config(format!("dataset `{name}`: {e}")))?;
        log::debug!("{name}: load report {report:?}");
        log::info!(
            "{name}: {} samples, {} features, {:?}",
            ds.len(),
            ds.n_features(),
            ds.class_counts()
        );
        out.insert(name.clone(), (ds, src.min_max_scale));
    }
    Ok(out)
}

/// Runs every cell of the manifest's grid and writes round logs and summaries.
pub fn execute(m: &RunManifest) -> Result<RunOutcome, CliError> {
    m.grid.validate()?;
    let cells = m.grid.cells();
    let datasets = load_all(m)?;
    let configs: Vec<ExperimentConfig> = cells
        .iter()
        .map(|c| experiment_config(m, c, datasets[&c.dataset].1))
        .collect();
    for cfg in &configs {
        cfg.validate()
            .map_err(|e| CliError::config(format!("{}: {e}", cfg.dataset)))?;
    }
    let hash = short_hash(&configs.iter().map(canonical).collect::<Vec<_>>().join("\n"));
    std::fs::create_dir_all(&m.out_dir)
        .map_err(|e| CliError::runtime(format!("cannot create {}: {e}", m.out_dir.display())))?;

    let started = Instant::now();
    let mut rows = Vec::new();
    let mut round_logs = Vec::new();
    let mut meta = String::new();
    let mut round_time = Duration::ZERO;
    for (cell, cfg) in cells.iter().zip(&configs) {
        let t = Instant::now();
        let ds = &datasets[&cell.dataset].0;
        let result = run_experiment(ds, cfg, |rep, r| {
            log::debug!(
                "{} c={} {} repeat {rep} round {}: acc {:.4} auc {:.4}",
                cell.dataset,
                cell.clients,
                cell.strategy,
                r.round,
                r.global_metrics.accuracy,
                r.global_metrics.auc
            );
        })
        .map_err(|e| {
            CliError::runtime(format!(
                "{} c={} r={} {}: {e}",
                cell.dataset, cell.clients, cell.rounds, cell.strategy
            ))
        })?;
        let elapsed = t.elapsed();
        round_time += result
            .rounds
            .iter()
            .flatten()
            .map(|r| r.wall_time)
            .sum::<Duration>();
        log::info!(
            "{} c={} r={} {}: accuracy {:.4}±{:.4} in {:.1?}",
            cell.dataset,
            cell.clients,
            cell.rounds,
            cell.strategy,
            result.summary.accuracy.mean,
            result.summary.accuracy.std,
            elapsed
        );
        let log_path = m.out_dir.join(format!(
            "{}_c{}_r{}_{}_{hash}.rounds.csv",
            cell.dataset, cell.clients, cell.rounds, cell.strategy
        ));
        write_round_log(&log_path, &result)?;
        round_logs.push(log_path);
        let _ = writeln!(
            meta,
            "cell {} c={} r={} {} seconds={:.3}",
            cell.dataset,
            cell.clients,
            cell.rounds,
            cell.strategy,
            elapsed.as_secs_f64()
        );
        rows.push(SummaryRow {
            dataset: cell.dataset.clone(),
            clients: cell.clients,
            rounds: cell.rounds,
            strategy: cell.strategy.to_string(),
            repeats: cfg.repeats,
            summary: result.summary,
        });
    }

    let summary_csv = m.out_dir.join(format!("summary_{hash}.csv"));
    let summary_txt = m.out_dir.join(format!("summary_{hash}.txt"));
    let meta_path = m.out_dir.join(format!("run_{hash}.meta"));
    write_summary_csv(&summary_csv, &rows)?;
    std::fs::write(&summary_txt, format_summary_table(&rows))?;
    let _ = writeln!(meta, "rounds_seconds={:.3}", round_time.as_secs_f64());
    let _ = writeln!(meta, "total_seconds={:.3}", started.elapsed().as_secs_f64());
    let _ = writeln!(meta, "threads={}", m.defaults.threads);
    std::fs::write(&meta_path, meta)?;

    Ok(RunOutcome {
        rows,
        hash,
        summary_csv,
        summary_txt,
        meta: meta_path,
        round_logs,
    })
}
