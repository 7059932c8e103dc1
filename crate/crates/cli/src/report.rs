//! CSV and aligned-text outputs.
//!
//! Round log (`<dataset>_c<clients>_r<rounds>_<strategy>_<hash>.rounds.csv`):
//!
//! | column | meaning |
//! |---|---|
//! | `repeat` | 0-based repeat index |
//! | `round` | 1-based round |
//! | `accuracy`, `f1`, `auc`, `fpr` | global model on the global holdout |
//! | `client_acc` | `;`-separated local test accuracy per client |
//! | `betas` | `;`-separated priority weights after the round's update |
//!
//! Summary (`summary_<hash>.csv`): `dataset, clients, rounds, strategy,
//! repeats` followed by `<metric>_mean, <metric>_std` for accuracy, f1, auc
//! and fpr, computed over the final round of every repeat.
//!
//! Reals are written with six decimals so reruns give identical bytes.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use fedsim_core::federation::{ExperimentResult, MeanStd, Summary};
use fedsim_core::metrics::METRIC_NAMES;
use sha2::{Digest, Sha256};

use crate::error::CliError;

pub const SUMMARY_KEY_COLUMNS: [&str; 5] = ["dataset", "clients", "rounds", "strategy", "repeats"];

/// First 12 hex digits of the SHA-256 of `canonical`.
pub fn short_hash(canonical: &str) -> String {
    let digest = Sha256::digest(canonical.as_bytes());
    hex::encode(&digest[..6])
}

fn fmt_real(v: f64) -> String {
    format!("{v:.6}")
}

fn join(values: &[f64]) -> String {
    values
        .iter()
        .map(|v| fmt_real(*v))
        .collect::<Vec<_>>()
        .join(";")
}

fn csv_err(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::runtime(format!("{}: {e}", path.display()))
}

pub fn write_round_log(path: &Path, result: &ExperimentResult) -> Result<(), CliError> {
    let mut w = csv::Writer::from_path(path).map_err(|e| csv_err(path, e))?;
    w.write_record([
        "repeat",
        "round",
        "accuracy",
        "f1",
        "auc",
        "fpr",
        "client_acc",
        "betas",
    ])
    .map_err(|e| csv_err(path, e))?;
    for (repeat, reports) in result.rounds.iter().enumerate() {
        for r in reports {
            let m = r.global_metrics;
            w.write_record([
                repeat.to_string(),
                r.round.to_string(),
                fmt_real(m.accuracy),
                fmt_real(m.f1),
                fmt_real(m.auc),
                fmt_real(m.fpr),
                join(&r.client_local_acc),
                join(&r.betas_after_update),
            ])
            .map_err(|e| csv_err(path, e))?;
        }
    }
    w.flush().map_err(|e| csv_err(path, e))
}

#[derive(Clone, Debug, PartialEq)]
pub struct SummaryRow {
    pub dataset: String,
    pub clients: usize,
    pub rounds: usize,
    pub strategy: String,
    pub repeats: usize,
    pub summary: Summary,
}

pub fn write_summary_csv(path: &Path, rows: &[SummaryRow]) -> Result<(), CliError> {
    let mut w = csv::Writer::from_path(path).map_err(|e| csv_err(path, e))?;
    let mut header: Vec<String> = SUMMARY_KEY_COLUMNS.iter().map(|s| s.to_string()).collect();
    for m in METRIC_NAMES {
        header.push(format!("{m}_mean"));
        header.push(format!("{m}_std"));
    }
    w.write_record(&header).map_err(|e| csv_err(path, e))?;
    for r in rows {
        let mut rec = vec![
            r.dataset.clone(),
            r.clients.to_string(),
            r.rounds.to_string(),
            r.strategy.clone(),
            r.repeats.to_string(),
        ];
        for ms in r.summary.as_array() {
            rec.push(fmt_real(ms.mean));
            rec.push(fmt_real(ms.std));
        }
        w.write_record(&rec).map_err(|e| csv_err(path, e))?;
    }
    w.flush().map_err(|e| csv_err(path, e))
}

pub fn read_summary_csv(path: &Path) -> Result<Vec<SummaryRow>, CliError> {
    let cfg_err = |e: &dyn std::fmt::Display| CliError::config(format!("{}: {e}", path.display()));
    let mut r = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| cfg_err(&e))?;
    let header = r.headers().map_err(|e| cfg_err(&e))?.clone();
    let col = |name: &str| {
        header
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| cfg_err(&format!("missing column `{name}`")))
    };
    let key_cols: Vec<usize> = SUMMARY_KEY_COLUMNS
        .iter()
        .map(|c| col(c))
        .collect::<Result<_, _>>()?;
    let metric_cols: Vec<(usize, usize)> = METRIC_NAMES
        .iter()
        .map(|m| Ok((col(&format!("{m}_mean"))?, col(&format!("{m}_std"))?)))
        .collect::<Result<_, CliError>>()?;

    let mut rows = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec.map_err(|e| cfg_err(&e))?;
        let num = |c: usize| -> Result<f64, CliError> {
            rec[c]
                .parse()
                .map_err(|_| cfg_err(&format!("row {}: bad number `{}`", i + 2, &rec[c])))
        };
        let int = |c: usize| -> Result<usize, CliError> {
            rec[c]
                .parse()
                .map_err(|_| cfg_err(&format!("row {}: bad integer `{}`", i + 2, &rec[c])))
        };
        let mut ms = [MeanStd::default(); 4];
        for (slot, &(m, s)) in ms.iter_mut().zip(&metric_cols) {
            *slot = MeanStd {
                mean: num(m)?,
                std: num(s)?,
            };
        }
        rows.push(SummaryRow {
            dataset: rec[key_cols[0]].to_string(),
            clients: int(key_cols[1])?,
            rounds: int(key_cols[2])?,
            strategy: rec[key_cols[3]].to_string(),
            repeats: int(key_cols[4])?,
            summary: Summary {
                accuracy: ms[0],
                f1: ms[1],
                auc: ms[2],
                fpr: ms[3],
            },
        });
    }
    Ok(rows)
}

/// Left-aligns the first column, right-aligns the rest.
pub fn align(rows: &[Vec<String>]) -> String {
    let ncol = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..ncol)
        .map(|c| {
            rows.iter()
                .filter_map(|r| r.get(c))
                .map(|s| s.chars().count())
                .max()
                .unwrap_or(0)
        })
        .collect();
    let mut out = String::new();
    for r in rows {
        let cells: Vec<String> = r
            .iter()
            .enumerate()
            .map(|(c, s)| {
                if c == 0 {
                    format!("{s:<w$}", w = widths[c])
                } else {
                    format!("{s:>w$}", w = widths[c])
                }
            })
            .collect();
        let _ = writeln!(out, "{}", cells.join("  ").trim_end());
    }
    out
}

fn pm(ms: &MeanStd) -> String {
    format!("{:.4}±{:.4}", ms.mean, ms.std)
}

/// (dataset, clients) → strategy → row, for one round count.
type Block<'a> = BTreeMap<(String, usize), BTreeMap<&'a str, &'a SummaryRow>>;

/// One block per round count; rows are (dataset, clients), columns are the
/// four metrics of every strategy present.
pub fn format_summary_table(rows: &[SummaryRow]) -> String {
    let mut strategies: Vec<&str> = Vec::new();
    for r in rows {
        if !strategies.contains(&r.strategy.as_str()) {
            strategies.push(&r.strategy);
        }
    }
    let mut by_rounds: BTreeMap<usize, Block> = BTreeMap::new();
    for r in rows {
        by_rounds
            .entry(r.rounds)
            .or_default()
            .entry((r.dataset.clone(), r.clients))
            .or_default()
            .insert(&r.strategy, r);
    }

    let mut out = String::new();
    for (rounds, cells) in &by_rounds {
        let _ = writeln!(
            out,
            "Global model after {rounds} rounds (mean±std over repeats)"
        );
        let mut table = Vec::new();
        let mut head = vec!["dataset".to_string(), "clients".to_string()];
        for s in &strategies {
            for m in METRIC_NAMES {
                head.push(format!("{s} {m}"));
            }
        }
        table.push(head);
        for ((dataset, clients), per) in cells {
            let mut line = vec![dataset.clone(), clients.to_string()];
            for s in &strategies {
                match per.get(s) {
                    Some(r) => line.extend(r.summary.as_array().iter().map(pm)),
                    None => line.extend(std::iter::repeat_n("-".to_string(), 4)),
                }
            }
            table.push(line);
        }
        out.push_str(&align(&table));
        out.push('\n');
    }
    out
}
