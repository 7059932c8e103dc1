//! Differences between summary files, in percentage points.

use std::collections::{BTreeMap, BTreeSet};

use fedsim_core::aggregation::AggregationStrategy;
use fedsim_core::metrics::METRIC_NAMES;

use crate::error::CliError;
use crate::report::{align, SummaryRow};

/// `candidate − baseline` for one key, ×100.
#[derive(Clone, Debug, PartialEq)]
pub struct DeltaRow {
    pub dataset: String,
    pub clients: usize,
    pub rounds: usize,
    /// Strategy of the key, or `"<candidate> - <baseline>"` when compared across strategies.
    pub label: String,
    pub delta_pp: [f64; 4],
}

type Key = (String, usize, usize, String);

fn pp(base: &SummaryRow, cand: &SummaryRow) -> [f64; 4] {
    let (b, c) = (base.summary.as_array(), cand.summary.as_array());
    std::array::from_fn(|i| 100.0 * (c[i].mean - b[i].mean))
}

fn index<'a>(
    rows: &'a [SummaryRow],
    with_strategy: bool,
    what: &str,
) -> Result<BTreeMap<Key, &'a SummaryRow>, CliError> {
    let mut out = BTreeMap::new();
    for r in rows {
        let s = if with_strategy {
            r.strategy.clone()
        } else {
            String::new()
        };
        let key = (r.dataset.clone(), r.clients, r.rounds, s);
        if out.insert(key.clone(), r).is_some() {
            return Err(CliError::config(format!(
                "{what}: duplicate row for {} c={} r={}{}",
                key.0,
                key.1,
                key.2,
                if with_strategy {
                    format!(" {}", key.3)
                } else {
                    String::new()
                }
            )));
        }
    }
    Ok(out)
}

fn strategies(rows: &[SummaryRow]) -> BTreeSet<&str> {
    rows.iter().map(|r| r.strategy.as_str()).collect()
}

fn describe(k: &Key) -> String {
    let mut s = format!("{} c={} r={}", k.0, k.1, k.2);
    if !k.3.is_empty() {
        s.push(' ');
        s.push_str(&k.3);
    }
    s
}

/// Pairs rows by (dataset, clients, rounds, strategy) when both sides cover
/// the same strategies, otherwise by (dataset, clients, rounds). Every key
/// must appear on both sides.
pub fn compare(
    baseline: &[SummaryRow],
    candidate: &[SummaryRow],
) -> Result<Vec<DeltaRow>, CliError> {
    let (sb, sc) = (strategies(baseline), strategies(candidate));
    let with_strategy = sb == sc;
    let b = index(baseline, with_strategy, "baseline")?;
    let c = index(candidate, with_strategy, "candidate")?;
    let only_b: Vec<String> = b
        .keys()
        .filter(|k| !c.contains_key(*k))
        .map(describe)
        .collect();
    let only_c: Vec<String> = c
        .keys()
        .filter(|k| !b.contains_key(*k))
        .map(describe)
        .collect();
    if !only_b.is_empty() || !only_c.is_empty() {
        return Err(CliError::config(format!(
            "summary keys differ; only in baseline: [{}]; only in candidate: [{}]",
            only_b.join(", "),
            only_c.join(", ")
        )));
    }
    Ok(b.iter()
        .map(|(k, base)| {
            let cand = c[k];
            let label = if with_strategy {
                k.3.clone()
            } else {
                format!("{} - {}", cand.strategy, base.strategy)
            };
            DeltaRow {
                dataset: k.0.clone(),
                clients: k.1,
                rounds: k.2,
                label,
                delta_pp: pp(base, cand),
            }
        })
        .collect())
}

/// Within one file: dw-fedavg minus fedavg for every (dataset, clients, rounds).
pub fn compare_strategies(rows: &[SummaryRow]) -> Result<Vec<DeltaRow>, CliError> {
    let pick = |s: AggregationStrategy| -> Vec<SummaryRow> {
        rows.iter()
            .filter(|r| r.strategy == s.as_str())
            .cloned()
            .collect()
    };
    let (base, cand) = (
        pick(AggregationStrategy::FedAvg),
        pick(AggregationStrategy::DwFedAvg),
    );
    if base.is_empty() || cand.is_empty() {
        return Err(CliError::config(
            "single-file comparison needs both fedavg and dw-fedavg rows",
        ));
    }
    compare(&base, &cand)
}

pub fn format_deltas(rows: &[DeltaRow]) -> String {
    let mut table = vec![{
        let mut h = vec![
            "dataset".to_string(),
            "clients".into(),
            "rounds".into(),
            "compared".into(),
        ];
        h.extend(METRIC_NAMES.iter().map(|m| format!("Δ{m} (pp)")));
        h
    }];
    for r in rows {
        let mut line = vec![
            r.dataset.clone(),
            r.clients.to_string(),
            r.rounds.to_string(),
            r.label.clone(),
        ];
        line.extend(r.delta_pp.iter().map(|d| format!("{d:+.2}")));
        table.push(line);
    }
    align(&table)
}
