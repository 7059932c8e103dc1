use fedsim_core::aggregation::AggregationStrategy;
use fedsim_core::data::KNOWN_DATASETS;

use crate::error::CliError;
use crate::manifest::{parse_strategies, parse_usize_list, split_list};

/// Client counts of the reference comparison.
pub const TABLE_CLIENTS: [usize; 3] = [5, 10, 15];
/// Round counts of the reference comparison.
pub const TABLE_ROUNDS: [usize; 2] = [10, 20];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grid {
    pub datasets: Vec<String>,
    pub clients: Vec<usize>,
    pub rounds: Vec<usize>,
    pub strategies: Vec<AggregationStrategy>,
}

impl Default for Grid {
    fn default() -> Self {
        Self {
            datasets: Vec::new(),
            clients: vec![5],
            rounds: vec![10],
            strategies: AggregationStrategy::ALL.to_vec(),
        }
    }
}

/// One experiment of the grid.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cell {
    pub dataset: String,
    pub clients: usize,
    pub rounds: usize,
    pub strategy: AggregationStrategy,
}

impl Grid {
    /// Full reference comparison: all four datasets × {5,10,15} clients ×
    /// {10,20} rounds × both strategies.
    pub fn tables23() -> Self {
        Self {
            datasets: KNOWN_DATASETS.iter().map(|k| k.name.to_string()).collect(),
            clients: TABLE_CLIENTS.to_vec(),
            rounds: TABLE_ROUNDS.to_vec(),
            strategies: AggregationStrategy::ALL.to_vec(),
        }
    }

    pub fn preset(name: &str) -> Result<Self, CliError> {
        match name.trim().to_ascii_lowercase().as_str() {
            "tables23" => Ok(Self::tables23()),
            other => Err(CliError::config(format!("unknown grid preset `{other}`"))),
        }
    }

    pub fn set(&mut self, key: &str, v: &str) -> Result<bool, CliError> {
        match key {
            "datasets" | "dataset" => {
                self.datasets = split_list(v)
                    .into_iter()
                    .map(|s| s.to_ascii_lowercase())
                    .collect()
            }
            "clients" => self.clients = parse_usize_list(key, v)?,
            "rounds" => self.rounds = parse_usize_list(key, v)?,
            "strategies" | "strategy" => self.strategies = parse_strategies(v)?,
            _ => return Ok(false),
        }
        Ok(true)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let empty = [
            ("datasets", self.datasets.is_empty()),
            ("clients", self.clients.is_empty()),
            ("rounds", self.rounds.is_empty()),
            ("strategies", self.strategies.is_empty()),
        ];
        if let Some((what, _)) = empty.iter().find(|(_, e)| *e) {
            return Err(CliError::config(format!("experiment grid has no {what}")));
        }
        Ok(())
    }

    /// Cells in dataset → rounds → clients → strategy order.
    pub fn cells(&self) -> Vec<Cell> {
        let mut out = Vec::new();
        for d in &self.datasets {
            for &r in &self.rounds {
                for &c in &self.clients {
                    for &s in &self.strategies {
                        out.push(Cell {
                            dataset: d.clone(),
                            clients: c,
                            rounds: r,
                            strategy: s,
                        });
                    }
                }
            }
        }
        out
    }
}
