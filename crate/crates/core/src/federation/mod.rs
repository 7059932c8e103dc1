//! Single-process federated training loop.
//!
//! Each round: every client loads the broadcast global model, trains on its
//! local split, measures its local test accuracy and sends back a
//! [`ClientUpdate`]; the server updates its priority index (dynamic-weight
//! strategy only), aggregates, and the new global model is scored on the
//! global holdout.

mod client;
mod server;

use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::aggregation::{AggregationStrategy, DEFAULT_ALPHA};
use crate::data::{holdout_split, partition_clients, Dataset, MinMaxScaler, SplitSpec};
use crate::error::{Error, Result};
use crate::metrics::MetricSet;
use crate::nn::{DenseNetwork, ParamVector, TrainConfig, DECISION_THRESHOLD, DEFAULT_HIDDEN};
use crate::scalar::Scalar;
use crate::seed;

pub use client::{Client, ClientUpdate};
pub use server::Server;

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub dataset: String,
    pub n_clients: usize,
    pub n_rounds: usize,
    pub strategy: AggregationStrategy,
    pub alpha: f64,
    /// `seed` is ignored: client streams are derived from the repeat seed.
    pub train: TrainConfig,
    /// `seed` is ignored: the holdout is derived from the repeat seed.
    pub split: SplitSpec,
    /// Share of every client shard kept back for the local accuracy check.
    pub local_test_fraction: f64,
    pub hidden_dims: Vec<usize>,
    pub repeats: usize,
    pub master_seed: u64,
    /// Worker threads for client training: 0 = rayon default, 1 = sequential.
    pub threads: usize,
    pub min_max_scale: bool,
    /// Aggregate dynamic weights with the extra `1/N` factor (comparison only).
    pub literal_dw: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            dataset: String::new(),
            n_clients: 5,
            n_rounds: 10,
            strategy: AggregationStrategy::DwFedAvg,
            alpha: DEFAULT_ALPHA,
            train: TrainConfig::default(),
            split: SplitSpec::default(),
            local_test_fraction: 0.2,
            hidden_dims: DEFAULT_HIDDEN.to_vec(),
            repeats: 5,
            master_seed: 42,
            threads: 0,
            min_max_scale: false,
            literal_dw: false,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_clients < 2 {
            return Err(Error::InvalidConfig(format!(
                "need at least 2 clients, got {}",
                self.n_clients
            )));
        }
        if self.n_rounds == 0 {
            return Err(Error::InvalidConfig("need at least 1 round".into()));
        }
        if self.repeats == 0 {
            return Err(Error::InvalidConfig("need at least 1 repeat".into()));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "alpha must lie in (0, 1), got {}",
                self.alpha
            )));
        }
        self.train.validate()
    }

    pub fn repeat_seed(&self, repeat: usize) -> u64 {
        self.master_seed.wrapping_add(repeat as u64)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RoundReport {
    /// 1-based.
    pub round: usize,
    pub global_metrics: MetricSet,
    pub client_local_acc: Vec<f64>,
    pub betas_after_update: Vec<f64>,
    pub wall_time: Duration,
}

/// Scores a model on the global holdout. Lives outside the server so that the
/// server never holds any sample rows.
#[derive(Clone, Debug)]
pub struct Evaluator<T> {
    holdout: Dataset<T>,
}

impl<T: Scalar> Evaluator<T> {
    pub fn new(holdout: Dataset<T>) -> Result<Self> {
        if !holdout.has_both_classes() {
            return Err(Error::Dataset {
                name: holdout.name.clone(),
                reason: "global holdout needs both classes".into(),
            });
        }
        Ok(Self { holdout })
    }

    pub fn evaluate(&self, model: &DenseNetwork<T>) -> Result<MetricSet> {
        let probs = model.forward(&self.holdout.features)?;
        MetricSet::evaluate(&probs, &self.holdout.labels, T::of(DECISION_THRESHOLD))
    }
}

/// How client training is scheduled within a round.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Schedule {
    Sequential,
    /// On the current rayon pool.
    Parallel,
}

pub struct Simulation<T> {
    server: Server<T>,
    clients: Vec<Client<T>>,
    evaluator: Evaluator<T>,
    master_seed: u64,
    schedule: Schedule,
    rounds_done: usize,
}

impl<T: Scalar> Simulation<T> {
    /// Clients must be ordered by id `0..n`, matching the server's index.
    pub fn new(
        server: Server<T>,
        clients: Vec<Client<T>>,
        evaluator: Evaluator<T>,
        master_seed: u64,
    ) -> Result<Self> {
        if clients.is_empty() {
            return Err(Error::Empty("client list"));
        }
        if let Some((pos, c)) = clients.iter().enumerate().find(|(i, c)| c.id() != *i) {
            return Err(Error::InvalidConfig(format!(
                "client at position {pos} has id {}",
                c.id()
            )));
        }
        let dims = server.global_model().layer_dims();
        if let Some(c) = clients.iter().find(|c| c.model().layer_dims() != dims) {
            return Err(Error::InvalidConfig(format!(
                "client {} model shape differs from the global model",
                c.id()
            )));
        }
        Ok(Self {
            server,
            clients,
            evaluator,
            master_seed,
            schedule: Schedule::Parallel,
            rounds_done: 0,
        })
    }

    pub fn with_schedule(mut self, schedule: Schedule) -> Self {
        self.schedule = schedule;
        self
    }

    pub fn server(&self) -> &Server<T> {
        &self.server
    }

    pub fn clients(&self) -> &[Client<T>] {
        &self.clients
    }

    pub fn global_params(&self) -> ParamVector<T> {
        self.server.global_params()
    }

    /// Runs the next round: broadcast, local training, priority update,
    /// aggregation, holdout evaluation.
    pub fn run_round(&mut self) -> Result<RoundReport> {
        let start = Instant::now();
        let round = self.rounds_done + 1;
        let global = self.server.global_params();
        let seed = self.master_seed;
        let step = |c: &mut Client<T>| -> Result<ClientUpdate<T>> {
            c.receive_global(&global)?;
            c.local_round(round, seed)
        };
        let updates: Vec<ClientUpdate<T>> = match self.schedule {
            Schedule::Sequential => self.clients.iter_mut().map(step).collect::<Result<_>>()?,
            Schedule::Parallel => self
                .clients
                .par_iter_mut()
                .map(step)
                .collect::<Result<_>>()?,
        };

        self.server.aggregate(&updates)?;
        let global_metrics = self.evaluator.evaluate(self.server.global_model())?;
        self.rounds_done = round;
        Ok(RoundReport {
            round,
            global_metrics,
            client_local_acc: updates.iter().map(|u| u.local_accuracy).collect(),
            betas_after_update: self.server.index().betas().to_vec(),
            wall_time: start.elapsed(),
        })
    }
}

/// Builds the simulation for one repeat: holdout split, optional scaling,
/// IID partition, common initial model.
pub fn build_simulation<T: Scalar>(
    dataset: &Dataset<T>,
    cfg: &ExperimentConfig,
    repeat: usize,
) -> Result<Simulation<T>> {
    cfg.validate()?;
    let rep_seed = cfg.repeat_seed(repeat);
    let split = SplitSpec {
        seed: rep_seed,
        ..cfg.split.clone()
    };
    let (mut train, mut test) = holdout_split(dataset, &split)?;
    if cfg.min_max_scale {
        let scaler = MinMaxScaler::fit(&train.features);
        scaler.transform(&mut train.features);
        scaler.transform(&mut test.features);
    }
    let shards = partition_clients(&train, cfg.n_clients, cfg.local_test_fraction, rep_seed)?;
    let global = DenseNetwork::new(
        dataset.n_features(),
        &cfg.hidden_dims,
        seed::derive_seed(rep_seed, &[seed::stream::INIT]),
    )?;
    let clients = shards
        .into_iter()
        .map(|s| Client::new(s, global.clone(), cfg.train.clone()))
        .collect::<Result<Vec<_>>>()?;
    let server = Server::new(global, cfg.strategy, cfg.n_clients, cfg.alpha)?
        .with_literal_dw(cfg.literal_dw);
    let schedule = if cfg.threads == 1 {
        Schedule::Sequential
    } else {
        Schedule::Parallel
    };
    Ok(Simulation::new(server, clients, Evaluator::new(test)?, rep_seed)?.with_schedule(schedule))
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct MeanStd {
    pub mean: f64,
    /// Sample standard deviation (n − 1); 0 for a single value.
    pub std: f64,
}

impl MeanStd {
    pub fn of(values: &[f64]) -> Self {
        let n = values.len();
        if n == 0 {
            return Self::default();
        }
        let mean = values.iter().sum::<f64>() / n as f64;
        let std = if n < 2 {
            0.0
        } else {
            (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt()
        };
        Self { mean, std }
    }
}

/// Mean ± std over repeats of the final-round global metrics.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Summary {
    pub accuracy: MeanStd,
    pub f1: MeanStd,
    pub auc: MeanStd,
    pub fpr: MeanStd,
}

impl Summary {
    pub fn from_final(finals: &[MetricSet]) -> Self {
        let col = |f: fn(&MetricSet) -> f64| MeanStd::of(&finals.iter().map(f).collect::<Vec<_>>());
        Self {
            accuracy: col(|m| m.accuracy),
            f1: col(|m| m.f1),
            auc: col(|m| m.auc),
            fpr: col(|m| m.fpr),
        }
    }

    pub fn as_array(&self) -> [MeanStd; 4] {
        [self.accuracy, self.f1, self.auc, self.fpr]
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentResult {
    /// `rounds[r]` holds the round reports of repeat `r`.
    pub rounds: Vec<Vec<RoundReport>>,
    pub summary: Summary,
}

impl ExperimentResult {
    pub fn final_metrics(&self) -> Vec<MetricSet> {
        self.rounds
            .iter()
            .filter_map(|r| r.last().map(|rep| rep.global_metrics))
            .collect()
    }
}

fn run_repeats<T: Scalar>(
    dataset: &Dataset<T>,
    cfg: &ExperimentConfig,
    on_round: &mut (dyn FnMut(usize, &RoundReport) + Send),
) -> Result<ExperimentResult> {
    let mut rounds = Vec::with_capacity(cfg.repeats);
    for repeat in 0..cfg.repeats {
        let mut sim = build_simulation(dataset, cfg, repeat)?;
        let mut reports = Vec::with_capacity(cfg.n_rounds);
        for _ in 0..cfg.n_rounds {
            let report = sim.run_round()?;
            on_round(repeat, &report);
            reports.push(report);
        }
        rounds.push(reports);
    }
    let finals: Vec<MetricSet> = rounds
        .iter()
        .map(|r: &Vec<RoundReport>| r.last().expect("n_rounds ≥ 1").global_metrics)
        .collect();
    Ok(ExperimentResult {
        summary: Summary::from_final(&finals),
        rounds,
    })
}

/// Runs `cfg.repeats` independent runs; repeat `r` uses seed `master_seed + r`.
/// `on_round(repeat, report)` is called after every round.
pub fn run_experiment<T: Scalar>(
    dataset: &Dataset<T>,
    cfg: &ExperimentConfig,
    mut on_round: impl FnMut(usize, &RoundReport) + Send,
) -> Result<ExperimentResult> {
    cfg.validate()?;
    match cfg.threads {
        0 | 1 => run_repeats(dataset, cfg, &mut on_round),
        n => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::InvalidConfig(format!("thread pool: {e}")))?;
            pool.install(|| run_repeats(dataset, cfg, &mut on_round))
        }
    }
}
