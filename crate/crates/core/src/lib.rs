//! Single-process federated learning simulator for binary malware
//! classification on tabular feature data.
//!
//! Local models are a dense ReLU/sigmoid network trained with mini-batch SGD.
//! The server combines them either with plain federated averaging or with
//! dynamic weighted averaging, where each client's weight is rewarded or
//! penalised every round according to the change in its local test accuracy.
//!
//! All numerical code is generic over [`Scalar`] (`f32` or `f64`); the
//! aliases below fix it to `f64`, which is what the command-line runner uses.

pub mod aggregation;
pub mod data;
pub mod error;
pub mod federation;
pub mod matrix;
pub mod metrics;
pub mod nn;
pub mod scalar;
pub mod seed;
pub mod synthetic;

pub use aggregation::{
    aggregate, dw_fedavg, dw_fedavg_literal, fedavg, update_priority_index, weighted_by,
    AggregationStrategy, PriorityIndex,
};
pub use data::{
    holdout_split, load_csv, partition_clients, write_csv, ClientShard, DatasetSource,
    LabelMapping, LoadReport, SplitSpec,
};
pub use error::{Error, Result};
pub use federation::{
    run_experiment, Client, ClientUpdate, Evaluator, ExperimentConfig, ExperimentResult, MeanStd,
    RoundReport, Schedule, Server, Simulation, Summary,
};
pub use metrics::{auc_rank, confusion, Confusion, MetricSet};
pub use nn::TrainConfig;
pub use scalar::Scalar;

pub type Real = f64;
pub type Matrix = matrix::Matrix<Real>;
pub type DenseNetwork = nn::DenseNetwork<Real>;
pub type ParamVector = nn::ParamVector<Real>;
pub type Dataset = data::Dataset<Real>;
