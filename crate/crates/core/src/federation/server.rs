//! Server side of the federation: holds the global model and the priority
//! index, and combines client updates. It works on parameter vectors and
//! scalar accuracies only.

use crate::aggregation::{aggregate, dw_fedavg_literal, AggregationStrategy, PriorityIndex};
use crate::error::{Error, Result};
use crate::nn::{DenseNetwork, ParamVector};
use crate::scalar::Scalar;

use super::client::ClientUpdate;

#[derive(Clone, Debug)]
pub struct Server<T> {
    global: DenseNetwork<T>,
    strategy: AggregationStrategy,
    index: PriorityIndex,
    literal_dw: bool,
}

impl<T: Scalar> Server<T> {
    pub fn new(
        global: DenseNetwork<T>,
        strategy: AggregationStrategy,
        n_clients: usize,
        alpha: f64,
    ) -> Result<Self> {
        Ok(Self {
            global,
            strategy,
            index: PriorityIndex::new(n_clients, alpha)?,
            literal_dw: false,
        })
    }

    /// Aggregates with the extra `1/N` factor instead of the convex combination.
    /// Only meaningful with the dynamic-weight strategy.
    pub fn with_literal_dw(mut self, on: bool) -> Self {
        self.literal_dw = on;
        self
    }

    pub fn strategy(&self) -> AggregationStrategy {
        self.strategy
    }

    pub fn index(&self) -> &PriorityIndex {
        &self.index
    }

    pub fn global_model(&self) -> &DenseNetwork<T> {
        &self.global
    }

    pub fn global_params(&self) -> ParamVector<T> {
        self.global.to_params()
    }

    /// Updates the priority index (dynamic-weight strategy only) from the
    /// reported accuracies, then replaces the global model with the aggregate.
    /// `updates[i]` must come from client `i`.
    pub fn aggregate(&mut self, updates: &[ClientUpdate<T>]) -> Result<()> {
        if updates.len() != self.index.n_clients() {
            return Err(Error::DimensionMismatch {
                context: "client updates",
                expected: self.index.n_clients(),
                actual: updates.len(),
            });
        }
        if let Some((pos, u)) = updates.iter().enumerate().find(|(i, u)| u.client_id != *i) {
            return Err(Error::InvalidConfig(format!(
                "update at position {pos} came from client {}",
                u.client_id
            )));
        }
        let models: Vec<ParamVector<T>> = updates.iter().map(|u| u.params.clone()).collect();
        let new_params = match self.strategy {
            AggregationStrategy::FedAvg => aggregate(self.strategy, &models, &self.index)?,
            AggregationStrategy::DwFedAvg => {
                let acc: Vec<f64> = updates.iter().map(|u| u.local_accuracy).collect();
                self.index.update(&acc)?;
                if self.literal_dw {
                    dw_fedavg_literal(&models, &self.index)?
                } else {
                    aggregate(self.strategy, &models, &self.index)?
                }
            }
        };
        self.global.load_params(&new_params)
    }
}
