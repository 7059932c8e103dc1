//! Client side of the federation. A client owns its shard; nothing outside
//! this module can read the shard's rows, and the only thing a client hands
//! back to the server is a [`ClientUpdate`].

use crate::data::ClientShard;
use crate::error::{Error, Result};
use crate::metrics::confusion;
use crate::nn::{DenseNetwork, ParamVector, TrainConfig};
use crate::scalar::Scalar;
use crate::seed;

/// What crosses the client → server boundary each round.
#[derive(Clone, Debug, PartialEq)]
pub struct ClientUpdate<T> {
    pub client_id: usize,
    pub params: ParamVector<T>,
    /// Accuracy of the freshly trained local model on the client's local test split.
    pub local_accuracy: f64,
}

#[derive(Clone, Debug)]
pub struct Client<T> {
    id: usize,
    shard: ClientShard<T>,
    model: DenseNetwork<T>,
    train_cfg: TrainConfig,
    last_local_acc: f64,
}

impl<T: Scalar> Client<T> {
    /// `model` only fixes the architecture; its parameters are replaced on the
    /// first broadcast.
    pub fn new(
        shard: ClientShard<T>,
        model: DenseNetwork<T>,
        train_cfg: TrainConfig,
    ) -> Result<Self> {
        train_cfg.validate()?;
        if shard.train.n_features() != model.input_dim() {
            return Err(Error::DimensionMismatch {
                context: "client features vs model input",
                expected: model.input_dim(),
                actual: shard.train.n_features(),
            });
        }
        if shard.train.is_empty() || shard.local_test.is_empty() {
            return Err(Error::Partition(format!(
                "client {} has an empty local split",
                shard.client_id
            )));
        }
        Ok(Self {
            id: shard.client_id,
            shard,
            model,
            train_cfg,
            last_local_acc: 0.0,
        })
    }

    pub fn id(&self) -> usize {
        self.id
    }

    pub fn model(&self) -> &DenseNetwork<T> {
        &self.model
    }

    pub fn last_local_acc(&self) -> f64 {
        self.last_local_acc
    }

    /// `(local train rows, local test rows)`.
    pub fn sample_counts(&self) -> (usize, usize) {
        (self.shard.train.len(), self.shard.local_test.len())
    }

    /// Replaces the local model with the broadcast global model.
    pub fn receive_global(&mut self, params: &ParamVector<T>) -> Result<()> {
        self.model.load_params(params)
    }

    /// Trains locally for one federated round and reports the result.
    /// The shuffle stream depends only on `(master_seed, round, client id)`.
    pub fn local_round(&mut self, round: usize, master_seed: u64) -> Result<ClientUpdate<T>> {
        let cfg = TrainConfig {
            seed: seed::derive_seed(
                master_seed,
                &[seed::stream::TRAIN, round as u64, self.id as u64],
            ),
            ..self.train_cfg.clone()
        };
        self.model
            .fit(&self.shard.train.features, &self.shard.train.labels, &cfg)?;
        let pred = self.model.predict_labels(&self.shard.local_test.features)?;
        self.last_local_acc = confusion(&pred, &self.shard.local_test.labels)?.accuracy();
        Ok(ClientUpdate {
            client_id: self.id,
            params: self.model.to_params(),
            local_accuracy: self.last_local_acc,
        })
    }
}
