//! Dense feed-forward binary classifier: ReLU hidden layers, a single sigmoid
//! output unit, binary cross-entropy loss and plain mini-batch SGD.
//!
//! Parameters are exchanged with the aggregation code as a [`ParamVector`]
//! whose layout is fixed: for each layer, the `fan_in × fan_out` weight matrix
//! in row-major order followed by the bias vector.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::matrix::{accumulate_outer, affine_into, backproject_into, Matrix};
use crate::scalar::Scalar;
use crate::seed;

/// Hidden layer widths of the reference malware classifier.
pub const DEFAULT_HIDDEN: [usize; 3] = [200, 100, 50];

/// Probabilities are clamped to `[LOSS_CLAMP, 1 - LOSS_CLAMP]` inside the log.
pub const LOSS_CLAMP: f64 = 1e-7;

/// Probability at or above which a sample is labelled malware.
pub const DECISION_THRESHOLD: f64 = 0.5;

#[derive(Clone, Debug, PartialEq)]
pub struct DenseLayer<T> {
    /// `fan_in × fan_out`.
    pub weights: Matrix<T>,
    pub biases: Vec<T>,
}

impl<T: Scalar> DenseLayer<T> {
    pub fn fan_in(&self) -> usize {
        self.weights.rows()
    }

    pub fn fan_out(&self) -> usize {
        self.weights.cols()
    }

    fn param_count(&self) -> usize {
        self.weights.as_slice().len() + self.biases.len()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DenseNetwork<T> {
    layers: Vec<DenseLayer<T>>,
}

/// Flat, order-stable view of all network parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct ParamVector<T> {
    pub values: Vec<T>,
}

impl<T: Scalar> ParamVector<T> {
    pub fn new(values: Vec<T>) -> Self {
        Self { values }
    }

    pub fn zeros(len: usize) -> Self {
        Self {
            values: vec![T::zero(); len],
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn as_slice(&self) -> &[T] {
        &self.values
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }
}

/// Number of parameters of a network with the given layer widths
/// (input first, output last).
pub fn param_count(layer_dims: &[usize]) -> usize {
    layer_dims.windows(2).map(|w| w[0] * w[1] + w[1]).sum()
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrainConfig {
    pub learning_rate: f64,
    pub batch_size: usize,
    pub local_epochs: usize,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            learning_rate: 0.01,
            batch_size: 32,
            local_epochs: 5,
            seed: 0,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.learning_rate.is_finite() && self.learning_rate >= 0.0) {
            return Err(Error::InvalidConfig(format!(
                "learning rate must be finite and non-negative, got {}",
                self.learning_rate
            )));
        }
        if self.batch_size == 0 {
            return Err(Error::InvalidConfig("batch size must be at least 1".into()));
        }
        if self.local_epochs == 0 {
            return Err(Error::InvalidConfig(
                "local epochs must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

#[inline]
fn sigmoid<T: Scalar>(z: T) -> T {
    // Branching keeps exp() from overflowing for large |z|.
    if z >= T::zero() {
        T::one() / (T::one() + (-z).exp())
    } else {
        let e = z.exp();
        e / (T::one() + e)
    }
}

#[inline]
fn open_unit<T: Scalar>(p: T) -> T {
    let eps = T::epsilon();
    p.max(eps).min(T::one() - eps)
}

fn check_labels(labels: &[u8]) -> Result<()> {
    match labels.iter().position(|&y| y > 1) {
        Some(row) => Err(Error::NonBinaryLabel {
            row,
            value: labels[row],
        }),
        None => Ok(()),
    }
}

/// Per-layer activation buffers reused across mini-batches.
#[derive(Debug)]
struct Workspace<T> {
    /// `activations[k]` is the output of layer `k`.
    activations: Vec<Matrix<T>>,
    delta: Matrix<T>,
    delta_prev: Matrix<T>,
    grads: Vec<DenseLayer<T>>,
}

impl<T: Scalar> Workspace<T> {
    fn new(net: &DenseNetwork<T>) -> Self {
        Self {
            activations: net.layers.iter().map(|_| Matrix::zeros(0, 0)).collect(),
            delta: Matrix::zeros(0, 0),
            delta_prev: Matrix::zeros(0, 0),
            grads: net
                .layers
                .iter()
                .map(|l| DenseLayer {
                    weights: Matrix::zeros(l.fan_in(), l.fan_out()),
                    biases: vec![T::zero(); l.fan_out()],
                })
                .collect(),
        }
    }
}

impl<T: Scalar> DenseNetwork<T> {
    /// Glorot-uniform weights, zero biases. `hidden_dims` may be empty, which
    /// gives plain logistic regression.
    pub fn new(input_dim: usize, hidden_dims: &[usize], seed: u64) -> Result<Self> {
        let mut dims = Vec::with_capacity(hidden_dims.len() + 2);
        dims.push(input_dim);
        dims.extend_from_slice(hidden_dims);
        dims.push(1);
        if let Some(position) = dims.iter().position(|&d| d == 0) {
            return Err(Error::InvalidDimension { position, dim: 0 });
        }

        let mut rng = seed::rng_from(seed);
        let layers = dims
            .windows(2)
            .map(|w| {
                let (fan_in, fan_out) = (w[0], w[1]);
                let limit = T::of((6.0 / (fan_in + fan_out) as f64).sqrt());
                let data = (0..fan_in * fan_out)
                    .map(|_| rng.random_range(-limit..limit))
                    .collect();
                DenseLayer {
                    weights: Matrix::from_vec(fan_in, fan_out, data)
                        .expect("buffer sized from dims"),
                    biases: vec![T::zero(); fan_out],
                }
            })
            .collect();
        Ok(Self { layers })
    }

    /// Builds a network from explicit layers; shapes must chain and end in a single unit.
    pub fn from_layers(layers: Vec<DenseLayer<T>>) -> Result<Self> {
        if layers.is_empty() {
            return Err(Error::Empty("network layers"));
        }
        for (k, l) in layers.iter().enumerate() {
            if l.fan_in() == 0 || l.fan_out() == 0 {
                return Err(Error::InvalidDimension {
                    position: k,
                    dim: 0,
                });
            }
            if l.biases.len() != l.fan_out() {
                return Err(Error::DimensionMismatch {
                    context: "layer bias",
                    expected: l.fan_out(),
                    actual: l.biases.len(),
                });
            }
            if k > 0 && layers[k - 1].fan_out() != l.fan_in() {
                return Err(Error::DimensionMismatch {
                    context: "layer chain",
                    expected: layers[k - 1].fan_out(),
                    actual: l.fan_in(),
                });
            }
        }
        let out = layers.last().map_or(0, DenseLayer::fan_out);
        if out != 1 {
            return Err(Error::DimensionMismatch {
                context: "output layer width",
                expected: 1,
                actual: out,
            });
        }
        Ok(Self { layers })
    }

    /// Rebuilds a network with the given layer widths from a flat parameter vector.
    pub fn from_params(layer_dims: &[usize], params: &ParamVector<T>) -> Result<Self> {
        if layer_dims.len() < 2 {
            return Err(Error::Empty("layer dims"));
        }
        let expected = param_count(layer_dims);
        if params.len() != expected {
            return Err(Error::DimensionMismatch {
                context: "parameter vector",
                expected,
                actual: params.len(),
            });
        }
        let mut offset = 0;
        let layers = layer_dims
            .windows(2)
            .map(|w| {
                let (fan_in, fan_out) = (w[0], w[1]);
                let nw = fan_in * fan_out;
                let weights = params.values[offset..offset + nw].to_vec();
                offset += nw;
                let biases = params.values[offset..offset + fan_out].to_vec();
                offset += fan_out;
                DenseLayer {
                    weights: Matrix::from_vec(fan_in, fan_out, weights)
                        .expect("slice sized from dims"),
                    biases,
                }
            })
            .collect();
        Self::from_layers(layers)
    }

    pub fn layers(&self) -> &[DenseLayer<T>] {
        &self.layers
    }

    pub fn layers_mut(&mut self) -> &mut [DenseLayer<T>] {
        &mut self.layers
    }

    pub fn layer_dims(&self) -> Vec<usize> {
        let mut dims = vec![self.input_dim()];
        dims.extend(self.layers.iter().map(DenseLayer::fan_out));
        dims
    }

    pub fn input_dim(&self) -> usize {
        self.layers[0].fan_in()
    }

    pub fn param_count(&self) -> usize {
        self.layers.iter().map(DenseLayer::param_count).sum()
    }

    pub fn to_params(&self) -> ParamVector<T> {
        let mut values = Vec::with_capacity(self.param_count());
        for l in &self.layers {
            values.extend_from_slice(l.weights.as_slice());
            values.extend_from_slice(&l.biases);
        }
        ParamVector { values }
    }

    /// Overwrites every parameter in place from a flat vector of matching layout.
    pub fn load_params(&mut self, params: &ParamVector<T>) -> Result<()> {
        if params.len() != self.param_count() {
            return Err(Error::DimensionMismatch {
                context: "parameter vector",
                expected: self.param_count(),
                actual: params.len(),
            });
        }
        let mut rest = params.as_slice();
        for l in &mut self.layers {
            let (w, tail) = rest.split_at(l.weights.as_slice().len());
            l.weights.as_mut_slice().copy_from_slice(w);
            let (b, tail) = tail.split_at(l.biases.len());
            l.biases.copy_from_slice(b);
            rest = tail;
        }
        Ok(())
    }

    pub fn is_finite(&self) -> bool {
        self.layers.iter().all(|l| {
            l.weights.as_slice().iter().all(|v| v.is_finite())
                && l.biases.iter().all(|v| v.is_finite())
        })
    }

    fn check_batch(&self, batch: &Matrix<T>) -> Result<()> {
        if batch.cols() != self.input_dim() {
            return Err(Error::DimensionMismatch {
                context: "feature columns",
                expected: self.input_dim(),
                actual: batch.cols(),
            });
        }
        Ok(())
    }

    /// Runs the batch through the network, filling `ws.activations`.
    fn forward_ws(&self, batch: &Matrix<T>, ws: &mut Workspace<T>) {
        let last = self.layers.len() - 1;
        for (k, layer) in self.layers.iter().enumerate() {
            let (done, rest) = ws.activations.split_at_mut(k);
            let input = if k == 0 { batch } else { &done[k - 1] };
            let out = &mut rest[0];
            affine_into(input, &layer.weights, &layer.biases, out);
            if k == last {
                for z in out.as_mut_slice() {
                    *z = open_unit(sigmoid(*z));
                }
            } else {
                for z in out.as_mut_slice() {
                    *z = z.max(T::zero());
                }
            }
        }
    }

    /// Malware probability for every row, each strictly inside (0, 1).
    pub fn forward(&self, batch: &Matrix<T>) -> Result<Vec<T>> {
        self.check_batch(batch)?;
        let mut ws = Workspace::new(self);
        self.forward_ws(batch, &mut ws);
        Ok(ws.activations.pop().expect("at least one layer").into_vec())
    }

    pub fn predict_labels(&self, batch: &Matrix<T>) -> Result<Vec<u8>> {
        let threshold = T::of(DECISION_THRESHOLD);
        Ok(self
            .forward(batch)?
            .into_iter()
            .map(|p| u8::from(p >= threshold))
            .collect())
    }

    /// Mean binary cross-entropy over the batch; fills `ws.grads` with its gradient.
    ///
    /// The gradient is that of the unclamped loss (`p - y` at the output);
    /// clamping only protects the logarithm.
    fn backprop_ws(&self, batch: &Matrix<T>, labels: &[u8], ws: &mut Workspace<T>) -> T {
        self.forward_ws(batch, ws);
        let n = batch.rows();
        let inv_n = T::one() / T::of(n as f64);
        let lo = T::of(LOSS_CLAMP);
        let hi = T::one() - lo;

        let probs = ws.activations.last().expect("at least one layer");
        let mut loss = T::zero();
        ws.delta.reshape_scratch(n, 1);
        for (i, (&p, &y)) in probs.as_slice().iter().zip(labels).enumerate() {
            let pc = p.max(lo).min(hi);
            let target = if y == 1 { T::one() } else { T::zero() };
            loss -= if y == 1 {
                pc.ln()
            } else {
                (T::one() - pc).ln()
            };
            ws.delta.as_mut_slice()[i] = (p - target) * inv_n;
        }

        for k in (0..self.layers.len()).rev() {
            let input = if k == 0 {
                batch
            } else {
                &ws.activations[k - 1]
            };
            let grad = &mut ws.grads[k];
            grad.weights.as_mut_slice().fill(T::zero());
            accumulate_outer(input, &ws.delta, &mut grad.weights);
            grad.biases.fill(T::zero());
            for row in ws.delta.iter_rows() {
                for (g, &d) in grad.biases.iter_mut().zip(row) {
                    *g += d;
                }
            }
            if k > 0 {
                backproject_into(&ws.delta, &self.layers[k].weights, &mut ws.delta_prev);
                let act = &ws.activations[k - 1];
                for (d, &a) in ws.delta_prev.as_mut_slice().iter_mut().zip(act.as_slice()) {
                    if a <= T::zero() {
                        *d = T::zero();
                    }
                }
                std::mem::swap(&mut ws.delta, &mut ws.delta_prev);
            }
        }
        loss * inv_n
    }

    fn check_supervised(&self, batch: &Matrix<T>, labels: &[u8]) -> Result<()> {
        self.check_batch(batch)?;
        if labels.len() != batch.rows() {
            return Err(Error::DimensionMismatch {
                context: "labels",
                expected: batch.rows(),
                actual: labels.len(),
            });
        }
        check_labels(labels)
    }

    /// Mean binary cross-entropy and its gradient in [`ParamVector`] layout.
    pub fn loss_and_gradient(
        &self,
        batch: &Matrix<T>,
        labels: &[u8],
    ) -> Result<(T, ParamVector<T>)> {
        self.check_supervised(batch, labels)?;
        if batch.rows() == 0 {
            return Err(Error::Empty("batch"));
        }
        let mut ws = Workspace::new(self);
        let loss = self.backprop_ws(batch, labels, &mut ws);
        let grad = DenseNetwork { layers: ws.grads }.to_params();
        Ok((loss, grad))
    }

    /// One pass of mini-batch SGD over the data in an order drawn from `rng`.
    /// The final short batch is used. Returns the sample-weighted mean loss.
    pub fn sgd_epoch<R: Rng + ?Sized>(
        &mut self,
        features: &Matrix<T>,
        labels: &[u8],
        cfg: &TrainConfig,
        rng: &mut R,
    ) -> Result<T> {
        cfg.validate()?;
        self.check_supervised(features, labels)?;
        if features.rows() == 0 {
            return Err(Error::Empty("training set"));
        }
        let mut ws = Workspace::new(self);
        Ok(self.epoch_ws(features, labels, cfg, rng, &mut ws))
    }

    fn epoch_ws<R: Rng + ?Sized>(
        &mut self,
        features: &Matrix<T>,
        labels: &[u8],
        cfg: &TrainConfig,
        rng: &mut R,
        ws: &mut Workspace<T>,
    ) -> T {
        let lr = T::of(cfg.learning_rate);
        let mut order: Vec<usize> = (0..features.rows()).collect();
        order.shuffle(rng);

        let mut total = T::zero();
        let mut batch_y = Vec::with_capacity(cfg.batch_size);
        for chunk in order.chunks(cfg.batch_size) {
            let batch_x = features.select_rows(chunk);
            batch_y.clear();
            batch_y.extend(chunk.iter().map(|&i| labels[i]));
            let loss = self.backprop_ws(&batch_x, &batch_y, ws);
            total += loss * T::of(chunk.len() as f64);
            for (layer, grad) in self.layers.iter_mut().zip(&ws.grads) {
                for (w, &g) in layer
                    .weights
                    .as_mut_slice()
                    .iter_mut()
                    .zip(grad.weights.as_slice())
                {
                    *w -= lr * g;
                }
                for (b, &g) in layer.biases.iter_mut().zip(&grad.biases) {
                    *b -= lr * g;
                }
            }
        }
        total / T::of(features.rows() as f64)
    }

    /// Runs `cfg.local_epochs` epochs with a shuffle stream seeded from `cfg.seed`.
    /// Returns the mean loss of each epoch.
    pub fn fit(
        &mut self,
        features: &Matrix<T>,
        labels: &[u8],
        cfg: &TrainConfig,
    ) -> Result<Vec<T>> {
        cfg.validate()?;
        self.check_supervised(features, labels)?;
        if features.rows() == 0 {
            return Err(Error::Empty("training set"));
        }
        let mut rng = seed::rng_from(cfg.seed);
        let mut ws = Workspace::new(self);
        Ok((0..cfg.local_epochs)
            .map(|_| self.epoch_ws(features, labels, cfg, &mut rng, &mut ws))
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn single_layer(w: [f64; 2], b: f64) -> DenseNetwork<f64> {
        DenseNetwork::from_layers(vec![DenseLayer {
            weights: Matrix::from_vec(2, 1, w.to_vec()).unwrap(),
            biases: vec![b],
        }])
        .unwrap()
    }

    #[test]
    fn reference_shape_param_count() {
        let net = DenseNetwork::<f64>::new(215, &DEFAULT_HIDDEN, 42).unwrap();
        assert_eq!(net.layers().len(), 4);
        assert_eq!(net.layer_dims(), vec![215, 200, 100, 50, 1]);
        // 215·200+200 + 200·100+100 + 100·50+50 + 50·1+1
        let by_hand = 43_200 + 20_100 + 5_050 + 51;
        assert_eq!(by_hand, 68_401);
        assert_eq!(net.to_params().len(), by_hand);
        assert_eq!(param_count(&[215, 200, 100, 50, 1]), by_hand);
    }

    #[test]
    fn logistic_regression_degenerate_case() {
        let net = DenseNetwork::<f64>::new(2, &[], 0).unwrap();
        assert_eq!(net.layers().len(), 1);
        assert_eq!(net.to_params().len(), 3);
    }

    #[test]
    fn zero_dims_rejected() {
        assert!(matches!(
            DenseNetwork::<f64>::new(0, &[3], 1),
            Err(Error::InvalidDimension { position: 0, .. })
        ));
        assert!(matches!(
            DenseNetwork::<f64>::new(3, &[4, 0], 1),
            Err(Error::InvalidDimension { position: 2, .. })
        ));
    }

    #[test]
    fn init_is_seed_deterministic_and_bounded() {
        let a = DenseNetwork::<f64>::new(10, &[6, 4], 7).unwrap();
        let b = DenseNetwork::<f64>::new(10, &[6, 4], 7).unwrap();
        let c = DenseNetwork::<f64>::new(10, &[6, 4], 8).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        for l in a.layers() {
            let limit = (6.0 / (l.fan_in() + l.fan_out()) as f64).sqrt();
            assert!(l.weights.as_slice().iter().all(|w| w.abs() <= limit));
            assert!(l.biases.iter().all(|&b| b == 0.0));
        }
    }

    #[test]
    fn zero_network_outputs_half_and_predicts_positive() {
        let mut net = DenseNetwork::<f64>::new(3, &[4, 2], 1).unwrap();
        let zeros = ParamVector::zeros(net.param_count());
        net.load_params(&zeros).unwrap();
        let x = Matrix::from_rows(&[[1.0, -2.0, 3.0], [0.5, 0.5, 0.5]]).unwrap();
        assert_eq!(net.forward(&x).unwrap(), vec![0.5, 0.5]);
        assert_eq!(net.predict_labels(&x).unwrap(), vec![1, 1]);
    }

    #[test]
    fn single_layer_at_origin_is_half() {
        let net = single_layer([1.0, 1.0], 0.0);
        let x = Matrix::from_rows(&[[0.0, 0.0]]).unwrap();
        assert_eq!(net.forward(&x).unwrap(), vec![0.5]);
    }

    #[test]
    fn threshold_splits_probabilities() {
        // sigmoid(z) = 0.2 at z = ln(0.25), 0.9 at z = ln 9
        let net = single_layer([1.0, 0.0], 0.0);
        let x = Matrix::from_rows(&[[0.25f64.ln(), 0.0], [9f64.ln(), 0.0]]).unwrap();
        assert_eq!(net.predict_labels(&x).unwrap(), vec![0, 1]);
    }

    #[test]
    fn half_probability_loss_is_ln2() {
        let net = single_layer([0.0, 0.0], 0.0);
        let x = Matrix::from_rows(&[[1.0, 2.0]]).unwrap();
        let (loss, _) = net.loss_and_gradient(&x, &[1]).unwrap();
        assert!((loss - std::f64::consts::LN_2).abs() < 1e-15);
    }

    #[test]
    fn confident_correct_prediction_has_vanishing_loss() {
        let net = single_layer([100.0, 0.0], 0.0);
        let x = Matrix::from_rows(&[[1.0, 0.0]]).unwrap();
        let (loss, _) = net.loss_and_gradient(&x, &[1]).unwrap();
        assert!((0.0..1e-6).contains(&loss), "loss = {loss}");
    }

    #[test]
    fn dimension_and_label_errors() {
        let net = single_layer([1.0, 1.0], 0.0);
        let x3 = Matrix::from_rows(&[[0.0, 0.0, 0.0]]).unwrap();
        assert!(matches!(
            net.forward(&x3),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(net.predict_labels(&x3).is_err());
        let x = Matrix::from_rows(&[[0.0, 0.0]]).unwrap();
        assert!(matches!(
            net.loss_and_gradient(&x, &[2]),
            Err(Error::NonBinaryLabel { row: 0, value: 2 })
        ));
        assert!(net.loss_and_gradient(&x, &[1, 0]).is_err());
    }

    #[test]
    fn empty_training_set_rejected() {
        let mut net = single_layer([1.0, 1.0], 0.0);
        let x = Matrix::<f64>::zeros(0, 2);
        let mut rng = seed::rng_from(0);
        assert!(matches!(
            net.sgd_epoch(&x, &[], &TrainConfig::default(), &mut rng),
            Err(Error::Empty(_))
        ));
    }

    #[test]
    fn zero_learning_rate_leaves_network_unchanged() {
        let mut net = DenseNetwork::<f64>::new(3, &[5], 9).unwrap();
        let before = net.clone();
        let x = Matrix::from_rows(&[[1.0, 0.0, 1.0], [0.0, 1.0, 1.0], [1.0, 1.0, 0.0]]).unwrap();
        let cfg = TrainConfig {
            learning_rate: 0.0,
            batch_size: 2,
            ..TrainConfig::default()
        };
        net.fit(&x, &[1, 0, 1], &cfg).unwrap();
        assert_eq!(net, before);
    }

    #[test]
    fn single_sample_step_is_exact_sgd_update() {
        let mut net = DenseNetwork::<f64>::new(4, &[3, 2], 5).unwrap();
        let x = Matrix::from_rows(&[[0.3, -1.2, 0.8, 1.0]]).unwrap();
        let (_, grad) = net.loss_and_gradient(&x, &[1]).unwrap();
        let expected: Vec<f64> = net
            .to_params()
            .values
            .iter()
            .zip(&grad.values)
            .map(|(&w, &g)| w - 0.1 * g)
            .collect();
        let cfg = TrainConfig {
            learning_rate: 0.1,
            batch_size: 1,
            local_epochs: 1,
            seed: 3,
        };
        let mut rng = seed::rng_from(3);
        net.sgd_epoch(&x, &[1], &cfg, &mut rng).unwrap();
        assert_eq!(net.to_params().values, expected);
    }

    #[test]
    fn params_round_trip() {
        let net = DenseNetwork::<f32>::new(6, &[5, 4], 11).unwrap();
        let p = net.to_params();
        let back = DenseNetwork::from_params(&net.layer_dims(), &p).unwrap();
        assert_eq!(back, net);
        assert!(DenseNetwork::from_params(&[6, 5, 4, 1], &ParamVector::<f32>::zeros(3)).is_err());
    }

    #[test]
    fn train_config_validation() {
        let bad = [
            TrainConfig {
                learning_rate: -1.0,
                ..TrainConfig::default()
            },
            TrainConfig {
                batch_size: 0,
                ..TrainConfig::default()
            },
            TrainConfig {
                local_epochs: 0,
                ..TrainConfig::default()
            },
        ];
        for cfg in bad {
            assert!(cfg.validate().is_err());
        }
        assert!(TrainConfig::default().validate().is_ok());
    }
}
