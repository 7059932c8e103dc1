//! Server-side model combination.
//!
//! [`fedavg`] is the unweighted coordinate mean of the client models.
//! [`dw_fedavg`] is the convex combination `Σ βᵢ·wᵢ` where the priority
//! weights `β` live in a [`PriorityIndex`] and are rewarded or penalised by a
//! factor `α` each round depending on whether the client's local test
//! accuracy went up or down. With uniform `β` the two are bit-identical since
//! both go through the same weighted-sum kernel.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::nn::ParamVector;
use crate::scalar::Scalar;

/// Tolerance on `Σβ = 1`.
pub const SIMPLEX_TOL: f64 = 1e-9;

pub const DEFAULT_ALPHA: f64 = 0.2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AggregationStrategy {
    FedAvg,
    DwFedAvg,
}

impl AggregationStrategy {
    pub const ALL: [AggregationStrategy; 2] = [Self::FedAvg, Self::DwFedAvg];

    pub fn as_str(&self) -> &'static str {
        match self {
            Self::FedAvg => "fedavg",
            Self::DwFedAvg => "dw-fedavg",
        }
    }
}

impl fmt::Display for AggregationStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for AggregationStrategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('_', "-").as_str() {
            "fedavg" => Ok(Self::FedAvg),
            "dw-fedavg" | "dwfedavg" => Ok(Self::DwFedAvg),
            other => Err(Error::InvalidConfig(format!(
                "unknown aggregation strategy `{other}` (expected fedavg or dw-fedavg)"
            ))),
        }
    }
}

/// Per-client priority weights and the accuracies they were last compared against.
#[derive(Clone, Debug, PartialEq)]
pub struct PriorityIndex {
    betas: Vec<f64>,
    prev_acc: Vec<f64>,
    alpha: f64,
    /// Number of updates applied so far.
    round: usize,
}

impl PriorityIndex {
    /// Uniform weights `1/n_clients`, previous accuracies zero.
    pub fn new(n_clients: usize, alpha: f64) -> Result<Self> {
        if n_clients == 0 {
            return Err(Error::Empty("client population"));
        }
        check_alpha(alpha)?;
        Ok(Self {
            betas: vec![1.0 / n_clients as f64; n_clients],
            prev_acc: vec![0.0; n_clients],
            alpha,
            round: 0,
        })
    }

    /// Builds an index in an arbitrary state. `betas` must lie on the simplex.
    pub fn from_parts(
        betas: Vec<f64>,
        prev_acc: Vec<f64>,
        alpha: f64,
        round: usize,
    ) -> Result<Self> {
        check_alpha(alpha)?;
        if betas.is_empty() {
            return Err(Error::Empty("client population"));
        }
        if prev_acc.len() != betas.len() {
            return Err(Error::DimensionMismatch {
                context: "previous accuracies",
                expected: betas.len(),
                actual: prev_acc.len(),
            });
        }
        check_simplex(&betas)?;
        check_accuracies(&prev_acc)?;
        Ok(Self {
            betas,
            prev_acc,
            alpha,
            round,
        })
    }

    pub fn betas(&self) -> &[f64] {
        &self.betas
    }

    pub fn prev_acc(&self) -> &[f64] {
        &self.prev_acc
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn round(&self) -> usize {
        self.round
    }

    pub fn n_clients(&self) -> usize {
        self.betas.len()
    }

    /// Applies one round of reward/penalty to the weights.
    ///
    /// The first call only records `curr_acc`. Afterwards each client whose
    /// accuracy rose gets `β ← β(1+α)`, each whose accuracy fell gets
    /// `β ← β(1−α)`, exact ties are left alone; then `β` is renormalised and
    /// `curr_acc` becomes the new reference.
    pub fn update(&mut self, curr_acc: &[f64]) -> Result<()> {
        if curr_acc.len() != self.betas.len() {
            return Err(Error::DimensionMismatch {
                context: "client accuracies",
                expected: self.betas.len(),
                actual: curr_acc.len(),
            });
        }
        check_accuracies(curr_acc)?;

        if self.round > 0 {
            let step = self.alpha;
            for ((beta, &curr), &prev) in self.betas.iter_mut().zip(curr_acc).zip(&self.prev_acc) {
                if curr > prev {
                    *beta += *beta * step;
                } else if curr < prev {
                    *beta -= *beta * step;
                }
            }
            let sum: f64 = self.betas.iter().sum();
            for beta in &mut self.betas {
                *beta /= sum;
            }
        }
        self.prev_acc.copy_from_slice(curr_acc);
        self.round += 1;
        Ok(())
    }
}

/// Functional form of [`PriorityIndex::update`].
pub fn update_priority_index(idx: &PriorityIndex, curr_acc: &[f64]) -> Result<PriorityIndex> {
    let mut next = idx.clone();
    next.update(curr_acc)?;
    Ok(next)
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidConfig(format!(
            "reward/penalty factor must lie in (0, 1), got {alpha}"
        )))
    }
}

fn check_accuracies(acc: &[f64]) -> Result<()> {
    match acc.iter().find(|a| !(0.0..=1.0).contains(*a)) {
        Some(a) => Err(Error::InvalidConfig(format!("accuracy {a} outside [0, 1]"))),
        None => Ok(()),
    }
}

fn check_simplex(weights: &[f64]) -> Result<()> {
    if weights.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
        return Err(Error::InvalidConfig(
            "priority weights must be finite and non-negative".into(),
        ));
    }
    let sum: f64 = weights.iter().sum();
    if (sum - 1.0).abs() > SIMPLEX_TOL {
        return Err(Error::WeightsNotNormalized(sum));
    }
    Ok(())
}

fn check_models<T: Scalar>(models: &[ParamVector<T>]) -> Result<usize> {
    let first = models.first().ok_or(Error::Empty("model list"))?;
    for m in &models[1..] {
        if m.len() != first.len() {
            return Err(Error::DimensionMismatch {
                context: "model parameter count",
                expected: first.len(),
                actual: m.len(),
            });
        }
    }
    Ok(first.len())
}

/// `Σ weights[i]·models[i]`, accumulated model by model in list order.
fn weighted_sum<T: Scalar>(models: &[ParamVector<T>], weights: &[T]) -> ParamVector<T> {
    let len = models[0].len();
    let mut out = vec![T::zero(); len];
    for (m, &w) in models.iter().zip(weights) {
        for (o, &v) in out.iter_mut().zip(m.as_slice()) {
            *o += w * v;
        }
    }
    ParamVector::new(out)
}

/// Coordinate-wise mean of the client models.
pub fn fedavg<T: Scalar>(models: &[ParamVector<T>]) -> Result<ParamVector<T>> {
    check_models(models)?;
    let w = T::of(1.0 / models.len() as f64);
    Ok(weighted_sum(models, &vec![w; models.len()]))
}

/// Priority-weighted combination `Σ βᵢ·wᵢ`.
pub fn dw_fedavg<T: Scalar>(
    models: &[ParamVector<T>],
    idx: &PriorityIndex,
) -> Result<ParamVector<T>> {
    weighted_by(models, idx.betas())
}

/// Convex combination with explicit weights, which must lie on the simplex.
pub fn weighted_by<T: Scalar>(models: &[ParamVector<T>], betas: &[f64]) -> Result<ParamVector<T>> {
    check_models(models)?;
    if betas.len() != models.len() {
        return Err(Error::DimensionMismatch {
            context: "priority weights",
            expected: models.len(),
            actual: betas.len(),
        });
    }
    check_simplex(betas)?;
    let w: Vec<T> = betas.iter().map(|&b| T::of(b)).collect();
    Ok(weighted_sum(models, &w))
}

/// `(1/N)·Σ βᵢ·wᵢ` with normalised `β`, i.e. the weighted form with an extra
/// `1/N` factor. Shrinks the model by roughly `N` each round; kept only for
/// side-by-side comparison runs.
pub fn dw_fedavg_literal<T: Scalar>(
    models: &[ParamVector<T>],
    idx: &PriorityIndex,
) -> Result<ParamVector<T>> {
    let mut out = dw_fedavg(models, idx)?;
    let scale = T::of(1.0 / models.len() as f64);
    for v in &mut out.values {
        *v *= scale;
    }
    Ok(out)
}

/// Aggregates according to `strategy`.
pub fn aggregate<T: Scalar>(
    strategy: AggregationStrategy,
    models: &[ParamVector<T>],
    idx: &PriorityIndex,
) -> Result<ParamVector<T>> {
    match strategy {
        AggregationStrategy::FedAvg => fedavg(models),
        AggregationStrategy::DwFedAvg => dw_fedavg(models, idx),
    }
}
