//! Binary classification metrics. Malware (label 1) is the positive class.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Confusion {
    pub tp: u64,
    pub tn: u64,
    pub fp: u64,
    pub fn_: u64,
}

impl Confusion {
    pub fn total(&self) -> u64 {
        self.tp + self.tn + self.fp + self.fn_
    }

    /// `(tp + tn) / total`; an empty confusion scores 0.
    pub fn accuracy(&self) -> f64 {
        let total = self.total();
        if total == 0 {
            return 0.0;
        }
        (self.tp + self.tn) as f64 / total as f64
    }

    /// `tp / (tp + (fp + fn) / 2)`. With no positives predicted or present the
    /// classifier made no positive-class error, so this returns 1.
    pub fn f1(&self) -> f64 {
        if self.tp + self.fp + self.fn_ == 0 {
            return 1.0;
        }
        self.tp as f64 / (self.tp as f64 + 0.5 * (self.fp + self.fn_) as f64)
    }

    /// `fp / (fp + tn)`; 0 when there are no negatives.
    pub fn fpr(&self) -> f64 {
        if self.fp + self.tn == 0 {
            return 0.0;
        }
        self.fp as f64 / (self.fp + self.tn) as f64
    }
}

pub fn confusion(pred: &[u8], truth: &[u8]) -> Result<Confusion> {
    if pred.len() != truth.len() {
        return Err(Error::DimensionMismatch {
            context: "prediction/truth length",
            expected: truth.len(),
            actual: pred.len(),
        });
    }
    if truth.is_empty() {
        return Err(Error::Empty("truth vector"));
    }
    let mut c = Confusion::default();
    for (row, (&p, &t)) in pred.iter().zip(truth).enumerate() {
        match (p, t) {
            (1, 1) => c.tp += 1,
            (0, 0) => c.tn += 1,
            (1, 0) => c.fp += 1,
            (0, 1) => c.fn_ += 1,
            _ => {
                return Err(Error::NonBinaryLabel {
                    row,
                    value: p.max(t),
                })
            }
        }
    }
    Ok(c)
}

pub fn accuracy(c: &Confusion) -> f64 {
    c.accuracy()
}

pub fn f1(c: &Confusion) -> f64 {
    c.f1()
}

pub fn fpr(c: &Confusion) -> f64 {
    c.fpr()
}

/// Rank-sum (Mann–Whitney) AUC:
/// `(ΣRank(+) − n₊(n₊+1)/2) / (n₊·n₋)` with 1-based ranks over ascending
/// scores and tied scores sharing their average rank.
pub fn auc_rank<T: Scalar>(scores: &[T], truth: &[u8]) -> Result<f64> {
    if scores.len() != truth.len() {
        return Err(Error::DimensionMismatch {
            context: "score/truth length",
            expected: truth.len(),
            actual: scores.len(),
        });
    }
    if let Some(i) = scores.iter().position(|s| !s.is_finite()) {
        return Err(Error::NonFiniteScore(i));
    }
    if let Some(row) = truth.iter().position(|&t| t > 1) {
        return Err(Error::NonBinaryLabel {
            row,
            value: truth[row],
        });
    }
    let n_pos = truth.iter().filter(|&&t| t == 1).count();
    let n_neg = truth.len() - n_pos;
    if n_pos == 0 || n_neg == 0 {
        return Err(Error::SingleClass);
    }

    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].partial_cmp(&scores[b]).expect("finite scores"));

    let mut pos_rank_sum = 0.0f64;
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && scores[order[end]] == scores[order[start]] {
            end += 1;
        }
        // positions start..end hold ranks start+1..=end
        let mid_rank = (start + 1 + end) as f64 / 2.0;
        let pos_in_group = order[start..end].iter().filter(|&&i| truth[i] == 1).count();
        pos_rank_sum += mid_rank * pos_in_group as f64;
        start = end;
    }

    let n_pos_f = n_pos as f64;
    Ok((pos_rank_sum - n_pos_f * (n_pos_f + 1.0) / 2.0) / (n_pos_f * n_neg as f64))
}

/// Accuracy, F1, AUC and FPR of one evaluation.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct MetricSet {
    pub accuracy: f64,
    pub f1: f64,
    pub auc: f64,
    pub fpr: f64,
}

impl MetricSet {
    /// Scores probabilities against truth, thresholding at `threshold` (ties positive).
    pub fn evaluate<T: Scalar>(probs: &[T], truth: &[u8], threshold: T) -> Result<Self> {
        let pred: Vec<u8> = probs.iter().map(|&p| u8::from(p >= threshold)).collect();
        let c = confusion(&pred, truth)?;
        Ok(Self {
            accuracy: c.accuracy(),
            f1: c.f1(),
            auc: auc_rank(probs, truth)?,
            fpr: c.fpr(),
        })
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.accuracy, self.f1, self.auc, self.fpr]
    }
}

pub const METRIC_NAMES: [&str; 4] = ["accuracy", "f1", "auc", "fpr"];
