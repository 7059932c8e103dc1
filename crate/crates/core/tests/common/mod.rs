//! Reference implementations used as test oracles. They deliberately share
//! no code with the library paths they check.
#![allow(dead_code, clippy::needless_range_loop)]

use fedsim_core::nn::DenseNetwork;
use rand::Rng;

/// Plain triple-loop forward pass over `layers()`, returning probabilities
/// and the smallest |pre-activation| seen in any hidden unit.
pub fn forward_oracle(net: &DenseNetwork<f64>, x: &[Vec<f64>]) -> (Vec<f64>, f64) {
    let layers = net.layers();
    let mut min_pre = f64::INFINITY;
    let probs = x
        .iter()
        .map(|row| {
            let mut a = row.clone();
            for (k, layer) in layers.iter().enumerate() {
                let (fan_in, fan_out) = (layer.weights.rows(), layer.weights.cols());
                let mut z = vec![0.0; fan_out];
                for j in 0..fan_out {
                    let mut s = layer.biases[j];
                    for i in 0..fan_in {
                        s += a[i] * layer.weights.get(i, j);
                    }
                    z[j] = s;
                }
                if k + 1 < layers.len() {
                    min_pre = z.iter().fold(min_pre, |m, v| m.min(v.abs()));
                    a = z
                        .into_iter()
                        .map(|v| if v > 0.0 { v } else { 0.0 })
                        .collect();
                } else {
                    a = z.into_iter().map(|v| 1.0 / (1.0 + (-v).exp())).collect();
                }
            }
            a[0]
        })
        .collect();
    (probs, min_pre)
}

/// Mean binary cross-entropy computed from the oracle forward pass.
pub fn loss_oracle(net: &DenseNetwork<f64>, x: &[Vec<f64>], y: &[u8]) -> f64 {
    let (p, _) = forward_oracle(net, x);
    let total: f64 = p
        .iter()
        .zip(y)
        .map(|(&p, &t)| {
            let p = p.clamp(1e-7, 1.0 - 1e-7);
            if t == 1 {
                -p.ln()
            } else {
                -(1.0 - p).ln()
            }
        })
        .sum();
    total / x.len() as f64
}

/// Counts positive/negative pairs: wins + ½ ties over |+|·|−|.
pub fn auc_pairwise(scores: &[f64], truth: &[u8]) -> f64 {
    let mut wins = 0.0;
    let mut pairs = 0.0;
    for (i, &ti) in truth.iter().enumerate() {
        if ti != 1 {
            continue;
        }
        for (j, &tj) in truth.iter().enumerate() {
            if tj != 0 {
                continue;
            }
            pairs += 1.0;
            if scores[i] > scores[j] {
                wins += 1.0;
            } else if scores[i] == scores[j] {
                wins += 0.5;
            }
        }
    }
    wins / pairs
}

/// Independent confusion count: returns (tp, tn, fp, fn).
pub fn confusion_oracle(pred: &[u8], truth: &[u8]) -> (u64, u64, u64, u64) {
    let mut counts = [[0u64; 2]; 2];
    for k in 0..pred.len() {
        counts[pred[k] as usize][truth[k] as usize] += 1;
    }
    (counts[1][1], counts[0][0], counts[1][0], counts[0][1])
}

/// Element-wise mean by summing first and dividing once.
pub fn mean_oracle(models: &[Vec<f64>]) -> Vec<f64> {
    let mut out = vec![0.0; models[0].len()];
    for m in models {
        for i in 0..out.len() {
            out[i] += m[i];
        }
    }
    out.iter().map(|v| v / models.len() as f64).collect()
}

pub fn weighted_oracle(models: &[Vec<f64>], w: &[f64]) -> Vec<f64> {
    (0..models[0].len())
        .map(|i| (0..models.len()).map(|k| w[k] * models[k][i]).sum())
        .collect()
}

pub fn random_simplex<R: Rng>(rng: &mut R, n: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..n).map(|_| rng.random_range(0.01..1.0)).collect();
    let s: f64 = raw.iter().sum();
    raw.into_iter().map(|v| v / s).collect()
}

/// Random network with widths drawn from `1..=max` per position (input, hidden…).
pub fn random_small_net<R: Rng>(rng: &mut R, max_dims: &[usize]) -> DenseNetwork<f64> {
    let input = rng.random_range(1..=max_dims[0]);
    let hidden: Vec<usize> = max_dims[1..]
        .iter()
        .map(|&m| rng.random_range(1..=m))
        .collect();
    let mut net = DenseNetwork::new(input, &hidden, rng.random()).unwrap();
    // non-zero biases exercise the bias gradient
    let mut p = net.to_params();
    for v in &mut p.values {
        *v += rng.random_range(-0.3..0.3);
    }
    net.load_params(&p).unwrap();
    net
}

/// Central finite-difference gradient check. Returns the worst relative
/// error, with |a−n| / max(|a|, |n|, 1e-6) per coordinate.
pub fn gradient_check(net: &DenseNetwork<f64>, x: &[Vec<f64>], y: &[u8], eps: f64) -> f64 {
    use fedsim_core::matrix::Matrix;
    let xm = Matrix::from_rows(x).unwrap();
    let (_, grad) = net.loss_and_gradient(&xm, y).unwrap();
    let base = net.to_params();
    let dims = net.layer_dims();
    let mut worst: f64 = 0.0;
    for i in 0..base.len() {
        let mut plus = base.clone();
        plus.values[i] += eps;
        let mut minus = base.clone();
        minus.values[i] -= eps;
        let lp = loss_oracle(&DenseNetwork::from_params(&dims, &plus).unwrap(), x, y);
        let lm = loss_oracle(&DenseNetwork::from_params(&dims, &minus).unwrap(), x, y);
        let numeric = (lp - lm) / (2.0 * eps);
        let analytic = grad.values[i];
        let rel = (analytic - numeric).abs() / analytic.abs().max(numeric.abs()).max(1e-6);
        worst = worst.max(rel);
    }
    worst
}

/// Random batch (and labels) whose hidden pre-activations stay at least
/// `margin` away from the ReLU kink, so finite differences do not cross it.
pub fn kink_free_batch<R: Rng>(
    rng: &mut R,
    net: &DenseNetwork<f64>,
    rows: usize,
    margin: f64,
) -> (Vec<Vec<f64>>, Vec<u8>) {
    loop {
        let x: Vec<Vec<f64>> = (0..rows)
            .map(|_| {
                (0..net.input_dim())
                    .map(|_| rng.random_range(-1.5..1.5))
                    .collect()
            })
            .collect();
        let (_, min_pre) = forward_oracle(net, &x);
        if min_pre > margin {
            let y = (0..rows).map(|_| rng.random_range(0..2u8)).collect();
            return (x, y);
        }
    }
}
