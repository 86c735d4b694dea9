use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use super::{check_xy, sigmoid, LearnerKind, Standardizer, TrainMeta, TrainedModel, Weights};
use crate::features::linalg::{axpy, dot, norm};
use crate::Result;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LrConfig {
    /// Inverse L2 strength: the penalty is `|w|^2 / (2c)`; the bias is unpenalized.
    pub c: f64,
    /// Stop once the gradient norm falls below this.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for LrConfig {
    fn default() -> Self {
        LrConfig {
            c: 1.0,
            tol: 1e-6,
            max_iter: 1000,
        }
    }
}

/// Summed log-loss plus `|w|^2 / (2c)` and its gradient `[dw.., db]`.
pub fn lr_loss_grad<V: AsRef<[f64]>>(x: &[V], y: &[bool], w: &[f64], b: f64, c: f64) -> (f64, Vec<f64>) {
    let d = w.len();
    let mut grad = vec![0.0; d + 1];
    let mut loss = dot(w, w) / (2.0 * c);
    for (v, &t) in x.iter().zip(y) {
        let v = v.as_ref();
        let z = dot(w, v) + b;
        let softplus = z.max(0.0) + (-z.abs()).exp().ln_1p();
        loss += if t { softplus - z } else { softplus };
        let r = sigmoid(z) - if t { 1.0 } else { 0.0 };
        axpy(r, v, &mut grad[..d]);
        grad[d] += r;
    }
    axpy(1.0 / c, w, &mut grad[..d]);
    (loss, grad)
}

pub fn lr_train<V: AsRef<[f64]>>(x: &[V], y: &[bool], cfg: &LrConfig) -> Result<TrainedModel> {
    lr_train_traced(x, y, cfg).map(|(m, _)| m)
}

/// Train and also return the objective value after every accepted step.
///
/// L-BFGS (memory 10) on standardized features; each step is accepted only under
/// the Armijo condition, halving the step until it holds, so the recorded losses
/// never increase.
pub fn lr_train_traced<V: AsRef<[f64]>>(x: &[V], y: &[bool], cfg: &LrConfig) -> Result<(TrainedModel, Vec<f64>)> {
    let (n, d, pos) = check_xy(x, y)?;
    if !(cfg.c > 0.0) {
        return Err(crate::Error::InvalidParameter(format!("LR needs c > 0, got {}", cfg.c)));
    }
    let std = Standardizer::fit(x);
    let z: Vec<Vec<f64>> = x.iter().map(|v| std.apply(v.as_ref())).collect();

    let eval = |theta: &[f64]| lr_loss_grad(&z, y, &theta[..d], theta[d], cfg.c);
    let mut theta = vec![0.0; d + 1];
    let (mut f, mut g) = eval(&theta);
    let mut history = vec![f];
    let mut memory: VecDeque<(Vec<f64>, Vec<f64>, f64)> = VecDeque::new();

    for _ in 0..cfg.max_iter {
        if norm(&g) <= cfg.tol {
            break;
        }
        let mut dir = two_loop(&g, &memory);
        let mut slope = dot(&g, &dir);
        if !(slope < 0.0) {
            memory.clear();
            dir = g.iter().map(|v| -v).collect();
            slope = -dot(&g, &g);
        }
        let mut step = if memory.is_empty() { 1.0 / norm(&g).max(1.0) } else { 1.0 };
        let mut accepted = None;
        for _ in 0..60 {
            let mut trial = theta.clone();
            axpy(step, &dir, &mut trial);
            let (ft, gt) = eval(&trial);
            if ft <= f + 1e-4 * step * slope {
                accepted = Some((trial, ft, gt));
                break;
            }
            step *= 0.5;
        }
        let Some((next, fn_, gn)) = accepted else {
            break;
        };
        let s: Vec<f64> = next.iter().zip(&theta).map(|(a, b)| a - b).collect();
        let yv: Vec<f64> = gn.iter().zip(&g).map(|(a, b)| a - b).collect();
        let sy = dot(&s, &yv);
        if sy > 1e-12 * norm(&s) * norm(&yv) {
            if memory.len() == 10 {
                memory.pop_front();
            }
            memory.push_back((s, yv, 1.0 / sy));
        }
        theta = next;
        f = fn_;
        g = gn;
        history.push(f);
    }

    let b = theta[d];
    theta.truncate(d);
    let model = TrainedModel {
        kind: LearnerKind::Lr,
        dim: d,
        standardizer: Some(std),
        weights: Weights::Lr { w: theta, b },
        pipeline_id: String::new(),
        train_meta: TrainMeta {
            n_samples: n,
            n_positive: pos,
            seed: 0,
        },
    };
    Ok((model, history))
}

fn two_loop(g: &[f64], memory: &VecDeque<(Vec<f64>, Vec<f64>, f64)>) -> Vec<f64> {
    let mut q = g.to_vec();
    let mut alphas = Vec::with_capacity(memory.len());
    for (s, y, rho) in memory.iter().rev() {
        let a = rho * dot(s, &q);
        axpy(-a, y, &mut q);
        alphas.push(a);
    }
    if let Some((s, y, _)) = memory.back() {
        let gamma = dot(s, y) / dot(y, y);
        q.iter_mut().for_each(|v| *v *= gamma);
    }
    for ((s, y, rho), a) in memory.iter().zip(alphas.into_iter().rev()) {
        let beta = rho * dot(y, &q);
        axpy(a - beta, s, &mut q);
    }
    q.iter_mut().for_each(|v| *v = -*v);
    q
}
