use serde::{Deserialize, Serialize};

use super::{check_xy, rbf, LearnerKind, Standardizer, TrainMeta, TrainedModel, Weights};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Gamma {
    /// `1 / (d * Var(X))` over the standardized training matrix.
    Scale,
    Value(f64),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SvcConfig {
    pub c: f64,
    pub gamma: Gamma,
    /// Maximal KKT violation at termination.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for SvcConfig {
    fn default() -> Self {
        SvcConfig {
            c: 1.0,
            gamma: Gamma::Scale,
            tol: 1e-3,
            max_iter: 10_000_000,
        }
    }
}

const TAU: f64 = 1e-12;

pub fn svc_train<V: AsRef<[f64]>>(x: &[V], y: &[bool], cfg: &SvcConfig) -> Result<TrainedModel> {
    svc_train_traced(x, y, cfg).map(|(m, _)| m)
}

/// Train and also return the dual objective after every SMO update.
///
/// Pairs are chosen with second-order working-set selection over a precomputed
/// kernel matrix; the solver stops when the maximal violating pair gap drops below
/// `cfg.tol`.
pub fn svc_train_traced<V: AsRef<[f64]>>(x: &[V], y: &[bool], cfg: &SvcConfig) -> Result<(TrainedModel, Vec<f64>)> {
    let (n, d, pos) = check_xy(x, y)?;
    if !(cfg.c > 0.0) || !(cfg.tol > 0.0) {
        return Err(Error::InvalidParameter("SVC needs c > 0 and tol > 0".into()));
    }
    let std = Standardizer::fit(x);
    let z: Vec<Vec<f64>> = x.iter().map(|v| std.apply(v.as_ref())).collect();
    let gamma = match cfg.gamma {
        Gamma::Value(g) if g > 0.0 => g,
        Gamma::Value(g) => return Err(Error::InvalidParameter(format!("SVC needs gamma > 0, got {g}"))),
        Gamma::Scale => {
            let total = (n * d) as f64;
            let mean = z.iter().flatten().sum::<f64>() / total;
            let var = z.iter().flatten().map(|v| (v - mean) * (v - mean)).sum::<f64>() / total;
            if var > 0.0 {
                1.0 / (d as f64 * var)
            } else {
                1.0
            }
        }
    };

    let mut kernel = vec![0.0; n * n];
    for i in 0..n {
        kernel[i * n + i] = 1.0;
        for j in 0..i {
            let k = rbf(&z[i], &z[j], gamma);
            kernel[i * n + j] = k;
            kernel[j * n + i] = k;
        }
    }
    let ys: Vec<f64> = y.iter().map(|&t| if t { 1.0 } else { -1.0 }).collect();
    let (alpha, rho, history) = smo(&kernel, &ys, cfg);

    let mut support = Vec::new();
    let mut coef = Vec::new();
    for i in 0..n {
        if alpha[i] > 0.0 {
            support.push(z[i].clone());
            coef.push(alpha[i] * ys[i]);
        }
    }
    let decisions: Vec<f64> = (0..n)
        .map(|i| (0..n).map(|j| alpha[j] * ys[j] * kernel[i * n + j]).sum::<f64>() - rho)
        .collect();
    let (platt_a, platt_b) = platt(&decisions, y);

    let model = TrainedModel {
        kind: LearnerKind::Svc,
        dim: d,
        standardizer: Some(std),
        weights: Weights::Svc {
            support,
            coef,
            bias: -rho,
            gamma,
            c: cfg.c,
            platt_a,
            platt_b,
        },
        pipeline_id: String::new(),
        train_meta: TrainMeta {
            n_samples: n,
            n_positive: pos,
            seed: 0,
        },
    };
    Ok((model, history))
}

/// Returns (alpha, rho, dual objective trace); the decision function is
/// `sum alpha_i y_i k(x_i, x) - rho`.
fn smo(kernel: &[f64], y: &[f64], cfg: &SvcConfig) -> (Vec<f64>, f64, Vec<f64>) {
    let n = y.len();
    let c = cfg.c;
    let k = |i: usize, j: usize| kernel[i * n + j];
    let mut alpha = vec![0.0; n];
    let mut grad = vec![-1.0; n];
    let mut history = vec![0.0];
    let upper = |a: f64| a >= c;
    let lower = |a: f64| a <= 0.0;

    for _ in 0..cfg.max_iter {
        let mut gmax = f64::NEG_INFINITY;
        let mut i = usize::MAX;
        for t in 0..n {
            let in_up = if y[t] > 0.0 { !upper(alpha[t]) } else { !lower(alpha[t]) };
            if in_up && -y[t] * grad[t] >= gmax {
                gmax = -y[t] * grad[t];
                i = t;
            }
        }
        if i == usize::MAX {
            break;
        }
        let mut gmax2 = f64::NEG_INFINITY;
        let mut j = usize::MAX;
        let mut obj_min = f64::INFINITY;
        for t in 0..n {
            let in_low = if y[t] > 0.0 { !lower(alpha[t]) } else { !upper(alpha[t]) };
            if !in_low {
                continue;
            }
            let yg = y[t] * grad[t];
            gmax2 = gmax2.max(yg);
            let diff = gmax + yg;
            if diff > 0.0 {
                let quad = (k(i, i) + k(t, t) - 2.0 * k(i, t)).max(TAU);
                let obj = -diff * diff / quad;
                if obj <= obj_min {
                    obj_min = obj;
                    j = t;
                }
            }
        }
        if gmax + gmax2 < cfg.tol || j == usize::MAX {
            break;
        }

        let (old_i, old_j) = (alpha[i], alpha[j]);
        let qij = y[i] * y[j] * k(i, j);
        if y[i] != y[j] {
            let quad = (k(i, i) + k(j, j) + 2.0 * qij).max(TAU);
            let delta = (-grad[i] - grad[j]) / quad;
            let diff = alpha[i] - alpha[j];
            alpha[i] += delta;
            alpha[j] += delta;
            if diff > 0.0 {
                if alpha[j] < 0.0 {
                    alpha[j] = 0.0;
                    alpha[i] = diff;
                }
            } else if alpha[i] < 0.0 {
                alpha[i] = 0.0;
                alpha[j] = -diff;
            }
            if diff > 0.0 {
                if alpha[i] > c {
                    alpha[i] = c;
                    alpha[j] = c - diff;
                }
            } else if alpha[j] > c {
                alpha[j] = c;
                alpha[i] = c + diff;
            }
        } else {
            let quad = (k(i, i) + k(j, j) - 2.0 * qij).max(TAU);
            let delta = (grad[i] - grad[j]) / quad;
            let sum = alpha[i] + alpha[j];
            alpha[i] -= delta;
            alpha[j] += delta;
            if sum > c {
                if alpha[i] > c {
                    alpha[i] = c;
                    alpha[j] = sum - c;
                }
            } else if alpha[j] < 0.0 {
                alpha[j] = 0.0;
                alpha[i] = sum;
            }
            if sum > c {
                if alpha[j] > c {
                    alpha[j] = c;
                    alpha[i] = sum - c;
                }
            } else if alpha[i] < 0.0 {
                alpha[i] = 0.0;
                alpha[j] = sum;
            }
        }
        let (di, dj) = (alpha[i] - old_i, alpha[j] - old_j);
        for t in 0..n {
            grad[t] += y[t] * (y[i] * k(i, t) * di + y[j] * k(j, t) * dj);
        }
        history.push(0.5 * alpha.iter().zip(&grad).map(|(a, g)| a * (1.0 - g)).sum::<f64>());
    }

    let (mut ub, mut lb) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut free, mut sum_free) = (0usize, 0.0);
    for t in 0..n {
        let yg = y[t] * grad[t];
        if upper(alpha[t]) {
            if y[t] < 0.0 {
                ub = ub.min(yg);
            } else {
                lb = lb.max(yg);
            }
        } else if lower(alpha[t]) {
            if y[t] > 0.0 {
                ub = ub.min(yg);
            } else {
                lb = lb.max(yg);
            }
        } else {
            free += 1;
            sum_free += yg;
        }
    }
    let rho = if free > 0 { sum_free / free as f64 } else { (ub + lb) / 2.0 };
    (alpha, rho, history)
}

/// Logistic link `P(y=1|f) = 1 / (1 + exp(a f + b))` fit by Newton's method with
/// backtracking on regularized targets.
fn platt(f: &[f64], y: &[bool]) -> (f64, f64) {
    let prior1 = y.iter().filter(|&&t| t).count() as f64;
    let prior0 = y.len() as f64 - prior1;
    let hi = (prior1 + 1.0) / (prior1 + 2.0);
    let lo = 1.0 / (prior0 + 2.0);
    let targets: Vec<f64> = y.iter().map(|&t| if t { hi } else { lo }).collect();
    let objective = |a: f64, b: f64| -> f64 {
        f.iter()
            .zip(&targets)
            .map(|(fi, t)| {
                let z = fi * a + b;
                if z >= 0.0 {
                    t * z + (-z).exp().ln_1p()
                } else {
                    (t - 1.0) * z + z.exp().ln_1p()
                }
            })
            .sum()
    };
    let (mut a, mut b) = (0.0, ((prior0 + 1.0) / (prior1 + 1.0)).ln());
    let mut fval = objective(a, b);
    for _ in 0..100 {
        let (mut h11, mut h22, mut h21, mut g1, mut g2) = (1e-12, 1e-12, 0.0, 0.0, 0.0);
        for (fi, t) in f.iter().zip(&targets) {
            let z = fi * a + b;
            let (p, q) = if z >= 0.0 {
                let e = (-z).exp();
                (e / (1.0 + e), 1.0 / (1.0 + e))
            } else {
                let e = z.exp();
                (1.0 / (1.0 + e), e / (1.0 + e))
            };
            let d2 = p * q;
            h11 += fi * fi * d2;
            h22 += d2;
            h21 += fi * d2;
            let d1 = t - p;
            g1 += fi * d1;
            g2 += d1;
        }
        if g1.abs() < 1e-5 && g2.abs() < 1e-5 {
            break;
        }
        let det = h11 * h22 - h21 * h21;
        let da = -(h22 * g1 - h21 * g2) / det;
        let db = -(-h21 * g1 + h11 * g2) / det;
        let gd = g1 * da + g2 * db;
        let mut step = 1.0;
        while step >= 1e-10 {
            let (na, nb) = (a + step * da, b + step * db);
            let nf = objective(na, nb);
            if nf < fval + 1e-4 * step * gd {
                a = na;
                b = nb;
                fval = nf;
                break;
            }
            step /= 2.0;
        }
        if step < 1e-10 {
            break;
        }
    }
    (a, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rng;

    fn two_clusters(n: usize, seed: u64) -> (Vec<Vec<f64>>, Vec<bool>) {
        let mut rng = Rng::new(seed);
        (0..n)
            .map(|i| {
                let t = i % 2 == 0;
                let cx = if t { 2.0 } else { -2.0 };
                (vec![cx + 0.4 * rng.normal(), 0.4 * rng.normal()], t)
            })
            .unzip()
    }

    fn cfg(c: f64, gamma: f64) -> SvcConfig {
        SvcConfig {
            c,
            gamma: Gamma::Value(gamma),
            ..SvcConfig::default()
        }
    }

    #[test]
    fn xor_is_separated() {
        let x = vec![vec![0.0, 0.0], vec![1.0, 1.0], vec![0.0, 1.0], vec![1.0, 0.0]];
        let y = [false, false, true, true];
        let m = svc_train(&x, &y, &cfg(10.0, 1.0)).unwrap();
        for (v, &t) in x.iter().zip(&y) {
            assert_eq!(m.decision_value(v).unwrap() > 0.0, t);
        }
    }

    #[test]
    fn kkt_conditions_hold_on_separable_data() {
        let (x, y) = two_clusters(60, 3);
        let c = 1.0;
        let m = svc_train(&x, &y, &cfg(c, 0.5)).unwrap();
        let Weights::Svc { support, coef, .. } = &m.weights else { unreachable!() };
        let std = m.standardizer.as_ref().unwrap();
        for (v, &t) in x.iter().zip(&y) {
            let yi = if t { 1.0 } else { -1.0 };
            let margin = yi * m.decision_value(v).unwrap();
            let z = std.apply(v);
            let a = support
                .iter()
                .zip(coef)
                .find(|(s, _)| **s == z)
                .map_or(0.0, |(_, cf)| cf.abs());
            if a == 0.0 {
                assert!(margin >= 1.0 - 1e-3, "alpha=0 but margin {margin}");
            } else if a >= c {
                assert!(margin <= 1.0 + 1e-3, "alpha=C but margin {margin}");
            } else {
                assert!((margin - 1.0).abs() <= 1e-3, "free SV margin {margin}");
            }
        }
    }

    #[test]
    fn dual_objective_never_decreases() {
        let mut rng = Rng::new(8);
        let x: Vec<Vec<f64>> = (0..120).map(|_| vec![rng.normal(), rng.normal()]).collect();
        let y: Vec<bool> = x.iter().map(|v| v[0] * v[1] > 0.0 || v[0] > 1.5).collect();
        let (_, hist) = svc_train_traced(&x, &y, &SvcConfig::default()).unwrap();
        assert!(hist.len() > 10);
        assert!(hist.windows(2).all(|w| w[1] >= w[0] - 1e-12));
    }

    #[test]
    fn duplicated_points_keep_the_decision_function() {
        let (x, y) = two_clusters(40, 11);
        let x2: Vec<Vec<f64>> = x.iter().chain(&x).cloned().collect();
        let y2: Vec<bool> = y.iter().chain(&y).copied().collect();
        let a = svc_train(&x, &y, &cfg(100.0, 0.5)).unwrap();
        let b = svc_train(&x2, &y2, &cfg(100.0, 0.5)).unwrap();
        for i in -6..=6 {
            for j in -6..=6 {
                let p = [i as f64 * 0.5, j as f64 * 0.5];
                let (fa, fb) = (a.decision_value(&p).unwrap(), b.decision_value(&p).unwrap());
                assert!((fa - fb).abs() < 1e-3, "{p:?}: {fa} vs {fb}");
            }
        }
    }

    #[test]
    fn probabilities_follow_decision_values() {
        let (x, y) = two_clusters(80, 2);
        let m = svc_train(&x, &y, &SvcConfig::default()).unwrap();
        let lo = m.predict_proba(&[-2.0, 0.0]).unwrap();
        let hi = m.predict_proba(&[2.0, 0.0]).unwrap();
        assert!(lo < 0.5 && hi > 0.5);
        assert!((0.0..=1.0).contains(&lo) && (0.0..=1.0).contains(&hi));
    }

    #[test]
    fn deterministic_and_single_class_rejected() {
        let (x, y) = two_clusters(50, 4);
        assert_eq!(
            svc_train(&x, &y, &SvcConfig::default()).unwrap(),
            svc_train(&x, &y, &SvcConfig::default()).unwrap()
        );
        assert!(matches!(svc_train(&x, &vec![true; 50], &SvcConfig::default()), Err(Error::SingleClass)));
    }
}
