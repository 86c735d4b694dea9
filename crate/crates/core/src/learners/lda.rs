use super::{check_xy, LearnerKind, Standardizer, TrainMeta, TrainedModel, Weights};
use crate::features::linalg::{cholesky_solve, dot};
use crate::{Error, Result};

/// Fisher discriminant with a shared, ridge-regularized covariance.
///
/// The posterior under equal-covariance Gaussians is `sigmoid(w . x - threshold)`
/// with `w = S^-1 (mu1 - mu0)` and the threshold at the projected midpoint shifted by
/// the log prior ratio.
pub fn lda_train<V: AsRef<[f64]>>(x: &[V], y: &[bool]) -> Result<TrainedModel> {
    let (n, d, pos) = check_xy(x, y)?;
    if pos < 2 || n - pos < 2 {
        return Err(Error::InvalidParameter("LDA needs at least two samples per class".into()));
    }
    let std = Standardizer::fit(x);
    let z: Vec<Vec<f64>> = x.iter().map(|v| std.apply(v.as_ref())).collect();

    let mut mu = [vec![0.0; d], vec![0.0; d]];
    for (v, &t) in z.iter().zip(y) {
        for (m, a) in mu[t as usize].iter_mut().zip(v) {
            *m += a;
        }
    }
    let counts = [(n - pos) as f64, pos as f64];
    for (m, c) in mu.iter_mut().zip(counts) {
        m.iter_mut().for_each(|a| *a /= c);
    }

    let mut cov = vec![0.0; d * d];
    let mut centered = vec![0.0; d];
    for (v, &t) in z.iter().zip(y) {
        for ((c, a), m) in centered.iter_mut().zip(v).zip(&mu[t as usize]) {
            *c = a - m;
        }
        for i in 0..d {
            let ci = centered[i];
            if ci == 0.0 {
                continue;
            }
            let row = &mut cov[i * d..i * d + i + 1];
            for (r, cj) in row.iter_mut().zip(&centered) {
                *r += ci * cj;
            }
        }
    }
    let denom = (n - 2) as f64;
    for i in 0..d {
        for j in 0..=i {
            let v = cov[i * d + j] / denom;
            cov[i * d + j] = v;
            cov[j * d + i] = v;
        }
    }
    let trace: f64 = (0..d).map(|i| cov[i * d + i]).sum();
    let eps = if trace > 0.0 { 1e-6 * trace / d as f64 } else { 1e-6 };
    for i in 0..d {
        cov[i * d + i] += eps;
    }

    let diff: Vec<f64> = mu[1].iter().zip(&mu[0]).map(|(a, b)| a - b).collect();
    let w = cholesky_solve(&cov, d, &diff).ok_or(Error::NonFinite("LDA covariance"))?;
    let priors = [counts[0] / n as f64, counts[1] / n as f64];
    let threshold = 0.5 * (dot(&w, &mu[1]) + dot(&w, &mu[0])) - (priors[1] / priors[0]).ln();

    Ok(TrainedModel {
        kind: LearnerKind::Lda,
        dim: d,
        standardizer: Some(std),
        weights: Weights::Lda { w, threshold, priors },
        pipeline_id: String::new(),
        train_meta: TrainMeta {
            n_samples: n,
            n_positive: pos,
            seed: 0,
        },
    })
}
