use serde::{Deserialize, Serialize};

use super::linalg::{axpy, dot, jacobi_svd, norm, orthonormalize};
use crate::imagecore::Rng;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PcaConfig {
    pub k: usize,
    pub oversample: usize,
    pub iters: usize,
    pub seed: u64,
}

impl PcaConfig {
    pub fn new(k: usize) -> Self {
        PcaConfig {
            k,
            oversample: 10,
            iters: 2,
            seed: 0,
        }
    }
}

/// Centering vector plus `k` orthonormal principal directions.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PcaModel {
    pub k: usize,
    pub dim: usize,
    pub mean: Vec<f64>,
    /// `k` rows of length `dim`.
    pub components: Vec<Vec<f64>>,
    /// Non-increasing.
    pub singular_values: Vec<f64>,
}

/// Randomized SVD of the centered data matrix (rows = samples).
///
/// A Gaussian probe block of `k + oversample` columns samples the range of the data;
/// `iters` power iterations (re-orthonormalized every half step) sharpen the spectrum;
/// the small projected matrix is then decomposed exactly with one-sided Jacobi.
pub fn pca_fit<V: AsRef<[f64]>>(data: &[V], cfg: &PcaConfig) -> Result<PcaModel> {
    let n = data.len();
    if n < 2 {
        return Err(Error::EmptyInput("PCA needs at least two samples"));
    }
    let d = data[0].as_ref().len();
    if let Some(bad) = data.iter().find(|v| v.as_ref().len() != d) {
        return Err(Error::DimensionMismatch {
            expected: d,
            actual: bad.as_ref().len(),
        });
    }
    if cfg.k == 0 {
        return Err(Error::InvalidParameter("PCA needs k >= 1".into()));
    }
    if cfg.k > n.min(d) {
        return Err(Error::RankBound {
            requested: cfg.k,
            bound: n.min(d),
        });
    }

    let mut mean = vec![0.0; d];
    for v in data {
        axpy(1.0, v.as_ref(), &mut mean);
    }
    mean.iter_mut().for_each(|m| *m /= n as f64);
    let rows: Vec<Vec<f64>> = data
        .iter()
        .map(|v| v.as_ref().iter().zip(&mean).map(|(a, m)| a - m).collect())
        .collect();

    // X z for z in R^d, and X^T q for q in R^n.
    let x_times = |z: &[f64]| -> Vec<f64> { rows.iter().map(|r| dot(r, z)).collect() };
    let xt_times = |q: &[f64]| -> Vec<f64> {
        let mut out = vec![0.0; d];
        for (r, &qi) in rows.iter().zip(q) {
            if qi != 0.0 {
                axpy(qi, r, &mut out);
            }
        }
        out
    };

    let l = (cfg.k + cfg.oversample).min(n).min(d);
    let mut rng = Rng::new(cfg.seed);
    let probes: Vec<Vec<f64>> = (0..l).map(|_| (0..d).map(|_| rng.normal()).collect()).collect();
    let mut q = orthonormalize(probes.iter().map(|p| x_times(p)).collect());
    for _ in 0..cfg.iters {
        let z = orthonormalize(q.iter().map(|c| xt_times(c)).collect());
        q = orthonormalize(z.iter().map(|c| x_times(c)).collect());
    }

    // B^T = X^T Q, d x l'. Thin QR then exact SVD of the small triangular factor.
    let bt: Vec<Vec<f64>> = q.iter().map(|c| xt_times(c)).collect();
    let q2 = orthonormalize(bt.clone());
    let r: Vec<Vec<f64>> = bt
        .iter()
        .map(|col| q2.iter().map(|qc| dot(qc, col)).collect())
        .collect();
    let (sigma, u_small) = jacobi_svd(r);

    let s_max = sigma.first().copied().unwrap_or(0.0);
    let mut components: Vec<Vec<f64>> = Vec::with_capacity(cfg.k);
    let mut singular_values = Vec::with_capacity(cfg.k);
    for (s, u) in sigma.iter().zip(&u_small) {
        if components.len() == cfg.k || *s <= 1e-12 * s_max || *s == 0.0 {
            break;
        }
        let mut c = vec![0.0; d];
        for (coef, qc) in u.iter().zip(&q2) {
            axpy(*coef, qc, &mut c);
        }
        let nc = norm(&c);
        c.iter_mut().for_each(|v| *v /= nc);
        components.push(c);
        singular_values.push(*s);
    }
    complete_basis(&mut components, cfg.k, d);
    singular_values.resize(cfg.k, 0.0);
    for c in &mut components {
        canonical_sign(c);
    }

    Ok(PcaModel {
        k: cfg.k,
        dim: d,
        mean,
        components,
        singular_values,
    })
}

/// Extend an orthonormal set to `k` vectors with Gram-Schmidt over the standard basis.
fn complete_basis(components: &mut Vec<Vec<f64>>, k: usize, d: usize) {
    let mut e = 0;
    while components.len() < k && e < d {
        let mut c = vec![0.0; d];
        c[e] = 1.0;
        e += 1;
        for _ in 0..2 {
            for q in components.iter() {
                let p = dot(q, &c);
                axpy(-p, q, &mut c);
            }
        }
        let n = norm(&c);
        if n > 0.1 {
            c.iter_mut().for_each(|v| *v /= n);
            components.push(c);
        }
    }
}

/// Flip so the entry of largest magnitude is positive.
fn canonical_sign(c: &mut [f64]) {
    let pivot = c.iter().copied().max_by(|a, b| a.abs().total_cmp(&b.abs())).unwrap_or(0.0);
    if pivot < 0.0 {
        c.iter_mut().for_each(|v| *v = -*v);
    }
}

/// Project `v - mean` onto the components.
pub fn pca_transform(model: &PcaModel, v: &[f64]) -> Result<Vec<f64>> {
    if v.len() != model.dim {
        return Err(Error::DimensionMismatch {
            expected: model.dim,
            actual: v.len(),
        });
    }
    let centered: Vec<f64> = v.iter().zip(&model.mean).map(|(a, m)| a - m).collect();
    Ok(model.components.iter().map(|c| dot(c, &centered)).collect())
}
