use std::f64::consts::PI;

use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;

use super::FeatureVector;
use crate::imagecore::{resample_plane, GrayImage, Image};
use crate::{Error, Result};

/// DC-centered magnitude/phase spectrum of a grayscale raster.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    pub width: usize,
    pub height: usize,
    /// Row-major, DC at (width / 2, height / 2).
    pub magnitudes: Vec<f64>,
    /// Matching phases in (-pi, pi].
    pub phases: Vec<f64>,
}

impl Spectrum {
    /// Magnitude at natural (unshifted) frequency (u, v).
    pub fn magnitude_at(&self, u: usize, v: usize) -> f64 {
        let (x, y) = (shift(u, self.width), shift(v, self.height));
        self.magnitudes[y * self.width + x]
    }
}

/// Position of natural frequency `k` after centering DC at `n / 2`.
#[inline]
fn shift(k: usize, n: usize) -> usize {
    (k + n / 2) % n
}

#[inline]
fn unshift(i: usize, n: usize) -> usize {
    (i + n - n / 2) % n
}

/// In-place 2D FFT over a row-major buffer, rows then columns.
fn fft2_in_place(buf: &mut [Complex64], width: usize, height: usize, inverse: bool) {
    let mut planner = FftPlanner::<f64>::new();
    let (row_fft, col_fft) = if inverse {
        (planner.plan_fft_inverse(width), planner.plan_fft_inverse(height))
    } else {
        (planner.plan_fft_forward(width), planner.plan_fft_forward(height))
    };
    row_fft.process(buf);

    let mut col = vec![Complex64::new(0.0, 0.0); height];
    let mut scratch = vec![Complex64::new(0.0, 0.0); col_fft.get_inplace_scratch_len()];
    for x in 0..width {
        for y in 0..height {
            col[y] = buf[y * width + x];
        }
        col_fft.process_with_scratch(&mut col, &mut scratch);
        for y in 0..height {
            buf[y * width + x] = col[y];
        }
    }
}

/// Unitary 2D DFT, `1/sqrt(MN)` normalization, any size.
pub fn dft2(img: &GrayImage) -> Spectrum {
    let (w, h) = (img.width(), img.height());
    let mut buf: Vec<Complex64> = img.data().iter().map(|&v| Complex64::new(v, 0.0)).collect();
    fft2_in_place(&mut buf, w, h, false);
    let norm = 1.0 / ((w * h) as f64).sqrt();

    let mut magnitudes = vec![0.0; w * h];
    let mut phases = vec![0.0; w * h];
    for v in 0..h {
        for u in 0..w {
            let z = buf[v * w + u] * norm;
            let i = shift(v, h) * w + shift(u, w);
            magnitudes[i] = z.norm();
            let mut p = z.arg();
            if p <= -PI {
                p = PI;
            }
            phases[i] = p;
        }
    }
    Spectrum {
        width: w,
        height: h,
        magnitudes,
        phases,
    }
}

/// Inverse of [`dft2`]; the real part is clamped into [0,1].
pub fn idft2(spec: &Spectrum) -> Result<GrayImage> {
    let (w, h) = (spec.width, spec.height);
    if spec.magnitudes.len() != w * h || spec.phases.len() != w * h {
        return Err(Error::DimensionMismatch {
            expected: w * h,
            actual: spec.magnitudes.len().min(spec.phases.len()),
        });
    }
    let mut buf = vec![Complex64::new(0.0, 0.0); w * h];
    for y in 0..h {
        for x in 0..w {
            let i = y * w + x;
            buf[unshift(y, h) * w + unshift(x, w)] = Complex64::from_polar(spec.magnitudes[i], spec.phases[i]);
        }
    }
    fft2_in_place(&mut buf, w, h, true);
    let norm = 1.0 / ((w * h) as f64).sqrt();
    GrayImage::new(w, h, buf.iter().map(|z| z.re * norm).collect())
}

/// Gray -> DFT -> log(1 + |F|) (DC-centered) -> resize to `side` x `side` -> flatten.
pub fn spectral_feature(img: &Image, side: usize) -> Result<FeatureVector> {
    if side < 8 {
        return Err(Error::InvalidParameter(format!("spectral side {side} < 8")));
    }
    let spec = dft2(&img.to_gray());
    let logmag: Vec<f64> = spec.magnitudes.iter().map(|m| m.ln_1p()).collect();
    let values = resample_plane(&logmag, spec.width, spec.height, side, side);
    FeatureVector::new(values, format!("ft-resize(side={side})"))
}
