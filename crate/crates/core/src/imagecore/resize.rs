/// Sparse 1-D resampling taps for one output coordinate.
struct Taps {
    start: usize,
    weights: Vec<f64>,
}

/// Triangle-filter taps. Output sample centers map onto the source grid with the
/// half-pixel convention; on downscaling the kernel widens by the scale factor so
/// every source sample contributes.
fn taps(src: usize, dst: usize) -> Vec<Taps> {
    let scale = src as f64 / dst as f64;
    let support = scale.max(1.0);
    (0..dst)
        .map(|i| {
            let center = (i as f64 + 0.5) * scale - 0.5;
            let lo = (center - support).floor().max(0.0) as usize;
            let hi = ((center + support).ceil() as usize).min(src - 1);
            let mut weights: Vec<f64> = (lo..=hi)
                .map(|j| (1.0 - (j as f64 - center).abs() / support).max(0.0))
                .collect();
            let sum: f64 = weights.iter().sum();
            if sum > 0.0 {
                weights.iter_mut().for_each(|w| *w /= sum);
            } else {
                // Only reachable when the kernel falls between samples at an edge.
                let nearest = center.round().clamp(0.0, (src - 1) as f64) as usize;
                return Taps {
                    start: nearest,
                    weights: vec![1.0],
                };
            }
            Taps { start: lo, weights }
        })
        .collect()
}

/// Resample a row-major real plane to `dst_w` x `dst_h` with a separable triangle filter.
pub fn resample_plane(src: &[f64], src_w: usize, src_h: usize, dst_w: usize, dst_h: usize) -> Vec<f64> {
    assert_eq!(src.len(), src_w * src_h);
    if src_w == dst_w && src_h == dst_h {
        return src.to_vec();
    }
    let xt = taps(src_w, dst_w);
    let yt = taps(src_h, dst_h);

    let mut horiz = vec![0.0; dst_w * src_h];
    for y in 0..src_h {
        let row = &src[y * src_w..(y + 1) * src_w];
        let out = &mut horiz[y * dst_w..(y + 1) * dst_w];
        for (o, t) in out.iter_mut().zip(&xt) {
            *o = t
                .weights
                .iter()
                .zip(&row[t.start..])
                .map(|(w, v)| w * v)
                .sum();
        }
    }

    let mut out = vec![0.0; dst_w * dst_h];
    for (y, t) in yt.iter().enumerate() {
        let dst_row = &mut out[y * dst_w..(y + 1) * dst_w];
        for (k, w) in t.weights.iter().enumerate() {
            let src_row = &horiz[(t.start + k) * dst_w..(t.start + k + 1) * dst_w];
            for (o, v) in dst_row.iter_mut().zip(src_row) {
                *o += w * v;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_are_normalized() {
        for (s, d) in [(10, 3), (3, 10), (1280, 64), (7, 7), (1, 5)] {
            for t in taps(s, d) {
                let sum: f64 = t.weights.iter().sum();
                assert!((sum - 1.0).abs() < 1e-12, "{s}->{d}");
                assert!(t.start + t.weights.len() <= s);
            }
        }
    }

    #[test]
    fn constant_plane_survives_round_trip() {
        let src = vec![0.37; 45 * 31];
        let down = resample_plane(&src, 45, 31, 9, 8);
        let back = resample_plane(&down, 9, 8, 45, 31);
        assert!(back.iter().all(|v| (v - 0.37).abs() < 1e-12));
    }
}
