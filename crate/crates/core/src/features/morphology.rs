use super::AnomalyMap;

/// Grayscale dilation with a (2r+1)^2 square window clipped at the borders.
/// Separable: a horizontal max pass followed by a vertical one.
pub fn dilate(map: &AnomalyMap, radius: usize) -> AnomalyMap {
    let (w, h) = (map.width, map.height);
    if radius == 0 {
        return map.clone();
    }
    let mut horiz = vec![0.0; w * h];
    for y in 0..h {
        let row = &map.scores[y * w..(y + 1) * w];
        for x in 0..w {
            let lo = x.saturating_sub(radius);
            let hi = (x + radius).min(w - 1);
            horiz[y * w + x] = row[lo..=hi].iter().copied().fold(f64::NEG_INFINITY, f64::max);
        }
    }
    let mut scores = vec![0.0; w * h];
    for y in 0..h {
        let lo = y.saturating_sub(radius);
        let hi = (y + radius).min(h - 1);
        for x in 0..w {
            scores[y * w + x] = (lo..=hi).map(|yy| horiz[yy * w + x]).fold(f64::NEG_INFINITY, f64::max);
        }
    }
    AnomalyMap {
        width: w,
        height: h,
        scores,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn map(w: usize, h: usize, scores: Vec<f64>) -> AnomalyMap {
        AnomalyMap {
            width: w,
            height: h,
            scores,
        }
    }

    #[test]
    fn zero_map_stays_zero() {
        let d = dilate(&map(9, 7, vec![0.0; 63]), 2);
        assert!(d.scores.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn single_peak_grows_to_a_block() {
        let mut s = vec![0.0; 81];
        s[4 * 9 + 4] = 3.0;
        let d = dilate(&map(9, 9, s), 1);
        for y in 0..9 {
            for x in 0..9 {
                let inside = (3..=5).contains(&x) && (3..=5).contains(&y);
                assert_eq!(d.scores[y * 9 + x] > 0.0, inside, "({x},{y})");
            }
        }
    }

    /// Brute-force window maximum.
    fn dilate_naive(m: &AnomalyMap, r: usize) -> Vec<f64> {
        let (w, h) = (m.width as i64, m.height as i64);
        let mut out = vec![0.0; m.scores.len()];
        for y in 0..h {
            for x in 0..w {
                let mut best = f64::NEG_INFINITY;
                for yy in (y - r as i64).max(0)..=(y + r as i64).min(h - 1) {
                    for xx in (x - r as i64).max(0)..=(x + r as i64).min(w - 1) {
                        best = best.max(m.scores[(yy * w + xx) as usize]);
                    }
                }
                out[(y * w + x) as usize] = best;
            }
        }
        out
    }

    proptest! {
        #[test]
        fn matches_window_max_and_is_monotone(
            w in 1usize..12, h in 1usize..12, r in 1usize..4,
            seed in any::<u64>(),
        ) {
            let mut rng = crate::imagecore::Rng::new(seed);
            let m = map(w, h, (0..w * h).map(|_| rng.unit() * 10.0).collect());
            let d = dilate(&m, r);
            prop_assert_eq!(&d.scores, &dilate_naive(&m, r));
            prop_assert!(d.scores.iter().zip(&m.scores).all(|(a, b)| a >= b));
        }
    }
}
