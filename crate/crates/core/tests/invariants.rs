use glitchscope::features::{anomaly_map, dft2, hog, idft2, pca_fit, PcaConfig};
use glitchscope::glitchgen::apply;
use glitchscope::learners::{train, LearnerConfig, LearnerKind, TrainedModel};
use glitchscope::{ArtifactKind, GrayImage, Image, Rng};
use proptest::prelude::*;

fn noise_image(w: usize, h: usize, seed: u64) -> Image {
    let mut rng = Rng::new(seed);
    let data = (0..w * h)
        .map(|_| {
            let v = rng.uniform_int(0, 255).unwrap();
            [v as u8, rng.uniform_int(0, 255).unwrap() as u8, (255 - v) as u8]
        })
        .collect();
    Image::new(w, h, data).unwrap()
}

/// Smooth gradients with a little texture, closer to a rendered frame than noise.
fn frame(w: usize, h: usize, seed: u64) -> Image {
    let mut rng = Rng::new(seed);
    let (a, b) = (rng.uniform(0.2, 1.0).unwrap(), rng.uniform(0.2, 1.0).unwrap());
    Image::from_fn(w, h, |x, y| {
        let u = x as f64 / w as f64;
        let v = y as f64 / h as f64;
        let t = ((x * 7 + y * 13) % 5) as f64;
        [
            (40.0 + 150.0 * a * u + t) as u8,
            (60.0 + 120.0 * b * v + t) as u8,
            (90.0 + 80.0 * (u * v) + t) as u8,
        ]
    })
    .unwrap()
}

fn gray(w: usize, h: usize, seed: u64) -> GrayImage {
    let mut rng = Rng::new(seed);
    GrayImage::from_fn(w, h, |_, _| rng.unit()).unwrap()
}

fn kind() -> impl Strategy<Value = ArtifactKind> {
    proptest::sample::select(ArtifactKind::ALL.to_vec())
}

const LOCAL: [ArtifactKind; 8] = [
    ArtifactKind::Shader,
    ArtifactKind::Shapes,
    ArtifactKind::Discoloration,
    ArtifactKind::MorseCode,
    ArtifactKind::DottedLinesRandom,
    ArtifactKind::DottedLinesRadial,
    ArtifactKind::ParallelLines,
    ArtifactKind::LinePixelation,
];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn gray_values_stay_in_unit_range(w in 8usize..40, h in 8usize..40, seed in any::<u64>()) {
        let g = noise_image(w, h, seed).to_gray();
        prop_assert!(g.data().iter().all(|v| (0.0..=1.0).contains(v)));
    }

    #[test]
    fn constant_resize_round_trip_is_exact(
        w in 8usize..64, h in 8usize..64, nw in 8usize..200, nh in 8usize..200, c in any::<[u8; 3]>(),
    ) {
        let img = Image::filled(w, h, c).unwrap();
        let back = img.resize(nw, nh).unwrap().resize(w, h).unwrap();
        prop_assert_eq!(back, img);
    }

    #[test]
    fn distinct_seeds_give_distinct_streams(a in any::<u64>(), b in any::<u64>()) {
        prop_assume!(a != b);
        let (mut ra, mut rb) = (Rng::new(a), Rng::new(b));
        let sa: Vec<f64> = (0..16).map(|_| ra.unit()).collect();
        let sb: Vec<f64> = (0..16).map(|_| rb.unit()).collect();
        prop_assert_ne!(sa, sb);
    }

    #[test]
    fn dft_is_unitary_and_invertible(w in 2usize..48, h in 2usize..48, seed in any::<u64>()) {
        let g = gray(w, h, seed);
        let spec = dft2(&g);
        let energy: f64 = g.data().iter().map(|v| v * v).sum();
        let mut spectral = 0.0;
        for v in 0..h {
            for u in 0..w {
                spectral += spec.magnitude_at(u, v).powi(2);
            }
        }
        prop_assert!((spectral - energy).abs() <= 1e-6 * energy.max(1e-12));
        let back = idft2(&spec).unwrap();
        let err = back.data().iter().zip(g.data()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        prop_assert!(err < 1e-6);
    }

    #[test]
    fn hog_blocks_are_unit_or_zero(w in 16usize..80, h in 16usize..80, seed in any::<u64>(), flat in any::<bool>()) {
        let g = if flat { GrayImage::from_fn(w, h, |_, _| 0.5).unwrap() } else { gray(w, h, seed) };
        let d = hog(&g, 8, 9).unwrap();
        for r in 0..d.patch_rows {
            for c in 0..d.patch_cols {
                let n = d.patch(r, c).iter().map(|v| v * v).sum::<f64>().sqrt();
                prop_assert!(n == 0.0 || (n - 1.0).abs() <= 1e-6, "patch ({r},{c}) norm {n}");
            }
        }
    }

    #[test]
    fn anomaly_scores_are_non_negative_and_zero_on_gray(w in 8usize..24, h in 8usize..24, seed in any::<u64>()) {
        let m = anomaly_map(&noise_image(w, h, seed));
        prop_assert!(m.scores.iter().all(|&s| s >= 0.0));
        let mut rng = Rng::new(seed);
        let g = Image::from_fn(w, h, |_, _| {
            let v = rng.uniform_int(0, 255).unwrap() as u8;
            [v, v, v]
        })
        .unwrap();
        prop_assert!(anomaly_map(&g).scores.iter().all(|&s| s.abs() <= 1e-9));
    }

    #[test]
    fn pca_components_are_orthonormal(n in 6usize..40, d in 3usize..30, k in 1usize..8, seed in any::<u64>()) {
        let k = k.min(d).min(n - 1);
        let mut rng = Rng::new(seed);
        let data: Vec<Vec<f64>> = (0..n).map(|_| (0..d).map(|_| rng.normal()).collect()).collect();
        let model = pca_fit(&data, &PcaConfig { seed, ..PcaConfig::new(k) }).unwrap();
        for i in 0..k {
            for j in 0..k {
                let dot: f64 = model.components[i].iter().zip(&model.components[j]).map(|(a, b)| a * b).sum();
                let want = if i == j { 1.0 } else { 0.0 };
                prop_assert!((dot - want).abs() <= 1e-6);
            }
        }
        prop_assert!(model.singular_values.windows(2).all(|s| s[0] >= s[1]));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn generators_are_deterministic_and_keep_dims(
        k in kind(), w in 96usize..200, h in 64usize..150, img_seed in any::<u64>(), seed in any::<u64>(),
    ) {
        let img = frame(w, h, img_seed);
        let aux = frame(w, h, img_seed ^ 1);
        let (a, sa) = apply(k, &img, Some(&aux), seed).unwrap();
        let (b, sb) = apply(k, &img, Some(&aux), seed).unwrap();
        prop_assert_eq!(a.dims(), (w, h));
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(sa, sb);
    }

    #[test]
    fn local_generators_touch_under_half_the_frame(
        i in 0usize..LOCAL.len(), w in 128usize..256, h in 72usize..160, img_seed in any::<u64>(), seed in any::<u64>(),
    ) {
        let img = frame(w, h, img_seed);
        let (out, _) = apply(LOCAL[i], &img, None, seed).unwrap();
        let changed = img.diff_count(&out);
        prop_assert!(changed > 0, "{:?} changed nothing", LOCAL[i]);
        prop_assert!((changed as f64) < 0.5 * (w * h) as f64, "{:?} changed {changed} of {}", LOCAL[i], w * h);
    }

    #[test]
    fn stuttering_permutes_pixels(w in 32usize..120, h in 32usize..90, seed in any::<u64>()) {
        let img = noise_image(w, h, seed);
        let (out, _) = apply(ArtifactKind::Stuttering, &img, None, seed).unwrap();
        let mut a = img.into_pixels();
        let mut b = out.into_pixels();
        a.sort_unstable();
        b.sort_unstable();
        prop_assert_eq!(a, b);
    }
}

fn separable(n: usize, d: usize, seed: u64) -> (Vec<Vec<f64>>, Vec<bool>) {
    let mut rng = Rng::new(seed);
    let mut x = Vec::with_capacity(n);
    let mut y = Vec::with_capacity(n);
    for i in 0..n {
        let label = i % 2 == 0;
        let shift = if label { 1.5 } else { -1.5 };
        x.push((0..d).map(|j| rng.normal() + if j == 0 { shift } else { 0.0 }).collect());
        y.push(label);
    }
    (x, y)
}

fn learner() -> impl Strategy<Value = LearnerKind> {
    proptest::sample::select(vec![LearnerKind::Lr, LearnerKind::Lda, LearnerKind::Svc, LearnerKind::Threshold])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn learners_are_deterministic_and_round_trip(k in learner(), n in 10usize..60, d in 1usize..6, seed in any::<u64>()) {
        let d = if k == LearnerKind::Threshold { 1 } else { d };
        let (x, y) = separable(n, d, seed);
        let cfg = LearnerConfig::default();
        let m1 = train(k, &x, &y, &cfg).unwrap();
        let m2 = train(k, &x, &y, &cfg).unwrap();
        prop_assert_eq!(&m1, &m2);
        let json = serde_json::to_string(&m1).unwrap();
        let back: TrainedModel = serde_json::from_str(&json).unwrap();
        for v in &x {
            let (p, q) = (m1.predict_proba(v).unwrap(), back.predict_proba(v).unwrap());
            prop_assert!((p - q).abs() <= 1e-12);
        }
    }
}
