use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use glitchscope::glitchgen::apply;
use glitchscope::par::{self, Execution};
use glitchscope::pipeline::{extract_batch, PipelineSpec};
use glitchscope::scenes::SceneStyle;
use glitchscope::{ArtifactKind, Image};

const MODES: [Execution; 2] = [Execution::Sequential, Execution::Parallel];

fn frames(n: usize, w: usize, h: usize) -> Vec<Image> {
    let style = SceneStyle::new(0, 0, w, h);
    (0..n as u64).map(|i| style.render(i, w, h).unwrap()).collect()
}

fn bench_extract(c: &mut Criterion) {
    let images = frames(8, 640, 360);
    let specs = PipelineSpec::defaults();
    let mut group = c.benchmark_group("extract_batch");
    group.sample_size(10);
    for exec in MODES {
        group.bench_with_input(BenchmarkId::from_parameter(format!("{exec:?}")), &images, |b, imgs| {
            b.iter(|| extract_batch(exec, imgs, &specs).unwrap())
        });
    }
    group.finish();
}

fn bench_glitch(c: &mut Criterion) {
    let images = frames(8, 640, 360);
    let jobs: Vec<(usize, ArtifactKind)> = (0..images.len())
        .flat_map(|i| ArtifactKind::ALL.into_iter().map(move |k| (i, k)))
        .collect();
    let mut group = c.benchmark_group("glitchify_batch");
    group.sample_size(10);
    for exec in MODES {
        group.bench_function(BenchmarkId::from_parameter(format!("{exec:?}")), |b| {
            b.iter(|| {
                par::try_map_with(exec, &jobs, |&(i, kind)| apply(kind, &images[i], None, i as u64).map(|r| r.0))
                    .unwrap()
            })
        });
    }
    group.finish();
}

criterion_group!(benches, bench_extract, bench_glitch);
criterion_main!(benches);
