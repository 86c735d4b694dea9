use std::collections::BTreeMap;
use std::path::Path;

use glitchscope::datasetio::{
    build_corpus, evaluate_manifest, load_samples, predict_image, synth_clean, train_from_manifest, BuildOptions, CorpusManifest,
    ModelBundle, Record, SynthOptions, TrainOptions,
};
use glitchscope::par::Execution;
use glitchscope::pipeline::{evaluate, ArtifactGroup, Split, SplitCounts, SplitPlan};
use glitchscope::{ArtifactKind, Error};

fn plan() -> SplitPlan {
    let mut plan = SplitPlan::new(&["source_00", "source_01"], &["source_02"], &["source_03"]);
    plan.counts = BTreeMap::from([
        (Split::A, SplitCounts { normals: 40, per_artifact: 4 }),
        (Split::B, SplitCounts { normals: 12, per_artifact: 2 }),
        (Split::C, SplitCounts { normals: 8, per_artifact: 1 }),
    ]);
    plan
}

fn synth(dir: &Path) {
    synth_clean(&SynthOptions {
        out_dir: dir.to_path_buf(),
        sources: 4,
        frames: 6,
        width: 192,
        height: 108,
        seed: 3,
        force: false,
        exec: Execution::Parallel,
    })
    .unwrap();
}

fn build(clean: &Path, out: &Path, exec: Execution) -> CorpusManifest {
    build_corpus(&BuildOptions {
        clean_dir: clean.to_path_buf(),
        out_dir: out.to_path_buf(),
        seed: 5,
        per_artifact: 0,
        normals: 0,
        plan: plan(),
        force: false,
        exec,
    })
    .unwrap()
}

fn train(manifest: &Path) -> ModelBundle {
    let opts = TrainOptions {
        created_at_unix: 1,
        ..TrainOptions::new(9)
    };
    train_from_manifest(manifest, &opts).unwrap()
}

#[test]
fn corpus_train_evaluate_predict() {
    let tmp = tempfile::tempdir().unwrap();
    let clean = tmp.path().join("clean");
    synth(&clean);

    let out1 = tmp.path().join("c1");
    let out2 = tmp.path().join("c2");
    let m1 = build(&clean, &out1, Execution::Parallel);
    let m2 = build(&clean, &out2, Execution::Sequential);
    m1.validate().unwrap();
    assert_eq!(m1, m2);
    let bytes1 = std::fs::read(out1.join("manifest.json")).unwrap();
    assert_eq!(bytes1, std::fs::read(out2.join("manifest.json")).unwrap());
    assert_eq!(CorpusManifest::read(out1.join("manifest.json")).unwrap(), m1);

    let a: Vec<_> = m1.records_in(Split::A).collect();
    assert_eq!(a.iter().filter(|r| !r.is_corrupted()).count(), 40);
    assert_eq!(a.iter().filter(|r| r.is_corrupted()).count(), 4 * ArtifactKind::ALL.len());
    for g in ArtifactGroup::ALL {
        assert_eq!(a.iter().filter(|r| r.partition == Some(g)).count(), 4);
    }
    for r in &m1.records {
        assert!(m1.plan.sources(r.split).contains(&r.source));
        let a = std::fs::read(out1.join(&r.path)).unwrap();
        assert_eq!(a, std::fs::read(out2.join(&r.path)).unwrap(), "{}", r.path);
    }

    // Building into a populated directory needs --force.
    let again = build_corpus(&BuildOptions {
        clean_dir: clean.clone(),
        out_dir: out1.clone(),
        seed: 5,
        per_artifact: 0,
        normals: 0,
        plan: plan(),
        force: false,
        exec: Execution::Parallel,
    });
    assert!(matches!(again, Err(Error::OutputExists(_))));

    let manifest = out1.join("manifest.json");
    let bundle = train(&manifest);
    assert_eq!(bundle.ensemble.specialists.len(), 10);
    assert_eq!(train(&manifest), bundle);
    let path = tmp.path().join("bundle.json");
    bundle.write(&path).unwrap();
    let loaded = ModelBundle::read(&path).unwrap();
    assert_eq!(loaded, bundle);
    assert_eq!(serde_json::to_string(&loaded).unwrap(), serde_json::to_string(&bundle).unwrap());

    // Re-scoring the combiner's held-out B items reproduces its stored report.
    let held: Vec<&Record> = bundle
        .ensemble
        .report
        .records
        .iter()
        .map(|it| m1.records.iter().find(|r| r.path == it.id).unwrap())
        .collect();
    let samples = load_samples(&out1, &held, &bundle.specs, Execution::Parallel).unwrap();
    let again = evaluate(&bundle.ensemble, &samples).unwrap();
    assert!((again.accuracy - bundle.ensemble.report.accuracy).abs() <= 1e-9);
    for (x, y) in again.records.iter().zip(&bundle.ensemble.report.records) {
        assert!((x.probability - y.probability).abs() <= 1e-9);
    }

    let report = evaluate_manifest(&bundle, &manifest, Split::C, Execution::Parallel).unwrap();
    let seq = evaluate_manifest(&bundle, &manifest, Split::C, Execution::Sequential).unwrap();
    assert_eq!(report, seq);
    assert_eq!(report.total, 8 + ArtifactKind::ALL.len());
    let c = &report.confusion;
    assert_eq!(c.tp + c.fp + c.tn + c.fn_, report.total);

    for rec in &report.records {
        let p = predict_image(&bundle, &out1.join(&rec.id)).unwrap();
        assert_eq!(p.probability, rec.probability);
        assert_eq!(p.corrupted, rec.predicted);
        assert_eq!(p.specialists.len(), 10);
    }

    let mut broken = bundle.clone();
    broken.ensemble.specialists.remove(&ArtifactGroup::Tearing);
    assert!(evaluate_manifest(&broken, &manifest, Split::C, Execution::Parallel).is_err());
}

#[test]
fn overlapping_plan_is_rejected() {
    let tmp = tempfile::tempdir().unwrap();
    let clean = tmp.path().join("clean");
    synth(&clean);
    let bad = SplitPlan::new(&["source_00", "source_01"], &["source_01"], &["source_03"]);
    let res = build_corpus(&BuildOptions {
        clean_dir: clean,
        out_dir: tmp.path().join("out"),
        seed: 0,
        per_artifact: 1,
        normals: 10,
        plan: bad,
        force: false,
        exec: Execution::Parallel,
    });
    assert!(matches!(res, Err(Error::SplitViolation(_))), "{res:?}");
}

#[test]
fn missing_source_is_reported() {
    let tmp = tempfile::tempdir().unwrap();
    let clean = tmp.path().join("clean");
    synth(&clean);
    let plan = SplitPlan::new(&["source_00"], &["source_01"], &["source_09"]);
    let res = build_corpus(&BuildOptions {
        clean_dir: clean,
        out_dir: tmp.path().join("out"),
        seed: 0,
        per_artifact: 1,
        normals: 10,
        plan,
        force: false,
        exec: Execution::Parallel,
    });
    assert!(res.is_err());
}
