use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use super::{CorpusManifest, Label, Record, MANIFEST_VERSION};
use crate::glitchgen::{apply_with, ApplyOptions};
use crate::imagecore::{child_seed, decode_png, read_png, write_png};
use crate::par::{self, Execution};
use crate::pipeline::{ArtifactGroup, Split, SplitCounts, SplitPlan};
use crate::scenes::{source_name, SceneStyle};
use crate::{ArtifactKind, Error, Result, Rng};

#[derive(Clone, Debug)]
pub struct SynthOptions {
    pub out_dir: PathBuf,
    pub sources: usize,
    pub frames: usize,
    pub width: usize,
    pub height: usize,
    pub seed: u64,
    pub force: bool,
    pub exec: Execution,
}

/// Render a clean corpus of procedural scenes as `<out>/<source>/frame_NNNN.png`.
pub fn synth_clean(opts: &SynthOptions) -> Result<Vec<PathBuf>> {
    if opts.sources == 0 || opts.frames == 0 {
        return Err(Error::InvalidParameter("need at least one source and one frame".into()));
    }
    let out = &opts.out_dir;
    if out.exists() && !opts.force && fs::read_dir(out).map_err(|e| Error::io(out, e))?.next().is_some() {
        return Err(Error::OutputExists(out.clone()));
    }
    let styles: Vec<SceneStyle> = (0..opts.sources)
        .map(|s| SceneStyle::new(opts.seed, s as u64, opts.width, opts.height))
        .collect();
    let mut jobs = Vec::with_capacity(opts.sources * opts.frames);
    for s in 0..opts.sources {
        let dir = out.join(source_name(s));
        fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
        for f in 0..opts.frames {
            jobs.push((s, f, dir.join(format!("frame_{f:04}.png"))));
        }
    }
    par::try_map_with(opts.exec, &jobs, |(s, f, path)| {
        let img = styles[*s].render(*f as u64, opts.width, opts.height)?;
        write_png(path, &img)?;
        Ok(path.clone())
    })
}

#[derive(Clone, Debug)]
pub struct BuildOptions {
    pub clean_dir: PathBuf,
    pub out_dir: PathBuf,
    pub seed: u64,
    /// Default corrupted images per artifact kind in each split.
    pub per_artifact: usize,
    /// Default normal images in each split.
    pub normals: usize,
    pub plan: SplitPlan,
    pub force: bool,
    pub exec: Execution,
}

enum Action {
    Copy,
    Glitch {
        kind: ArtifactKind,
        seed: u64,
    },
}

struct Job {
    record: Record,
    action: Action,
}

/// Sorted `*.png` files per source subdirectory.
fn discover(clean_dir: &Path) -> Result<BTreeMap<String, Vec<String>>> {
    let mut sources = BTreeMap::new();
    let entries = fs::read_dir(clean_dir).map_err(|e| Error::io(clean_dir, e))?;
    for entry in entries {
        let entry = entry.map_err(|e| Error::io(clean_dir, e))?;
        let path = entry.path();
        if !path.is_dir() {
            continue;
        }
        let name = entry.file_name().to_string_lossy().into_owned();
        let mut files: Vec<String> = fs::read_dir(&path)
            .map_err(|e| Error::io(&path, e))?
            .filter_map(|e| e.ok())
            .map(|e| e.file_name().to_string_lossy().into_owned())
            .filter(|f| f.to_ascii_lowercase().ends_with(".png"))
            .collect();
        files.sort();
        sources.insert(name, files);
    }
    Ok(sources)
}

/// Frames of the given sources, interleaved one per source per round.
fn interleave(sources: &[String], files: &BTreeMap<String, Vec<String>>) -> Vec<(String, String)> {
    let longest = sources.iter().map(|s| files[s].len()).max().unwrap_or(0);
    let mut out = Vec::new();
    for round in 0..longest {
        for s in sources {
            if let Some(f) = files[s].get(round) {
                out.push((s.clone(), f.clone()));
            }
        }
    }
    out
}

/// Write corrupted and normal images for every split of the plan plus
/// `<out>/manifest.json`, and return the manifest.
///
/// Normal images are byte copies of clean frames, cycling through the split's
/// frames; split-A normals are dealt round-robin to the ten specialists. Each
/// corrupted image draws its frame, and for tearing a second frame of the same
/// source, from a stream seeded by (corpus seed, split, kind, index).
pub fn build_corpus(opts: &BuildOptions) -> Result<CorpusManifest> {
    opts.plan.validate()?;
    let files = discover(&opts.clean_dir)?;
    for split in Split::ALL {
        for src in opts.plan.sources(split) {
            match files.get(src) {
                None => return Err(Error::Corpus(format!("source `{src}` not found in {}", opts.clean_dir.display()))),
                Some(f) if f.is_empty() => return Err(Error::Corpus(format!("source `{src}` has no PNG frames"))),
                Some(_) => {}
            }
        }
    }

    let manifest_path = opts.out_dir.join("manifest.json");
    let images_dir = opts.out_dir.join("images");
    if !opts.force {
        for p in [&manifest_path, &images_dir] {
            if p.exists() {
                return Err(Error::OutputExists(p.clone()));
            }
        }
    } else if images_dir.exists() {
        fs::remove_dir_all(&images_dir).map_err(|e| Error::io(&images_dir, e))?;
    }

    let mut jobs = Vec::new();
    for (si, split) in Split::ALL.into_iter().enumerate() {
        let sources = opts.plan.sources(split);
        if sources.is_empty() {
            continue;
        }
        let counts = opts.plan.counts.get(&split).copied().unwrap_or(SplitCounts {
            normals: opts.normals,
            per_artifact: opts.per_artifact,
        });
        let frames = interleave(sources, &files);
        for i in 0..counts.normals {
            let (src, file) = &frames[i % frames.len()];
            jobs.push(Job {
                record: Record {
                    path: format!("images/{split}/normal/{i:05}.png"),
                    label: Label::Normal,
                    kind: None,
                    source: src.clone(),
                    split,
                    spec: None,
                    frame: format!("{src}/{file}"),
                    aux_frame: None,
                    partition: (split == Split::A).then(|| ArtifactGroup::ALL[i % ArtifactGroup::ALL.len()]),
                },
                action: Action::Copy,
            });
        }
        let split_seed = child_seed(opts.seed, si as u64 + 1);
        for (ki, kind) in ArtifactKind::ALL.into_iter().enumerate() {
            let kind_seed = child_seed(split_seed, ki as u64 + 1);
            for j in 0..counts.per_artifact {
                let job_seed = child_seed(kind_seed, j as u64);
                let mut rng = Rng::new(job_seed);
                let (src, file) = &frames[rng.index(frames.len())];
                let aux_frame = if kind.needs_second_frame() {
                    let own = &files[src];
                    (own.len() > 1).then(|| {
                        let at = own.iter().position(|f| f == file).expect("frame belongs to its source");
                        let other = (at + 1 + rng.index(own.len() - 1)) % own.len();
                        format!("{src}/{}", own[other])
                    })
                } else {
                    None
                };
                jobs.push(Job {
                    record: Record {
                        path: format!("images/{split}/{kind}/{j:05}.png"),
                        label: Label::Corrupted,
                        kind: Some(kind),
                        source: src.clone(),
                        split,
                        spec: None,
                        frame: format!("{src}/{file}"),
                        aux_frame,
                        partition: None,
                    },
                    action: Action::Glitch {
                        kind,
                        seed: child_seed(job_seed, 1),
                    },
                });
            }
        }
    }

    for job in &jobs {
        let path = opts.out_dir.join(&job.record.path);
        let dir = path.parent().expect("record paths have a directory");
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    let records = par::try_map_with(opts.exec, &jobs, |job| run_job(opts, job))?;
    let manifest = CorpusManifest {
        version: MANIFEST_VERSION,
        corpus_seed: opts.seed,
        plan: opts.plan.clone(),
        records,
    };
    manifest.validate()?;
    manifest.write(&manifest_path)?;
    Ok(manifest)
}

fn run_job(opts: &BuildOptions, job: &Job) -> Result<Record> {
    let mut record = job.record.clone();
    let src = opts.clean_dir.join(&record.frame);
    let dst = opts.out_dir.join(&record.path);
    match job.action {
        Action::Copy => {
            let bytes = fs::read(&src).map_err(|e| Error::io(&src, e))?;
            decode_png(&bytes).map_err(|e| match e {
                Error::Image { source, .. } => Error::Image { path: src.clone(), source },
                other => other,
            })?;
            fs::write(&dst, bytes).map_err(|e| Error::io(&dst, e))?;
        }
        Action::Glitch { kind, seed } => {
            let img = read_png(&src)?;
            let aux = match &record.aux_frame {
                Some(f) => Some(read_png(opts.clean_dir.join(f))?).filter(|a| a.dims() == img.dims()),
                None => None,
            };
            if aux.is_none() {
                record.aux_frame = None;
            }
            let (out, spec) = apply_with(kind, &img, aux.as_ref(), seed, ApplyOptions::default())?;
            write_png(&dst, &out)?;
            record.spec = Some(spec);
        }
    }
    Ok(record)
}
