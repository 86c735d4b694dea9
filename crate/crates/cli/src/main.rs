//! `glitchscope`: corrupt frames, build corpora, train and evaluate detectors.
//!
//! Every command exits 0 on success and 2 on failure, except `predict`, which
//! exits 1 when the image is judged corrupted.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use glitchscope::datasetio::{
    build_corpus, created_at_default, evaluate_manifest, predict_image, synth_clean, to_json, train_from_manifest,
    write_json, BuildOptions, ModelBundle, SynthOptions, TrainOptions,
};
use glitchscope::glitchgen::{apply_with, ApplyOptions};
use glitchscope::imagecore::{read_png, write_png};
use glitchscope::par::Execution;
use glitchscope::pipeline::{PipelineSpec, Split, SplitPlan};
use glitchscope::ArtifactKind;

#[derive(Parser)]
#[command(name = "glitchscope", version, about = "Synthetic graphics-glitch generation and detection")]
struct Cli {
    /// Run batch work on one thread.
    #[arg(long, global = true)]
    sequential: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Corrupt one image and print the glitch spec as JSON.
    Glitchify(GlitchifyArgs),
    /// Build labeled corpora or render clean stand-in frames.
    #[command(subcommand)]
    Corpus(CorpusCommand),
    /// Train the specialists on split A and the combiner on split B.
    Train(TrainArgs),
    /// Evaluate a bundle on one split of a manifest.
    Eval(EvalArgs),
    /// Classify one image; prints the decision and per-specialist scores as JSON.
    Predict(PredictArgs),
}

#[derive(Args)]
struct GlitchifyArgs {
    input: PathBuf,
    output: PathBuf,
    #[arg(long)]
    kind: ArtifactKind,
    #[arg(long)]
    seed: u64,
    /// Second frame for tearing.
    #[arg(long)]
    aux: Option<PathBuf>,
    /// Fail instead of synthesizing a second frame when tearing has no --aux.
    #[arg(long)]
    no_fallback: bool,
}

#[derive(Subcommand)]
enum CorpusCommand {
    /// Build a labeled corpus from clean frames grouped in per-source subdirectories.
    Build(BuildArgs),
    /// Render procedural clean frames, one subdirectory per source.
    SynthClean(SynthArgs),
}

#[derive(Args)]
struct BuildArgs {
    #[arg(long)]
    clean: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    seed: u64,
    /// Corrupted images per artifact kind in each split, unless the plan says otherwise.
    #[arg(long)]
    per_artifact: usize,
    /// Normal images in each split, unless the plan says otherwise.
    #[arg(long)]
    normals: usize,
    /// JSON object with source lists under "A", "B", "C" and optional per-split "counts".
    #[arg(long)]
    plan: PathBuf,
    #[arg(long)]
    force: bool,
}

#[derive(Args)]
struct SynthArgs {
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 6)]
    sources: usize,
    #[arg(long, default_value_t = 80)]
    frames: usize,
    #[arg(long, default_value_t = 1280)]
    width: usize,
    #[arg(long, default_value_t = 720)]
    height: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    force: bool,
}

#[derive(Args)]
struct TrainArgs {
    #[arg(long)]
    manifest: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    seed: u64,
    /// Creation timestamp to record; defaults to SOURCE_DATE_EPOCH, then the clock.
    #[arg(long)]
    created_at: Option<u64>,
}

#[derive(Args)]
struct EvalArgs {
    #[arg(long)]
    bundle: PathBuf,
    #[arg(long)]
    manifest: PathBuf,
    #[arg(long, default_value = "C")]
    split: Split,
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct PredictArgs {
    #[arg(long)]
    bundle: PathBuf,
    image: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let exec = if cli.sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    };
    match run(cli.command, exec) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command, exec: Execution) -> Result<ExitCode> {
    match command {
        Command::Glitchify(a) => glitchify(a),
        Command::Corpus(CorpusCommand::Build(a)) => corpus_build(a, exec),
        Command::Corpus(CorpusCommand::SynthClean(a)) => corpus_synth(a, exec),
        Command::Train(a) => train(a, exec),
        Command::Eval(a) => eval(a, exec),
        Command::Predict(a) => predict(a),
    }
}

fn glitchify(a: GlitchifyArgs) -> Result<ExitCode> {
    let img = read_png(&a.input)?;
    let aux = a.aux.as_deref().map(read_png).transpose()?;
    let opts = ApplyOptions {
        allow_tearing_fallback: !a.no_fallback,
    };
    let (out, spec) = apply_with(a.kind, &img, aux.as_ref(), a.seed, opts)?;
    write_png(&a.output, &out)?;
    print!("{}", to_json(&spec)?);
    Ok(ExitCode::SUCCESS)
}

fn read_plan(path: &Path) -> Result<SplitPlan> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading plan {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing plan {}", path.display()))
}

fn corpus_build(a: BuildArgs, exec: Execution) -> Result<ExitCode> {
    let manifest = build_corpus(&BuildOptions {
        clean_dir: a.clean,
        out_dir: a.out.clone(),
        seed: a.seed,
        per_artifact: a.per_artifact,
        normals: a.normals,
        plan: read_plan(&a.plan)?,
        force: a.force,
        exec,
    })?;
    for split in Split::ALL {
        let (mut normal, mut corrupted) = (0, 0);
        for r in manifest.records_in(split) {
            if r.is_corrupted() {
                corrupted += 1;
            } else {
                normal += 1;
            }
        }
        eprintln!("split {split}: {normal} normal, {corrupted} corrupted");
    }
    eprintln!("wrote {}", a.out.join("manifest.json").display());
    Ok(ExitCode::SUCCESS)
}

fn corpus_synth(a: SynthArgs, exec: Execution) -> Result<ExitCode> {
    let written = synth_clean(&SynthOptions {
        out_dir: a.out.clone(),
        sources: a.sources,
        frames: a.frames,
        width: a.width,
        height: a.height,
        seed: a.seed,
        force: a.force,
        exec,
    })?;
    eprintln!("wrote {} frames under {}", written.len(), a.out.display());
    Ok(ExitCode::SUCCESS)
}

fn train(a: TrainArgs, exec: Execution) -> Result<ExitCode> {
    let opts = TrainOptions {
        seed: a.seed,
        created_at_unix: a.created_at.unwrap_or_else(created_at_default),
        specs: PipelineSpec::defaults(),
        exec,
    };
    let bundle = train_from_manifest(&a.manifest, &opts)?;
    for s in bundle.ensemble.specialists.values() {
        eprintln!(
            "specialist {:<16} {:<36} held-in accuracy {:.4} ({} items)",
            s.spec.artifact.name(),
            format!("{} + {}", s.spec.chain.id(), s.spec.learner),
            s.report.accuracy,
            s.report.total
        );
    }
    eprintln!("combiner held-in:\n{}", bundle.ensemble.report.summary());
    bundle.write(&a.out)?;
    Ok(ExitCode::SUCCESS)
}

fn eval(a: EvalArgs, exec: Execution) -> Result<ExitCode> {
    let bundle = ModelBundle::read(&a.bundle)?;
    let report = evaluate_manifest(&bundle, &a.manifest, a.split, exec)?;
    print!("{}", report.summary());
    if let Some(path) = &a.report {
        write_json(path, &report)?;
    }
    Ok(ExitCode::SUCCESS)
}

fn predict(a: PredictArgs) -> Result<ExitCode> {
    let bundle = ModelBundle::read(&a.bundle)?;
    if !a.image.exists() {
        bail!("image {} does not exist", a.image.display());
    }
    let prediction = predict_image(&bundle, &a.image)?;
    print!("{}", to_json(&prediction)?);
    Ok(ExitCode::from(if prediction.corrupted { 1 } else { 0 }))
}
