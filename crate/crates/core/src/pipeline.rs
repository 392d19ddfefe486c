//! End-to-end runs: ingest, hash, dedup, report, export the kept manifest.
//!
//! Hashing runs on a worker pool but results are collected in manifest
//! order, and every dedup decision is committed in that order, so outputs
//! do not depend on the worker count.

use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use thiserror::Error;

use crate::dataset::{self, DatasetError, GroupRule, Manifest};
use crate::hashing::{Hash64, Hasher};
use crate::imaging::RgbImage;
use crate::index::Threshold;
use crate::metrics::{self, DedupReport, Evaluation, MetricsError, Scope};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Dataset(#[from] DatasetError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
    #[error("worker count must be at least 1")]
    NoWorkers,
    #[error("cannot start worker pool: {0}")]
    Pool(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

/// Where the corpus comes from.
#[derive(Debug, Clone)]
pub enum Source {
    Dir { root: PathBuf, rule: GroupRule },
    SplitDirs { train: PathBuf, val: Option<PathBuf>, rule: GroupRule },
    Cifar10(PathBuf),
    Cifar100(PathBuf),
    Manifest(PathBuf),
}

/// Which member of a duplicate set survives. Only first-in-canonical-order
/// is supported.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum KeepPolicy {
    #[default]
    First,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub source: Source,
    pub hasher: Hasher,
    pub th: Threshold,
    pub keep_policy: KeepPolicy,
    pub scope: Scope,
    pub workers: usize,
    pub report_path: Option<PathBuf>,
    pub manifest_out: Option<PathBuf>,
    /// Write wall-clock timings into the report file.
    pub include_timings: bool,
}

impl RunConfig {
    pub fn new(source: Source, hasher: Hasher, th: Threshold) -> Self {
        Self {
            source,
            hasher,
            th,
            keep_policy: KeepPolicy::First,
            scope: Scope::PerSplit,
            workers: 1,
            report_path: None,
            manifest_out: None,
            include_timings: false,
        }
    }
}

/// A manifest plus, for binary datasets, its already-decoded images.
#[derive(Debug, Clone)]
pub struct Corpus {
    pub manifest: Manifest,
    pub images: Option<Vec<RgbImage>>,
}

pub fn load_source(source: &Source) -> Result<Corpus, PipelineError> {
    let (manifest, images) = match source {
        Source::Dir { root, rule } => (dataset::scan_dir(root, rule)?, None),
        Source::SplitDirs { train, val, rule } => {
            (dataset::scan_split_dirs(train, val.as_deref(), rule)?, None)
        }
        Source::Cifar10(dir) => {
            let d = dataset::load_cifar10(dir)?;
            (d.manifest, Some(d.images))
        }
        Source::Cifar100(dir) => {
            let d = dataset::load_cifar100(dir)?;
            (d.manifest, Some(d.images))
        }
        Source::Manifest(path) => (dataset::read_manifest(path)?, None),
    };
    Ok(Corpus { manifest, images })
}

fn pool(workers: usize) -> Result<rayon::ThreadPool, PipelineError> {
    if workers == 0 {
        return Err(PipelineError::NoWorkers);
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| PipelineError::Pool(e.to_string()))
}

/// Hashes every record, in manifest order.
pub fn hash_corpus(corpus: &Corpus, hasher: Hasher, workers: usize) -> Result<Vec<Hash64>, PipelineError> {
    pool(workers)?.install(|| match &corpus.images {
        Some(images) => Ok(images.par_iter().map(|img| hasher.hash(img)).collect()),
        None => corpus
            .manifest
            .records
            .par_iter()
            .map(|r| Ok(hasher.hash(&dataset::load_image(&r.path)?)))
            .collect(),
    })
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub evaluation: Evaluation,
    /// Kept records with their original ids.
    pub kept_manifest: Manifest,
    pub hashes: Vec<Hash64>,
}

impl RunOutput {
    pub fn report(&self) -> &DedupReport {
        &self.evaluation.report
    }
}

/// Records of `m` whose ids appear in `kept`, in manifest order.
pub fn kept_manifest(m: &Manifest, kept: &[u64]) -> Manifest {
    let keep: std::collections::HashSet<u64> = kept.iter().copied().collect();
    Manifest::new(
        m.records.iter().filter(|r| keep.contains(&r.id)).cloned().collect(),
        format!("dedup:{}", m.source),
    )
}

pub fn run(config: &RunConfig) -> Result<RunOutput, PipelineError> {
    let corpus = load_source(&config.source)?;
    run_corpus(&corpus, config)
}

/// Like [`run`] on an already-loaded corpus.
pub fn run_corpus(corpus: &Corpus, config: &RunConfig) -> Result<RunOutput, PipelineError> {
    let KeepPolicy::First = config.keep_policy;
    let start = Instant::now();
    let hashes = hash_corpus(corpus, config.hasher, config.workers)?;
    let hash_time_s = start.elapsed().as_secs_f64();
    let evaluation =
        metrics::evaluate_dedup_scoped(&corpus.manifest, &hashes, config.th, config.scope, hash_time_s)?;
    let kept = kept_manifest(&corpus.manifest, &evaluation.outcome.kept);
    write_outputs(config, &evaluation.report, &kept)?;
    Ok(RunOutput { evaluation, kept_manifest: kept, hashes })
}

fn staging_path(path: &Path) -> PathBuf {
    let mut name = path.file_name().unwrap_or_default().to_os_string();
    name.push(".partial");
    path.with_file_name(name)
}

/// Writes both outputs through staging files; on any failure nothing is
/// left behind.
fn write_outputs(config: &RunConfig, report: &DedupReport, kept: &Manifest) -> Result<(), PipelineError> {
    let mut staged: Vec<(PathBuf, PathBuf)> = Vec::new();
    let result = (|| {
        if let Some(path) = &config.report_path {
            let tmp = staging_path(path);
            staged.push((tmp.clone(), path.clone()));
            std::fs::write(&tmp, report.to_json(config.include_timings))
                .map_err(|source| PipelineError::Io { path: path.clone(), source })?;
        }
        if let Some(path) = &config.manifest_out {
            let tmp = staging_path(path);
            staged.push((tmp.clone(), path.clone()));
            export_training_manifest(kept, &tmp)?;
        }
        for (tmp, dst) in &staged {
            std::fs::rename(tmp, dst).map_err(|source| PipelineError::Io { path: dst.clone(), source })?;
        }
        Ok(())
    })();
    if result.is_err() {
        for (tmp, dst) in &staged {
            let _ = std::fs::remove_file(tmp);
            let _ = std::fs::remove_file(dst);
        }
    }
    result
}

/// Writes the deduplicated manifest that a downstream training job reads
/// as its image list. Same CSV layout as any manifest.
pub fn export_training_manifest(m: &Manifest, path: &Path) -> Result<(), PipelineError> {
    Ok(dataset::write_manifest(m, path)?)
}
