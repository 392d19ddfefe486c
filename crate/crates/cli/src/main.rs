//! `dedupkit` command-line front end.
//!
//! Exit status: 0 on success, 1 on runtime failure, 2 on usage errors.
//! Machine-readable output goes to files; stdout carries a one-line summary.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use dedupkit::augment::{build_aug_corpus, AugmentOp, AugmentRanges, AugmentSpec};
use dedupkit::dataset::{self, GroupRule, Manifest};
use dedupkit::hashing::{HashAlgo, Hasher, ThresholdStat};
use dedupkit::index::Threshold;
use dedupkit::metrics::{self, DedupReport, Scope};
use dedupkit::pipeline::{self, Corpus, RunConfig, Source};

#[derive(Parser)]
#[command(name = "dedupkit", version, about = "Perceptual-hash near-duplicate image deduplication")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Hash every image of a corpus.
    Hash(HashArgs),
    /// Deduplicate a corpus and export the kept manifest.
    Dedup(DedupArgs),
    /// Dup median and kept count across a range of thresholds.
    Sweep(SweepArgs),
    /// Generate a seeded near-duplicate corpus from source images.
    Augment(AugmentArgs),
    /// Import CIFAR-10 binary batches as a manifest.
    #[command(name = "import-cifar10")]
    ImportCifar10(ImportArgs),
    /// Import CIFAR-100 binary files as a manifest.
    #[command(name = "import-cifar100")]
    ImportCifar100(ImportArgs),
    /// Deduplicate a group-labelled corpus and score against its groups.
    #[command(name = "eval-groups")]
    EvalGroups(EvalArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgoArg {
    Ahash,
    Dhash,
    Phash,
    Whash,
}

impl From<AlgoArg> for HashAlgo {
    fn from(a: AlgoArg) -> Self {
        match a {
            AlgoArg::Ahash => HashAlgo::AHash,
            AlgoArg::Dhash => HashAlgo::DHash,
            AlgoArg::Phash => HashAlgo::PHash,
            AlgoArg::Whash => HashAlgo::WHash,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum StatArg {
    Mean,
    Median,
}

#[derive(Clone, Copy, ValueEnum)]
enum ScopeArg {
    PerSplit,
    Joint,
}

#[derive(Clone, Copy, ValueEnum)]
enum GroupBy {
    None,
    ParentDir,
}

/// Corpus selection shared by every hashing command.
#[derive(Args)]
struct InputArgs {
    /// Image directory, manifest CSV, `cifar10:<dir>` or `cifar100:<dir>`.
    #[arg(long)]
    input: String,
    /// Group ids for directory inputs.
    #[arg(long, value_enum, default_value = "none")]
    group_by: GroupBy,
    /// File-name regex with one capture group used as the group id
    /// (directory inputs; overrides --group-by).
    #[arg(long)]
    group_regex: Option<String>,
    /// Read the regex capture as an integer and group by capture / N.
    #[arg(long, requires = "group_regex", value_parser = clap::value_parser!(u64).range(1..))]
    group_bucket: Option<u64>,
    #[arg(long, value_enum, default_value = "phash")]
    algo: AlgoArg,
    /// Threshold statistic for phash and whash.
    #[arg(long, value_enum, default_value = "mean")]
    stat: StatArg,
    /// Hashing threads [default: available cores].
    #[arg(long, env = "DEDUPKIT_WORKERS", value_parser = clap::value_parser!(u64).range(1..))]
    workers: Option<u64>,
}

impl InputArgs {
    fn hasher(&self) -> Hasher {
        let stat = match self.stat {
            StatArg::Mean => ThresholdStat::Mean,
            StatArg::Median => ThresholdStat::Median,
        };
        Hasher::new(self.algo.into()).with_stat(stat)
    }

    fn workers(&self) -> usize {
        self.workers
            .map(|w| w as usize)
            .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
    }

    fn source(&self) -> Result<Source> {
        if let Some(dir) = self.input.strip_prefix("cifar10:") {
            return Ok(Source::Cifar10(dir.into()));
        }
        if let Some(dir) = self.input.strip_prefix("cifar100:") {
            return Ok(Source::Cifar100(dir.into()));
        }
        let path = PathBuf::from(&self.input);
        if path.is_dir() {
            let rule = match (&self.group_regex, self.group_by) {
                (Some(re), _) => GroupRule::filename_regex(re, self.group_bucket)?,
                (None, GroupBy::ParentDir) => GroupRule::ParentDir,
                (None, GroupBy::None) => GroupRule::None,
            };
            return Ok(Source::Dir { root: path, rule });
        }
        if path.is_file() {
            return Ok(Source::Manifest(path));
        }
        bail!("{}: no such directory or manifest", self.input)
    }

    fn load(&self) -> Result<Corpus> {
        Ok(pipeline::load_source(&self.source()?)?)
    }
}

#[derive(Args)]
struct HashArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Output CSV with rows `id,path,algo,hash_hex`.
    #[arg(long)]
    out: PathBuf,
}

fn parse_threshold(s: &str) -> Result<Threshold, String> {
    let v: u32 = s.parse().map_err(|_| format!("{s:?} is not a non-negative integer"))?;
    Threshold::new(v).map_err(|e| e.to_string())
}

#[derive(Args)]
struct DedupArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Maximum differing bits for a duplicate, 0..=63. Useful values lie
    /// roughly in 0..=12; 6 to 8 separates near-duplicates well.
    #[arg(long, default_value = "6", value_parser = parse_threshold)]
    threshold: Threshold,
    #[arg(long, value_enum, default_value = "per-split")]
    scope: ScopeArg,
    /// JSON report output.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Manifest of kept records (the training-set input).
    #[arg(long)]
    out_manifest: Option<PathBuf>,
    /// Per-record decisions CSV: `id,status,representative,distance`.
    #[arg(long)]
    decisions: Option<PathBuf>,
    /// Summary row CSV: `method,th,time_hash_s,mem_bytes,dup_mean,dup_std`.
    #[arg(long)]
    table: Option<PathBuf>,
    /// Include wall-clock timings in the JSON report.
    #[arg(long)]
    timings: bool,
}

/// `a..b` (inclusive) or a comma list; result sorted and de-duplicated.
fn parse_thresholds(s: &str) -> Result<Vec<u32>, String> {
    let num = |t: &str| -> Result<u32, String> {
        let v: u32 = t.trim().parse().map_err(|_| format!("{t:?} is not a threshold"))?;
        Threshold::new(v).map(|t| t.get()).map_err(|e| e.to_string())
    };
    let mut out = if let Some((a, b)) = s.split_once("..") {
        let (a, b) = (num(a)?, num(b)?);
        if a > b {
            return Err(format!("empty range {s:?}"));
        }
        (a..=b).collect()
    } else {
        s.split(',').map(num).collect::<Result<Vec<_>, _>>()?
    };
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Inclusive range `a..b` or comma list.
    #[arg(long, default_value = "0..50", value_parser = parse_thresholds)]
    thresholds: ::std::vec::Vec<u32>,
    /// Output CSV with rows `th,dup_median,kept`.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct AugmentArgs {
    /// Source image directory or manifest.
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value_t = 4)]
    variants: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Ops applied in order.
    #[arg(long, value_delimiter = ',', default_value = "color-jitter,rotate,resized-crop,erase")]
    ops: Vec<AugmentOp>,
    /// Parameter range preset.
    #[arg(long, value_enum, default_value = "full")]
    ranges: RangesArg,
    /// Directory for the generated PNGs.
    #[arg(long)]
    out_dir: PathBuf,
    /// Manifest of the generated corpus [default: <out-dir>/manifest.csv].
    #[arg(long)]
    out_manifest: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum RangesArg {
    Full,
    Mild,
}

#[derive(Args)]
struct ImportArgs {
    /// Directory holding the binary batch files.
    #[arg(long)]
    dir: PathBuf,
    #[arg(long)]
    out_manifest: PathBuf,
    /// Also write every image as PNG here and point the manifest at them.
    #[arg(long)]
    png_dir: Option<PathBuf>,
}

#[derive(Args)]
struct EvalArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, default_value = "6", value_parser = parse_threshold)]
    threshold: Threshold,
    #[arg(long, value_enum, default_value = "per-split")]
    scope: ScopeArg,
}

fn scope(s: ScopeArg) -> Scope {
    match s {
        ScopeArg::PerSplit => Scope::PerSplit,
        ScopeArg::Joint => Scope::Joint,
    }
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

fn cmd_hash(args: HashArgs) -> Result<()> {
    let corpus = args.input.load()?;
    let hashes = pipeline::hash_corpus(&corpus, args.input.hasher(), args.input.workers())?;
    let mut out = String::from("id,path,algo,hash_hex\n");
    for (r, h) in corpus.manifest.records.iter().zip(&hashes) {
        dataset::check_storable(&r.path)?;
        writeln!(out, "{},{},{},{}", r.id, r.path, h.algo, h.hex())?;
    }
    write_file(&args.out, &out)?;
    println!("hashed={}", hashes.len());
    Ok(())
}

fn decisions_csv(m: &Manifest, outcome: &dedupkit::DedupOutcome) -> String {
    let discards: std::collections::HashMap<u64, _> = outcome.discarded.iter().map(|d| (d.id, d)).collect();
    let mut out = String::from("id,status,representative,distance\n");
    for r in &m.records {
        match discards.get(&r.id) {
            Some(d) => writeln!(out, "{},discarded,{},{}", r.id, d.representative, d.distance),
            None => writeln!(out, "{},kept,,", r.id),
        }
        .expect("writing to a String");
    }
    out
}

fn cmd_dedup(args: DedupArgs) -> Result<()> {
    let corpus = args.input.load()?;
    let mut config = RunConfig::new(args.input.source()?, args.input.hasher(), args.threshold);
    config.scope = scope(args.scope);
    config.workers = args.input.workers();
    config.report_path = args.report;
    config.manifest_out = args.out_manifest;
    config.include_timings = args.timings;
    let out = pipeline::run_corpus(&corpus, &config)?;
    if let Some(path) = &args.decisions {
        write_file(path, &decisions_csv(&corpus.manifest, &out.evaluation.outcome))?;
    }
    if let Some(path) = &args.table {
        write_file(path, &format!("{}\n{}\n", DedupReport::TABLE_HEADER, out.report().table_row()))?;
    }
    let r = out.report();
    println!("kept={} discarded={} reduction={:.4}", r.kept, r.discarded, r.reduction_ratio);
    Ok(())
}

fn cmd_sweep(args: SweepArgs) -> Result<()> {
    let corpus = args.input.load()?;
    let hashes = pipeline::hash_corpus(&corpus, args.input.hasher(), args.input.workers())?;
    let curve = metrics::sweep(&corpus.manifest, &hashes, &args.thresholds)?;
    write_file(&args.out, &curve.to_csv())?;
    println!("thresholds={} records={}", curve.points.len(), hashes.len());
    Ok(())
}

fn cmd_augment(args: AugmentArgs) -> Result<()> {
    let manifest = if args.input.is_dir() {
        dataset::scan_dir(&args.input, &GroupRule::None)?
    } else {
        dataset::read_manifest(&args.input)?
    };
    let mut spec = AugmentSpec::new(args.seed, args.ops, args.variants);
    if let RangesArg::Mild = args.ranges {
        spec.ranges = AugmentRanges::mild();
    }
    let out = build_aug_corpus(&manifest, &spec, &args.out_dir)?;
    let path = args.out_manifest.unwrap_or_else(|| args.out_dir.join("manifest.csv"));
    dataset::write_manifest(&out, &path)?;
    println!("sources={} records={}", manifest.len(), out.len());
    Ok(())
}

fn cmd_import(args: ImportArgs, hundred: bool) -> Result<()> {
    let loaded = if hundred { dataset::load_cifar100(&args.dir)? } else { dataset::load_cifar10(&args.dir)? };
    let mut manifest = loaded.manifest;
    if let Some(dir) = &args.png_dir {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        for (r, img) in manifest.records.iter_mut().zip(&loaded.images) {
            let split = r.split.map_or("all", |s| s.as_str());
            let path = dir.join(format!("{split}_{:05}.png", r.id));
            img.save_png(&path)?;
            r.path = path.to_string_lossy().into_owned();
        }
    }
    dataset::write_manifest(&manifest, &args.out_manifest)?;
    let c = manifest.counts();
    println!("train={} val={}", c.train, c.val);
    Ok(())
}

fn cmd_eval(args: EvalArgs) -> Result<()> {
    let corpus = args.input.load()?;
    let hashes = pipeline::hash_corpus(&corpus, args.input.hasher(), args.input.workers())?;
    let eval =
        metrics::evaluate_dedup_scoped(&corpus.manifest, &hashes, args.threshold, scope(args.scope), 0.0)?;
    let score = metrics::score_against_groups(&eval.outcome, &corpus.manifest)?;
    println!("precision={:.4} recall={:.4}", score.precision, score.recall);
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Hash(a) => cmd_hash(a),
        Command::Dedup(a) => cmd_dedup(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Augment(a) => cmd_augment(a),
        Command::ImportCifar10(a) => cmd_import(a, false),
        Command::ImportCifar100(a) => cmd_import(a, true),
        Command::EvalGroups(a) => cmd_eval(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
