//! Corpus ingestion and the manifest CSV format.
//!
//! A manifest is an ordered list of image records. Directory scans order
//! records byte-wise by `(split, path)`; binary datasets keep file order.
//!
//! CIFAR records can be referenced without extracting them: a path of the
//! form `<batch file>#<record index>` is a locator that [`load_image`]
//! resolves by reading that record from the batch file.

use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Seek, SeekFrom, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use regex::Regex;
use serde::{Deserialize, Serialize};
use thiserror::Error;
use walkdir::WalkDir;

use crate::imaging::{self, ImagingError, RgbImage};

pub const MANIFEST_HEADER: &str = "id,split,group_id,path";
pub const SUPPORTED_EXTENSIONS: [&str; 4] = ["png", "jpg", "jpeg", "bmp"];

/// Side of a CIFAR image.
pub const CIFAR_SIDE: u32 = 32;
pub const CIFAR_PIXELS: usize = 3 * 32 * 32;
pub const CIFAR10_RECORD: usize = 1 + CIFAR_PIXELS;
pub const CIFAR100_RECORD: usize = 2 + CIFAR_PIXELS;

pub const CIFAR10_TRAIN_FILES: [&str; 5] =
    ["data_batch_1.bin", "data_batch_2.bin", "data_batch_3.bin", "data_batch_4.bin", "data_batch_5.bin"];
pub const CIFAR10_TEST_FILE: &str = "test_batch.bin";
pub const CIFAR100_TRAIN_FILE: &str = "train.bin";
pub const CIFAR100_TEST_FILE: &str = "test.bin";

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("{0}: directory does not exist")]
    MissingRoot(PathBuf),
    #[error("bad group regex {pattern:?}: {reason}")]
    BadRegex { pattern: String, reason: String },
    #[error("{path}: length {len} is not a multiple of the {record}-byte record size")]
    TruncatedFile { path: PathBuf, len: u64, record: usize },
    #[error("{path}: record {record} has {kind} label {label} (max {max})")]
    BadLabel { path: PathBuf, record: usize, kind: &'static str, label: u8, max: u8 },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: line {line}: {reason}")]
    MalformedRow { path: PathBuf, line: usize, reason: String },
    #[error("path {0:?} cannot be stored in a manifest (non UTF-8, comma or newline)")]
    UnstorablePath(String),
    #[error("{0}: locator index out of range")]
    BadLocator(String),
    #[error(transparent)]
    Imaging(#[from] ImagingError),
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> DatasetError + '_ {
    move |source| DatasetError::Io { path: path.to_path_buf(), source }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Split {
    Train,
    Val,
}

impl Split {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Train => "train",
            Self::Val => "val",
        }
    }
}

impl fmt::Display for Split {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Split {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "train" => Ok(Self::Train),
            "val" => Ok(Self::Val),
            other => Err(format!("unknown split {other:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ImageRecord {
    pub id: u64,
    pub split: Option<Split>,
    pub group_id: Option<String>,
    /// File path, or a `<batch>#<index>` locator for binary datasets.
    pub path: String,
}

/// Record counts per split.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitCounts {
    pub unsplit: usize,
    pub train: usize,
    pub val: usize,
}

/// Ordered image records plus a description of where they came from.
///
/// Equality compares records only; `source` is provenance.
#[derive(Debug, Clone, Default)]
pub struct Manifest {
    pub records: Vec<ImageRecord>,
    pub source: String,
}

impl PartialEq for Manifest {
    fn eq(&self, other: &Self) -> bool {
        self.records == other.records
    }
}

impl Manifest {
    pub fn new(records: Vec<ImageRecord>, source: impl Into<String>) -> Self {
        Self { records, source: source.into() }
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn counts(&self) -> SplitCounts {
        let mut c = SplitCounts::default();
        for r in &self.records {
            match r.split {
                None => c.unsplit += 1,
                Some(Split::Train) => c.train += 1,
                Some(Split::Val) => c.val += 1,
            }
        }
        c
    }

    pub fn has_splits(&self) -> bool {
        self.records.iter().any(|r| r.split.is_some())
    }

    /// Sets ids to `0..len` in current order.
    pub fn renumber(&mut self) {
        for (i, r) in self.records.iter_mut().enumerate() {
            r.id = i as u64;
        }
    }
}

/// How group ids are derived for directory scans.
#[derive(Debug, Clone, Default)]
pub enum GroupRule {
    #[default]
    None,
    /// Name of the file's parent directory, relative to the scan root.
    ParentDir,
    /// One capture group applied to the file name. With `bucket`, the
    /// capture is read as an integer `n` and the group is `n / bucket`.
    FilenameRegex { regex: Regex, bucket: Option<u64> },
}

impl GroupRule {
    pub fn filename_regex(pattern: &str, bucket: Option<u64>) -> Result<Self, DatasetError> {
        let bad = |reason: String| DatasetError::BadRegex { pattern: pattern.to_string(), reason };
        let regex = Regex::new(pattern).map_err(|e| bad(e.to_string()))?;
        if regex.captures_len() != 2 {
            return Err(bad(format!(
                "expected exactly one capture group, found {}",
                regex.captures_len() - 1
            )));
        }
        if bucket == Some(0) {
            return Err(bad("bucket size must be positive".into()));
        }
        Ok(Self::FilenameRegex { regex, bucket })
    }

    fn group_of(&self, rel: &Path) -> Option<String> {
        match self {
            Self::None => None,
            Self::ParentDir => rel
                .parent()
                .filter(|p| !p.as_os_str().is_empty())
                .map(|p| p.to_string_lossy().replace('\\', "/")),
            Self::FilenameRegex { regex, bucket } => {
                let name = rel.file_name()?.to_str()?;
                let cap = regex.captures(name)?.get(1)?.as_str();
                match bucket {
                    None => Some(cap.to_string()),
                    Some(b) => cap.parse::<u64>().ok().map(|n| (n / b).to_string()),
                }
            }
        }
    }
}

fn is_supported(path: &Path) -> bool {
    path.extension()
        .and_then(|e| e.to_str())
        .is_some_and(|e| SUPPORTED_EXTENSIONS.iter().any(|s| e.eq_ignore_ascii_case(s)))
}

pub fn check_storable(path: &str) -> Result<(), DatasetError> {
    if path.contains([',', '\n', '\r']) {
        return Err(DatasetError::UnstorablePath(path.to_string()));
    }
    Ok(())
}

fn collect_dir(
    root: &Path,
    split: Option<Split>,
    rule: &GroupRule,
    out: &mut Vec<ImageRecord>,
) -> Result<(), DatasetError> {
    if !root.is_dir() {
        return Err(DatasetError::MissingRoot(root.to_path_buf()));
    }
    for entry in WalkDir::new(root).follow_links(true) {
        let entry = entry.map_err(|e| DatasetError::Io {
            path: e.path().unwrap_or(root).to_path_buf(),
            source: e.into(),
        })?;
        if !entry.file_type().is_file() || !is_supported(entry.path()) {
            continue;
        }
        let path = entry
            .path()
            .to_str()
            .ok_or_else(|| DatasetError::UnstorablePath(entry.path().to_string_lossy().into()))?
            .to_string();
        let rel = entry.path().strip_prefix(root).unwrap_or(entry.path());
        out.push(ImageRecord { id: 0, split, group_id: rule.group_of(rel), path });
    }
    Ok(())
}

fn finish_scan(mut records: Vec<ImageRecord>, source: String) -> Manifest {
    records.sort_by(|a, b| (a.split, a.path.as_bytes()).cmp(&(b.split, b.path.as_bytes())));
    let mut m = Manifest::new(records, source);
    m.renumber();
    m
}

/// Recursively collects supported images under `root`.
pub fn scan_dir(root: &Path, rule: &GroupRule) -> Result<Manifest, DatasetError> {
    let mut records = Vec::new();
    collect_dir(root, None, rule, &mut records)?;
    Ok(finish_scan(records, format!("dir:{}", root.display())))
}

/// Scans a train directory and an optional validation directory into one
/// split-tagged manifest.
pub fn scan_split_dirs(train: &Path, val: Option<&Path>, rule: &GroupRule) -> Result<Manifest, DatasetError> {
    let mut records = Vec::new();
    collect_dir(train, Some(Split::Train), rule, &mut records)?;
    if let Some(val) = val {
        collect_dir(val, Some(Split::Val), rule, &mut records)?;
    }
    Ok(finish_scan(records, format!("dirs:{}", train.display())))
}

/// Which CIFAR binary layout a batch file uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CifarKind {
    /// One label byte (0..=9).
    Ten,
    /// Coarse label (0..=19) then fine label (0..=99).
    Hundred,
}

impl CifarKind {
    pub fn record_size(self) -> usize {
        match self {
            Self::Ten => CIFAR10_RECORD,
            Self::Hundred => CIFAR100_RECORD,
        }
    }

    fn label_bytes(self) -> usize {
        self.record_size() - CIFAR_PIXELS
    }

    /// Guesses the layout from a batch file name.
    pub fn for_file(path: &Path) -> Self {
        match path.file_name().and_then(|n| n.to_str()) {
            Some(CIFAR100_TRAIN_FILE | CIFAR100_TEST_FILE) => Self::Hundred,
            _ => Self::Ten,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CifarRecord {
    /// `[label]` for CIFAR-10, `[coarse, fine]` for CIFAR-100.
    pub labels: Vec<u8>,
    pub image: RgbImage,
}

/// Converts 3072 planar bytes (1024 R, 1024 G, 1024 B) to an RGB raster.
pub fn planar_to_rgb(pixels: &[u8]) -> RgbImage {
    assert_eq!(pixels.len(), CIFAR_PIXELS);
    let plane = CIFAR_PIXELS / 3;
    let mut data = Vec::with_capacity(CIFAR_PIXELS);
    for i in 0..plane {
        data.extend_from_slice(&[pixels[i], pixels[plane + i], pixels[2 * plane + i]]);
    }
    RgbImage::new(CIFAR_SIDE, CIFAR_SIDE, data).expect("32x32x3 raster")
}

fn check_labels(kind: CifarKind, labels: &[u8], path: &Path, record: usize) -> Result<(), DatasetError> {
    let limits: &[(&'static str, u8)] = match kind {
        CifarKind::Ten => &[("class", 9)],
        CifarKind::Hundred => &[("coarse", 19), ("fine", 99)],
    };
    for (&label, &(kind, max)) in labels.iter().zip(limits) {
        if label > max {
            return Err(DatasetError::BadLabel { path: path.to_path_buf(), record, kind, label, max });
        }
    }
    Ok(())
}

/// Parses a whole CIFAR batch. `path` only labels errors.
pub fn parse_cifar_batch(
    bytes: &[u8],
    kind: CifarKind,
    path: &Path,
) -> Result<Vec<CifarRecord>, DatasetError> {
    let size = kind.record_size();
    if !bytes.len().is_multiple_of(size) {
        return Err(DatasetError::TruncatedFile {
            path: path.to_path_buf(),
            len: bytes.len() as u64,
            record: size,
        });
    }
    bytes
        .chunks_exact(size)
        .enumerate()
        .map(|(i, rec)| {
            let (labels, pixels) = rec.split_at(kind.label_bytes());
            check_labels(kind, labels, path, i)?;
            Ok(CifarRecord { labels: labels.to_vec(), image: planar_to_rgb(pixels) })
        })
        .collect()
}

pub fn read_cifar_batch(path: &Path, kind: CifarKind) -> Result<Vec<CifarRecord>, DatasetError> {
    let bytes = std::fs::read(path).map_err(io_err(path))?;
    parse_cifar_batch(&bytes, kind, path)
}

/// A manifest together with its decoded images, index-aligned.
#[derive(Debug, Clone)]
pub struct LoadedDataset {
    pub manifest: Manifest,
    pub images: Vec<RgbImage>,
}

fn load_cifar(
    dir: &Path,
    kind: CifarKind,
    train_files: &[&str],
    test_file: &str,
    name: &str,
) -> Result<LoadedDataset, DatasetError> {
    if !dir.is_dir() {
        return Err(DatasetError::MissingRoot(dir.to_path_buf()));
    }
    let mut records = Vec::new();
    let mut images = Vec::new();
    let parts =
        train_files.iter().map(|f| (*f, Split::Train)).chain(std::iter::once((test_file, Split::Val)));
    for (file, split) in parts {
        let path = dir.join(file);
        let batch = read_cifar_batch(&path, kind)?;
        let path_str =
            path.to_str().ok_or_else(|| DatasetError::UnstorablePath(path.to_string_lossy().into()))?;
        check_storable(path_str)?;
        for (i, rec) in batch.into_iter().enumerate() {
            records.push(ImageRecord {
                id: records.len() as u64,
                split: Some(split),
                group_id: None,
                path: format!("{path_str}#{i}"),
            });
            images.push(rec.image);
        }
    }
    Ok(LoadedDataset { manifest: Manifest::new(records, format!("{name}:{}", dir.display())), images })
}

/// Loads `data_batch_1..5.bin` (train) and `test_batch.bin` (val).
pub fn load_cifar10(dir: &Path) -> Result<LoadedDataset, DatasetError> {
    load_cifar(dir, CifarKind::Ten, &CIFAR10_TRAIN_FILES, CIFAR10_TEST_FILE, "cifar10")
}

/// Loads `train.bin` (train) and `test.bin` (val).
pub fn load_cifar100(dir: &Path) -> Result<LoadedDataset, DatasetError> {
    load_cifar(dir, CifarKind::Hundred, &[CIFAR100_TRAIN_FILE], CIFAR100_TEST_FILE, "cifar100")
}

/// Splits `<file>.bin#<n>` into its parts.
fn parse_locator(path: &str) -> Option<(&str, usize)> {
    let (file, index) = path.rsplit_once('#')?;
    if !file.ends_with(".bin") {
        return None;
    }
    Some((file, index.parse().ok()?))
}

/// Loads the image a record points at: an image file, or a CIFAR locator.
pub fn load_image(path: &str) -> Result<RgbImage, DatasetError> {
    let Some((file, index)) = parse_locator(path) else {
        return Ok(imaging::open(Path::new(path))?);
    };
    let file_path = Path::new(file);
    let kind = CifarKind::for_file(file_path);
    let size = kind.record_size();
    let mut f = File::open(file_path).map_err(io_err(file_path))?;
    let len = f.metadata().map_err(io_err(file_path))?.len();
    if len % size as u64 != 0 {
        return Err(DatasetError::TruncatedFile { path: file_path.to_path_buf(), len, record: size });
    }
    if (index as u64 + 1) * size as u64 > len {
        return Err(DatasetError::BadLocator(path.to_string()));
    }
    let mut rec = vec![0u8; size];
    f.seek(SeekFrom::Start(index as u64 * size as u64))
        .and_then(|_| f.read_exact(&mut rec))
        .map_err(io_err(file_path))?;
    let (labels, pixels) = rec.split_at(kind.label_bytes());
    check_labels(kind, labels, file_path, index)?;
    Ok(planar_to_rgb(pixels))
}

/// Writes the manifest CSV: header `id,split,group_id,path`, LF endings,
/// empty fields for absent split or group.
pub fn write_manifest(m: &Manifest, path: &Path) -> Result<(), DatasetError> {
    for r in &m.records {
        check_storable(&r.path)?;
        if let Some(g) = &r.group_id {
            check_storable(g)?;
        }
    }
    let file = File::create(path).map_err(io_err(path))?;
    let mut w = BufWriter::new(file);
    let mut write = || -> std::io::Result<()> {
        writeln!(w, "{MANIFEST_HEADER}")?;
        for r in &m.records {
            writeln!(
                w,
                "{},{},{},{}",
                r.id,
                r.split.map(Split::as_str).unwrap_or(""),
                r.group_id.as_deref().unwrap_or(""),
                r.path
            )?;
        }
        w.flush()
    };
    write().map_err(io_err(path))
}

pub fn read_manifest(path: &Path) -> Result<Manifest, DatasetError> {
    let file = File::open(path).map_err(io_err(path))?;
    let malformed =
        |line: usize, reason: String| DatasetError::MalformedRow { path: path.to_path_buf(), line, reason };
    let mut lines = BufReader::new(file).lines();
    match lines.next() {
        Some(Ok(h)) if h.trim_end_matches('\r') == MANIFEST_HEADER => {}
        Some(Ok(h)) => return Err(malformed(1, format!("expected header {MANIFEST_HEADER:?}, got {h:?}"))),
        Some(Err(e)) => return Err(io_err(path)(e)),
        None => return Err(malformed(1, "missing header".into())),
    }
    let mut records = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for (i, line) in lines.enumerate() {
        let lineno = i + 2;
        let line = line.map_err(io_err(path))?;
        let line = line.trim_end_matches('\r');
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 4 {
            return Err(malformed(lineno, format!("expected 4 fields, got {}", fields.len())));
        }
        let id: u64 = fields[0].parse().map_err(|_| malformed(lineno, format!("bad id {:?}", fields[0])))?;
        if !seen.insert(id) {
            return Err(malformed(lineno, format!("duplicate id {id}")));
        }
        let split = match fields[1] {
            "" => None,
            s => Some(s.parse().map_err(|e| malformed(lineno, e))?),
        };
        if fields[3].is_empty() {
            return Err(malformed(lineno, "empty path".into()));
        }
        records.push(ImageRecord {
            id,
            split,
            group_id: (!fields[2].is_empty()).then(|| fields[2].to_string()),
            path: fields[3].to_string(),
        });
    }
    Ok(Manifest::new(records, format!("manifest:{}", path.display())))
}
