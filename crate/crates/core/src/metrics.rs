//! Dedup reports, threshold sweeps and ground-truth scoring.

use std::collections::HashMap;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dataset::{Manifest, Split};
use crate::hashing::{Hash64, HashAlgo, HashError};
use crate::index::{dedup_stream, dup_counts, DedupOutcome, Summary, Threshold};

/// Bytes per stored hash value.
pub const HASH_BYTES: u64 = 8;
/// Declared index overhead per kept entry: record id, payload vector
/// header and child vector header of a tree node.
pub const NODE_OVERHEAD_BYTES: u64 = 56;
pub const INDEX_ENTRY_BYTES: u64 = HASH_BYTES + NODE_OVERHEAD_BYTES;
/// Per-hash storage of the string-based reference implementation, kept
/// in reports for comparison with [`INDEX_ENTRY_BYTES`].
pub const REFERENCE_BYTES_PER_HASH: u64 = 113;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MetricsError {
    #[error("manifest has {records} records but {hashes} hashes were supplied")]
    CountMismatch { records: usize, hashes: usize },
    #[error("bad threshold list: {0}")]
    BadThresholdList(String),
    #[error("record {0} has no group id")]
    MissingGroups(u64),
    #[error(transparent)]
    Hash(#[from] HashError),
}

/// Whether dedup runs inside each split or over the whole manifest.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scope {
    #[default]
    PerSplit,
    Joint,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitReport {
    /// `None` for records without a split tag.
    pub split: Option<Split>,
    pub total: usize,
    pub kept: usize,
    pub discarded: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DedupReport {
    pub algo: HashAlgo,
    pub th: Threshold,
    pub scope: Scope,
    pub total: usize,
    pub kept: usize,
    pub discarded: usize,
    pub reduction_ratio: f64,
    pub dup_mean: f64,
    pub dup_std: f64,
    pub dup_median: f64,
    pub hash_time_s: f64,
    pub index_time_s: f64,
    pub mem_bytes_estimate: u64,
    pub bytes_per_entry: u64,
    pub reference_bytes_per_hash: u64,
    pub per_split: Vec<SplitReport>,
}

impl DedupReport {
    /// JSON with struct-order keys. Timings are zeroed unless requested so
    /// that reports are byte-identical across runs.
    pub fn to_json(&self, include_timings: bool) -> String {
        let mut r = self.clone();
        if !include_timings {
            r.hash_time_s = 0.0;
            r.index_time_s = 0.0;
        }
        let mut s = serde_json::to_string_pretty(&r).expect("report serialises");
        s.push('\n');
        s
    }

    pub const TABLE_HEADER: &'static str = "method,th,time_hash_s,mem_bytes,dup_mean,dup_std";

    /// One row in the `method,th,time_hash_s,mem_bytes,dup_mean,dup_std` layout.
    pub fn table_row(&self) -> String {
        format!(
            "{},{},{:.4},{},{:.4},{:.4}",
            self.algo, self.th, self.hash_time_s, self.mem_bytes_estimate, self.dup_mean, self.dup_std
        )
    }
}

fn check_counts(m: &Manifest, hashes: &[Hash64]) -> Result<(), MetricsError> {
    if m.len() != hashes.len() {
        return Err(MetricsError::CountMismatch { records: m.len(), hashes: hashes.len() });
    }
    Ok(())
}

/// Record positions grouped by scope partition, each in manifest order.
fn partitions(m: &Manifest, scope: Scope) -> Vec<(Option<Split>, Vec<usize>)> {
    match scope {
        Scope::Joint => vec![(None, (0..m.len()).collect())],
        Scope::PerSplit => {
            let mut parts: Vec<(Option<Split>, Vec<usize>)> = Vec::new();
            for (i, r) in m.records.iter().enumerate() {
                match parts.iter_mut().find(|(s, _)| *s == r.split) {
                    Some((_, v)) => v.push(i),
                    None => parts.push((r.split, vec![i])),
                }
            }
            parts.sort_by_key(|(s, _)| *s);
            parts
        }
    }
}

/// Dedup decisions plus the report describing them.
#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub report: DedupReport,
    pub outcome: DedupOutcome,
}

/// Runs streaming dedup and neighbourhood counting over `m` in manifest
/// order. Under [`Scope::PerSplit`] each split is deduplicated and counted
/// on its own; `outcome.kept` stays in manifest order either way.
pub fn evaluate_dedup_scoped(
    m: &Manifest,
    hashes: &[Hash64],
    th: Threshold,
    scope: Scope,
    hash_time_s: f64,
) -> Result<Evaluation, MetricsError> {
    check_counts(m, hashes)?;
    let algo = hashes.first().map(|h| h.algo).unwrap_or_default();
    let start = Instant::now();

    let mut kept_set = std::collections::HashSet::new();
    let mut discarded = Vec::new();
    let mut counts = Vec::with_capacity(m.len());
    let mut per_split = Vec::new();
    let parts = partitions(m, scope);
    let split_tagged = m.has_splits();
    for (split, positions) in &parts {
        let recs: Vec<(u64, Hash64)> = positions.iter().map(|&i| (m.records[i].id, hashes[i])).collect();
        let out = dedup_stream(&recs, th)?;
        counts.extend(dup_counts(&recs, th)?.counts);
        if scope == Scope::PerSplit && split_tagged {
            per_split.push(SplitReport {
                split: *split,
                total: recs.len(),
                kept: out.kept.len(),
                discarded: out.discarded.len(),
            });
        }
        kept_set.extend(out.kept);
        discarded.extend(out.discarded);
    }
    if scope == Scope::Joint && split_tagged {
        for (split, positions) in partitions(m, Scope::PerSplit) {
            let kept = positions.iter().filter(|&&i| kept_set.contains(&m.records[i].id)).count();
            per_split.push(SplitReport {
                split,
                total: positions.len(),
                kept,
                discarded: positions.len() - kept,
            });
        }
    }
    let kept: Vec<u64> = m.records.iter().map(|r| r.id).filter(|id| kept_set.contains(id)).collect();
    let index_time_s = start.elapsed().as_secs_f64();

    let summary = Summary::of(&counts);
    let total = m.len();
    let report = DedupReport {
        algo,
        th,
        scope,
        total,
        kept: kept.len(),
        discarded: discarded.len(),
        reduction_ratio: if total == 0 { 0.0 } else { 1.0 - kept.len() as f64 / total as f64 },
        dup_mean: summary.mean,
        dup_std: summary.std,
        dup_median: summary.median,
        hash_time_s,
        index_time_s,
        mem_bytes_estimate: kept.len() as u64 * INDEX_ENTRY_BYTES,
        bytes_per_entry: INDEX_ENTRY_BYTES,
        reference_bytes_per_hash: REFERENCE_BYTES_PER_HASH,
        per_split,
    };
    Ok(Evaluation { report, outcome: DedupOutcome { kept, discarded } })
}

/// Joint-scope evaluation over the whole manifest.
pub fn evaluate_dedup(m: &Manifest, hashes: &[Hash64], th: Threshold) -> Result<Evaluation, MetricsError> {
    evaluate_dedup_scoped(m, hashes, th, Scope::Joint, 0.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub th: u32,
    pub dup_mean: f64,
    pub dup_median: f64,
    pub kept: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepCurve {
    pub algo: HashAlgo,
    pub points: Vec<SweepPoint>,
}

impl SweepCurve {
    pub const CSV_HEADER: &'static str = "th,dup_median,kept";

    pub fn to_csv(&self) -> String {
        let mut s = format!("{}\n", Self::CSV_HEADER);
        for p in &self.points {
            s.push_str(&format!("{},{},{}\n", p.th, p.dup_median, p.kept));
        }
        s
    }
}

/// For each record, how many records (itself included) lie at each
/// distance 0..=64. Computed once and shared by every sweep threshold.
fn distance_histograms(hashes: &[Hash64]) -> Vec<[u32; 65]> {
    hashes
        .par_iter()
        .map(|a| {
            let mut h = [0u32; 65];
            for b in hashes {
                h[(a.bits ^ b.bits).count_ones() as usize] += 1;
            }
            h
        })
        .collect()
}

/// Dup statistics and stream-dedup kept counts across thresholds, joint
/// over the manifest. `thresholds` must be strictly ascending in [0, 63].
pub fn sweep(m: &Manifest, hashes: &[Hash64], thresholds: &[u32]) -> Result<SweepCurve, MetricsError> {
    check_counts(m, hashes)?;
    if thresholds.is_empty() {
        return Err(MetricsError::BadThresholdList("empty".into()));
    }
    if thresholds.windows(2).any(|w| w[0] >= w[1]) {
        return Err(MetricsError::BadThresholdList("not strictly ascending".into()));
    }
    let ths = thresholds
        .iter()
        .map(|&t| Threshold::new(t).map_err(|e| MetricsError::BadThresholdList(e.to_string())))
        .collect::<Result<Vec<_>, _>>()?;
    if let Some(first) = hashes.first() {
        if let Some(other) = hashes.iter().find(|h| h.algo != first.algo) {
            return Err(HashError::AlgoMismatch { left: first.algo, right: other.algo }.into());
        }
    }

    let hist = distance_histograms(hashes);
    let recs: Vec<(u64, Hash64)> = m.records.iter().map(|r| r.id).zip(hashes.iter().copied()).collect();
    let points = ths
        .par_iter()
        .map(|&th| {
            let t = th.get() as usize;
            let counts: Vec<u32> = hist.iter().map(|h| h[..=t].iter().sum()).collect();
            let s = Summary::of(&counts);
            let kept = dedup_stream(&recs, th)?.kept.len();
            Ok(SweepPoint { th: th.get(), dup_mean: s.mean, dup_median: s.median, kept })
        })
        .collect::<Result<Vec<_>, HashError>>()?;
    Ok(SweepCurve { algo: hashes.first().map(|h| h.algo).unwrap_or_default(), points })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GroundTruthEval {
    pub discarded: usize,
    pub true_positive_discards: usize,
    pub groups: usize,
    pub precision: f64,
    pub recall: f64,
}

/// Scores dedup decisions against ground-truth groups.
///
/// A discard is correct when the record and its representative share a
/// group. Recall is measured against `total − groups`, the number of
/// discards an ideal one-per-group dedup would make.
pub fn score_against_groups(outcome: &DedupOutcome, m: &Manifest) -> Result<GroundTruthEval, MetricsError> {
    let mut group_of: HashMap<u64, &str> = HashMap::with_capacity(m.len());
    for r in &m.records {
        let g = r.group_id.as_deref().ok_or(MetricsError::MissingGroups(r.id))?;
        group_of.insert(r.id, g);
    }
    let groups = group_of.values().collect::<std::collections::HashSet<_>>().len();
    let mut tp = 0;
    for d in &outcome.discarded {
        let gi = group_of.get(&d.id).ok_or(MetricsError::MissingGroups(d.id))?;
        let gr = group_of.get(&d.representative).ok_or(MetricsError::MissingGroups(d.representative))?;
        if gi == gr {
            tp += 1;
        }
    }
    let discarded = outcome.discarded.len();
    let ideal = m.len() - groups;
    Ok(GroundTruthEval {
        discarded,
        true_positive_discards: tp,
        groups,
        precision: if discarded == 0 { 1.0 } else { tp as f64 / discarded as f64 },
        recall: if ideal == 0 { 1.0 } else { tp as f64 / ideal as f64 },
    })
}
