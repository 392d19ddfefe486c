//! BK-tree over 64-bit hashes and the streaming duplicate decision.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hashing::{Hash64, HashAlgo, HashError};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum IndexError {
    #[error("threshold {0} outside [0, 63]")]
    ThresholdOutOfRange(u32),
    #[error(transparent)]
    Hash(#[from] HashError),
}

/// Maximum number of differing bits for two hashes to count as duplicates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct Threshold(u32);

impl Threshold {
    pub const MAX: u32 = 63;

    pub fn new(th: u32) -> Result<Self, IndexError> {
        if th > Self::MAX {
            return Err(IndexError::ThresholdOutOfRange(th));
        }
        Ok(Self(th))
    }

    pub fn get(self) -> u32 {
        self.0
    }
}

impl TryFrom<u32> for Threshold {
    type Error = IndexError;
    fn try_from(v: u32) -> Result<Self, Self::Error> {
        Self::new(v)
    }
}

impl From<Threshold> for u32 {
    fn from(t: Threshold) -> u32 {
        t.0
    }
}

impl fmt::Display for Threshold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[derive(Debug, Clone)]
struct Node<T> {
    bits: u64,
    payloads: Vec<T>,
    /// `(distance to this node, child node index)`, sorted by distance.
    children: Vec<(u32, usize)>,
}

/// Burkhard–Keller tree keyed by hamming distance.
///
/// Identical hashes share one node. Payloads on a node keep insertion order.
#[derive(Debug, Clone)]
pub struct BkIndex<T> {
    algo: HashAlgo,
    nodes: Vec<Node<T>>,
    len: usize,
}

impl<T: Clone> BkIndex<T> {
    pub fn new(algo: HashAlgo) -> Self {
        Self { algo, nodes: Vec::new(), len: 0 }
    }

    pub fn algo(&self) -> HashAlgo {
        self.algo
    }

    /// Number of stored hashes, counting repeats.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Number of distinct hash values.
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    fn check(&self, h: Hash64) -> Result<(), HashError> {
        if h.algo != self.algo {
            return Err(HashError::AlgoMismatch { left: self.algo, right: h.algo });
        }
        Ok(())
    }

    pub fn insert(&mut self, h: Hash64, payload: T) -> Result<(), HashError> {
        self.check(h)?;
        self.len += 1;
        let fresh = |bits, payload| Node { bits, payloads: vec![payload], children: Vec::new() };
        if self.nodes.is_empty() {
            self.nodes.push(fresh(h.bits, payload));
            return Ok(());
        }
        let mut cur = 0;
        loop {
            let d = (self.nodes[cur].bits ^ h.bits).count_ones();
            if d == 0 {
                self.nodes[cur].payloads.push(payload);
                return Ok(());
            }
            match self.nodes[cur].children.binary_search_by_key(&d, |&(k, _)| k) {
                Ok(pos) => cur = self.nodes[cur].children[pos].1,
                Err(pos) => {
                    let idx = self.nodes.len();
                    self.nodes.push(fresh(h.bits, payload));
                    self.nodes[cur].children.insert(pos, (d, idx));
                    return Ok(());
                }
            }
        }
    }

    /// Every stored `(payload, distance)` with `distance <= th`.
    pub fn radius_query(&self, h: Hash64, th: Threshold) -> Result<Vec<(T, u32)>, HashError> {
        self.check(h)?;
        let mut out = Vec::new();
        self.visit_within(h.bits, th.get(), |payloads, d| {
            out.extend(payloads.iter().cloned().map(|p| (p, d)))
        });
        Ok(out)
    }

    /// Number of stored hashes within `th`, without materialising payloads.
    pub fn count_within(&self, h: Hash64, th: Threshold) -> Result<usize, HashError> {
        self.check(h)?;
        let mut n = 0;
        self.visit_within(h.bits, th.get(), |payloads, _| n += payloads.len());
        Ok(n)
    }

    fn visit_within(&self, bits: u64, th: u32, mut hit: impl FnMut(&[T], u32)) {
        if self.nodes.is_empty() {
            return;
        }
        let mut stack = vec![0usize];
        while let Some(i) = stack.pop() {
            let node = &self.nodes[i];
            let d = (node.bits ^ bits).count_ones();
            if d <= th {
                hit(&node.payloads, d);
            }
            let lo = d.saturating_sub(th);
            let hi = d + th;
            let start = node.children.partition_point(|&(k, _)| k < lo);
            stack.extend(node.children[start..].iter().take_while(|&&(k, _)| k <= hi).map(|&(_, c)| c));
        }
    }

    #[cfg(test)]
    fn check_invariants(&self) {
        let mut count = 0;
        for node in &self.nodes {
            count += node.payloads.len();
            for &(k, c) in &node.children {
                assert_eq!(k, (node.bits ^ self.nodes[c].bits).count_ones());
                assert!((1..=64).contains(&k));
            }
        }
        assert_eq!(count, self.len);
    }
}

/// A record dropped by [`dedup_stream`] in favour of an earlier kept one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Discard {
    pub id: u64,
    pub representative: u64,
    pub distance: u32,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DedupOutcome {
    pub kept: Vec<u64>,
    pub discarded: Vec<Discard>,
}

impl DedupOutcome {
    pub fn total(&self) -> usize {
        self.kept.len() + self.discarded.len()
    }
}

/// First-seen-kept deduplication.
///
/// Records are visited in the given order. A record within `th` of any
/// previously kept record is discarded against the nearest one (earliest
/// kept on ties) and is not itself indexed; otherwise it is kept. This is
/// not a transitive clustering.
pub fn dedup_stream(records: &[(u64, Hash64)], th: Threshold) -> Result<DedupOutcome, HashError> {
    let Some(&(_, first)) = records.first() else {
        return Ok(DedupOutcome::default());
    };
    // Payload is the position in `kept`, so the smallest one is the earliest kept.
    let mut index = BkIndex::<usize>::new(first.algo);
    let mut out = DedupOutcome::default();
    for &(id, h) in records {
        let best = index.radius_query(h, th)?.into_iter().min_by_key(|&(pos, d)| (d, pos));
        match best {
            Some((pos, distance)) => {
                out.discarded.push(Discard { id, representative: out.kept[pos], distance })
            }
            None => {
                index.insert(h, out.kept.len())?;
                out.kept.push(id);
            }
        }
    }
    Ok(out)
}

/// Mean, population standard deviation and median of a sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub mean: f64,
    pub std: f64,
    pub median: f64,
}

impl Summary {
    pub fn of(values: &[u32]) -> Self {
        if values.is_empty() {
            return Self { mean: 0.0, std: 0.0, median: 0.0 };
        }
        let n = values.len() as f64;
        let mean = values.iter().map(|&v| v as f64).sum::<f64>() / n;
        let var = values.iter().map(|&v| (v as f64 - mean).powi(2)).sum::<f64>() / n;
        let mut sorted = values.to_vec();
        sorted.sort_unstable();
        let m = sorted.len();
        let median = if m % 2 == 1 {
            sorted[m / 2] as f64
        } else {
            (sorted[m / 2 - 1] as f64 + sorted[m / 2] as f64) / 2.0
        };
        Self { mean, std: var.sqrt(), median }
    }
}

/// Per-record neighbourhood sizes within `th`, each record counting itself.
#[derive(Debug, Clone, PartialEq)]
pub struct DupCounts {
    pub ids: Vec<u64>,
    pub counts: Vec<u32>,
    pub summary: Summary,
}

pub fn dup_counts(records: &[(u64, Hash64)], th: Threshold) -> Result<DupCounts, HashError> {
    let ids: Vec<u64> = records.iter().map(|r| r.0).collect();
    let counts = match records.first() {
        None => Vec::new(),
        Some(&(_, first)) => {
            let mut index = BkIndex::<()>::new(first.algo);
            for &(_, h) in records {
                index.insert(h, ())?;
            }
            records
                .par_iter()
                .map(|&(_, h)| index.count_within(h, th).map(|n| n as u32))
                .collect::<Result<Vec<_>, _>>()?
        }
    };
    let summary = Summary::of(&counts);
    Ok(DupCounts { ids, counts, summary })
}
