//! Release acceptance suite. Prints one line per criterion and exits
//! non-zero if any criterion fails.
//!
//! Criteria 7 and 8 need the CIFAR-10 binary distribution. Point
//! `DEDUPKIT_CIFAR10_DIR` at the extracted `cifar-10-batches-bin`
//! directory (or its parent) to run them; otherwise they are reported as
//! NOT RUN.

use std::collections::BTreeSet;
use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use dedupkit::augment::{synthetic_corpus, AugmentOp, AugmentRanges, AugmentSpec};
use dedupkit::dataset::{self, CifarKind, DatasetError, Manifest, Split};
use dedupkit::metrics::{evaluate_dedup, score_against_groups, sweep, Scope};
use dedupkit::pipeline::{self, Corpus, RunConfig, Source};
use dedupkit::spectral::{dct2, haar_dwt2, idct2, CoeffGrid};
use dedupkit::{dedup_stream, hamming, BkIndex, Hash64, HashAlgo, Hasher, PixelGrid, RgbImage, Threshold};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SCENE_SEED: u64 = 2024;
const AUG_SEED: u64 = 7;
const GROUPS: u64 = 100;
const VARIANTS: usize = 4;
const SIDE: u32 = 64;

enum Verdict {
    Pass(String),
    Fail(String),
    NotRun(String),
}

fn line(s: &str) {
    let _ = writeln!(std::io::stdout(), "{s}");
}

fn check(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn th(t: u32) -> Threshold {
    Threshold::new(t).unwrap()
}

fn p(bits: u64) -> Hash64 {
    Hash64::new(HashAlgo::PHash, bits)
}

fn aug_spec(ranges: AugmentRanges) -> AugmentSpec {
    let mut spec = AugmentSpec::new(AUG_SEED, AugmentOp::ALL.to_vec(), VARIANTS);
    spec.ranges = ranges;
    spec
}

fn aug_corpus(ranges: AugmentRanges) -> (Manifest, Vec<RgbImage>) {
    synthetic_corpus(SCENE_SEED, GROUPS, SIDE, &aug_spec(ranges)).unwrap()
}

fn phash_all(images: &[RgbImage]) -> Vec<Hash64> {
    let h = Hasher::new(HashAlgo::PHash);
    images.iter().map(|i| h.hash(i)).collect()
}

// 1. BK-tree against a linear scan

fn criterion_1() -> Result<String, String> {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let hashes: Vec<Hash64> = (0..10_000).map(|_| p(rng.random())).collect();
    let mut index = BkIndex::new(HashAlgo::PHash);
    for (i, &h) in hashes.iter().enumerate() {
        index.insert(h, i).unwrap();
    }
    let queries: Vec<Hash64> = (0..200).map(|_| p(rng.random())).collect();
    let mut nonempty = 0;
    for &radius in &[0, 4, 8, 12, 16] {
        for &q in &queries {
            let got: BTreeSet<(usize, u32)> =
                index.radius_query(q, th(radius)).unwrap().into_iter().collect();
            let want: BTreeSet<(usize, u32)> = hashes
                .iter()
                .enumerate()
                .filter_map(|(i, &h)| {
                    let d = (h.bits ^ q.bits).count_ones();
                    (d <= radius).then_some((i, d))
                })
                .collect();
            check(got == want, format!("radius {radius}: result sets differ"))?;
            nonempty += usize::from(!want.is_empty());
        }
    }
    let elapsed = start.elapsed();
    check(elapsed < Duration::from_secs(10), format!("took {elapsed:?}"))?;
    Ok(format!("1000 queries exact, {nonempty} non-empty, {elapsed:.2?}"))
}

// 2. Spectral transforms

fn direct_dct(x: &[f64], n: usize) -> Vec<f64> {
    let pi = std::f64::consts::PI;
    let a = |k: usize| if k == 0 { (1.0 / n as f64).sqrt() } else { (2.0 / n as f64).sqrt() };
    let mut out = vec![0.0; n * n];
    for u in 0..n {
        for v in 0..n {
            let mut s = 0.0;
            for r in 0..n {
                for c in 0..n {
                    s += x[r * n + c]
                        * (pi * (2 * r + 1) as f64 * u as f64 / (2 * n) as f64).cos()
                        * (pi * (2 * c + 1) as f64 * v as f64 / (2 * n) as f64).cos();
                }
            }
            out[u * n + v] = a(u) * a(v) * s;
        }
    }
    out
}

fn random_grid(rng: &mut ChaCha8Rng, n: usize) -> PixelGrid {
    PixelGrid::from_fn(n, n, |_, _| rng.random_range(0.0..=255.0))
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn criterion_2() -> Result<String, String> {
    let tol = 1e-9;
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst_rt: f64 = 0.0;
    let mut worst_parseval: f64 = 0.0;
    for _ in 0..100 {
        let g = random_grid(&mut rng, 32);
        let c = dct2(&g).unwrap();
        let back = idct2(&c).unwrap();
        worst_rt = worst_rt.max(max_abs_diff(back.data(), g.data()));
        let e_in: f64 = g.data().iter().map(|v| v * v).sum();
        worst_parseval = worst_parseval.max((c.energy() - e_in).abs() / e_in);
    }
    check(worst_rt <= tol, format!("round trip error {worst_rt:e}"))?;
    check(worst_parseval <= tol, format!("Parseval relative error {worst_parseval:e}"))?;

    let mut worst_direct: f64 = 0.0;
    for n in [4, 8, 16] {
        for _ in 0..10 {
            let g = random_grid(&mut rng, n);
            let fast = dct2(&g).unwrap();
            worst_direct = worst_direct.max(max_abs_diff(fast.data(), &direct_dct(g.data(), n)));
        }
    }
    check(worst_direct <= tol, format!("direct DCT mismatch {worst_direct:e}"))?;

    let mut worst_haar_e: f64 = 0.0;
    let mut worst_ll: f64 = 0.0;
    for levels in 1..=5u32 {
        for _ in 0..10 {
            let g = random_grid(&mut rng, 64);
            let w = haar_dwt2(&g, levels).unwrap();
            let e_in: f64 = g.data().iter().map(|v| v * v).sum();
            worst_haar_e = worst_haar_e.max((w.energy() - e_in).abs() / e_in);
            let b = 1usize << levels;
            let side = 64 / b;
            for r in 0..side {
                for c in 0..side {
                    let mut sum = 0.0;
                    for i in 0..b {
                        for j in 0..b {
                            sum += g.get(r * b + i, c * b + j);
                        }
                    }
                    let expected = sum / (b * b) as f64 * b as f64;
                    worst_ll = worst_ll.max((w.get(r, c) - expected).abs());
                }
            }
        }
    }
    check(worst_haar_e <= tol, format!("Haar energy relative error {worst_haar_e:e}"))?;
    check(worst_ll <= tol, format!("LL band vs box mean error {worst_ll:e}"))?;

    let zero = CoeffGrid::zeros(8, 8);
    check(dct2(&zero).unwrap().energy() == 0.0, "zero grid")?;
    Ok(format!(
        "round trip {worst_rt:.1e}, Parseval {worst_parseval:.1e} rel, direct {worst_direct:.1e}, \
         Haar energy {worst_haar_e:.1e} rel, LL {worst_ll:.1e}"
    ))
}

// 3. Hash fixed points

fn criterion_3() -> Result<String, String> {
    for rgb in [[1, 1, 1], [100, 150, 200], [255, 255, 255]] {
        for (w, h) in [(8, 8), (33, 17), (64, 64), (100, 75)] {
            let img = RgbImage::filled(w, h, rgb);
            for algo in [HashAlgo::AHash, HashAlgo::DHash, HashAlgo::WHash] {
                let got = Hasher::new(algo).hash(&img).bits;
                check(got == 0, format!("{algo} of constant {rgb:?} {w}x{h} = {got:016x}"))?;
            }
            let got = Hasher::new(HashAlgo::PHash).hash(&img).bits;
            check(got == 0x8000_0000_0000_0000, format!("phash of constant {rgb:?} {w}x{h} = {got:016x}"))?;
        }
    }
    let dhash = Hasher::new(HashAlgo::DHash);
    for (w, h) in [(9, 8), (90, 80), (100, 37)] {
        let dec = RgbImage::from_fn(w, h, |x, _| {
            let v = (250 - x * 200 / w) as u8;
            [v, v, v]
        });
        let inc = RgbImage::from_fn(w, h, |x, _| {
            let v = (5 + x * 200 / w) as u8;
            [v, v, v]
        });
        let d = dhash.hash(&dec).bits;
        let i = dhash.hash(&inc).bits;
        check(d == u64::MAX, format!("decreasing {w}x{h} = {d:016x}"))?;
        check(i == 0, format!("increasing {w}x{h} = {i:016x}"))?;
    }
    Ok("constant images and strict gradients exact".into())
}

// 4. Dedup semantics

fn criterion_4() -> Result<String, String> {
    let chain = [(1, p(0x0)), (2, p(0xf)), (3, p(0xff))];
    let d = |a: usize, b: usize| hamming(chain[a].1, chain[b].1).unwrap();
    check((d(0, 1), d(1, 2), d(0, 2)) == (4, 4, 8), "chain distances")?;
    let out = dedup_stream(&chain, th(4)).unwrap();
    check(out.kept == vec![1, 3], format!("chain kept {:?}", out.kept))?;
    check(
        out.discarded.len() == 1
            && out.discarded[0].id == 2
            && out.discarded[0].representative == 1
            && out.discarded[0].distance == 4,
        format!("chain discarded {:?}", out.discarded),
    )?;

    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let img = dedupkit::augment::synthetic_scene(9, 9, 48, 40);
    for i in 0..5 {
        img.save_png(&tmp.path().join(format!("copy{i}.png"))).unwrap();
    }
    for algo in HashAlgo::ALL {
        let cfg = RunConfig::new(
            Source::Dir { root: tmp.path().to_path_buf(), rule: dataset::GroupRule::None },
            Hasher::new(algo),
            th(0),
        );
        let r = pipeline::run(&cfg).map_err(|e| e.to_string())?;
        check(
            r.report().kept == 1 && r.report().discarded == 4,
            format!("{algo}: exact copies kept {}", r.report().kept),
        )?;
    }

    let (m, images) = aug_corpus(AugmentRanges::mild());
    let mut split_m = m.clone();
    for (i, r) in split_m.records.iter_mut().enumerate() {
        r.split = Some(if i % 5 == 4 { Split::Val } else { Split::Train });
    }
    let outdir = tempfile::tempdir().map_err(|e| e.to_string())?;
    for scope in [Scope::PerSplit, Scope::Joint] {
        let mut reference: Option<(Vec<u8>, Vec<u8>)> = None;
        for workers in [1, 4, 8] {
            let corpus = Corpus { manifest: split_m.clone(), images: Some(images.clone()) };
            let report = outdir.path().join(format!("report{workers}.json"));
            let manifest = outdir.path().join(format!("kept{workers}.csv"));
            let mut cfg =
                RunConfig::new(Source::Manifest(PathBuf::new()), Hasher::new(HashAlgo::PHash), th(6));
            cfg.scope = scope;
            cfg.workers = workers;
            cfg.report_path = Some(report.clone());
            cfg.manifest_out = Some(manifest.clone());
            pipeline::run_corpus(&corpus, &cfg).map_err(|e| e.to_string())?;
            let bytes = (std::fs::read(&report).unwrap(), std::fs::read(&manifest).unwrap());
            match &reference {
                None => reference = Some(bytes),
                Some(r) => check(*r == bytes, format!("{scope:?}: outputs differ at {workers} workers"))?,
            }
        }
    }
    Ok("chain kept {1,3}; 5 copies -> 1 for all algorithms; outputs byte-identical for 1/4/8 workers".into())
}

// 5. Monotonicity of the threshold sweep

fn monotone(m: &Manifest, hashes: &[Hash64]) -> Result<(usize, usize), String> {
    let ths: Vec<u32> = (0..=50).collect();
    let curve = sweep(m, hashes, &ths).map_err(|e| e.to_string())?;
    let mut prev: Option<(usize, f64, f64, f64)> = None;
    for (pt, &t) in curve.points.iter().zip(&ths) {
        let eval = evaluate_dedup(m, hashes, th(t)).map_err(|e| e.to_string())?;
        let r = eval.report;
        check(
            pt.th == t && pt.kept == r.kept && pt.dup_median == r.dup_median && pt.dup_mean == r.dup_mean,
            format!("sweep point {t} disagrees with a direct evaluation"),
        )?;
        if let Some((kept, med, mean, red)) = prev {
            check(r.kept <= kept, format!("kept rises at th={t}: {kept} -> {}", r.kept))?;
            check(r.dup_median >= med, format!("dup_median falls at th={t}"))?;
            check(r.dup_mean >= mean, format!("dup_mean falls at th={t}"))?;
            check(r.reduction_ratio >= red, format!("reduction falls at th={t}"))?;
        }
        prev = Some((r.kept, r.dup_median, r.dup_mean, r.reduction_ratio));
    }
    Ok((curve.points[0].kept, curve.points[50].kept))
}

fn criterion_5() -> Result<String, String> {
    let start = Instant::now();
    let (m, images) = aug_corpus(AugmentRanges::default());
    let (k0, k50) = monotone(&m, &phash_all(&images))?;
    let elapsed = start.elapsed();
    check(elapsed < Duration::from_secs(60), format!("took {elapsed:?}"))?;
    Ok(format!("th 0..50 monotone; kept {k0}->{k50}; {elapsed:.2?}"))
}

fn mild_monotone_info() -> String {
    let (m, images) = aug_corpus(AugmentRanges::mild());
    match monotone(&m, &phash_all(&images)) {
        Ok((k0, k50)) => format!("monotone, kept {k0}->{k50}"),
        Err(e) => e,
    }
}

// 6. Ground-truth quality

/// Quadratic replay of first-seen dedup and group scoring.
fn oracle_scores(m: &Manifest, hashes: &[Hash64], t: u32) -> (usize, usize, f64, f64) {
    let mut kept: Vec<usize> = Vec::new();
    let mut tp = 0;
    let mut discarded = 0;
    for i in 0..hashes.len() {
        let mut best: Option<(u32, usize)> = None;
        for (pos, &k) in kept.iter().enumerate() {
            let d = (hashes[i].bits ^ hashes[k].bits).count_ones();
            if d <= t && best.is_none_or(|b| (d, pos) < b) {
                best = Some((d, pos));
            }
        }
        match best {
            Some((_, pos)) => {
                discarded += 1;
                tp += usize::from(m.records[i].group_id == m.records[kept[pos]].group_id);
            }
            None => kept.push(i),
        }
    }
    let groups: BTreeSet<_> = m.records.iter().map(|r| r.group_id.clone()).collect();
    let precision = if discarded == 0 { 1.0 } else { tp as f64 / discarded as f64 };
    let ideal = m.len() - groups.len();
    let recall = if ideal == 0 { 1.0 } else { tp as f64 / ideal as f64 };
    (kept.len(), tp, precision, recall)
}

// Pinned by replaying the oracle on the seeded corpus: (th, kept, tp).
const PINNED: [(u32, usize, usize); 2] = [(6, 254, 246), (8, 165, 335)];

fn criterion_6() -> Result<String, String> {
    let (m, images) = aug_corpus(AugmentRanges::mild());
    let hashes = phash_all(&images);
    let mut parts = Vec::new();
    for &(t, pinned_kept, pinned_tp) in &PINNED {
        let eval = evaluate_dedup(&m, &hashes, th(t)).map_err(|e| e.to_string())?;
        let score = score_against_groups(&eval.outcome, &m).map_err(|e| e.to_string())?;
        let (kept, tp, precision, recall) = oracle_scores(&m, &hashes, t);
        check(
            eval.report.kept == kept && score.true_positive_discards == tp,
            format!(
                "th={t}: library ({}, {}) vs oracle ({kept}, {tp})",
                eval.report.kept, score.true_positive_discards
            ),
        )?;
        check(
            score.precision == precision && score.recall == recall,
            format!("th={t}: scores differ from oracle"),
        )?;
        check(
            (kept, tp) == (pinned_kept, pinned_tp),
            format!("th={t}: kept {kept} tp {tp} differ from pinned ({pinned_kept}, {pinned_tp})"),
        )?;
        check(precision >= 0.9, format!("th={t}: precision {precision:.4} < 0.9"))?;
        check(recall >= 0.5, format!("th={t}: recall {recall:.4} < 0.5"))?;
        parts.push(format!("th={t} kept={kept} P={precision:.4} R={recall:.4}"));
    }
    Ok(parts.join("; "))
}

fn full_range_info() -> String {
    let (m, images) = aug_corpus(AugmentRanges::default());
    let hashes = phash_all(&images);
    [6, 8]
        .iter()
        .map(|&t| {
            let (kept, _, precision, recall) = oracle_scores(&m, &hashes, t);
            format!("th={t} kept={kept} P={precision:.4} R={recall:.4}")
        })
        .collect::<Vec<_>>()
        .join("; ")
}

// 7 and 8. CIFAR-10

fn cifar10_dir() -> Option<PathBuf> {
    let dir = PathBuf::from(std::env::var_os("DEDUPKIT_CIFAR10_DIR")?);
    let nested = dir.join("cifar-10-batches-bin");
    Some(if nested.is_dir() { nested } else { dir })
}

fn criterion_7(dir: &Path) -> Result<String, String> {
    let start = Instant::now();
    let loaded = dataset::load_cifar10(dir).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let counts = loaded.manifest.counts();
    check(
        (counts.train, counts.val, counts.unsplit) == (50_000, 10_000, 0),
        format!("counts train={} val={}", counts.train, counts.val),
    )?;
    check(elapsed < Duration::from_secs(30), format!("import took {elapsed:?}"))?;

    let raw: Vec<Vec<u8>> = dataset::CIFAR10_TRAIN_FILES
        .iter()
        .chain(std::iter::once(&dataset::CIFAR10_TEST_FILE))
        .map(|f| std::fs::read(dir.join(f)).unwrap())
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..10 {
        let id: usize = rng.random_range(0..60_000);
        let img = &loaded.images[id];
        check(img.width() == 32 && img.height() == 32, format!("record {id} is not 32x32"))?;
        let rec = &raw[id / 10_000][(id % 10_000) * dataset::CIFAR10_RECORD..][..dataset::CIFAR10_RECORD];
        for y in 0..32u32 {
            for x in 0..32u32 {
                let o = 1 + (y * 32 + x) as usize;
                let want = [rec[o], rec[o + 1024], rec[o + 2048]];
                check(img.pixel(x, y) == want, format!("record {id} pixel ({x},{y})"))?;
            }
        }
        check(
            dataset::load_image(&loaded.manifest.records[id].path).map_err(|e| e.to_string())? == *img,
            format!("record {id} locator"),
        )?;
    }

    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let cut = tmp.path().join("data_batch_1.bin");
    std::fs::write(&cut, &raw[0][..raw[0].len() - 1]).unwrap();
    check(
        matches!(dataset::read_cifar_batch(&cut, CifarKind::Ten), Err(DatasetError::TruncatedFile { .. })),
        "truncated batch accepted",
    )?;
    Ok(format!("50000/10000 in {elapsed:.2?}; 10 records match raw planes; truncation rejected"))
}

fn criterion_8(dir: &Path) -> Result<String, String> {
    let loaded = dataset::load_cifar10(dir).map_err(|e| e.to_string())?;
    let m = loaded.manifest;
    let mut parts = Vec::new();
    for algo in HashAlgo::ALL {
        let corpus = Corpus { manifest: m.clone(), images: Some(loaded.images.clone()) };
        let hashes = pipeline::hash_corpus(&corpus, Hasher::new(algo), rayon::current_num_threads())
            .map_err(|e| e.to_string())?;
        let d0 = evaluate_dedup(&m, &hashes, th(0)).map_err(|e| e.to_string())?.report.dup_mean;
        let d12 = evaluate_dedup(&m, &hashes, th(12)).map_err(|e| e.to_string())?.report.dup_mean;
        if algo == HashAlgo::PHash {
            check(d0 <= 1.05, format!("phash Dup(0) = {d0:.4} > 1.05"))?;
        }
        check(d12 > d0, format!("{algo}: Dup(12) {d12:.4} <= Dup(0) {d0:.4}"))?;
        parts.push(format!("{algo} {d0:.3}->{d12:.3}"));
    }
    Ok(parts.join(", "))
}

/// Format-level stand-in for criterion 7: CIFAR-10-layout files with the
/// full record counts, generated locally.
fn cifar_layout_check() -> Result<String, String> {
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut files: Vec<Vec<u8>> = Vec::new();
    for (f, name) in
        dataset::CIFAR10_TRAIN_FILES.iter().chain(std::iter::once(&dataset::CIFAR10_TEST_FILE)).enumerate()
    {
        let mut bytes = vec![0u8; 10_000 * dataset::CIFAR10_RECORD];
        for (i, rec) in bytes.chunks_mut(dataset::CIFAR10_RECORD).enumerate() {
            rec[0] = ((i + f) % 10) as u8;
            for (j, b) in rec[1..].iter_mut().enumerate() {
                *b = (i * 7 + j * 13 + f * 31) as u8;
            }
        }
        std::fs::write(tmp.path().join(name), &bytes).unwrap();
        files.push(bytes);
    }
    let start = Instant::now();
    let loaded = dataset::load_cifar10(tmp.path()).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let c = loaded.manifest.counts();
    check((c.train, c.val) == (50_000, 10_000), format!("counts {} {}", c.train, c.val))?;
    check(elapsed < Duration::from_secs(30), format!("import took {elapsed:?}"))?;
    for id in [0usize, 9_999, 10_000, 31_415, 49_999, 50_000, 59_999] {
        let rec = &files[id / 10_000][(id % 10_000) * dataset::CIFAR10_RECORD..][..dataset::CIFAR10_RECORD];
        let img = &loaded.images[id];
        check(img.pixel(5, 3) == [rec[1 + 101], rec[1025 + 101], rec[2049 + 101]], format!("record {id}"))?;
    }
    let cut = tmp.path().join(dataset::CIFAR10_TEST_FILE);
    std::fs::write(&cut, &files[5][..files[5].len() - 100]).unwrap();
    check(dataset::load_cifar10(tmp.path()).is_err(), "truncated batch accepted")?;
    Ok(format!("synthetic CIFAR-10 layout: 50000/10000 in {elapsed:.2?}, decode and truncation checks"))
}

// 9. Throughput

fn criterion_9() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let images: Vec<RgbImage> = (0..60_000)
        .map(|_| {
            let mut data = vec![0u8; 32 * 32 * 3];
            rng.fill(&mut data[..]);
            RgbImage::new(32, 32, data).unwrap()
        })
        .collect();
    let h = Hasher::new(HashAlgo::PHash);
    let start = Instant::now();
    let mut acc = 0u64;
    for img in &images {
        acc ^= h.hash(img).bits;
    }
    let elapsed = start.elapsed();
    std::hint::black_box(acc);
    check(elapsed < Duration::from_secs(60), format!("took {elapsed:?}"))?;
    Ok(format!("60000 PHash single-threaded in {elapsed:.2?}"))
}

fn run(f: impl FnOnce() -> Result<String, String>) -> Verdict {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(s)) => Verdict::Pass(s),
        Ok(Err(s)) => Verdict::Fail(s),
        Err(_) => Verdict::Fail("panicked".into()),
    }
}

fn main() {
    let cifar = cifar10_dir();
    let missing = || Verdict::NotRun("set DEDUPKIT_CIFAR10_DIR to the CIFAR-10 binary distribution".into());
    let results = vec![
        ("1 index oracle equivalence", run(criterion_1)),
        ("2 spectral exactness", run(criterion_2)),
        ("3 hash fixed points", run(criterion_3)),
        ("4 dedup semantics", run(criterion_4)),
        ("5 threshold monotonicity", run(criterion_5)),
        ("6 ground-truth quality", run(criterion_6)),
        ("7 CIFAR-10 parser", cifar.as_deref().map_or_else(missing, |d| run(|| criterion_7(d)))),
        ("8 CIFAR-10 dup trend", cifar.as_deref().map_or_else(missing, |d| run(|| criterion_8(d)))),
        ("9 PHash throughput", run(criterion_9)),
    ];
    let mut failed = 0;
    for (name, v) in &results {
        match v {
            Verdict::Pass(s) => line(&format!("PASS    {name}: {s}")),
            Verdict::Fail(s) => {
                failed += 1;
                line(&format!("FAIL    {name}: {s}"));
            }
            Verdict::NotRun(s) => line(&format!("NOT RUN {name}: {s}")),
        }
    }
    match run(cifar_layout_check) {
        Verdict::Pass(s) => line(&format!("info    {s}")),
        Verdict::Fail(s) | Verdict::NotRun(s) => {
            failed += 1;
            line(&format!("FAIL    CIFAR-10 layout check: {s}"));
        }
    }
    line(&format!("info    full augmentation ranges, PHash: {}", full_range_info()));
    line(&format!("info    mild augmentation ranges, th 0..50: {}", mild_monotone_info()));
    if failed > 0 {
        line(&format!("{failed} check(s) failed"));
        std::process::exit(1);
    }
}
