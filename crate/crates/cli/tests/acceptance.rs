//! Acceptance suite: one PASS/FAIL line per criterion. Runs without the
//! test harness so every criterion reports even when an earlier one fails.

#[path = "../../core/tests/support/rules.rs"]
mod rules;

use std::collections::BTreeMap;
use std::fs;
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use corpusforge_core::histogram::Reason;
use corpusforge_core::langid::Detector;
use corpusforge_core::pipeline::{self, reference, CorpusStats, Filters, PipelineConfig, STATS_FILE};
use corpusforge_core::span_corruption::{corrupt, reconstruct, CorruptionConfig, CorruptionExample};
use corpusforge_core::tokenizer::{
    corpus_loglik, em_step, is_sentinel, normalize, seed_vocab, ScoredPiece, UnigramTrainer, UnigramVocab, WordCounts, EOS_ID,
};
use corpusforge_core::{DocumentReason, SentenceReason};
use corpusforge_testkit::cases::{boundary_cases, document_cases, sentence_cases};
use corpusforge_testkit::oracle::{ab_strings, best_segmentation_score, TOY_PIECES};
use corpusforge_testkit::rng::Rng;
use corpusforge_testkit::{fixture, mixed_dir, mixed_manifest, tokcorpus, web, HELDOUT_FILE};

type Verdict = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn config(manifest: &Path, out: &Path, workers: usize) -> PipelineConfig {
    PipelineConfig { workers, ..PipelineConfig::new(manifest, out) }
}

fn output_files(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.is_file() && p.file_name().unwrap() != STATS_FILE)
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), fs::read(&p).unwrap()))
        .collect()
}

fn oracle_equivalence() -> Verdict {
    let ref_dir = tempfile::tempdir().unwrap();
    let want = reference::run(&config(&mixed_manifest(), ref_dir.path(), 1)).map_err(|e| e.to_string())?;
    let want_files = output_files(ref_dir.path());
    let mut slowest = Duration::ZERO;
    for workers in 1..=16 {
        let dir = tempfile::tempdir().unwrap();
        let start = Instant::now();
        let got = pipeline::run(&config(&mixed_manifest(), dir.path(), workers)).map_err(|e| e.to_string())?;
        slowest = slowest.max(start.elapsed());
        ensure(got.deterministic() == want.deterministic(), || format!("stats differ at {workers} workers"))?;
        ensure(output_files(dir.path()) == want_files, || format!("output bytes differ at {workers} workers"))?;
    }
    let e: serde_json::Value = serde_json::from_str(&fs::read_to_string(mixed_dir().join("expected.json")).unwrap()).unwrap();
    for &r in SentenceReason::ALL {
        let planted = e["sentence_rejections"][r.name()].as_u64().unwrap();
        ensure(want.sentence_rejections[r] == planted, || format!("{}: {} vs planted {planted}", r.name(), want.sentence_rejections[r]))?;
    }
    for &r in DocumentReason::ALL {
        let planted = e["document_rejections"][r.name()].as_u64().unwrap();
        ensure(want.document_rejections[r] == planted, || format!("{}: {} vs planted {planted}", r.name(), want.document_rejections[r]))?;
    }
    ensure(want.documents_out == e["documents_out"].as_u64().unwrap(), || "documents_out differs from plan".into())?;
    ensure(slowest < Duration::from_secs(10), || format!("slowest run took {slowest:?}"))?;
    Ok(format!("workers 1-16 identical to reference, histogram matches plan, slowest run {:.2}s", slowest.as_secs_f64()))
}

fn rule_coverage() -> Verdict {
    let filters = Filters::builtin();
    let cases: Vec<_> = sentence_cases().into_iter().chain(document_cases()).collect();
    let rules = SentenceReason::ALL.iter().map(|r| r.name()).chain(DocumentReason::ALL.iter().map(|r| r.name()));
    for rule in rules {
        let pos = cases.iter().filter(|c| c.rule == rule && c.positive()).count();
        let neg = cases.iter().filter(|c| c.rule == rule && !c.positive()).count();
        ensure(pos >= 3 && neg >= 3, || format!("{rule}: {pos} positive, {neg} negative cases"))?;
    }
    let failed = rules::failures(&filters, &cases);
    ensure(failed.is_empty(), || failed.join("; "))?;
    Ok(format!("{} cases over 10 rules", cases.len()))
}

fn boundaries() -> Verdict {
    let cases = boundary_cases();
    let failed = rules::failures(&Filters::builtin(), &cases);
    ensure(failed.is_empty(), || failed.join("; "))?;
    Ok(format!("{} boundary cases exact", cases.len()))
}

fn language_id() -> Verdict {
    let det = Detector::builtin();
    let mut correct = 0;
    let mut total = 0;
    let mut worst_norm: f64 = 0.0;
    for line in fs::read_to_string(fixture(HELDOUT_FILE)).unwrap().lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        let text = v["text"].as_str().unwrap();
        let post = det.posteriors(text).map_err(|e| e.to_string())?;
        worst_norm = worst_norm.max((post.iter().map(|p| p.1).sum::<f64>() - 1.0).abs());
        let best = post.iter().fold(&post[0], |b, p| if p.1 > b.1 { p } else { b });
        correct += usize::from(best.0 == v["lang"].as_str().unwrap());
        total += 1;
    }
    let acc = correct as f64 / total as f64;
    ensure(total == 200, || format!("{total} snippets"))?;
    ensure(acc >= 0.95, || format!("accuracy {acc:.3}"))?;
    ensure(worst_norm <= 1e-9, || format!("posterior sum off by {worst_norm:e}"))?;
    Ok(format!("accuracy {:.1}% ({correct}/{total}), max |sum-1| {worst_norm:.1e}", 100.0 * acc))
}

fn tokenizer() -> Verdict {
    let start = Instant::now();
    // (a) EM monotone over 20 iterations
    let lines = tokcorpus::lines(150_000, 3);
    let corpus = WordCounts::from_texts(lines.iter().map(String::as_str));
    let mut pieces = seed_vocab(&corpus, 3000, 8).map_err(|e| e.to_string())?;
    let mut history = Vec::new();
    for _ in 0..20 {
        let (next, ll) = em_step(&pieces, &corpus).map_err(|e| e.to_string())?;
        history.push(ll);
        pieces = next;
    }
    history.push(corpus_loglik(&pieces, &corpus).map_err(|e| e.to_string())?);
    for w in history.windows(2) {
        ensure(w[1] >= w[0] - 1e-9 * w[0].abs(), || format!("loglik fell {} -> {}", w[0], w[1]))?;
    }
    // (b) Viterbi against exhaustive search
    let mut rng = Rng::new(15);
    let toy: Vec<ScoredPiece> =
        TOY_PIECES.iter().map(|p| ScoredPiece::new(*p, -1.0 - (rng.next_u64() % 1_000_000) as f64 / 200_000.0)).collect();
    let lp = |s: &str| toy.iter().find(|p| p.piece == s).map(|p| p.logprob);
    let vocab = UnigramVocab::from_pieces(toy.clone(), false);
    let strings = ab_strings(12);
    for s in &strings {
        let seg = vocab.encode_word(s).map_err(|e| e.to_string())?;
        let best = best_segmentation_score(s, &lp);
        ensure((seg.score - best).abs() < 1e-9, || format!("{s}: {} vs {best}", seg.score))?;
    }
    // (c) decode . encode = normalize on 10k lines
    let train = tokcorpus::lines(300_000, 4);
    let small = UnigramTrainer::with_vocab_size(1200)
        .train(&WordCounts::from_texts(train.iter().map(String::as_str)))
        .map_err(|e| e.to_string())?;
    let mut test_lines = tokcorpus::lines(3_000_000, 5);
    test_lines.truncate(10_000);
    for (i, line) in test_lines.iter_mut().enumerate() {
        if i % 25 == 0 {
            line.push_str("  漢字\tと 🚀 ∑x²");
        }
    }
    for line in &test_lines {
        let ids = small.encode(line).map_err(|e| e.to_string())?.piece_ids;
        ensure(small.decode(&ids).map_err(|e| e.to_string())? == normalize(line), || format!("round trip failed: {line}"))?;
    }
    // (d) 5 MB corpus, target 2000
    let big = tokcorpus::lines(5_000_000, 12);
    let bytes: usize = big.iter().map(|l| l.len() + 1).sum();
    let t = Instant::now();
    let trained = UnigramTrainer::with_vocab_size(2000)
        .train(&WordCounts::from_texts(big.iter().map(String::as_str)))
        .map_err(|e| e.to_string())?;
    let train_time = t.elapsed();
    ensure(trained.len() == 2000, || format!("vocab of {} pieces", trained.len()))?;
    let total = start.elapsed();
    ensure(total < Duration::from_secs(120), || format!("took {total:?}"))?;
    Ok(format!(
        "EM monotone over 20 iterations, Viterbi exact on {} strings, 10000 round trips, {:.1} MB -> {} pieces in {:.1}s, total {:.1}s",
        strings.len(),
        bytes as f64 / 1e6,
        trained.len(),
        train_time.as_secs_f64(),
        total.as_secs_f64()
    ))
}

fn span_corruption() -> Verdict {
    let mut rng = Rng::new(10_000);
    let base = CorruptionConfig { seed: 9, ..Default::default() };
    for i in 0..10_000u64 {
        let len = rng.range(1, 512);
        let toks: Vec<u32> = (0..len).map(|_| rng.range(103, 31_999) as u32).collect();
        let ex = corrupt(&toks, &base.for_example(i)).map_err(|e| e.to_string())?;
        ensure(reconstruct(&ex.input_ids, &ex.target_ids).map_err(|e| e.to_string())? == toks, || format!("sequence {i}"))?;
    }
    let mut masked = 0;
    for i in 0..1000u64 {
        let toks: Vec<u32> = (0..512).map(|_| rng.range(103, 31_999) as u32).collect();
        let ex = corrupt(&toks, &CorruptionConfig { seed: 1, ..Default::default() }.for_example(i)).map_err(|e| e.to_string())?;
        masked += ex.target_ids.iter().filter(|&&id| id != EOS_ID && !is_sentinel(id)).count();
    }
    let rate = masked as f64 / (512.0 * 1000.0);
    ensure((rate - 0.15).abs() <= 0.02, || format!("mask rate {rate}"))?;
    let golden = Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/golden/span_corruption_seed42.jsonl");
    let want: Vec<CorruptionExample> =
        fs::read_to_string(&golden).unwrap().lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    let cfg = CorruptionConfig { seed: 42, ..Default::default() };
    for (i, (len, ex)) in [1usize, 2, 5, 10, 37, 100, 256, 512].iter().zip(&want).enumerate() {
        let toks: Vec<u32> = (0..*len).map(|j| 1000 + ((i * 7919 + j * 31) % 30_000) as u32).collect();
        ensure(&corrupt(&toks, &cfg.for_example(i as u64)).unwrap() == ex, || format!("golden example {i} differs"))?;
    }
    Ok(format!("10000 round trips, mask rate {rate:.4} at length 512, {} golden examples stable", want.len()))
}

fn write_web_shards(dir: &Path, total_bytes: u64, shards: usize, seed: u64) -> (PathBuf, web::WebPlan) {
    let mut names = String::new();
    let mut plan = web::WebPlan::default();
    for i in 0..shards {
        let name = format!("web-{i:02}.jsonl");
        let mut f = BufWriter::new(fs::File::create(dir.join(&name)).unwrap());
        let p = web::write_corpus(&mut f, total_bytes / shards as u64, seed + i as u64).unwrap();
        plan.documents += p.documents;
        plan.text_bytes += p.text_bytes;
        plan.planted_bytes += p.planted_bytes;
        plan.file_bytes += p.file_bytes;
        names.push_str(&name);
        names.push('\n');
    }
    let manifest = dir.join("manifest.txt");
    fs::write(&manifest, names).unwrap();
    (manifest, plan)
}

fn roughly_halved() -> Verdict {
    let dir = tempfile::tempdir().unwrap();
    let (manifest, plan) = write_web_shards(dir.path(), 50_000_000, 8, 500);
    let out = dir.path().join("out");
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get());
    let stats = pipeline::run(&config(&manifest, &out, workers)).map_err(|e| e.to_string())?;
    let kept = stats.retained_bytes_fraction();
    ensure((0.35..=0.65).contains(&kept), || format!("retained {kept:.3}"))?;
    Ok(format!(
        "{:.1} MB fixture, {:.1}% planted, {:.1}% of text bytes retained",
        plan.file_bytes as f64 / 1e6,
        100.0 * plan.planted_fraction(),
        100.0 * kept
    ))
}

/// Runs the binary and returns its peak resident set size in bytes.
fn run_measuring_rss(cmd: &mut Command) -> Result<(std::process::ExitStatus, u64), String> {
    use std::os::unix::process::ExitStatusExt;
    let child = cmd.spawn().map_err(|e| e.to_string())?;
    let pid = child.id() as libc::pid_t;
    let mut status = 0;
    // SAFETY: rusage is plain old data; wait4 reaps our own child
    let mut usage: libc::rusage = unsafe { std::mem::zeroed() };
    let r = unsafe { libc::wait4(pid, &mut status, 0, &mut usage) };
    if r != pid {
        return Err(format!("wait4: {}", std::io::Error::last_os_error()));
    }
    std::mem::forget(child);
    Ok((std::process::ExitStatus::from_raw(status), usage.ru_maxrss as u64 * 1024))
}

fn streaming_memory() -> Verdict {
    const LIMIT: u64 = 256 << 20;
    let dir = tempfile::tempdir().unwrap();
    let (manifest, plan) = write_web_shards(dir.path(), 500_000_000, 1, 5000);
    let out = dir.path().join("out");
    let start = Instant::now();
    let (status, peak) = run_measuring_rss(
        Command::new(env!("CARGO_BIN_EXE_corpusforge"))
            .args(["clean", "--manifest", manifest.to_str().unwrap(), "--out", out.to_str().unwrap(), "--workers", "1"])
            .env_remove("CORPUSFORGE_RESOURCES")
            .stderr(std::process::Stdio::null()),
    )?;
    let secs = start.elapsed().as_secs_f64();
    ensure(status.success(), || format!("clean exited with {status}"))?;
    let stats: CorpusStats = serde_json::from_str(&fs::read_to_string(out.join(STATS_FILE)).unwrap()).unwrap();
    let dedup = stats.dedup_claimed_bytes;
    let excluding = peak.saturating_sub(dedup);
    let mib = |b: u64| b as f64 / (1 << 20) as f64;
    ensure(excluding < LIMIT, || format!("peak {:.1} MiB, dedup set {:.1} MiB, rest {:.1} MiB", mib(peak), mib(dedup), mib(excluding)))?;
    Ok(format!(
        "{:.0} MB shard in {secs:.0}s: peak RSS {:.1} MiB, dedup set {:.1} MiB reported separately, {:.1} MiB excluding it",
        plan.file_bytes as f64 / 1e6,
        mib(peak),
        mib(dedup),
        mib(excluding)
    ))
}

fn main() {
    // `cargo test -- <filter>` passes arguments; run only matching criteria
    let filters: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let criteria: [(&str, fn() -> Verdict); 8] = [
        ("oracle equivalence", oracle_equivalence),
        ("rule coverage", rule_coverage),
        ("boundary exactness", boundaries),
        ("language id", language_id),
        ("tokenizer", tokenizer),
        ("span corruption", span_corruption),
        ("roughly halved", roughly_halved),
        ("streaming memory", streaming_memory),
    ];
    let mut failed = 0;
    for (n, (name, check)) in criteria.iter().enumerate() {
        if !filters.is_empty() && !filters.iter().any(|f| name.contains(f.as_str())) {
            continue;
        }
        let start = Instant::now();
        let verdict = std::panic::catch_unwind(check).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        let secs = start.elapsed().as_secs_f64();
        match verdict {
            Ok(detail) => println!("PASS [{}] {name} ({secs:.1}s): {detail}", n + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL [{}] {name} ({secs:.1}s): {why}", n + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
