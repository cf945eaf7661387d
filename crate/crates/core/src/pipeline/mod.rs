//! End-to-end cleaning runs over a manifest of shards.
//!
//! [`run`] works in three phases. Phase 1 cleans every shard in parallel and
//! leaves, per shard, the serialized candidate documents plus their span keys
//! in a work directory. Phase 2 walks the keys in global (shard, record)
//! order on one thread and decides which candidates survive deduplication.
//! Phase 3 copies the survivors into the output shards, again in parallel.
//! The result is byte-identical to [`reference::run`] for any worker count.
//!
//! A `_PARTIAL` marker in the output directory records the configuration
//! fingerprint while a run is in flight; a later run with the same
//! fingerprint reuses every shard phase 1 already finished.

mod config;
pub mod reference;
mod report;
mod subset;
mod work;

use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;

use crate::corpus_io::{record_line, Manifest, ShardError, ShardReader, ShardRef, ShardWriter};
use crate::document_filters::{span_keys, ClaimedSpans, DocumentReason};
use crate::segmenter::count_words;

pub use config::{DedupMode, Filters, MalformedPolicy, PipelineConfig};
pub use report::{CorpusStats, RejectionReport, ShardReport, ShardSummary};
pub use subset::{select_validation_subset, word_count, SelectedDocument, DEFAULT_VALIDATION_SIZE};
use work::{CandidateMeta, KeysReader, KeysWriter};

pub const PARTIAL_MARKER: &str = "_PARTIAL";
pub const STATS_FILE: &str = "stats.json";
pub const REJECTIONS_FILE: &str = "rejections.json";
pub const OUTPUT_MANIFEST: &str = "manifest.txt";
const WORK_DIR: &str = ".work";

#[derive(Debug, thiserror::Error)]
pub enum PipelineError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Shard(#[from] ShardError),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("corpus has {available} documents, {requested} requested")]
    CorpusTooSmall { available: u64, requested: usize },
}

impl PipelineError {
    pub fn is_config(&self) -> bool {
        matches!(self, PipelineError::Config(_))
    }

    pub(crate) fn io(path: &Path, source: std::io::Error) -> Self {
        PipelineError::Io { path: path.to_path_buf(), source }
    }
}

/// Name of the output shard for input shard `index`.
pub fn output_shard_name(index: usize, gzip: bool) -> String {
    format!("shard-{index:05}.jsonl{}", if gzip { ".gz" } else { "" })
}

fn is_output_shard_name(name: &str) -> bool {
    let Some(rest) = name.strip_prefix("shard-") else { return false };
    let digits = rest.strip_suffix(".jsonl").or_else(|| rest.strip_suffix(".jsonl.gz"));
    digits.is_some_and(|d| !d.is_empty() && d.bytes().all(|b| b.is_ascii_digit()))
}

/// Removes output shards left by an earlier run so stale files never mix
/// with fresh ones.
pub(crate) fn prepare_out_dir(out_dir: &Path) -> Result<(), PipelineError> {
    fs::create_dir_all(out_dir).map_err(|e| PipelineError::io(out_dir, e))?;
    let entries = fs::read_dir(out_dir).map_err(|e| PipelineError::io(out_dir, e))?;
    for entry in entries {
        let entry = entry.map_err(|e| PipelineError::io(out_dir, e))?;
        let name = entry.file_name();
        if name.to_str().is_some_and(is_output_shard_name) {
            fs::remove_file(entry.path()).map_err(|e| PipelineError::io(&entry.path(), e))?;
        }
    }
    Ok(())
}

fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), PipelineError> {
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, bytes).map_err(|e| PipelineError::io(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| PipelineError::io(path, e))
}

/// Writes the reports and the output manifest shared by both runners.
pub(crate) fn write_reports(
    out_dir: &Path,
    manifest: &Manifest,
    gzip: bool,
    stats: &CorpusStats,
    report: &RejectionReport,
) -> Result<(), PipelineError> {
    let mut stats_json = serde_json::to_vec_pretty(stats).expect("stats serialize");
    stats_json.push(b'\n');
    write_atomic(&out_dir.join(STATS_FILE), &stats_json)?;
    let mut report_json = serde_json::to_vec_pretty(report).expect("report serializes");
    report_json.push(b'\n');
    write_atomic(&out_dir.join(REJECTIONS_FILE), &report_json)?;
    let out_manifest = Manifest::from_paths(manifest.shards.iter().map(|s| output_shard_name(s.index, gzip)));
    let path = out_dir.join(OUTPUT_MANIFEST);
    out_manifest.write(&path).map_err(|e| PipelineError::io(&path, e))
}

struct WorkPaths {
    cand: PathBuf,
    keys: PathBuf,
    summary: PathBuf,
}

impl WorkPaths {
    fn new(work: &Path, index: usize) -> Self {
        WorkPaths {
            cand: work.join(format!("shard-{index:05}.cand")),
            keys: work.join(format!("shard-{index:05}.keys")),
            summary: work.join(format!("shard-{index:05}.summary.json")),
        }
    }
}

/// Phase 1 for one shard: clean every record, spill candidates and their
/// keys, and finish by atomically writing the shard summary.
fn clean_shard(shard: &ShardRef, filters: &Filters, cfg: &PipelineConfig, work: &Path) -> Result<ShardSummary, PipelineError> {
    let paths = WorkPaths::new(work, shard.index);
    if let Ok(bytes) = fs::read(&paths.summary) {
        if let Ok(summary) = serde_json::from_slice::<ShardSummary>(&bytes) {
            log::info!("shard {}: reusing finished phase 1", shard.index);
            return Ok(summary);
        }
    }
    let reader = ShardReader::open(&shard.path, cfg.max_record_bytes)?;
    let mut summary = ShardSummary::new(shard, reader.compression());
    let cand_file = fs::File::create(&paths.cand).map_err(|e| PipelineError::io(&paths.cand, e))?;
    let mut cand = BufWriter::with_capacity(256 * 1024, cand_file);
    let mut keys = KeysWriter::create(&paths.keys)?;
    for item in reader {
        let (record, raw) = match item {
            Ok(r) => r,
            Err(e) if e.is_parse() && cfg.on_malformed == MalformedPolicy::Skip => {
                summary.note_parse_error(&e);
                continue;
            }
            Err(e) => return Err(e.into()),
        };
        let outcome = filters.process(&raw, shard.index, record);
        summary.add_outcome(&raw, &outcome);
        if let Ok(doc) = outcome.verdict {
            cand.write_all(&record_line(&doc.text, &doc.url, &doc.timestamp))
                .and_then(|()| cand.write_all(b"\n"))
                .map_err(|e| PipelineError::io(&paths.cand, e))?;
            let meta = CandidateMeta {
                sentences: doc.sentence_count as u64,
                words: count_words(&doc.text).0 as u64,
                bytes: doc.text.len() as u64,
            };
            let k = if cfg.dedup == DedupMode::Doc { span_keys(&doc.sentences) } else { Vec::new() };
            keys.write(&meta, &k)?;
        }
    }
    cand.flush().map_err(|e| PipelineError::io(&paths.cand, e))?;
    keys.finish()?;
    write_atomic(&paths.summary, &serde_json::to_vec(&summary).expect("summary serializes"))?;
    log::info!(
        "shard {}: {} documents in, {} candidates",
        shard.index,
        summary.documents_in,
        summary.candidates
    );
    Ok(summary)
}

/// Phase 3 for one shard: copy the surviving candidate lines.
fn write_shard_output(index: usize, keep: &[bool], cfg: &PipelineConfig, work: &Path) -> Result<(), PipelineError> {
    let paths = WorkPaths::new(work, index);
    let input = fs::File::open(&paths.cand).map_err(|e| PipelineError::io(&paths.cand, e))?;
    let mut input = BufReader::with_capacity(256 * 1024, input);
    let name = output_shard_name(index, cfg.gzip);
    let tmp = work.join(format!("{name}.tmp{}", if cfg.gzip { ".gz" } else { "" }));
    let mut out = ShardWriter::create(&tmp)?;
    let mut line = Vec::new();
    for &k in keep {
        line.clear();
        input.read_until(b'\n', &mut line).map_err(|e| PipelineError::io(&paths.cand, e))?;
        if line.pop() != Some(b'\n') {
            return Err(PipelineError::io(
                &paths.cand,
                std::io::Error::new(std::io::ErrorKind::UnexpectedEof, "candidate file truncated"),
            ));
        }
        if k {
            out.write_raw_line(&line)?;
        }
    }
    out.finish()?;
    let dest = cfg.out_dir.join(name);
    fs::rename(&tmp, &dest).map_err(|e| PipelineError::io(&dest, e))
}

/// Cleans every shard of the manifest into `cfg.out_dir`.
pub fn run(cfg: &PipelineConfig) -> Result<CorpusStats, PipelineError> {
    let started = Instant::now();
    let (manifest, filters) = cfg.prepare()?;
    let fingerprint = cfg.fingerprint(&manifest)?;
    let marker = cfg.out_dir.join(PARTIAL_MARKER);
    let work = cfg.out_dir.join(WORK_DIR);
    fs::create_dir_all(&cfg.out_dir).map_err(|e| PipelineError::io(&cfg.out_dir, e))?;
    let resumable = fs::read_to_string(&marker).is_ok_and(|m| m.trim() == fingerprint);
    if resumable {
        log::info!("resuming partial run in {}", cfg.out_dir.display());
    } else if work.exists() {
        fs::remove_dir_all(&work).map_err(|e| PipelineError::io(&work, e))?;
    }
    fs::create_dir_all(&work).map_err(|e| PipelineError::io(&work, e))?;
    fs::write(&marker, format!("{fingerprint}\n")).map_err(|e| PipelineError::io(&marker, e))?;
    prepare_out_dir(&cfg.out_dir)?;

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| PipelineError::Config(format!("worker pool: {e}")))?;

    let phase1: Vec<Result<ShardSummary, PipelineError>> =
        pool.install(|| manifest.shards.par_iter().map(|s| clean_shard(s, &filters, cfg, &work)).collect());
    let summaries: Vec<ShardSummary> = phase1.into_iter().collect::<Result<_, _>>()?;

    // phase 2: first claims in global order
    let mut claimed = ClaimedSpans::new();
    let mut keeps: Vec<Vec<bool>> = Vec::with_capacity(summaries.len());
    let mut reports: Vec<ShardReport> = Vec::with_capacity(summaries.len());
    for summary in &summaries {
        let paths = WorkPaths::new(&work, summary.index);
        let mut reader = KeysReader::open(&paths.keys)?;
        let mut keep = Vec::with_capacity(summary.candidates as usize);
        let mut report = ShardReport::from_summary(summary);
        while let Some((meta, keys)) = reader.next()? {
            let admitted = cfg.dedup == DedupMode::Off || claimed.admit(&keys);
            if admitted {
                report.add_output(meta.sentences, meta.words, meta.bytes);
            } else {
                report.document_rejections.add(DocumentReason::Duplicate);
            }
            keep.push(admitted);
        }
        if keep.len() as u64 != summary.candidates {
            return Err(PipelineError::io(
                &paths.keys,
                std::io::Error::new(std::io::ErrorKind::InvalidData, "key file disagrees with summary"),
            ));
        }
        keeps.push(keep);
        reports.push(report);
    }

    let phase3: Vec<Result<(), PipelineError>> = pool.install(|| {
        summaries
            .par_iter()
            .zip(keeps.par_iter())
            .map(|(s, keep)| write_shard_output(s.index, keep, cfg, &work))
            .collect()
    });
    phase3.into_iter().collect::<Result<Vec<()>, _>>()?;

    let report = RejectionReport::from_shards(reports);
    let mut stats = CorpusStats::from_report(&report);
    stats.dedup_claimed_keys = claimed.len() as u64;
    stats.dedup_claimed_bytes = claimed.approx_bytes() as u64;
    stats.wall_time_secs = started.elapsed().as_secs_f64();
    write_reports(&cfg.out_dir, &manifest, cfg.gzip, &stats, &report)?;
    fs::remove_dir_all(&work).map_err(|e| PipelineError::io(&work, e))?;
    fs::remove_file(&marker).map_err(|e| PipelineError::io(&marker, e))?;
    Ok(stats)
}
