//! Single-threaded, in-memory implementation of the cleaning run. Slow and
//! memory-hungry; it exists to check [`super::run`] against.

use std::path::Path;
use std::time::Instant;

use rustc_hash::FxHashSet;

use super::report::{CorpusStats, RejectionReport, ShardReport, ShardSummary};
use super::{output_shard_name, prepare_out_dir, write_reports, DedupMode, MalformedPolicy, PipelineConfig, PipelineError};
use crate::corpus_io::{write_shard, ShardReader};
use crate::document_filters::{dedup_pass, span_keys, CleanDocument, SpanKey};
use crate::segmenter::count_words;

/// Runs the whole pipeline one document at a time, writing the same files
/// as [`super::run`].
pub fn run(cfg: &PipelineConfig) -> Result<CorpusStats, PipelineError> {
    let started = Instant::now();
    let (manifest, filters) = cfg.prepare()?;
    prepare_out_dir(&cfg.out_dir)?;

    let mut summaries = Vec::new();
    let mut candidates: Vec<CleanDocument> = Vec::new();
    for shard in &manifest.shards {
        let reader = ShardReader::open(&shard.path, cfg.max_record_bytes)?;
        let mut summary = ShardSummary::new(shard, reader.compression());
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
                candidates.push(doc);
            }
        }
        summaries.push(summary);
    }

    let mut reports: Vec<ShardReport> = summaries.iter().map(ShardReport::from_summary).collect();
    let mut kept: Vec<Vec<CleanDocument>> = vec![Vec::new(); manifest.len()];
    let mut claimed_keys: FxHashSet<SpanKey> = FxHashSet::default();
    let verdicts: Box<dyn Iterator<Item = _>> = match cfg.dedup {
        DedupMode::Doc => Box::new(dedup_pass(candidates)),
        DedupMode::Off => Box::new(candidates.into_iter().map(Ok)),
    };
    for v in verdicts {
        match v {
            Ok(doc) => {
                let shard = doc.provenance.shard;
                if cfg.dedup == DedupMode::Doc {
                    claimed_keys.extend(span_keys(&doc.sentences));
                }
                reports[shard].add_output(doc.sentence_count as u64, count_words(&doc.text).0 as u64, doc.text.len() as u64);
                kept[shard].push(doc);
            }
            Err((doc, reason)) => reports[doc.provenance.shard].document_rejections.add(reason),
        }
    }

    for shard in &manifest.shards {
        let path = Path::new(&cfg.out_dir).join(output_shard_name(shard.index, cfg.gzip));
        write_shard(&path, &kept[shard.index])?;
    }
    let report = RejectionReport::from_shards(reports);
    let mut stats = CorpusStats::from_report(&report);
    stats.dedup_claimed_keys = claimed_keys.len() as u64;
    stats.wall_time_secs = started.elapsed().as_secs_f64();
    write_reports(&cfg.out_dir, &manifest, cfg.gzip, &stats, &report)?;
    Ok(stats)
}
