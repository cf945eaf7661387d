use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use super::config::DocOutcome;
use crate::corpus_io::{Compression, RawDocument, ShardError, ShardRef};
use crate::document_filters::DocumentHistogram;
use crate::sentence_filters::SentenceHistogram;

/// Parse errors kept verbatim per shard; the rest are only counted.
const MAX_ERROR_SAMPLES: usize = 20;

/// Phase-1 totals for one shard (before deduplication).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShardSummary {
    pub index: usize,
    pub path: PathBuf,
    pub compression: Compression,
    pub documents_in: u64,
    pub parse_errors: u64,
    pub parse_error_samples: Vec<String>,
    pub sentences_in: u64,
    pub sentences_kept: u64,
    pub bytes_in: u64,
    pub candidates: u64,
    pub sentence_rejections: SentenceHistogram,
    pub document_rejections: DocumentHistogram,
}

impl ShardSummary {
    pub fn new(shard: &ShardRef, compression: Compression) -> Self {
        ShardSummary {
            index: shard.index,
            path: shard.path.clone(),
            compression,
            documents_in: 0,
            parse_errors: 0,
            parse_error_samples: Vec::new(),
            sentences_in: 0,
            sentences_kept: 0,
            bytes_in: 0,
            candidates: 0,
            sentence_rejections: SentenceHistogram::new(),
            document_rejections: DocumentHistogram::new(),
        }
    }

    pub fn note_parse_error(&mut self, e: &ShardError) {
        self.parse_errors += 1;
        if self.parse_error_samples.len() < MAX_ERROR_SAMPLES {
            self.parse_error_samples.push(e.to_string());
        }
    }

    pub fn add_outcome(&mut self, raw: &RawDocument, outcome: &DocOutcome) {
        self.documents_in += 1;
        self.bytes_in += raw.text.len() as u64;
        self.sentences_in += outcome.sentences_in;
        self.sentences_kept += outcome.sentences_kept;
        self.sentence_rejections += &outcome.sentence_rejections;
        match &outcome.verdict {
            Ok(_) => self.candidates += 1,
            Err(reason) => self.document_rejections.add(*reason),
        }
    }
}

/// Final per-shard accounting, as written to the rejection report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShardReport {
    pub index: usize,
    pub path: PathBuf,
    pub compression: Compression,
    pub documents_in: u64,
    pub documents_out: u64,
    pub parse_errors: u64,
    pub parse_error_samples: Vec<String>,
    pub sentences_in: u64,
    pub sentences_kept: u64,
    pub sentences_out: u64,
    pub bytes_in: u64,
    pub bytes_out: u64,
    pub words_out: u64,
    pub sentence_rejections: SentenceHistogram,
    pub document_rejections: DocumentHistogram,
}

impl ShardReport {
    pub fn from_summary(s: &ShardSummary) -> Self {
        ShardReport {
            index: s.index,
            path: s.path.clone(),
            compression: s.compression,
            documents_in: s.documents_in,
            documents_out: 0,
            parse_errors: s.parse_errors,
            parse_error_samples: s.parse_error_samples.clone(),
            sentences_in: s.sentences_in,
            sentences_kept: s.sentences_kept,
            sentences_out: 0,
            bytes_in: s.bytes_in,
            bytes_out: 0,
            words_out: 0,
            sentence_rejections: s.sentence_rejections.clone(),
            document_rejections: s.document_rejections.clone(),
        }
    }

    pub fn add_output(&mut self, sentences: u64, words: u64, bytes: u64) {
        self.documents_out += 1;
        self.sentences_out += sentences;
        self.words_out += words;
        self.bytes_out += bytes;
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct RejectionTotals {
    pub sentence: SentenceHistogram,
    pub document: DocumentHistogram,
}

/// Per-reason counts for the whole run plus the per-shard breakdown.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct RejectionReport {
    pub totals: RejectionTotals,
    pub shards: Vec<ShardReport>,
}

impl RejectionReport {
    pub fn from_shards(shards: Vec<ShardReport>) -> Self {
        let mut totals = RejectionTotals::default();
        for s in &shards {
            totals.sentence += &s.sentence_rejections;
            totals.document += &s.document_rejections;
        }
        RejectionReport { totals, shards }
    }
}

/// Corpus-level counts of a run. Byte counts are UTF-8 bytes of document
/// text; `sentences_kept` counts sentences that passed the sentence rules,
/// `sentences_out` those inside emitted documents.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct CorpusStats {
    pub shards: u64,
    pub documents_in: u64,
    pub documents_out: u64,
    pub parse_errors: u64,
    pub sentences_in: u64,
    pub sentences_kept: u64,
    pub sentences_out: u64,
    pub bytes_in: u64,
    pub bytes_out: u64,
    pub words_out: u64,
    pub sentence_rejections: SentenceHistogram,
    pub document_rejections: DocumentHistogram,
    /// Span keys held by the deduplication set, and its approximate size.
    pub dedup_claimed_keys: u64,
    pub dedup_claimed_bytes: u64,
    pub wall_time_secs: f64,
}

impl CorpusStats {
    pub fn from_report(report: &RejectionReport) -> Self {
        let mut s = CorpusStats {
            shards: report.shards.len() as u64,
            sentence_rejections: report.totals.sentence.clone(),
            document_rejections: report.totals.document.clone(),
            ..Default::default()
        };
        for r in &report.shards {
            s.documents_in += r.documents_in;
            s.documents_out += r.documents_out;
            s.parse_errors += r.parse_errors;
            s.sentences_in += r.sentences_in;
            s.sentences_kept += r.sentences_kept;
            s.sentences_out += r.sentences_out;
            s.bytes_in += r.bytes_in;
            s.bytes_out += r.bytes_out;
            s.words_out += r.words_out;
        }
        s
    }

    /// Checks that kept plus rejected equals input at both levels.
    pub fn check_conservation(&self) -> Result<(), String> {
        let docs = self.documents_out + self.document_rejections.total();
        if docs != self.documents_in {
            return Err(format!("documents: {} out + {} rejected != {} in", self.documents_out, self.document_rejections.total(), self.documents_in));
        }
        let sents = self.sentences_kept + self.sentence_rejections.total();
        if sents != self.sentences_in {
            return Err(format!("sentences: {} kept + {} rejected != {} in", self.sentences_kept, self.sentence_rejections.total(), self.sentences_in));
        }
        if self.sentences_out > self.sentences_kept || self.bytes_out > self.bytes_in {
            return Err("output exceeds input".into());
        }
        Ok(())
    }

    /// Copy with the run-dependent fields (timing, dedup-set footprint)
    /// zeroed, for comparing runs.
    pub fn deterministic(&self) -> Self {
        CorpusStats { wall_time_secs: 0.0, dedup_claimed_bytes: 0, ..self.clone() }
    }

    /// Fraction of input text bytes retained.
    pub fn retained_bytes_fraction(&self) -> f64 {
        if self.bytes_in == 0 {
            0.0
        } else {
            self.bytes_out as f64 / self.bytes_in as f64
        }
    }

    /// Human-readable summary, one figure per line.
    pub fn summary(&self) -> String {
        let mut out = format!(
            "documents: {} in, {} out ({} parse errors)\n\
             sentences: {} in, {} kept, {} in output\n\
             bytes: {} in, {} out ({:.1}% retained)\n\
             words out: {}\n",
            self.documents_in,
            self.documents_out,
            self.parse_errors,
            self.sentences_in,
            self.sentences_kept,
            self.sentences_out,
            self.bytes_in,
            self.bytes_out,
            100.0 * self.retained_bytes_fraction(),
            self.words_out,
        );
        for (r, n) in self.sentence_rejections.iter() {
            out.push_str(&format!("  sentence {:<16} {n}\n", crate::histogram::Reason::name(r)));
        }
        for (r, n) in self.document_rejections.iter() {
            out.push_str(&format!("  document {:<16} {n}\n", crate::histogram::Reason::name(r)));
        }
        out.push_str(&format!("dedup set: {} keys, ~{} bytes\n", self.dedup_claimed_keys, self.dedup_claimed_bytes));
        out.push_str(&format!("wall time: {:.2}s\n", self.wall_time_secs));
        out
    }
}
