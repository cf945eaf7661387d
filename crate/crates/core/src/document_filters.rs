//! Document recomposition, document-level rules and span deduplication.

use rustc_hash::FxHashSet;
use serde::{Deserialize, Serialize};
use xxhash_rust::xxh3::xxh3_128;

use crate::corpus_io::{AsRecord, RawDocument};
use crate::histogram::{Reason, ReasonCounts};
use crate::langid::Detector;
use crate::segmenter::SentenceRecord;

pub const MIN_SENTENCES: usize = 5;
pub const MIN_CHARS: usize = 500;
pub const MAX_CHARS: usize = 50_000;
pub const DEFAULT_LANG: &str = "it";
pub const DEFAULT_LANG_THRESHOLD: f64 = 0.70;
/// Sentences per deduplication window.
pub const SPAN_SENTENCES: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DocumentReason {
    TooFewSentences,
    TooShort,
    TooLong,
    WrongLanguage,
    Duplicate,
}

impl Reason for DocumentReason {
    const ALL: &'static [Self] = &[
        DocumentReason::TooFewSentences,
        DocumentReason::TooShort,
        DocumentReason::TooLong,
        DocumentReason::WrongLanguage,
        DocumentReason::Duplicate,
    ];

    fn name(self) -> &'static str {
        match self {
            DocumentReason::TooFewSentences => "TooFewSentences",
            DocumentReason::TooShort => "TooShort",
            DocumentReason::TooLong => "TooLong",
            DocumentReason::WrongLanguage => "WrongLanguage",
            DocumentReason::Duplicate => "Duplicate",
        }
    }
}

pub type DocumentHistogram = ReasonCounts<DocumentReason>;

/// Position of a record in the global (shard, record) order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
pub struct Provenance {
    pub shard: usize,
    pub record: u64,
}

/// A recomposed document. Fresh out of [`recompose`] it is only a candidate:
/// `lang` is unset until [`judge_document`] accepts it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CleanDocument {
    pub text: String,
    pub url: String,
    pub timestamp: String,
    pub sentence_count: usize,
    pub char_count: usize,
    pub lang: Option<String>,
    pub lang_prob: f64,
    pub provenance: Provenance,
    #[serde(skip)]
    pub sentences: Vec<String>,
}

impl AsRecord for CleanDocument {
    fn text(&self) -> &str {
        &self.text
    }
    fn url(&self) -> &str {
        &self.url
    }
    fn timestamp(&self) -> &str {
        &self.timestamp
    }
}

/// Joins the kept sentences with single spaces.
pub fn recompose(kept: Vec<SentenceRecord>, raw: &RawDocument, provenance: Provenance) -> CleanDocument {
    let sentences: Vec<String> = kept.into_iter().map(|s| s.text).collect();
    let text = sentences.join(" ");
    CleanDocument {
        char_count: text.chars().count(),
        sentence_count: sentences.len(),
        text,
        url: raw.url.clone(),
        timestamp: raw.timestamp.clone(),
        lang: None,
        lang_prob: 0.0,
        provenance,
        sentences,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DocumentRules {
    pub min_sentences: usize,
    pub min_chars: usize,
    pub max_chars: usize,
    pub lang: String,
    pub lang_threshold: f64,
}

impl Default for DocumentRules {
    fn default() -> Self {
        DocumentRules {
            min_sentences: MIN_SENTENCES,
            min_chars: MIN_CHARS,
            max_chars: MAX_CHARS,
            lang: DEFAULT_LANG.to_string(),
            lang_threshold: DEFAULT_LANG_THRESHOLD,
        }
    }
}

/// Applies the document rules in order: sentence count, minimum length,
/// maximum length, language. On acceptance the detected language and its
/// posterior are recorded on the document.
pub fn judge_document(
    cand: &mut CleanDocument,
    detector: &Detector,
    rules: &DocumentRules,
) -> Result<(), DocumentReason> {
    if cand.sentence_count < rules.min_sentences {
        return Err(DocumentReason::TooFewSentences);
    }
    if cand.char_count < rules.min_chars {
        return Err(DocumentReason::TooShort);
    }
    if cand.char_count > rules.max_chars {
        return Err(DocumentReason::TooLong);
    }
    let det = detector.detect(&cand.text).map_err(|_| DocumentReason::WrongLanguage)?;
    if det.lang != rules.lang || det.prob < rules.lang_threshold {
        return Err(DocumentReason::WrongLanguage);
    }
    cand.lang = Some(det.lang);
    cand.lang_prob = det.prob;
    Ok(())
}

/// 128-bit digest of a normalized window of consecutive sentences.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SpanKey(pub u128);

fn normalize_sentence(s: &str, out: &mut String) {
    for (i, w) in s.split_whitespace().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        out.extend(w.chars().flat_map(char::to_lowercase));
    }
}

pub fn span_key<S: AsRef<str>>(window: &[S]) -> SpanKey {
    let mut buf = String::new();
    for (i, s) in window.iter().enumerate() {
        if i > 0 {
            buf.push('\n');
        }
        normalize_sentence(s.as_ref(), &mut buf);
    }
    SpanKey(xxh3_128(buf.as_bytes()))
}

/// Keys of every run of [`SPAN_SENTENCES`] consecutive sentences. A document
/// with fewer sentences contributes one key over all of them.
pub fn span_keys<S: AsRef<str>>(sentences: &[S]) -> Vec<SpanKey> {
    match sentences.len() {
        0 => Vec::new(),
        n if n < SPAN_SENTENCES => vec![span_key(sentences)],
        _ => sentences.windows(SPAN_SENTENCES).map(span_key).collect(),
    }
}

/// Set of span keys claimed by documents already kept.
#[derive(Debug, Default, Clone)]
pub struct ClaimedSpans {
    claimed: FxHashSet<SpanKey>,
}

impl ClaimedSpans {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns `true` (keep) and claims the keys when none was claimed
    /// before; otherwise returns `false` and claims nothing.
    pub fn admit(&mut self, keys: &[SpanKey]) -> bool {
        if keys.iter().any(|k| self.claimed.contains(k)) {
            return false;
        }
        self.claimed.extend(keys.iter().copied());
        true
    }

    pub fn len(&self) -> usize {
        self.claimed.len()
    }

    pub fn is_empty(&self) -> bool {
        self.claimed.is_empty()
    }

    /// Approximate heap footprint of the set.
    pub fn approx_bytes(&self) -> usize {
        self.claimed.capacity() * (std::mem::size_of::<SpanKey>() + 1)
    }
}

/// Sequential deduplication over documents supplied in global order: a
/// document is dropped when any of its windows was claimed by an earlier kept
/// document.
pub fn dedup_pass<I>(docs: I) -> impl Iterator<Item = Result<CleanDocument, (CleanDocument, DocumentReason)>>
where
    I: IntoIterator<Item = CleanDocument>,
{
    let mut claimed = ClaimedSpans::new();
    let mut last: Option<Provenance> = None;
    docs.into_iter().map(move |doc| {
        debug_assert!(last.map_or(true, |p| p < doc.provenance), "dedup input out of global order");
        last = Some(doc.provenance);
        if claimed.admit(&span_keys(&doc.sentences)) {
            Ok(doc)
        } else {
            Err((doc, DocumentReason::Duplicate))
        }
    })
}
