//! Masked span prediction examples: spans of the input are replaced by
//! sentinel ids and the target lists each sentinel followed by the tokens it
//! hides.

use serde::{Deserialize, Serialize};

use crate::rng::DetRng;
use crate::tokenizer::{is_sentinel, sentinel_id, EOS_ID, NUM_SENTINELS, SENTINEL_BASE};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorruptionConfig {
    pub corruption_rate: f64,
    pub mean_span_len: f64,
    pub max_seq_len: usize,
    pub seed: u64,
}

impl Default for CorruptionConfig {
    fn default() -> Self {
        CorruptionConfig { corruption_rate: 0.15, mean_span_len: 3.0, max_seq_len: 512, seed: 0 }
    }
}

impl CorruptionConfig {
    pub fn validate(&self) -> Result<(), CorruptionError> {
        if !(self.corruption_rate > 0.0 && self.corruption_rate < 1.0) {
            return Err(CorruptionError::InvalidConfig(format!("corruption rate {} not in (0,1)", self.corruption_rate)));
        }
        if !(self.mean_span_len >= 1.0) || !self.mean_span_len.is_finite() {
            return Err(CorruptionError::InvalidConfig(format!("mean span length {} below 1", self.mean_span_len)));
        }
        if self.max_seq_len == 0 {
            return Err(CorruptionError::InvalidConfig("max sequence length 0".into()));
        }
        Ok(())
    }

    /// Config for example `index` of a batch: same settings, seed XOR index.
    pub fn for_example(&self, index: u64) -> Self {
        CorruptionConfig { seed: self.seed ^ index, ..*self }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorruptionExample {
    pub input_ids: Vec<u32>,
    pub target_ids: Vec<u32>,
}

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum CorruptionError {
    #[error("sequence is empty")]
    Empty,
    #[error("sequence of {len} tokens exceeds the maximum of {max}")]
    TooLong { len: usize, max: usize },
    #[error("token {id} at position {pos} is a reserved sentinel or eos id")]
    ContainsReserved { pos: usize, id: u32 },
    #[error("malformed pair: {0}")]
    MalformedPair(String),
    #[error("invalid corruption config: {0}")]
    InvalidConfig(String),
}

/// Lengths of the masked spans and of the unmasked runs around them:
/// `gaps[0] span[0] gaps[1] span[1] ... span[k-1] gaps[k]`, interior gaps ≥ 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpanLayout {
    pub spans: Vec<usize>,
    pub gaps: Vec<usize>,
}

/// Tokens masked in a sequence of `len` tokens: `round(rate * len)`, at
/// least 1 and at most `len`.
pub fn masked_count(len: usize, rate: f64) -> usize {
    ((rate * len as f64).round() as usize).clamp(1, len.max(1))
}

/// Number of spans for `masked` tokens out of `len`: `max(1,
/// round(masked / mean))`, limited so that spans fit between unmasked tokens
/// and sentinels suffice.
pub fn span_count(len: usize, masked: usize, mean_span_len: f64) -> usize {
    let wanted = ((masked as f64 / mean_span_len).round() as usize).max(1);
    let unmasked = len - masked;
    wanted.min(masked).min(unmasked + 1).min(NUM_SENTINELS as usize)
}

/// Splits `total` into `parts` non-negative parts, uniformly over
/// compositions.
fn random_composition(rng: &mut DetRng, total: usize, parts: usize) -> Vec<usize> {
    let bars = rng.choose_sorted(total + parts - 1, parts - 1);
    let mut out = Vec::with_capacity(parts);
    // stars and bars: positions before the first bar, between bars, after the last
    let mut start = 0;
    for &b in &bars {
        out.push(b - start);
        start = b + 1;
    }
    out.push(total + parts - 1 - start);
    out
}

pub fn span_layout(len: usize, cfg: &CorruptionConfig) -> SpanLayout {
    let masked = masked_count(len, cfg.corruption_rate);
    let k = span_count(len, masked, cfg.mean_span_len);
    let mut rng = DetRng::new(cfg.seed);
    // each span gets one token, the rest is spread over spans
    let spans: Vec<usize> = random_composition(&mut rng, masked - k, k).into_iter().map(|x| x + 1).collect();
    // interior gaps get one token each, the rest is spread over all gaps
    let unmasked = len - masked;
    let mut gaps = random_composition(&mut rng, unmasked - (k - 1), k + 1);
    for g in gaps.iter_mut().take(k).skip(1) {
        *g += 1;
    }
    SpanLayout { spans, gaps }
}

fn check_input(token_ids: &[u32], max: usize) -> Result<(), CorruptionError> {
    if token_ids.is_empty() {
        return Err(CorruptionError::Empty);
    }
    if token_ids.len() > max {
        return Err(CorruptionError::TooLong { len: token_ids.len(), max });
    }
    if let Some((pos, &id)) = token_ids.iter().enumerate().find(|(_, &id)| id == EOS_ID || is_sentinel(id)) {
        return Err(CorruptionError::ContainsReserved { pos, id });
    }
    Ok(())
}

/// Builds one example. Deterministic in `(token_ids, cfg)`.
pub fn corrupt(token_ids: &[u32], cfg: &CorruptionConfig) -> Result<CorruptionExample, CorruptionError> {
    cfg.validate()?;
    check_input(token_ids, cfg.max_seq_len)?;
    let layout = span_layout(token_ids.len(), cfg);
    let mut input_ids = Vec::with_capacity(token_ids.len());
    let mut target_ids = Vec::new();
    let mut pos = 0;
    for (k, &span) in layout.spans.iter().enumerate() {
        let gap = layout.gaps[k];
        input_ids.extend_from_slice(&token_ids[pos..pos + gap]);
        pos += gap;
        let s = sentinel_id(k as u32);
        input_ids.push(s);
        target_ids.push(s);
        target_ids.extend_from_slice(&token_ids[pos..pos + span]);
        pos += span;
    }
    input_ids.extend_from_slice(&token_ids[pos..]);
    target_ids.push(EOS_ID);
    Ok(CorruptionExample { input_ids, target_ids })
}

/// Corrupts a batch in parallel; example `i` uses [`CorruptionConfig::for_example`]`(first_index + i)`.
pub fn corrupt_batch(
    batch: &[Vec<u32>],
    cfg: &CorruptionConfig,
    first_index: u64,
) -> Vec<Result<CorruptionExample, CorruptionError>> {
    use rayon::prelude::*;
    batch
        .par_iter()
        .enumerate()
        .map(|(i, toks)| corrupt(toks, &cfg.for_example(first_index + i as u64)))
        .collect()
}

/// Splits the target into `(sentinel index, span)` pieces.
fn target_spans(target_ids: &[u32]) -> Result<Vec<&[u32]>, CorruptionError> {
    let bad = |m: &str| CorruptionError::MalformedPair(m.to_string());
    let body = match target_ids.split_last() {
        Some((&EOS_ID, body)) => body,
        _ => return Err(bad("target does not end with eos")),
    };
    let mut spans = Vec::new();
    let mut i = 0;
    while i < body.len() {
        let expected = SENTINEL_BASE + spans.len() as u32;
        if body[i] != expected {
            return Err(bad(&format!("expected sentinel id {expected} at target position {i}, found {}", body[i])));
        }
        let start = i + 1;
        let end = body[start..].iter().position(|&id| is_sentinel(id)).map_or(body.len(), |p| start + p);
        if body[start..end].contains(&EOS_ID) {
            return Err(bad("eos inside target span"));
        }
        spans.push(&body[start..end]);
        i = end;
    }
    Ok(spans)
}

/// Inverse of [`corrupt`].
pub fn reconstruct(input_ids: &[u32], target_ids: &[u32]) -> Result<Vec<u32>, CorruptionError> {
    let spans = target_spans(target_ids)?;
    let mut out = Vec::with_capacity(input_ids.len() + target_ids.len());
    let mut next = 0usize;
    for &id in input_ids {
        if is_sentinel(id) {
            let k = (id - SENTINEL_BASE) as usize;
            if k != next || k >= spans.len() {
                return Err(CorruptionError::MalformedPair(format!(
                    "input sentinel {k} out of order (expected {next} of {})",
                    spans.len()
                )));
            }
            out.extend_from_slice(spans[k]);
            next += 1;
        } else {
            out.push(id);
        }
    }
    if next != spans.len() {
        return Err(CorruptionError::MalformedPair(format!("input has {next} sentinels, target has {}", spans.len())));
    }
    Ok(out)
}
