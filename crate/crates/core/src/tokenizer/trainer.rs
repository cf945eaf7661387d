//! Unigram language-model training: substring seeding, EM re-estimation and
//! likelihood-based pruning down to a target vocabulary size.

use std::collections::BTreeMap;

use rayon::prelude::*;
use rustc_hash::FxHashMap;

use super::lattice::{build_edges, char_boundaries, forward_backward, viterbi};
use super::normalize::{normalize, pretokenize};
use super::vocab::{is_reserved_piece, UnigramVocab, RESERVED_IDS};
use super::TokenizerError;

/// A candidate piece with its log-probability.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoredPiece {
    pub piece: String,
    pub logprob: f64,
}

impl ScoredPiece {
    pub fn new(piece: impl Into<String>, logprob: f64) -> Self {
        ScoredPiece { piece: piece.into(), logprob }
    }

    fn is_single_char(&self) -> bool {
        let mut c = self.piece.chars();
        c.next().is_some() && c.next().is_none()
    }
}

/// Distinct training units (boundary-marked words) with their frequencies,
/// sorted by unit.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct WordCounts {
    pub words: Vec<(String, u64)>,
}

impl WordCounts {
    pub fn from_texts<'a, I: IntoIterator<Item = &'a str>>(texts: I) -> Self {
        let mut acc = WordCountsBuilder::default();
        for t in texts {
            acc.add_text(t);
        }
        acc.finish()
    }

    pub fn from_pairs<I: IntoIterator<Item = (S, u64)>, S: Into<String>>(pairs: I) -> Self {
        let mut map: BTreeMap<String, u64> = BTreeMap::new();
        for (w, c) in pairs {
            *map.entry(w.into()).or_insert(0) += c;
        }
        WordCounts { words: map.into_iter().filter(|(w, c)| !w.is_empty() && *c > 0).collect() }
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn total(&self) -> u64 {
        self.words.iter().map(|(_, c)| c).sum()
    }
}

/// Incremental word counting for streamed documents.
#[derive(Debug, Default)]
pub struct WordCountsBuilder {
    counts: FxHashMap<String, u64>,
}

impl WordCountsBuilder {
    pub fn add_text(&mut self, text: &str) {
        let norm = normalize(text);
        for w in pretokenize(&norm) {
            *self.counts.entry(w).or_insert(0) += 1;
        }
    }

    pub fn finish(self) -> WordCounts {
        let mut words: Vec<(String, u64)> = self.counts.into_iter().collect();
        words.sort_unstable_by(|a, b| a.0.cmp(&b.0));
        WordCounts { words }
    }
}

/// Candidate pieces: every substring of up to `max_piece_chars` chars, ranked
/// by `count * length` and cut to `seed_size`, plus every single char.
/// Initial log-probabilities are normalized occurrence counts.
pub fn seed_vocab(
    corpus: &WordCounts,
    seed_size: usize,
    max_piece_chars: usize,
) -> Result<Vec<ScoredPiece>, TokenizerError> {
    if corpus.is_empty() {
        return Err(TokenizerError::EmptyCorpus);
    }
    let mut counts: FxHashMap<&str, u64> = FxHashMap::default();
    for (word, freq) in &corpus.words {
        let b = char_boundaries(word);
        let n = b.len() - 1;
        for start in 0..n {
            for end in (start + 1)..=n.min(start + max_piece_chars) {
                *counts.entry(&word[b[start]..b[end]]).or_insert(0) += freq;
            }
        }
    }
    let mut singles: Vec<(&str, u64)> = Vec::new();
    let mut multi: Vec<(&str, u64, usize)> = Vec::new();
    for (&s, &c) in &counts {
        let len = s.chars().count();
        if len == 1 {
            singles.push((s, c));
        } else if !is_reserved_piece(s) {
            multi.push((s, c, len));
        }
    }
    multi.sort_unstable_by(|a, b| {
        let sa = a.1 as u128 * a.2 as u128;
        let sb = b.1 as u128 * b.2 as u128;
        sb.cmp(&sa).then_with(|| a.0.cmp(b.0))
    });
    multi.truncate(seed_size);
    singles.sort_unstable_by(|a, b| a.0.cmp(b.0));

    let total: f64 = singles.iter().map(|s| s.1 as f64).sum::<f64>() + multi.iter().map(|m| m.1 as f64).sum::<f64>();
    let log_total = total.ln();
    let mut out: Vec<ScoredPiece> = singles
        .into_iter()
        .map(|(s, c)| ScoredPiece::new(s, (c as f64).ln() - log_total))
        .collect();
    out.extend(multi.into_iter().map(|(s, c, _)| ScoredPiece::new(s, (c as f64).ln() - log_total)));
    Ok(out)
}

struct PieceIndex<'a> {
    map: FxHashMap<&'a str, u32>,
    max_chars: usize,
}

impl<'a> PieceIndex<'a> {
    fn new(vocab: &'a [ScoredPiece]) -> Self {
        let map = vocab.iter().enumerate().map(|(i, p)| (p.piece.as_str(), i as u32)).collect();
        let max_chars = vocab.iter().map(|p| p.piece.chars().count()).max().unwrap_or(1);
        PieceIndex { map, max_chars }
    }
}

fn uncovered_char(word: &str, index: &PieceIndex<'_>) -> char {
    let mut buf = [0u8; 4];
    word.chars()
        .find(|c| !index.map.contains_key(&*c.encode_utf8(&mut buf)))
        .unwrap_or('\u{fffd}')
}

const CHUNK: usize = 512;

/// One EM iteration. Expected piece counts come from forward-backward over
/// every word's lattice (parallel over fixed chunks, reduced in chunk order);
/// the M-step sets each log-probability to `ln(count / total)`.
///
/// Returns the updated pieces and the corpus log-likelihood under the
/// *incoming* model.
pub fn em_step(vocab: &[ScoredPiece], corpus: &WordCounts) -> Result<(Vec<ScoredPiece>, f64), TokenizerError> {
    if corpus.is_empty() {
        return Err(TokenizerError::EmptyCorpus);
    }
    let index = PieceIndex::new(vocab);
    let lookup = |s: &str| index.map.get(s).map(|&i| (i, vocab[i as usize].logprob));

    let partials: Vec<Result<(Vec<f64>, f64), TokenizerError>> = corpus
        .words
        .par_chunks(CHUNK)
        .map(|chunk| {
            let mut counts = vec![0.0f64; vocab.len()];
            let mut loglik = 0.0f64;
            for (word, freq) in chunk {
                let f = *freq as f64;
                let edges = build_edges(word, index.max_chars, lookup, None);
                let n = word.chars().count();
                let z = forward_backward(n, &edges, |e, p| counts[e.id as usize] += f * p)
                    .ok_or_else(|| TokenizerError::Coverage(uncovered_char(word, &index)))?;
                loglik += f * z;
            }
            Ok((counts, loglik))
        })
        .collect();

    let mut counts = vec![0.0f64; vocab.len()];
    let mut loglik = 0.0f64;
    for part in partials {
        let (c, ll) = part?;
        for (a, b) in counts.iter_mut().zip(c) {
            *a += b;
        }
        loglik += ll;
    }
    for c in counts.iter_mut() {
        // underflowed posteriors: keep the piece representable
        if *c < f64::MIN_POSITIVE {
            *c = f64::MIN_POSITIVE;
        }
    }
    let log_total = counts.iter().sum::<f64>().ln();
    let updated = vocab
        .iter()
        .zip(&counts)
        .map(|(p, c)| ScoredPiece::new(p.piece.clone(), c.ln() - log_total))
        .collect();
    Ok((updated, loglik))
}

/// Corpus log-likelihood (marginal over segmentations) under `vocab`.
pub fn corpus_loglik(vocab: &[ScoredPiece], corpus: &WordCounts) -> Result<f64, TokenizerError> {
    let index = PieceIndex::new(vocab);
    let lookup = |s: &str| index.map.get(s).map(|&i| (i, vocab[i as usize].logprob));
    let mut total = 0.0;
    for (word, freq) in &corpus.words {
        let edges = build_edges(word, index.max_chars, lookup, None);
        let z = forward_backward(word.chars().count(), &edges, |_, _| {})
            .ok_or_else(|| TokenizerError::Coverage(uncovered_char(word, &index)))?;
        total += *freq as f64 * z;
    }
    Ok(total)
}

/// Removes the multi-char pieces whose loss matters least until the
/// vocabulary is `max(target, floor(len * keep_fraction))` pieces. Single
/// chars are never removed.
///
/// A piece's loss is its Viterbi frequency times the score it beats the best
/// segmentation of its own string without it by; pieces that never appear on
/// a Viterbi path cost nothing and go first.
pub fn prune(vocab: &[ScoredPiece], corpus: &WordCounts, keep_fraction: f64, target: usize) -> Vec<ScoredPiece> {
    let n = vocab.len();
    if n <= target {
        return vocab.to_vec();
    }
    let desired = target.max((n as f64 * keep_fraction).floor() as usize);
    let index = PieceIndex::new(vocab);
    let lookup = |s: &str| index.map.get(s).map(|&i| (i, vocab[i as usize].logprob));

    let partials: Vec<Vec<f64>> = corpus
        .words
        .par_chunks(CHUNK)
        .map(|chunk| {
            let mut freq = vec![0.0f64; n];
            for (word, f) in chunk {
                let edges = build_edges(word, index.max_chars, lookup, None);
                if let Some((path, _)) = viterbi(word.chars().count(), &edges) {
                    for e in path {
                        freq[e.id as usize] += *f as f64;
                    }
                }
            }
            freq
        })
        .collect();
    let mut freq = vec![0.0f64; n];
    for part in partials {
        for (a, b) in freq.iter_mut().zip(part) {
            *a += b;
        }
    }

    let mut removable: Vec<(usize, f64)> = vocab
        .iter()
        .enumerate()
        .filter(|(_, p)| !p.is_single_char())
        .map(|(i, p)| {
            if freq[i] == 0.0 {
                return (i, 0.0);
            }
            let without = |s: &str| index.map.get(s).filter(|&&j| j as usize != i).map(|&j| (j, vocab[j as usize].logprob));
            let edges = build_edges(&p.piece, index.max_chars, without, None);
            let alt = viterbi(p.piece.chars().count(), &edges).map_or(f64::NEG_INFINITY, |(_, s)| s);
            (i, freq[i] * (p.logprob - alt))
        })
        .collect();
    removable.sort_by(|a, b| {
        a.1.total_cmp(&b.1)
            .then_with(|| vocab[a.0].logprob.total_cmp(&vocab[b.0].logprob))
            .then_with(|| vocab[a.0].piece.cmp(&vocab[b.0].piece))
    });
    let drop_count = (n - desired).min(removable.len());
    let mut dropped = vec![false; n];
    for &(i, _) in &removable[..drop_count] {
        dropped[i] = true;
    }
    vocab.iter().zip(dropped).filter(|(_, d)| !d).map(|(p, _)| p.clone()).collect()
}

/// Keeps the `target` most probable pieces once only single chars remain;
/// the dropped chars are spelled with byte pieces at encode time.
fn drop_rarest_chars(mut pieces: Vec<ScoredPiece>, target: usize) -> Vec<ScoredPiece> {
    pieces.sort_by(|a, b| b.logprob.total_cmp(&a.logprob).then_with(|| a.piece.cmp(&b.piece)));
    pieces.truncate(target);
    let log_z = pieces.iter().map(|p| p.logprob.exp()).sum::<f64>().ln();
    for p in &mut pieces {
        p.logprob -= log_z;
    }
    log::info!("dropped rare characters to reach {target} pieces");
    pieces
}

#[derive(Debug, Clone)]
pub struct UnigramTrainer {
    /// Total vocabulary size, reserved ids included.
    pub vocab_size: usize,
    /// Multi-char seed candidates; defaults to 20x `vocab_size`.
    pub seed_size: Option<usize>,
    pub max_piece_chars: usize,
    pub keep_fraction: f64,
    /// EM iterations between pruning rounds.
    pub em_iterations: usize,
    pub byte_fallback: bool,
}

impl Default for UnigramTrainer {
    fn default() -> Self {
        UnigramTrainer {
            vocab_size: 32_000,
            seed_size: None,
            max_piece_chars: 8,
            keep_fraction: 0.75,
            em_iterations: 2,
            byte_fallback: true,
        }
    }
}

impl UnigramTrainer {
    pub fn with_vocab_size(vocab_size: usize) -> Self {
        UnigramTrainer { vocab_size, ..Default::default() }
    }

    /// Ids taken by special, sentinel and byte pieces.
    pub fn reserved(&self) -> usize {
        RESERVED_IDS + if self.byte_fallback { 256 } else { 0 }
    }

    pub fn train(&self, corpus: &WordCounts) -> Result<UnigramVocab, TokenizerError> {
        let pieces = self.train_pieces(corpus)?;
        Ok(UnigramVocab::from_trained(pieces, self.byte_fallback))
    }

    /// Trains the scored (non-reserved) pieces only.
    pub fn train_pieces(&self, corpus: &WordCounts) -> Result<Vec<ScoredPiece>, TokenizerError> {
        if self.vocab_size <= self.reserved() {
            return Err(TokenizerError::InvalidConfig(format!(
                "vocab size {} leaves no room after {} reserved ids",
                self.vocab_size,
                self.reserved()
            )));
        }
        if !(0.0..1.0).contains(&self.keep_fraction) || self.keep_fraction == 0.0 {
            return Err(TokenizerError::InvalidConfig(format!("keep fraction {} not in (0,1)", self.keep_fraction)));
        }
        let target = self.vocab_size - self.reserved();
        let seed_size = self.seed_size.unwrap_or(20 * self.vocab_size);
        let mut pieces = seed_vocab(corpus, seed_size, self.max_piece_chars)?;
        log::info!("seeded {} candidate pieces for a target of {target}", pieces.len());
        loop {
            for _ in 0..self.em_iterations.max(1) {
                let (next, loglik) = em_step(&pieces, corpus)?;
                log::debug!("em: {} pieces, loglik {loglik:.3}", next.len());
                pieces = next;
            }
            if pieces.len() <= target {
                break;
            }
            let before = pieces.len();
            pieces = prune(&pieces, corpus, self.keep_fraction, target);
            log::info!("pruned {before} -> {} pieces", pieces.len());
            if pieces.len() == before {
                break;
            }
        }
        if pieces.len() > target {
            // only single chars are left to remove
            if !self.byte_fallback {
                return Err(TokenizerError::InvalidConfig(format!(
                    "vocab size {} cannot hold the {} distinct characters of the corpus without byte fallback",
                    self.vocab_size,
                    pieces.len()
                )));
            }
            pieces = drop_rarest_chars(pieces, target);
        }
        Ok(pieces)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn corpus(words: &[(&str, u64)]) -> WordCounts {
        WordCounts::from_pairs(words.iter().map(|&(w, c)| (w, c)))
    }

    fn pieces(v: &[ScoredPiece]) -> Vec<&str> {
        v.iter().map(|p| p.piece.as_str()).collect()
    }

    #[test]
    fn seed_enumerates_substrings() {
        let seeds = seed_vocab(&corpus(&[("abab", 1)]), 1000, 8).unwrap();
        let mut got = pieces(&seeds);
        got.sort();
        assert_eq!(got, ["a", "ab", "aba", "abab", "b", "ba", "bab"]);
        // counts: a=2 b=2 ab=2 ba=1 aba=1 bab=1 abab=1, total 10
        let ab = seeds.iter().find(|p| p.piece == "ab").unwrap();
        assert!((ab.logprob - (0.2f64).ln()).abs() < 1e-12);
    }

    #[test]
    fn seed_single_char_corpus() {
        let seeds = seed_vocab(&corpus(&[("aaaa", 1)]), 1000, 8).unwrap();
        let mut got = pieces(&seeds);
        got.sort();
        assert_eq!(got, ["a", "aa", "aaa", "aaaa"]);
    }

    #[test]
    fn seed_truncation_keeps_all_chars() {
        let seeds = seed_vocab(&corpus(&[("abcdefg", 3)]), 2, 8).unwrap();
        assert_eq!(seeds.len(), 7 + 2);
        // the two best by count*len are the longest substrings
        assert!(pieces(&seeds).contains(&"abcdefg"));
    }

    #[test]
    fn empty_corpus() {
        assert_eq!(seed_vocab(&WordCounts::default(), 10, 8), Err(TokenizerError::EmptyCorpus));
        assert_eq!(em_step(&[ScoredPiece::new("a", 0.0)], &WordCounts::default()).unwrap_err(), TokenizerError::EmptyCorpus);
    }

    #[test]
    fn em_single_path_by_hand() {
        let v = vec![ScoredPiece::new("a", 0.5f64.ln()), ScoredPiece::new("b", 0.5f64.ln())];
        let (next, ll) = em_step(&v, &corpus(&[("ab", 1)])).unwrap();
        assert!((ll - 2.0 * 0.5f64.ln()).abs() < 1e-12);
        assert!((next[0].logprob - 0.5f64.ln()).abs() < 1e-12);
        assert!((next[1].logprob - 0.5f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn em_coverage_error() {
        let v = vec![ScoredPiece::new("a", 0.0)];
        assert_eq!(em_step(&v, &corpus(&[("ab", 1)])).unwrap_err(), TokenizerError::Coverage('b'));
    }

    #[test]
    fn em_two_steps_non_decreasing() {
        let c = corpus(&[("abcab", 3), ("bca", 2), ("aab", 5), ("cabcab", 1)]);
        let v0 = seed_vocab(&c, 100, 8).unwrap();
        let (v1, ll0) = em_step(&v0, &c).unwrap();
        let (v2, ll1) = em_step(&v1, &c).unwrap();
        let (_, ll2) = em_step(&v2, &c).unwrap();
        assert!(ll1 >= ll0 - 1e-9 && ll2 >= ll1 - 1e-9, "{ll0} {ll1} {ll2}");
        assert!((corpus_loglik(&v2, &c).unwrap() - ll2).abs() < 1e-9);
        let s: f64 = v2.iter().map(|p| p.logprob.exp()).sum();
        assert!((s - 1.0).abs() < 1e-9);
    }

    #[test]
    fn prune_at_target_is_noop() {
        let c = corpus(&[("abab", 1)]);
        let v = seed_vocab(&c, 100, 8).unwrap();
        assert_eq!(prune(&v, &c, 0.75, v.len()), v);
    }

    #[test]
    fn prune_unused_piece_first() {
        // "xy" is never on a Viterbi path of a corpus that never contains it
        let v = vec![
            ScoredPiece::new("a", (0.2f64).ln()),
            ScoredPiece::new("b", (0.2f64).ln()),
            ScoredPiece::new("x", (0.1f64).ln()),
            ScoredPiece::new("y", (0.1f64).ln()),
            ScoredPiece::new("ab", (0.3f64).ln()),
            ScoredPiece::new("xy", (0.1f64).ln()),
        ];
        let c = corpus(&[("abab", 4), ("xa", 1), ("yb", 1)]);
        let out = prune(&v, &c, 0.9, 5);
        assert_eq!(pieces(&out), ["a", "b", "x", "y", "ab"]);
    }

    #[test]
    fn single_chars_are_protected() {
        let v: Vec<ScoredPiece> = ["a", "b", "c"].iter().map(|p| ScoredPiece::new(*p, (1.0f64 / 3.0).ln())).collect();
        let c = corpus(&[("abc", 1)]);
        assert_eq!(prune(&v, &c, 0.5, 1), v);
    }

    #[test]
    fn trainer_hits_target_exactly() {
        let texts = [
            "il gatto mangia il topo e il cane guarda il gatto",
            "la casa è grande e la strada è lunga",
            "mangiare bene è importante per stare bene",
        ];
        let c = WordCounts::from_texts(texts.iter().copied());
        let trainer = UnigramTrainer { vocab_size: 103 + 256 + 40, ..Default::default() };
        let pieces = trainer.train_pieces(&c).unwrap();
        assert_eq!(pieces.len(), 40);
        let s: f64 = pieces.iter().map(|p| p.logprob.exp()).sum();
        assert!((s - 1.0).abs() < 1e-6);
    }

    #[test]
    fn rare_chars_fall_back_to_bytes_at_small_targets() {
        let c = WordCounts::from_texts(["abc abd aef xyz qrs"]);
        let distinct = 1 + "abcdefxyzqrs".len();
        let t = UnigramTrainer { vocab_size: 103 + 256 + 5, ..Default::default() };
        let pieces = t.train_pieces(&c).unwrap();
        assert_eq!(pieces.len(), 5);
        assert!(pieces.len() < distinct);
        let s: f64 = pieces.iter().map(|p| p.logprob.exp()).sum();
        assert!((s - 1.0).abs() < 1e-9);
        let vocab = UnigramVocab::from_trained(pieces, true);
        assert_eq!(vocab.decode(&vocab.encode("qrs abc").unwrap().piece_ids).unwrap(), "qrs abc");

        let strict = UnigramTrainer { vocab_size: 103 + 5, byte_fallback: false, ..Default::default() };
        assert!(matches!(strict.train_pieces(&c), Err(TokenizerError::InvalidConfig(_))));
    }

    #[test]
    fn trainer_rejects_tiny_vocab() {
        let c = corpus(&[("▁a", 1)]);
        let t = UnigramTrainer::with_vocab_size(200);
        assert!(matches!(t.train_pieces(&c), Err(TokenizerError::InvalidConfig(_))));
    }
}
