//! Character n-gram naive-Bayes language identification.
//!
//! Profiles hold additive-smoothed log-probabilities of lowercase character
//! 1-, 2- and 3-grams. Text is reduced to letters separated by single spaces
//! and padded with a space on each side, so 2- and 3-grams carry word-boundary
//! information. Each profile reserves one smoothed bucket for n-grams it never
//! saw; observed n-grams plus that bucket sum to one for every `n`.

use std::collections::BTreeMap;
use std::path::Path;

use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::resources::ResourceDir;

pub const SMOOTHING: f64 = 0.5;
pub const MAX_ORDER: usize = 3;
/// Only this many leading characters of a text are scored.
pub const MAX_DETECT_CHARS: usize = 4000;
/// Minimum number of non-whitespace characters `detect` will accept.
pub const MIN_DETECT_CHARS: usize = 20;

#[derive(Debug, Error)]
pub enum LangIdError {
    #[error("training corpus for {0:?} contains no letters")]
    EmptyCorpus(String),
    #[error("text has {0} non-space characters, need at least {MIN_DETECT_CHARS}")]
    LowConfidence(usize),
    #[error("no language profiles loaded")]
    NoProfiles,
    #[error("duplicate profile for {0:?}")]
    DuplicateProfile(String),
    #[error("profile {path}: {reason}")]
    BadProfile { path: String, reason: String },
}

/// Letters lowercased, every other run of characters collapsed to one space,
/// padded with a leading and trailing space. Empty when there are no letters.
pub fn normalize_for_ngrams(text: &str) -> Vec<char> {
    let mut out = vec![' '];
    for c in text.chars() {
        if c.is_alphabetic() {
            out.extend(c.to_lowercase());
        } else if out.last() != Some(&' ') {
            out.push(' ');
        }
    }
    if out.len() == 1 {
        return Vec::new();
    }
    if out.last() != Some(&' ') {
        out.push(' ');
    }
    out
}

/// Calls `f(n, gram)` for every 1..=3-gram of the normalized text, skipping the
/// lone-space unigram.
fn for_each_ngram(chars: &[char], mut f: impl FnMut(usize, &[char])) {
    for n in 1..=MAX_ORDER {
        for w in chars.windows(n) {
            if n == 1 && w[0] == ' ' {
                continue;
            }
            f(n, w);
        }
    }
}

/// Packs a gram into a u64, 21 bits per char. Grams of different orders never
/// collide because every char is at least U+0020.
fn pack(gram: &[char]) -> u64 {
    gram.iter().fold(0u64, |acc, &c| (acc << 21) | c as u64)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LangProfile {
    pub lang: String,
    #[serde(rename = "1")]
    pub unigrams: BTreeMap<String, f64>,
    #[serde(rename = "2")]
    pub bigrams: BTreeMap<String, f64>,
    #[serde(rename = "3")]
    pub trigrams: BTreeMap<String, f64>,
    /// Log-probability of the unseen bucket for each order 1..=3.
    pub unseen: [f64; MAX_ORDER],
    /// Log prior.
    pub prior: f64,
}

impl LangProfile {
    pub fn table(&self, n: usize) -> &BTreeMap<String, f64> {
        match n {
            1 => &self.unigrams,
            2 => &self.bigrams,
            3 => &self.trigrams,
            _ => panic!("n-gram order {n} out of range"),
        }
    }

    fn table_mut(&mut self, n: usize) -> &mut BTreeMap<String, f64> {
        match n {
            1 => &mut self.unigrams,
            2 => &mut self.bigrams,
            3 => &mut self.trigrams,
            _ => panic!("n-gram order {n} out of range"),
        }
    }

    pub fn load(path: &Path) -> Result<Self, LangIdError> {
        let bad = |reason: String| LangIdError::BadProfile { path: path.display().to_string(), reason };
        let text = std::fs::read_to_string(path).map_err(|e| bad(e.to_string()))?;
        serde_json::from_str(&text).map_err(|e| bad(e.to_string()))
    }

    pub fn save(&self, path: &Path) -> std::io::Result<()> {
        let json = serde_json::to_string(self).map_err(std::io::Error::from)?;
        std::fs::write(path, json)
    }
}

pub fn train_profile(lang: &str, corpus_text: &str) -> Result<LangProfile, LangIdError> {
    let chars = normalize_for_ngrams(corpus_text);
    if chars.is_empty() {
        return Err(LangIdError::EmptyCorpus(lang.to_string()));
    }
    let mut counts: [BTreeMap<String, u64>; MAX_ORDER] = Default::default();
    for_each_ngram(&chars, |n, g| {
        *counts[n - 1].entry(g.iter().collect()).or_insert(0) += 1;
    });
    let mut profile = LangProfile {
        lang: lang.to_string(),
        unigrams: BTreeMap::new(),
        bigrams: BTreeMap::new(),
        trigrams: BTreeMap::new(),
        unseen: [0.0; MAX_ORDER],
        prior: 0.0,
    };
    for (i, table) in counts.into_iter().enumerate() {
        let total: u64 = table.values().sum();
        let buckets = table.len() as f64 + 1.0;
        let denom = (total as f64 + SMOOTHING * buckets).ln();
        profile.unseen[i] = SMOOTHING.ln() - denom;
        let out = profile.table_mut(i + 1);
        for (gram, c) in table {
            out.insert(gram, (c as f64 + SMOOTHING).ln() - denom);
        }
    }
    Ok(profile)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Detection {
    pub lang: String,
    pub prob: f64,
}

/// A set of profiles compiled into a single lookup table.
#[derive(Debug, Clone)]
pub struct Detector {
    langs: Vec<String>,
    priors: Vec<f64>,
    unseen: Vec<[f64; MAX_ORDER]>,
    rows: FxHashMap<u64, usize>,
    /// `rows[gram] * langs.len() + l` -> log-probability (NaN when unseen).
    logprobs: Vec<f64>,
}

impl Detector {
    pub fn new(mut profiles: Vec<LangProfile>) -> Result<Self, LangIdError> {
        if profiles.is_empty() {
            return Err(LangIdError::NoProfiles);
        }
        profiles.sort_by(|a, b| a.lang.cmp(&b.lang));
        if let Some(w) = profiles.windows(2).find(|w| w[0].lang == w[1].lang) {
            return Err(LangIdError::DuplicateProfile(w[0].lang.clone()));
        }
        let l = profiles.len();
        let mut rows: FxHashMap<u64, usize> = FxHashMap::default();
        let mut logprobs = Vec::new();
        for (li, p) in profiles.iter().enumerate() {
            for n in 1..=MAX_ORDER {
                for (gram, &lp) in p.table(n) {
                    let chars: Vec<char> = gram.chars().collect();
                    let next = rows.len();
                    let row = *rows.entry(pack(&chars)).or_insert(next);
                    if row == next {
                        logprobs.extend(std::iter::repeat(f64::NAN).take(l));
                    }
                    logprobs[row * l + li] = lp;
                }
            }
        }
        Ok(Detector {
            langs: profiles.iter().map(|p| p.lang.clone()).collect(),
            priors: profiles.iter().map(|p| p.prior).collect(),
            unseen: profiles.iter().map(|p| p.unseen).collect(),
            rows,
            logprobs,
        })
    }

    /// Profiles trained on the built-in seed texts (de, en, es, fr, it).
    pub fn builtin() -> Self {
        Self::from_resources(&ResourceDir::builtin()).expect("built-in seed texts train cleanly")
    }

    pub fn from_resources(res: &ResourceDir) -> Result<Self, LangIdError> {
        let seeds = res.langid_seeds().map_err(|e| LangIdError::BadProfile {
            path: res.root().map(|p| p.display().to_string()).unwrap_or_default(),
            reason: e.to_string(),
        })?;
        let profiles = seeds
            .iter()
            .map(|(lang, text)| train_profile(lang, text))
            .collect::<Result<Vec<_>, _>>()?;
        Detector::new(profiles)
    }

    /// Loads every `*.json` profile in a directory.
    pub fn from_profile_dir(dir: &Path) -> Result<Self, LangIdError> {
        let bad = |reason: String| LangIdError::BadProfile { path: dir.display().to_string(), reason };
        let mut paths: Vec<_> = std::fs::read_dir(dir)
            .map_err(|e| bad(e.to_string()))?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "json"))
            .collect();
        paths.sort();
        let profiles = paths.iter().map(|p| LangProfile::load(p)).collect::<Result<Vec<_>, _>>()?;
        Detector::new(profiles)
    }

    pub fn languages(&self) -> &[String] {
        &self.langs
    }

    /// Unnormalized log scores (prior plus summed n-gram log-likelihoods).
    pub fn log_scores(&self, text: &str) -> Result<Vec<f64>, LangIdError> {
        let visible = text.chars().filter(|c| !c.is_whitespace()).count();
        if visible < MIN_DETECT_CHARS {
            return Err(LangIdError::LowConfidence(visible));
        }
        let end = text.char_indices().nth(MAX_DETECT_CHARS).map_or(text.len(), |(i, _)| i);
        let chars = normalize_for_ngrams(&text[..end]);
        let l = self.langs.len();
        let mut scores = self.priors.clone();
        for_each_ngram(&chars, |n, g| match self.rows.get(&pack(g)) {
            Some(&row) => {
                let probs = &self.logprobs[row * l..(row + 1) * l];
                for (li, s) in scores.iter_mut().enumerate() {
                    let lp = probs[li];
                    *s += if lp.is_nan() { self.unseen[li][n - 1] } else { lp };
                }
            }
            None => {
                for (li, s) in scores.iter_mut().enumerate() {
                    *s += self.unseen[li][n - 1];
                }
            }
        });
        Ok(scores)
    }

    /// Posterior for every language, in language-code order.
    pub fn posteriors(&self, text: &str) -> Result<Vec<(String, f64)>, LangIdError> {
        let scores = self.log_scores(text)?;
        let max = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let exps: Vec<f64> = scores.iter().map(|s| (s - max).exp()).collect();
        let z: f64 = exps.iter().sum();
        Ok(self.langs.iter().cloned().zip(exps.into_iter().map(|e| e / z)).collect())
    }

    /// Most probable language; ties go to the lexicographically smallest code.
    pub fn detect(&self, text: &str) -> Result<Detection, LangIdError> {
        let post = self.posteriors(text)?;
        let mut best = 0;
        for (i, (_, p)) in post.iter().enumerate() {
            if *p > post[best].1 {
                best = i;
            }
        }
        let (lang, prob) = post[best].clone();
        Ok(Detection { lang, prob })
    }
}

pub fn detect(text: &str, profiles: &[LangProfile]) -> Result<Detection, LangIdError> {
    Detector::new(profiles.to_vec())?.detect(text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::resources::LANGID_SEEDS;

    fn seed(lang: &str) -> &'static str {
        LANGID_SEEDS.iter().find(|(l, _)| *l == lang).unwrap().1
    }

    #[test]
    fn smoothed_unigram_by_hand() {
        // " aaa " has unigrams a,a,a; one observed type plus the unseen bucket.
        let p = train_profile("xx", "aaa").unwrap();
        assert!((p.unigrams["a"] - (3.5f64 / 4.0).ln()).abs() < 1e-12);
        assert!((p.unseen[0] - (0.5f64 / 4.0).ln()).abs() < 1e-12);
        // bigrams " a", "aa", "aa", "a " -> counts 1,2,1 over 3 types
        assert!((p.bigrams["aa"] - (2.5f64 / 6.0).ln()).abs() < 1e-12);
        assert!((p.bigrams[" a"] - (1.5f64 / 6.0).ln()).abs() < 1e-12);
    }

    #[test]
    fn probabilities_sum_to_one_per_order() {
        for (lang, text) in LANGID_SEEDS {
            let p = train_profile(lang, text).unwrap();
            for n in 1..=MAX_ORDER {
                let s: f64 = p.table(n).values().map(|lp| lp.exp()).sum::<f64>() + p.unseen[n - 1].exp();
                assert!((s - 1.0).abs() < 1e-9, "{lang} n={n}: {s}");
                assert!(p.table(n).keys().all(|g| g.to_lowercase() == *g));
            }
        }
    }

    #[test]
    fn disjoint_corpora_disjoint_grams() {
        let a = train_profile("a", "abab abba").unwrap();
        let b = train_profile("b", "xyz zyx").unwrap();
        for n in 1..=MAX_ORDER {
            let shared = a.table(n).keys().filter(|g| b.table(n).contains_key(*g) && g.trim() != "").count();
            assert_eq!(shared, 0, "order {n}");
        }
    }

    #[test]
    fn empty_corpus_rejected() {
        assert!(matches!(train_profile("it", ""), Err(LangIdError::EmptyCorpus(_))));
        assert!(matches!(train_profile("it", " 123 ... "), Err(LangIdError::EmptyCorpus(_))));
    }

    #[test]
    fn italian_seed_is_italian() {
        let text: String = seed("it").chars().take(500).collect();
        let profiles: Vec<LangProfile> =
            ["it", "en", "de"].iter().map(|l| train_profile(l, seed(l)).unwrap()).collect();
        let d = detect(&text, &profiles).unwrap();
        assert_eq!(d.lang, "it");
        assert!(d.prob > 0.99);
    }

    #[test]
    fn single_profile_is_certain() {
        let p = train_profile("de", seed("de")).unwrap();
        let d = detect("Questo testo è chiaramente scritto in italiano.", &[p]).unwrap();
        assert_eq!(d, Detection { lang: "de".into(), prob: 1.0 });
    }

    #[test]
    fn short_text_and_no_profiles() {
        let det = Detector::builtin();
        assert!(matches!(det.detect("ciao bella"), Err(LangIdError::LowConfidence(9))));
        assert!(matches!(detect("abbastanza lungo per essere valutato", &[]), Err(LangIdError::NoProfiles)));
    }

    #[test]
    fn posterior_normalized_and_prior_scale_invariant() {
        let det = Detector::builtin();
        let texts = [
            "Il gatto dorme sul divano mentre fuori piove.",
            "The weather in the mountains changed quickly that afternoon.",
            "Der Hund schläft im Garten unter dem großen Baum.",
            "ab cd ef gh ij kl mn op qr st uv wx yz",
        ];
        let mut profiles: Vec<LangProfile> =
            LANGID_SEEDS.iter().map(|(l, t)| train_profile(l, t).unwrap()).collect();
        for t in texts {
            let post = det.posteriors(t).unwrap();
            let s: f64 = post.iter().map(|(_, p)| p).sum();
            assert!((s - 1.0).abs() < 1e-9);
            let before = det.detect(t).unwrap().lang;
            for p in profiles.iter_mut() {
                p.prior += 7.5f64.ln();
            }
            let scaled = Detector::new(profiles.clone()).unwrap();
            assert_eq!(scaled.detect(t).unwrap().lang, before);
        }
    }

    #[test]
    fn ties_go_to_smallest_code() {
        let p = train_profile("zz", "abc def").unwrap();
        let mut q = p.clone();
        q.lang = "aa".into();
        let d = detect("abcdefabcdefabcdefabcdef", &[p, q]).unwrap();
        assert_eq!(d.lang, "aa");
        assert!((d.prob - 0.5).abs() < 1e-12);
    }

    #[test]
    fn profile_json_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let p = train_profile("it", seed("it")).unwrap();
        let path = dir.path().join("it.json");
        p.save(&path).unwrap();
        let q = LangProfile::load(&path).unwrap();
        assert_eq!(p.lang, q.lang);
        assert_eq!(p.trigrams.len(), q.trigrams.len());
        let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
        assert!(v.get("1").is_some() && v.get("3").is_some() && v.get("prior").is_some());
        let det = Detector::from_profile_dir(dir.path()).unwrap();
        assert_eq!(det.languages(), ["it"]);
    }
}
