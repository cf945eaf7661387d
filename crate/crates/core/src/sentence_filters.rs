//! Sentence-level rejection rules.
//!
//! Rules are checked in a fixed order and the first one that fires names the
//! rejection: boilerplate, bad word, too few words, overlong word, bad
//! terminal punctuation.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::histogram::{Reason, ReasonCounts};
use crate::resources;
use crate::segmenter::{SentenceRecord, TERMINATORS};

pub const MIN_WORDS: usize = 3;
pub const MAX_WORD_CHARS: usize = 1000;

/// Closers accepted after a terminator at the end of a sentence.
pub const TERMINAL_CLOSERS: [char; 4] = ['"', '”', '»', ')'];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SentenceReason {
    Boilerplate,
    BadWord,
    TooFewWords,
    WordTooLong,
    BadTerminal,
}

impl Reason for SentenceReason {
    const ALL: &'static [Self] = &[
        SentenceReason::Boilerplate,
        SentenceReason::BadWord,
        SentenceReason::TooFewWords,
        SentenceReason::WordTooLong,
        SentenceReason::BadTerminal,
    ];

    fn name(self) -> &'static str {
        match self {
            SentenceReason::Boilerplate => "Boilerplate",
            SentenceReason::BadWord => "BadWord",
            SentenceReason::TooFewWords => "TooFewWords",
            SentenceReason::WordTooLong => "WordTooLong",
            SentenceReason::BadTerminal => "BadTerminal",
        }
    }
}

pub type SentenceHistogram = ReasonCounts<SentenceReason>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SentenceVerdict {
    pub keep: bool,
    pub reason: Option<SentenceReason>,
}

impl SentenceVerdict {
    pub const KEEP: SentenceVerdict = SentenceVerdict { keep: true, reason: None };

    pub fn drop(reason: SentenceReason) -> Self {
        SentenceVerdict { keep: false, reason: Some(reason) }
    }
}

/// Lowercases a token and strips surrounding punctuation so that `"Merda!"`
/// matches the entry `merda`.
fn normalize_token(token: &str) -> String {
    token.trim_matches(|c: char| !c.is_alphanumeric()).to_lowercase()
}

/// Whole-token bad-word lookup.
#[derive(Debug, Clone, Default)]
pub struct BadWordsIndex {
    single: HashSet<String>,
    phrases: Vec<Vec<String>>,
}

impl BadWordsIndex {
    pub fn builtin() -> Self {
        Self::from_list(resources::BADWORDS)
    }

    /// One entry per line, `#` comments; entries with spaces match as
    /// consecutive tokens.
    pub fn from_list(list: &str) -> Self {
        let mut idx = BadWordsIndex::default();
        for entry in resources::list_entries(list) {
            idx.insert(entry);
        }
        idx
    }

    pub fn insert(&mut self, entry: &str) {
        let tokens: Vec<String> =
            entry.split_whitespace().map(normalize_token).filter(|t| !t.is_empty()).collect();
        match tokens.len() {
            0 => {}
            1 => {
                self.single.insert(tokens.into_iter().next().unwrap());
            }
            _ => {
                if !self.phrases.contains(&tokens) {
                    self.phrases.push(tokens);
                }
            }
        }
    }

    pub fn len(&self) -> usize {
        self.single.len() + self.phrases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn matches(&self, text: &str) -> bool {
        if self.is_empty() {
            return false;
        }
        let tokens: Vec<String> = text.split_whitespace().map(normalize_token).collect();
        if tokens.iter().any(|t| self.single.contains(t)) {
            return true;
        }
        self.phrases.iter().any(|p| tokens.windows(p.len()).any(|w| w == p.as_slice()))
    }
}

/// Case-insensitive substring needles.
#[derive(Debug, Clone, Default)]
pub struct BoilerplatePatterns {
    needles: Vec<String>,
}

impl BoilerplatePatterns {
    pub fn builtin() -> Self {
        Self::from_list(resources::BOILERPLATE)
    }

    pub fn from_list(list: &str) -> Self {
        let mut needles: Vec<String> = Vec::new();
        for n in resources::list_entries(list).map(str::to_lowercase) {
            if !needles.contains(&n) {
                needles.push(n);
            }
        }
        BoilerplatePatterns { needles }
    }

    pub fn needles(&self) -> &[String] {
        &self.needles
    }

    pub fn matches(&self, text: &str) -> bool {
        if self.needles.is_empty() {
            return false;
        }
        let lower = text.to_lowercase();
        self.needles.iter().any(|n| lower.contains(n.as_str()))
    }
}

/// True when the sentence ends with a terminator, optionally followed by
/// closing quotes or a bracket.
pub fn has_standard_terminal(text: &str) -> bool {
    let body = text.trim_end().trim_end_matches(|c| TERMINAL_CLOSERS.contains(&c));
    body.chars().next_back().is_some_and(|c| TERMINATORS.contains(&c))
}

pub fn judge_sentence(s: &SentenceRecord, bw: &BadWordsIndex, bp: &BoilerplatePatterns) -> SentenceVerdict {
    let reason = if bp.matches(&s.text) {
        Some(SentenceReason::Boilerplate)
    } else if bw.matches(&s.text) {
        Some(SentenceReason::BadWord)
    } else if s.word_count < MIN_WORDS {
        Some(SentenceReason::TooFewWords)
    } else if s.max_word_len > MAX_WORD_CHARS {
        Some(SentenceReason::WordTooLong)
    } else if !has_standard_terminal(&s.text) {
        Some(SentenceReason::BadTerminal)
    } else {
        None
    };
    reason.map_or(SentenceVerdict::KEEP, SentenceVerdict::drop)
}

/// Order-preserving filter; `verdicts[i]` belongs to `sentences[i]`.
pub fn filter_sentences(
    sentences: Vec<SentenceRecord>,
    bw: &BadWordsIndex,
    bp: &BoilerplatePatterns,
) -> (Vec<SentenceRecord>, Vec<SentenceVerdict>) {
    let verdicts: Vec<SentenceVerdict> = sentences.iter().map(|s| judge_sentence(s, bw, bp)).collect();
    let kept = sentences
        .into_iter()
        .zip(&verdicts)
        .filter_map(|(s, v)| v.keep.then_some(s))
        .collect();
    (kept, verdicts)
}

pub fn histogram(verdicts: &[SentenceVerdict]) -> SentenceHistogram {
    let mut h = SentenceHistogram::new();
    for r in verdicts.iter().filter_map(|v| v.reason) {
        h.add(r);
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn judge(text: &str) -> SentenceVerdict {
        judge_sentence(&SentenceRecord::new(text), &BadWordsIndex::builtin(), &BoilerplatePatterns::builtin())
    }

    #[test]
    fn basic_verdicts() {
        assert_eq!(judge("uno due"), SentenceVerdict::drop(SentenceReason::TooFewWords));
        assert_eq!(judge("Questo prodotto è ottimo."), SentenceVerdict::KEEP);
        assert_eq!(
            judge("questo sito utilizza cookie per migliorare l'esperienza."),
            SentenceVerdict::drop(SentenceReason::Boilerplate)
        );
    }

    #[test]
    fn badwords_are_whole_token_and_case_insensitive() {
        assert_eq!(judge("Che MERDA di giornata."), SentenceVerdict::drop(SentenceReason::BadWord));
        assert_eq!(judge("Ma che merda!"), SentenceVerdict::drop(SentenceReason::BadWord));
        // containment alone is not a match
        assert_eq!(judge("Il cazzotto è arrivato in pieno viso."), SentenceVerdict::KEEP);
        assert_eq!(judge("Una bella giornata di sole a Scunthorpe."), SentenceVerdict::KEEP);
        assert_eq!(judge("La musica classica rilassa."), SentenceVerdict::KEEP);
    }

    #[test]
    fn phrase_entries_match_consecutive_tokens() {
        let bw = BadWordsIndex::from_list("porca troia\n");
        assert!(bw.matches("oh porca troia che caldo"));
        assert!(!bw.matches("la troia di omero e la porca"));
    }

    #[test]
    fn terminal_whitelist() {
        assert!(has_standard_terminal("Va bene."));
        assert!(has_standard_terminal("Disse «così.»"));
        assert!(has_standard_terminal("(Come detto sopra.)"));
        assert!(has_standard_terminal("Davvero?!"));
        assert!(has_standard_terminal("E poi…"));
        assert!(!has_standard_terminal("Leggi anche"));
        assert!(!has_standard_terminal("vedi (sopra)"));
        assert!(!has_standard_terminal("Prezzo: 10 euro,"));
        assert!(!has_standard_terminal("»"));
    }

    #[test]
    fn rule_order_first_match_wins() {
        // boilerplate beats everything
        assert_eq!(judge("lorem ipsum"), SentenceVerdict::drop(SentenceReason::Boilerplate));
        // bad word beats too-few-words
        assert_eq!(judge("merda"), SentenceVerdict::drop(SentenceReason::BadWord));
        // too-few-words beats bad terminal
        assert_eq!(judge("solo due"), SentenceVerdict::drop(SentenceReason::TooFewWords));
    }

    #[test]
    fn filter_keeps_order_and_aligns_verdicts() {
        let bw = BadWordsIndex::builtin();
        let bp = BoilerplatePatterns::builtin();
        let (k, v) = filter_sentences(vec![], &bw, &bp);
        assert!(k.is_empty() && v.is_empty());

        let texts = [
            "Oggi il cielo è sereno.",
            "uno due",
            "La pasta si cuoce in acqua salata.",
            "Leggi anche gli altri articoli",
            "Il museo apre alle nove.",
            "Questo sito utilizza cookie tecnici per funzionare.",
            "Il treno parte dal binario tre.",
            "Abbiamo visitato Firenze in primavera.",
            "Le olive sono state raccolte a mano.",
            "Il concerto è durato due ore.",
        ];
        let input: Vec<SentenceRecord> = texts.iter().map(|t| SentenceRecord::new(t)).collect();
        let (kept, verdicts) = filter_sentences(input, &bw, &bp);
        assert_eq!(kept.len(), 7);
        assert_eq!(verdicts.len(), 10);
        let h = histogram(&verdicts);
        assert_eq!(h[SentenceReason::TooFewWords], 1);
        assert_eq!(h[SentenceReason::BadTerminal], 1);
        assert_eq!(h[SentenceReason::Boilerplate], 1);
        assert_eq!(h.total(), 3);
        let order: Vec<&str> = kept.iter().map(|s| s.text.as_str()).collect();
        assert_eq!(order[0], texts[0]);
        assert_eq!(order[1], texts[2]);
        assert_eq!(order[6], texts[9]);
    }

    proptest! {
        #[test]
        fn adding_a_badword_never_grows_the_kept_set(
            words in proptest::collection::vec("[a-z]{1,6}", 3..30),
            extra in "[a-z]{1,6}",
        ) {
            let sentences: Vec<SentenceRecord> = words
                .chunks(4)
                .map(|c| SentenceRecord::new(&format!("{}.", c.join(" "))))
                .collect();
            let bp = BoilerplatePatterns::default();
            let small = BadWordsIndex::from_list("abc\n");
            let mut big = small.clone();
            big.insert(&extra);
            let (k1, _) = filter_sentences(sentences.clone(), &small, &bp);
            let (k2, _) = filter_sentences(sentences, &big, &bp);
            prop_assert!(k2.len() <= k1.len());
            prop_assert!(k2.iter().all(|s| k1.contains(s)));
            // idempotent
            let (k3, v3) = filter_sentences(k2.clone(), &big, &bp);
            prop_assert_eq!(&k3, &k2);
            prop_assert!(v3.iter().all(|v| v.keep));
        }
    }
}
