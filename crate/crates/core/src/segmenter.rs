//! Rule-based sentence and word segmentation with Italian abbreviation handling.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::resources;

/// Characters that can close a sentence.
pub const TERMINATORS: [char; 4] = ['.', '!', '?', '…'];

/// Closing quotes and brackets allowed to trail a terminator (`«così.»`).
pub const CLOSERS: [char; 6] = ['"', '”', '»', ')', '\'', '’'];

const OPENERS: [char; 6] = ['"', '“', '«', '(', '\'', '‘'];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SentenceRecord {
    pub text: String,
    pub word_count: usize,
    /// Length in chars of the longest whitespace-delimited token.
    pub max_word_len: usize,
    /// Last non-whitespace character.
    pub terminal_char: Option<char>,
}

impl SentenceRecord {
    pub fn new(text: &str) -> Self {
        let text = text.trim();
        let (word_count, max_word_len) = count_words(text);
        SentenceRecord {
            text: text.to_string(),
            word_count,
            max_word_len,
            terminal_char: text.chars().next_back(),
        }
    }

    /// Length in Unicode scalar values.
    pub fn char_len(&self) -> usize {
        self.text.chars().count()
    }
}

/// `(word_count, max_word_len)` for whitespace-delimited tokens, lengths in chars.
pub fn count_words(text: &str) -> (usize, usize) {
    text.split_whitespace()
        .fold((0, 0), |(n, max), w| (n + 1, max.max(w.chars().count())))
}

#[derive(Debug, Clone)]
pub struct Segmenter {
    abbreviations: HashSet<String>,
}

impl Default for Segmenter {
    fn default() -> Self {
        Segmenter::italian()
    }
}

impl Segmenter {
    /// Segmenter with the built-in Italian abbreviation list.
    pub fn italian() -> Self {
        Self::from_list(resources::ABBREVIATIONS)
    }

    /// Parses a list with one abbreviation per line (`#` comments allowed).
    pub fn from_list(list: &str) -> Self {
        let abbreviations = resources::list_entries(list).map(|s| s.to_lowercase()).collect();
        Segmenter { abbreviations }
    }

    pub fn with_abbreviations<I: IntoIterator<Item = String>>(items: I) -> Self {
        Segmenter { abbreviations: items.into_iter().map(|s| s.to_lowercase()).collect() }
    }

    pub fn is_abbreviation(&self, token: &str) -> bool {
        self.abbreviations.contains(&token.to_lowercase())
    }

    pub fn split_sentences(&self, text: &str) -> Vec<SentenceRecord> {
        let mut out = Vec::new();
        for line in text.split('\n') {
            self.split_line(line, &mut out);
        }
        out
    }

    fn split_line(&self, line: &str, out: &mut Vec<SentenceRecord>) {
        let chars: Vec<(usize, char)> = line.char_indices().collect();
        let mut start = 0usize;
        let mut i = 0usize;
        while i < chars.len() {
            let (_, c) = chars[i];
            if !TERMINATORS.contains(&c) {
                i += 1;
                continue;
            }
            let first = i;
            let mut j = i;
            while j + 1 < chars.len() && TERMINATORS.contains(&chars[j + 1].1) {
                j += 1;
            }
            let lone_dot = j == first && c == '.';
            while j + 1 < chars.len() && CLOSERS.contains(&chars[j + 1].1) {
                j += 1;
            }
            i = j + 1;
            // a boundary needs whitespace after the cluster
            if i >= chars.len() || !chars[i].1.is_whitespace() {
                continue;
            }
            let next = chars[i..].iter().map(|&(_, ch)| ch).find(|ch| !ch.is_whitespace());
            match next {
                None => continue,
                Some(ch) if ch.is_lowercase() => continue,
                Some(_) => {}
            }
            if lone_dot && self.protects_dot(line, start, chars[first].0) {
                continue;
            }
            let end = chars[i].0;
            push_sentence(&line[start..end], out);
            start = end;
        }
        push_sentence(&line[start..], out);
    }

    /// True when the dot at byte `dot` closes an abbreviation or an initial.
    fn protects_dot(&self, line: &str, start: usize, dot: usize) -> bool {
        let before = &line[start..dot];
        let word_start = before
            .char_indices()
            .rev()
            .find(|(_, c)| c.is_whitespace())
            .map_or(0, |(k, c)| k + c.len_utf8());
        let token = before[word_start..].trim_start_matches(|c| OPENERS.contains(&c));
        if token.is_empty() {
            return false;
        }
        let mut with_dot = token.to_lowercase();
        with_dot.push('.');
        if self.abbreviations.contains(&with_dot) {
            return true;
        }
        // initials such as "G. Verdi"
        let mut cs = token.chars();
        matches!((cs.next(), cs.next()), (Some(c), None) if c.is_uppercase())
    }
}

fn push_sentence(s: &str, out: &mut Vec<SentenceRecord>) {
    let s = s.trim();
    if !s.is_empty() {
        out.push(SentenceRecord::new(s));
    }
}

/// Splits with the built-in Italian rules.
pub fn split_sentences(text: &str) -> Vec<SentenceRecord> {
    Segmenter::italian().split_sentences(text)
}
