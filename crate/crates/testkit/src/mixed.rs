//! The 1,000-document mixed fixture: clean Italian documents plus planted
//! sentence- and document-level violations whose counts are known by
//! construction.

use std::collections::BTreeMap;

use serde_json::json;

use crate::lexicon::{ENGLISH, GERMAN, ITALIAN};
use crate::rng::Rng;
use crate::text::{char_len, planted_line, record_json, sentence, timestamp, url, DocBuilder, Plant, UniqueSentences};

pub const DOCUMENTS: usize = 1000;
pub const SHARDS: usize = 8;
pub const SEED: u64 = 20_220_101;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Clean,
    /// Clean apart from planted junk lines.
    CleanWithPlants,
    TooFewSentences,
    /// Enough sentences before filtering, four after.
    TooFewAfterFiltering,
    TooShort,
    TooLong,
    English,
    German,
    ExactCopy,
    SharedWindow,
}

const PLAN: &[(Kind, usize)] = &[
    (Kind::Clean, 520),
    (Kind::CleanWithPlants, 200),
    (Kind::TooFewSentences, 40),
    (Kind::TooFewAfterFiltering, 12),
    (Kind::TooShort, 48),
    (Kind::TooLong, 8),
    (Kind::English, 60),
    (Kind::German, 40),
    (Kind::ExactCopy, 45),
    (Kind::SharedWindow, 27),
];

/// Counts planted while building the fixture.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Expected {
    pub documents_in: u64,
    pub documents_out: u64,
    pub parse_errors: u64,
    pub sentences_in: u64,
    pub sentence: BTreeMap<&'static str, u64>,
    pub document: BTreeMap<&'static str, u64>,
}

impl Expected {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "documents_in": self.documents_in,
            "documents_out": self.documents_out,
            "parse_errors": self.parse_errors,
            "sentences_in": self.sentences_in,
            "sentence_rejections": self.sentence,
            "document_rejections": self.document,
        })
    }
}

pub struct MixedFixture {
    /// JSON lines per shard, in shard order.
    pub shards: Vec<Vec<String>>,
    pub expected: Expected,
}

const MALFORMED: &[&str] = &[
    r#"{"text": "record troncato a metà"#,
    r#"{"url": "https://example.org/senza-testo"}"#,
    r#"not json at all"#,
];

struct Source {
    text: String,
    sentences: Vec<String>,
}

fn clean_doc(rng: &mut Rng, uniq: &mut UniqueSentences) -> DocBuilder {
    let mut d = DocBuilder::default();
    let target = rng.range(5, 12);
    while d.len() < target || d.kept_chars() < 560 {
        let min = rng.range(60, 150);
        d.sentence(uniq.next(rng, &ITALIAN, min));
    }
    d
}

fn plant(rng: &mut Rng, d: &mut DocBuilder, exp: &mut Expected) {
    let p = *rng.pick(&Plant::ALL);
    let line = planted_line(rng, p);
    d.insert_line(rng, line);
    *exp.sentence.get_mut(p.name()).unwrap() += 1;
}

pub fn build(seed: u64) -> MixedFixture {
    let mut rng = Rng::new(seed);
    let mut uniq = UniqueSentences::default();
    let mut kinds: Vec<Kind> = PLAN.iter().flat_map(|&(k, n)| std::iter::repeat(k).take(n)).collect();
    assert_eq!(kinds.len(), DOCUMENTS);
    rng.shuffle(&mut kinds);
    // copies need an earlier clean source: keep them out of the first stretch
    let lead = 60;
    for i in 0..lead {
        if matches!(kinds[i], Kind::ExactCopy | Kind::SharedWindow) {
            let j = (lead..kinds.len()).find(|&j| !matches!(kinds[j], Kind::ExactCopy | Kind::SharedWindow)).unwrap();
            kinds.swap(i, j);
        }
    }

    let mut exp = Expected { documents_in: DOCUMENTS as u64, parse_errors: MALFORMED.len() as u64, ..Default::default() };
    for p in Plant::ALL {
        exp.sentence.insert(p.name(), 0);
    }
    for name in ["TooFewSentences", "TooShort", "TooLong", "WrongLanguage", "Duplicate"] {
        exp.document.insert(name, 0);
    }
    let mut sources: Vec<Source> = Vec::new();
    let mut docs: Vec<String> = Vec::with_capacity(DOCUMENTS);

    for (n, kind) in kinds.iter().copied().enumerate() {
        let (text, sentences_in, reason) = match kind {
            Kind::Clean => {
                let d = clean_doc(&mut rng, &mut uniq);
                let text = d.build(&mut rng);
                let sentences: Vec<String> = split_plain(&text);
                sources.push(Source { text: text.clone(), sentences });
                (text, d.len(), None)
            }
            Kind::CleanWithPlants => {
                let mut d = clean_doc(&mut rng, &mut uniq);
                for _ in 0..rng.range(1, 3) {
                    plant(&mut rng, &mut d, &mut exp);
                }
                (d.build(&mut rng), d.len(), None)
            }
            Kind::TooFewSentences => {
                let mut d = DocBuilder::default();
                while d.len() < 4 {
                    d.sentence(uniq.next(&mut rng, &ITALIAN, 160));
                }
                assert!(d.kept_chars() >= 500);
                (d.build(&mut rng), 4, Some("TooFewSentences"))
            }
            Kind::TooFewAfterFiltering => {
                let mut d = DocBuilder::default();
                while d.len() < 4 {
                    d.sentence(uniq.next(&mut rng, &ITALIAN, 160));
                }
                plant(&mut rng, &mut d, &mut exp);
                plant(&mut rng, &mut d, &mut exp);
                (d.build(&mut rng), 6, Some("TooFewSentences"))
            }
            Kind::TooShort => {
                let mut d = DocBuilder::default();
                let count = 5;
                while d.len() < count {
                    d.sentence(uniq.next_short(&mut rng, &ITALIAN));
                }
                if d.kept_chars() >= 500 {
                    panic!("short document came out at {} chars", d.kept_chars());
                }
                (d.build(&mut rng), count, Some("TooShort"))
            }
            Kind::TooLong => {
                let mut d = DocBuilder::default();
                while d.kept_chars() <= 50_500 {
                    let min = rng.range(80, 200);
                    d.sentence(uniq.next(&mut rng, &ITALIAN, min));
                }
                (d.build(&mut rng), d.len(), Some("TooLong"))
            }
            Kind::English | Kind::German => {
                let lex = if kind == Kind::English { &ENGLISH } else { &GERMAN };
                let mut d = DocBuilder::default();
                while d.len() < 6 || d.kept_chars() < 600 {
                    let min = rng.range(60, 140);
                    d.sentence(sentence(&mut rng, lex, min));
                }
                (d.build(&mut rng), d.len(), Some("WrongLanguage"))
            }
            Kind::ExactCopy => {
                let src = &sources[rng.below(sources.len())];
                (src.text.clone(), src.sentences.len(), Some("Duplicate"))
            }
            Kind::SharedWindow => {
                let src = &sources[rng.below(sources.len())];
                let start = rng.below(src.sentences.len() - 2);
                let window: Vec<String> = src.sentences[start..start + 3].to_vec();
                let mut d = DocBuilder::default();
                for _ in 0..3 {
                    d.sentence(uniq.next(&mut rng, &ITALIAN, 90));
                }
                for s in window {
                    d.sentence(s);
                }
                for _ in 0..3 {
                    d.sentence(uniq.next(&mut rng, &ITALIAN, 90));
                }
                (d.build(&mut rng), d.len(), Some("Duplicate"))
            }
        };
        exp.sentences_in += sentences_in as u64;
        match reason {
            Some(r) => *exp.document.get_mut(r).unwrap() += 1,
            None => exp.documents_out += 1,
        }
        let u = url(&mut rng, n);
        let ts = timestamp(&mut rng);
        docs.push(record_json(&text, &u, &ts));
    }

    let per_shard = DOCUMENTS / SHARDS;
    let mut shards: Vec<Vec<String>> = docs.chunks(per_shard).map(|c| c.to_vec()).collect();
    // malformed lines in a few shards, counted separately from documents
    for (k, bad) in MALFORMED.iter().enumerate() {
        let shard = &mut shards[1 + 2 * k];
        let at = rng.below(shard.len());
        shard.insert(at, bad.to_string());
    }
    MixedFixture { shards, expected: exp }
}

/// Sentences of a document made only of template sentences.
fn split_plain(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    for line in text.split('\n') {
        let mut cur = String::new();
        let chars: Vec<char> = line.chars().collect();
        for (i, &c) in chars.iter().enumerate() {
            cur.push(c);
            if matches!(c, '.' | '!' | '?') && chars.get(i + 1).is_none_or(|&n| n == ' ') {
                out.push(cur.trim().to_string());
                cur.clear();
            }
        }
        if !cur.trim().is_empty() {
            out.push(cur.trim().to_string());
        }
    }
    out
}

/// Characters of every document in the fixture, for sanity checks.
pub fn total_chars(f: &MixedFixture) -> usize {
    f.shards.iter().flatten().map(|l| char_len(l)).sum()
}
