//! Web-like shards of arbitrary size, streamed to a writer. About half of
//! the text bytes are planted violations: junk lines inside articles,
//! foreign-language pages, stubs, oversized dumps and syndicated copies.

use std::collections::VecDeque;
use std::io::{self, Write};

use crate::lexicon::{ENGLISH, GERMAN, ITALIAN};
use crate::rng::Rng;
use crate::text::{planted_line, record_json, sentence, short_sentence, timestamp, url, DocBuilder, Plant};

/// Byte accounting of a generated corpus (UTF-8 bytes of document text).
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct WebPlan {
    pub documents: u64,
    pub text_bytes: u64,
    /// Bytes belonging to planted violations (whole rejected documents or
    /// junk lines).
    pub planted_bytes: u64,
    /// Bytes written to the writer (JSON lines).
    pub file_bytes: u64,
}

impl WebPlan {
    pub fn planted_fraction(&self) -> f64 {
        self.planted_bytes as f64 / self.text_bytes.max(1) as f64
    }
}

enum Page {
    Article,
    Copy,
    Stub,
    Foreign,
    Dump,
}

fn pick_page(rng: &mut Rng) -> Page {
    match rng.below(1000) {
        0..=519 => Page::Article,
        520..=619 => Page::Copy,
        620..=749 => Page::Stub,
        750..=995 => Page::Foreign,
        _ => Page::Dump,
    }
}

/// Writes web-like JSON lines until at least `target_bytes` have been
/// written.
pub fn write_corpus<W: Write>(out: &mut W, target_bytes: u64, seed: u64) -> io::Result<WebPlan> {
    let mut rng = Rng::new(seed);
    let mut plan = WebPlan::default();
    let mut recent: VecDeque<String> = VecDeque::new();
    while plan.file_bytes < target_bytes {
        let (text, planted) = match pick_page(&mut rng) {
            Page::Article => {
                let mut d = DocBuilder::default();
                let n = rng.range(6, 22);
                while d.len() < n || d.kept_chars() < 600 {
                    let min = rng.range(50, 160);
                    d.sentence(sentence(&mut rng, &ITALIAN, min));
                }
                let junk = rng.range(0, 6);
                let mut junk_bytes = 0;
                for _ in 0..junk {
                    let p = match rng.below(10) {
                        0..=2 => Plant::BadTerminal,
                        3..=5 => Plant::Boilerplate,
                        6..=7 => Plant::TooFewWords,
                        8 => Plant::BadWord,
                        _ => Plant::BadTerminal,
                    };
                    let line = planted_line(&mut rng, p);
                    junk_bytes += line.len() + 1;
                    d.insert_line(&mut rng, line);
                }
                let text = d.build(&mut rng);
                if recent.len() == 64 {
                    recent.pop_front();
                }
                if junk == 0 {
                    recent.push_back(text.clone());
                }
                (text, junk_bytes)
            }
            Page::Copy if !recent.is_empty() => {
                let text = recent[rng.below(recent.len())].clone();
                let n = text.len();
                (text, n)
            }
            Page::Copy | Page::Stub => {
                let mut d = DocBuilder::default();
                for _ in 0..rng.range(1, 4) {
                    d.sentence(short_sentence(&mut rng, &ITALIAN));
                }
                d.line(planted_line(&mut rng, Plant::BadTerminal));
                let text = d.build(&mut rng);
                let n = text.len();
                (text, n)
            }
            Page::Foreign => {
                let lex = if rng.chance(0.6) { &ENGLISH } else { &GERMAN };
                let mut d = DocBuilder::default();
                let n = rng.range(6, 20);
                while d.len() < n {
                    let min = rng.range(50, 150);
                    d.sentence(sentence(&mut rng, lex, min));
                }
                let text = d.build(&mut rng);
                let n = text.len();
                (text, n)
            }
            Page::Dump => {
                let mut d = DocBuilder::default();
                while d.kept_chars() <= 51_000 {
                    let min = rng.range(60, 200);
                    d.sentence(sentence(&mut rng, &ITALIAN, min));
                }
                let text = d.build(&mut rng);
                let n = text.len();
                (text, n)
            }
        };
        let u = url(&mut rng, plan.documents as usize);
        let ts = timestamp(&mut rng);
        let line = record_json(&text, &u, &ts);
        out.write_all(line.as_bytes())?;
        out.write_all(b"\n")?;
        plan.documents += 1;
        plan.text_bytes += text.len() as u64;
        plan.planted_bytes += planted as u64;
        plan.file_bytes += line.len() as u64 + 1;
    }
    out.flush()?;
    Ok(plan)
}
