//! Held-out language identification snippets (Italian, English, German)
//! built from template sentences that share nothing with the profile seed
//! texts.

use crate::lexicon::{Lexicon, ENGLISH, GERMAN, ITALIAN};
use crate::rng::Rng;
use crate::text::{char_len, sentence};

pub const SNIPPETS: usize = 200;
pub const MIN_CHARS: usize = 200;
pub const SEED: u64 = 77;

/// `(lang, text)` pairs, languages interleaved.
pub fn build(seed: u64) -> Vec<(&'static str, String)> {
    let mut rng = Rng::new(seed);
    let langs: [&Lexicon; 3] = [&ITALIAN, &ENGLISH, &GERMAN];
    (0..SNIPPETS)
        .map(|i| {
            let lex = langs[i % 3];
            let mut text = String::new();
            while char_len(&text) < MIN_CHARS {
                if !text.is_empty() {
                    text.push(' ');
                }
                let min = rng.range(30, 110);
                text.push_str(&sentence(&mut rng, lex, min));
            }
            (lex.code, text)
        })
        .collect()
}

pub fn to_jsonl(snippets: &[(&str, String)]) -> String {
    snippets
        .iter()
        .map(|(lang, text)| serde_json::json!({ "lang": lang, "text": text }).to_string() + "\n")
        .collect()
}
