//! Template sentences, planted junk lines and document assembly.

use std::collections::HashSet;

use crate::lexicon::Lexicon;
use crate::rng::Rng;

pub fn char_len(s: &str) -> usize {
    s.chars().count()
}

/// One sentence of at least `min_chars` characters (before the final
/// punctuation), always starting uppercase and ending in `.`, `!` or `?`.
pub fn sentence(rng: &mut Rng, lex: &Lexicon, min_chars: usize) -> String {
    let mut s = format!("{} {} {}", rng.pick(lex.subjects), rng.pick(lex.verbs), rng.pick(lex.objects));
    let mut first = true;
    while first || char_len(&s) < min_chars {
        s.push_str(if first { " " } else { ", " });
        s.push_str(rng.pick(lex.complements));
        first = false;
    }
    s.push(match rng.below(20) {
        0 => '!',
        1 => '?',
        _ => '.',
    });
    s
}

/// A sentence with no complement and no padding: the shortest the
/// templates produce.
pub fn short_sentence(rng: &mut Rng, lex: &Lexicon) -> String {
    format!("{} {} {}.", rng.pick(lex.subjects), rng.pick(lex.verbs), rng.pick(lex.objects))
}

/// Hands out sentences never produced before by this instance.
#[derive(Default)]
pub struct UniqueSentences {
    seen: HashSet<String>,
}

impl UniqueSentences {
    pub fn next(&mut self, rng: &mut Rng, lex: &Lexicon, min_chars: usize) -> String {
        loop {
            let s = sentence(rng, lex, min_chars);
            if self.seen.insert(s.clone()) {
                return s;
            }
        }
    }

    pub fn next_short(&mut self, rng: &mut Rng, lex: &Lexicon) -> String {
        loop {
            let s = short_sentence(rng, lex);
            if self.seen.insert(s.clone()) {
                return s;
            }
        }
    }
}

/// Sentence-level violations, in the filter's rule order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Plant {
    Boilerplate,
    BadWord,
    TooFewWords,
    WordTooLong,
    BadTerminal,
}

impl Plant {
    pub const ALL: [Plant; 5] = [Plant::Boilerplate, Plant::BadWord, Plant::TooFewWords, Plant::WordTooLong, Plant::BadTerminal];

    pub fn name(self) -> &'static str {
        match self {
            Plant::Boilerplate => "Boilerplate",
            Plant::BadWord => "BadWord",
            Plant::TooFewWords => "TooFewWords",
            Plant::WordTooLong => "WordTooLong",
            Plant::BadTerminal => "BadTerminal",
        }
    }
}

const BOILERPLATE_LINES: &[&str] = &[
    "Questo sito utilizza cookie tecnici e di terze parti per migliorare la navigazione.",
    "Copyright 2021 Edizioni del Borgo, tutti i diritti riservati.",
    "Prima di proseguire leggi l'informativa privacy completa.",
    "Lorem ipsum dolor sit amet, consectetur adipiscing elit.",
    "Per vedere questo contenuto abilita JavaScript nel tuo browser.",
    "Continuando la navigazione acconsenti all'uso dei cookie.",
    "Il trattamento dei dati personali avviene secondo la normativa vigente.",
    "var _gaq = _gaq || []; _gaq.push(['_trackPageview']);",
];

const BADWORD_LINES: &[&str] = &[
    "Quel vicino si comporta davvero da stronzo con tutti.",
    "Che giornata di merda abbiamo passato ieri in ufficio.",
    "Smettila di dire cazzate davanti ai bambini.",
    "Mi ha risposto con un vaffanculo e se ne è andato.",
    "Quella partita è stata una vera stronzata dall'inizio alla fine.",
    "Porca troia, il treno è di nuovo in ritardo!",
];

const SHORT_LINES: &[&str] = &[
    "Grazie mille.",
    "Leggi tutto.",
    "Torna su.",
    "Buona lettura!",
    "Commenti chiusi.",
    "Condividi.",
    "Fine.",
    "Vai!",
];

const NO_TERMINAL_LINES: &[&str] = &[
    "Home Chi siamo Servizi Contatti",
    "Condividi su Facebook e WhatsApp",
    "Ecco gli ingredienti necessari per quattro persone:",
    "Articoli correlati nella stessa categoria",
    "Iscriviti alla nostra newsletter settimanale",
    "Pubblicato il 12 marzo 2020 alle ore 10",
    "Tag cronaca locale eventi cultura",
    "Ti potrebbe interessare anche",
];

/// One line violating exactly `plant`.
pub fn planted_line(rng: &mut Rng, plant: Plant) -> String {
    match plant {
        Plant::Boilerplate => rng.pick(BOILERPLATE_LINES).to_string(),
        Plant::BadWord => rng.pick(BADWORD_LINES).to_string(),
        Plant::TooFewWords => rng.pick(SHORT_LINES).to_string(),
        Plant::WordTooLong => {
            let n = rng.range(1001, 1400);
            let token: String = (0..n).map(|_| (b'a' + rng.below(26) as u8) as char).collect();
            format!("Il file conteneva la stringa {token} senza alcuno spazio.")
        }
        Plant::BadTerminal => rng.pick(NO_TERMINAL_LINES).to_string(),
    }
}

/// A document body: regular sentences flow in paragraphs; planted lines
/// always sit alone on their own line.
#[derive(Debug, Clone, Default)]
pub struct DocBuilder {
    parts: Vec<(String, bool)>,
}

impl DocBuilder {
    pub fn sentence(&mut self, s: String) -> &mut Self {
        self.parts.push((s, false));
        self
    }

    pub fn line(&mut self, s: String) -> &mut Self {
        self.parts.push((s, true));
        self
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Inserts a planted line at a random position.
    pub fn insert_line(&mut self, rng: &mut Rng, s: String) {
        let at = rng.below(self.parts.len() + 1);
        self.parts.insert(at, (s, true));
    }

    pub fn build(&self, rng: &mut Rng) -> String {
        let mut out = String::new();
        let mut prev_line = true;
        for (text, own_line) in &self.parts {
            if !out.is_empty() {
                if *own_line || prev_line || rng.chance(0.15) {
                    out.push('\n');
                } else {
                    out.push(' ');
                }
            }
            out.push_str(text);
            prev_line = *own_line;
        }
        out
    }

    /// Characters of the text the sentence filters keep, joined by single
    /// spaces.
    pub fn kept_chars(&self) -> usize {
        let kept: Vec<&str> = self.parts.iter().filter(|p| !p.1).map(|p| p.0.as_str()).collect();
        kept.iter().map(|s| char_len(s)).sum::<usize>() + kept.len().saturating_sub(1)
    }
}

pub fn record_json(text: &str, url: &str, timestamp: &str) -> String {
    serde_json::json!({ "text": text, "url": url, "timestamp": timestamp }).to_string()
}

pub fn url(rng: &mut Rng, n: usize) -> String {
    const HOSTS: &[&str] = &["notizie-locali.it", "ilgiornaledelborgo.it", "cucinadicasa.it", "forum-viaggi.it", "example.org"];
    format!("https://{}/articolo/{n}", rng.pick(HOSTS))
}

pub fn timestamp(rng: &mut Rng) -> String {
    format!(
        "2020-{:02}-{:02}T{:02}:{:02}:{:02}Z",
        rng.range(1, 12),
        rng.range(1, 28),
        rng.below(24),
        rng.below(60),
        rng.below(60)
    )
}
