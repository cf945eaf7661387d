//! Hand-written rule cases: for every sentence and document rule, inputs
//! that must trigger it and near misses that must not, plus the exact
//! boundaries of each threshold. Expectations are reason names, or `None`
//! for "kept".

use crate::lexicon::{ENGLISH, GERMAN, ITALIAN};
use crate::rng::Rng;
use crate::text::{char_len, sentence, UniqueSentences};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Level {
    Sentence,
    Document,
}

#[derive(Debug, Clone)]
pub struct Case {
    pub name: String,
    pub level: Level,
    /// Rule the case exercises.
    pub rule: &'static str,
    /// A sentence, or documents processed in order; the verdict of the
    /// last one is checked (earlier ones feed deduplication).
    pub inputs: Vec<String>,
    pub expect: Option<&'static str>,
}

impl Case {
    fn sentence(name: &str, rule: &'static str, text: impl Into<String>, expect: Option<&'static str>) -> Self {
        Case { name: name.into(), level: Level::Sentence, rule, inputs: vec![text.into()], expect }
    }

    fn document(name: &str, rule: &'static str, inputs: Vec<String>, expect: Option<&'static str>) -> Self {
        Case { name: name.into(), level: Level::Document, rule, inputs, expect }
    }

    pub fn positive(&self) -> bool {
        self.expect == Some(self.rule)
    }
}

fn letters(n: usize) -> String {
    "abcdefghij".chars().cycle().take(n).collect()
}

fn long_word_sentence(n: usize) -> String {
    format!("Il file conteneva la stringa {} senza spazi.", letters(n))
}

pub fn sentence_cases() -> Vec<Case> {
    let keep = None;
    let bp = Some("Boilerplate");
    let bw = Some("BadWord");
    let few = Some("TooFewWords");
    let long = Some("WordTooLong");
    let term = Some("BadTerminal");
    vec![
        Case::sentence("cookie notice", "Boilerplate", "Questo sito utilizza cookie tecnici per migliorare la navigazione.", bp),
        Case::sentence("placeholder text", "Boilerplate", "Lorem ipsum dolor sit amet, consectetur adipiscing elit.", bp),
        Case::sentence("privacy policy", "Boilerplate", "Prima di continuare leggi la nostra Privacy Policy aggiornata.", bp),
        Case::sentence("javascript", "Boilerplate", "Per vedere il video devi abilitare JavaScript nel browser.", bp),
        Case::sentence("website word", "Boilerplate", "Il sito archeologico resta aperto anche durante le feste.", keep),
        Case::sentence("cookie as food", "Boilerplate", "Ho preparato dei biscotti al burro per la merenda.", keep),
        Case::sentence("rights without notice", "Boilerplate", "I diritti dei lavoratori sono stati discussi in aula.", keep),
        Case::sentence("italian slur", "BadWord", "Quel tizio si comporta proprio da bastardo con tutti.", bw),
        Case::sentence("uppercase with punctuation", "BadWord", "Ma che CAZZO stai facendo adesso?", bw),
        Case::sentence("imperative", "BadWord", "Mi ha mandato a fanculo senza alcun motivo.", bw),
        Case::sentence("longer word containing entry", "BadWord", "Il cazzotto gli ha rotto il naso ieri sera.", keep),
        Case::sentence("diminutive", "BadWord", "Il bastardino del vicino abbaia tutta la notte.", keep),
        Case::sentence("entry inside a word", "BadWord", "La cultura locale è ricca di tradizioni antiche.", keep),
        Case::sentence("two words", "TooFewWords", "Grazie mille.", few),
        Case::sentence("one word", "TooFewWords", "Fine.", few),
        Case::sentence("two words exclaimed", "TooFewWords", "Leggi tutto!", few),
        Case::sentence("three words", "TooFewWords", "Uno due tre.", keep),
        Case::sentence("three words with closer", "TooFewWords", "Torna su presto!", keep),
        Case::sentence("four words", "TooFewWords", "Va tutto molto bene.", keep),
        Case::sentence("1001 chars", "WordTooLong", long_word_sentence(1001), long),
        Case::sentence("1500 chars", "WordTooLong", long_word_sentence(1500), long),
        Case::sentence("5000 chars", "WordTooLong", long_word_sentence(5000), long),
        Case::sentence("1000 chars", "WordTooLong", long_word_sentence(1000), keep),
        Case::sentence("999 chars", "WordTooLong", long_word_sentence(999), keep),
        Case::sentence("long ordinary word", "WordTooLong", "Correva precipitevolissimevolmente verso la stazione.", keep),
        Case::sentence("menu", "BadTerminal", "Home Chi siamo Servizi Contatti", term),
        Case::sentence("colon", "BadTerminal", "Ecco gli ingredienti necessari per quattro persone:", term),
        Case::sentence("date line", "BadTerminal", "Pubblicato il 12 marzo 2020 alle ore 10", term),
        Case::sentence("closing guillemet", "BadTerminal", "Poi ha detto: «Arrivo subito.»", keep),
        Case::sentence("question", "BadTerminal", "Davvero avete vinto la partita?", keep),
        Case::sentence("ellipsis", "BadTerminal", "E poi non è successo più niente…", keep),
    ]
}

/// Italian document of exactly `chars` characters and `sentences`
/// sentences, joined by single spaces.
pub fn exact_document(seed: u64, sentences: usize, chars: usize) -> String {
    const FILLER: &[&str] = &["della", "nostra", "antica", "città", "sempre", "molto", "bella", "grande"];
    let mut rng = Rng::new(seed);
    let per = chars / sentences;
    loop {
        let mut uniq = UniqueSentences::default();
        let mut parts: Vec<String> = (0..sentences)
            .map(|_| if per < 160 { uniq.next_short(&mut rng, &ITALIAN) } else { uniq.next(&mut rng, &ITALIAN, per - 90) })
            .collect();
        let total = parts.iter().map(|s| char_len(s)).sum::<usize>() + sentences - 1;
        if total + 2 > chars {
            continue;
        }
        let last = parts.pop().unwrap();
        let mut body = last[..last.len() - 1].to_string();
        let mut remaining = chars - total;
        let mut k = 0;
        while remaining >= 9 {
            let w = FILLER[k % FILLER.len()];
            body.push(' ');
            body.push_str(w);
            remaining -= 1 + char_len(w);
            k += 1;
        }
        if remaining >= 2 {
            body.push(' ');
            body.push_str(&"o".repeat(remaining - 1));
        }
        body.push('.');
        parts.push(body);
        let doc = parts.join(" ");
        assert_eq!(char_len(&doc), chars);
        return doc;
    }
}

fn foreign(seed: u64, lex: &crate::lexicon::Lexicon) -> String {
    let mut rng = Rng::new(seed);
    let mut parts = Vec::new();
    while parts.len() < 8 {
        parts.push(sentence(&mut rng, lex, 90));
    }
    parts.join(" ")
}

const FRENCH: &str = "Le maire a présenté hier soir un nouveau projet pour l'école du quartier. \
    Les habitants ont posé beaucoup de questions sur le coût des travaux et sur le calendrier. \
    Une jeune chercheuse a expliqué comment les enfants utiliseront la nouvelle bibliothèque. \
    La réunion s'est terminée tard, mais tout le monde semblait plutôt satisfait du résultat. \
    Le conseil municipal votera le budget définitif au début du mois prochain. \
    En attendant, les parents peuvent consulter les plans affichés à la mairie pendant toute la semaine.";

fn italian(seed: u64, sentences: usize) -> Vec<String> {
    let mut rng = Rng::new(seed);
    let mut uniq = UniqueSentences::default();
    (0..sentences).map(|_| uniq.next(&mut rng, &ITALIAN, 110)).collect()
}

pub fn document_cases() -> Vec<Case> {
    let keep = None;
    let few = Some("TooFewSentences");
    let short = Some("TooShort");
    let long = Some("TooLong");
    let lang = Some("WrongLanguage");
    let dup = Some("Duplicate");
    let one = |s: String| vec![s];
    let join = |v: &[String]| v.join(" ");

    let src = italian(100, 8);
    let other = italian(101, 8);
    let mut shared = other[..3].to_vec();
    shared.extend_from_slice(&src[2..5]);
    shared.extend_from_slice(&other[3..6]);
    let mut two_shared = other[..3].to_vec();
    two_shared.extend_from_slice(&src[2..4]);
    two_shared.extend_from_slice(&other[3..6]);
    let shouted: Vec<String> = src.iter().map(|s| s.to_uppercase()).collect();
    // a rejected document claims nothing: its sentences may reappear
    let four = italian(102, 6);
    let rejected_then_reused = vec![join(&four[..4]), join(&four)];
    // a sentence-filtered junk line between copied sentences does not hide the copy
    let mut with_junk = src[..4].to_vec();
    with_junk.push("Home Chi siamo Servizi Contatti\n".into());
    with_junk.extend_from_slice(&src[4..]);

    vec![
        Case::document("one sentence", "TooFewSentences", one(exact_document(1, 1, 700)), few),
        Case::document("three sentences", "TooFewSentences", one(exact_document(2, 3, 900)), few),
        Case::document("four sentences", "TooFewSentences", one(exact_document(3, 4, 900)), few),
        Case::document("five sentences", "TooFewSentences", one(exact_document(4, 5, 900)), keep),
        Case::document("six sentences", "TooFewSentences", one(exact_document(5, 6, 900)), keep),
        Case::document("twelve sentences", "TooFewSentences", one(exact_document(6, 12, 2000)), keep),
        Case::document("300 chars", "TooShort", one(exact_document(7, 5, 300)), short),
        Case::document("450 chars", "TooShort", one(exact_document(8, 5, 450)), short),
        Case::document("499 chars", "TooShort", one(exact_document(9, 5, 499)), short),
        Case::document("500 chars", "TooShort", one(exact_document(10, 5, 500)), keep),
        Case::document("501 chars", "TooShort", one(exact_document(11, 5, 501)), keep),
        Case::document("800 chars", "TooShort", one(exact_document(12, 6, 800)), keep),
        Case::document("50001 chars", "TooLong", one(exact_document(13, 300, 50_001)), long),
        Case::document("60000 chars", "TooLong", one(exact_document(14, 350, 60_000)), long),
        Case::document("80000 chars", "TooLong", one(exact_document(15, 450, 80_000)), long),
        Case::document("50000 chars", "TooLong", one(exact_document(16, 300, 50_000)), keep),
        Case::document("49999 chars", "TooLong", one(exact_document(17, 300, 49_999)), keep),
        Case::document("20000 chars", "TooLong", one(exact_document(18, 120, 20_000)), keep),
        Case::document("english", "WrongLanguage", one(foreign(19, &ENGLISH)), lang),
        Case::document("german", "WrongLanguage", one(foreign(20, &GERMAN)), lang),
        Case::document("french", "WrongLanguage", one(FRENCH.to_string()), lang),
        Case::document("italian news", "WrongLanguage", one(join(&italian(21, 7))), keep),
        Case::document("italian with english name", "WrongLanguage", one(format!("{} Il festival si chiama Summer Sound.", join(&italian(22, 6)))), keep),
        Case::document("italian paragraphs", "WrongLanguage", one(italian(23, 9).join("\n")), keep),
        Case::document("exact copy", "Duplicate", vec![join(&src), join(&src)], dup),
        Case::document("shared window", "Duplicate", vec![join(&src), join(&shared)], dup),
        Case::document("case and spacing", "Duplicate", vec![join(&src), shouted.join("  \n")], dup),
        Case::document("junk line inside copy", "Duplicate", vec![join(&src), with_junk.join(" ")], dup),
        Case::document("two shared sentences", "Duplicate", vec![join(&src), join(&two_shared)], keep),
        Case::document("reuses a rejected document", "Duplicate", rejected_then_reused, keep),
        Case::document("unrelated", "Duplicate", vec![join(&src), join(&other)], keep),
    ]
}

/// Threshold boundaries: each pair straddles a limit.
pub fn boundary_cases() -> Vec<Case> {
    let keep = None;
    vec![
        Case::sentence("2 words", "TooFewWords", "Grazie mille.", Some("TooFewWords")),
        Case::sentence("3 words", "TooFewWords", "Grazie mille davvero.", keep),
        Case::sentence("1000-char word", "WordTooLong", long_word_sentence(1000), keep),
        Case::sentence("1001-char word", "WordTooLong", long_word_sentence(1001), Some("WordTooLong")),
        Case::document("499 chars", "TooShort", vec![exact_document(30, 5, 499)], Some("TooShort")),
        Case::document("500 chars", "TooShort", vec![exact_document(31, 5, 500)], keep),
        Case::document("50000 chars", "TooLong", vec![exact_document(32, 300, 50_000)], keep),
        Case::document("50001 chars", "TooLong", vec![exact_document(33, 300, 50_001)], Some("TooLong")),
        Case::document("4 sentences", "TooFewSentences", vec![exact_document(34, 4, 800)], Some("TooFewSentences")),
        Case::document("5 sentences", "TooFewSentences", vec![exact_document(35, 5, 800)], keep),
    ]
}
