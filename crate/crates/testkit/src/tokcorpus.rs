//! Line corpora for tokenizer tests.

use crate::lexicon::ITALIAN;
use crate::rng::Rng;
use crate::text::sentence;

const EXTRAS: &[&str] = &[
    "Prezzo: 12,50 euro (IVA inclusa).",
    "Orario 8:30 - 19:00, chiuso il lunedì.",
    "È già passato un anno, però nessuno se n'è accorto.",
    "Perché così? Non lo so!",
    "Caffè, tè e cioccolata calda 🍫 per tutti.",
    "Tel. 0471 123456 oppure scrivete a info@example.org",
    "«Così è la vita», disse l'anziano con un sorriso 😊",
    "Temperatura minima -3°C, massima 7°C.",
    "Città, università, libertà: tre parole con l'accento.",
    "Ein kleiner Satz auf Deutsch, nur zur Abwechslung.",
];

/// Lines of Italian template text with occasional numbers, symbols and
/// emoji, totalling at least `target_bytes` bytes (newlines included).
pub fn lines(target_bytes: usize, seed: u64) -> Vec<String> {
    let mut rng = Rng::new(seed);
    let mut out = Vec::new();
    let mut bytes = 0;
    while bytes < target_bytes {
        let line = if rng.chance(0.05) {
            rng.pick(EXTRAS).to_string()
        } else {
            let n = rng.range(1, 3);
            (0..n)
                .map(|_| {
                    let min = rng_min(&mut rng);
                    sentence(&mut rng, &ITALIAN, min)
                })
                .collect::<Vec<_>>()
                .join(" ")
        };
        bytes += line.len() + 1;
        out.push(line);
    }
    out
}

fn rng_min(rng: &mut Rng) -> usize {
    rng.range(40, 140)
}

/// A few dozen short lines for EM experiments.
pub fn toy_lines() -> Vec<String> {
    let mut rng = Rng::new(5);
    let mut out: Vec<String> = (0..40).map(|_| sentence(&mut rng, &ITALIAN, 30)).collect();
    out.extend(EXTRAS.iter().take(4).map(|s| s.to_string()));
    out
}
