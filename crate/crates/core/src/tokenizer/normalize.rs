use unicode_normalization::UnicodeNormalization;

/// Marks the start of every word inside pieces.
pub const WORD_BOUNDARY: char = '▁';

/// NFKC, then every run of whitespace (the boundary marker included) becomes a
/// single space; leading and trailing whitespace is dropped.
pub fn normalize(text: &str) -> String {
    let nfkc: String = text.nfkc().map(|c| if c == WORD_BOUNDARY { ' ' } else { c }).collect();
    let mut out = String::with_capacity(nfkc.len());
    for w in nfkc.split_whitespace() {
        if !out.is_empty() {
            out.push(' ');
        }
        out.push_str(w);
    }
    out
}

/// Splits normalized text into words, each prefixed with [`WORD_BOUNDARY`].
pub fn pretokenize(normalized: &str) -> impl Iterator<Item = String> + '_ {
    normalized.split(' ').filter(|w| !w.is_empty()).map(|w| {
        let mut s = String::with_capacity(w.len() + WORD_BOUNDARY.len_utf8());
        s.push(WORD_BOUNDARY);
        s.push_str(w);
        s
    })
}
