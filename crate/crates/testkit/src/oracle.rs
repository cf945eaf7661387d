//! Exhaustive reference computations for checking optimized code.

/// The 15-piece toy vocabulary over the alphabet {a, b}.
pub const TOY_PIECES: [&str; 15] = ["a", "b", "aa", "ab", "ba", "bb", "aaa", "aab", "aba", "abb", "baa", "bab", "bba", "bbb", "abab"];

/// Every string over {a, b} of 1 to `max_len` chars.
pub fn ab_strings(max_len: usize) -> Vec<String> {
    let mut out = Vec::new();
    for len in 1..=max_len {
        for bits in 0..(1u32 << len) {
            out.push((0..len).map(|i| if bits >> i & 1 == 1 { 'b' } else { 'a' }).collect());
        }
    }
    out
}

/// Best total log-probability over every segmentation of `s` into pieces
/// scored by `lp` (`None` when not a piece), by exhaustive recursion.
/// Negative infinity when no segmentation exists.
pub fn best_segmentation_score(s: &str, lp: &dyn Fn(&str) -> Option<f64>) -> f64 {
    if s.is_empty() {
        return 0.0;
    }
    s.char_indices()
        .map(|(i, c)| i + c.len_utf8())
        .filter_map(|k| lp(&s[..k]).map(|p| p + best_segmentation_score(&s[k..], lp)))
        .fold(f64::NEG_INFINITY, f64::max)
}
