//! Segmentation lattices over a single word.
//!
//! An edge spans chars `start..end` of the word and carries a piece id and its
//! log-probability. Pieces are looked up by substring, so the lattice is built
//! in `O(len * max_piece_chars)` hash lookups.

/// Piece id plus score, as returned by a lookup.
pub type Scored = (u32, f64);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub start: usize,
    pub end: usize,
    pub id: u32,
    pub logprob: f64,
}

/// Id used for fallback edges over characters no piece covers.
pub const FALLBACK_ID: u32 = u32::MAX;

/// Byte offsets of every char boundary, including the end of the string.
pub fn char_boundaries(word: &str) -> Vec<usize> {
    let mut b: Vec<usize> = word.char_indices().map(|(i, _)| i).collect();
    b.push(word.len());
    b
}

/// All edges of the word. When `fallback` is set, a single-char edge with that
/// score and id [`FALLBACK_ID`] is added wherever no single-char piece exists.
pub fn build_edges<F>(word: &str, max_piece_chars: usize, lookup: F, fallback: Option<f64>) -> Vec<Edge>
where
    F: Fn(&str) -> Option<Scored>,
{
    let bounds = char_boundaries(word);
    let n = bounds.len() - 1;
    let mut edges = Vec::with_capacity(n * 2);
    for start in 0..n {
        let mut has_single = false;
        for end in (start + 1)..=n.min(start + max_piece_chars) {
            if let Some((id, logprob)) = lookup(&word[bounds[start]..bounds[end]]) {
                has_single |= end == start + 1;
                edges.push(Edge { start, end, id, logprob });
            }
        }
        if !has_single {
            if let Some(score) = fallback {
                edges.push(Edge { start, end: start + 1, id: FALLBACK_ID, logprob: score });
            }
        }
    }
    edges
}

/// Highest-scoring path. `None` when no path covers the word.
pub fn viterbi(n_chars: usize, edges: &[Edge]) -> Option<(Vec<Edge>, f64)> {
    let mut best = vec![f64::NEG_INFINITY; n_chars + 1];
    let mut back: Vec<Option<usize>> = vec![None; n_chars + 1];
    best[0] = 0.0;
    // edges are grouped by start in ascending order
    for (k, e) in edges.iter().enumerate() {
        if best[e.start] == f64::NEG_INFINITY {
            continue;
        }
        let s = best[e.start] + e.logprob;
        if s > best[e.end] {
            best[e.end] = s;
            back[e.end] = Some(k);
        }
    }
    if n_chars > 0 && back[n_chars].is_none() {
        return None;
    }
    let mut path = Vec::new();
    let mut pos = n_chars;
    while pos > 0 {
        let e = edges[back[pos]?];
        path.push(e);
        pos = e.start;
    }
    path.reverse();
    Some((path, best[n_chars]))
}

fn log_add(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a > b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// Forward-backward over the lattice. Returns the log marginal likelihood of
/// the word and calls `visit(edge, posterior)` for every edge on some path.
/// `None` when no path covers the word.
pub fn forward_backward(n_chars: usize, edges: &[Edge], mut visit: impl FnMut(&Edge, f64)) -> Option<f64> {
    let mut alpha = vec![f64::NEG_INFINITY; n_chars + 1];
    alpha[0] = 0.0;
    for e in edges {
        alpha[e.end] = log_add(alpha[e.end], alpha[e.start] + e.logprob);
    }
    let z = alpha[n_chars];
    if z == f64::NEG_INFINITY {
        return None;
    }
    let mut beta = vec![f64::NEG_INFINITY; n_chars + 1];
    beta[n_chars] = 0.0;
    for e in edges.iter().rev() {
        beta[e.start] = log_add(beta[e.start], e.logprob + beta[e.end]);
    }
    for e in edges {
        let lp = alpha[e.start] + e.logprob + beta[e.end] - z;
        if lp > f64::NEG_INFINITY {
            visit(e, lp.exp());
        }
    }
    Some(z)
}
