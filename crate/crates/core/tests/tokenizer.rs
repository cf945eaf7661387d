//! Unigram tokenizer: exact Viterbi, monotone EM, lossless round trips and
//! exact vocabulary size.

use corpusforge_core::tokenizer::{
    corpus_loglik, em_step, normalize, seed_vocab, ScoredPiece, UnigramTrainer, UnigramVocab, WordCounts,
};
use corpusforge_testkit::oracle::{ab_strings, best_segmentation_score, TOY_PIECES};
use corpusforge_testkit::rng::Rng;
use corpusforge_testkit::tokcorpus;

#[test]
fn viterbi_matches_brute_force_on_toy_vocab() {
    let mut rng = Rng::new(15);
    let pieces: Vec<ScoredPiece> = TOY_PIECES
        .iter()
        .map(|p| ScoredPiece::new(*p, -1.0 - (rng.next_u64() % 1_000_000) as f64 / 200_000.0))
        .collect();
    let lp = |s: &str| pieces.iter().find(|p| p.piece == s).map(|p| p.logprob);
    let vocab = UnigramVocab::from_pieces(pieces.clone(), false);
    for s in ab_strings(12) {
        let seg = vocab.encode_word(&s).unwrap();
        let best = best_segmentation_score(&s, &lp);
        assert!((seg.score - best).abs() < 1e-9, "{s}: viterbi {} vs {best}", seg.score);
        let rebuilt: String = seg.piece_ids.iter().map(|&id| vocab.piece(id).unwrap()).collect();
        assert_eq!(rebuilt, s);
        let summed: f64 = seg.piece_ids.iter().map(|&id| vocab.logprob(id).unwrap()).sum();
        assert!((summed - seg.score).abs() < 1e-9);
    }
}

#[test]
fn em_loglik_never_decreases() {
    let lines = tokcorpus::lines(150_000, 3);
    let corpus = WordCounts::from_texts(lines.iter().map(String::as_str));
    let mut pieces = seed_vocab(&corpus, 3000, 8).unwrap();
    let mut history = Vec::new();
    for _ in 0..20 {
        let (next, loglik) = em_step(&pieces, &corpus).unwrap();
        history.push(loglik);
        pieces = next;
    }
    history.push(corpus_loglik(&pieces, &corpus).unwrap());
    for w in history.windows(2) {
        assert!(w[1] >= w[0] - 1e-9 * w[0].abs(), "loglik fell from {} to {}", w[0], w[1]);
    }
    assert!(history.last().unwrap() > &history[0]);
}

#[test]
fn decode_inverts_encode_on_10k_lines() {
    let train = tokcorpus::lines(300_000, 4);
    let corpus = WordCounts::from_texts(train.iter().map(String::as_str));
    let vocab = UnigramTrainer::with_vocab_size(1200).train(&corpus).unwrap();
    assert_eq!(vocab.len(), 1200);
    let mut lines = tokcorpus::lines(3_000_000, 5);
    lines.truncate(10_000);
    assert_eq!(lines.len(), 10_000);
    for (i, line) in lines.iter_mut().enumerate() {
        // characters never seen in training go through byte fallback
        if i % 25 == 0 {
            line.push_str("  漢字\tと 🚀 ∑x² ﬁne");
        }
    }
    for line in &lines {
        let ids = vocab.encode(line).unwrap().piece_ids;
        assert_eq!(vocab.decode(&ids).unwrap(), normalize(line), "{line}");
    }
}

#[test]
fn trained_vocab_has_the_exact_target_size() {
    let train = tokcorpus::lines(200_000, 6);
    let corpus = WordCounts::from_texts(train.iter().map(String::as_str));
    for target in [400, 700] {
        let vocab = UnigramTrainer::with_vocab_size(target).train(&corpus).unwrap();
        assert_eq!(vocab.len(), target);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("vocab.jsonl");
        vocab.save(&path).unwrap();
        let back = UnigramVocab::load(&path).unwrap();
        assert_eq!(back.len(), target);
        let text = &train[0];
        assert_eq!(back.encode(text).unwrap(), vocab.encode(text).unwrap());
    }
}
