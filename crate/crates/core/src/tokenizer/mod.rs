//! Unigram language-model subword tokenizer: training, Viterbi encoding and
//! exact decoding.

pub mod lattice;
pub mod normalize;
pub mod trainer;
pub mod vocab;

pub use normalize::{normalize, pretokenize, WORD_BOUNDARY};
pub use trainer::{corpus_loglik, em_step, prune, seed_vocab, ScoredPiece, UnigramTrainer, WordCounts, WordCountsBuilder};
pub use vocab::{PieceKind, Segmentation, UnigramVocab};

pub const PAD_ID: u32 = 0;
pub const EOS_ID: u32 = 1;
pub const UNK_ID: u32 = 2;
pub const SENTINEL_BASE: u32 = 3;
pub const NUM_SENTINELS: u32 = 100;
/// First id after the special and sentinel pieces.
pub const FIRST_BYTE_ID: u32 = SENTINEL_BASE + NUM_SENTINELS;

/// Id of sentinel `k` (`<extra_id_k>`).
pub fn sentinel_id(k: u32) -> u32 {
    assert!(k < NUM_SENTINELS, "sentinel {k} out of range");
    SENTINEL_BASE + k
}

pub fn is_sentinel(id: u32) -> bool {
    (SENTINEL_BASE..FIRST_BYTE_ID).contains(&id)
}

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum TokenizerError {
    #[error("training corpus is empty")]
    EmptyCorpus,
    #[error("character {0:?} is not covered by the vocabulary")]
    Coverage(char),
    #[error("invalid tokenizer configuration: {0}")]
    InvalidConfig(String),
    #[error("vocab file line {line}: {reason}")]
    VocabFormat { line: usize, reason: String },
    #[error("id {0} is outside the vocabulary")]
    UnknownId(u32),
    #[error("vocab i/o: {0}")]
    Io(String),
}
