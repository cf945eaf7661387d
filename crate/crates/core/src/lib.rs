//! Streaming cleaning and tokenization toolchain for web-crawled text corpora.
//!
//! The cleaning path runs per document: [`segmenter`] splits text into
//! sentences, [`sentence_filters`] drops boilerplate and junk sentences,
//! [`document_filters`] recomposes the survivors, applies length and
//! language gates and deduplicates on three-sentence windows, with
//! [`langid`] supplying the language check. [`pipeline`] runs all of it over
//! sharded JSON-lines input in parallel with output identical to a
//! sequential run.
//!
//! For model input, [`tokenizer`] trains and applies a unigram subword
//! vocabulary and [`span_corruption`] turns token sequences into
//! sentinel-masked input/target pairs.

pub mod corpus_io;
pub mod document_filters;
pub mod histogram;
pub mod langid;
pub mod pipeline;
pub mod resources;
pub mod rng;
pub mod segmenter;
pub mod sentence_filters;
pub mod span_corruption;
pub mod tokenizer;

pub use corpus_io::{Manifest, RawDocument, ShardRef};
pub use document_filters::{CleanDocument, DocumentReason};
pub use sentence_filters::SentenceReason;
