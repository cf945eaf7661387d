use serde::{Deserialize, Serialize};

use super::PipelineError;
use crate::corpus_io::{Manifest, RawDocument, ShardReader, DEFAULT_MAX_RECORD_BYTES};
use crate::rng::DetRng;
use crate::segmenter::count_words;

/// Size of the held-out validation subset used for model validation.
pub const DEFAULT_VALIDATION_SIZE: usize = 15_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelectedDocument {
    pub shard: usize,
    pub record: u64,
    #[serde(flatten)]
    pub doc: RawDocument,
}

fn documents(manifest: &Manifest) -> impl Iterator<Item = Result<(usize, u64, RawDocument), PipelineError>> + '_ {
    manifest.shards.iter().flat_map(|shard| {
        let reader = ShardReader::open(&shard.path, DEFAULT_MAX_RECORD_BYTES);
        let items: Box<dyn Iterator<Item = _>> = match reader {
            Ok(r) => Box::new(r.map(move |item| item.map(|(rec, d)| (shard.index, rec, d)).map_err(PipelineError::from))),
            Err(e) => Box::new(std::iter::once(Err(PipelineError::from(e)))),
        };
        items
    })
}

/// Seeded reservoir sample of `size` documents over the global (shard,
/// record) order, returned in that order. One pass, `size` documents held.
pub fn select_validation_subset(manifest: &Manifest, size: usize, seed: u64) -> Result<Vec<SelectedDocument>, PipelineError> {
    let mut rng = DetRng::new(seed);
    let mut reservoir: Vec<SelectedDocument> = Vec::with_capacity(size.min(1 << 16));
    let mut seen = 0u64;
    for item in documents(manifest) {
        let (shard, record, doc) = item?;
        let picked = SelectedDocument { shard, record, doc };
        if reservoir.len() < size {
            reservoir.push(picked);
        } else if size > 0 {
            let j = rng.below(seen + 1) as usize;
            if j < size {
                reservoir[j] = picked;
            }
        }
        seen += 1;
    }
    if (seen as usize) < size {
        return Err(PipelineError::CorpusTooSmall { available: seen, requested: size });
    }
    reservoir.sort_by_key(|d| (d.shard, d.record));
    Ok(reservoir)
}

/// Whitespace-delimited words over every document of the corpus.
pub fn word_count(manifest: &Manifest) -> Result<u64, PipelineError> {
    let mut total = 0u64;
    for item in documents(manifest) {
        total += count_words(&item?.2.text).0 as u64;
    }
    Ok(total)
}
