//! Per-shard key spill files: for every candidate, its output counts and span
//! keys, little-endian.

use std::fs::File;
use std::io::{BufReader, BufWriter, ErrorKind, Read, Write};
use std::path::{Path, PathBuf};

use super::PipelineError;
use crate::document_filters::SpanKey;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CandidateMeta {
    pub sentences: u64,
    pub words: u64,
    pub bytes: u64,
}

pub struct KeysWriter {
    path: PathBuf,
    out: BufWriter<File>,
}

impl KeysWriter {
    pub fn create(path: &Path) -> Result<Self, PipelineError> {
        let f = File::create(path).map_err(|e| PipelineError::io(path, e))?;
        Ok(KeysWriter { path: path.to_path_buf(), out: BufWriter::with_capacity(64 * 1024, f) })
    }

    pub fn write(&mut self, meta: &CandidateMeta, keys: &[SpanKey]) -> Result<(), PipelineError> {
        let mut write = || -> std::io::Result<()> {
            self.out.write_all(&meta.sentences.to_le_bytes())?;
            self.out.write_all(&meta.words.to_le_bytes())?;
            self.out.write_all(&meta.bytes.to_le_bytes())?;
            self.out.write_all(&(keys.len() as u32).to_le_bytes())?;
            for k in keys {
                self.out.write_all(&k.0.to_le_bytes())?;
            }
            Ok(())
        };
        write().map_err(|e| PipelineError::io(&self.path, e))
    }

    pub fn finish(mut self) -> Result<(), PipelineError> {
        self.out.flush().map_err(|e| PipelineError::io(&self.path, e))
    }
}

pub struct KeysReader {
    path: PathBuf,
    input: BufReader<File>,
}

impl KeysReader {
    pub fn open(path: &Path) -> Result<Self, PipelineError> {
        let f = File::open(path).map_err(|e| PipelineError::io(path, e))?;
        Ok(KeysReader { path: path.to_path_buf(), input: BufReader::with_capacity(64 * 1024, f) })
    }

    fn read_u64(&mut self) -> std::io::Result<u64> {
        let mut b = [0u8; 8];
        self.input.read_exact(&mut b)?;
        Ok(u64::from_le_bytes(b))
    }

    /// Next candidate, `None` at a clean end of file.
    #[allow(clippy::should_implement_trait)]
    pub fn next(&mut self) -> Result<Option<(CandidateMeta, Vec<SpanKey>)>, PipelineError> {
        let sentences = match self.read_u64() {
            Ok(v) => v,
            Err(e) if e.kind() == ErrorKind::UnexpectedEof => return Ok(None),
            Err(e) => return Err(PipelineError::io(&self.path, e)),
        };
        let mut rest = || -> std::io::Result<(CandidateMeta, Vec<SpanKey>)> {
            let words = self.read_u64()?;
            let bytes = self.read_u64()?;
            let mut n = [0u8; 4];
            self.input.read_exact(&mut n)?;
            let n = u32::from_le_bytes(n) as usize;
            let mut keys = Vec::with_capacity(n);
            let mut k = [0u8; 16];
            for _ in 0..n {
                self.input.read_exact(&mut k)?;
                keys.push(SpanKey(u128::from_le_bytes(k)));
            }
            Ok((CandidateMeta { sentences, words, bytes }, keys))
        };
        rest().map(Some).map_err(|e| PipelineError::io(&self.path, e))
    }
}
