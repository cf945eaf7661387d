//! mC4-style JSON-lines shards: streaming reader, writer and manifests.
//!
//! Every shard is read one line at a time into a reused buffer, so memory is
//! bounded by the largest accepted record. Gzip input is detected from the
//! magic bytes, never from the file name.

use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use flate2::read::MultiGzDecoder;
use flate2::write::GzEncoder;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default cap on a single JSON line.
pub const DEFAULT_MAX_RECORD_BYTES: usize = 1 << 20;

const GZIP_MAGIC: [u8; 2] = [0x1f, 0x8b];

#[derive(Debug, Error)]
pub enum ShardError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("{path}:{line}: {reason}")]
    Parse {
        path: PathBuf,
        /// 1-based line number.
        line: u64,
        reason: String,
    },
}

impl ShardError {
    pub fn is_parse(&self) -> bool {
        matches!(self, ShardError::Parse { .. })
    }

    pub fn io(path: &Path, source: io::Error) -> Self {
        ShardError::Io { path: path.to_path_buf(), source }
    }
}

/// One raw mC4 record. Unknown JSON fields are ignored.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct RawDocument {
    pub text: String,
    #[serde(default)]
    pub url: String,
    #[serde(default)]
    pub timestamp: String,
}

/// A shard path and its position in the input manifest.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ShardRef {
    pub index: usize,
    pub path: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Compression {
    Plain,
    Gzip,
}

/// Ordered list of shards. Plain text, one path per line; blank lines and
/// `#` comments are skipped, relative paths resolve against the manifest's
/// own directory.
#[derive(Debug, Clone, Default)]
pub struct Manifest {
    pub shards: Vec<ShardRef>,
}

impl Manifest {
    pub fn load(path: &Path) -> Result<Self, ShardError> {
        let text = std::fs::read_to_string(path).map_err(|e| ShardError::io(path, e))?;
        let base = path.parent().unwrap_or_else(|| Path::new("."));
        let paths = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(|l| {
                let p = PathBuf::from(l);
                if p.is_absolute() {
                    p
                } else {
                    base.join(p)
                }
            });
        Ok(Self::from_paths(paths))
    }

    pub fn from_paths<I, P>(paths: I) -> Self
    where
        I: IntoIterator<Item = P>,
        P: Into<PathBuf>,
    {
        let shards = paths
            .into_iter()
            .enumerate()
            .map(|(index, p)| ShardRef { index, path: p.into() })
            .collect();
        Manifest { shards }
    }

    pub fn write(&self, path: &Path) -> io::Result<()> {
        let mut out = BufWriter::new(File::create(path)?);
        for shard in &self.shards {
            writeln!(out, "{}", shard.path.display())?;
        }
        out.flush()
    }

    pub fn len(&self) -> usize {
        self.shards.len()
    }

    pub fn is_empty(&self) -> bool {
        self.shards.is_empty()
    }
}

/// Streaming reader over one shard.
///
/// Yields `(record_index, RawDocument)` where `record_index` is the 0-based
/// line number. Malformed lines come out as [`ShardError::Parse`] and the
/// stream continues; an I/O failure ends the stream.
pub struct ShardReader {
    path: PathBuf,
    inner: Box<dyn BufRead + Send>,
    compression: Compression,
    max_record_bytes: usize,
    buf: Vec<u8>,
    line: u64,
    done: bool,
}

pub fn open_shard(shard: &ShardRef) -> Result<ShardReader, ShardError> {
    ShardReader::open(&shard.path, DEFAULT_MAX_RECORD_BYTES)
}

enum LineRead {
    Eof,
    Line,
    TooLong(usize),
}

impl ShardReader {
    pub fn open(path: &Path, max_record_bytes: usize) -> Result<Self, ShardError> {
        let file = File::open(path).map_err(|e| ShardError::io(path, e))?;
        let mut raw = BufReader::with_capacity(64 * 1024, file);
        let head = raw.fill_buf().map_err(|e| ShardError::io(path, e))?;
        let (inner, compression): (Box<dyn BufRead + Send>, _) = if head.starts_with(&GZIP_MAGIC) {
            (
                Box::new(BufReader::with_capacity(64 * 1024, MultiGzDecoder::new(raw))),
                Compression::Gzip,
            )
        } else {
            (Box::new(raw), Compression::Plain)
        };
        Ok(ShardReader {
            path: path.to_path_buf(),
            inner,
            compression,
            max_record_bytes,
            buf: Vec::new(),
            line: 0,
            done: false,
        })
    }

    pub fn compression(&self) -> Compression {
        self.compression
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    /// Reads up to and excluding the next `\n`. Lines longer than the cap are
    /// consumed and discarded without being buffered.
    fn read_line(&mut self) -> io::Result<LineRead> {
        self.buf.clear();
        let mut total = 0usize;
        let mut overflow = false;
        let mut any = false;
        loop {
            let chunk = match self.inner.fill_buf() {
                Ok(c) => c,
                Err(e) if e.kind() == io::ErrorKind::Interrupted => continue,
                Err(e) => return Err(e),
            };
            if chunk.is_empty() {
                break;
            }
            any = true;
            let (piece, found) = match memchr_newline(chunk) {
                Some(pos) => (&chunk[..pos], Some(pos)),
                None => (chunk, None),
            };
            total += piece.len();
            if !overflow {
                if total > self.max_record_bytes {
                    overflow = true;
                    self.buf.clear();
                } else {
                    self.buf.extend_from_slice(piece);
                }
            }
            let consumed = found.map_or(chunk.len(), |p| p + 1);
            self.inner.consume(consumed);
            if found.is_some() {
                break;
            }
        }
        if !any {
            return Ok(LineRead::Eof);
        }
        if overflow {
            return Ok(LineRead::TooLong(total));
        }
        if self.buf.last() == Some(&b'\r') {
            self.buf.pop();
        }
        Ok(LineRead::Line)
    }
}

fn memchr_newline(bytes: &[u8]) -> Option<usize> {
    bytes.iter().position(|&b| b == b'\n')
}

impl Iterator for ShardReader {
    type Item = Result<(u64, RawDocument), ShardError>;

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            if self.done {
                return None;
            }
            let read = match self.read_line() {
                Ok(r) => r,
                Err(e) => {
                    self.done = true;
                    return Some(Err(ShardError::io(&self.path, e)));
                }
            };
            let index = self.line;
            match read {
                LineRead::Eof => {
                    self.done = true;
                    return None;
                }
                LineRead::TooLong(len) => {
                    self.line += 1;
                    return Some(Err(ShardError::Parse {
                        path: self.path.clone(),
                        line: index + 1,
                        reason: format!(
                            "record of {len} bytes exceeds limit of {} bytes",
                            self.max_record_bytes
                        ),
                    }));
                }
                LineRead::Line => {
                    self.line += 1;
                    if self.buf.iter().all(u8::is_ascii_whitespace) {
                        continue;
                    }
                    return Some(match serde_json::from_slice::<RawDocument>(&self.buf) {
                        Ok(doc) => Ok((index, doc)),
                        Err(e) => Err(ShardError::Parse {
                            path: self.path.clone(),
                            line: index + 1,
                            reason: e.to_string(),
                        }),
                    });
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct WriteSummary {
    pub records: u64,
    /// Logical (uncompressed) size of the JSON-lines output.
    pub bytes: u64,
}

#[derive(Serialize)]
struct OutputRecord<'a> {
    text: &'a str,
    url: &'a str,
    timestamp: &'a str,
}

/// The JSON line (without newline) [`ShardWriter`] emits for a record.
pub fn record_line(text: &str, url: &str, timestamp: &str) -> Vec<u8> {
    serde_json::to_vec(&OutputRecord { text, url, timestamp }).expect("string fields always serialize")
}

struct CountingWriter<W> {
    inner: W,
    bytes: u64,
}

impl<W: Write> Write for CountingWriter<W> {
    fn write(&mut self, buf: &[u8]) -> io::Result<usize> {
        let n = self.inner.write(buf)?;
        self.bytes += n as u64;
        Ok(n)
    }

    fn flush(&mut self) -> io::Result<()> {
        self.inner.flush()
    }
}

enum Sink {
    Plain(BufWriter<File>),
    Gzip(GzEncoder<BufWriter<File>>),
}

impl Write for Sink {
    fn write(&mut self, buf: &[u8]) -> io::Result<usize> {
        match self {
            Sink::Plain(w) => w.write(buf),
            Sink::Gzip(w) => w.write(buf),
        }
    }

    fn flush(&mut self) -> io::Result<()> {
        match self {
            Sink::Plain(w) => w.flush(),
            Sink::Gzip(w) => w.flush(),
        }
    }
}

/// JSON-lines writer emitting exactly the `text`, `url`, `timestamp` fields.
/// Paths ending in `.gz` are gzip-compressed.
pub struct ShardWriter {
    path: PathBuf,
    out: CountingWriter<Sink>,
    records: u64,
}

impl ShardWriter {
    pub fn create(path: &Path) -> Result<Self, ShardError> {
        let file = File::create(path).map_err(|e| ShardError::io(path, e))?;
        let buffered = BufWriter::with_capacity(64 * 1024, file);
        let sink = if path.extension().is_some_and(|e| e == "gz") {
            Sink::Gzip(GzEncoder::new(buffered, flate2::Compression::default()))
        } else {
            Sink::Plain(buffered)
        };
        Ok(ShardWriter {
            path: path.to_path_buf(),
            out: CountingWriter { inner: sink, bytes: 0 },
            records: 0,
        })
    }

    pub fn write_record(&mut self, text: &str, url: &str, timestamp: &str) -> Result<(), ShardError> {
        let line = record_line(text, url, timestamp);
        self.write_raw_line(&line)
    }

    /// Copies an already-serialized JSON line (without its newline).
    pub fn write_raw_line(&mut self, line: &[u8]) -> Result<(), ShardError> {
        self.out
            .write_all(line)
            .and_then(|()| self.out.write_all(b"\n"))
            .map_err(|e| ShardError::io(&self.path, e))?;
        self.records += 1;
        Ok(())
    }

    pub fn finish(self) -> Result<WriteSummary, ShardError> {
        let path = self.path;
        let summary = WriteSummary { records: self.records, bytes: self.out.bytes };
        let finish = |sink: Sink| -> io::Result<()> {
            match sink {
                Sink::Plain(mut w) => w.flush(),
                Sink::Gzip(w) => w.finish()?.flush(),
            }
        };
        finish(self.out.inner).map_err(|e| ShardError::io(&path, e))?;
        Ok(summary)
    }
}

/// Anything that can be written as an output record.
pub trait AsRecord {
    fn text(&self) -> &str;
    fn url(&self) -> &str;
    fn timestamp(&self) -> &str;
}

impl AsRecord for RawDocument {
    fn text(&self) -> &str {
        &self.text
    }
    fn url(&self) -> &str {
        &self.url
    }
    fn timestamp(&self) -> &str {
        &self.timestamp
    }
}

pub fn write_shard<'a, R, I>(path: &Path, records: I) -> Result<WriteSummary, ShardError>
where
    R: AsRecord + 'a,
    I: IntoIterator<Item = &'a R>,
{
    let mut w = ShardWriter::create(path)?;
    for r in records {
        w.write_record(r.text(), r.url(), r.timestamp())?;
    }
    w.finish()
}

/// Reads a whole (small) JSON-lines file of arbitrary records, used by the
/// tokenizer and span-corruption front ends.
pub fn read_json_lines<T, R>(reader: R) -> impl Iterator<Item = Result<T, String>>
where
    T: serde::de::DeserializeOwned,
    R: Read,
{
    BufReader::new(reader)
        .lines()
        .enumerate()
        .filter(|(_, l)| l.as_ref().map_or(true, |s| !s.trim().is_empty()))
        .map(|(i, l)| {
            let line = l.map_err(|e| format!("line {}: {e}", i + 1))?;
            serde_json::from_str(&line).map_err(|e| format!("line {}: {e}", i + 1))
        })
}
