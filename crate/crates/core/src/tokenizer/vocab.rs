use std::io::{BufRead, Write};
use std::path::Path;

use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use super::lattice::{build_edges, viterbi, FALLBACK_ID};
use super::normalize::{normalize, pretokenize, WORD_BOUNDARY};
use super::trainer::ScoredPiece;
use super::{TokenizerError, EOS_ID, FIRST_BYTE_ID, NUM_SENTINELS, PAD_ID, SENTINEL_BASE, UNK_ID};

/// Ids taken by pad, eos, unk and the sentinels.
pub const RESERVED_IDS: usize = FIRST_BYTE_ID as usize;

/// Score of a byte-fallback edge below the least likely piece.
const FALLBACK_PENALTY: f64 = 10.0;

const UNK_TEXT: &str = "\u{2047}";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PieceKind {
    Pad,
    Eos,
    Unk,
    Sentinel(u32),
    Byte(u8),
    Normal,
}

fn reserved_name(id: u32) -> String {
    match id {
        PAD_ID => "<pad>".into(),
        EOS_ID => "</s>".into(),
        UNK_ID => "<unk>".into(),
        _ => format!("<extra_id_{}>", id - SENTINEL_BASE),
    }
}

fn byte_name(b: u8) -> String {
    format!("<0x{b:02X}>")
}

/// True for strings spelled like a special, sentinel or byte piece.
pub fn is_reserved_piece(s: &str) -> bool {
    if matches!(s, "<pad>" | "</s>" | "<unk>") {
        return true;
    }
    if let Some(k) = s.strip_prefix("<extra_id_").and_then(|r| r.strip_suffix('>')) {
        return k.parse::<u32>().is_ok_and(|k| k < NUM_SENTINELS);
    }
    if let Some(h) = s.strip_prefix("<0x").and_then(|r| r.strip_suffix('>')) {
        return h.len() == 2 && u8::from_str_radix(h, 16).is_ok();
    }
    false
}

/// Output of [`UnigramVocab::encode`].
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Segmentation {
    pub piece_ids: Vec<u32>,
    /// Sum of the log-probabilities on the chosen path (byte-fallback chars
    /// count once each at the fallback score).
    pub score: f64,
}

#[derive(Serialize, Deserialize)]
struct VocabLine {
    piece: String,
    logprob: f64,
    id: u32,
}

/// Trained vocabulary: reserved pieces at fixed ids, then (optionally) the
/// 256 byte pieces, then scored pieces by descending log-probability.
#[derive(Debug, Clone)]
pub struct UnigramVocab {
    pieces: Vec<(String, f64)>,
    byte_fallback: bool,
    first_normal: u32,
    index: FxHashMap<String, u32>,
    max_piece_chars: usize,
    fallback_score: f64,
}

impl UnigramVocab {
    /// Builds a vocab from scored pieces, ordering them by descending
    /// log-probability (ties by piece).
    pub fn from_trained(mut pieces: Vec<ScoredPiece>, byte_fallback: bool) -> Self {
        pieces.sort_by(|a, b| b.logprob.total_cmp(&a.logprob).then_with(|| a.piece.cmp(&b.piece)));
        Self::from_pieces(pieces, byte_fallback)
    }

    /// Builds a vocab keeping the given piece order.
    pub fn from_pieces(pieces: Vec<ScoredPiece>, byte_fallback: bool) -> Self {
        let mut all: Vec<(String, f64)> = (0..FIRST_BYTE_ID).map(|id| (reserved_name(id), 0.0)).collect();
        if byte_fallback {
            all.extend((0..=255u8).map(|b| (byte_name(b), 0.0)));
        }
        all.extend(pieces.into_iter().map(|p| (p.piece, p.logprob)));
        Self::assemble(all, byte_fallback)
    }

    fn assemble(pieces: Vec<(String, f64)>, byte_fallback: bool) -> Self {
        let first_normal = FIRST_BYTE_ID + if byte_fallback { 256 } else { 0 };
        let mut index = FxHashMap::default();
        let mut max_piece_chars = 1;
        let mut min_logprob: f64 = 0.0;
        for (id, (p, lp)) in pieces.iter().enumerate().skip(first_normal as usize) {
            index.insert(p.clone(), id as u32);
            max_piece_chars = max_piece_chars.max(p.chars().count());
            min_logprob = min_logprob.min(*lp);
        }
        UnigramVocab {
            pieces,
            byte_fallback,
            first_normal,
            index,
            max_piece_chars,
            fallback_score: min_logprob - FALLBACK_PENALTY,
        }
    }

    /// Total size, reserved ids included.
    pub fn len(&self) -> usize {
        self.pieces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn byte_fallback(&self) -> bool {
        self.byte_fallback
    }

    /// Number of scored (non-reserved) pieces.
    pub fn normal_len(&self) -> usize {
        self.pieces.len() - self.first_normal as usize
    }

    pub fn normal_pieces(&self) -> impl Iterator<Item = (&str, f64)> {
        self.pieces[self.first_normal as usize..].iter().map(|(p, lp)| (p.as_str(), *lp))
    }

    pub fn piece(&self, id: u32) -> Option<&str> {
        self.pieces.get(id as usize).map(|(p, _)| p.as_str())
    }

    pub fn logprob(&self, id: u32) -> Option<f64> {
        self.pieces.get(id as usize).map(|(_, lp)| *lp)
    }

    pub fn id(&self, piece: &str) -> Option<u32> {
        if let Some(&id) = self.index.get(piece) {
            return Some(id);
        }
        (0..self.first_normal).find(|&id| self.pieces[id as usize].0 == piece)
    }

    pub fn kind(&self, id: u32) -> Option<PieceKind> {
        if id as usize >= self.pieces.len() {
            return None;
        }
        Some(match id {
            PAD_ID => PieceKind::Pad,
            EOS_ID => PieceKind::Eos,
            UNK_ID => PieceKind::Unk,
            _ if id < FIRST_BYTE_ID => PieceKind::Sentinel(id - SENTINEL_BASE),
            _ if id < self.first_normal => PieceKind::Byte((id - FIRST_BYTE_ID) as u8),
            _ => PieceKind::Normal,
        })
    }

    /// Viterbi segmentation of `text` after normalization.
    pub fn encode(&self, text: &str) -> Result<Segmentation, TokenizerError> {
        let norm = normalize(text);
        let mut seg = Segmentation::default();
        for word in pretokenize(&norm) {
            self.encode_word_into(&word, &mut seg)?;
        }
        Ok(seg)
    }

    /// Viterbi segmentation of a single unit, taken verbatim (no
    /// normalization, no boundary marker added).
    pub fn encode_word(&self, word: &str) -> Result<Segmentation, TokenizerError> {
        let mut seg = Segmentation::default();
        self.encode_word_into(word, &mut seg)?;
        Ok(seg)
    }

    fn encode_word_into(&self, word: &str, seg: &mut Segmentation) -> Result<(), TokenizerError> {
        if word.is_empty() {
            return Ok(());
        }
        let lookup = |s: &str| self.index.get(s).map(|&id| (id, self.pieces[id as usize].1));
        let fallback = self.byte_fallback.then_some(self.fallback_score);
        let edges = build_edges(word, self.max_piece_chars, lookup, fallback);
        let n = word.chars().count();
        let Some((path, score)) = viterbi(n, &edges) else {
            let mut buf = [0u8; 4];
            let c = word
                .chars()
                .find(|c| !self.index.contains_key(&*c.encode_utf8(&mut buf)))
                .unwrap_or('\u{fffd}');
            return Err(TokenizerError::Coverage(c));
        };
        seg.score += score;
        for e in path {
            if e.id == FALLBACK_ID {
                let c = word.chars().nth(e.start).expect("edge within word");
                let mut buf = [0u8; 4];
                for b in c.encode_utf8(&mut buf).bytes() {
                    seg.piece_ids.push(FIRST_BYTE_ID + b as u32);
                }
            } else {
                seg.piece_ids.push(e.id);
            }
        }
        Ok(())
    }

    /// Inverse of [`encode`](Self::encode): `decode(encode(t)) == normalize(t)`.
    /// Pad and eos are skipped, unk renders as `⁇`, sentinels as their names.
    pub fn decode(&self, ids: &[u32]) -> Result<String, TokenizerError> {
        let mut raw = String::new();
        let mut bytes: Vec<u8> = Vec::new();
        for &id in ids {
            let kind = self.kind(id).ok_or(TokenizerError::UnknownId(id))?;
            if let PieceKind::Byte(b) = kind {
                bytes.push(b);
                continue;
            }
            if !bytes.is_empty() {
                raw.push_str(&String::from_utf8_lossy(&bytes));
                bytes.clear();
            }
            match kind {
                PieceKind::Pad | PieceKind::Eos => {}
                PieceKind::Unk => raw.push_str(UNK_TEXT),
                PieceKind::Sentinel(_) | PieceKind::Normal => raw.push_str(&self.pieces[id as usize].0),
                PieceKind::Byte(_) => unreachable!(),
            }
        }
        if !bytes.is_empty() {
            raw.push_str(&String::from_utf8_lossy(&bytes));
        }
        let text = raw.replace(WORD_BOUNDARY, " ");
        Ok(text.strip_prefix(' ').map(str::to_owned).unwrap_or(text))
    }

    pub fn write_jsonl<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        for (id, (piece, logprob)) in self.pieces.iter().enumerate() {
            let line = VocabLine { piece: piece.clone(), logprob: *logprob, id: id as u32 };
            serde_json::to_writer(&mut out, &line)?;
            out.write_all(b"\n")?;
        }
        out.flush()
    }

    pub fn save(&self, path: &Path) -> Result<(), TokenizerError> {
        let f = std::fs::File::create(path).map_err(|e| TokenizerError::Io(format!("{}: {e}", path.display())))?;
        self.write_jsonl(std::io::BufWriter::new(f))
            .map_err(|e| TokenizerError::Io(format!("{}: {e}", path.display())))
    }

    pub fn load(path: &Path) -> Result<Self, TokenizerError> {
        let f = std::fs::File::open(path).map_err(|e| TokenizerError::Io(format!("{}: {e}", path.display())))?;
        Self::read_jsonl(std::io::BufReader::new(f))
    }

    /// Reads a vocab file. Ids must be contiguous from 0 and the reserved
    /// pieces must sit at their fixed ids; byte fallback is on when id 103
    /// holds `<0x00>`.
    pub fn read_jsonl<R: BufRead>(input: R) -> Result<Self, TokenizerError> {
        let mut pieces = Vec::new();
        let mut seen = FxHashMap::default();
        for (n, line) in input.lines().enumerate() {
            let lineno = n + 1;
            let line = line.map_err(|e| TokenizerError::Io(e.to_string()))?;
            if line.trim().is_empty() {
                continue;
            }
            let err = |reason: String| TokenizerError::VocabFormat { line: lineno, reason };
            let v: VocabLine = serde_json::from_str(&line).map_err(|e| err(e.to_string()))?;
            if v.id as usize != pieces.len() {
                return Err(err(format!("expected id {}, found {}", pieces.len(), v.id)));
            }
            if !v.logprob.is_finite() {
                return Err(err(format!("non-finite logprob for {:?}", v.piece)));
            }
            if seen.insert(v.piece.clone(), v.id).is_some() {
                return Err(err(format!("duplicate piece {:?}", v.piece)));
            }
            if v.id < FIRST_BYTE_ID && v.piece != reserved_name(v.id) {
                return Err(err(format!("id {} must be {}", v.id, reserved_name(v.id))));
            }
            pieces.push((v.piece, v.logprob));
        }
        if pieces.len() < RESERVED_IDS {
            return Err(TokenizerError::VocabFormat {
                line: pieces.len(),
                reason: format!("only {} pieces; {} reserved ids required", pieces.len(), RESERVED_IDS),
            });
        }
        let byte_fallback = pieces.get(RESERVED_IDS).is_some_and(|p| p.0 == byte_name(0));
        if byte_fallback {
            for b in 0..=255u8 {
                let id = RESERVED_IDS + b as usize;
                if pieces.get(id).map(|p| p.0.as_str()) != Some(byte_name(b).as_str()) {
                    return Err(TokenizerError::VocabFormat { line: id + 1, reason: format!("expected {}", byte_name(b)) });
                }
            }
        }
        Ok(Self::assemble(pieces, byte_fallback))
    }
}
