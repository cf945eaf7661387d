use std::borrow::Cow;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::Serialize;
use xxhash_rust::xxh3::Xxh3;

use super::{is_output_shard_name, PipelineError};
use crate::corpus_io::{Manifest, RawDocument, DEFAULT_MAX_RECORD_BYTES};
use crate::document_filters::{judge_document, recompose, DocumentReason, DocumentRules, Provenance, CleanDocument};
use crate::langid::Detector;
use crate::resources::ResourceDir;
use crate::segmenter::Segmenter;
use crate::sentence_filters::{filter_sentences, histogram, BadWordsIndex, BoilerplatePatterns, SentenceHistogram};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DedupMode {
    Doc,
    Off,
}

impl FromStr for DedupMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "doc" => Ok(DedupMode::Doc),
            "off" => Ok(DedupMode::Off),
            _ => Err(format!("unknown dedup mode {s:?} (expected doc or off)")),
        }
    }
}

impl fmt::Display for DedupMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DedupMode::Doc => "doc",
            DedupMode::Off => "off",
        })
    }
}

/// What to do with a line that is not a valid record.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MalformedPolicy {
    Skip,
    Abort,
}

impl FromStr for MalformedPolicy {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "skip" => Ok(MalformedPolicy::Skip),
            "abort" => Ok(MalformedPolicy::Abort),
            _ => Err(format!("unknown malformed-line policy {s:?} (expected skip or abort)")),
        }
    }
}

#[derive(Debug, Clone)]
pub struct PipelineConfig {
    pub manifest: PathBuf,
    pub out_dir: PathBuf,
    pub workers: usize,
    pub lang_threshold: f64,
    pub dedup: DedupMode,
    /// Fallback for any list or profile not given explicitly.
    pub resources: ResourceDir,
    pub abbreviations: Option<PathBuf>,
    pub badwords: Option<PathBuf>,
    pub boilerplate: Option<PathBuf>,
    /// Directory of `*.json` language profiles.
    pub profiles: Option<PathBuf>,
    pub on_malformed: MalformedPolicy,
    pub max_record_bytes: usize,
    pub gzip: bool,
}

impl PipelineConfig {
    pub fn new(manifest: impl Into<PathBuf>, out_dir: impl Into<PathBuf>) -> Self {
        PipelineConfig {
            manifest: manifest.into(),
            out_dir: out_dir.into(),
            workers: 1,
            lang_threshold: crate::document_filters::DEFAULT_LANG_THRESHOLD,
            dedup: DedupMode::Doc,
            resources: ResourceDir::builtin(),
            abbreviations: None,
            badwords: None,
            boilerplate: None,
            profiles: None,
            on_malformed: MalformedPolicy::Skip,
            max_record_bytes: DEFAULT_MAX_RECORD_BYTES,
            gzip: false,
        }
    }

    fn list(&self, explicit: &Option<PathBuf>, fallback: std::io::Result<Cow<'static, str>>) -> Result<String, PipelineError> {
        match explicit {
            Some(p) => std::fs::read_to_string(p).map_err(|e| PipelineError::Config(format!("{}: {e}", p.display()))),
            None => fallback.map(Cow::into_owned).map_err(|e| PipelineError::Config(format!("resource list: {e}"))),
        }
    }

    fn lists(&self) -> Result<[String; 3], PipelineError> {
        Ok([
            self.list(&self.abbreviations, self.resources.abbreviations())?,
            self.list(&self.badwords, self.resources.badwords())?,
            self.list(&self.boilerplate, self.resources.boilerplate())?,
        ])
    }

    /// Validates the configuration and loads the manifest and filters,
    /// failing before any work starts.
    pub fn prepare(&self) -> Result<(Manifest, Filters), PipelineError> {
        let config = PipelineError::Config;
        if self.workers == 0 {
            return Err(config("worker count must be at least 1".into()));
        }
        if !(self.lang_threshold > 0.0 && self.lang_threshold <= 1.0) {
            return Err(config(format!("language threshold {} not in (0,1]", self.lang_threshold)));
        }
        if self.max_record_bytes == 0 {
            return Err(config("max record bytes must be positive".into()));
        }
        let manifest = Manifest::load(&self.manifest).map_err(|e| config(format!("manifest: {e}")))?;
        let out_dir = std::fs::canonicalize(&self.out_dir).ok();
        for shard in &manifest.shards {
            if !shard.path.is_file() {
                return Err(config(format!("shard {} does not exist: {}", shard.index, shard.path.display())));
            }
            let parent = shard.path.parent().and_then(|p| std::fs::canonicalize(p).ok());
            let name = shard.path.file_name().and_then(|n| n.to_str()).unwrap_or("");
            if out_dir.is_some() && parent == out_dir && is_output_shard_name(name) {
                return Err(config(format!("input shard {} would be overwritten by the output", shard.path.display())));
            }
        }
        let [abbreviations, badwords, boilerplate] = self.lists()?;
        let detector = match &self.profiles {
            Some(dir) => Detector::from_profile_dir(dir),
            None => Detector::from_resources(&self.resources),
        }
        .map_err(|e| config(format!("language profiles: {e}")))?;
        let filters = Filters {
            segmenter: Segmenter::from_list(&abbreviations),
            badwords: BadWordsIndex::from_list(&badwords),
            boilerplate: BoilerplatePatterns::from_list(&boilerplate),
            detector,
            rules: DocumentRules { lang_threshold: self.lang_threshold, ..DocumentRules::default() },
        };
        Ok((manifest, filters))
    }

    /// Digest of everything that affects the output (worker count excluded).
    pub fn fingerprint(&self, manifest: &Manifest) -> Result<String, PipelineError> {
        let mut h = Xxh3::new();
        let mut feed = |bytes: &[u8]| {
            h.update(&(bytes.len() as u64).to_le_bytes());
            h.update(bytes);
        };
        for shard in &manifest.shards {
            feed(shard.path.to_string_lossy().as_bytes());
            let meta = std::fs::metadata(&shard.path).map_err(|e| PipelineError::io(&shard.path, e))?;
            feed(&meta.len().to_le_bytes());
        }
        for list in self.lists()? {
            feed(list.as_bytes());
        }
        match &self.profiles {
            Some(dir) => {
                let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
                    .map_err(|e| PipelineError::io(dir, e))?
                    .filter_map(|e| e.ok().map(|e| e.path()))
                    .collect();
                files.sort();
                for f in files {
                    feed(f.to_string_lossy().as_bytes());
                    feed(&std::fs::read(&f).map_err(|e| PipelineError::io(&f, e))?);
                }
            }
            None => {
                let seeds = self.resources.langid_seeds().map_err(|e| PipelineError::Config(e.to_string()))?;
                for (lang, text) in seeds {
                    feed(lang.as_bytes());
                    feed(text.as_bytes());
                }
            }
        }
        feed(&self.lang_threshold.to_le_bytes());
        feed(self.dedup.to_string().as_bytes());
        feed(&[self.on_malformed as u8, self.gzip as u8]);
        feed(&(self.max_record_bytes as u64).to_le_bytes());
        Ok(format!("{:032x}", h.digest128()))
    }
}

/// Everything needed to clean one document.
pub struct Filters {
    pub segmenter: Segmenter,
    pub badwords: BadWordsIndex,
    pub boilerplate: BoilerplatePatterns,
    pub detector: Detector,
    pub rules: DocumentRules,
}

/// Result of cleaning one raw document, before deduplication.
pub struct DocOutcome {
    pub sentences_in: u64,
    pub sentences_kept: u64,
    pub sentence_rejections: SentenceHistogram,
    pub verdict: Result<CleanDocument, DocumentReason>,
}

impl Filters {
    pub fn builtin() -> Self {
        Filters {
            segmenter: Segmenter::italian(),
            badwords: BadWordsIndex::builtin(),
            boilerplate: BoilerplatePatterns::builtin(),
            detector: Detector::builtin(),
            rules: DocumentRules::default(),
        }
    }

    /// Segment, filter sentences, recompose and judge.
    pub fn process(&self, raw: &RawDocument, shard: usize, record: u64) -> DocOutcome {
        let sentences = self.segmenter.split_sentences(&raw.text);
        let sentences_in = sentences.len() as u64;
        let (kept, verdicts) = filter_sentences(sentences, &self.badwords, &self.boilerplate);
        let sentences_kept = kept.len() as u64;
        let mut cand = recompose(kept, raw, Provenance { shard, record });
        let verdict = judge_document(&mut cand, &self.detector, &self.rules).map(|()| cand);
        DocOutcome { sentences_in, sentences_kept, sentence_rejections: histogram(&verdicts), verdict }
    }
}
