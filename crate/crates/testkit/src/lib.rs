//! Deterministic synthetic corpora and checked-in fixtures for the
//! corpusforge test suites.
//!
//! Generators here know nothing about the cleaning code: every expected
//! count comes from what was planted, never from running the pipeline.

pub mod cases;
pub mod heldout;
pub mod lexicon;
pub mod mixed;
pub mod oracle;
pub mod rng;
pub mod text;
pub mod tokcorpus;
pub mod web;

use std::path::PathBuf;

/// Directory holding the checked-in fixtures.
pub fn fixtures_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

pub fn fixture(name: &str) -> PathBuf {
    fixtures_dir().join(name)
}

/// Directory of the mixed fixture (manifest, shards, expected counts).
pub fn mixed_dir() -> PathBuf {
    fixture("mixed")
}

pub fn mixed_manifest() -> PathBuf {
    mixed_dir().join("manifest.txt")
}

/// File contents of the mixed fixture: `(relative path, contents)`.
pub fn mixed_files(f: &mixed::MixedFixture) -> Vec<(String, String)> {
    let mut files = Vec::new();
    let mut manifest = String::new();
    for (i, lines) in f.shards.iter().enumerate() {
        let name = format!("part-{i:02}.jsonl");
        manifest.push_str(&name);
        manifest.push('\n');
        files.push((name, lines.iter().map(|l| format!("{l}\n")).collect()));
    }
    files.push(("manifest.txt".into(), manifest));
    files.push(("expected.json".into(), serde_json::to_string_pretty(&f.expected.to_json()).unwrap() + "\n"));
    files
}

pub const HELDOUT_FILE: &str = "langid_heldout.jsonl";

pub fn heldout_files() -> Vec<(String, String)> {
    vec![(HELDOUT_FILE.to_string(), heldout::to_jsonl(&heldout::build(heldout::SEED)))]
}
