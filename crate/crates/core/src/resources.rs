//! Built-in word lists and seed texts, with a directory override.
//!
//! The override directory (from `CORPUSFORGE_RESOURCES` or an explicit path)
//! may contain any of `abbreviations.txt`, `badwords.txt`, `boilerplate.txt`
//! and `langid/<code>.txt`; missing files fall back to the built-ins.

use std::borrow::Cow;
use std::path::{Path, PathBuf};

pub const RESOURCES_ENV: &str = "CORPUSFORGE_RESOURCES";

pub const ABBREVIATIONS: &str = include_str!("../resources/abbreviations.txt");
pub const BADWORDS: &str = include_str!("../resources/badwords.txt");
pub const BOILERPLATE: &str = include_str!("../resources/boilerplate.txt");

/// Seed texts the default language profiles are trained on.
pub const LANGID_SEEDS: [(&str, &str); 5] = [
    ("de", include_str!("../resources/langid/de.txt")),
    ("en", include_str!("../resources/langid/en.txt")),
    ("es", include_str!("../resources/langid/es.txt")),
    ("fr", include_str!("../resources/langid/fr.txt")),
    ("it", include_str!("../resources/langid/it.txt")),
];

/// Non-empty, non-comment lines, trimmed.
pub fn list_entries(list: &str) -> impl Iterator<Item = &str> {
    list.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'))
}

/// Resource lookup honouring an optional override directory.
#[derive(Debug, Clone, Default)]
pub struct ResourceDir {
    root: Option<PathBuf>,
}

impl ResourceDir {
    pub fn builtin() -> Self {
        ResourceDir { root: None }
    }

    pub fn at(root: impl Into<PathBuf>) -> Self {
        ResourceDir { root: Some(root.into()) }
    }

    /// Uses `CORPUSFORGE_RESOURCES` when set.
    pub fn from_env() -> Self {
        match std::env::var_os(RESOURCES_ENV) {
            Some(v) if !v.is_empty() => ResourceDir::at(v),
            _ => ResourceDir::builtin(),
        }
    }

    pub fn root(&self) -> Option<&Path> {
        self.root.as_deref()
    }

    fn load(&self, name: &str, fallback: &'static str) -> std::io::Result<Cow<'static, str>> {
        if let Some(root) = &self.root {
            let p = root.join(name);
            if p.exists() {
                return std::fs::read_to_string(p).map(Cow::Owned);
            }
        }
        Ok(Cow::Borrowed(fallback))
    }

    pub fn abbreviations(&self) -> std::io::Result<Cow<'static, str>> {
        self.load("abbreviations.txt", ABBREVIATIONS)
    }

    pub fn badwords(&self) -> std::io::Result<Cow<'static, str>> {
        self.load("badwords.txt", BADWORDS)
    }

    pub fn boilerplate(&self) -> std::io::Result<Cow<'static, str>> {
        self.load("boilerplate.txt", BOILERPLATE)
    }

    pub fn langid_seeds(&self) -> std::io::Result<Vec<(String, Cow<'static, str>)>> {
        LANGID_SEEDS
            .iter()
            .map(|&(lang, text)| {
                self.load(&format!("langid/{lang}.txt"), text).map(|t| (lang.to_string(), t))
            })
            .collect()
    }
}
