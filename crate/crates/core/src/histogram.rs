use std::collections::BTreeMap;
use std::fmt;
use std::marker::PhantomData;
use std::ops::{AddAssign, Index};

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A closed set of rejection reasons.
pub trait Reason: Copy + Eq + fmt::Debug + 'static {
    const ALL: &'static [Self];
    fn name(self) -> &'static str;

    fn index(self) -> usize {
        Self::ALL.iter().position(|&r| r == self).expect("reason listed in ALL")
    }

    fn from_name(name: &str) -> Option<Self> {
        Self::ALL.iter().copied().find(|r| r.name() == name)
    }
}

/// Per-reason counts. Serializes as a JSON object keyed by reason name,
/// listing every reason including zeros.
#[derive(Clone, PartialEq, Eq)]
pub struct ReasonCounts<R: Reason> {
    counts: Vec<u64>,
    _r: PhantomData<R>,
}

impl<R: Reason> Default for ReasonCounts<R> {
    fn default() -> Self {
        ReasonCounts { counts: vec![0; R::ALL.len()], _r: PhantomData }
    }
}

impl<R: Reason> ReasonCounts<R> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, reason: R) {
        self.counts[reason.index()] += 1;
    }

    pub fn add_n(&mut self, reason: R, n: u64) {
        self.counts[reason.index()] += n;
    }

    pub fn get(&self, reason: R) -> u64 {
        self.counts[reason.index()]
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (R, u64)> + '_ {
        R::ALL.iter().copied().zip(self.counts.iter().copied())
    }

    pub fn from_pairs<I: IntoIterator<Item = (R, u64)>>(pairs: I) -> Self {
        let mut h = Self::default();
        for (r, n) in pairs {
            h.add_n(r, n);
        }
        h
    }
}

impl<R: Reason> Index<R> for ReasonCounts<R> {
    type Output = u64;
    fn index(&self, r: R) -> &u64 {
        &self.counts[r.index()]
    }
}

impl<R: Reason> AddAssign<&ReasonCounts<R>> for ReasonCounts<R> {
    fn add_assign(&mut self, rhs: &ReasonCounts<R>) {
        for (a, b) in self.counts.iter_mut().zip(&rhs.counts) {
            *a += b;
        }
    }
}

impl<R: Reason> fmt::Debug for ReasonCounts<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.iter().map(|(r, n)| (r.name(), n))).finish()
    }
}

impl<R: Reason> Serialize for ReasonCounts<R> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let map: BTreeMap<&str, u64> = self.iter().map(|(r, n)| (r.name(), n)).collect();
        map.serialize(s)
    }
}

impl<'de, R: Reason> Deserialize<'de> for ReasonCounts<R> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let map = BTreeMap::<String, u64>::deserialize(d)?;
        let mut h = Self::default();
        for (k, v) in map {
            let r = R::from_name(&k).ok_or_else(|| D::Error::custom(format!("unknown reason {k:?}")))?;
            h.add_n(r, v);
        }
        Ok(h)
    }
}
