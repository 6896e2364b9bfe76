use std::fmt;

use crate::error::{Error, Result};

/// A subset of parties `{1..n}` stored as a bit mask, party `p` at bit `p-1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Parties(pub u32);

/// Largest party count representable by [`Parties`].
pub const MAX_PARTIES: usize = 31;

impl Parties {
    pub const EMPTY: Parties = Parties(0);

    pub fn all(n: usize) -> Parties {
        Parties(((1u64 << n) - 1) as u32)
    }

    /// Builds a subset from 1-based party labels.
    pub fn from_labels(labels: &[usize], n: usize) -> Result<Parties> {
        let mut mask = 0u32;
        for &p in labels {
            if p == 0 || p > n {
                return Err(Error::InvalidSubset(format!("party {p} outside 1..={n}")));
            }
            mask |= 1 << (p - 1);
        }
        Ok(Parties(mask))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, party: usize) -> bool {
        party >= 1 && (self.0 >> (party - 1)) & 1 == 1
    }

    pub fn is_subset_of(self, other: Parties) -> bool {
        self.0 & !other.0 == 0
    }

    /// 1-based labels in increasing order.
    pub fn labels(self) -> Vec<usize> {
        (0..32).filter(|b| (self.0 >> b) & 1 == 1).map(|b| b + 1).collect()
    }

    /// 0-based positions in increasing order.
    pub fn positions(self) -> Vec<usize> {
        (0..32).filter(|b| (self.0 >> b) & 1 == 1).collect()
    }

    pub fn check_within(self, n: usize) -> Result<()> {
        if self.is_empty() {
            return Err(Error::InvalidSubset("empty party subset".into()));
        }
        if !self.is_subset_of(Parties::all(n)) {
            return Err(Error::InvalidSubset(format!("{self} not within 1..={n}")));
        }
        Ok(())
    }

    /// All nonempty subsets of `{1..n}`, ordered by size then lexicographically.
    pub fn nonempty_subsets(n: usize) -> Vec<Parties> {
        let mut v: Vec<Parties> = (1..(1u32 << n)).map(Parties).collect();
        v.sort_by_key(|p| (p.len(), p.labels()));
        v
    }
}

impl fmt::Display for Parties {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.labels().iter().map(|p| p.to_string()).collect();
        f.write_str(&s.join(","))
    }
}

impl std::str::FromStr for Parties {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut mask = 0u32;
        for tok in s.split(',') {
            let p: usize = tok
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad party label {tok:?} in {s:?}")))?;
            if p == 0 || p > MAX_PARTIES {
                return Err(Error::Parse(format!("party label {p} out of range")));
            }
            mask |= 1 << (p - 1);
        }
        Ok(Parties(mask))
    }
}
