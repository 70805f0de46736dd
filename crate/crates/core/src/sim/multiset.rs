use std::collections::BTreeMap;
use std::fmt;

/// Counts of parts by size.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SizeMultiset {
    counts: BTreeMap<usize, u64>,
}

impl SizeMultiset {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_sizes(sizes: impl IntoIterator<Item = usize>) -> Self {
        let mut m = Self::new();
        for s in sizes {
            m.add(s);
        }
        m
    }

    pub fn from_counts(pairs: impl IntoIterator<Item = (usize, u64)>) -> Self {
        let mut m = Self::new();
        for (size, c) in pairs {
            if c > 0 {
                *m.counts.entry(size).or_insert(0) += c;
            }
        }
        m
    }

    pub fn add(&mut self, size: usize) {
        *self.counts.entry(size).or_insert(0) += 1;
    }

    pub fn count(&self, size: usize) -> u64 {
        self.counts.get(&size).copied().unwrap_or(0)
    }

    /// Number of parts.
    pub fn parts(&self) -> u64 {
        self.counts.values().sum()
    }

    /// `Σ size · count`, the tiling total.
    pub fn mass(&self) -> u64 {
        self.counts.iter().map(|(s, c)| *s as u64 * c).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, u64)> + '_ {
        self.counts.iter().map(|(s, c)| (*s, *c))
    }

    /// Keeps only sizes up to `max`.
    pub fn capped(&self, max: usize) -> Self {
        Self { counts: self.counts.range(..=max).map(|(s, c)| (*s, *c)).collect() }
    }
}

impl fmt::Debug for SizeMultiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (s, c)) in self.counts.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{s}:{c}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Display for SizeMultiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}
