//! Canonical finite unions of cylinders and their exact measures.
//!
//! A [`CylinderSet`] is stored as the set of maximal cylinders it contains:
//! prefix-free, with no sibling pair `u0, u1`, sorted lexicographically.
//! Set algebra goes through the interval picture (`[u] = [0.u, 0.u + 2^-|u|)`)
//! where union, intersection and complement are sorted sweeps, and the
//! canonical words are recovered as the maximal dyadic blocks of each run.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::{Lambda, MassTable, Rational};
use crate::word::{check_depth, Word};

const FULL: u128 = 1u128 << 64;

#[derive(Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct CylinderSet {
    words: Vec<Word>,
}

impl CylinderSet {
    pub fn empty() -> Self {
        CylinderSet { words: Vec::new() }
    }

    /// The whole space, `{""}`.
    pub fn full() -> Self {
        CylinderSet {
            words: vec![Word::root()],
        }
    }

    pub fn singleton(word: Word) -> Self {
        CylinderSet { words: vec![word] }
    }

    /// Canonicalize an arbitrary collection of words. Strict prefixes absorb
    /// their extensions and sibling pairs merge; this never fails.
    pub fn from_words<I: IntoIterator<Item = Word>>(words: I) -> Self {
        let mut iv: Vec<(u128, u128)> = words.into_iter().map(|w| (w.start(), w.end())).collect();
        iv.sort_unstable();
        Self::from_sorted_intervals(iv)
    }

    pub fn parse<S: AsRef<str>>(words: &[S]) -> Result<Self> {
        let ws = words
            .iter()
            .map(|s| Word::parse(s.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_words(ws))
    }

    /// Build from intervals sorted by start; overlaps and adjacency are merged.
    pub(crate) fn from_sorted_intervals(iv: Vec<(u128, u128)>) -> Self {
        let mut words = Vec::new();
        for (s, e) in merge_sorted(iv) {
            decompose_interval(s, e, &mut words);
        }
        CylinderSet { words }
    }

    /// Maximal runs as disjoint, non-adjacent, sorted intervals.
    pub(crate) fn intervals(&self) -> Vec<(u128, u128)> {
        merge_sorted(self.words.iter().map(|w| (w.start(), w.end())).collect())
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn into_words(self) -> Vec<Word> {
        self.words
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.words.len() == 1 && self.words[0].is_root()
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    /// Length of the longest word, 0 for the empty set.
    pub fn depth(&self) -> u8 {
        self.words.iter().map(Word::len).max().unwrap_or(0)
    }

    pub fn union(&self, other: &CylinderSet) -> CylinderSet {
        let mut iv = self.intervals();
        iv.extend(other.intervals());
        iv.sort_unstable();
        Self::from_sorted_intervals(iv)
    }

    pub fn intersect(&self, other: &CylinderSet) -> CylinderSet {
        let a = self.intervals();
        let b = other.intervals();
        let mut out = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            let s = a[i].0.max(b[j].0);
            let e = a[i].1.min(b[j].1);
            if s < e {
                out.push((s, e));
            }
            if a[i].1 < b[j].1 {
                i += 1;
            } else {
                j += 1;
            }
        }
        Self::from_sorted_intervals(out)
    }

    pub fn complement(&self) -> CylinderSet {
        let mut out = Vec::new();
        let mut cursor = 0u128;
        for (s, e) in self.intervals() {
            if cursor < s {
                out.push((cursor, s));
            }
            cursor = e;
        }
        if cursor < FULL {
            out.push((cursor, FULL));
        }
        Self::from_sorted_intervals(out)
    }

    pub fn difference(&self, other: &CylinderSet) -> CylinderSet {
        self.intersect(&other.complement())
    }

    pub fn is_disjoint(&self, other: &CylinderSet) -> bool {
        self.intersect(other).is_empty()
    }

    pub fn is_subset(&self, other: &CylinderSet) -> bool {
        self.difference(other).is_empty()
    }

    /// Whether the whole cylinder `[word]` lies in the set.
    pub fn contains_cylinder(&self, word: &Word) -> bool {
        // Canonical words are maximal, so containment means a prefix is present.
        let idx = self.words.partition_point(|x| x <= word);
        idx > 0 && self.words[idx - 1].is_prefix_of(word)
    }

    /// All level-`level` words below the set, in lexicographic order.
    pub fn refine(&self, level: u8) -> Result<Vec<Word>> {
        check_depth(level as usize)?;
        let depth = self.depth();
        if level < depth {
            return Err(Error::LevelTooSmall { level, depth });
        }
        let mut out = Vec::new();
        for w in &self.words {
            out.extend(w.descendants(level)?);
        }
        Ok(out)
    }

    /// Exact product measure `mu_lambda`.
    pub fn mu(&self, lambda: &Lambda) -> Rational {
        mu_words(&self.words, lambda)
    }

    /// `sum 2^-|u|`, which is `mu_{1/2}`.
    pub fn kraft(&self) -> Rational {
        kraft_words(&self.words)
    }
}

/// Measure of a list of pairwise disjoint words (not necessarily canonical).
pub fn mu_words(words: &[Word], lambda: &Lambda) -> Rational {
    let mut hist: HashMap<(u32, u32), u64> = HashMap::new();
    for w in words {
        *hist.entry((w.zeros(), w.ones())).or_default() += 1;
    }
    let mut table = MassTable::new(lambda);
    let mut keys: Vec<_> = hist.into_iter().collect();
    keys.sort_unstable();
    keys.into_iter().fold(Rational::zero(), |acc, ((z, o), n)| {
        acc + table.mass(z, o) * Rational::from_integer(BigInt::from(n))
    })
}

/// Kraft sum of a list of pairwise disjoint words.
pub fn kraft_words(words: &[Word]) -> Rational {
    let total: u128 = words.iter().map(Word::span).sum();
    Rational::new(BigInt::from(total), BigInt::from(FULL))
}

fn merge_sorted(iv: Vec<(u128, u128)>) -> Vec<(u128, u128)> {
    let mut out: Vec<(u128, u128)> = Vec::with_capacity(iv.len());
    for (s, e) in iv {
        if s >= e {
            continue;
        }
        match out.last_mut() {
            Some(last) if s <= last.1 => last.1 = last.1.max(e),
            _ => out.push((s, e)),
        }
    }
    out
}

/// Split `[s, e)` into its maximal dyadic blocks, left to right.
pub(crate) fn decompose_interval(mut s: u128, e: u128, out: &mut Vec<Word>) {
    while s < e {
        let align = if s == 0 { 64 } else { s.trailing_zeros().min(64) };
        let room = 127 - (e - s).leading_zeros();
        let k = align.min(room);
        out.push(Word::from_parts(s as u64, (64 - k) as u8));
        s += 1u128 << k;
    }
}

impl fmt::Display for CylinderSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, w) in self.words.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "\"{w}\"")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for CylinderSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for CylinderSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.words.serialize(s)
    }
}

impl<'de> Deserialize<'de> for CylinderSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let words = Vec::<Word>::deserialize(d)?;
        Ok(CylinderSet::from_words(words))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn set(ws: &[&str]) -> CylinderSet {
        CylinderSet::parse(ws).unwrap()
    }

    fn strs(c: &CylinderSet) -> Vec<String> {
        c.words().iter().map(|w| w.to_string()).collect()
    }

    #[test]
    fn canonicalize_examples() {
        assert_eq!(strs(&set(&["00", "01"])), ["0"]);
        assert_eq!(strs(&set(&["0", "10"])), ["0", "10"]);
        assert_eq!(strs(&set(&["1", "10"])), ["1"]);
        assert_eq!(strs(&set(&["0", "1"])), [""]);
        assert_eq!(strs(&set(&["011", "010", "00", "11"])), ["0", "11"]);
        assert!(set(&[]).is_empty());
    }

    #[test]
    fn measure_examples() {
        let l23 = Lambda::from_ratio(2, 3).unwrap();
        assert_eq!(set(&["01"]).mu(&l23), ratio(2, 9));
        assert_eq!(set(&[""]).mu(&l23), int(1));
        assert_eq!(set(&["000", "111"]).mu(&Lambda::half()), ratio(1, 4));
    }

    #[test]
    fn kraft_examples() {
        assert_eq!(set(&["0"]).kraft(), ratio(1, 2));
        assert_eq!(set(&[""]).kraft(), int(1));
        assert_eq!(set(&["0", "10", "110"]).kraft(), ratio(7, 8));
    }

    #[test]
    fn set_operation_examples() {
        assert_eq!(strs(&set(&["0"]).complement()), ["1"]);
        assert_eq!(strs(&set(&["0"]).intersect(&set(&["01", "1"]))), ["01"]);
        let r: Vec<String> = set(&["0"]).refine(2).unwrap().iter().map(|w| w.to_string()).collect();
        assert_eq!(r, ["00", "01"]);
        assert!(set(&["0"]).complement().complement() == set(&["0"]));
        assert!(set(&[]).complement().is_full());
        assert_eq!(strs(&set(&["0", "111"]).difference(&set(&["01"]))), ["00", "111"]);
    }

    #[test]
    fn refine_errors() {
        assert!(matches!(set(&["010"]).refine(2), Err(Error::LevelTooSmall { .. })));
        assert!(matches!(set(&["0"]).refine(65), Err(Error::DepthOverflow { .. })));
    }

    #[test]
    fn containment() {
        let a = set(&["0", "110"]);
        assert!(a.contains_cylinder(&"01".parse().unwrap()));
        assert!(a.contains_cylinder(&"1101".parse().unwrap()));
        assert!(!a.contains_cylinder(&"11".parse().unwrap()));
        assert!(!a.contains_cylinder(&"".parse().unwrap()));
    }
}
