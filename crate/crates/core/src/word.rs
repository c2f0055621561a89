//! Finite binary words: cylinders of the Cantor space `{0,1}^N`.

use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicU8, Ordering};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Hard capacity of the packed representation.
pub const WORD_CAPACITY: u8 = 64;
pub const DEFAULT_MAX_DEPTH: u8 = 32;

static MAX_DEPTH: AtomicU8 = AtomicU8::new(DEFAULT_MAX_DEPTH);

/// The configured depth limit. Operations that would create a deeper word fail.
pub fn max_depth() -> u8 {
    MAX_DEPTH.load(Ordering::Relaxed)
}

pub fn set_max_depth(depth: u8) -> Result<()> {
    if depth == 0 || depth > WORD_CAPACITY {
        return Err(Error::DepthOverflow {
            depth: depth as usize,
            max: WORD_CAPACITY,
        });
    }
    MAX_DEPTH.store(depth, Ordering::Relaxed);
    Ok(())
}

pub(crate) fn check_depth(depth: usize) -> Result<()> {
    let max = max_depth();
    if depth > max as usize {
        Err(Error::DepthOverflow { depth, max })
    } else {
        Ok(())
    }
}

/// A binary word of length at most 64.
///
/// The bits are stored left-aligned in a `u64` with all bits past `len`
/// cleared, so the derived ordering on `(bits, len)` is exactly the
/// lexicographic order of the strings (a prefix sorts before its extensions).
/// Read as a dyadic interval of `[0,1)`, a word `u` is
/// `[0.u, 0.u + 2^-|u|)`, and lexicographic order on prefix-free sets is the
/// left-to-right order of the intervals.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word {
    bits: u64,
    len: u8,
}

impl Word {
    pub const fn root() -> Self {
        Word { bits: 0, len: 0 }
    }

    pub(crate) fn from_parts(bits: u64, len: u8) -> Self {
        debug_assert!(len <= WORD_CAPACITY);
        let mask = if len == 0 { 0 } else { u64::MAX << (64 - len as u32) };
        Word {
            bits: bits & mask,
            len,
        }
    }

    /// The level-`level` word with the given lexicographic index.
    pub fn from_index(index: u64, level: u8) -> Self {
        debug_assert!(level <= WORD_CAPACITY);
        if level == 0 {
            return Word::root();
        }
        debug_assert!(level == 64 || index < (1u64 << level));
        Word::from_parts(index << (64 - level as u32), level)
    }

    pub fn parse(s: &str) -> Result<Self> {
        check_depth(s.len())?;
        let mut w = Word::root();
        for c in s.chars() {
            let b = match c {
                '0' => false,
                '1' => true,
                _ => return Err(Error::Parse(format!("not a binary word: {s:?}"))),
            };
            w = w.child_unchecked(b);
        }
        Ok(w)
    }

    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> u8 {
        self.len
    }

    pub fn is_root(&self) -> bool {
        self.len == 0
    }

    pub fn bit(&self, i: u8) -> bool {
        assert!(i < self.len, "bit index {i} out of range for {self}");
        (self.bits >> (63 - i as u32)) & 1 == 1
    }

    pub fn ones(&self) -> u32 {
        self.bits.count_ones()
    }

    pub fn zeros(&self) -> u32 {
        self.len as u32 - self.ones()
    }

    fn child_unchecked(&self, bit: bool) -> Word {
        debug_assert!(self.len < WORD_CAPACITY);
        let mut bits = self.bits;
        if bit {
            bits |= 1u64 << (63 - self.len as u32);
        }
        Word {
            bits,
            len: self.len + 1,
        }
    }

    pub fn child(&self, bit: bool) -> Result<Word> {
        check_depth(self.len as usize + 1)?;
        Ok(self.child_unchecked(bit))
    }

    pub fn children(&self) -> Result<[Word; 2]> {
        Ok([self.child(false)?, self.child(true)?])
    }

    pub fn parent(&self) -> Option<Word> {
        (self.len > 0).then(|| Word::from_parts(self.bits, self.len - 1))
    }

    pub fn last_bit(&self) -> Option<bool> {
        (self.len > 0).then(|| self.bit(self.len - 1))
    }

    pub fn concat(&self, tail: &Word) -> Result<Word> {
        let len = self.len as usize + tail.len as usize;
        check_depth(len)?;
        let bits = if self.len == 64 {
            self.bits
        } else {
            self.bits | (tail.bits >> self.len as u32)
        };
        Ok(Word::from_parts(bits, len as u8))
    }

    pub fn is_prefix_of(&self, other: &Word) -> bool {
        self.len <= other.len && Word::from_parts(other.bits, self.len).bits == self.bits
    }

    /// True when one word is a prefix of the other, i.e. the cylinders meet.
    pub fn comparable(&self, other: &Word) -> bool {
        self.is_prefix_of(other) || other.is_prefix_of(self)
    }

    /// `w` with `prefix · w = self`.
    pub fn strip_prefix(&self, prefix: &Word) -> Option<Word> {
        if !prefix.is_prefix_of(self) {
            return None;
        }
        let bits = if prefix.len == 64 { 0 } else { self.bits << prefix.len as u32 };
        Some(Word::from_parts(bits, self.len - prefix.len))
    }

    /// Index among the level-`len` words in lexicographic order.
    pub fn index(&self) -> u64 {
        if self.len == 0 {
            0
        } else {
            self.bits >> (64 - self.len as u32)
        }
    }

    /// Replace the first `prefix.len()` bits of `self` by `image`, which must
    /// have the same length as `prefix`.
    pub(crate) fn rewrite(&self, prefix: &Word, image: &Word) -> Word {
        debug_assert!(prefix.is_prefix_of(self) && prefix.len == image.len);
        let mask = if prefix.len == 0 { 0 } else { u64::MAX << (64 - prefix.len as u32) };
        Word::from_parts((self.bits & !mask) | image.bits, self.len)
    }

    /// Left end of the interval in units of `2^-64`.
    pub(crate) fn start(&self) -> u128 {
        self.bits as u128
    }

    /// Right end (exclusive) of the interval in units of `2^-64`.
    pub(crate) fn end(&self) -> u128 {
        self.bits as u128 + (1u128 << (64 - self.len as u32))
    }

    pub(crate) fn span(&self) -> u128 {
        1u128 << (64 - self.len as u32)
    }

    /// All extensions of `self` at `level`, in lexicographic order.
    pub fn descendants(&self, level: u8) -> Result<Vec<Word>> {
        if level < self.len {
            return Err(Error::LevelTooSmall {
                level,
                depth: self.len,
            });
        }
        check_depth(level as usize)?;
        let extra = (level - self.len) as u32;
        let base = self.index() << extra;
        Ok((0..1u64 << extra)
            .map(|i| Word::from_index(base + i, level))
            .collect())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.bit(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{self}\"")
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Word::parse(s)
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Word::parse(&s).map_err(serde::de::Error::custom)
    }
}

/// Shorthand for tests and examples. Panics on malformed input.
pub fn w(s: &str) -> Word {
    Word::parse(s).unwrap_or_else(|e| panic!("bad word {s:?}: {e}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lexicographic_order() {
        let mut ws = [w("1"), w("01"), w(""), w("00"), w("0"), w("10")];
        ws.sort();
        let s: Vec<String> = ws.iter().map(|x| x.to_string()).collect();
        assert_eq!(s, ["", "0", "00", "01", "1", "10"]);
    }

    #[test]
    fn prefix_and_strip() {
        assert!(w("").is_prefix_of(&w("0101")));
        assert!(w("01").is_prefix_of(&w("0101")));
        assert!(!w("011").is_prefix_of(&w("0101")));
        assert_eq!(w("0101").strip_prefix(&w("01")), Some(w("01")));
        assert_eq!(w("01").concat(&w("10")).unwrap(), w("0110"));
        assert_eq!(w("0110").rewrite(&w("01"), &w("11")), w("1110"));
    }

    #[test]
    fn counts_and_index() {
        let x = w("01101");
        assert_eq!((x.zeros(), x.ones()), (2, 3));
        assert_eq!(x.index(), 0b01101);
        assert_eq!(Word::from_index(0b01101, 5), x);
        assert_eq!(w("").index(), 0);
    }

    #[test]
    fn descendants_in_order() {
        let d = w("1").descendants(3).unwrap();
        let s: Vec<String> = d.iter().map(|x| x.to_string()).collect();
        assert_eq!(s, ["100", "101", "110", "111"]);
        assert!(w("11").descendants(1).is_err());
    }

    #[test]
    fn rejects_bad_input() {
        assert!(Word::parse("012").unwrap_err().is_parse());
        let long = "0".repeat(max_depth() as usize + 1);
        assert!(matches!(
            Word::parse(&long),
            Err(Error::DepthOverflow { .. })
        ));
    }

    #[test]
    fn full_capacity_words() {
        let root = Word::root();
        assert_eq!(root.end(), 1u128 << 64);
        let x = Word::from_index(u64::MAX, 64);
        assert_eq!(x.len(), 64);
        assert_eq!(x.ones(), 64);
        assert_eq!(x.end(), 1u128 << 64);
    }
}
