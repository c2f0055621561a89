//! Table maps: the exact elements of the (pseudo-)full group of the tail
//! relation.
//!
//! A [`TableMap`] is a finite list of pairs `u -> v` with `|u| = |v|`, acting
//! by `u·w ↦ v·w`. Sources are prefix-free and so are targets, so the map is
//! injective; equal lengths keep every point inside its tail-equivalence
//! class. The canonical form merges sibling pairs `(u0 -> v0, u1 -> v1)` into
//! `(u -> v)` and sorts by source, which makes table equality coincide with
//! equality of maps.

use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::cylinder::CylinderSet;
use crate::error::{Error, Result};
use crate::perm::Perm;
use crate::rational::{format_rational, Lambda, MassTable, Rational};
use crate::word::{check_depth, Word};

/// Largest leaf count materialized by [`LeafPerm`] conversions.
pub const LEAF_LIMIT_LEVEL: u8 = 24;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct TableMap {
    pairs: Vec<(Word, Word)>,
}

impl TableMap {
    pub fn empty() -> Self {
        TableMap { pairs: Vec::new() }
    }

    pub fn identity() -> Self {
        TableMap {
            pairs: vec![(Word::root(), Word::root())],
        }
    }

    /// The identity restricted to a set.
    pub fn identity_on(set: &CylinderSet) -> Self {
        TableMap {
            pairs: set.words().iter().map(|w| (*w, *w)).collect(),
        }
    }

    /// Validate and canonicalize a list of pairs.
    pub fn from_pairs(mut pairs: Vec<(Word, Word)>) -> Result<Self> {
        for &(s, t) in &pairs {
            if s.len() != t.len() {
                return Err(Error::UnequalLength {
                    source_word: s,
                    target: t,
                });
            }
        }
        pairs.sort_unstable();
        check_prefix_free(pairs.iter().map(|p| p.0), "source")?;
        let mut targets: Vec<Word> = pairs.iter().map(|p| p.1).collect();
        targets.sort_unstable();
        check_prefix_free(targets.into_iter(), "target")?;
        Ok(TableMap {
            pairs: merge_sorted_pairs(pairs),
        })
    }

    pub fn parse(pairs: &[(&str, &str)]) -> Result<Self> {
        let ps = pairs
            .iter()
            .map(|(s, t)| Ok((Word::parse(s)?, Word::parse(t)?)))
            .collect::<Result<Vec<_>>>()?;
        TableMap::from_pairs(ps)
    }

    pub fn pairs(&self) -> &[(Word, Word)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn depth(&self) -> u8 {
        self.pairs.iter().map(|p| p.0.len()).max().unwrap_or(0)
    }

    pub fn domain(&self) -> CylinderSet {
        CylinderSet::from_words(self.pairs.iter().map(|p| p.0))
    }

    pub fn range(&self) -> CylinderSet {
        CylinderSet::from_words(self.pairs.iter().map(|p| p.1))
    }

    pub fn is_identity(&self) -> bool {
        *self == TableMap::identity()
    }

    /// Total domain and total range.
    pub fn is_total(&self) -> bool {
        self.domain().is_full() && self.range().is_full()
    }

    /// Indices of pairs whose source meets the cylinder `[v]`.
    fn overlapping(&self, v: &Word) -> std::ops::Range<usize> {
        let lo = self.pairs.partition_point(|p| p.0.end() <= v.start());
        let hi = lo + self.pairs[lo..].partition_point(|p| p.0.start() < v.end());
        lo..hi
    }

    /// Image of the cylinder `[x]` if a single pair covers it.
    pub(crate) fn image_of_cylinder(&self, x: &Word) -> Result<Word> {
        let r = self.overlapping(x);
        match r.len() {
            0 => Err(Error::OutsideDomain(*x)),
            1 => {
                let (s, t) = self.pairs[r.start];
                if s.is_prefix_of(x) {
                    Ok(x.rewrite(&s, &t))
                } else {
                    Err(Error::TooShort(*x))
                }
            }
            _ => Err(Error::TooShort(*x)),
        }
    }

    /// Image of a word deep enough to be resolved by one pair.
    pub fn apply_prefix(&self, x: &Word) -> Result<Word> {
        self.image_of_cylinder(x)
    }

    /// `self ∘ other`, defined on `other⁻¹(dom self)`.
    pub fn compose(&self, other: &TableMap) -> Result<TableMap> {
        let mut out = Vec::new();
        for &(u, v) in &other.pairs {
            for &(a, b) in &self.pairs[self.overlapping(&v)] {
                if a.is_prefix_of(&v) {
                    out.push((u, v.rewrite(&a, &b)));
                } else {
                    let tail = a.strip_prefix(&v).expect("overlap implies comparable");
                    out.push((u.concat(&tail)?, b));
                }
            }
        }
        TableMap::from_pairs(out)
    }

    pub fn inverse(&self) -> TableMap {
        let mut pairs: Vec<(Word, Word)> = self.pairs.iter().map(|&(s, t)| (t, s)).collect();
        pairs.sort_unstable();
        TableMap {
            pairs: merge_sorted_pairs(pairs),
        }
    }

    /// Points that move: the union of sources with `source != target`.
    pub fn support(&self) -> CylinderSet {
        CylinderSet::from_words(self.pairs.iter().filter(|p| p.0 != p.1).map(|p| p.0))
    }

    /// The set of points in both domains where the maps disagree.
    pub fn disagreement(&self, other: &TableMap) -> CylinderSet {
        let mut out = Vec::new();
        let (a, b) = (&self.pairs, &other.pairs);
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            let (sa, ta) = a[i];
            let (sb, tb) = b[j];
            if sa.comparable(&sb) {
                let piece = if sa.len() >= sb.len() { sa } else { sb };
                if piece.rewrite(&sa, &ta) != piece.rewrite(&sb, &tb) {
                    out.push(piece);
                }
            }
            let (ea, eb) = (sa.end(), sb.end());
            if ea <= eb {
                i += 1;
            }
            if eb <= ea {
                j += 1;
            }
        }
        CylinderSet::from_words(out)
    }

    /// Radon–Nikodym derivative: on `[u]` the value `mu([v]) / mu([u])`.
    pub fn rn_cocycle(&self, lambda: &Lambda) -> Vec<(Word, Rational)> {
        let mut table = MassTable::new(lambda);
        self.pairs
            .iter()
            .map(|&(s, t)| {
                let ms = table.mass(s.zeros(), s.ones());
                let mt = table.mass(t.zeros(), t.ones());
                (s, mt / ms)
            })
            .collect()
    }

    /// Cocycle value at a word deep enough to sit inside one piece.
    pub fn rn_at(&self, x: &Word, lambda: &Lambda) -> Result<Rational> {
        let y = self.image_of_cylinder(x)?;
        Ok(lambda.cylinder_mass(y.zeros(), y.ones()) / lambda.cylinder_mass(x.zeros(), x.ones()))
    }

    /// Refine every pair to length `level`, in source order.
    pub fn refine_pairs(&self, level: u8) -> Result<Vec<(Word, Word)>> {
        let depth = self.depth();
        if level < depth {
            return Err(Error::LevelTooSmall { level, depth });
        }
        check_depth(level as usize)?;
        let mut out = Vec::new();
        for &(s, t) in &self.pairs {
            for x in s.descendants(level)? {
                out.push((x, x.rewrite(&s, &t)));
            }
        }
        Ok(out)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("table serialization cannot fail")
    }
}

/// Glue maps with pairwise disjoint domains and pairwise disjoint ranges.
pub fn glue(parts: &[TableMap]) -> Result<TableMap> {
    check_disjoint(parts, "sources", |p| p.0)?;
    check_disjoint(parts, "targets", |p| p.1)?;
    let pairs: Vec<(Word, Word)> = parts.iter().flat_map(|p| p.pairs.iter().copied()).collect();
    TableMap::from_pairs(pairs)
}

fn check_disjoint(
    parts: &[TableMap],
    side: &'static str,
    pick: impl Fn(&(Word, Word)) -> Word,
) -> Result<()> {
    let mut all: Vec<(Word, usize)> = parts
        .iter()
        .enumerate()
        .flat_map(|(k, p)| p.pairs.iter().map(move |q| (q, k)))
        .map(|(q, k)| (pick(q), k))
        .collect();
    all.sort_unstable();
    for win in all.windows(2) {
        let ((a, _), (b, kb)) = (win[0], win[1]);
        if a.is_prefix_of(&b) {
            return Err(Error::Overlap {
                side,
                part: kb,
                word: b,
            });
        }
    }
    Ok(())
}

fn check_prefix_free(sorted: impl Iterator<Item = Word>, side: &'static str) -> Result<()> {
    let mut prev: Option<Word> = None;
    for x in sorted {
        if let Some(p) = prev {
            if p.is_prefix_of(&x) {
                return Err(Error::NotPrefixFree {
                    side,
                    first: p,
                    second: x,
                });
            }
        }
        prev = Some(x);
    }
    Ok(())
}

/// Sibling-merge a source-sorted, validated pair list.
fn merge_sorted_pairs(pairs: Vec<(Word, Word)>) -> Vec<(Word, Word)> {
    let mut stack: Vec<(Word, Word)> = Vec::with_capacity(pairs.len());
    for p in pairs {
        stack.push(p);
        while stack.len() >= 2 {
            let (s1, t1) = stack[stack.len() - 1];
            let (s0, t0) = stack[stack.len() - 2];
            let siblings = s0.len() == s1.len()
                && s0.len() > 0
                && s0.last_bit() == Some(false)
                && s1.last_bit() == Some(true)
                && s0.parent() == s1.parent()
                && t0.last_bit() == Some(false)
                && t1.last_bit() == Some(true)
                && t0.parent() == t1.parent();
            if !siblings {
                break;
            }
            stack.truncate(stack.len() - 2);
            stack.push((s0.parent().unwrap(), t0.parent().unwrap()));
        }
    }
    stack
}

/// A table map with total domain and total range: an element of the full group.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct FullMap(TableMap);

impl FullMap {
    pub fn new(table: TableMap) -> Result<Self> {
        if !table.is_total() {
            return Err(Error::NotTotal {
                source_kraft: format_rational(&table.domain().kraft()),
                target_kraft: format_rational(&table.range().kraft()),
            });
        }
        Ok(FullMap(table))
    }

    pub fn identity() -> Self {
        FullMap(TableMap::identity())
    }

    pub fn table(&self) -> &TableMap {
        &self.0
    }

    pub fn into_table(self) -> TableMap {
        self.0
    }

    pub fn compose(&self, other: &FullMap) -> Result<FullMap> {
        Ok(FullMap(self.0.compose(&other.0)?))
    }

    pub fn inverse(&self) -> FullMap {
        FullMap(self.0.inverse())
    }

    pub fn support(&self) -> CylinderSet {
        self.0.support()
    }

    /// Uniform distance `mu{x : f(x) != g(x)}`.
    pub fn du(&self, other: &FullMap, lambda: &Lambda) -> Rational {
        self.0.disagreement(&other.0).mu(lambda)
    }

    pub fn to_leaf_perm(&self, level: u8) -> Result<LeafPerm> {
        LeafPerm::from_full_map(self, level)
    }
}

impl TryFrom<TableMap> for FullMap {
    type Error = Error;

    fn try_from(t: TableMap) -> Result<Self> {
        FullMap::new(t)
    }
}

impl std::ops::Deref for FullMap {
    type Target = TableMap;

    fn deref(&self) -> &TableMap {
        &self.0
    }
}

/// `du(f, g, lambda)` on table maps; both must be total.
pub fn du(f: &TableMap, g: &TableMap, lambda: &Lambda) -> Result<Rational> {
    let f = FullMap::new(f.clone())?;
    let g = FullMap::new(g.clone())?;
    Ok(f.du(&g, lambda))
}

/// A permutation of the `2^level` level-`level` words, indexed lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LeafPerm {
    level: u8,
    perm: Perm,
}

impl LeafPerm {
    pub fn new(level: u8, perm: Perm) -> Result<Self> {
        check_leaf_level(level)?;
        if perm.degree() != 1usize << level {
            return Err(Error::DegreeMismatch(perm.degree(), 1usize << level));
        }
        Ok(LeafPerm { level, perm })
    }

    pub fn identity(level: u8) -> Self {
        LeafPerm {
            level,
            perm: Perm::identity(1usize << level),
        }
    }

    /// The cyclic leaf successor `k ↦ k + 1 mod 2^level`.
    pub fn successor(level: u8) -> Self {
        let n = 1usize << level;
        LeafPerm {
            level,
            perm: Perm::from_images_unchecked((0..n).map(|k| (k + 1) % n).collect()),
        }
    }

    pub fn level(&self) -> u8 {
        self.level
    }

    pub fn perm(&self) -> &Perm {
        &self.perm
    }

    pub fn apply(&self, leaf: usize) -> usize {
        self.perm.apply(leaf)
    }

    pub fn compose(&self, other: &LeafPerm) -> Result<LeafPerm> {
        if self.level != other.level {
            return Err(Error::DegreeMismatch(self.perm.degree(), other.perm.degree()));
        }
        Ok(LeafPerm {
            level: self.level,
            perm: self.perm.compose(&other.perm),
        })
    }

    pub fn inverse(&self) -> LeafPerm {
        LeafPerm {
            level: self.level,
            perm: self.perm.inverse(),
        }
    }

    pub fn pow(&self, k: i64) -> LeafPerm {
        LeafPerm {
            level: self.level,
            perm: self.perm.pow(k),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.perm.is_identity()
    }

    /// The same map viewed at a deeper level: leaf `k·w ↦ π(k)·w`.
    pub fn refine(&self, level: u8) -> Result<LeafPerm> {
        if level < self.level {
            return Err(Error::LevelTooSmall {
                level,
                depth: self.level,
            });
        }
        check_leaf_level(level)?;
        let extra = (level - self.level) as u32;
        let n = 1usize << level;
        let images = (0..n)
            .map(|x| {
                let (hi, lo) = (x >> extra, x & ((1usize << extra) - 1));
                (self.perm.apply(hi) << extra) | lo
            })
            .collect();
        Ok(LeafPerm {
            level,
            perm: Perm::from_images_unchecked(images),
        })
    }

    pub fn from_full_map(f: &FullMap, level: u8) -> Result<LeafPerm> {
        let depth = f.depth();
        if level < depth {
            return Err(Error::LevelTooSmall { level, depth });
        }
        check_leaf_level(level)?;
        let mut images = vec![0usize; 1usize << level];
        for &(s, t) in f.pairs() {
            let extra = (level - s.len()) as u32;
            let (sb, tb) = ((s.index() as usize) << extra, (t.index() as usize) << extra);
            for k in 0..1usize << extra {
                images[sb + k] = tb + k;
            }
        }
        Ok(LeafPerm {
            level,
            perm: Perm::from_images_unchecked(images),
        })
    }

    pub fn to_table(&self) -> TableMap {
        let pairs = self
            .perm
            .images()
            .iter()
            .enumerate()
            .map(|(i, &j)| {
                (
                    Word::from_index(i as u64, self.level),
                    Word::from_index(j as u64, self.level),
                )
            })
            .collect();
        TableMap {
            pairs: merge_sorted_pairs(pairs),
        }
    }

    pub fn to_full_map(&self) -> FullMap {
        FullMap(self.to_table())
    }
}

impl Serialize for LeafPerm {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            level: u8,
            perm: &'a Perm,
        }
        Repr {
            level: self.level,
            perm: &self.perm,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for LeafPerm {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            level: u8,
            perm: Perm,
        }
        let r = Repr::deserialize(d)?;
        LeafPerm::new(r.level, r.perm).map_err(serde::de::Error::custom)
    }
}

fn check_leaf_level(level: u8) -> Result<()> {
    check_depth(level as usize)?;
    if level > LEAF_LIMIT_LEVEL {
        return Err(Error::TooManyPieces {
            pieces: 1u128 << level,
            limit: 1u128 << LEAF_LIMIT_LEVEL,
        });
    }
    Ok(())
}

impl fmt::Debug for LeafPerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LeafPerm(L={}, {})", self.level, self.perm)
    }
}

/// A finite-depth cut of an infinite-table element: the table covers
/// everything except `defect_dom` (on the source side) and `defect_rng`
/// (on the target side).
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct TruncatedMap {
    #[serde(flatten)]
    pub table: TableMap,
    pub defect_dom: CylinderSet,
    pub defect_rng: CylinderSet,
}

impl TruncatedMap {
    pub fn new(table: TableMap, defect_dom: CylinderSet, defect_rng: CylinderSet) -> Result<Self> {
        let dom = table.domain();
        let rng = table.range();
        if !dom.is_disjoint(&defect_dom) || !dom.union(&defect_dom).is_full() {
            return Err(Error::Precondition(
                "table sources and defect_dom must partition the space".into(),
            ));
        }
        if !rng.is_disjoint(&defect_rng) || !rng.union(&defect_rng).is_full() {
            return Err(Error::Precondition(
                "table targets and defect_rng must partition the space".into(),
            ));
        }
        Ok(TruncatedMap {
            table,
            defect_dom,
            defect_rng,
        })
    }

    pub fn defect_mass(&self, lambda: &Lambda) -> Rational {
        self.defect_dom.mu(lambda)
    }
}

/// The binary adding machine cut at depth `d`: `1^k 0 ↦ 0^k 1` for `k < d`,
/// undefined on `[1^d]` with image gap `[0^d]`.
pub fn odometer(depth: u8) -> Result<TruncatedMap> {
    if depth == 0 {
        return Err(Error::Precondition("odometer depth must be at least 1".into()));
    }
    check_depth(depth as usize)?;
    let mut pairs = Vec::with_capacity(depth as usize);
    for k in 0..depth {
        let len = k + 1;
        // 1^k 0 and 0^k 1 as level-len indices.
        let src = ((1u64 << k) - 1) << 1;
        let dst = 1u64;
        pairs.push((Word::from_index(src, len), Word::from_index(dst, len)));
    }
    let table = TableMap::from_pairs(pairs)?;
    let ones = Word::from_index((1u64 << depth) - 1, depth);
    let zeros = Word::from_index(0, depth);
    TruncatedMap::new(
        table,
        CylinderSet::singleton(ones),
        CylinderSet::singleton(zeros),
    )
}

impl Serialize for TableMap {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            pairs: &'a [(Word, Word)],
        }
        Repr { pairs: &self.pairs }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for TableMap {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            pairs: Vec<(Word, Word)>,
        }
        let r = Repr::deserialize(d)?;
        TableMap::from_pairs(r.pairs).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for TableMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (s, t)) in self.pairs.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{s}->{t}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for TableMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Product of cocycle values along a word path, for chain-rule audits.
pub fn cocycle_product(values: &[Rational]) -> Rational {
    values.iter().fold(Rational::one(), |acc, v| acc * v)
}

/// Total mass moved by a map, `mu(support)`.
pub fn support_mass(f: &TableMap, lambda: &Lambda) -> Rational {
    let s = f.support();
    if s.is_empty() {
        Rational::zero()
    } else {
        s.mu(lambda)
    }
}
