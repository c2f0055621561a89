//! Orbit partitions and transitive-type censuses of permutation tuples.
//!
//! A tuple of leaf permutations at a common level splits the leaves into
//! orbits. Each orbit, with the tuple restricted to it, is a transitive tuple
//! of permutations of a finite set; its canonical form up to simultaneous
//! relabeling is its [`TransitiveTupleType`]. The census counts orbits of each
//! type and sums their masses, and is a complete conjugacy invariant for
//! conjugation by leaf permutations.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::perm::Perm;
use crate::rational::{Lambda, MassTable, Rational};
use crate::table::LeafPerm;

/// Largest number of candidate tuples enumerated by [`enumerate_types`].
pub const TYPE_ENUMERATION_LIMIT: u128 = 2_000_000;

/// Canonical representative of a transitive tuple up to simultaneous conjugacy.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TransitiveTupleType {
    gens: Vec<Perm>,
}

impl TransitiveTupleType {
    /// Canonicalize a transitive tuple on `{0..q-1}`.
    pub fn canonical(gens: &[Perm]) -> Result<Self> {
        let q = gens.first().map(Perm::degree).ok_or_else(|| {
            Error::Precondition("a type needs at least one generator".into())
        })?;
        if gens.iter().any(|g| g.degree() != q) {
            return Err(Error::DegreeMismatch(gens[0].degree(), q));
        }
        let points: Vec<usize> = (0..q).collect();
        let images: Vec<Vec<usize>> = gens.iter().map(|g| g.images().to_vec()).collect();
        Ok(TransitiveTupleType {
            gens: canonical_on(&points, &images)?,
        })
    }

    pub fn n(&self) -> usize {
        self.gens.len()
    }

    /// Orbit size.
    pub fn q(&self) -> usize {
        self.gens[0].degree()
    }

    pub fn gens(&self) -> &[Perm] {
        &self.gens
    }

    pub fn is_trivial(&self) -> bool {
        self.q() == 1
    }

    /// `"q:g1|g2|..."` with each generator as comma-separated images.
    pub fn encoding(&self) -> String {
        let gens: Vec<String> = self
            .gens
            .iter()
            .map(|g| {
                let s: Vec<String> = g.images().iter().map(|x| x.to_string()).collect();
                s.join(",")
            })
            .collect();
        format!("{}:{}", self.q(), gens.join("|"))
    }

    pub fn parse(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("bad type encoding {s:?}"));
        let (q, rest) = s.split_once(':').ok_or_else(bad)?;
        let q: usize = q.parse().map_err(|_| bad())?;
        let gens = rest
            .split('|')
            .map(|g| {
                let images = g
                    .split(',')
                    .map(|x| x.parse::<usize>().map_err(|_| bad()))
                    .collect::<Result<Vec<_>>>()?;
                if images.len() != q {
                    return Err(bad());
                }
                Perm::from_images(images).map_err(|_| bad())
            })
            .collect::<Result<Vec<_>>>()?;
        let t = TransitiveTupleType::canonical(&gens)?;
        if t.gens != gens {
            return Err(Error::Parse(format!("type encoding {s:?} is not canonical")));
        }
        Ok(t)
    }
}

impl fmt::Display for TransitiveTupleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.encoding())
    }
}

impl fmt::Debug for TransitiveTupleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Type({})", self.encoding())
    }
}

impl Serialize for TransitiveTupleType {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.encoding())
    }
}

impl<'de> Deserialize<'de> for TransitiveTupleType {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        TransitiveTupleType::parse(&s).map_err(serde::de::Error::custom)
    }
}

/// Canonical generators of the tuple `images` restricted to `points`.
///
/// Every base point seeds a breadth-first relabeling (generators in fixed
/// order, forward images); the lexicographically least concatenated image
/// encoding wins.
fn canonical_on(points: &[usize], images: &[Vec<usize>]) -> Result<Vec<Perm>> {
    let q = points.len();
    let local: BTreeMap<usize, usize> = points.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let gens_local: Vec<Vec<usize>> = images
        .iter()
        .map(|g| {
            points
                .iter()
                .map(|x| {
                    local
                        .get(&g[*x])
                        .copied()
                        .ok_or_else(|| Error::NotTransitive(format!("{x} leaves the block")))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let mut best: Option<Vec<usize>> = None;
    let mut label = vec![usize::MAX; q];
    let mut order = Vec::with_capacity(q);
    for base in 0..q {
        label.fill(usize::MAX);
        order.clear();
        label[base] = 0;
        order.push(base);
        let mut head = 0;
        while head < order.len() {
            let x = order[head];
            head += 1;
            for g in &gens_local {
                let y = g[x];
                if label[y] == usize::MAX {
                    label[y] = order.len();
                    order.push(y);
                }
            }
        }
        if order.len() != q {
            return Err(Error::NotTransitive(format!(
                "orbit of local point {base} has {} of {q} points",
                order.len()
            )));
        }
        // New generator k maps label[x] to label[g_k(x)].
        let mut enc = vec![0usize; q * gens_local.len()];
        for (k, g) in gens_local.iter().enumerate() {
            for x in 0..q {
                enc[k * q + label[x]] = label[g[x]];
            }
        }
        if best.as_ref().is_none_or(|b| enc < *b) {
            best = Some(enc);
        }
    }
    let best = best.unwrap_or_default();
    Ok(best
        .chunks(q.max(1))
        .take(images.len())
        .map(|c| Perm::from_images_unchecked(c.to_vec()))
        .collect())
}

fn common_level(tuple: &[LeafPerm]) -> Result<u8> {
    let level = tuple
        .first()
        .map(LeafPerm::level)
        .ok_or_else(|| Error::Precondition("empty tuple".into()))?;
    if let Some(p) = tuple.iter().find(|p| p.level() != level) {
        return Err(Error::Precondition(format!(
            "tuple levels differ: {} vs {}",
            level,
            p.level()
        )));
    }
    Ok(level)
}

/// Orbits of the tuple on the `2^L` leaves, each sorted, ordered by least leaf.
pub fn orbit_partition(tuple: &[LeafPerm]) -> Result<Vec<Vec<usize>>> {
    let level = common_level(tuple)?;
    let m = 1usize << level;
    let mut parent: Vec<usize> = (0..m).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for p in tuple {
        for x in 0..m {
            let (a, b) = (find(&mut parent, x), find(&mut parent, p.apply(x)));
            if a != b {
                // Keep the smaller root so roots are least leaves.
                let (lo, hi) = if a < b { (a, b) } else { (b, a) };
                parent[hi] = lo;
            }
        }
    }
    let mut slot = vec![usize::MAX; m];
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    for x in 0..m {
        let r = find(&mut parent, x);
        if slot[r] == usize::MAX {
            slot[r] = blocks.len();
            blocks.push(Vec::new());
        }
        blocks[slot[r]].push(x);
    }
    Ok(blocks)
}

/// Canonical type of the tuple restricted to one orbit block.
pub fn canonical_type(tuple: &[LeafPerm], block: &[usize]) -> Result<TransitiveTupleType> {
    let images: Vec<Vec<usize>> = tuple.iter().map(|p| p.perm().images().to_vec()).collect();
    let mut points = block.to_vec();
    points.sort_unstable();
    Ok(TransitiveTupleType {
        gens: canonical_on(&points, &images)?,
    })
}

/// Tuple restricted to a sorted block, in local coordinates `x_i ↦ i`.
pub(crate) fn local_tuple(tuple: &[LeafPerm], block: &[usize]) -> Vec<Perm> {
    tuple
        .iter()
        .map(|p| {
            let images = block
                .iter()
                .map(|x| block.binary_search(&p.apply(*x)).expect("block is invariant"))
                .collect();
            Perm::from_images_unchecked(images)
        })
        .collect()
}

/// Exact `mu_lambda` of level-`level` leaves.
pub fn leaf_mass(leaves: &[usize], level: u8, lambda: &Lambda) -> Rational {
    let mut table = MassTable::new(lambda);
    leaf_mass_with(&mut table, leaves, level)
}

pub(crate) fn leaf_mass_with(table: &mut MassTable, leaves: &[usize], level: u8) -> Rational {
    let mut hist: BTreeMap<u32, u64> = BTreeMap::new();
    for &x in leaves {
        *hist.entry(x.count_ones()).or_default() += 1;
    }
    hist.into_iter().fold(Rational::zero(), |acc, (ones, n)| {
        acc + table.mass(level as u32 - ones, ones) * Rational::from_integer(n.into())
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusEntry {
    #[serde(rename = "type")]
    pub ty: TransitiveTupleType,
    pub count: usize,
    #[serde(with = "crate::rational::serde_rational")]
    pub mass: Rational,
    pub blocks: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitCensus {
    pub level: u8,
    pub lambda: Lambda,
    /// Sorted by type encoding.
    pub entries: Vec<CensusEntry>,
}

impl OrbitCensus {
    pub fn get(&self, ty: &TransitiveTupleType) -> Option<&CensusEntry> {
        self.entries.iter().find(|e| e.ty == *ty)
    }

    pub fn count(&self, ty: &TransitiveTupleType) -> usize {
        self.get(ty).map_or(0, |e| e.count)
    }

    pub fn types(&self) -> Vec<&TransitiveTupleType> {
        self.entries.iter().map(|e| &e.ty).collect()
    }

    pub fn total_mass(&self) -> Rational {
        self.entries.iter().map(|e| e.mass.clone()).sum()
    }

    /// `(type, count, mass)` triples, the conjugacy-invariant part.
    pub fn signature(&self) -> Vec<(String, usize, Rational)> {
        self.entries
            .iter()
            .map(|e| (e.ty.encoding(), e.count, e.mass.clone()))
            .collect()
    }
}

impl Serialize for OrbitCensus {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.entries.serialize(s)
    }
}

/// Blocks grouped by canonical type, sorted by encoding; blocks in least-leaf order.
pub(crate) fn typed_blocks(
    tuple: &[LeafPerm],
) -> Result<Vec<(TransitiveTupleType, Vec<Vec<usize>>)>> {
    let mut by_type: BTreeMap<String, (TransitiveTupleType, Vec<Vec<usize>>)> = BTreeMap::new();
    for block in orbit_partition(tuple)? {
        let ty = canonical_type(tuple, &block)?;
        by_type
            .entry(ty.encoding())
            .or_insert_with(|| (ty, Vec::new()))
            .1
            .push(block);
    }
    Ok(by_type.into_values().collect())
}

pub fn census(tuple: &[LeafPerm], lambda: &Lambda) -> Result<OrbitCensus> {
    let level = common_level(tuple)?;
    let mut table = MassTable::new(lambda);
    let entries = typed_blocks(tuple)?
        .into_iter()
        .map(|(ty, blocks)| {
            let leaves: Vec<usize> = blocks.iter().flatten().copied().collect();
            CensusEntry {
                mass: leaf_mass_with(&mut table, &leaves, level),
                count: blocks.len(),
                ty,
                blocks,
            }
        })
        .collect();
    Ok(OrbitCensus {
        level,
        lambda: lambda.clone(),
        entries,
    })
}

/// All transitive `n`-tuple types of size at most `s`, sorted by encoding.
pub fn enumerate_types(n: usize, s: usize) -> Result<Vec<TransitiveTupleType>> {
    if n == 0 || s == 0 {
        return Err(Error::Precondition("n and s must be positive".into()));
    }
    let mut work: u128 = 0;
    for q in 1..=s {
        let fact: u128 = (1..=q as u128).product();
        work = work.saturating_add(fact.saturating_pow(n as u32));
    }
    if work > TYPE_ENUMERATION_LIMIT {
        return Err(Error::TooManyPieces {
            pieces: work,
            limit: TYPE_ENUMERATION_LIMIT,
        });
    }
    let mut out: BTreeMap<String, TransitiveTupleType> = BTreeMap::new();
    for q in 1..=s {
        let all = Perm::all(q);
        let mut idx = vec![0usize; n];
        loop {
            let gens: Vec<Perm> = idx.iter().map(|&i| all[i].clone()).collect();
            if let Ok(t) = TransitiveTupleType::canonical(&gens) {
                out.entry(t.encoding()).or_insert(t);
            }
            // Odometer-style increment over all n-tuples.
            let mut k = 0;
            while k < n {
                idx[k] += 1;
                if idx[k] < all.len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
            if k == n {
                break;
            }
        }
    }
    Ok(out.into_values().collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MissingType {
    #[serde(rename = "type")]
    pub ty: TransitiveTupleType,
    pub have: usize,
    pub need: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnReport {
    pub passes: bool,
    pub missing: Vec<MissingType>,
}

/// Every transitive type of size `<= s` occurs in at least `multiplicity` orbits.
pub fn en_surrogate_check(tuple: &[LeafPerm], s: usize, multiplicity: usize) -> Result<EnReport> {
    if multiplicity == 0 {
        return Err(Error::Precondition("multiplicity must be positive".into()));
    }
    let have: BTreeMap<String, usize> = typed_blocks(tuple)?
        .into_iter()
        .map(|(t, b)| (t.encoding(), b.len()))
        .collect();
    let missing: Vec<MissingType> = enumerate_types(tuple.len(), s)?
        .into_iter()
        .filter_map(|ty| {
            let h = have.get(&ty.encoding()).copied().unwrap_or(0);
            (h < multiplicity).then_some(MissingType {
                ty,
                have: h,
                need: multiplicity,
            })
        })
        .collect();
    Ok(EnReport {
        passes: missing.is_empty(),
        missing,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn lp(level: u8, images: &[usize]) -> LeafPerm {
        LeafPerm::new(level, Perm::from_images(images.to_vec()).unwrap()).unwrap()
    }

    fn l23() -> Lambda {
        Lambda::from_ratio(2, 3).unwrap()
    }

    #[test]
    fn partition_examples() {
        assert_eq!(orbit_partition(&[lp(1, &[1, 0])]).unwrap(), vec![vec![0, 1]]);
        assert_eq!(
            orbit_partition(&[LeafPerm::identity(2)]).unwrap(),
            vec![vec![0], vec![1], vec![2], vec![3]]
        );
        let t = [lp(3, &[1, 0, 2, 3, 4, 5, 6, 7]), lp(3, &[0, 2, 1, 3, 5, 4, 6, 7])];
        assert_eq!(
            orbit_partition(&t).unwrap(),
            vec![vec![0, 1, 2], vec![3], vec![4, 5], vec![6], vec![7]]
        );
    }

    #[test]
    fn type_examples() {
        let t = TransitiveTupleType::canonical(&[Perm::from_images(vec![1, 0]).unwrap()]).unwrap();
        assert_eq!(t.encoding(), "2:1,0");
        let fixed = TransitiveTupleType::canonical(&[Perm::identity(1)]).unwrap();
        assert!(fixed.is_trivial());
        assert_eq!(fixed.encoding(), "1:0");
        assert!(TransitiveTupleType::canonical(&[Perm::identity(2)]).is_err());
        assert_eq!(TransitiveTupleType::parse("2:1,0").unwrap(), t);
        assert!(TransitiveTupleType::parse("3:0,2,1").is_err());
    }

    #[test]
    fn relabelled_tuples_share_a_type() {
        let a = Perm::from_images(vec![1, 2, 0]).unwrap();
        let b = Perm::from_images(vec![1, 0, 2]).unwrap();
        let base = TransitiveTupleType::canonical(&[a.clone(), b.clone()]).unwrap();
        for g in Perm::all(3) {
            let t = TransitiveTupleType::canonical(&[g.conjugate(&a), g.conjugate(&b)]).unwrap();
            assert_eq!(t, base);
        }
        let other = TransitiveTupleType::canonical(&[a.clone(), a.clone()]).unwrap();
        assert_ne!(other, base);
    }

    #[test]
    fn census_examples() {
        let c = census(&[lp(1, &[1, 0])], &l23()).unwrap();
        assert_eq!(c.signature(), vec![("2:1,0".to_string(), 1, int(1))]);
        let c = census(&[LeafPerm::identity(1)], &l23()).unwrap();
        assert_eq!(c.signature(), vec![("1:0".to_string(), 2, int(1))]);
        let swap2 = lp(1, &[1, 0]).refine(2).unwrap();
        let c = census(&[swap2], &l23()).unwrap();
        let e = &c.entries[0];
        assert_eq!(e.count, 2);
        assert_eq!(e.blocks, vec![vec![0, 2], vec![1, 3]]);
        assert_eq!(leaf_mass(&e.blocks[0], 2, &l23()), ratio(2, 3));
        assert_eq!(leaf_mass(&e.blocks[1], 2, &l23()), ratio(1, 3));
        assert_eq!(c.total_mass(), int(1));
    }

    #[test]
    fn enumeration_counts() {
        // Transitive 1-tuples of size q are the q-cycles: one type per q.
        assert_eq!(enumerate_types(1, 4).unwrap().len(), 4);
        // Size-2 transitive pairs: at least one generator is the swap, 3 types.
        let two: Vec<_> = enumerate_types(2, 2).unwrap().into_iter().filter(|t| t.q() == 2).collect();
        assert_eq!(two.len(), 3);
        assert!(enumerate_types(3, 8).is_err());
    }

    #[test]
    fn en_check_examples() {
        let id = [LeafPerm::identity(1)];
        assert!(en_surrogate_check(&id, 1, 2).unwrap().passes);
        let r = en_surrogate_check(&id, 2, 1).unwrap();
        assert!(!r.passes);
        assert_eq!(r.missing.len(), 1);
        assert_eq!(r.missing[0].ty.encoding(), "2:1,0");
    }

    #[test]
    fn census_json() {
        let c = census(&[lp(1, &[1, 0])], &l23()).unwrap();
        assert_eq!(
            serde_json::to_string(&c).unwrap(),
            r#"[{"type":"2:1,0","count":1,"mass":"1/1","blocks":[[0,1]]}]"#
        );
    }
}
