//! Simultaneous conjugation of permutation tuples by table maps.
//!
//! Given tuples `S` and `T` at a common level whose censuses have the same
//! types, build `C` with `C ∘ S_i ∘ C⁻¹ = T_i`:
//!
//! 1. For each type, the transversals are the least leaves of its blocks on
//!    each side. A bridging map sends the `S`-transversals onto the
//!    `T`-transversals: rank matching when the block counts agree, otherwise
//!    an approximate equidecomposition (which needs `lambda != 1/2`).
//! 2. The bridge is spread over each block with the lexicographic cyclic
//!    successors `U` (source block) and `V` (target block): `x_i·w ↦ y_i·w'`
//!    when `a·w ↦ b·w'`, i.e. `V^i ψ U^{-i}`.
//! 3. Each matched block pair is corrected by the least permutation
//!    conjugating the two restricted tuples, so that the result is an honest
//!    conjugator on the block.
//! 4. The pieces are glued. Any uncovered orbits on the two sides have equal
//!    uniform mass and are rank-matched to complete the map. Conjugation can
//!    fail only on the uncovered target orbits, so only target-heavy types
//!    share the `epsilon` budget; the exact failure mass is reported per
//!    generator.

use std::collections::HashMap;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::census::{leaf_mass_with, local_tuple, typed_blocks, TransitiveTupleType};
use crate::cylinder::CylinderSet;
use crate::equidecompose::{equidecompose_onto, match_in_order};
use crate::error::{Error, Result};
use crate::perm::{least_conjugator, Perm};
use crate::rational::{serde_rational_vec, Lambda, MassTable, Rational};
use crate::table::{glue, FullMap, LeafPerm, TableMap};
use crate::word::Word;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjugationResult {
    /// A total map `C`.
    pub map: TableMap,
    /// True when `C ∘ S_i ∘ C⁻¹ = T_i` holds exactly for every `i`.
    pub exact: bool,
    /// `du(C ∘ S_i ∘ C⁻¹, T_i)` for each `i`, exact.
    #[serde(with = "serde_rational_vec")]
    pub defects: Vec<Rational>,
    /// Source-side orbits not reached by the bridging maps.
    pub uncovered_dom: CylinderSet,
    /// Target-side orbits not reached by the bridging maps.
    pub uncovered_rng: CylinderSet,
    /// `mu(uncovered_rng)`, an upper bound for every defect.
    #[serde(with = "crate::rational::serde_rational")]
    pub defect_bound: Rational,
}

/// (type index, block index).
type BlockId = (usize, usize);

struct Side<'a> {
    tuple: &'a [LeafPerm],
    level: u8,
    /// Per type (shared order), blocks in least-leaf order.
    blocks: Vec<Vec<Vec<usize>>>,
    /// Leaf -> (type index, block index).
    owner: HashMap<usize, (usize, usize)>,
}

impl<'a> Side<'a> {
    fn new(tuple: &'a [LeafPerm], typed: Vec<(TransitiveTupleType, Vec<Vec<usize>>)>) -> Self {
        let level = tuple[0].level();
        let mut owner = HashMap::new();
        let blocks: Vec<Vec<Vec<usize>>> = typed.into_iter().map(|(_, b)| b).collect();
        for (k, bs) in blocks.iter().enumerate() {
            for (j, b) in bs.iter().enumerate() {
                owner.insert(b[0], (k, j));
            }
        }
        Side {
            tuple,
            level,
            blocks,
            owner,
        }
    }

    fn transversals(&self, k: usize) -> CylinderSet {
        CylinderSet::from_words(
            self.blocks[k]
                .iter()
                .map(|b| Word::from_index(b[0] as u64, self.level)),
        )
    }

    /// Largest `mu(block) / mu(least leaf)` over the blocks of type `k`.
    fn spread(&self, k: usize, table: &mut MassTable) -> Rational {
        self.blocks[k]
            .iter()
            .map(|b| leaf_mass_with(table, b, self.level) / leaf_mass_with(table, &b[..1], self.level))
            .max()
            .unwrap_or_else(Rational::zero)
    }

    /// Block owning a transversal leaf.
    fn block_of(&self, leaf: usize) -> (usize, usize) {
        self.owner[&leaf]
    }

    /// All pieces `x_i·w` of the orbit of a transversal piece `a·w`.
    fn spread_piece(&self, piece: &Word, out: &mut Vec<Word>) -> Result<()> {
        for (a, tail) in split_piece(piece, self.level)? {
            let (k, j) = self.block_of(a);
            for &x in &self.blocks[k][j] {
                out.push(Word::from_index(x as u64, self.level).concat(&tail)?);
            }
        }
        Ok(())
    }
}

/// Split a piece into `(leaf, tail)` parts with the leaf at `level`.
fn split_piece(piece: &Word, level: u8) -> Result<Vec<(usize, Word)>> {
    if piece.len() >= level {
        let leaf = Word::from_index(piece.index() >> (piece.len() - level), level);
        let tail = piece.strip_prefix(&leaf).expect("leaf is a prefix");
        Ok(vec![(leaf.index() as usize, tail)])
    } else {
        Ok(piece
            .descendants(level)?
            .into_iter()
            .map(|x| (x.index() as usize, Word::root()))
            .collect())
    }
}

/// Conjugate `s` onto `t`. See the module documentation for the construction.
pub fn conjugate_tuples(
    s: &[LeafPerm],
    t: &[LeafPerm],
    lambda: &Lambda,
    epsilon: &Rational,
) -> Result<ConjugationResult> {
    if s.is_empty() || s.len() != t.len() {
        return Err(Error::Precondition("tuples must have equal, positive length".into()));
    }
    let level = s[0].level();
    if s.iter().chain(t).any(|p| p.level() != level) {
        return Err(Error::Precondition("all permutations must share one level".into()));
    }
    let ts = typed_blocks(s)?;
    let tt = typed_blocks(t)?;
    let types_s: Vec<&TransitiveTupleType> = ts.iter().map(|x| &x.0).collect();
    let types_t: Vec<&TransitiveTupleType> = tt.iter().map(|x| &x.0).collect();
    if types_s != types_t {
        let only_s = types_s.iter().find(|x| !types_t.contains(x));
        let only_t = types_t.iter().find(|x| !types_s.contains(x));
        let msg = match (only_s, only_t) {
            (Some(x), _) => format!("type {x} occurs only in the source tuple"),
            (_, Some(x)) => format!("type {x} occurs only in the target tuple"),
            _ => unreachable!("type lists differ"),
        };
        return Err(Error::TypeSetMismatch(msg));
    }
    let n_types = ts.len();
    let src = Side::new(s, ts);
    let dst = Side::new(t, tt);

    let mut table = MassTable::new(lambda);
    let mut pairs: Vec<(Word, Word)> = Vec::new();
    let mut uncovered_dom = Vec::new();
    let mut uncovered_rng = Vec::new();
    // (source type, block) and (target type, block) -> correcting permutation.
    let mut corrections: HashMap<(BlockId, BlockId), Perm> = HashMap::new();
    // Only target-side leftovers can spoil conjugation, so the budget is
    // split over the types whose target transversals carry more uniform mass.
    let rng_heavy = (0..n_types)
        .filter(|&k| dst.transversals(k).kraft() > src.transversals(k).kraft())
        .count()
        .max(1);
    for k in 0..n_types {
        let (a, b) = (src.transversals(k), dst.transversals(k));
        let eps_k = if b.kraft() > a.kraft() {
            let spread = dst.spread(k, &mut table);
            epsilon.clone() / (spread * Rational::from_integer(rng_heavy.into()))
        } else {
            // Any leftover is acceptable here; the first level achieves this.
            a.mu(lambda)
        };
        let bridge = equidecompose_onto(&a, &b, lambda, &eps_k)?;
        for &(u, v) in bridge.map.pairs() {
            let us = split_piece(&u, level)?;
            let vs = split_piece(&v, level)?;
            for ((xa, tail_a), (yb, tail_b)) in us.into_iter().zip(vs) {
                let (bs, bt) = (src.block_of(xa), dst.block_of(yb));
                let g = match corrections.get(&(bs, bt)) {
                    Some(g) => g.clone(),
                    None => {
                        let block_s = &src.blocks[bs.0][bs.1];
                        let block_t = &dst.blocks[bt.0][bt.1];
                        let g = least_conjugator(
                            &local_tuple(src.tuple, block_s),
                            &local_tuple(dst.tuple, block_t),
                        )
                        .ok_or(Error::NoConjugator {
                            piece: Word::from_index(xa as u64, level),
                        })?;
                        corrections.insert((bs, bt), g.clone());
                        g
                    }
                };
                let block_s = &src.blocks[bs.0][bs.1];
                let block_t = &dst.blocks[bt.0][bt.1];
                for (i, &x) in block_s.iter().enumerate() {
                    let y = block_t[g.apply(i)];
                    pairs.push((
                        Word::from_index(x as u64, level).concat(&tail_a)?,
                        Word::from_index(y as u64, level).concat(&tail_b)?,
                    ));
                }
            }
        }
        for piece in bridge.uncovered_dom.words() {
            src.spread_piece(piece, &mut uncovered_dom)?;
        }
        for piece in bridge.uncovered_rng.words() {
            dst.spread_piece(piece, &mut uncovered_rng)?;
        }
    }
    let core = TableMap::from_pairs(pairs)?;
    let uncovered_dom = CylinderSet::from_words(uncovered_dom);
    let uncovered_rng = CylinderSet::from_words(uncovered_rng);
    let completion = match_in_order(&uncovered_dom, &uncovered_rng);
    let map = FullMap::new(glue(&[core, completion])?)?;
    let defects = conjugation_defects(&map, s, t, lambda)?;
    let exact = defects.iter().all(Zero::is_zero);
    Ok(ConjugationResult {
        map: map.into_table(),
        exact,
        defects,
        defect_bound: uncovered_rng.mu(lambda),
        uncovered_dom,
        uncovered_rng,
    })
}

/// `du(C ∘ S_i ∘ C⁻¹, T_i)` for each `i`.
pub fn conjugation_defects(
    c: &FullMap,
    s: &[LeafPerm],
    t: &[LeafPerm],
    lambda: &Lambda,
) -> Result<Vec<Rational>> {
    let c_inv = c.inverse();
    s.iter()
        .zip(t)
        .map(|(si, ti)| {
            let conj = c.compose(&si.to_full_map())?.compose(&c_inv)?;
            Ok(conj.du(&ti.to_full_map(), lambda))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn lp(level: u8, images: &[usize]) -> LeafPerm {
        LeafPerm::new(level, Perm::from_images(images.to_vec()).unwrap()).unwrap()
    }

    fn l23() -> Lambda {
        Lambda::from_ratio(2, 3).unwrap()
    }

    fn conjugates_exactly(c: &TableMap, s: &[LeafPerm], t: &[LeafPerm]) -> bool {
        let c = FullMap::new(c.clone()).unwrap();
        s.iter().zip(t).all(|(si, ti)| {
            let lhs = c.compose(&si.to_full_map()).unwrap().compose(&c.inverse()).unwrap();
            lhs == ti.to_full_map()
        })
    }

    #[test]
    fn swap_refined_to_pairs_of_neighbours() {
        let s = [lp(1, &[1, 0]).refine(2).unwrap()];
        let t = [lp(2, &[1, 0, 3, 2])];
        let r = conjugate_tuples(&s, &t, &l23(), &ratio(1, 16)).unwrap();
        assert!(r.exact);
        assert!(conjugates_exactly(&r.map, &s, &t));
        assert!(FullMap::new(r.map.clone()).unwrap().to_leaf_perm(2).is_ok());
    }

    #[test]
    fn identical_tuples_give_identity() {
        let s = [lp(2, &[1, 2, 0, 3]), lp(2, &[0, 1, 3, 2])];
        let r = conjugate_tuples(&s, &s, &l23(), &ratio(1, 16)).unwrap();
        assert!(r.map.is_identity());
    }

    #[test]
    fn counts_matter_not_masses() {
        // One swap block and two fixed points on each side, at different leaves.
        let s = [lp(2, &[1, 0, 2, 3])];
        let t = [lp(2, &[0, 1, 3, 2])];
        let r = conjugate_tuples(&s, &t, &Lambda::half(), &ratio(1, 16)).unwrap();
        assert!(r.exact);
        assert!(conjugates_exactly(&r.map, &s, &t));
    }

    #[test]
    fn type_set_mismatch() {
        let s = [lp(1, &[1, 0])];
        let t = [LeafPerm::identity(1)];
        assert!(matches!(
            conjugate_tuples(&s, &t, &l23(), &ratio(1, 16)),
            Err(Error::TypeSetMismatch(_))
        ));
    }

    #[test]
    fn unequal_counts() {
        let s = [lp(3, &[1, 0, 2, 3, 4, 5, 6, 7])];
        let t = [lp(3, &[1, 0, 3, 2, 4, 5, 6, 7])];
        assert!(matches!(
            conjugate_tuples(&s, &t, &Lambda::half(), &ratio(1, 16)),
            Err(Error::InvariantMeasureObstruction { .. })
        ));
        let eps = ratio(1, 16);
        let r = conjugate_tuples(&s, &t, &l23(), &eps).unwrap();
        assert!(!r.exact);
        assert!(r.defect_bound <= eps);
        assert!(r.defects.iter().all(|d| *d <= r.defect_bound));
    }
}
