//! Finite permutations as leaf maps, and the density-approximation step:
//! perturb a tuple on a small invariant set so that every small transitive
//! type occurs many times.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::census::{enumerate_types, en_surrogate_check, leaf_mass_with, orbit_partition, EnReport};
use crate::cylinder::CylinderSet;
use crate::error::{Error, Result};
use crate::perm::Perm;
use crate::rational::{format_rational, serde_rational_vec, Lambda, MassTable, Rational};
use crate::table::{LeafPerm, LEAF_LIMIT_LEVEL};
use crate::word::{max_depth, Word};

/// Embed a permutation of `{0..m-1}`, `m = 2^l`, as a leaf map at level `l`.
///
/// On leaf `k` the map moves points by `succ^(σ(k) - k)`, where `succ` is the
/// cyclic leaf successor; the result sends leaf `k` to leaf `σ(k)`.
pub fn psi_embed(sigma: &Perm) -> Result<LeafPerm> {
    let m = sigma.degree();
    if !m.is_power_of_two() {
        return Err(Error::Precondition(format!("degree {m} is not a power of two")));
    }
    let level = m.trailing_zeros() as u8;
    let images = (0..m)
        .map(|k| succ_power(k, sigma.apply(k) as i64 - k as i64, m))
        .collect();
    LeafPerm::new(level, Perm::from_images(images)?)
}

/// `succ^shift(k)` on `Z / m`.
fn succ_power(k: usize, shift: i64, m: usize) -> usize {
    (k as i64 + shift).rem_euclid(m as i64) as usize
}

/// The per-leaf shifts `σ(k) - k` used by [`psi_embed`].
pub fn psi_shifts(sigma: &Perm) -> Vec<i64> {
    (0..sigma.degree())
        .map(|k| sigma.apply(k) as i64 - k as i64)
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DensifyResult {
    pub tuple: Vec<LeafPerm>,
    pub level: u8,
    /// The invariant set where the tuple was changed.
    pub invariant_set: CylinderSet,
    #[serde(with = "crate::rational::serde_rational")]
    pub invariant_mass: Rational,
    /// `du(output_i, input_i)` for each `i`.
    #[serde(with = "serde_rational_vec")]
    pub du: Vec<Rational>,
    pub check: EnReport,
}

/// Implant `multiplicity` copies of every transitive type of size `<= s` on
/// an invariant union of light orbits of total mass `< epsilon`.
pub fn densify(
    tuple: &[LeafPerm],
    lambda: &Lambda,
    epsilon: &Rational,
    s: usize,
    multiplicity: usize,
) -> Result<DensifyResult> {
    if tuple.is_empty() {
        return Err(Error::Precondition("empty tuple".into()));
    }
    if *epsilon <= Rational::zero() {
        return Err(Error::Precondition("epsilon must be positive".into()));
    }
    if multiplicity == 0 {
        return Err(Error::Precondition("multiplicity must be positive".into()));
    }
    let n = tuple.len();
    let types = enumerate_types(n, s)?;
    let need: usize = multiplicity * types.iter().map(|t| t.q()).sum::<usize>();
    let start = tuple.iter().map(LeafPerm::level).max().unwrap();
    let limit = max_depth().min(LEAF_LIMIT_LEVEL);
    let mut best = None;
    for level in start..=limit {
        let refined: Vec<LeafPerm> = tuple
            .iter()
            .map(|p| p.refine(level))
            .collect::<Result<_>>()?;
        let mut table = MassTable::new(lambda);
        let mut blocks: Vec<(Rational, Vec<usize>)> = orbit_partition(&refined)?
            .into_iter()
            .map(|b| (leaf_mass_with(&mut table, &b, level), b))
            .collect();
        // Lightest first; ties by least leaf (blocks are already in that order).
        blocks.sort_by(|x, y| x.0.cmp(&y.0));
        let mut chosen: Vec<usize> = Vec::new();
        let mut mass = Rational::zero();
        for (m, b) in &blocks {
            if chosen.len() >= need {
                break;
            }
            let next = &mass + m;
            if next >= *epsilon {
                break;
            }
            mass = next;
            chosen.extend_from_slice(b);
        }
        best = Some(format_rational(&mass));
        if chosen.len() >= need {
            chosen.sort_unstable();
            return implant(tuple, refined, chosen, mass, &types, lambda, level, s, multiplicity);
        }
    }
    Err(Error::DepthExhausted {
        level: limit,
        best: best.unwrap_or_else(|| "0/1".into()),
        epsilon: format_rational(epsilon),
    })
}

#[allow(clippy::too_many_arguments)]
fn implant(
    input: &[LeafPerm],
    refined: Vec<LeafPerm>,
    leaves: Vec<usize>,
    mass: Rational,
    types: &[crate::census::TransitiveTupleType],
    lambda: &Lambda,
    level: u8,
    s: usize,
    multiplicity: usize,
) -> Result<DensifyResult> {
    let mut images: Vec<Vec<usize>> = refined.iter().map(|p| p.perm().images().to_vec()).collect();
    // Leaves of the set not used by an implanted block become fixed points.
    for img in images.iter_mut() {
        for &x in &leaves {
            img[x] = x;
        }
    }
    let mut cursor = 0;
    for ty in types {
        for _ in 0..multiplicity {
            let group = &leaves[cursor..cursor + ty.q()];
            cursor += ty.q();
            for (img, g) in images.iter_mut().zip(ty.gens()) {
                for (j, &x) in group.iter().enumerate() {
                    img[x] = group[g.apply(j)];
                }
            }
        }
    }
    let out: Vec<LeafPerm> = images
        .into_iter()
        .map(|img| LeafPerm::new(level, Perm::from_images(img)?))
        .collect::<Result<_>>()?;
    let du = out
        .iter()
        .zip(input)
        .map(|(o, i)| Ok(o.to_full_map().du(&i.to_full_map(), lambda)))
        .collect::<Result<Vec<_>>>()?;
    let check = en_surrogate_check(&out, s, multiplicity)?;
    let invariant_set = CylinderSet::from_words(
        leaves.iter().map(|&x| Word::from_index(x as u64, level)),
    );
    Ok(DensifyResult {
        tuple: out,
        level,
        invariant_set,
        invariant_mass: mass,
        du,
        check,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::census::census;
    use crate::rational::{int, ratio};

    fn p(images: &[usize]) -> Perm {
        Perm::from_images(images.to_vec()).unwrap()
    }

    #[test]
    fn psi_examples() {
        let sw = psi_embed(&p(&[1, 0])).unwrap();
        assert_eq!(sw.to_table().to_string(), "{0->1, 1->0}");
        assert!(psi_embed(&Perm::identity(4)).unwrap().is_identity());
        let c4 = p(&[1, 2, 3, 0]);
        let e = psi_embed(&c4).unwrap();
        assert_eq!(e.perm(), &c4);
        assert!(psi_embed(&Perm::identity(3)).is_err());
    }

    #[test]
    fn psi_is_a_homomorphism_on_s4() {
        let all = Perm::all(4);
        for a in &all {
            for b in &all {
                let lhs = psi_embed(&a.compose(b)).unwrap();
                let rhs = psi_embed(a).unwrap().compose(&psi_embed(b).unwrap()).unwrap();
                assert_eq!(lhs.to_table(), rhs.to_table());
            }
        }
    }

    #[test]
    fn densify_identity() {
        let lam = Lambda::from_ratio(2, 3).unwrap();
        let eps = ratio(3, 8);
        let r = densify(&[LeafPerm::identity(1)], &lam, &eps, 2, 1).unwrap();
        assert!(r.check.passes);
        assert!(r.du[0] < eps);
        assert!(r.invariant_mass < eps);
        let c = census(&r.tuple, &lam).unwrap();
        assert!(c.entries.iter().any(|e| e.ty.encoding() == "2:1,0"));
        // Outside the invariant set nothing changed.
        let changed = r.tuple[0].to_full_map().support();
        assert!(changed.is_subset(&r.invariant_set));
    }

    #[test]
    fn densify_with_large_epsilon() {
        let lam = Lambda::from_ratio(2, 3).unwrap();
        let r = densify(&[LeafPerm::identity(2)], &lam, &int(2), 2, 1).unwrap();
        assert!(r.check.passes);
        assert!(r.du[0] < int(2));
    }
}
