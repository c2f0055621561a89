//! Equidecomposition of cylinder sets by partial table maps.
//!
//! Equal-length tables preserve the uniform measure, so an exact map from `A`
//! onto `B` exists iff `kraft(A) = kraft(B)`. For `lambda != 1/2` the product
//! measure is singular to the uniform one, and a surplus of uniform mass can
//! be parked on leaves of arbitrarily small `mu_lambda`-mass: refine the
//! heavier side deep enough, leave its lightest leaves uncovered, and match
//! the rest lexicographically.

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::cylinder::CylinderSet;
use crate::error::{Error, Result};
use crate::rational::{format_rational, serde_rational_vec, Lambda, MassTable, Rational};
use crate::table::{glue, FullMap, TableMap};
use crate::word::{check_depth, max_depth, Word};

/// Upper bound on the number of surplus cylinders materialized in one run.
pub const MAX_SURPLUS_PIECES: u128 = 1 << 25;

/// Lexicographic rank matching: the `i`-th point of `src` (in interval order)
/// goes to the `i`-th point of `dst`. Matches `min(kraft)` worth of mass.
pub fn match_in_order(src: &CylinderSet, dst: &CylinderSet) -> TableMap {
    let a = src.intervals();
    let b = dst.intervals();
    let mut pairs = Vec::new();
    let (mut i, mut j) = (0, 0);
    let (mut pa, mut pb) = (a.first().map_or(0, |x| x.0), b.first().map_or(0, |x| x.0));
    while i < a.len() && j < b.len() {
        let room = (a[i].1 - pa).min(b[j].1 - pb);
        // Largest power of two dividing both positions and fitting in the room.
        let align = pa.trailing_zeros().min(pb.trailing_zeros()).min(64);
        let k = align.min(127 - room.leading_zeros());
        let len = (64 - k) as u8;
        pairs.push((Word::from_parts(pa as u64, len), Word::from_parts(pb as u64, len)));
        pa += 1u128 << k;
        pb += 1u128 << k;
        if pa == a[i].1 {
            i += 1;
            if i < a.len() {
                pa = a[i].0;
            }
        }
        if pb == b[j].1 {
            j += 1;
            if j < b.len() {
                pb = b[j].0;
            }
        }
    }
    TableMap::from_pairs(pairs).expect("rank matching yields a valid table")
}

/// Outcome of `A ≺ B`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrecResult {
    pub holds: bool,
    /// Map with domain `A` and range inside `B`, when one exists.
    pub map: Option<TableMap>,
    #[serde(with = "crate::rational::serde_rational")]
    pub kraft_a: Rational,
    #[serde(with = "crate::rational::serde_rational")]
    pub kraft_b: Rational,
}

/// Decide whether some table map has domain exactly `A` and range inside `B`.
pub fn prec(a: &CylinderSet, b: &CylinderSet) -> Result<PrecResult> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::Precondition("prec needs nonempty sets".into()));
    }
    let (ka, kb) = (a.kraft(), b.kraft());
    let holds = ka <= kb;
    Ok(PrecResult {
        holds,
        map: holds.then(|| match_in_order(a, b)),
        kraft_a: ka,
        kraft_b: kb,
    })
}

/// A (possibly truncated) equidecomposition of `A` onto `B`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquidecompResult {
    pub map: TableMap,
    pub uncovered_dom: CylinderSet,
    pub uncovered_rng: CylinderSet,
    /// Number of refinement levels examined.
    pub rounds: usize,
    /// Refinement level of the returned map (0 for exact matches).
    pub level: u8,
    /// Exact leftover mass at each examined level, in order.
    #[serde(with = "serde_rational_vec")]
    pub masses: Vec<Rational>,
}

impl EquidecompResult {
    pub fn is_exact(&self) -> bool {
        self.uncovered_dom.is_empty() && self.uncovered_rng.is_empty()
    }

    pub fn leftover(&self, lambda: &Lambda) -> Rational {
        self.uncovered_dom.mu(lambda) + self.uncovered_rng.mu(lambda)
    }
}

/// Map `A` onto `B`, exactly if possible, else leaving uncovered mass `<= epsilon`.
pub fn equidecompose_onto(
    a: &CylinderSet,
    b: &CylinderSet,
    lambda: &Lambda,
    epsilon: &Rational,
) -> Result<EquidecompResult> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::Precondition("equidecompose needs sets of positive measure".into()));
    }
    if *epsilon <= Rational::zero() {
        return Err(Error::Precondition("epsilon must be positive".into()));
    }
    let (ka, kb) = (a.kraft(), b.kraft());
    if ka == kb {
        return Ok(EquidecompResult {
            map: match_in_order(a, b),
            uncovered_dom: CylinderSet::empty(),
            uncovered_rng: CylinderSet::empty(),
            rounds: 0,
            level: 0,
            masses: vec![Rational::zero()],
        });
    }
    if lambda.is_half() {
        return Err(Error::InvariantMeasureObstruction {
            kraft_a: format_rational(&ka),
            kraft_b: format_rational(&kb),
        });
    }
    let a_heavy = ka > kb;
    let (heavy, light) = if a_heavy { (a, b) } else { (b, a) };
    let start = a.depth().max(b.depth());
    let mut masses = Vec::new();
    let mut chosen = None;
    for level in start..=max_depth() {
        let plan = SurplusPlan::new(heavy, light, lambda, level);
        let ok = plan.mass <= *epsilon;
        masses.push(plan.mass.clone());
        if ok {
            chosen = Some(plan);
            break;
        }
    }
    let plan = chosen.ok_or_else(|| Error::DepthExhausted {
        level: max_depth(),
        best: format_rational(masses.last().expect("at least one level examined")),
        epsilon: format_rational(epsilon),
    })?;
    let surplus = plan.materialize(heavy)?;
    let matched = heavy.difference(&surplus);
    let (map, uncovered_dom, uncovered_rng) = if a_heavy {
        (match_in_order(&matched, light), surplus, CylinderSet::empty())
    } else {
        (match_in_order(light, &matched), CylinderSet::empty(), surplus)
    };
    Ok(EquidecompResult {
        map,
        uncovered_dom,
        uncovered_rng,
        rounds: masses.len(),
        level: plan.level,
        masses,
    })
}

/// Leftover mass of the optimal surplus at each level in `levels`.
///
/// This is the trace `equidecompose_onto` walks, without building maps.
pub fn leftover_profile(
    a: &CylinderSet,
    b: &CylinderSet,
    lambda: &Lambda,
    levels: impl IntoIterator<Item = u8>,
) -> Result<Vec<(u8, Rational)>> {
    let (ka, kb) = (a.kraft(), b.kraft());
    let (heavy, light) = if ka >= kb { (a, b) } else { (b, a) };
    let start = a.depth().max(b.depth());
    levels
        .into_iter()
        .map(|level| {
            check_depth(level as usize)?;
            if level < start {
                return Err(Error::LevelTooSmall { level, depth: start });
            }
            Ok((level, SurplusPlan::new(heavy, light, lambda, level).mass))
        })
        .collect()
}

/// The lightest-leaves surplus on the heavy side at one level.
///
/// Leaves of equal length are ordered by mass through the count of "light"
/// digits (the digit with mass `min(lambda, 1 - lambda)`): more light digits
/// means less mass. The surplus is every leaf with more than `threshold`
/// light digits plus the lexicographically first `ties` leaves with exactly
/// `threshold`.
struct SurplusPlan {
    level: u8,
    light_digit: bool,
    threshold: u32,
    ties: u128,
    mass: Rational,
}

impl SurplusPlan {
    fn new(heavy: &CylinderSet, light: &CylinderSet, lambda: &Lambda, level: u8) -> Self {
        let light_digit = lambda.zero_mass() > lambda.one_mass();
        let count = |s: &CylinderSet| -> u128 {
            s.words()
                .iter()
                .map(|w| 1u128 << (level - w.len()))
                .sum()
        };
        let mut need = count(heavy) - count(light);
        // Histogram of heavy-side leaves by light-digit count.
        let mut hist = vec![0u128; level as usize + 1];
        for w in heavy.words() {
            let c0 = light_count(w, light_digit);
            let d = (level - w.len()) as usize;
            for (k, b) in binomial_row(d).into_iter().enumerate() {
                hist[c0 as usize + k] += b;
            }
        }
        let mut table = MassTable::new(lambda);
        let mut mass = Rational::zero();
        let mut threshold = 0;
        let mut ties = 0;
        for c in (0..=level as u32).rev() {
            let take = hist[c as usize].min(need);
            if take > 0 {
                let (z, o) = if light_digit {
                    (level as u32 - c, c)
                } else {
                    (c, level as u32 - c)
                };
                mass += table.mass(z, o) * Rational::from_integer(BigInt::from(take));
            }
            need -= take;
            if need == 0 {
                threshold = c;
                ties = take;
                break;
            }
        }
        SurplusPlan {
            level,
            light_digit,
            threshold,
            ties,
            mass,
        }
    }

    /// Number of cylinders `materialize` emits, without building them: a
    /// word with light count `c0 <= threshold` and `d` free digits first
    /// exceeds the threshold at `C(d, threshold - c0 + 1)` nodes.
    fn piece_count(&self, heavy: &CylinderSet) -> u128 {
        let t = self.threshold;
        let whole: u128 = heavy
            .words()
            .iter()
            .map(|w| {
                let c0 = light_count(w, self.light_digit);
                if c0 > t {
                    return 1;
                }
                let d = (self.level - w.len()) as usize;
                let k = (t - c0 + 1) as usize;
                if k > d {
                    0
                } else {
                    binomial_row(d)[k]
                }
            })
            .sum();
        whole + self.ties
    }

    fn materialize(&self, heavy: &CylinderSet) -> Result<CylinderSet> {
        let count = self.piece_count(heavy);
        self.guard(count)?;
        let mut out = Vec::new();
        let mut ties = self.ties;
        for w in heavy.words() {
            self.collect(*w, light_count(w, self.light_digit), &mut ties, &mut out)?;
        }
        debug_assert_eq!(out.len() as u128, count);
        Ok(CylinderSet::from_words(out))
    }

    fn collect(&self, w: Word, c: u32, ties: &mut u128, out: &mut Vec<Word>) -> Result<()> {
        let d = (self.level - w.len()) as u32;
        if c > self.threshold {
            out.push(w);
            return self.guard(out.len() as u128);
        }
        if c + d < self.threshold || (c + d == self.threshold && *ties == 0) {
            return Ok(());
        }
        if d == 0 {
            // c == threshold here.
            if *ties > 0 {
                *ties -= 1;
                out.push(w);
                return self.guard(out.len() as u128);
            }
            return Ok(());
        }
        for bit in [false, true] {
            let child = w.child(bit)?;
            let cc = c + u32::from(bit == self.light_digit);
            self.collect(child, cc, ties, out)?;
        }
        Ok(())
    }

    fn guard(&self, pieces: u128) -> Result<()> {
        if pieces > MAX_SURPLUS_PIECES {
            return Err(Error::TooManyPieces {
                pieces,
                limit: MAX_SURPLUS_PIECES,
            });
        }
        Ok(())
    }
}

fn light_count(w: &Word, light_digit: bool) -> u32 {
    if light_digit {
        w.ones()
    } else {
        w.zeros()
    }
}

fn binomial_row(n: usize) -> Vec<u128> {
    let mut row = vec![1u128];
    for _ in 0..n {
        let mut next = vec![1u128; row.len() + 1];
        for k in 1..row.len() {
            next[k] = row[k - 1] + row[k];
        }
        row = next;
    }
    row
}

/// The fixed pre-3-cycle `phi = {00 -> 01}`, `psi = {01 -> 10}`.
///
/// The construction does not depend on `lambda`; the parameter is accepted so
/// callers can report the measure conditions in the same breath.
pub fn pre_three_cycle(_lambda: &Lambda) -> (TableMap, TableMap) {
    let phi = TableMap::parse(&[("00", "01")]).expect("valid literal");
    let psi = TableMap::parse(&[("01", "10")]).expect("valid literal");
    (phi, psi)
}

/// Check that `(phi, psi)` is a pre-3-cycle.
pub fn check_pre_three_cycle(phi: &TableMap, psi: &TableMap, lambda: &Lambda) -> Result<()> {
    let (dp, rp) = (phi.domain(), phi.range());
    let (ds, rs) = (psi.domain(), psi.range());
    if dp.is_empty() {
        return Err(Error::Precondition("phi is empty".into()));
    }
    if !dp.is_disjoint(&rp) {
        return Err(Error::Precondition("rng phi meets dom phi".into()));
    }
    let core = dp.union(&rp);
    if core.mu(lambda) >= Rational::from_integer(1.into()) {
        return Err(Error::Precondition("dom phi and rng phi cover the space".into()));
    }
    if ds != rp {
        return Err(Error::Precondition("dom psi differs from rng phi".into()));
    }
    if !rs.is_disjoint(&core) {
        return Err(Error::Precondition("rng psi meets dom phi or rng phi".into()));
    }
    Ok(())
}

/// The 3-cycle `phi ∪ psi ∪ (psi ∘ phi)⁻¹`, identity elsewhere.
pub fn three_cycle(phi: &TableMap, psi: &TableMap) -> Result<FullMap> {
    // The conditions are measure-class statements; any lambda checks them.
    check_pre_three_cycle(phi, psi, &Lambda::half())?;
    let back = psi.compose(phi)?.inverse();
    let moved = phi.domain().union(&phi.range()).union(&psi.range());
    let rest = TableMap::identity_on(&moved.complement());
    FullMap::new(glue(&[phi.clone(), psi.clone(), back, rest])?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};
    use crate::word::w;

    fn set(ws: &[&str]) -> CylinderSet {
        CylinderSet::parse(ws).unwrap()
    }

    fn l23() -> Lambda {
        Lambda::from_ratio(2, 3).unwrap()
    }

    #[test]
    fn prec_examples() {
        let r = prec(&set(&["00"]), &set(&["1"])).unwrap();
        assert!(r.holds);
        assert_eq!(r.map.unwrap(), TableMap::parse(&[("00", "10")]).unwrap());
        let r = prec(&set(&["0"]), &set(&["10"])).unwrap();
        assert!(!r.holds);
        assert_eq!((r.kraft_a, r.kraft_b), (ratio(1, 2), ratio(1, 4)));
        let a = set(&["0", "110"]);
        let r = prec(&a, &a).unwrap();
        assert_eq!(r.map.unwrap(), TableMap::identity_on(&a));
    }

    #[test]
    fn rank_matching_is_order_preserving() {
        let m = match_in_order(&set(&["0"]), &set(&["10", "110", "111"]));
        assert_eq!(m, TableMap::parse(&[("00", "10"), ("01", "11")]).unwrap());
        let m = match_in_order(&set(&["1"]), &set(&["001", "01"]));
        assert_eq!(m.domain(), set(&["10", "110"]));
    }

    #[test]
    fn exact_when_kraft_equal() {
        let r = equidecompose_onto(&set(&["0"]), &set(&["1"]), &l23(), &ratio(1, 10)).unwrap();
        assert!(r.is_exact());
        assert_eq!(r.map, TableMap::parse(&[("0", "1")]).unwrap());
    }

    #[test]
    fn obstruction_at_half() {
        let err = equidecompose_onto(&set(&["0"]), &set(&["10"]), &Lambda::half(), &ratio(1, 10));
        assert!(matches!(err, Err(Error::InvariantMeasureObstruction { .. })));
    }

    #[test]
    fn approximate_cover_within_epsilon() {
        let (a, b) = (set(&["0"]), set(&["10"]));
        let eps = ratio(1, 20);
        let r = equidecompose_onto(&a, &b, &l23(), &eps).unwrap();
        assert_eq!(r.map.range(), b);
        assert!(r.uncovered_rng.is_empty());
        assert_eq!(r.map.domain().union(&r.uncovered_dom), a);
        assert!(r.map.domain().is_disjoint(&r.uncovered_dom));
        let left = r.uncovered_dom.mu(&l23());
        assert!(left <= eps);
        assert_eq!(r.masses.last().unwrap(), &left);
        assert!(r.masses.windows(2).all(|m| m[1] <= m[0]));
    }

    #[test]
    fn surplus_on_range_side() {
        let (a, b) = (set(&["10"]), set(&["0"]));
        let r = equidecompose_onto(&a, &b, &Lambda::from_ratio(1, 3).unwrap(), &ratio(1, 10)).unwrap();
        assert_eq!(r.map.domain(), a);
        assert_eq!(r.map.range().union(&r.uncovered_rng), b);
    }

    #[test]
    fn surplus_is_the_lightest_leaves() {
        // Level 2, heavy side X, light side {"0"}: two surplus leaves,
        // the lightest at lambda = 2/3 are 11 and then 01 (tie with 10 broken lexicographically).
        let plan = SurplusPlan::new(&set(&[""]), &set(&["0"]), &l23(), 2);
        assert_eq!(plan.mass, ratio(1, 9) + ratio(2, 9));
        let s = plan.materialize(&set(&[""])).unwrap();
        assert_eq!(s, set(&["01", "11"]));
    }

    #[test]
    fn pre_three_cycle_conditions() {
        let (phi, psi) = pre_three_cycle(&l23());
        check_pre_three_cycle(&phi, &psi, &l23()).unwrap();
        assert_eq!(phi.domain().union(&phi.range()).mu(&l23()), ratio(2, 3));
        assert_eq!(psi.domain(), phi.range());
    }

    #[test]
    fn three_cycle_example() {
        let (phi, psi) = pre_three_cycle(&l23());
        let c = three_cycle(&phi, &psi).unwrap();
        let expected =
            TableMap::parse(&[("00", "01"), ("01", "10"), ("10", "00"), ("11", "11")]).unwrap();
        assert_eq!(c.table(), &expected);
        let c3 = c.compose(&c).unwrap().compose(&c).unwrap();
        assert!(c3.is_identity());
        assert_eq!(c.support().mu(&l23()), ratio(8, 9));
        let rn = c.rn_cocycle(&l23());
        assert_eq!(
            rn,
            vec![(w("00"), ratio(1, 2)), (w("01"), int(1)), (w("10"), int(2)), (w("11"), int(1))]
        );
        assert!(three_cycle(&psi, &phi).is_err());
    }
}
