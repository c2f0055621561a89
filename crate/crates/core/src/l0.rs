//! Step functions `X -> G` for finite permutation groups: the elements of
//! `L⁰(X, μ, G)` that are constant on the pieces of a finite partition.
//!
//! A [`StepFn`] is a canonical partition of `X` into cylinders with one value
//! per piece. Two step functions are combined on the common refinement of
//! their partitions: the overlap of two pieces is the longer of the two words.

use std::collections::BTreeSet;

use num_traits::{One, Zero};
use serde::ser::SerializeStruct;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::cylinder::{decompose_interval, mu_words, CylinderSet};
use crate::error::{Error, Result};
use crate::perm::{least_conjugator, Perm};
use crate::rational::{dyadic_exponent, format_rational, Lambda, Rational};
use crate::table::{LeafPerm, LEAF_LIMIT_LEVEL};
use crate::word::{check_depth, Word};

/// Largest degree for which conjugators are searched.
pub const MAX_SEARCH_DEGREE: usize = 8;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct StepFn<V> {
    pieces: Vec<(Word, V)>,
}

impl<V: Clone + Eq> StepFn<V> {
    pub fn constant(value: V) -> Self {
        StepFn {
            pieces: vec![(Word::root(), value)],
        }
    }

    /// Pieces must partition the space; equal-valued siblings are merged.
    pub fn from_pieces(mut pieces: Vec<(Word, V)>) -> Result<Self> {
        pieces.sort_by_key(|a| a.0);
        let mut covered: u128 = 0;
        for win in pieces.windows(2) {
            if win[0].0.is_prefix_of(&win[1].0) {
                return Err(Error::NotPrefixFree {
                    side: "piece",
                    first: win[0].0,
                    second: win[1].0,
                });
            }
        }
        for (w, _) in &pieces {
            covered += w.span();
        }
        if covered != 1u128 << 64 {
            return Err(Error::Precondition(
                "step function pieces do not cover the space".into(),
            ));
        }
        Ok(StepFn {
            pieces: merge_pieces(pieces),
        })
    }

    pub fn pieces(&self) -> &[(Word, V)] {
        &self.pieces
    }

    pub fn depth(&self) -> u8 {
        self.pieces.iter().map(|p| p.0.len()).max().unwrap_or(0)
    }

    /// Value on a cylinder contained in a single piece.
    pub fn value_at(&self, x: &Word) -> Option<&V> {
        let idx = self.pieces.partition_point(|p| p.0 <= *x);
        (idx > 0 && self.pieces[idx - 1].0.is_prefix_of(x)).then(|| &self.pieces[idx - 1].1)
    }

    pub fn map<W: Clone + Eq>(&self, f: impl Fn(&V) -> W) -> StepFn<W> {
        StepFn {
            pieces: merge_pieces(self.pieces.iter().map(|(w, v)| (*w, f(v))).collect()),
        }
    }

    /// Pointwise combination on the common refinement.
    pub fn zip<W: Clone + Eq, R: Clone + Eq>(
        &self,
        other: &StepFn<W>,
        f: impl Fn(&V, &W) -> R,
    ) -> StepFn<R> {
        let mut out = Vec::new();
        let (a, b) = (&self.pieces, &other.pieces);
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            let (wa, wb) = (a[i].0, b[j].0);
            let piece = if wa.len() >= wb.len() { wa } else { wb };
            out.push((piece, f(&a[i].1, &b[j].1)));
            let (ea, eb) = (wa.end(), wb.end());
            if ea <= eb {
                i += 1;
            }
            if eb <= ea {
                j += 1;
            }
        }
        StepFn {
            pieces: merge_pieces(out),
        }
    }

    /// Set where the two functions differ.
    pub fn disagreement(&self, other: &StepFn<V>) -> CylinderSet {
        let diff = self.zip(other, |a, b| a != b);
        CylinderSet::from_words(diff.pieces.iter().filter(|p| p.1).map(|p| p.0))
    }

    /// `mu{x : f(x) != g(x)}`: the convergence-in-measure gauge for the
    /// discrete metric on the target.
    pub fn gauge(&self, other: &StepFn<V>, lambda: &Lambda) -> Rational {
        self.disagreement(other).mu(lambda)
    }

    /// Distinct values in piece order of first appearance.
    pub fn values(&self) -> Vec<V> {
        let mut out: Vec<V> = Vec::new();
        for (_, v) in &self.pieces {
            if !out.contains(v) {
                out.push(v.clone());
            }
        }
        out
    }
}

fn merge_pieces<V: Eq>(pieces: Vec<(Word, V)>) -> Vec<(Word, V)> {
    let mut stack: Vec<(Word, V)> = Vec::with_capacity(pieces.len());
    for p in pieces {
        stack.push(p);
        while stack.len() >= 2 {
            let n = stack.len();
            let (w1, w0) = (stack[n - 1].0, stack[n - 2].0);
            let siblings = w0.len() == w1.len()
                && w0.len() > 0
                && w0.last_bit() == Some(false)
                && w1.last_bit() == Some(true)
                && w0.parent() == w1.parent()
                && stack[n - 1].1 == stack[n - 2].1;
            if !siblings {
                break;
            }
            let (_, v) = stack.pop().unwrap();
            stack.pop();
            stack.push((w0.parent().unwrap(), v));
        }
    }
    stack
}

/// Pointwise product `x ↦ f(x) ∘ g(x)`.
pub fn l0_product(f: &StepFn<Perm>, g: &StepFn<Perm>) -> Result<StepFn<Perm>> {
    let (df, dg) = (degree_of(f), degree_of(g));
    if df != dg {
        return Err(Error::DegreeMismatch(df, dg));
    }
    Ok(f.zip(g, |a, b| a.compose(b)))
}

pub fn l0_inverse(f: &StepFn<Perm>) -> StepFn<Perm> {
    f.map(Perm::inverse)
}

pub fn degree_of(f: &StepFn<Perm>) -> usize {
    f.pieces[0].1.degree()
}

/// `mu{x : f(x)(i) != g(x)(i) for some i in points}`.
///
/// The gauge of the pointwise-convergence topology restricted to finitely
/// many coordinates; with `points = [0]` it measures where the first point
/// is moved differently.
pub fn gauge_on_points(
    f: &StepFn<Perm>,
    g: &StepFn<Perm>,
    points: &[usize],
    lambda: &Lambda,
) -> Rational {
    let diff = f.zip(g, |a, b| points.iter().any(|&i| a.apply(i) != b.apply(i)));
    let words: Vec<Word> = diff.pieces.iter().filter(|p| p.1).map(|p| p.0).collect();
    mu_words(&words, lambda)
}

/// `f_t(x) = y0` for `x > t`, `f(x)` otherwise, reading words as dyadic
/// intervals of `[0, 1]`. Requires a dyadic `t` in `[0, 1]`.
pub fn contraction<V: Clone + Eq>(f: &StepFn<V>, t: &Rational, y0: V) -> Result<StepFn<V>> {
    if *t < Rational::zero() || *t > Rational::one() {
        return Err(Error::Precondition(format!(
            "contraction time {} outside [0, 1]",
            format_rational(t)
        )));
    }
    let k = dyadic_exponent(t).ok_or_else(|| {
        Error::Precondition(format!("contraction time {} is not dyadic", format_rational(t)))
    })?;
    check_depth(k as usize)?;
    // t in units of 2^-64.
    let numer: u128 = t.numer().try_into().expect("0 <= t <= 1 has a small numerator");
    let cut = numer << (64 - k);
    let mut out = Vec::new();
    let mut buf = Vec::new();
    for (w, v) in &f.pieces {
        let (s, e) = (w.start(), w.end());
        if e <= cut {
            out.push((*w, v.clone()));
        } else if s >= cut {
            out.push((*w, y0.clone()));
        } else {
            buf.clear();
            decompose_interval(s, cut, &mut buf);
            out.extend(buf.iter().map(|x| (*x, v.clone())));
            buf.clear();
            decompose_interval(cut, e, &mut buf);
            out.extend(buf.iter().map(|x| (*x, y0.clone())));
        }
    }
    Ok(StepFn {
        pieces: merge_pieces(out),
    })
}

/// A metric on `{0, ..., n-1}` given by an exact distance matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteMetric {
    dist: Vec<Vec<Rational>>,
}

impl FiniteMetric {
    pub fn new(dist: Vec<Vec<Rational>>) -> Result<Self> {
        let n = dist.len();
        for (i, row) in dist.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Precondition("distance matrix is not square".into()));
            }
            for j in 0..n {
                let d = &row[j];
                if (i == j) != d.is_zero() || *d < Rational::zero() || *d != dist[j][i] {
                    return Err(Error::Precondition(format!("not a metric at ({i}, {j})")));
                }
                for (k, via) in dist.iter().enumerate() {
                    if *d > &row[k] + &via[j] {
                        return Err(Error::Precondition(format!(
                            "triangle inequality fails at ({i}, {k}, {j})"
                        )));
                    }
                }
            }
        }
        Ok(FiniteMetric { dist })
    }

    /// Distance 1 between distinct points.
    pub fn discrete(n: usize) -> Self {
        let dist = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { Rational::zero() } else { Rational::one() })
                    .collect()
            })
            .collect();
        FiniteMetric { dist }
    }

    pub fn len(&self) -> usize {
        self.dist.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dist.is_empty()
    }

    pub fn d(&self, a: usize, b: usize) -> &Rational {
        &self.dist[a][b]
    }
}

/// Replace each value by the least-index net point within `epsilon` of it.
pub fn quantize(
    f: &StepFn<usize>,
    metric: &FiniteMetric,
    net: &[usize],
    epsilon: &Rational,
) -> Result<StepFn<usize>> {
    let mut out = Vec::with_capacity(f.pieces.len());
    for (w, v) in &f.pieces {
        if *v >= metric.len() {
            return Err(Error::Precondition(format!("value {v} outside the metric space")));
        }
        let n = net
            .iter()
            .position(|&y| metric.d(*v, y) < epsilon)
            .ok_or(Error::NotDense { piece: *w, value: *v })?;
        out.push((*w, net[n]));
    }
    Ok(StepFn {
        pieces: merge_pieces(out),
    })
}

/// A finite subgroup of `S_p` with a listed element order and an action on a
/// finite set `Y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroupSpec {
    degree: usize,
    elements: Vec<Perm>,
    action: Vec<Perm>,
}

impl FiniteGroupSpec {
    /// The full symmetric group acting naturally on `{0..p-1}`.
    pub fn symmetric(p: usize) -> Result<Self> {
        if p > MAX_SEARCH_DEGREE {
            return Err(Error::GroupTooLarge {
                degree: p,
                bound: MAX_SEARCH_DEGREE,
            });
        }
        Ok(Self::natural(p, Perm::all(p)))
    }

    pub fn trivial(p: usize) -> Self {
        Self::natural(p, vec![Perm::identity(p)])
    }

    /// The subgroup generated by `gens`, elements in lexicographic order.
    pub fn generated(p: usize, gens: &[Perm]) -> Result<Self> {
        if p > MAX_SEARCH_DEGREE {
            return Err(Error::GroupTooLarge {
                degree: p,
                bound: MAX_SEARCH_DEGREE,
            });
        }
        if let Some(g) = gens.iter().find(|g| g.degree() != p) {
            return Err(Error::DegreeMismatch(g.degree(), p));
        }
        let mut seen: BTreeSet<Perm> = BTreeSet::new();
        let mut frontier = vec![Perm::identity(p)];
        seen.insert(Perm::identity(p));
        while let Some(x) = frontier.pop() {
            for g in gens {
                let y = g.compose(&x);
                if seen.insert(y.clone()) {
                    frontier.push(y);
                }
            }
        }
        Ok(Self::natural(p, seen.into_iter().collect()))
    }

    /// Explicit elements; closure under product and inverse is verified.
    pub fn from_elements(p: usize, elements: Vec<Perm>) -> Result<Self> {
        let set: BTreeSet<&Perm> = elements.iter().collect();
        if set.len() != elements.len() || !set.contains(&Perm::identity(p)) {
            return Err(Error::Precondition("group must list identity once and no repeats".into()));
        }
        for a in &elements {
            if a.degree() != p || !set.contains(&a.inverse()) {
                return Err(Error::Precondition(format!("not closed under inverse at {a}")));
            }
            for b in &elements {
                if !set.contains(&a.compose(b)) {
                    return Err(Error::Precondition(format!("not closed under product at {a}, {b}")));
                }
            }
        }
        Ok(Self::natural(p, elements))
    }

    fn natural(p: usize, elements: Vec<Perm>) -> Self {
        FiniteGroupSpec {
            degree: p,
            action: elements.clone(),
            elements,
        }
    }

    /// Replace the natural action by `action[k]`, the permutation of `Y`
    /// induced by `elements()[k]`. The action must be a homomorphism.
    pub fn with_action(mut self, action: Vec<Perm>) -> Result<Self> {
        if action.len() != self.elements.len() {
            return Err(Error::Precondition("one action permutation per element".into()));
        }
        let idx = |g: &Perm| self.elements.iter().position(|x| x == g).unwrap();
        for (a, ga) in self.elements.iter().zip(&action) {
            for (b, gb) in self.elements.iter().zip(&action) {
                if action[idx(&a.compose(b))] != ga.compose(gb) {
                    return Err(Error::Precondition(format!("action is not a homomorphism at {a}, {b}")));
                }
            }
        }
        self.action = action;
        Ok(self)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn elements(&self) -> &[Perm] {
        &self.elements
    }

    pub fn act(&self, element: usize, y: usize) -> usize {
        self.action[element].apply(y)
    }

    pub fn orbit(&self, y0: usize) -> BTreeSet<usize> {
        (0..self.elements.len()).map(|k| self.act(k, y0)).collect()
    }
}

/// Result of an orbit-membership query.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OrbitMembership {
    /// Every value lies in `G · y0`; `witness(x) · y0 = f(x)` on every piece.
    Member { witness: StepFn<Perm> },
    /// A piece whose value is outside the orbit.
    Refused { piece: Word, value: usize },
}

impl OrbitMembership {
    pub fn is_member(&self) -> bool {
        matches!(self, OrbitMembership::Member { .. })
    }
}

/// Decide whether `f(x) ∈ G · y0` everywhere, choosing per piece the first
/// element (in the group's listed order) that carries `y0` to the value.
pub fn orbit_member(f: &StepFn<usize>, group: &FiniteGroupSpec, y0: usize) -> OrbitMembership {
    let mut pieces = Vec::with_capacity(f.pieces.len());
    for (w, v) in &f.pieces {
        match (0..group.elements.len()).find(|&k| group.act(k, y0) == *v) {
            Some(k) => pieces.push((*w, group.elements[k].clone())),
            None => return OrbitMembership::Refused { piece: *w, value: *v },
        }
    }
    OrbitMembership::Member {
        witness: StepFn {
            pieces: merge_pieces(pieces),
        },
    }
}

/// Apply a group-valued step function to a point-valued one: `x ↦ g(x) · y(x)`.
pub fn act_pointwise(g: &StepFn<Perm>, group: &FiniteGroupSpec, y: &StepFn<usize>) -> StepFn<usize> {
    g.zip(y, |p, v| {
        let k = group.elements.iter().position(|e| e == p).expect("witness lies in the group");
        group.act(k, *v)
    })
}

/// The common refinement of a list of step functions, as tuples of values.
pub fn refine_tuple<V: Clone + Eq>(fs: &[StepFn<V>]) -> StepFn<Vec<V>> {
    let mut acc = StepFn::constant(Vec::new());
    for f in fs {
        acc = acc.zip(f, |xs, v| {
            let mut out = xs.clone();
            out.push(v.clone());
            out
        });
    }
    acc
}

/// Pointwise conjugator: on every piece of the common refinement, the least
/// `g` (lexicographic image order) with `g ∘ t_i ∘ g⁻¹ = s_i` for all `i`.
///
/// Both sides must be pointwise simultaneously conjugate to `tau`.
pub fn cyclic_block_conjugate(
    s: &[StepFn<Perm>],
    t: &[StepFn<Perm>],
    tau: &[Perm],
) -> Result<StepFn<Perm>> {
    if s.len() != t.len() || s.len() != tau.len() || s.is_empty() {
        return Err(Error::Precondition("tuples must have equal, positive length".into()));
    }
    let p = tau[0].degree();
    if p > MAX_SEARCH_DEGREE {
        return Err(Error::GroupTooLarge {
            degree: p,
            bound: MAX_SEARCH_DEGREE,
        });
    }
    for f in s.iter().chain(t) {
        if let Some((_, v)) = f.pieces.iter().find(|(_, v)| v.degree() != p) {
            return Err(Error::DegreeMismatch(v.degree(), p));
        }
    }
    let mut all = s.to_vec();
    all.extend_from_slice(t);
    let joint = refine_tuple(&all);
    let n = s.len();
    let mut out = Vec::with_capacity(joint.pieces.len());
    for (w, vals) in &joint.pieces {
        let (sv, tv) = vals.split_at(n);
        if least_conjugator(tau, sv).is_none() || least_conjugator(tau, tv).is_none() {
            return Err(Error::NoConjugator { piece: *w });
        }
        let g = least_conjugator(tv, sv).ok_or(Error::NoConjugator { piece: *w })?;
        out.push((*w, g));
    }
    Ok(StepFn {
        pieces: merge_pieces(out),
    })
}

/// Largest level accepted by [`phi_embed`]; the values live in `S_{2^L}`.
pub const PHI_MAX_LEVEL: u8 = 12;

/// The embedding of a leaf permutation into `L⁰(X, S_{2^L})`.
///
/// With the cyclic decomposition `f_i(p·w) = ((p + i) mod 2^L)·w`, the value
/// on piece `p` is the permutation `i ↦ j` where `T(f_i(x)) = f_j(x)`, that
/// is `j = (π(p + i) − p) mod 2^L`.
pub fn phi_embed(t: &LeafPerm) -> Result<StepFn<Perm>> {
    let level = t.level();
    if level > PHI_MAX_LEVEL.min(LEAF_LIMIT_LEVEL) {
        return Err(Error::TooManyPieces {
            pieces: 1u128 << (2 * level as u32),
            limit: 1u128 << (2 * PHI_MAX_LEVEL as u32),
        });
    }
    let m = 1usize << level;
    let pieces = (0..m)
        .map(|p| {
            let images = (0..m).map(|i| (t.apply((p + i) % m) + m - p) % m).collect();
            (Word::from_index(p as u64, level), Perm::from_images_unchecked(images))
        })
        .collect();
    Ok(StepFn {
        pieces: merge_pieces(pieces),
    })
}

impl Serialize for StepFn<Perm> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("StepFn", 2)?;
        st.serialize_field("group", &format!("S_{}", degree_of(self)))?;
        st.serialize_field("pieces", &self.pieces)?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for StepFn<Perm> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            group: String,
            pieces: Vec<(Word, Perm)>,
        }
        let r = Repr::deserialize(d)?;
        let p: usize = r
            .group
            .strip_prefix("S_")
            .and_then(|x| x.parse().ok())
            .ok_or_else(|| serde::de::Error::custom(format!("bad group {:?}", r.group)))?;
        if r.pieces.iter().any(|(_, g)| g.degree() != p) {
            return Err(serde::de::Error::custom("piece degree differs from group"));
        }
        StepFn::from_pieces(r.pieces).map_err(serde::de::Error::custom)
    }
}

impl Serialize for StepFn<usize> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("StepFn", 1)?;
        st.serialize_field("pieces", &self.pieces)?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for StepFn<usize> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            pieces: Vec<(Word, usize)>,
        }
        let r = Repr::deserialize(d)?;
        StepFn::from_pieces(r.pieces).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};
    use crate::word::w;

    fn p(images: &[usize]) -> Perm {
        Perm::from_images(images.to_vec()).unwrap()
    }

    fn two_piece(a: Perm, b: Perm) -> StepFn<Perm> {
        StepFn::from_pieces(vec![(w("0"), a), (w("1"), b)]).unwrap()
    }

    fn l23() -> Lambda {
        Lambda::from_ratio(2, 3).unwrap()
    }

    #[test]
    fn product_and_inverse() {
        let f = two_piece(p(&[1, 2, 0]), p(&[1, 0, 2]));
        let id = StepFn::constant(Perm::identity(3));
        assert_eq!(l0_product(&f, &l0_inverse(&f)).unwrap(), id);
        let a = StepFn::constant(p(&[1, 2, 0]));
        let b = StepFn::constant(p(&[0, 2, 1]));
        assert_eq!(
            l0_product(&a, &b).unwrap(),
            StepFn::constant(p(&[1, 2, 0]).compose(&p(&[0, 2, 1])))
        );
        let g = two_piece(p(&[0, 2, 1]), p(&[2, 1, 0]));
        let fg = l0_product(&f, &g).unwrap();
        for x in ["0", "1"] {
            let expect = f.value_at(&w(x)).unwrap().compose(g.value_at(&w(x)).unwrap());
            assert_eq!(fg.value_at(&w(x)).unwrap(), &expect);
        }
        assert!(l0_product(&a, &StepFn::constant(Perm::identity(2))).is_err());
    }

    #[test]
    fn gauge_examples() {
        let f = two_piece(p(&[1, 0]), p(&[0, 1]));
        assert_eq!(f.gauge(&f, &l23()), int(0));
        let a = StepFn::constant(p(&[1, 0]));
        let b = StepFn::constant(p(&[0, 1]));
        assert_eq!(a.gauge(&b, &l23()), int(1));
        let g = StepFn::from_pieces(vec![
            (w("00"), p(&[0, 1])),
            (w("01"), p(&[1, 0])),
            (w("1"), p(&[0, 1])),
        ])
        .unwrap();
        assert_eq!(g.gauge(&b, &l23()), ratio(2, 9));
    }

    #[test]
    fn merging_is_canonical() {
        let f = StepFn::from_pieces(vec![(w("0"), 3usize), (w("1"), 3)]).unwrap();
        assert_eq!(f, StepFn::constant(3));
        assert!(StepFn::from_pieces(vec![(w("0"), 1usize)]).is_err());
        assert!(StepFn::from_pieces(vec![(w("0"), 1usize), (w("00"), 1), (w("1"), 1)]).is_err());
    }

    #[test]
    fn contraction_examples() {
        let f = StepFn::from_pieces(vec![(w("0"), 1usize), (w("1"), 2)]).unwrap();
        assert_eq!(contraction(&f, &int(1), 0).unwrap(), f);
        assert_eq!(contraction(&f, &int(0), 0).unwrap(), StepFn::constant(0));
        let half = contraction(&f, &ratio(1, 2), 0).unwrap();
        assert_eq!(half, StepFn::from_pieces(vec![(w("0"), 1), (w("1"), 0)]).unwrap());
        let q = contraction(&f, &ratio(3, 8), 7).unwrap();
        assert_eq!(
            q,
            StepFn::from_pieces(vec![(w("00"), 1), (w("010"), 1), (w("011"), 7), (w("1"), 7)])
                .unwrap()
        );
        assert!(contraction(&f, &ratio(1, 3), 0).is_err());
        assert!(contraction(&f, &ratio(3, 2), 0).is_err());
    }

    #[test]
    fn quantize_examples() {
        let metric = FiniteMetric::discrete(3);
        let f = StepFn::from_pieces(vec![(w("0"), 2usize), (w("1"), 1)]).unwrap();
        let q = quantize(&f, &metric, &[0, 1, 2], &ratio(1, 2)).unwrap();
        assert_eq!(q, f);
        let q = quantize(&f, &metric, &[0, 1, 2], &int(2)).unwrap();
        assert_eq!(q, StepFn::constant(0));
        assert_eq!(
            quantize(&f, &metric, &[0, 1], &ratio(1, 2)),
            Err(Error::NotDense { piece: w("0"), value: 2 })
        );
    }

    #[test]
    fn quantize_matches_nearest_index_oracle() {
        // Points on a line at 0, 1, 3.
        let pos = [0i64, 1, 3];
        let dist = pos
            .iter()
            .map(|a| pos.iter().map(|b| int((a - b).abs())).collect())
            .collect();
        let metric = FiniteMetric::new(dist).unwrap();
        let net = [2usize, 0];
        let eps = int(3);
        let f = StepFn::from_pieces(vec![(w("00"), 0usize), (w("01"), 1), (w("1"), 2)]).unwrap();
        let q = quantize(&f, &metric, &net, &eps).unwrap();
        for (piece, v) in f.pieces() {
            let oracle = net
                .iter()
                .copied()
                .find(|&y| (pos[*v] - pos[y]).abs() < 3)
                .unwrap();
            assert_eq!(q.value_at(piece), Some(&oracle));
        }
    }

    #[test]
    fn metric_validation() {
        let bad = vec![vec![int(0), int(1)], vec![int(2), int(0)]];
        assert!(FiniteMetric::new(bad).is_err());
        let tri = vec![
            vec![int(0), int(1), int(5)],
            vec![int(1), int(0), int(1)],
            vec![int(5), int(1), int(0)],
        ];
        assert!(FiniteMetric::new(tri).is_err());
    }

    #[test]
    fn orbit_member_examples() {
        let f = StepFn::from_pieces(vec![(w("0"), 2usize), (w("10"), 1), (w("11"), 0)]).unwrap();
        let s3 = FiniteGroupSpec::symmetric(3).unwrap();
        match orbit_member(&f, &s3, 0) {
            OrbitMembership::Member { witness } => {
                assert_eq!(act_pointwise(&witness, &s3, &StepFn::constant(0)), f);
            }
            other => panic!("expected membership, got {other:?}"),
        }
        let trivial = FiniteGroupSpec::trivial(3);
        assert!(!orbit_member(&f, &trivial, 0).is_member());
        assert!(orbit_member(&StepFn::constant(0), &trivial, 0).is_member());
        let c2 = FiniteGroupSpec::generated(3, &[p(&[1, 0, 2])]).unwrap();
        assert_eq!(c2.elements().len(), 2);
        assert_eq!(
            orbit_member(&f, &c2, 0),
            OrbitMembership::Refused { piece: w("0"), value: 2 }
        );
    }

    #[test]
    fn group_spec_validation() {
        assert!(FiniteGroupSpec::from_elements(3, vec![Perm::identity(3), p(&[1, 2, 0])]).is_err());
        let c3 = FiniteGroupSpec::from_elements(
            3,
            vec![Perm::identity(3), p(&[1, 2, 0]), p(&[2, 0, 1])],
        )
        .unwrap();
        // Sign action of C3 on two points is trivial; a transposition is not a homomorphism.
        assert!(c3.clone().with_action(vec![Perm::identity(2); 3]).is_ok());
        assert!(c3
            .with_action(vec![Perm::identity(2), p(&[1, 0]), Perm::identity(2)])
            .is_err());
        assert!(FiniteGroupSpec::symmetric(9).is_err());
    }

    #[test]
    fn cyclic_block_conjugate_examples() {
        let sw = p(&[1, 0]);
        let g = cyclic_block_conjugate(
            &[StepFn::constant(sw.clone())],
            &[StepFn::constant(sw.clone())],
            &[sw],
        )
        .unwrap();
        assert_eq!(g, StepFn::constant(Perm::identity(2)));

        let s = p(&[1, 2, 0]);
        let t = p(&[2, 0, 1]);
        let g = cyclic_block_conjugate(
            &[StepFn::constant(s.clone())],
            &[StepFn::constant(t.clone())],
            std::slice::from_ref(&s),
        )
        .unwrap();
        let brute = Perm::all(3).into_iter().find(|g| g.conjugate(&t) == s).unwrap();
        assert_eq!(g, StepFn::constant(brute));

        let mixed = two_piece(p(&[1, 0, 2]), p(&[1, 2, 0]));
        let err = cyclic_block_conjugate(&[mixed], &[StepFn::constant(s.clone())], &[s]);
        assert_eq!(err, Err(Error::NoConjugator { piece: w("0") }));
    }

    #[test]
    fn phi_embed_examples() {
        let id = LeafPerm::identity(2);
        assert_eq!(phi_embed(&id).unwrap(), StepFn::constant(Perm::identity(4)));
        let swap = LeafPerm::new(1, p(&[1, 0])).unwrap();
        assert_eq!(phi_embed(&swap).unwrap(), StepFn::constant(p(&[1, 0])));
    }

    #[test]
    fn gauge_on_first_point_measures_support() {
        let t = LeafPerm::new(2, p(&[1, 0, 2, 3])).unwrap();
        let phi = phi_embed(&t).unwrap();
        let id = StepFn::constant(Perm::identity(4));
        let lam = l23();
        assert_eq!(gauge_on_points(&phi, &id, &[0], &lam), ratio(2, 3));
        // The full discrete gauge sees every piece as moved.
        assert_eq!(phi.gauge(&id, &lam), int(1));
    }

    #[test]
    fn step_fn_json() {
        let f = two_piece(p(&[1, 0]), p(&[0, 1]));
        let s = serde_json::to_string(&f).unwrap();
        assert_eq!(s, r#"{"group":"S_2","pieces":[["0",[1,0]],["1",[0,1]]]}"#);
        let back: StepFn<Perm> = serde_json::from_str(&s).unwrap();
        assert_eq!(back, f);
        let y = StepFn::from_pieces(vec![(w("0"), 2usize), (w("1"), 1)]).unwrap();
        let s = serde_json::to_string(&y).unwrap();
        assert_eq!(s, r#"{"pieces":[["0",2],["1",1]]}"#);
    }
}
