//! Permutations of `{0, ..., n-1}` as image arrays.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A permutation stored by its images: `self.images()[i]` is the image of `i`.
///
/// The derived order is lexicographic on the image arrays, which is the order
/// used whenever a "least" permutation is selected.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm(Vec<usize>);

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm((0..n).collect())
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n || seen[x] {
                return Err(Error::InvalidPermutation(format!("{images:?}")));
            }
            seen[x] = true;
        }
        Ok(Perm(images))
    }

    /// Build from disjoint cycles on `{0..n-1}`.
    pub fn from_cycles(n: usize, cycles: &[&[usize]]) -> Result<Self> {
        let mut images: Vec<usize> = (0..n).collect();
        for c in cycles {
            for (i, &x) in c.iter().enumerate() {
                if x >= n {
                    return Err(Error::InvalidPermutation(format!("point {x} >= {n}")));
                }
                images[x] = c[(i + 1) % c.len()];
            }
        }
        Perm::from_images(images)
    }

    pub(crate) fn from_images_unchecked(images: Vec<usize>) -> Self {
        debug_assert!(Perm::from_images(images.clone()).is_ok());
        Perm(images)
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn apply(&self, x: usize) -> usize {
        self.0[x]
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i == x)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Perm) -> Perm {
        assert_eq!(self.degree(), other.degree(), "degree mismatch");
        Perm(other.0.iter().map(|&x| self.0[x]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0; self.degree()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x] = i;
        }
        Perm(inv)
    }

    /// `self ∘ other ∘ self⁻¹`.
    pub fn conjugate(&self, other: &Perm) -> Perm {
        self.compose(other).compose(&self.inverse())
    }

    pub fn pow(&self, k: i64) -> Perm {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut out = Perm::identity(self.degree());
        for _ in 0..k.unsigned_abs() {
            out = base.compose(&out);
        }
        out
    }

    /// Disjoint cycles of length at least 2, each starting at its least point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for start in 0..self.degree() {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut x = self.0[start];
            while x != start {
                seen[x] = true;
                cycle.push(x);
                x = self.0[x];
            }
            if cycle.len() > 1 {
                out.push(cycle);
            }
        }
        out
    }

    /// All permutations of degree `n` in lexicographic order.
    pub fn all(n: usize) -> Vec<Perm> {
        let mut out = Vec::new();
        let mut cur: Vec<usize> = (0..n).collect();
        loop {
            out.push(Perm(cur.clone()));
            if !next_permutation(&mut cur) {
                break;
            }
        }
        out
    }
}

fn next_permutation(a: &mut [usize]) -> bool {
    if a.len() < 2 {
        return false;
    }
    let mut i = a.len() - 1;
    while i > 0 && a[i - 1] >= a[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = a.len() - 1;
    while a[j] <= a[i - 1] {
        j -= 1;
    }
    a.swap(i - 1, j);
    a[i..].reverse();
    true
}

/// The lexicographically least `g` with `g ∘ from[i] ∘ g⁻¹ = to[i]` for all `i`.
///
/// Depth-first search assigning `g(0), g(1), ...` in increasing order, with
/// each assignment propagated through the relation `g(from[i](x)) = to[i](g(x))`.
/// The first complete assignment found is the lexicographic minimum.
pub fn least_conjugator(from: &[Perm], to: &[Perm]) -> Option<Perm> {
    assert_eq!(from.len(), to.len(), "tuple length mismatch");
    let n = {
        let p = from.first()?;
        p.degree()
    };
    if from.iter().chain(to).any(|p| p.degree() != n) {
        return None;
    }
    let mut g = vec![usize::MAX; n];
    let mut used = vec![false; n];
    if search(0, from, to, &mut g, &mut used) {
        Some(Perm(g))
    } else {
        None
    }
}

fn search(x: usize, from: &[Perm], to: &[Perm], g: &mut [usize], used: &mut [bool]) -> bool {
    let n = g.len();
    let mut x = x;
    while x < n && g[x] != usize::MAX {
        x += 1;
    }
    if x == n {
        return true;
    }
    for y in 0..n {
        if used[y] {
            continue;
        }
        let mut trail = Vec::new();
        if propagate(x, y, from, to, g, used, &mut trail) && search(x + 1, from, to, g, used) {
            return true;
        }
        for z in trail {
            used[g[z]] = false;
            g[z] = usize::MAX;
        }
    }
    false
}

fn propagate(
    x: usize,
    y: usize,
    from: &[Perm],
    to: &[Perm],
    g: &mut [usize],
    used: &mut [bool],
    trail: &mut Vec<usize>,
) -> bool {
    let mut stack = vec![(x, y)];
    while let Some((a, b)) = stack.pop() {
        if g[a] != usize::MAX {
            if g[a] != b {
                return false;
            }
            continue;
        }
        if used[b] {
            return false;
        }
        g[a] = b;
        used[b] = true;
        trail.push(a);
        for (f, t) in from.iter().zip(to) {
            stack.push((f.apply(a), t.apply(b)));
        }
    }
    true
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return f.write_str("()");
        }
        for c in cycles {
            let parts: Vec<String> = c.iter().map(|x| x.to_string()).collect();
            write!(f, "({})", parts.join(" "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl Serialize for Perm {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Perm {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let images = Vec::<usize>::deserialize(d)?;
        Perm::from_images(images).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(images: &[usize]) -> Perm {
        Perm::from_images(images.to_vec()).unwrap()
    }

    #[test]
    fn composition_applies_right_first() {
        let a = p(&[1, 2, 0]);
        let b = p(&[1, 0, 2]);
        assert_eq!(a.compose(&b), p(&[2, 1, 0]));
        assert_eq!(a.compose(&a.inverse()), Perm::identity(3));
        assert_eq!(a.pow(3), Perm::identity(3));
        assert_eq!(a.pow(-1), a.inverse());
    }

    #[test]
    fn enumerates_in_lex_order() {
        let all = Perm::all(3);
        assert_eq!(all.len(), 6);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(Perm::all(0).len(), 1);
    }

    #[test]
    fn rejects_non_bijections() {
        assert!(Perm::from_images(vec![0, 0]).is_err());
        assert!(Perm::from_images(vec![2, 0]).is_err());
    }

    #[test]
    fn least_conjugator_is_lexicographic_minimum() {
        for n in 1..=4 {
            let all = Perm::all(n);
            for s in &all {
                for t in &all {
                    let brute = all.iter().find(|g| g.conjugate(t) == *s).cloned();
                    assert_eq!(least_conjugator(std::slice::from_ref(t), std::slice::from_ref(s)), brute);
                }
            }
        }
    }

    #[test]
    fn cycle_notation() {
        assert_eq!(p(&[1, 0, 3, 2]).to_string(), "(0 1)(2 3)");
        assert_eq!(Perm::identity(2).to_string(), "()");
        assert_eq!(Perm::from_cycles(4, &[&[0, 2]]).unwrap(), p(&[2, 1, 0, 3]));
    }
}
