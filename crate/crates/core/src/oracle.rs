//! Brute-force reference evaluators.
//!
//! These recompute quantities pointwise from raw pair lists and leaf
//! indices, sharing no code with the canonical-form algebra, so they can
//! audit it. Masses are summed as big-integer numerators over `q^L` for
//! `lambda = p/q`.

use std::collections::{BTreeMap, VecDeque};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::perm::Perm;
use crate::rational::{Lambda, Rational};
use crate::table::{LeafPerm, TableMap};
use crate::word::Word;

/// Pointwise evaluator for a table, keyed by source word.
pub struct TableEval {
    pairs: BTreeMap<Word, Word>,
}

impl TableEval {
    pub fn new(f: &TableMap) -> Self {
        TableEval {
            pairs: f.pairs().iter().copied().collect(),
        }
    }

    /// Image of the cylinder `[x]`: `Ok(Some(y))` if one pair covers it,
    /// `Ok(None)` if `[x]` misses the domain, `Err(())` if `x` must be split.
    #[allow(clippy::result_unit_err)]
    pub fn image(&self, x: &Word) -> Result<Option<Word>, ()> {
        if let Some((s, t)) = self.pairs.range(..=*x).next_back() {
            if s.is_prefix_of(x) {
                let tail = x.strip_prefix(s).unwrap();
                return Ok(Some(t.concat(&tail).expect("same length as x")));
            }
        }
        match self.pairs.range(*x..).next() {
            Some((s, _)) if x.is_prefix_of(s) => Err(()),
            _ => Ok(None),
        }
    }
}

/// `mu_lambda([x])` as an exact rational from integer powers.
pub fn word_mass(x: &Word, lambda: &Lambda) -> Rational {
    let (p, q) = (lambda.value().numer().clone(), lambda.value().denom().clone());
    let num = num_traits::pow(p.clone(), x.zeros() as usize) * num_traits::pow(&q - &p, x.ones() as usize);
    Rational::new(num, num_traits::pow(q, x.len() as usize))
}

/// Sum of `mu_lambda` over disjoint words, as one numerator over `q^D`.
pub fn resum(words: &[Word], lambda: &Lambda) -> Rational {
    let (p, q) = (lambda.value().numer().clone(), lambda.value().denom().clone());
    let d = words.iter().map(Word::len).max().unwrap_or(0) as usize;
    let mut num = BigInt::zero();
    for w in words {
        num += num_traits::pow(p.clone(), w.zeros() as usize)
            * num_traits::pow(&q - &p, w.ones() as usize)
            * num_traits::pow(q.clone(), d - w.len() as usize);
    }
    Rational::new(num, num_traits::pow(q, d))
}

/// Image of `[x]` under a chain of maps applied right to left, or `Err(())`
/// if some stage must split `x`.
#[allow(clippy::result_unit_err)]
pub fn eval_chain(chain: &[TableEval], x: &Word) -> Result<Option<Word>, ()> {
    let mut y = *x;
    for e in chain.iter().rev() {
        match e.image(&y)? {
            Some(next) => y = next,
            None => return Ok(None),
        }
    }
    Ok(Some(y))
}

/// `mu{x : lhs(x) != rhs(x)}` for two chains, by recursive cylinder evaluation.
pub fn chain_disagreement(lhs: &[&TableMap], rhs: &[&TableMap], lambda: &Lambda) -> Rational {
    let el: Vec<TableEval> = lhs.iter().map(|m| TableEval::new(m)).collect();
    let er: Vec<TableEval> = rhs.iter().map(|m| TableEval::new(m)).collect();
    let mut total = Rational::zero();
    let mut stack = vec![Word::root()];
    while let Some(x) = stack.pop() {
        match (eval_chain(&el, &x), eval_chain(&er, &x)) {
            (Ok(a), Ok(b)) => {
                if a != b {
                    total += word_mass(&x, lambda);
                }
            }
            _ => {
                stack.push(x.child(true).expect("maps have bounded depth"));
                stack.push(x.child(false).expect("maps have bounded depth"));
            }
        }
    }
    total
}

/// `mu{x : f(x) != g(x)}`.
pub fn du(f: &TableMap, g: &TableMap, lambda: &Lambda) -> Rational {
    chain_disagreement(&[f], &[g], lambda)
}

/// Swap sides of every pair.
pub fn flip(f: &TableMap) -> TableMap {
    TableMap::from_pairs(f.pairs().iter().map(|&(a, b)| (b, a)).collect())
        .expect("a valid table flips to a valid table")
}

/// `mu{x : (c ∘ s ∘ c⁻¹)(x) != t(x)}`.
pub fn conjugation_residual(c: &TableMap, s: &TableMap, t: &TableMap, lambda: &Lambda) -> Rational {
    let c_inv = flip(c);
    chain_disagreement(&[c, s, &c_inv], &[t], lambda)
}

/// Leaf images of a total table at a level at least its depth.
pub fn leaf_images(f: &TableMap, level: u8) -> Option<Vec<usize>> {
    let e = TableEval::new(f);
    (0..1u64 << level)
        .map(|i| {
            let x = Word::from_index(i, level);
            e.image(&x).ok().flatten().map(|y| y.index() as usize)
        })
        .collect()
}

/// Orbits by breadth-first reachability over generators and their inverses.
pub fn orbits_bfs(tuple: &[LeafPerm]) -> Vec<Vec<usize>> {
    let m = 1usize << tuple[0].level();
    let invs: Vec<Perm> = tuple.iter().map(|p| p.perm().inverse()).collect();
    let mut seen = vec![false; m];
    let mut out = Vec::new();
    for start in 0..m {
        if seen[start] {
            continue;
        }
        let mut block = vec![];
        let mut queue = VecDeque::from([start]);
        seen[start] = true;
        while let Some(x) = queue.pop_front() {
            block.push(x);
            for y in tuple.iter().map(|p| p.apply(x)).chain(invs.iter().map(|p| p.apply(x))) {
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        block.sort_unstable();
        out.push(block);
    }
    out
}

/// Every `g` of degree `n` with `g ∘ from_i ∘ g⁻¹ = to_i`, in lexicographic order.
pub fn all_conjugators(from: &[Perm], to: &[Perm]) -> Vec<Perm> {
    let n = from[0].degree();
    Perm::all(n)
        .into_iter()
        .filter(|g| from.iter().zip(to).all(|(f, t)| g.conjugate(f) == *t))
        .collect()
}

/// `true` if `r = 2^k` for some integer `k`.
pub fn is_power_of_two(r: &Rational) -> bool {
    let pow2 = |x: &BigInt| x > &BigInt::zero() && (x & (x - BigInt::one())).is_zero();
    pow2(r.numer()) && pow2(r.denom())
}
