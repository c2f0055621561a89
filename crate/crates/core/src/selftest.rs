//! Property suites over the whole library, shared by the `selftest`
//! subcommand and the `acceptance` test target.
//!
//! Each suite returns a [`SuiteReport`] of named checks. A check marked
//! `unattainable` documents a target the construction provably cannot meet
//! inside the depth budget; it is still run at full strength and reported.

use std::collections::BTreeSet;
use std::fmt;
use std::time::{Duration, Instant};

use num_traits::{One, ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::census::{census, en_surrogate_check, orbit_partition, OrbitCensus};
use crate::conjugate::conjugate_tuples;
use crate::cylinder::CylinderSet;
use crate::densify::densify;
use crate::equidecompose::{
    check_pre_three_cycle, equidecompose_onto, leftover_profile, pre_three_cycle, three_cycle,
};
use crate::error::{Error, Result};
use crate::l0::{
    act_pointwise, contraction, cyclic_block_conjugate, gauge_on_points, l0_product, orbit_member,
    phi_embed, FiniteGroupSpec, OrbitMembership, StepFn,
};
use crate::oracle;
use crate::perm::Perm;
use crate::rational::{format_rational, int, ratio, Lambda, Rational};
use crate::table::{FullMap, LeafPerm, TableMap};
use crate::word::{max_depth, Word};

pub const DEFAULT_SEED: u64 = 0x5eed;

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// Number of cases examined.
    pub cases: usize,
    pub detail: String,
    /// The target is out of reach of the construction at this depth budget.
    pub unattainable: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub id: u8,
    pub title: &'static str,
    pub checks: Vec<Check>,
    pub elapsed_ms: u128,
    pub limit_ms: u128,
}

impl SuiteReport {
    pub fn within_time(&self) -> bool {
        self.elapsed_ms < self.limit_ms
    }

    pub fn passed(&self) -> bool {
        self.within_time() && self.checks.iter().all(|c| c.passed)
    }

    /// Passes apart from checks marked unattainable.
    pub fn passed_attainable(&self) -> bool {
        self.within_time() && self.checks.iter().all(|c| c.passed || c.unattainable)
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let failed: Vec<&str> = self
            .checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| c.name.as_str())
            .collect();
        write!(
            f,
            "criterion {} {:<28} {} ({} checks, {} ms / {} ms)",
            self.id,
            self.title,
            if self.passed() { "PASS" } else { "FAIL" },
            self.checks.len(),
            self.elapsed_ms,
            self.limit_ms
        )?;
        if !failed.is_empty() {
            write!(f, " failing: {}", failed.join(", "))?;
        }
        if !self.within_time() {
            write!(f, " over time limit")?;
        }
        Ok(())
    }
}

/// Counts failures over a loop, keeping the first counterexample.
struct Tally {
    cases: usize,
    failures: usize,
    first: Option<String>,
}

impl Tally {
    fn new() -> Self {
        Tally {
            cases: 0,
            failures: 0,
            first: None,
        }
    }

    fn check(&mut self, ok: bool, context: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
            if self.first.is_none() {
                self.first = Some(context());
            }
        }
    }

    fn check_result<T>(&mut self, r: Result<T>, context: impl FnOnce() -> String) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.check(false, || format!("{}: {e}", context()));
                None
            }
        }
    }
}

#[derive(Default)]
struct Checks(Vec<Check>);

impl Checks {
    fn tally(&mut self, name: &str, t: Tally) {
        let detail = match &t.first {
            None => format!("{} cases", t.cases),
            Some(c) => format!("{} of {} cases fail; first: {c}", t.failures, t.cases),
        };
        self.0.push(Check {
            name: name.into(),
            passed: t.failures == 0 && t.cases > 0,
            cases: t.cases,
            detail,
            unattainable: false,
        });
    }

    fn single(&mut self, name: &str, passed: bool, detail: impl Into<String>) {
        self.0.push(Check {
            name: name.into(),
            passed,
            cases: 1,
            detail: detail.into(),
            unattainable: false,
        });
    }

    fn mark_unattainable(&mut self) {
        if let Some(c) = self.0.last_mut() {
            c.unattainable = true;
        }
    }
}

pub const SUITE_COUNT: u8 = 9;

/// Run one suite by number (1 through 9).
pub fn run_suite(id: u8, seed: u64) -> Result<SuiteReport> {
    let (title, limit, f): (&'static str, u64, fn(&mut Checks, u64)) = match id {
        1 => ("group algebra", 10, group_algebra),
        2 => ("cocycle", 10, cocycle),
        3 => ("phi embedding", 30, phi_embedding),
        4 => ("tuple conjugation", 60, tuple_conjugation),
        5 => ("equidecomposition", 10, equidecomposition),
        6 => ("densification", 30, densification),
        7 => ("three-cycles", 5, three_cycles),
        8 => ("step functions", 30, step_functions),
        9 => ("census invariance", 10, census_invariance),
        _ => return Err(Error::Precondition(format!("no suite {id}; suites are 1-{SUITE_COUNT}"))),
    };
    let start = Instant::now();
    let mut checks = Checks::default();
    f(&mut checks, seed);
    Ok(SuiteReport {
        id,
        title,
        checks: checks.0,
        elapsed_ms: start.elapsed().as_millis(),
        limit_ms: Duration::from_secs(limit).as_millis(),
    })
}

pub fn run_all(seed: u64) -> Vec<SuiteReport> {
    (1..=SUITE_COUNT)
        .map(|id| run_suite(id, seed).expect("valid suite id"))
        .collect()
}

// ---------------------------------------------------------------------------
// Random generators

fn rng(seed: u64, salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

fn random_perm(rng: &mut ChaCha8Rng, n: usize) -> Perm {
    let mut images: Vec<usize> = (0..n).collect();
    images.shuffle(rng);
    Perm::from_images(images).expect("shuffle is a permutation")
}

fn random_leaf_perm(rng: &mut ChaCha8Rng, level: u8) -> LeafPerm {
    LeafPerm::new(level, random_perm(rng, 1 << level)).expect("degree matches level")
}

fn random_full_map(rng: &mut ChaCha8Rng, max_level: u8) -> FullMap {
    let level = rng.random_range(0..=max_level);
    random_leaf_perm(rng, level).to_full_map()
}

/// A random finite partition of the space into cylinders of length `<= depth`.
fn random_partition(rng: &mut ChaCha8Rng, depth: u8) -> Vec<Word> {
    let mut out = Vec::new();
    let mut stack = vec![Word::root()];
    while let Some(x) = stack.pop() {
        if x.len() < depth && (x.is_root() || rng.random_bool(0.6)) {
            let [a, b] = x.children().expect("depth is small");
            stack.push(b);
            stack.push(a);
        } else {
            out.push(x);
        }
    }
    out
}

fn random_step<V: Clone + Eq>(
    rng: &mut ChaCha8Rng,
    depth: u8,
    mut value: impl FnMut(&mut ChaCha8Rng) -> V,
) -> StepFn<V> {
    let pieces = random_partition(rng, depth)
        .into_iter()
        .map(|w| (w, value(rng)))
        .collect();
    StepFn::from_pieces(pieces).expect("a partition")
}

fn lam23() -> Lambda {
    Lambda::from_ratio(2, 3).expect("valid lambda")
}

// ---------------------------------------------------------------------------
// 1. Group algebra

fn group_algebra(out: &mut Checks, seed: u64) {
    let lam = lam23();
    let mut r = rng(seed, 1);
    let id = FullMap::identity();
    let (mut assoc, mut inv, mut ident, mut left, mut oracle_t) =
        (Tally::new(), Tally::new(), Tally::new(), Tally::new(), Tally::new());
    for case in 0..1000 {
        let f = random_full_map(&mut r, 6);
        let g = random_full_map(&mut r, 6);
        let h = random_full_map(&mut r, 6);
        let ctx = || format!("case {case}: f={} g={} h={}", f.table(), g.table(), h.table());
        let lhs = f.compose(&g).and_then(|fg| fg.compose(&h));
        let rhs = g.compose(&h).and_then(|gh| f.compose(&gh));
        if let (Some(l), Some(rr)) = (assoc.check_result(lhs, ctx), assoc.check_result(rhs, ctx)) {
            assoc.check(l == rr, ctx);
            // Leaf evaluation of the triple product against the oracle.
            let lf = oracle::leaf_images(f.table(), 6).unwrap();
            let lg = oracle::leaf_images(g.table(), 6).unwrap();
            let lh = oracle::leaf_images(h.table(), 6).unwrap();
            let composed: Vec<usize> = (0..64).map(|x| lf[lg[lh[x]]]).collect();
            oracle_t.check(oracle::leaf_images(l.table(), 6).as_ref() == Some(&composed), ctx);
        }
        let fi = f.inverse();
        let both = f.compose(&fi).and_then(|a| Ok((a, fi.compose(&f)?)));
        if let Some((a, b)) = inv.check_result(both, ctx) {
            inv.check(a.is_identity() && b.is_identity(), ctx);
        }
        let units = f.compose(&id).and_then(|a| Ok((a, id.compose(&f)?)));
        if let Some((a, b)) = ident.check_result(units, ctx) {
            ident.check(a == f && b == f, ctx);
        }
        let hf = h.compose(&f);
        let hg = h.compose(&g);
        if let (Some(hf), Some(hg)) = (left.check_result(hf, ctx), left.check_result(hg, ctx)) {
            let d = f.du(&g, &lam);
            left.check(hf.du(&hg, &lam) == d, ctx);
            oracle_t.check(oracle::du(f.table(), g.table(), &lam) == d, ctx);
        }
    }
    out.tally("associativity", assoc);
    out.tally("inverse laws", inv);
    out.tally("identity laws", ident);
    out.tally("left invariance of du", left);
    out.tally("oracle agreement", oracle_t);

    // Right invariance fails: f = id, g = (00 01), h = (0 1).
    let f = FullMap::identity();
    let g = FullMap::new(TableMap::parse(&[("00", "01"), ("01", "00"), ("1", "1")]).unwrap()).unwrap();
    let h = FullMap::new(TableMap::parse(&[("0", "1"), ("1", "0")]).unwrap()).unwrap();
    let before = f.du(&g, &lam);
    let after = f.compose(&h).unwrap().du(&g.compose(&h).unwrap(), &lam);
    out.single(
        "right invariance fails at 2/3",
        before != after && before == ratio(2, 3) && after == ratio(1, 3),
        format!(
            "du(f, g) = {}, du(fh, gh) = {}",
            format_rational(&before),
            format_rational(&after)
        ),
    );
}

// ---------------------------------------------------------------------------
// 2. Cocycle

fn cocycle(out: &mut Checks, seed: u64) {
    let lam = lam23();
    let half = Lambda::half();
    let mut r = rng(seed, 2);
    let (mut chain, mut ratio_t, mut unit, mut pow2) =
        (Tally::new(), Tally::new(), Tally::new(), Tally::new());
    for case in 0..1000 {
        let f = random_full_map(&mut r, 6);
        let g = random_full_map(&mut r, 6);
        let ctx = || format!("case {case}: f={} g={}", f.table(), g.table());
        let Some(fg) = chain.check_result(f.compose(&g), ctx) else {
            continue;
        };
        let level = f.depth().max(g.depth());
        for i in 0..1u64 << level {
            let x = Word::from_index(i, level);
            let gx = g.apply_prefix(&x).expect("total map");
            let lhs = fg.rn_at(&x, &lam).expect("total map");
            let rhs = f.rn_at(&gx, &lam).expect("total map") * g.rn_at(&x, &lam).expect("total map");
            chain.check(lhs == rhs, || format!("{} at x={x}", ctx()));
            let direct = oracle::word_mass(&gx, &lam) / oracle::word_mass(&x, &lam);
            ratio_t.check(g.rn_at(&x, &lam).unwrap() == direct, || format!("{} at x={x}", ctx()));
        }
        for (_, v) in f.rn_cocycle(&half) {
            unit.check(v.is_one(), ctx);
        }
        for (_, v) in f.rn_cocycle(&lam) {
            pow2.check(oracle::is_power_of_two(&v), || format!("{}: value {}", ctx(), format_rational(&v)));
        }
    }
    out.tally("chain rule", chain);
    out.tally("oracle mass ratios", ratio_t);
    out.tally("trivial at 1/2", unit);
    out.tally("powers of two at 2/3", pow2);
}

// ---------------------------------------------------------------------------
// 3. Phi embedding

fn phi_embedding(out: &mut Checks, seed: u64) {
    let mut r = rng(seed, 3);
    let mut pairs: Vec<(LeafPerm, LeafPerm)> = Vec::new();
    let mut singles: Vec<LeafPerm> = Vec::new();
    for level in 0..=2u8 {
        let all: Vec<LeafPerm> = Perm::all(1 << level)
            .into_iter()
            .map(|p| LeafPerm::new(level, p).unwrap())
            .collect();
        for a in &all {
            for b in &all {
                pairs.push((a.clone(), b.clone()));
            }
        }
        singles.extend(all);
    }
    for _ in 0..100 {
        let (a, b) = (random_leaf_perm(&mut r, 3), random_leaf_perm(&mut r, 3));
        singles.push(a.clone());
        pairs.push((a, b));
    }
    let mut hom = Tally::new();
    for (a, b) in &pairs {
        let ctx = || format!("T={:?} T'={:?}", a.perm(), b.perm());
        let lhs = a.compose(b).and_then(|ab| phi_embed(&ab));
        let rhs = phi_embed(a).and_then(|pa| l0_product(&pa, &phi_embed(b)?));
        if let (Some(l), Some(rr)) = (hom.check_result(lhs, ctx), hom.check_result(rhs, ctx)) {
            hom.check(l == rr, ctx);
        }
    }
    out.tally("homomorphism", hom);

    let (mut ident, mut equiv, mut exact) = (Tally::new(), Tally::new(), Tally::new());
    let eps = [ratio(1, 4), ratio(1, 2), ratio(3, 4)];
    for t in &singles {
        let ctx = || format!("T={:?} at level {}", t.perm(), t.level());
        let phi = phi_embed(t).expect("small level");
        let id = StepFn::constant(Perm::identity(1 << t.level()));
        ident.check((phi == id) == t.is_identity(), ctx);
        for lam in [Lambda::half(), lam23()] {
            let supp = t.to_full_map().support().mu(&lam);
            let gauge = gauge_on_points(&phi, &id, &[0], &lam);
            exact.check(supp == gauge, ctx);
            for e in &eps {
                equiv.check((supp < *e) == (gauge < *e), ctx);
            }
        }
    }
    out.tally("identity iff trivial", ident);
    out.tally("support vs gauge threshold", equiv);
    out.tally("support equals gauge", exact);
}

// ---------------------------------------------------------------------------
// 4. Tuple conjugation

fn all_tuples(n: usize, level: u8) -> Vec<Vec<LeafPerm>> {
    let perms: Vec<LeafPerm> = Perm::all(1 << level)
        .into_iter()
        .map(|p| LeafPerm::new(level, p).unwrap())
        .collect();
    let mut out: Vec<Vec<LeafPerm>> = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|t| {
                perms.iter().map(move |p| {
                    let mut t = t.clone();
                    t.push(p.clone());
                    t
                })
            })
            .collect();
    }
    out
}

fn census_key(c: &OrbitCensus) -> Vec<(String, usize)> {
    c.entries.iter().map(|e| (e.ty.encoding(), e.count)).collect()
}

fn tuple_conjugation(out: &mut Checks, seed: u64) {
    let _ = seed;
    let lam = lam23();
    let eps = ratio(1, 16);
    let (mut agree, mut exact, mut oracle_t) = (Tally::new(), Tally::new(), Tally::new());
    for n in 1..=2 {
        for level in 0..=2u8 {
            let tuples = all_tuples(n, level);
            let keys: Vec<_> = tuples
                .iter()
                .map(|t| census_key(&census(t, &lam).expect("small tuple")))
                .collect();
            let perms: Vec<Vec<Perm>> = tuples
                .iter()
                .map(|t| t.iter().map(|p| p.perm().clone()).collect())
                .collect();
            for (i, s) in tuples.iter().enumerate() {
                for (j, t) in tuples.iter().enumerate() {
                    let ctx = || format!("S={:?} T={:?}", perms[i], perms[j]);
                    let brute = !oracle::all_conjugators(&perms[i], &perms[j]).is_empty();
                    let equal = keys[i] == keys[j];
                    agree.check(brute == equal, ctx);
                    if !equal {
                        continue;
                    }
                    let Some(res) = exact.check_result(conjugate_tuples(s, t, &lam, &eps), ctx) else {
                        continue;
                    };
                    let c = FullMap::new(res.map.clone()).expect("conjugator is total");
                    let c_inv = c.inverse();
                    let tables_equal = s.iter().zip(t).all(|(si, ti)| {
                        c.compose(&si.to_full_map())
                            .and_then(|x| x.compose(&c_inv))
                            .map(|x| x == ti.to_full_map())
                            .unwrap_or(false)
                    });
                    exact.check(res.exact && tables_equal, ctx);
                    let residual_zero = s.iter().zip(t).all(|(si, ti)| {
                        oracle::conjugation_residual(c.table(), &si.to_table(), &ti.to_table(), &lam)
                            .is_zero()
                    });
                    oracle_t.check(residual_zero, ctx);
                }
            }
        }
    }
    out.tally("conjugable iff equal census", agree);
    out.tally("exact conjugator", exact);
    out.tally("oracle residual zero", oracle_t);

    // Unequal counts: one transposition against two.
    let s = vec![LeafPerm::new(3, Perm::from_cycles(8, &[&[0, 1]]).unwrap()).unwrap()];
    let t = vec![LeafPerm::new(3, Perm::from_cycles(8, &[&[0, 1], &[2, 3]]).unwrap()).unwrap()];
    match conjugate_tuples(&s, &t, &lam, &eps) {
        Ok(res) => {
            let d = &res.defects[0];
            let verified = oracle::conjugation_residual(&res.map, &s[0].to_table(), &t[0].to_table(), &lam);
            out.single(
                "unequal counts within 1/16",
                *d <= eps && !res.exact,
                format!("reported defect {}", format_rational(d)),
            );
            out.single(
                "reported defect verified",
                verified == *d,
                format!("oracle {}, reported {}", format_rational(&verified), format_rational(d)),
            );
        }
        Err(e) => out.single("unequal counts within 1/16", false, e.to_string()),
    }
    let refused = matches!(
        conjugate_tuples(&s, &t, &Lambda::half(), &eps),
        Err(Error::InvariantMeasureObstruction { .. })
    );
    out.single("refusal at 1/2", refused, "unequal counts at lambda = 1/2");
}

// ---------------------------------------------------------------------------
// 5. Equidecomposition

/// Every nonempty clopen set of the listed shape used by the exactness sweep.
fn equidecomposition_family() -> Vec<CylinderSet> {
    let mut sets = BTreeSet::new();
    // All unions of level-2 leaves.
    for mask in 1u32..16 {
        let words = (0..4).filter(|i| mask >> i & 1 == 1).map(|i| Word::from_index(i, 2));
        sets.insert(CylinderSet::from_words(words).words().to_vec());
    }
    // Every single cylinder of length <= 4.
    for len in 0..=4u8 {
        for i in 0..1u64 << len {
            sets.insert(vec![Word::from_index(i, len)]);
        }
    }
    // Two disjoint cylinders of mixed lengths <= 4.
    let words: Vec<Word> = (1..=4u8)
        .flat_map(|len| (0..1u64 << len).map(move |i| Word::from_index(i, len)))
        .collect();
    for (k, a) in words.iter().enumerate() {
        for b in &words[k + 1..] {
            if !a.comparable(b) && a.len() != b.len() {
                sets.insert(CylinderSet::from_words([*a, *b]).words().to_vec());
            }
        }
    }
    sets.into_iter().map(CylinderSet::from_words).collect()
}

fn equidecomposition(out: &mut Checks, seed: u64) {
    let _ = seed;
    let lam = lam23();
    let family = equidecomposition_family();
    let mut exact_t = Tally::new();
    let mut obstruction = Tally::new();
    for (i, a) in family.iter().enumerate() {
        for b in family.iter().skip(i % 7).step_by(7) {
            let ctx = || format!("A={a} B={b}");
            let equal = a.kraft() == b.kraft();
            let Some(res) = exact_t.check_result(equidecompose_onto(a, b, &lam, &int(1)), ctx) else {
                continue;
            };
            let bijection = res.map.domain() == a.difference(&res.uncovered_dom)
                && res.map.range() == b.difference(&res.uncovered_rng);
            exact_t.check(bijection && res.is_exact() == equal, ctx);
            if !equal {
                let err = equidecompose_onto(a, b, &Lambda::half(), &int(1));
                obstruction.check(matches!(err, Err(Error::InvariantMeasureObstruction { .. })), ctx);
            }
        }
    }
    out.tally("exact iff equal kraft", exact_t);
    out.tally("obstruction at 1/2", obstruction);

    let a = CylinderSet::parse(&["0"]).unwrap();
    let b = CylinderSet::parse(&["10"]).unwrap();
    for eps in [ratio(1, 8), ratio(1, 32), ratio(1, 128)] {
        let name = format!("leftover within {}", format_rational(&eps));
        match equidecompose_onto(&a, &b, &lam, &eps) {
            Ok(res) => {
                let left = res.leftover(&lam);
                let mut pieces = res.uncovered_dom.words().to_vec();
                pieces.extend_from_slice(res.uncovered_rng.words());
                let resum = oracle::resum(&pieces, &lam);
                let reported = res.masses.last().cloned().unwrap_or_default();
                out.single(
                    &name,
                    left <= eps && resum == left && reported == left,
                    format!(
                        "level {}, leftover {}, re-summed {}",
                        res.level,
                        format_rational(&left),
                        format_rational(&resum)
                    ),
                );
            }
            Err(e) => {
                out.single(&name, false, e.to_string());
                if matches!(e, Error::DepthExhausted { .. }) {
                    out.mark_unattainable();
                }
            }
        }
    }

    // The leftover table against a ratio-2/3 geometric envelope.
    let top = max_depth();
    match leftover_profile(&a, &b, &lam, 2..=top) {
        Ok(profile) => {
            let base = profile[0].1.clone();
            let mut envelope = base.clone();
            let mut violations = Vec::new();
            for (level, mass) in &profile {
                if *mass > envelope {
                    violations.push(*level);
                }
                envelope *= ratio(2, 3);
            }
            let f = |r: &Rational| r.to_f64().unwrap_or(f64::NAN);
            out.single(
                "geometric envelope 2/3",
                violations.is_empty(),
                format!(
                    "leftover {:.4} at level {}, {:.4} at level {}; {} levels above the envelope{}",
                    f(&base),
                    profile[0].0,
                    f(&profile.last().unwrap().1),
                    top,
                    violations.len(),
                    violations.first().map(|l| format!(", first at level {l}")).unwrap_or_default()
                ),
            );
            if !violations.is_empty() {
                out.mark_unattainable();
            }
            let monotone = profile.windows(2).all(|w| w[1].1 <= w[0].1);
            out.single("leftover non-increasing", monotone, format!("{} levels", profile.len()));
        }
        Err(e) => out.single("geometric envelope 2/3", false, e.to_string()),
    }
    let refused = matches!(
        equidecompose_onto(&a, &b, &Lambda::half(), &ratio(1, 8)),
        Err(Error::InvariantMeasureObstruction { .. })
    );
    out.single("obstruction for 0 onto 10 at 1/2", refused, "kraft 1/2 against 1/4");
}

// ---------------------------------------------------------------------------
// 6. Densification

fn densification(out: &mut Checks, seed: u64) {
    let lam = lam23();
    let mut r = rng(seed, 6);
    let inputs = [
        vec![LeafPerm::identity(0)],
        vec![random_leaf_perm(&mut r, 3), random_leaf_perm(&mut r, 3)],
    ];
    let (mut close, mut audit, mut en, mut orbits) = (Tally::new(), Tally::new(), Tally::new(), Tally::new());
    for input in &inputs {
        for eps in [ratio(1, 4), ratio(1, 16)] {
            let ctx = || {
                format!(
                    "n={} eps={}",
                    input.len(),
                    format_rational(&eps)
                )
            };
            let Some(res) = close.check_result(densify(input, &lam, &eps, 2, 2), ctx) else {
                continue;
            };
            close.check(res.du.iter().all(|d| *d < eps), ctx);
            for (i, (o, inp)) in res.tuple.iter().zip(input).enumerate() {
                let d = oracle::du(&o.to_table(), &inp.to_table(), &lam);
                audit.check(d == res.du[i], ctx);
            }
            let report = en_surrogate_check(&res.tuple, 2, 2);
            en.check(matches!(&report, Ok(r) if r.passes) && res.check.passes, ctx);
            let ours = orbit_partition(&res.tuple).ok();
            orbits.check(ours == Some(oracle::orbits_bfs(&res.tuple)), ctx);
        }
    }
    out.tally("coordinates within eps", close);
    out.tally("du audited", audit);
    out.tally("every small type twice", en);
    out.tally("orbits agree with oracle", orbits);
}

// ---------------------------------------------------------------------------
// 7. Three-cycles

fn three_cycles(out: &mut Checks, seed: u64) {
    let mut r = rng(seed, 7);
    for lam in [Lambda::half(), lam23()] {
        let (phi, psi) = pre_three_cycle(&lam);
        out.single(
            &format!("canonical pre-3-cycle at {lam}"),
            check_pre_three_cycle(&phi, &psi, &lam).is_ok(),
            format!("phi {phi}, psi {psi}"),
        );
    }
    let (mut valid, mut cube, mut support) = (Tally::new(), Tally::new(), Tally::new());
    for case in 0..100 {
        let level = r.random_range(2..=5u8);
        let m = 1usize << level;
        let k = r.random_range(1..=m / 3);
        let mut leaves: Vec<usize> = (0..m).collect();
        leaves.shuffle(&mut r);
        let (d, rest) = leaves.split_at(k);
        let (rg, rest) = rest.split_at(k);
        let r2 = &rest[..k];
        let mut rg_shuffled = rg.to_vec();
        rg_shuffled.shuffle(&mut r);
        let mut r2_shuffled = r2.to_vec();
        r2_shuffled.shuffle(&mut r);
        let leaf = |i: usize| Word::from_index(i as u64, level);
        let phi = TableMap::from_pairs(d.iter().zip(&rg_shuffled).map(|(&a, &b)| (leaf(a), leaf(b))).collect())
            .unwrap();
        let psi = TableMap::from_pairs(rg.iter().zip(&r2_shuffled).map(|(&a, &b)| (leaf(a), leaf(b))).collect())
            .unwrap();
        let ctx = || format!("case {case}: phi={phi} psi={psi}");
        valid.check(check_pre_three_cycle(&phi, &psi, &lam23()).is_ok(), ctx);
        let Some(c) = cube.check_result(three_cycle(&phi, &psi), ctx) else {
            continue;
        };
        let c3 = c.compose(&c).and_then(|c2| c2.compose(&c));
        let images = oracle::leaf_images(c.table(), level).unwrap_or_default();
        let oracle_cube = images.len() == m && (0..m).all(|x| images[images[images[x]]] == x);
        cube.check(matches!(&c3, Ok(x) if x.is_identity()) && oracle_cube, ctx);
        let moved = CylinderSet::from_words(d.iter().chain(rg).chain(r2).map(|&i| leaf(i)));
        let oracle_moved = CylinderSet::from_words((0..m).filter(|&x| images[x] != x).map(leaf));
        support.check(c.support() == moved && oracle_moved == moved, ctx);
    }
    out.tally("random pre-3-cycles valid", valid);
    out.tally("cube is identity", cube);
    out.tally("support equality", support);
}

// ---------------------------------------------------------------------------
// 8. Step functions

fn step_functions(out: &mut Checks, seed: u64) {
    let mut r = rng(seed, 8);
    let (mut ends, mut witness) = (Tally::new(), Tally::new());
    for case in 0..200 {
        let f = random_step(&mut r, 5, |r| r.random_range(0..5usize));
        let y0 = r.random_range(0..5usize);
        let f1 = contraction(&f, &Rational::one(), y0);
        let f0 = contraction(&f, &Rational::zero(), y0);
        ends.check(
            matches!(&f1, Ok(g) if *g == f) && matches!(&f0, Ok(g) if *g == StepFn::constant(y0)),
            || format!("case {case}"),
        );
    }
    out.tally("contraction endpoints", ends);

    for case in 0..200 {
        let p = r.random_range(2..=5usize);
        let gens = [random_perm(&mut r, p)];
        let group = FiniteGroupSpec::generated(p, &gens).expect("small group");
        let y0 = r.random_range(0..p);
        let orbit: Vec<usize> = group.orbit(y0).into_iter().collect();
        let f = random_step(&mut r, 5, |r| orbit[r.random_range(0..orbit.len())]);
        let ctx = || format!("case {case}: gens {:?}", gens);
        match orbit_member(&f, &group, y0) {
            OrbitMembership::Member { witness: phi } => {
                let moved = act_pointwise(&phi, &group, &StepFn::constant(y0));
                let per_piece = phi.zip(&f, |g, v| g.apply(y0) == *v).values().iter().all(|b| *b);
                witness.check(moved == f && per_piece, ctx);
            }
            OrbitMembership::Refused { .. } => witness.check(false, ctx),
        }
        if orbit.len() < p {
            let outside = (0..p).find(|v| !orbit.contains(v)).unwrap();
            let g = f.map(|_| outside);
            witness.check(!orbit_member(&g, &group, y0).is_member(), ctx);
        }
    }
    out.tally("orbit witness identity", witness);

    // Constant tuples, exhaustively: every pair (s, t) in one simultaneous
    // conjugacy class, n in {1, 2}, p <= 4.
    let mut constant = Tally::new();
    for p in 1..=4usize {
        let all = Perm::all(p);
        for n in 1..=2usize {
            let mut tuples: Vec<Vec<Perm>> = vec![vec![]];
            for _ in 0..n {
                tuples = tuples
                    .into_iter()
                    .flat_map(|t| {
                        all.iter().map(move |x| {
                            let mut t = t.clone();
                            t.push(x.clone());
                            t
                        })
                    })
                    .collect();
            }
            let mut seen = BTreeSet::new();
            for tau in &tuples {
                if seen.contains(tau) {
                    continue;
                }
                let class: BTreeSet<Vec<Perm>> = all
                    .iter()
                    .map(|a| tau.iter().map(|x| a.conjugate(x)).collect())
                    .collect();
                for s in &class {
                    for t in &class {
                        let ctx = || format!("tau={tau:?} s={s:?} t={t:?}");
                        let sf: Vec<StepFn<Perm>> = s.iter().cloned().map(StepFn::constant).collect();
                        let tf: Vec<StepFn<Perm>> = t.iter().cloned().map(StepFn::constant).collect();
                        let Some(g) = constant.check_result(cyclic_block_conjugate(&sf, &tf, tau), ctx) else {
                            continue;
                        };
                        let least = oracle::all_conjugators(t, s).into_iter().next();
                        constant.check(
                            g.pieces().len() == 1 && Some(&g.pieces()[0].1) == least.as_ref(),
                            ctx,
                        );
                    }
                }
                seen.extend(class);
            }
        }
    }
    out.tally("constant tuples exhaustive", constant);

    let mut piecewise = Tally::new();
    for case in 0..100 {
        let p = r.random_range(2..=6usize);
        let n = r.random_range(1..=2usize);
        let tau: Vec<Perm> = (0..n).map(|_| random_perm(&mut r, p)).collect();
        let a = random_step(&mut r, 4, |r| random_perm(r, p));
        let b = random_step(&mut r, 4, |r| random_perm(r, p));
        let s: Vec<StepFn<Perm>> = tau.iter().map(|x| a.map(|g| g.conjugate(x))).collect();
        let t: Vec<StepFn<Perm>> = tau.iter().map(|x| b.map(|g| g.conjugate(x))).collect();
        let ctx = || format!("case {case}: p={p} tau={tau:?}");
        let Some(g) = piecewise.check_result(cyclic_block_conjugate(&s, &t, &tau), ctx) else {
            continue;
        };
        let mut all = s.clone();
        all.extend(t.iter().cloned());
        all.push(g.clone());
        let joint = crate::l0::refine_tuple(&all);
        let ok = joint.pieces().iter().all(|(_, v)| {
            let (sv, rest) = v.split_at(n);
            let (tv, gv) = rest.split_at(n);
            let g = &gv[0];
            let conj = sv.iter().zip(tv).all(|(si, ti)| g.conjugate(ti) == *si);
            conj && oracle::all_conjugators(tv, sv).first() == Some(g)
        });
        piecewise.check(ok, ctx);
    }
    out.tally("random piecewise tuples", piecewise);
}

// ---------------------------------------------------------------------------
// 9. Census invariance

fn census_invariance(out: &mut Checks, seed: u64) {
    let half = Lambda::half();
    let lam = lam23();
    let mut r = rng(seed, 9);
    let (mut preserved, mut moved_mass) = (Tally::new(), 0usize);
    let mut cases = 0;
    for case in 0..200 {
        let level = r.random_range(1..=4u8);
        let n = r.random_range(1..=2usize);
        let s: Vec<LeafPerm> = (0..n).map(|_| random_leaf_perm(&mut r, level)).collect();
        let c = random_full_map(&mut r, 5);
        let top = level.max(c.depth());
        let c_inv = c.inverse();
        let ctx = || format!("case {case}: C={} S={:?}", c.table(), s);
        let conj: Option<Vec<LeafPerm>> = s
            .iter()
            .map(|x| {
                c.compose(&x.to_full_map())
                    .and_then(|y| y.compose(&c_inv))
                    .and_then(|y| y.to_leaf_perm(top))
                    .ok()
            })
            .collect();
        let refined: Option<Vec<LeafPerm>> = s.iter().map(|x| x.refine(top).ok()).collect();
        let (Some(conj), Some(refined)) = (conj, refined) else {
            preserved.check(false, ctx);
            continue;
        };
        let sig = |t: &[LeafPerm], l: &Lambda| census(t, l).map(|c| c.signature()).ok();
        preserved.check(sig(&refined, &half).is_some() && sig(&refined, &half) == sig(&conj, &half), ctx);
        cases += 1;
        let key = |t: &[LeafPerm]| census(t, &lam).map(|c| census_key(&c)).ok();
        if key(&refined) == key(&conj) && sig(&refined, &lam) != sig(&conj, &lam) {
            moved_mass += 1;
        }
    }
    out.tally("types, counts and masses at 1/2", preserved);
    out.single(
        "masses move at 2/3",
        moved_mass > 0,
        format!("{moved_mass} of {cases} conjugations keep types and counts but change a mass at 2/3"),
    );
}
