//! Verification of the intersection and covering properties.
//!
//! Exhaustive scans run in parallel but always report the lexicographically
//! smallest failing tuple, so witnesses do not depend on the schedule.

use std::sync::OnceLock;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::group::{Element, FiniteGroup};
use crate::subset::GroupSubset;

/// Default cap on elementary steps for exhaustive checks.
pub const DEFAULT_BUDGET: u64 = 100_000_000;

/// Default number of random trials when a check must be sampled.
pub const DEFAULT_TRIALS: u64 = 100_000;

/// Exhaustive-check budget, overridable with `COVTRANS_BUDGET`.
pub fn budget() -> u64 {
    static BUDGET: OnceLock<u64> = OnceLock::new();
    *BUDGET.get_or_init(|| {
        std::env::var("COVTRANS_BUDGET")
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .unwrap_or(DEFAULT_BUDGET)
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerifyMode {
    Exhaustive,
    Sampled { trials: u64, seed: u64 },
}

/// How a verdict was reached.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "mode")]
pub enum Verification {
    Unverified,
    Exhaustive,
    Sampled { trials: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub verification: Verification,
    pub holds: bool,
    /// For intersecting families the failing tuple `(g_1, …, g_k)`; for
    /// covering checks an untranslatable `Y`, sorted.
    pub witness: Option<Vec<Element>>,
}

impl Verdict {
    fn exhaustive(witness: Option<Vec<Element>>) -> Self {
        Verdict {
            verification: Verification::Exhaustive,
            holds: witness.is_none(),
            witness,
        }
    }

    fn sampled(trials: u64, witness: Option<Vec<Element>>) -> Self {
        Verdict {
            verification: Verification::Sampled { trials },
            holds: witness.is_none(),
            witness,
        }
    }
}

fn check_family(g: &FiniteGroup, family: &[GroupSubset]) -> Result<()> {
    if family.is_empty() {
        return Err(Error::Precondition("family must have at least one member".into()));
    }
    if family.iter().any(|x| x.group().order() != g.order()) {
        return Err(Error::Precondition(format!("family members are not subsets of {g}")));
    }
    Ok(())
}

/// Steps an exhaustive intersecting-family check would take: `n^k`.
pub fn intersecting_cost(n: u64, k: usize) -> u128 {
    (n as u128).checked_pow(k as u32).unwrap_or(u128::MAX)
}

/// Does every choice of right translates `X_1 g_1, …, X_k g_k` share an element?
pub fn verify_intersecting(g: &FiniteGroup, family: &[GroupSubset], mode: VerifyMode) -> Result<Verdict> {
    check_family(g, family)?;
    match mode {
        VerifyMode::Exhaustive => {
            let needed = intersecting_cost(g.order(), family.len());
            if needed > budget() as u128 {
                return Err(Error::BudgetExceeded {
                    needed,
                    budget: budget(),
                });
            }
            Ok(Verdict::exhaustive(first_empty_intersection(g, family)))
        }
        VerifyMode::Sampled { trials, seed } => {
            let n = g.order();
            let k = family.len();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let tuples: Vec<Vec<Element>> = (0..trials)
                .map(|_| (0..k).map(|_| rng.gen_range(0..n)).collect())
                .collect();
            let members: Vec<Vec<Element>> = family.iter().map(|x| x.to_vec()).collect();
            let witness = tuples
                .par_iter()
                .find_first(|t| !translates_meet(g, family, &members[0], t))
                .cloned();
            Ok(Verdict::sampled(trials, witness))
        }
    }
}

/// Whether `∩ X_i t_i` is nonempty, scanning `X_1 t_1` for a common point.
fn translates_meet(g: &FiniteGroup, family: &[GroupSubset], first: &[Element], t: &[Element]) -> bool {
    let inv: Vec<Element> = t.iter().map(|&x| g.inv(x)).collect();
    first.iter().any(|&x| {
        let z = g.mul(x, t[0]);
        family[1..]
            .iter()
            .zip(&inv[1..])
            .all(|(xi, &gi)| xi.contains(g.mul(z, gi)))
    })
}

fn first_empty_intersection(g: &FiniteGroup, family: &[GroupSubset]) -> Option<Vec<Element>> {
    let n = g.order();
    let k = family.len();
    if k == 1 {
        // X_1 g is empty exactly when X_1 is.
        return family[0].is_empty().then(|| vec![0]);
    }
    let translates: Vec<Vec<BitSet>> = family
        .iter()
        .map(|x| (0..n).into_par_iter().map(|h| x.right_translate(h).bits().clone()).collect())
        .collect();
    (0..n).into_par_iter().find_map_first(|g1| {
        let mut prefix = vec![g1];
        let acc = translates[0][g1 as usize].clone();
        if !acc.any() {
            prefix.resize(k, 0);
            return Some(prefix);
        }
        descend(&translates, 1, &acc, &mut prefix)
    })
}

/// Depth-first search in lexicographic order. Once a prefix already has an
/// empty intersection, padding it with zeros is the smallest failing tuple.
fn descend(translates: &[Vec<BitSet>], depth: usize, acc: &BitSet, prefix: &mut Vec<Element>) -> Option<Vec<Element>> {
    let k = translates.len();
    let last = depth + 1 == k;
    for (h, t) in translates[depth].iter().enumerate() {
        if last {
            if !acc.intersects(t) {
                let mut w = prefix.clone();
                w.push(h as Element);
                return Some(w);
            }
            continue;
        }
        let mut next = acc.clone();
        next.and_assign(t);
        prefix.push(h as Element);
        if !next.any() {
            let mut w = prefix.clone();
            w.resize(k, 0);
            return Some(w);
        }
        if let Some(w) = descend(translates, depth + 1, &next, prefix) {
            return Some(w);
        }
        prefix.pop();
    }
    None
}

fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i + 1) as u128;
    }
    acc
}

/// Steps an exhaustive k-covering check takes. Only sets containing the
/// identity are enumerated (`Y` and `hY` are translatable together), so the
/// count is `C(n-1, k-1) · n`.
pub fn covering_cost(n: u64, k: u32) -> u128 {
    if k == 0 || k as u64 > n {
        return 0;
    }
    binomial(n - 1, k as u64 - 1).saturating_mul(n as u128)
}

/// Can every `k`-element subset be left-translated into `x`?
///
/// Exhaustive mode enumerates the sets `Y ∋ e` in lexicographic order; since
/// the identity has index 0 the first failure found is also the
/// lexicographically smallest failing `Y` overall. When that enumeration is
/// over budget and `k = 2`, the quotient-set criterion is used instead.
pub fn verify_k_covering(x: &GroupSubset, k: u32, mode: VerifyMode) -> Result<Verdict> {
    let g = x.group();
    let n = g.order();
    if k == 0 || k as u64 > n {
        let verification = match mode {
            VerifyMode::Exhaustive => Verification::Exhaustive,
            VerifyMode::Sampled { trials, .. } => Verification::Sampled { trials },
        };
        return Ok(Verdict {
            verification,
            holds: true,
            witness: None,
        });
    }
    match mode {
        VerifyMode::Exhaustive => {
            let needed = covering_cost(n, k);
            if needed > budget() as u128 {
                if k == 2 {
                    let quotient = left_quotient_set(x);
                    let witness = g.elements().find(|&d| !quotient.contains(d)).map(|d| vec![g.identity(), d]);
                    return Ok(Verdict::exhaustive(witness));
                }
                return Err(Error::BudgetExceeded {
                    needed,
                    budget: budget(),
                });
            }
            Ok(Verdict::exhaustive(first_untranslatable(x, k as usize)))
        }
        VerifyMode::Sampled { trials, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let ys: Vec<Vec<Element>> = (0..trials)
                .map(|_| {
                    let mut y: Vec<Element> = sample(&mut rng, n as usize, k as usize)
                        .into_iter()
                        .map(|i| i as Element)
                        .collect();
                    y.sort_unstable();
                    y
                })
                .collect();
            let witness = ys.par_iter().find_first(|y| translate_into(y, x).is_none()).cloned();
            Ok(Verdict::sampled(trials, witness))
        }
    }
}

fn first_untranslatable(x: &GroupSubset, k: usize) -> Option<Vec<Element>> {
    let g = x.group();
    let n = g.order();
    let e = g.identity();
    if k == 1 {
        return x.is_empty().then(|| vec![e]);
    }
    // shifted[y] = X y⁻¹, the set of g with g y ∈ X
    let shifted: Vec<BitSet> = (0..n)
        .into_par_iter()
        .map(|y| x.right_translate(g.inv(y)).bits().clone())
        .collect();
    let base = &shifted[e as usize];
    if !base.any() {
        let mut w: Vec<Element> = (0..k as u64).collect();
        w.sort_unstable();
        return Some(w);
    }
    (1..n).into_par_iter().find_map_first(|y2| {
        let mut acc = base.clone();
        acc.and_assign(&shifted[y2 as usize]);
        let mut prefix = vec![e, y2];
        if !acc.any() {
            return pad_combination(prefix, k, n);
        }
        if k == 2 {
            return None;
        }
        combinations_descend(&shifted, k, n, &acc, &mut prefix)
    })
}

/// Smallest completion of a failing prefix to a `k`-set, if one exists.
fn pad_combination(mut prefix: Vec<Element>, k: usize, n: u64) -> Option<Vec<Element>> {
    let mut next = *prefix.last().unwrap() + 1;
    while prefix.len() < k {
        if next >= n {
            return None;
        }
        prefix.push(next);
        next += 1;
    }
    Some(prefix)
}

fn combinations_descend(shifted: &[BitSet], k: usize, n: u64, acc: &BitSet, prefix: &mut Vec<Element>) -> Option<Vec<Element>> {
    let start = prefix.last().unwrap() + 1;
    let remaining = (k - prefix.len()) as u64;
    if start + remaining > n {
        return None;
    }
    for y in start..=n - remaining {
        let mut next = acc.clone();
        next.and_assign(&shifted[y as usize]);
        prefix.push(y);
        if !next.any() {
            if let Some(w) = pad_combination(prefix.clone(), k, n) {
                return Some(w);
            }
        } else if prefix.len() < k {
            if let Some(w) = combinations_descend(shifted, k, n, &next, prefix) {
                return Some(w);
            }
        }
        prefix.pop();
    }
    None
}

/// Smallest-index `g` with `gY ⊆ X`, if any.
pub fn translate_into(y: &[Element], x: &GroupSubset) -> Option<Element> {
    let g = x.group();
    if y.is_empty() {
        return Some(g.identity());
    }
    if y.len() > x.len() {
        return None;
    }
    g.elements().find(|&h| y.iter().all(|&yi| x.contains(g.mul(h, yi))))
}

/// `X⁻¹X = {a⁻¹b : a, b ∈ X}`
pub fn left_quotient_set(x: &GroupSubset) -> GroupSubset {
    let g = x.group();
    let members = x.to_vec();
    let mut out = GroupSubset::empty(g);
    for &a in &members {
        let ai = g.inv(a);
        for &b in &members {
            out.insert(g.mul(ai, b));
        }
    }
    out
}

/// Returns `(is 2-covering, X⁻¹X = G)`; the two always agree.
///
/// `gY ⊆ X` for `Y = {a, b}` means `a⁻¹b ∈ X⁻¹X`, so the quotient set taken on
/// the left is the exact criterion. In abelian groups it coincides with `XX⁻¹`.
pub fn two_covering_equiv_xxinv(x: &GroupSubset) -> Result<(bool, bool)> {
    let n = x.group().order();
    if n > 10_000 {
        return Err(Error::Precondition(format!("group order {n} exceeds 10^4")));
    }
    let covering = n < 2 || first_untranslatable(x, 2).is_none();
    let quotient = left_quotient_set(x).len() as u64 == n;
    Ok((covering, quotient))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(g: &FiniteGroup, xs: &[Element]) -> GroupSubset {
        GroupSubset::from_elements(g, xs.iter().copied()).unwrap()
    }

    #[test]
    fn full_sets_intersect() {
        let g = FiniteGroup::dihedral(5).unwrap();
        let fam = vec![GroupSubset::full(&g); 3];
        assert!(verify_intersecting(&g, &fam, VerifyMode::Exhaustive).unwrap().holds);
    }

    #[test]
    fn singletons_in_c2_fail() {
        let g = FiniteGroup::cyclic(2).unwrap();
        let fam = vec![set(&g, &[0]), set(&g, &[0])];
        let v = verify_intersecting(&g, &fam, VerifyMode::Exhaustive).unwrap();
        assert!(!v.holds);
        assert_eq!(v.witness, Some(vec![0, 1]));
    }

    #[test]
    fn quadratic_residues_mod_7() {
        let g = FiniteGroup::cyclic(7).unwrap();
        let x = set(&g, &[1, 2, 4]);
        let v = verify_intersecting(&g, &[x.clone(), x.clone()], VerifyMode::Exhaustive).unwrap();
        assert!(v.holds);
        assert_eq!(two_covering_equiv_xxinv(&x).unwrap(), (true, true));
        assert!(verify_k_covering(&x, 2, VerifyMode::Exhaustive).unwrap().holds);
    }

    #[test]
    fn empty_member_witness_is_padded() {
        let g = FiniteGroup::cyclic(5).unwrap();
        let fam = vec![GroupSubset::full(&g), GroupSubset::empty(&g), GroupSubset::full(&g)];
        let v = verify_intersecting(&g, &fam, VerifyMode::Exhaustive).unwrap();
        assert_eq!(v.witness, Some(vec![0, 0, 0]));
        let single = vec![GroupSubset::empty(&g)];
        assert_eq!(verify_intersecting(&g, &single, VerifyMode::Exhaustive).unwrap().witness, Some(vec![0]));
    }

    #[test]
    fn sampled_agrees_on_obvious_cases() {
        let g = FiniteGroup::cyclic(50).unwrap();
        let full = vec![GroupSubset::full(&g); 2];
        let mode = VerifyMode::Sampled { trials: 500, seed: 9 };
        let v = verify_intersecting(&g, &full, mode).unwrap();
        assert!(v.holds);
        assert_eq!(v.verification, Verification::Sampled { trials: 500 });
        let tiny = vec![set(&g, &[0]), set(&g, &[0])];
        assert!(!verify_intersecting(&g, &tiny, mode).unwrap().holds);
    }

    #[test]
    fn budget_guard() {
        let g = FiniteGroup::cyclic(1024).unwrap();
        let fam = vec![GroupSubset::full(&g); 3];
        assert!(matches!(
            verify_intersecting(&g, &fam, VerifyMode::Exhaustive),
            Err(Error::BudgetExceeded { .. })
        ));
        let big = FiniteGroup::cyclic(2000).unwrap();
        assert!(matches!(
            verify_k_covering(&GroupSubset::full(&big), 3, VerifyMode::Exhaustive),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn covering_examples() {
        let c4 = FiniteGroup::cyclic(4).unwrap();
        assert!(verify_k_covering(&GroupSubset::full(&c4), 3, VerifyMode::Exhaustive).unwrap().holds);
        assert!(!verify_k_covering(&GroupSubset::empty(&c4), 1, VerifyMode::Exhaustive).unwrap().holds);
        assert!(verify_k_covering(&set(&c4, &[0, 1, 2]), 2, VerifyMode::Exhaustive).unwrap().holds);
        let v = verify_k_covering(&set(&c4, &[0, 1]), 2, VerifyMode::Exhaustive).unwrap();
        assert!(!v.holds);
        assert_eq!(v.witness, Some(vec![0, 2]));
        assert_eq!(two_covering_equiv_xxinv(&set(&c4, &[0, 1])).unwrap(), (false, false));
    }

    #[test]
    fn witness_matches_brute_force_order() {
        // brute force over all k-sets in lexicographic order
        let g = FiniteGroup::dihedral(4).unwrap();
        let x = set(&g, &[0, 1, 4, 6]);
        let n = g.order();
        let mut first = None;
        'outer: for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    let ok = g.elements().any(|h| [a, b, c].iter().all(|&y| x.contains(g.mul(h, y))));
                    if !ok {
                        first = Some(vec![a, b, c]);
                        break 'outer;
                    }
                }
            }
        }
        let v = verify_k_covering(&x, 3, VerifyMode::Exhaustive).unwrap();
        assert_eq!(v.witness, first);
    }

    #[test]
    fn translate_into_examples() {
        let g = FiniteGroup::dihedral(6).unwrap();
        let x = set(&g, &[7]);
        let h = translate_into(&[3], &x).unwrap();
        assert_eq!(h, g.div(7, 3));
        let full = GroupSubset::full(&g);
        let all: Vec<Element> = g.elements().collect();
        assert_eq!(translate_into(&all, &full), Some(0));
        assert_eq!(translate_into(&[0, 1], &x), None);
        assert_eq!(translate_into(&[], &x), Some(0));
    }

    #[test]
    fn nonabelian_criterion_is_left_quotient() {
        let g = FiniteGroup::symmetric(3).unwrap();
        for mask in 0u32..64 {
            let x = set(&g, &(0..6).filter(|i| mask >> i & 1 == 1).collect::<Vec<_>>());
            let (cov, quot) = two_covering_equiv_xxinv(&x).unwrap();
            assert_eq!(cov, quot, "mask {mask}");
        }
    }
}
