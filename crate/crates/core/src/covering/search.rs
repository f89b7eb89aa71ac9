//! Exact minimum covering sets for tiny groups, and the greedy argument
//! behind the lower bound `cov(G, k) >= n^(1-1/k)`.

use super::verify::{verify_k_covering, VerifyMode};
use crate::error::{Error, Result};
use crate::group::{Element, FiniteGroup};
use crate::subset::GroupSubset;

pub const EXACT_COV_MAX_ORDER: u64 = 16;
pub const GREEDY_MAX_ORDER: u64 = 10_000;

/// Size of a smallest `k`-covering subset, by trying sizes `1, 2, …` and
/// subsets in lexicographic order within a size.
pub fn exact_cov(g: &FiniteGroup, k: u32) -> Result<usize> {
    let n = g.order();
    if n > EXACT_COV_MAX_ORDER {
        return Err(Error::Precondition(format!(
            "exact search limited to order {EXACT_COV_MAX_ORDER}, got {n}"
        )));
    }
    if k == 0 || k as u64 > n {
        return Err(Error::Precondition(format!("need 1 <= k <= n, got k = {k}, n = {n}")));
    }
    exact_cov_witness(g, k).map(|x| x.len())
}

/// A lexicographically first minimum `k`-covering subset.
pub fn exact_cov_witness(g: &FiniteGroup, k: u32) -> Result<GroupSubset> {
    let n = g.order() as usize;
    for s in 1..=n {
        let mut comb: Vec<usize> = (0..s).collect();
        loop {
            let x = GroupSubset::from_elements(g, comb.iter().map(|&i| i as Element))?;
            if verify_k_covering(&x, k, VerifyMode::Exhaustive)?.holds {
                return Ok(x);
            }
            if !next_combination(&mut comb, n) {
                break;
            }
        }
    }
    Ok(GroupSubset::full(g))
}

fn next_combination(comb: &mut [usize], n: usize) -> bool {
    let s = comb.len();
    let Some(i) = (0..s).rev().find(|&i| comb[i] < n - s + i) else {
        return false;
    };
    comb[i] += 1;
    for j in i + 1..s {
        comb[j] = comb[j - 1] + 1;
    }
    true
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GreedyShrink {
    /// `g_1 = e, g_2, …, g_k`
    pub tuple: Vec<Element>,
    /// `|X g_1 ∩ … ∩ X g_j|` for `j = 1..=k`.
    pub sizes: Vec<usize>,
}

impl GreedyShrink {
    pub fn final_size(&self) -> usize {
        *self.sizes.last().unwrap()
    }
}

/// Starting from `X`, repeatedly intersects with the right translate `X g`
/// that leaves the fewest elements (ties to the smallest `g`).
///
/// Averaging over `g` gives `|A ∩ Xg| = |A||X|/n`, so each step lands at or
/// below `⌊|A||X|/n⌋`.
pub fn greedy_shrink_intersection(x: &GroupSubset, k: u32) -> Result<GreedyShrink> {
    let g = x.group();
    let n = g.order();
    if n > GREEDY_MAX_ORDER {
        return Err(Error::Precondition(format!("greedy shrink limited to order {GREEDY_MAX_ORDER}")));
    }
    if k == 0 {
        return Err(Error::Precondition("k must be at least 1".into()));
    }
    let translates: Vec<GroupSubset> = g.elements().map(|h| x.right_translate(h)).collect();
    let mut current = x.clone();
    let mut tuple = vec![g.identity()];
    let mut sizes = vec![current.len()];
    for _ in 1..k {
        let (best, _) = translates
            .iter()
            .enumerate()
            .map(|(h, t)| (h, current.bits().intersection_count(t.bits())))
            .min_by_key(|&(h, c)| (c, h))
            .unwrap();
        current = current.intersection(&translates[best]);
        tuple.push(best as Element);
        sizes.push(current.len());
    }
    Ok(GreedyShrink { tuple, sizes })
}
