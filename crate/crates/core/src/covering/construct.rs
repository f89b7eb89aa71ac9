//! Randomized construction of intersecting families and k-covering sets.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::params::{covering_condition, covering_condition_lhs, GazdagParams};
use super::verify::{
    budget, covering_cost, intersecting_cost, left_quotient_set, verify_intersecting, verify_k_covering, Verdict,
    VerifyMode, DEFAULT_TRIALS,
};
use crate::error::{AttemptDiagnostics, Error, Result};
use crate::group::{Element, FiniteGroup};
use crate::subset::GroupSubset;

pub const DEFAULT_MAX_ATTEMPTS: u32 = 100;

/// Each element joins independently with probability `p`.
pub fn random_subset<R: Rng + ?Sized>(g: &FiniteGroup, p: f64, rng: &mut R) -> GroupSubset {
    let p = p.clamp(0.0, 1.0);
    let mut s = GroupSubset::empty(g);
    for x in g.elements() {
        if rng.gen_bool(p) {
            s.insert(x);
        }
    }
    s
}

/// Generator for attempt `attempt` under `seed`: one ChaCha stream per attempt.
pub fn attempt_rng(seed: u64, attempt: u32) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(attempt as u64);
    rng
}

#[derive(Debug, Clone)]
pub struct ConstructOptions {
    pub target_size: Option<u64>,
    pub max_attempts: u32,
    /// `None` picks exhaustive when affordable, otherwise sampled.
    pub mode: Option<VerifyMode>,
    pub sampled_trials: u64,
}

impl Default for ConstructOptions {
    fn default() -> Self {
        ConstructOptions {
            target_size: None,
            max_attempts: DEFAULT_MAX_ATTEMPTS,
            mode: None,
            sampled_trials: DEFAULT_TRIALS,
        }
    }
}

#[derive(Debug, Clone)]
pub struct IntersectingFamily {
    pub group: FiniteGroup,
    pub params: GazdagParams,
    pub subsets: Vec<GroupSubset>,
    /// Member sizes as drawn, before any enlargement.
    pub drawn_sizes: Vec<usize>,
    pub attempts_used: u32,
    pub seed: u64,
    pub verdict: Verdict,
}

impl IntersectingFamily {
    pub fn k(&self) -> u32 {
        self.params.k
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.subsets.iter().map(GroupSubset::len).collect()
    }
}

#[derive(Debug, Clone)]
pub struct CoveringCertificate {
    pub family: IntersectingFamily,
    pub set: GroupSubset,
    /// `n / 2`
    pub size_bound: f64,
    pub verdict: Verdict,
}

impl CoveringCertificate {
    pub fn group(&self) -> &FiniteGroup {
        &self.family.group
    }

    pub fn k(&self) -> u32 {
        self.family.k()
    }
}

fn resolve_mode(explicit: Option<VerifyMode>, needed: u128, trials: u64, seed: u64) -> Result<VerifyMode> {
    match explicit {
        Some(VerifyMode::Exhaustive) if needed > budget() as u128 => Err(Error::BudgetExceeded {
            needed,
            budget: budget(),
        }),
        Some(m) => Ok(m),
        None if needed <= budget() as u128 => Ok(VerifyMode::Exhaustive),
        None => Ok(VerifyMode::Sampled { trials, seed }),
    }
}

/// Draws `k` random subsets until one draw has every member within the size
/// cap and passes verification, then enlarges members to the target size.
pub fn construct_intersecting_family(
    g: &FiniteGroup,
    k: u32,
    seed: u64,
    opts: &ConstructOptions,
) -> Result<IntersectingFamily> {
    let params = GazdagParams::new(g.order(), k, opts.target_size)?;
    construct_capped(g, params, params.size_cap, seed, opts)
}

fn construct_capped(
    g: &FiniteGroup,
    params: GazdagParams,
    cap: f64,
    seed: u64,
    opts: &ConstructOptions,
) -> Result<IntersectingFamily> {
    let k = params.k;
    let needed = intersecting_cost(g.order(), k as usize);
    // fail on an unaffordable explicit mode before drawing anything
    resolve_mode(opts.mode, needed, opts.sampled_trials, 0)?;
    let mut diagnostics = AttemptDiagnostics {
        sizes_seen: Vec::new(),
        size_cap: cap,
        first_failing_tuple: None,
    };
    for attempt in 0..opts.max_attempts {
        let mut rng = attempt_rng(seed, attempt);
        let subsets: Vec<GroupSubset> = (0..k).map(|_| random_subset(g, params.p, &mut rng)).collect();
        let sizes: Vec<usize> = subsets.iter().map(GroupSubset::len).collect();
        if sizes.iter().any(|&s| s as f64 > cap) {
            diagnostics.sizes_seen.push(sizes);
            continue;
        }
        let mode = resolve_mode(opts.mode, needed, opts.sampled_trials, rng.next_u64())?;
        let verdict = verify_intersecting(g, &subsets, mode)?;
        if !verdict.holds {
            diagnostics.sizes_seen.push(sizes);
            if diagnostics.first_failing_tuple.is_none() {
                diagnostics.first_failing_tuple = verdict.witness.clone();
            }
            continue;
        }
        let mut subsets = subsets;
        if let Some(l) = params.target_size {
            for x in &mut subsets {
                x.enlarge_to(l as usize);
            }
        }
        return Ok(IntersectingFamily {
            group: g.clone(),
            params,
            subsets,
            drawn_sizes: sizes,
            attempts_used: attempt + 1,
            seed,
            verdict,
        });
    }
    Err(Error::AttemptsExhausted {
        attempts: opts.max_attempts,
        diagnostics: Box::new(diagnostics),
    })
}

/// Union of an intersecting family whose members have at most `n/(2k)`
/// elements; needs `(4k)^k (k log n + log 2) < n`.
pub fn construct_k_covering(g: &FiniteGroup, k: u32, seed: u64, opts: &ConstructOptions) -> Result<CoveringCertificate> {
    let n = g.order();
    if n < 3 || k == 0 {
        return Err(Error::Precondition(format!("need n >= 3 and k >= 1, got n = {n}, k = {k}")));
    }
    if !covering_condition(n, k) {
        let lhs = covering_condition_lhs(n, k);
        return Err(Error::Precondition(format!(
            "(4k)^k (k log n + log 2) = {lhs:.3} is not below n = {n} (slack {:.3})",
            n as f64 - lhs
        )));
    }
    let params = GazdagParams::new(n, k, None)?;
    let cap = params.size_cap.min(n as f64 / (2.0 * k as f64));
    let mut opts = opts.clone();
    opts.target_size = None;
    let family = construct_capped(g, params, cap, seed, &opts)?;

    let set = family.subsets.iter().fold(GroupSubset::empty(g), |acc, x| acc.union(x));
    let size_bound = n as f64 / 2.0;
    if set.len() as f64 > size_bound {
        return Err(Error::Soundness(format!("union has {} > n/2 elements", set.len())));
    }
    let verdict = if k == 2 {
        quotient_verdict(&set)
    } else {
        let mut rng = attempt_rng(seed, family.attempts_used);
        let mode = resolve_mode(opts.mode, covering_cost(n, k), opts.sampled_trials, rng.next_u64())?;
        verify_k_covering(&set, k, mode)?
    };
    Ok(CoveringCertificate {
        family,
        set,
        size_bound,
        verdict,
    })
}

/// Exhaustive 2-covering verdict from `X⁻¹X = G`, in `O(|X|²)`.
pub fn quotient_verdict(x: &GroupSubset) -> Verdict {
    let g = x.group();
    let q = left_quotient_set(x);
    let witness = g.elements().find(|&d| !q.contains(d)).map(|d| vec![g.identity(), d]);
    Verdict {
        verification: super::verify::Verification::Exhaustive,
        holds: witness.is_none(),
        witness,
    }
}

/// Members as sorted element lists.
pub fn member_lists(family: &IntersectingFamily) -> Vec<Vec<Element>> {
    family.subsets.iter().map(GroupSubset::to_vec).collect()
}
