//! Closed-form parameters of the random construction and of the covering bounds.
//!
//! `log` is the natural logarithm everywhere.

use std::f64::consts::LN_2;

use crate::error::{Error, Result};

fn check_order(n: u64) -> Result<()> {
    if n < 3 {
        return Err(Error::Infeasible(format!("group order {n} < 3")));
    }
    Ok(())
}

/// Whether `k < (n - log 2) / log n`, the range in which `k` random subsets
/// have the intersection property with positive probability.
pub fn feasibility(n: u64, k: u32) -> Result<bool> {
    check_order(n)?;
    if k == 0 {
        return Err(Error::Infeasible("k must be at least 1".into()));
    }
    let n = n as f64;
    Ok((k as f64) < (n - LN_2) / n.ln())
}

/// `p = ((k log n + log 2) / n)^(1/k)`
pub fn sample_probability(n: u64, k: u32) -> Result<f64> {
    if !feasibility(n, k)? {
        return Err(Error::Infeasible(format!("k = {k} is too large for n = {n}")));
    }
    let (nf, kf) = (n as f64, k as f64);
    Ok(((kf * nf.ln() + LN_2) / nf).powf(1.0 / kf))
}

/// `2 (k log n + log 2)^(1/k) n^(1 - 1/k)`, which equals `2pn`. Target sizes
/// for enlargement must lie strictly above this and at most `n`.
pub fn size_threshold(n: u64, k: u32) -> f64 {
    let (nf, kf) = (n as f64, k as f64);
    2.0 * (kf * nf.ln() + LN_2).powf(1.0 / kf) * nf.powf(1.0 - 1.0 / kf)
}

/// Left side of `(4k)^k (k log n + log 2) < n`.
pub fn covering_condition_lhs(n: u64, k: u32) -> f64 {
    let kf = k as f64;
    (4.0 * kf).powi(k as i32) * (kf * (n as f64).ln() + LN_2)
}

/// Whether a `k`-covering set of size at most `n/2` is guaranteed.
pub fn covering_condition(n: u64, k: u32) -> bool {
    covering_condition_lhs(n, k) < n as f64
}

/// `(n^(1-1/k), min(n, 2k (k log n + log 2)^(1/k) n^(1-1/k)))`
pub fn cov_bounds(n: u64, k: u32) -> Result<(f64, f64)> {
    check_order(n)?;
    if k == 0 {
        return Err(Error::Infeasible("k must be at least 1".into()));
    }
    let (nf, kf) = (n as f64, k as f64);
    let lower = nf.powf(1.0 - 1.0 / kf);
    let upper = kf * size_threshold(n, k);
    Ok((lower, upper.min(nf)))
}

/// Parameters of one randomized construction of an intersecting family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GazdagParams {
    pub n: u64,
    pub k: u32,
    pub p: f64,
    /// `2pn`; every accepted member must satisfy `|X_i| <= size_cap` as reals.
    pub size_cap: f64,
    pub target_size: Option<u64>,
}

impl GazdagParams {
    pub fn new(n: u64, k: u32, target_size: Option<u64>) -> Result<Self> {
        let p = sample_probability(n, k)?;
        let size_cap = 2.0 * p * n as f64;
        if let Some(l) = target_size {
            let lo = size_threshold(n, k);
            if !((l as f64) > lo && l <= n) {
                return Err(Error::Precondition(format!(
                    "target size {l} must satisfy {lo:.3} < l <= {n}"
                )));
            }
        }
        Ok(GazdagParams {
            n,
            k,
            p,
            size_cap,
            target_size,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn feasibility_examples() {
        assert!(feasibility(100, 2).unwrap());
        assert!(feasibility(1024, 2).unwrap());
        assert!(!feasibility(3, 3).unwrap());
        assert!(feasibility(3, 2).unwrap());
        assert!(feasibility(2, 1).is_err());
    }

    #[test]
    fn probability_examples() {
        assert!((sample_probability(100, 2).unwrap() - 0.31470).abs() < 5e-6);
        assert!((sample_probability(512, 2).unwrap() - 0.16038).abs() < 5e-6);
        let n = 77u64;
        let direct = ((n as f64).ln() + LN_2) / n as f64;
        assert!((sample_probability(n, 1).unwrap() - direct).abs() < 1e-15);
        assert!(sample_probability(3, 3).is_err());
    }

    #[test]
    fn probability_below_one_when_feasible() {
        for n in 3..2000u64 {
            for k in 1..12 {
                if feasibility(n, k).unwrap() {
                    let p = sample_probability(n, k).unwrap();
                    assert!(p > 0.0 && p < 1.0, "n={n} k={k} p={p}");
                }
            }
        }
    }

    #[test]
    fn size_cap_for_512() {
        let g = GazdagParams::new(512, 2, None).unwrap();
        assert!((g.size_cap - 164.2307617).abs() < 1e-6);
        assert!((size_threshold(512, 2) - g.size_cap).abs() < 1e-9);
    }

    #[test]
    fn target_size_range() {
        assert!(GazdagParams::new(1024, 2, Some(512)).is_ok());
        assert!(GazdagParams::new(1024, 2, Some(1024)).is_ok());
        assert!(GazdagParams::new(1024, 2, Some(244)).is_err());
        assert!(GazdagParams::new(1024, 2, Some(1025)).is_err());
    }

    #[test]
    fn covering_condition_examples() {
        assert!((covering_condition_lhs(1024, 2) - 931.5898).abs() < 1e-3);
        assert!(covering_condition(1024, 2));
        assert!((covering_condition_lhs(131072, 3) - 62283.433).abs() < 1e-2);
        assert!(covering_condition(131072, 3));
        assert!((covering_condition_lhs(64, 2) - 576.698).abs() < 1e-2);
        assert!(!covering_condition(64, 2));
        assert!((covering_condition_lhs(20, 1) - 14.7555).abs() < 1e-3);
    }

    #[test]
    fn bound_examples() {
        assert_eq!(cov_bounds(4, 2).unwrap().0, 2.0);
        assert!((cov_bounds(7, 2).unwrap().0 - 2.6457513).abs() < 1e-6);
        let (lo, hi) = cov_bounds(1000, 1).unwrap();
        assert_eq!(lo, 1.0);
        assert!(hi <= 1000.0);
        assert_eq!(cov_bounds(7, 2).unwrap().1, 7.0);
    }
}
