//! Certificate documents for intersecting families and k-covering sets, and
//! their independent re-verification.

use serde::{Deserialize, Serialize};

use super::descriptor::{parse_group, ModeArg};
use super::run::RunConfig;
use crate::covering::{
    budget, covering_cost, intersecting_cost, sample_probability, verify_intersecting, verify_k_covering,
    CoveringCertificate, IntersectingFamily, Verdict, Verification, VerifyMode, DEFAULT_TRIALS,
};
use crate::error::{Error, Result};
use crate::group::{Element, FiniteGroup};
use crate::round::sig12;
use crate::subset::GroupSubset;

pub const FAMILY_KIND: &str = "intersecting-family";
pub const COVERING_KIND: &str = "k-covering";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationDocument {
    pub mode: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trials: Option<u64>,
    pub result: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<Element>>,
}

impl VerificationDocument {
    pub fn from_verdict(v: &Verdict) -> Self {
        let (mode, trials) = match v.verification {
            Verification::Unverified => ("unverified", None),
            Verification::Exhaustive => ("exhaustive", None),
            Verification::Sampled { trials } => ("sampled", Some(trials)),
        };
        VerificationDocument {
            mode: mode.into(),
            trials,
            result: v.holds,
            witness: v.witness.clone(),
        }
    }
}

/// Field order is part of the format.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateDocument {
    pub kind: String,
    pub group: String,
    pub k: u32,
    pub p: f64,
    pub seed: u64,
    pub attempts: u32,
    pub sizes: Vec<usize>,
    pub verification: VerificationDocument,
    pub size_cap: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub drawn_sizes: Option<Vec<usize>>,
    pub subsets: Vec<Vec<Element>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub set: Option<Vec<Element>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub set_size: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub size_bound: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub run: Option<RunConfig>,
}

impl CertificateDocument {
    pub fn from_family(f: &IntersectingFamily, run: Option<RunConfig>) -> Self {
        CertificateDocument {
            kind: FAMILY_KIND.into(),
            group: f.group.descriptor(),
            k: f.k(),
            p: sig12(f.params.p),
            seed: f.seed,
            attempts: f.attempts_used,
            sizes: f.sizes(),
            verification: VerificationDocument::from_verdict(&f.verdict),
            size_cap: sig12(f.params.size_cap),
            l: f.params.target_size,
            drawn_sizes: f.params.target_size.map(|_| f.drawn_sizes.clone()),
            subsets: f.subsets.iter().map(GroupSubset::to_vec).collect(),
            set: None,
            set_size: None,
            size_bound: None,
            run,
        }
    }

    pub fn from_covering(c: &CoveringCertificate, run: Option<RunConfig>) -> Self {
        let mut doc = Self::from_family(&c.family, None);
        doc.kind = COVERING_KIND.into();
        doc.verification = VerificationDocument::from_verdict(&c.verdict);
        doc.size_cap = sig12(covering_cap(c.group().order(), c.k(), c.family.params.size_cap));
        doc.set = Some(c.set.to_vec());
        doc.set_size = Some(c.set.len());
        doc.size_bound = Some(c.size_bound);
        doc.run = run;
        doc
    }
}

fn covering_cap(n: u64, k: u32, family_cap: f64) -> f64 {
    family_cap.min(n as f64 / (2.0 * k as f64))
}

/// Outcome of re-verifying a certificate from its listed elements alone.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub kind: String,
    pub certificate: String,
    pub group: String,
    pub k: u32,
    pub verification: VerificationDocument,
    /// Member sizes (and the covering set size) within their stated caps.
    pub sizes_ok: bool,
    pub recorded_result: bool,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.verification.result && self.sizes_ok
    }
}

fn listed_subset(g: &FiniteGroup, what: &str, xs: &[Element]) -> Result<GroupSubset> {
    if xs.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Integrity(format!("{what} is not sorted and duplicate-free")));
    }
    if let Some(&x) = xs.iter().find(|&&x| x >= g.order()) {
        return Err(Error::Integrity(format!("{what} lists {x}, outside {g}")));
    }
    GroupSubset::from_elements(g, xs.iter().copied())
}

fn auto_mode(cost: u128, mode: Option<ModeArg>, seed: u64) -> Result<VerifyMode> {
    match mode {
        Some(m) => Ok(m.to_mode(seed)),
        None if cost <= budget() as u128 => Ok(VerifyMode::Exhaustive),
        None => Ok(VerifyMode::Sampled {
            trials: DEFAULT_TRIALS,
            seed,
        }),
    }
}

/// Checks internal consistency, then re-runs verification ignoring the
/// recorded verdict. `seed` drives sampled verification; it defaults to the
/// certificate's own seed.
pub fn verify_document(doc: &CertificateDocument, mode: Option<ModeArg>, seed: Option<u64>) -> Result<VerifyReport> {
    let g = parse_group(&doc.group).map_err(|e| Error::Integrity(format!("group {:?}: {e}", doc.group)))?;
    let n = g.order();
    if doc.kind != FAMILY_KIND && doc.kind != COVERING_KIND {
        return Err(Error::Integrity(format!("unknown certificate kind {:?}", doc.kind)));
    }
    if doc.k == 0 {
        return Err(Error::Integrity("k must be at least 1".into()));
    }
    if doc.subsets.len() != doc.k as usize {
        return Err(Error::Integrity(format!("{} members listed for k = {}", doc.subsets.len(), doc.k)));
    }
    if doc.sizes.len() != doc.subsets.len() {
        return Err(Error::Integrity(format!(
            "{} sizes for {} members",
            doc.sizes.len(),
            doc.subsets.len()
        )));
    }
    let mut members = Vec::with_capacity(doc.subsets.len());
    for (i, (xs, &size)) in doc.subsets.iter().zip(&doc.sizes).enumerate() {
        if xs.len() != size {
            return Err(Error::Integrity(format!("member {} lists {} elements but its size is {size}", i + 1, xs.len())));
        }
        members.push(listed_subset(&g, &format!("member {}", i + 1), xs)?);
    }
    let p = sample_probability(n, doc.k).map_err(|e| Error::Integrity(e.to_string()))?;
    if sig12(p) != doc.p {
        return Err(Error::Integrity(format!("p = {} but recomputes to {}", doc.p, sig12(p))));
    }
    let family_cap = 2.0 * p * n as f64;
    let seed = seed.unwrap_or(doc.seed);

    let (verdict, sizes_ok) = if doc.kind == FAMILY_KIND {
        if sig12(family_cap) != doc.size_cap {
            return Err(Error::Integrity(format!("size cap {} but recomputes to {}", doc.size_cap, sig12(family_cap))));
        }
        let sizes_ok = match (doc.l, &doc.drawn_sizes) {
            (None, None) => doc.sizes.iter().all(|&s| s as f64 <= family_cap),
            (Some(l), Some(drawn)) if drawn.len() == doc.sizes.len() => {
                doc.sizes.iter().all(|&s| s as u64 == l) && drawn.iter().all(|&s| s as f64 <= family_cap)
            }
            _ => return Err(Error::Integrity("target size and drawn sizes must appear together".into())),
        };
        let mode = auto_mode(intersecting_cost(n, doc.k as usize), mode, seed)?;
        (verify_intersecting(&g, &members, mode)?, sizes_ok)
    } else {
        let cap = covering_cap(n, doc.k, family_cap);
        if sig12(cap) != doc.size_cap {
            return Err(Error::Integrity(format!("size cap {} but recomputes to {}", doc.size_cap, sig12(cap))));
        }
        let (Some(list), Some(size), Some(bound)) = (&doc.set, doc.set_size, doc.size_bound) else {
            return Err(Error::Integrity("covering certificate without set, set_size and size_bound".into()));
        };
        if list.len() != size {
            return Err(Error::Integrity(format!("set lists {} elements but its size is {size}", list.len())));
        }
        if bound != n as f64 / 2.0 {
            return Err(Error::Integrity(format!("size bound {bound} is not n/2")));
        }
        let set = listed_subset(&g, "set", list)?;
        let sizes_ok = doc.sizes.iter().all(|&s| s as f64 <= cap) && set.len() as f64 <= bound;
        let cost = covering_cost(n, doc.k);
        let mode = match mode {
            None if doc.k == 2 => VerifyMode::Exhaustive,
            m => auto_mode(cost, m, seed)?,
        };
        (verify_k_covering(&set, doc.k, mode)?, sizes_ok)
    };
    Ok(VerifyReport {
        kind: "verdict".into(),
        certificate: doc.kind.clone(),
        group: doc.group.clone(),
        k: doc.k,
        verification: VerificationDocument::from_verdict(&verdict),
        sizes_ok,
        recorded_result: doc.verification.result,
    })
}
