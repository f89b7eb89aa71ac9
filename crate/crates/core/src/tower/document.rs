//! Serialized form of a built tower.
//!
//! The document holds the kernel orders, the master and per-stage seeds and
//! every `L_i` as a sorted list of kernel indices. Together with the section
//! convention this fixes membership in every `X_i` exactly.

use serde::{Deserialize, Serialize};

use super::build::{StageClaims, Tower};
use super::extend::KernelCover;
use super::spec::TowerSpec;
use crate::covering::Verification;
use crate::error::{Error, Result};
use crate::group::Element;
use crate::round::sig12;
use crate::subset::GroupSubset;

/// Sections send `h ∈ C_m` to the integer `h ∈ [0, m)` read in the larger cyclic group.
pub const SECTION_CONVENTION: &str = "least-nonnegative-representative";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClaimsDocument {
    pub projection: bool,
    pub projection_check: Verification,
    pub size_exact: bool,
    pub measure_bound: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StageDocument {
    pub index: usize,
    pub group_order: u64,
    pub kernel_order: Option<u64>,
    /// Covering degree of `L_i` inside the kernel.
    pub cover_degree: Option<u32>,
    pub seed: Option<u64>,
    pub attempts: Option<u32>,
    pub cover_verification: Option<Verification>,
    pub cover: Vec<Element>,
    pub size: u64,
    /// `|X_i|/|G_i|` as an unreduced fraction.
    pub measure: String,
    pub measure_value: f64,
    pub measure_limit: String,
    pub claims: ClaimsDocument,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TowerDocument {
    pub kind: String,
    pub spec: String,
    pub kernel_orders: Vec<u64>,
    pub seed: u64,
    pub section: String,
    pub stages: Vec<StageDocument>,
}

impl Tower {
    pub fn to_document(&self) -> TowerDocument {
        let claims = self.claims();
        let stages = self
            .stages()
            .iter()
            .map(|s| {
                let i = s.index;
                let order = self.spec().group(i).order();
                let c: &StageClaims = &claims[i];
                StageDocument {
                    index: i,
                    group_order: order,
                    kernel_order: (i > 0).then(|| self.spec().kernel_orders()[i - 1]),
                    cover_degree: (i > 0).then_some(i as u32),
                    seed: s.seed,
                    attempts: s.attempts(),
                    cover_verification: s.cover_verification(),
                    cover: s.cover_elements.clone(),
                    size: s.size as u64,
                    measure: format!("{}/{}", s.size, order),
                    measure_value: sig12(s.size as f64 / order as f64),
                    measure_limit: format!("1/{}", 1u128 << i),
                    claims: ClaimsDocument {
                        projection: c.projection_ok,
                        projection_check: c.projection_check,
                        size_exact: c.size_exact,
                        measure_bound: c.measure_ok,
                    },
                }
            })
            .collect();
        TowerDocument {
            kind: "tower".into(),
            spec: self.spec().descriptor(),
            kernel_orders: self.spec().kernel_orders().to_vec(),
            seed: self.seed(),
            section: SECTION_CONVENTION.into(),
            stages,
        }
    }

    /// Rebuilds the tower from its document and checks that every recorded
    /// field agrees with the recomputation.
    pub fn from_document(doc: &TowerDocument) -> Result<Tower> {
        if doc.section != SECTION_CONVENTION {
            return Err(Error::Integrity(format!("unknown section convention {:?}", doc.section)));
        }
        let spec = TowerSpec::new(&doc.kernel_orders)?;
        if spec.descriptor() != doc.spec {
            return Err(Error::Integrity(format!("spec {:?} disagrees with kernel orders", doc.spec)));
        }
        if doc.stages.len() != spec.depth() + 1 {
            return Err(Error::Integrity(format!(
                "{} stages listed for depth {}",
                doc.stages.len(),
                spec.depth()
            )));
        }
        let mut covers = Vec::with_capacity(spec.depth());
        for (i, stage) in doc.stages.iter().enumerate().skip(1) {
            let kernel = spec.step(i).kernel_group();
            if stage.cover.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::Integrity(format!("stage {i} cover is not sorted and unique")));
            }
            if let Some(&x) = stage.cover.iter().find(|&&x| x >= kernel.order()) {
                return Err(Error::Integrity(format!("stage {i} cover element {x} outside the kernel")));
            }
            covers.push(KernelCover {
                set: GroupSubset::from_elements(kernel, stage.cover.iter().copied())?,
                certificate: None,
                attempts: stage.attempts,
                verification: stage.cover_verification,
            });
        }
        let tower = Tower::assemble(spec, doc.seed, covers)?;
        let rebuilt = tower.to_document();
        if let Some((a, b)) = rebuilt.stages.iter().zip(&doc.stages).find(|(a, b)| a != b) {
            return Err(Error::Integrity(format!(
                "stage {} fields disagree with the listed cover (recomputed {:?}, recorded {:?})",
                a.index, a.measure, b.measure
            )));
        }
        if rebuilt != *doc {
            return Err(Error::Integrity("document fields disagree with recomputation".into()));
        }
        Ok(tower)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covering::ConstructOptions;
    use crate::tower::build_tower;

    #[test]
    fn round_trip_is_byte_identical() {
        let spec = TowerSpec::new(&[20, 1024]).unwrap();
        let t = build_tower(&spec, 3, &ConstructOptions::default()).unwrap();
        let doc = t.to_document();
        assert_eq!(doc.stages[2].measure_limit, "1/4");
        let text = serde_json::to_string_pretty(&doc).unwrap();
        let back: TowerDocument = serde_json::from_str(&text).unwrap();
        let t2 = Tower::from_document(&back).unwrap();
        assert_eq!(serde_json::to_string_pretty(&t2.to_document()).unwrap(), text);
        for x in (0..20480).step_by(7) {
            assert_eq!(t.membership(2, x), t2.membership(2, x));
        }
    }

    #[test]
    fn tampering_is_detected() {
        let spec = TowerSpec::new(&[20, 1024]).unwrap();
        let doc = build_tower(&spec, 3, &ConstructOptions::default()).unwrap().to_document();

        let mut bad = doc.clone();
        bad.stages[2].cover.pop();
        assert!(matches!(Tower::from_document(&bad), Err(Error::Integrity(_))));

        let mut bad = doc.clone();
        bad.stages[2].cover.push(5000);
        assert!(matches!(Tower::from_document(&bad), Err(Error::Integrity(_))));

        let mut bad = doc.clone();
        bad.seed ^= 1;
        assert!(matches!(Tower::from_document(&bad), Err(Error::Integrity(_))));

        let mut bad = doc;
        bad.spec = "tower:20,1025".into();
        assert!(matches!(Tower::from_document(&bad), Err(Error::Integrity(_))));
    }
}
