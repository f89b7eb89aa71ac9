//! Staged construction of `X_0, X_1, …, X_d` along a quotient chain.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::extend::{kernel_cover, KernelCover};
use super::spec::TowerSpec;
use crate::covering::{ConstructOptions, Verification};
use crate::error::{Error, Result};
use crate::group::Element;
use crate::subset::{GroupSubset, DENSE_LIMIT};

/// Samples drawn per stage when a stage set is too large to enumerate.
pub const CLAIM_SAMPLES: u64 = 100_000;

#[derive(Debug, Clone)]
pub struct TowerStage {
    pub index: usize,
    /// `L_i ⊆ ker π_i` as kernel indices; `None` at stage 0.
    pub cover: Option<KernelCover>,
    pub cover_elements: Vec<Element>,
    pub seed: Option<u64>,
    /// `|X_i|`, exact.
    pub size: u128,
    /// `X_i` enumerated, when `|G_i| <= 2^27`.
    pub dense: Option<GroupSubset>,
}

impl TowerStage {
    /// `2^i |X_i| <= |G_i|`
    pub fn within_measure_bound(&self, group_order: u64) -> bool {
        self.size.checked_shl(self.index as u32).is_some_and(|s| s <= group_order as u128)
    }

    pub fn attempts(&self) -> Option<u32> {
        self.cover.as_ref().and_then(|c| c.attempts)
    }

    pub fn cover_verification(&self) -> Option<Verification> {
        self.cover.as_ref().and_then(|c| c.verification)
    }
}

/// Outcome of checking one stage.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StageClaims {
    pub stage: usize,
    /// `π_i(X_i) ⊆ X_{i-1}`
    pub projection_ok: bool,
    pub projection_check: Verification,
    /// `|X_i| = |L_i|·|X_{i-1}|`, confirmed against the dense set when there is one.
    pub size_exact: bool,
    /// `|X_i| <= |G_i| / 2^i`
    pub measure_ok: bool,
}

impl StageClaims {
    pub fn all_hold(&self) -> bool {
        self.projection_ok && self.size_exact && self.measure_ok
    }
}

#[derive(Debug, Clone)]
pub struct Tower {
    spec: TowerSpec,
    seed: u64,
    stages: Vec<TowerStage>,
    claims: Vec<StageClaims>,
}

fn stage_seeds(seed: u64, depth: usize) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..depth).map(|_| rng.next_u64()).collect()
}

/// Builds every stage and checks the projection and measure claims.
pub fn build_tower(spec: &TowerSpec, seed: u64, opts: &ConstructOptions) -> Result<Tower> {
    spec.check_admissible()?;
    let seeds = stage_seeds(seed, spec.depth());
    let mut covers = Vec::with_capacity(spec.depth());
    for i in 1..=spec.depth() {
        let k = (i - 1) as u32;
        covers.push(kernel_cover(spec.step(i), k, seeds[i - 1], opts)?);
    }
    Tower::assemble(spec.clone(), seed, covers)
}

impl Tower {
    /// Rebuilds a tower from chosen kernel covers; `covers[i-1]` is `L_i`.
    pub(crate) fn assemble(spec: TowerSpec, seed: u64, covers: Vec<KernelCover>) -> Result<Tower> {
        let seeds = stage_seeds(seed, spec.depth());
        let g0 = spec.group(0);
        let mut stages = vec![TowerStage {
            index: 0,
            cover: None,
            cover_elements: Vec::new(),
            seed: None,
            size: 1,
            dense: Some(GroupSubset::from_elements(g0, [g0.identity()])?),
        }];
        for (cover, i) in covers.into_iter().zip(1..) {
            let prev = &stages[i - 1];
            let step = spec.step(i);
            if cover.set.group().order() != step.kernel_order() {
                return Err(Error::Integrity(format!("stage {i} cover is not a subset of the kernel")));
            }
            if cover.set.is_empty() {
                return Err(Error::Integrity(format!("stage {i} cover is empty")));
            }
            let size = cover.set.len() as u128 * prev.size;
            let dense = match &prev.dense {
                Some(base) if spec.group(i).order() <= DENSE_LIMIT => {
                    let src = step.source();
                    let mut out = GroupSubset::empty(src);
                    for h in base.elements() {
                        let s = step.section(h);
                        for l in cover.set.elements() {
                            out.insert(src.mul(step.kernel_embed(l), s));
                        }
                    }
                    Some(out)
                }
                _ => None,
            };
            stages.push(TowerStage {
                index: i,
                cover_elements: cover.set.to_vec(),
                cover: Some(cover),
                seed: Some(seeds[i - 1]),
                size,
                dense,
            });
        }
        let mut tower = Tower {
            spec,
            seed,
            stages,
            claims: Vec::new(),
        };
        tower.claims = tower.check_claims();
        if let Some(bad) = tower.claims.iter().find(|c| !c.all_hold()) {
            return Err(Error::Soundness(format!("stage claims fail: {bad:?}")));
        }
        Ok(tower)
    }

    pub fn spec(&self) -> &TowerSpec {
        &self.spec
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn depth(&self) -> usize {
        self.spec.depth()
    }

    pub fn stages(&self) -> &[TowerStage] {
        &self.stages
    }

    pub fn stage(&self, i: usize) -> &TowerStage {
        &self.stages[i]
    }

    pub fn claims(&self) -> &[StageClaims] {
        &self.claims
    }

    /// `|X_i| / |G_i|` as `(numerator, denominator)`, unreduced.
    pub fn measure(&self, i: usize) -> (u128, u64) {
        (self.stages[i].size, self.spec.group(i).order())
    }

    /// Factored test `x ∈ X_i`: `π_i(x) ∈ X_{i-1}` and `x·section(π_i(x))⁻¹ ∈ L_i`.
    pub fn membership(&self, i: usize, x: Element) -> bool {
        let mut x = x;
        for j in (1..=i).rev() {
            let step = self.spec.step(j);
            let h = step.map(x);
            let offset = step.source().div(x, step.section(h));
            let cover = &self.stages[j].cover.as_ref().expect("stage cover").set;
            match step.kernel_index(offset) {
                Some(idx) if cover.contains(idx) => x = h,
                _ => return false,
            }
        }
        x == self.spec.group(0).identity()
    }

    /// Membership using the dense set when one exists.
    pub fn contains(&self, i: usize, x: Element) -> bool {
        match &self.stages[i].dense {
            Some(d) => d.contains(x),
            None => self.membership(i, x),
        }
    }

    /// A uniformly random element of `X_i`.
    pub fn sample_member<R: Rng + ?Sized>(&self, i: usize, rng: &mut R) -> Element {
        let mut x = self.spec.group(0).identity();
        for j in 1..=i {
            let step = self.spec.step(j);
            let cover = &self.stages[j].cover_elements;
            let l = cover[rng.gen_range(0..cover.len())];
            x = step.source().mul(step.kernel_embed(l), step.section(x));
        }
        x
    }

    fn check_claims(&self) -> Vec<StageClaims> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed ^ 0x5eed_c1a1);
        self.stages
            .iter()
            .map(|stage| {
                let i = stage.index;
                let order = self.spec.group(i).order();
                if i == 0 {
                    return StageClaims {
                        stage: 0,
                        projection_ok: true,
                        projection_check: Verification::Exhaustive,
                        size_exact: stage.size == 1,
                        measure_ok: stage.within_measure_bound(order),
                    };
                }
                let step = self.spec.step(i);
                let (projection_ok, projection_check, size_exact) = match &stage.dense {
                    Some(d) => (
                        d.elements().all(|x| self.contains(i - 1, step.map(x)) && self.membership(i, x)),
                        Verification::Exhaustive,
                        d.len() as u128 == stage.size,
                    ),
                    None => {
                        let ok = (0..CLAIM_SAMPLES).all(|_| {
                            let x = self.sample_member(i, &mut rng);
                            self.membership(i, x) && self.contains(i - 1, step.map(x))
                        });
                        let expected = stage.cover_elements.len() as u128 * self.stages[i - 1].size;
                        (ok, Verification::Sampled { trials: CLAIM_SAMPLES }, stage.size == expected)
                    }
                };
                StageClaims {
                    stage: i,
                    projection_ok,
                    projection_check,
                    size_exact,
                    measure_ok: stage.within_measure_bound(order),
                }
            })
            .collect()
    }
}
