//! Pushing a covering set up through a quotient map.
//!
//! Given `φ: G -> H` with kernel `N` and `X ⊆ H`, the extension is
//! `X' = L·X̃` where `X̃` holds the canonical section of each element of `X`
//! and `L ⊆ N` is `(k+1)`-covering in `N`. Membership is
//! `x ∈ X'  ⇔  φ(x) ∈ X  and  x·section(φ(x))⁻¹ ∈ L`.

use super::spec::check_ragaszt;
use crate::covering::{construct_k_covering, ConstructOptions, CoveringCertificate, Verification};
use crate::epimorphism::Epimorphism;
use crate::error::{Error, Result};
use crate::group::Element;
use crate::subset::{GroupSubset, DENSE_LIMIT};

/// The kernel set `L` chosen for one extension.
#[derive(Debug, Clone)]
pub struct KernelCover {
    /// `L`, as a subset of the kernel group.
    pub set: GroupSubset,
    /// Absent for `k = 0`, where `L = {e}`, and for covers read back from a document.
    pub certificate: Option<CoveringCertificate>,
    pub attempts: Option<u32>,
    pub verification: Option<Verification>,
}

/// Picks `L ⊆ ker φ` that is `(k+1)`-covering: `{e}` when `k = 0`, otherwise
/// a randomized covering set of size at most `|ker φ|/2`.
pub fn kernel_cover(phi: &Epimorphism, k: u32, seed: u64, opts: &ConstructOptions) -> Result<KernelCover> {
    let kernel = phi.kernel_group();
    if k == 0 {
        return Ok(KernelCover {
            set: GroupSubset::from_elements(kernel, [kernel.identity()])?,
            certificate: None,
            attempts: None,
            verification: None,
        });
    }
    let n = phi.kernel_order();
    if !check_ragaszt(n, k, true)? {
        return Err(Error::Precondition(format!(
            "kernel of order {n} too small for a {}-covering set",
            k + 1
        )));
    }
    let cert = construct_k_covering(kernel, k + 1, seed, opts)?;
    if !cert.verdict.holds {
        return Err(Error::Soundness(format!(
            "kernel cover failed verification, witness {:?}",
            cert.verdict.witness
        )));
    }
    Ok(KernelCover {
        set: cert.set.clone(),
        attempts: Some(cert.family.attempts_used),
        verification: Some(cert.verdict.verification),
        certificate: Some(cert),
    })
}

/// `X' = L·X̃` in factored form.
#[derive(Debug, Clone)]
pub struct Extension {
    pub phi: Epimorphism,
    pub base: GroupSubset,
    pub cover: KernelCover,
}

impl Extension {
    /// `|X'| = |L|·|X|`; products `l·section(x)` are distinct because the
    /// sections lie in distinct kernel cosets.
    pub fn size(&self) -> u128 {
        self.cover.set.len() as u128 * self.base.len() as u128
    }

    pub fn contains(&self, x: Element) -> bool {
        let h = self.phi.map(x);
        if !self.base.contains(h) {
            return false;
        }
        let offset = self.phi.source().div(x, self.phi.section(h));
        self.phi
            .kernel_index(offset)
            .is_some_and(|j| self.cover.set.contains(j))
    }

    /// Enumerates `X'` densely.
    pub fn members(&self) -> Result<GroupSubset> {
        let src = self.phi.source();
        if src.order() > DENSE_LIMIT {
            return Err(Error::Precondition(format!("{src} is too large to enumerate densely")));
        }
        let mut out = GroupSubset::empty(src);
        for h in self.base.elements() {
            let s = self.phi.section(h);
            for l in self.cover.set.elements() {
                out.insert(src.mul(self.phi.kernel_embed(l), s));
            }
        }
        Ok(out)
    }
}

/// Extends `x ⊆ target(φ)` to `X' ⊆ source(φ)` with `φ(X') = x`,
/// `|X'| <= |ker φ|·|x|/2` and every `Y` with `|Y| <= k+1` whose image
/// translates into `x` translating into `X'`.
pub fn extend_covering(
    phi: &Epimorphism,
    x: &GroupSubset,
    k: u32,
    seed: u64,
    opts: &ConstructOptions,
) -> Result<Extension> {
    if x.is_empty() {
        return Err(Error::Precondition("cannot extend an empty set".into()));
    }
    if x.group().order() != phi.target().order() {
        return Err(Error::Precondition(format!("set is not in {}", phi.target())));
    }
    let cover = kernel_cover(phi, k, seed, opts)?;
    Ok(Extension {
        phi: phi.clone(),
        base: x.clone(),
        cover,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covering::translate_into;
    use crate::epimorphism::cyclic_tower_map;
    use crate::group::FiniteGroup;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn trivial_target() {
        // C1024 -> C1, x = {e}: X' = L is a 2-covering of the whole source
        let phi = cyclic_tower_map(1, 1024).unwrap();
        let x = GroupSubset::full(phi.target());
        let ext = extend_covering(&phi, &x, 1, 4, &ConstructOptions::default()).unwrap();
        let xp = ext.members().unwrap();
        assert!(xp.len() <= 512);
        assert_eq!(xp.len() as u128, ext.size());
        assert!(crate::covering::quotient_verdict(&xp).holds);
    }

    #[test]
    fn k_zero_uses_identity() {
        let phi = cyclic_tower_map(4, 12).unwrap();
        let x = GroupSubset::from_elements(phi.target(), [1, 3]).unwrap();
        let ext = extend_covering(&phi, &x, 0, 0, &ConstructOptions::default()).unwrap();
        assert_eq!(ext.cover.set.to_vec(), vec![0]);
        assert_eq!(ext.members().unwrap().to_vec(), vec![1, 3]);
    }

    #[test]
    fn properties_through_c20480() {
        let phi = cyclic_tower_map(20, 20480).unwrap();
        let x = GroupSubset::from_elements(phi.target(), [0, 2, 3, 5, 7, 11, 13, 14, 17, 19]).unwrap();
        let ext = extend_covering(&phi, &x, 1, 8, &ConstructOptions::default()).unwrap();
        let xp = ext.members().unwrap();
        assert!(ext.size() <= 1024 * 10 / 2);
        assert_eq!(xp.len() as u128, ext.size());
        // φ(X') = X
        let image = GroupSubset::from_elements(phi.target(), xp.elements().map(|e| phi.map(e))).unwrap();
        assert_eq!(image, x);
        // factored membership matches enumeration
        for e in phi.source().elements() {
            assert_eq!(ext.contains(e), xp.contains(e));
        }
        // pairs whose image translates into X translate into X'
        let g = phi.source();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut tested = 0;
        while tested < 300 {
            let (a, b) = (rng.gen_range(0..g.order()), rng.gen_range(0..g.order()));
            let img = [phi.map(a), phi.map(b)];
            if translate_into(&img, &x).is_none() {
                continue;
            }
            tested += 1;
            assert!(translate_into(&[a, b], &xp).is_some(), "({a},{b})");
        }
    }

    #[test]
    fn rejects_small_kernel_and_empty_set() {
        let phi = cyclic_tower_map(4, 256).unwrap();
        let x = GroupSubset::full(phi.target());
        assert!(matches!(
            extend_covering(&phi, &x, 1, 0, &ConstructOptions::default()),
            Err(Error::Precondition(_))
        ));
        let empty = GroupSubset::empty(phi.target());
        assert!(extend_covering(&phi, &empty, 0, 0, &ConstructOptions::default()).is_err());
        let c3 = FiniteGroup::cyclic(3).unwrap();
        assert!(extend_covering(&phi, &GroupSubset::full(&c3), 0, 0, &ConstructOptions::default()).is_err());
    }
}
