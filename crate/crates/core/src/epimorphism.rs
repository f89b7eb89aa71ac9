//! Surjective homomorphisms between index groups.
//!
//! Only the maps a quotient chain needs are supported: reduction of a cyclic
//! group modulo a divisor, projections off a direct product, and composites
//! of those. Each map carries its kernel as a group in its own right together
//! with an index embedding into the source, plus a canonical section.

use std::sync::Arc;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::group::{Element, FiniteGroup};

const EXHAUSTIVE_HOMOMORPHISM_MAX: u64 = 4096;
const EXHAUSTIVE_SECTION_MAX: u64 = 1_000_000;
const SAMPLED_CHECKS: usize = 10_000;

#[derive(Clone)]
pub struct Epimorphism {
    source: FiniteGroup,
    target: FiniteGroup,
    kernel: FiniteGroup,
    kind: Arc<MapKind>,
}

enum MapKind {
    /// `C_large -> C_modulus`, `x ↦ x mod modulus`.
    CyclicReduction { modulus: u64 },
    /// `G × H -> G`
    ProjectLeft,
    /// `G × H -> H`
    ProjectRight,
    /// `second ∘ first`
    Compose(Epimorphism, Epimorphism),
}

/// Reduction `C_large -> C_small`. The kernel is generated by `small` and is
/// isomorphic to `C_{large/small}`; the section picks the least non-negative
/// representative.
pub fn cyclic_tower_map(small: u64, large: u64) -> Result<Epimorphism> {
    if small == 0 || large == 0 || !large.is_multiple_of(small) {
        return Err(Error::NotDivisible { small, large });
    }
    Ok(Epimorphism {
        source: FiniteGroup::cyclic(large)?,
        target: FiniteGroup::cyclic(small)?,
        kernel: FiniteGroup::cyclic(large / small)?,
        kind: Arc::new(MapKind::CyclicReduction { modulus: small }),
    })
}

impl Epimorphism {
    /// Projection of a direct product onto its left factor.
    pub fn project_left(product: &FiniteGroup) -> Result<Self> {
        let (g, h) = product
            .factors()
            .ok_or_else(|| Error::InvalidGroup(format!("{product} is not a direct product")))?;
        Ok(Epimorphism {
            source: product.clone(),
            target: g.clone(),
            kernel: h.clone(),
            kind: Arc::new(MapKind::ProjectLeft),
        })
    }

    /// Projection of a direct product onto its right factor.
    pub fn project_right(product: &FiniteGroup) -> Result<Self> {
        let (g, h) = product
            .factors()
            .ok_or_else(|| Error::InvalidGroup(format!("{product} is not a direct product")))?;
        Ok(Epimorphism {
            source: product.clone(),
            target: h.clone(),
            kernel: g.clone(),
            kind: Arc::new(MapKind::ProjectRight),
        })
    }

    /// `second ∘ first`. The target of `first` must be the source of `second`.
    pub fn compose(first: &Epimorphism, second: &Epimorphism) -> Result<Self> {
        let (t, s) = (first.target(), second.source());
        if t.order() != s.order() || t.descriptor() != s.descriptor() {
            return Err(Error::InvalidGroup(format!("cannot compose: {t} is not {s}")));
        }
        // Cyclic reductions compose to a cyclic reduction with a cyclic kernel.
        if let (MapKind::CyclicReduction { .. }, MapKind::CyclicReduction { modulus }) =
            (&*first.kind, &*second.kind)
        {
            return cyclic_tower_map(*modulus, first.source.order());
        }
        Ok(Epimorphism {
            source: first.source.clone(),
            target: second.target.clone(),
            kernel: FiniteGroup::composed_kernel(first.clone(), second.clone()),
            kind: Arc::new(MapKind::Compose(first.clone(), second.clone())),
        })
    }

    pub fn source(&self) -> &FiniteGroup {
        &self.source
    }

    pub fn target(&self) -> &FiniteGroup {
        &self.target
    }

    /// The kernel as an abstract group; see [`Self::kernel_embed`].
    pub fn kernel_group(&self) -> &FiniteGroup {
        &self.kernel
    }

    pub fn kernel_order(&self) -> u64 {
        self.kernel.order()
    }

    pub fn map(&self, x: Element) -> Element {
        match &*self.kind {
            MapKind::CyclicReduction { modulus } => x % modulus,
            MapKind::ProjectLeft => x / self.kernel.order(),
            MapKind::ProjectRight => x % self.target.order(),
            MapKind::Compose(a, b) => b.map(a.map(x)),
        }
    }

    /// Canonical preimage of a target element.
    pub fn section(&self, h: Element) -> Element {
        match &*self.kind {
            MapKind::CyclicReduction { .. } => h,
            MapKind::ProjectLeft => h * self.kernel.order() + self.kernel.identity(),
            MapKind::ProjectRight => self.kernel.identity() * self.target.order() + h,
            MapKind::Compose(a, b) => a.section(b.section(h)),
        }
    }

    /// Source element corresponding to kernel index `j`.
    pub fn kernel_embed(&self, j: Element) -> Element {
        match &*self.kind {
            MapKind::CyclicReduction { modulus } => j * modulus,
            MapKind::ProjectLeft => self.target.identity() * self.kernel.order() + j,
            MapKind::ProjectRight => j * self.target.order() + self.target.identity(),
            MapKind::Compose(..) => self.kernel.embed_kernel(j),
        }
    }

    /// Kernel index of `x`, or `None` when `x` is not in the kernel.
    pub fn kernel_index(&self, x: Element) -> Option<Element> {
        match &*self.kind {
            MapKind::CyclicReduction { modulus } => x.is_multiple_of(*modulus).then(|| x / modulus),
            MapKind::ProjectLeft => {
                let n = self.kernel.order();
                (x / n == self.target.identity()).then(|| x % n)
            }
            MapKind::ProjectRight => {
                let n = self.target.order();
                (x % n == self.target.identity()).then(|| x / n)
            }
            MapKind::Compose(..) => self.kernel.try_locate_kernel(x),
        }
    }

    /// Checks the homomorphism property, `map ∘ section = id`, the order
    /// identity and that the kernel embedding hits exactly the kernel.
    pub fn check(&self, seed: u64) -> std::result::Result<(), String> {
        let (src, tgt) = (&self.source, &self.target);
        if self.kernel_order().checked_mul(tgt.order()) != Some(src.order()) {
            return Err(format!(
                "kernel order {} times target order {} is not source order {}",
                self.kernel_order(),
                tgt.order(),
                src.order()
            ));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let hom = |a, b| self.map(src.mul(a, b)) == tgt.mul(self.map(a), self.map(b));
        if src.order() <= EXHAUSTIVE_HOMOMORPHISM_MAX {
            for a in src.elements() {
                for b in src.elements() {
                    if !hom(a, b) {
                        return Err(format!("not a homomorphism at ({a},{b})"));
                    }
                }
            }
        } else {
            for _ in 0..SAMPLED_CHECKS {
                let (a, b) = (rng.gen_range(0..src.order()), rng.gen_range(0..src.order()));
                if !hom(a, b) {
                    return Err(format!("not a homomorphism at ({a},{b})"));
                }
            }
        }

        let section_ok = |h| self.map(self.section(h)) == h;
        if tgt.order() <= EXHAUSTIVE_SECTION_MAX {
            if let Some(h) = tgt.elements().find(|&h| !section_ok(h)) {
                return Err(format!("map(section({h})) != {h}"));
            }
        } else {
            for _ in 0..SAMPLED_CHECKS {
                let h = rng.gen_range(0..tgt.order());
                if !section_ok(h) {
                    return Err(format!("map(section({h})) != {h}"));
                }
            }
        }

        let embed_ok = |j| {
            let x = self.kernel_embed(j);
            self.map(x) == tgt.identity() && self.kernel_index(x) == Some(j)
        };
        if self.kernel_order() <= EXHAUSTIVE_SECTION_MAX {
            if let Some(j) = self.kernel.elements().find(|&j| !embed_ok(j)) {
                return Err(format!("kernel embedding wrong at {j}"));
            }
        } else {
            for _ in 0..SAMPLED_CHECKS {
                let j = rng.gen_range(0..self.kernel_order());
                if !embed_ok(j) {
                    return Err(format!("kernel embedding wrong at {j}"));
                }
            }
        }
        if src.order() <= EXHAUSTIVE_SECTION_MAX {
            let in_kernel = src.elements().filter(|&x| self.map(x) == tgt.identity()).count() as u64;
            if in_kernel != self.kernel_order() {
                return Err(format!("{in_kernel} elements map to the identity, expected {}", self.kernel_order()));
            }
        }
        Ok(())
    }
}

impl std::fmt::Debug for Epimorphism {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Epimorphism({} -> {}, kernel {})", self.source, self.target, self.kernel)
    }
}
