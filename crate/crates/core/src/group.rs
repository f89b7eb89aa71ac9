//! Finite groups with elements encoded as indices `0..n`.
//!
//! Arithmetic is computed from the index on every call; no Cayley table is
//! stored, so groups with ~10⁹ elements are as cheap to hold as small ones.
//! Every family here uses index 0 for the identity.

use std::fmt;
use std::sync::Arc;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::epimorphism::Epimorphism;
use crate::error::{Error, Result};

/// A group element, identified by its index in `0..order`.
pub type Element = u64;

/// Largest `m` accepted by [`FiniteGroup::symmetric`].
pub const MAX_SYMMETRIC_DEGREE: usize = 8;

const EXHAUSTIVE_ASSOCIATIVITY_MAX: u64 = 64;
const EXHAUSTIVE_UNARY_MAX: u64 = 4096;
const SAMPLED_CHECKS: usize = 10_000;

/// A finite group given by index arithmetic.
#[derive(Clone)]
pub struct FiniteGroup {
    order: u64,
    repr: Arc<Repr>,
}

enum Repr {
    Cyclic,
    Dihedral { m: u64 },
    Symmetric(SymmetricTable),
    ElementaryAbelian { p: u64, d: u32 },
    Product(FiniteGroup, FiniteGroup),
    /// Kernel of `inner ∘ outer`, indexed as `i_inner * |ker outer| + i_outer`.
    ComposedKernel { outer: Epimorphism, inner: Epimorphism },
}

/// All permutations of `0..m` in Lehmer-code order.
struct SymmetricTable {
    degree: usize,
    perms: Vec<[u8; MAX_SYMMETRIC_DEGREE]>,
    radix: [u64; MAX_SYMMETRIC_DEGREE],
}

impl SymmetricTable {
    fn new(degree: usize) -> Self {
        let mut radix = [0u64; MAX_SYMMETRIC_DEGREE];
        let mut f = 1u64;
        for i in (0..degree).rev() {
            radix[i] = f;
            f *= (degree - i) as u64;
        }
        let perms = (0..f).map(|idx| decode_lehmer(idx, degree, &radix)).collect();
        SymmetricTable {
            degree,
            perms,
            radix,
        }
    }

    fn encode(&self, perm: &[u8; MAX_SYMMETRIC_DEGREE]) -> u64 {
        let m = self.degree;
        let mut idx = 0;
        for i in 0..m {
            let smaller = (i + 1..m).filter(|&j| perm[j] < perm[i]).count() as u64;
            idx += smaller * self.radix[i];
        }
        idx
    }
}

fn decode_lehmer(mut idx: u64, m: usize, radix: &[u64; MAX_SYMMETRIC_DEGREE]) -> [u8; MAX_SYMMETRIC_DEGREE] {
    let mut pool: Vec<u8> = (0..m as u8).collect();
    let mut out = [0u8; MAX_SYMMETRIC_DEGREE];
    for i in 0..m {
        let c = (idx / radix[i]) as usize;
        idx %= radix[i];
        out[i] = pool.remove(c);
    }
    out
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

impl FiniteGroup {
    /// Integers mod `n` under addition.
    pub fn cyclic(n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidGroup("cyclic group needs n >= 1".into()));
        }
        Ok(Self::with(n, Repr::Cyclic))
    }

    /// Symmetries of a regular `m`-gon, order `2m`. Element `i + m*j` is `r^i s^j`.
    pub fn dihedral(m: u64) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidGroup("dihedral group needs m >= 1".into()));
        }
        let order = m.checked_mul(2).ok_or(Error::OrderOverflow)?;
        Ok(Self::with(order, Repr::Dihedral { m }))
    }

    /// Permutations of `m` points indexed by Lehmer code, so the identity is 0.
    pub fn symmetric(m: usize) -> Result<Self> {
        if m == 0 || m > MAX_SYMMETRIC_DEGREE {
            return Err(Error::InvalidGroup(format!(
                "symmetric degree must be in 1..={MAX_SYMMETRIC_DEGREE}, got {m}"
            )));
        }
        let table = SymmetricTable::new(m);
        Ok(Self::with(table.perms.len() as u64, Repr::Symmetric(table)))
    }

    /// `(Z/p)^d`, indexed by base-`p` digits.
    pub fn elementary_abelian(p: u64, d: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidGroup(format!("{p} is not prime")));
        }
        if d == 0 {
            return Err(Error::InvalidGroup("elementary abelian rank must be >= 1".into()));
        }
        let order = p.checked_pow(d).ok_or(Error::OrderOverflow)?;
        Ok(Self::with(order, Repr::ElementaryAbelian { p, d }))
    }

    /// Direct product with index `i_g * |h| + i_h`.
    pub fn product(g: &FiniteGroup, h: &FiniteGroup) -> Result<Self> {
        let order = g.order.checked_mul(h.order).ok_or(Error::OrderOverflow)?;
        Ok(Self::with(order, Repr::Product(g.clone(), h.clone())))
    }

    pub(crate) fn composed_kernel(outer: Epimorphism, inner: Epimorphism) -> Self {
        let order = outer.kernel_order() * inner.kernel_order();
        Self::with(order, Repr::ComposedKernel { outer, inner })
    }

    fn with(order: u64, repr: Repr) -> Self {
        FiniteGroup {
            order,
            repr: Arc::new(repr),
        }
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn identity(&self) -> Element {
        0
    }

    pub fn elements(&self) -> std::ops::Range<Element> {
        0..self.order
    }

    pub fn is_cyclic_family(&self) -> bool {
        matches!(*self.repr, Repr::Cyclic)
    }

    pub fn factors(&self) -> Option<(&FiniteGroup, &FiniteGroup)> {
        match &*self.repr {
            Repr::Product(g, h) => Some((g, h)),
            _ => None,
        }
    }

    pub fn mul(&self, a: Element, b: Element) -> Element {
        debug_assert!(a < self.order && b < self.order);
        match &*self.repr {
            Repr::Cyclic => {
                let s = a as u128 + b as u128;
                (s % self.order as u128) as u64
            }
            Repr::Dihedral { m } => {
                let (i1, j1) = (a % m, a / m);
                let (i2, j2) = (b % m, b / m);
                let i = if j1 == 0 { (i1 + i2) % m } else { (i1 + m - i2) % m };
                i + m * (j1 ^ j2)
            }
            Repr::Symmetric(t) => {
                let (pa, pb) = (&t.perms[a as usize], &t.perms[b as usize]);
                let mut out = [0u8; MAX_SYMMETRIC_DEGREE];
                for x in 0..t.degree {
                    out[x] = pa[pb[x] as usize];
                }
                t.encode(&out)
            }
            Repr::ElementaryAbelian { p, d } => {
                let (mut a, mut b) = (a, b);
                let (mut out, mut place) = (0, 1);
                for _ in 0..*d {
                    out += ((a % p + b % p) % p) * place;
                    a /= p;
                    b /= p;
                    place *= p;
                }
                out
            }
            Repr::Product(g, h) => {
                let n = h.order;
                g.mul(a / n, b / n) * n + h.mul(a % n, b % n)
            }
            Repr::ComposedKernel { .. } => {
                let x = self.embed_kernel(a);
                let y = self.embed_kernel(b);
                self.locate_kernel(self.kernel_parent().mul(x, y))
            }
        }
    }

    pub fn inv(&self, a: Element) -> Element {
        debug_assert!(a < self.order);
        match &*self.repr {
            Repr::Cyclic => (self.order - a) % self.order,
            Repr::Dihedral { m } => {
                let (i, j) = (a % m, a / m);
                if j == 0 {
                    (m - i) % m
                } else {
                    a
                }
            }
            Repr::Symmetric(t) => {
                let pa = &t.perms[a as usize];
                let mut out = [0u8; MAX_SYMMETRIC_DEGREE];
                for x in 0..t.degree {
                    out[pa[x] as usize] = x as u8;
                }
                t.encode(&out)
            }
            Repr::ElementaryAbelian { p, d } => {
                let mut a = a;
                let (mut out, mut place) = (0, 1);
                for _ in 0..*d {
                    out += ((p - a % p) % p) * place;
                    a /= p;
                    place *= p;
                }
                out
            }
            Repr::Product(g, h) => {
                let n = h.order;
                g.inv(a / n) * n + h.inv(a % n)
            }
            Repr::ComposedKernel { .. } => {
                let x = self.embed_kernel(a);
                self.locate_kernel(self.kernel_parent().inv(x))
            }
        }
    }

    /// `a * b⁻¹`
    pub fn div(&self, a: Element, b: Element) -> Element {
        self.mul(a, self.inv(b))
    }

    pub fn element_order(&self, x: Element) -> u64 {
        let mut y = x;
        let mut k = 1;
        while y != self.identity() {
            y = self.mul(y, x);
            k += 1;
        }
        k
    }

    /// Sorted multiset of element orders; the only isomorphism diagnostic offered.
    pub fn order_profile(&self) -> Vec<u64> {
        let mut v: Vec<u64> = self.elements().map(|x| self.element_order(x)).collect();
        v.sort_unstable();
        v
    }

    /// Compact descriptor such as `C12`, `D5`, `S4`, `EA(2,3)` or `C2xC3`.
    pub fn descriptor(&self) -> String {
        self.to_string()
    }

    /// Checks identity, inverse and associativity laws.
    ///
    /// Unary laws are exhaustive up to order 4096, associativity up to order
    /// 64; above that 10⁴ seeded samples are drawn.
    pub fn check_axioms(&self, seed: u64) -> std::result::Result<(), String> {
        let n = self.order;
        let e = self.identity();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let unary: Box<dyn Iterator<Item = Element>> = if n <= EXHAUSTIVE_UNARY_MAX {
            Box::new(self.elements())
        } else {
            let xs: Vec<Element> = (0..SAMPLED_CHECKS).map(|_| rng.gen_range(0..n)).collect();
            Box::new(xs.into_iter())
        };
        for x in unary {
            if self.mul(e, x) != x || self.mul(x, e) != x {
                return Err(format!("identity law fails at {x}"));
            }
            let xi = self.inv(x);
            if self.mul(x, xi) != e || self.mul(xi, x) != e {
                return Err(format!("inverse law fails at {x}"));
            }
        }
        let assoc = |a, b, c| self.mul(self.mul(a, b), c) == self.mul(a, self.mul(b, c));
        if n <= EXHAUSTIVE_ASSOCIATIVITY_MAX {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        if !assoc(a, b, c) {
                            return Err(format!("associativity fails at ({a},{b},{c})"));
                        }
                    }
                }
            }
        } else {
            for _ in 0..SAMPLED_CHECKS {
                let (a, b, c) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
                if !assoc(a, b, c) {
                    return Err(format!("associativity fails at ({a},{b},{c})"));
                }
            }
        }
        Ok(())
    }

    fn kernel_parent(&self) -> &FiniteGroup {
        match &*self.repr {
            Repr::ComposedKernel { outer, .. } => outer.source(),
            _ => unreachable!("not a composed kernel"),
        }
    }

    /// For a composed kernel, the source element represented by index `i`.
    pub(crate) fn embed_kernel(&self, i: Element) -> Element {
        let Repr::ComposedKernel { outer, inner } = &*self.repr else {
            unreachable!("not a composed kernel")
        };
        let n_outer = outer.kernel_order();
        let (i_inner, i_outer) = (i / n_outer, i % n_outer);
        let lifted = outer.section(inner.kernel_embed(i_inner));
        outer.source().mul(outer.kernel_embed(i_outer), lifted)
    }

    /// Inverse of [`Self::embed_kernel`]; `x` must lie in the composed kernel.
    pub(crate) fn locate_kernel(&self, x: Element) -> Element {
        self.try_locate_kernel(x).expect("element outside composed kernel")
    }

    pub(crate) fn try_locate_kernel(&self, x: Element) -> Option<Element> {
        let Repr::ComposedKernel { outer, inner } = &*self.repr else {
            unreachable!("not a composed kernel")
        };
        let i_inner = inner.kernel_index(outer.map(x))?;
        let lifted = outer.section(inner.kernel_embed(i_inner));
        let i_outer = outer.kernel_index(outer.source().div(x, lifted))?;
        Some(i_inner * outer.kernel_order() + i_outer)
    }
}

impl fmt::Display for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &*self.repr {
            Repr::Cyclic => write!(f, "C{}", self.order),
            Repr::Dihedral { m } => write!(f, "D{m}"),
            Repr::Symmetric(t) => write!(f, "S{}", t.degree),
            Repr::ElementaryAbelian { p, d } => write!(f, "EA({p},{d})"),
            Repr::Product(g, h) => write!(f, "{g}x{h}"),
            Repr::ComposedKernel { outer, inner } => {
                write!(f, "ker({}->{})", outer.source(), inner.target())
            }
        }
    }
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteGroup({self}, order {})", self.order)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_examples() {
        let c1 = FiniteGroup::cyclic(1).unwrap();
        assert_eq!(c1.mul(0, 0), 0);
        let c4 = FiniteGroup::cyclic(4).unwrap();
        assert_eq!(c4.mul(3, 2), 1);
        assert_eq!(c4.inv(3), 1);
        let c7 = FiniteGroup::cyclic(7).unwrap();
        for x in 0..7 {
            assert_eq!(c7.inv(x), (7 - x) % 7);
        }
        assert!(FiniteGroup::cyclic(0).is_err());
    }

    #[test]
    fn klein_four_is_self_inverse() {
        let c2 = FiniteGroup::cyclic(2).unwrap();
        let v = FiniteGroup::product(&c2, &c2).unwrap();
        assert_eq!(v.order(), 4);
        assert!(v.elements().all(|x| v.inv(x) == x));
    }

    #[test]
    fn c2_times_c3_matches_c6_profile() {
        let g = FiniteGroup::product(&FiniteGroup::cyclic(2).unwrap(), &FiniteGroup::cyclic(3).unwrap()).unwrap();
        let c6 = FiniteGroup::cyclic(6).unwrap();
        assert_eq!(g.order_profile(), c6.order_profile());
        assert_eq!(g.order_profile(), vec![1, 2, 3, 3, 6, 6]);
    }

    #[test]
    fn trivial_factor_is_transparent() {
        let c1 = FiniteGroup::cyclic(1).unwrap();
        let d4 = FiniteGroup::dihedral(4).unwrap();
        let g = FiniteGroup::product(&c1, &d4).unwrap();
        for a in d4.elements() {
            assert_eq!(g.inv(a), d4.inv(a));
            for b in d4.elements() {
                assert_eq!(g.mul(a, b), d4.mul(a, b));
            }
        }
    }

    #[test]
    fn small_family_structure() {
        let d3 = FiniteGroup::dihedral(3).unwrap();
        assert_eq!(d3.order(), 6);
        let involutions = d3.elements().filter(|&x| d3.element_order(x) == 2).count();
        assert_eq!(involutions, 3);
        assert!(d3.elements().any(|a| d3.elements().any(|b| d3.mul(a, b) != d3.mul(b, a))));

        let s3 = FiniteGroup::symmetric(3).unwrap();
        assert_eq!(s3.order(), 6);
        assert_eq!(s3.identity(), 0);
        assert_eq!(s3.order_profile(), d3.order_profile());

        let ea = FiniteGroup::elementary_abelian(2, 3).unwrap();
        assert_eq!(ea.order(), 8);
        assert!(ea.elements().skip(1).all(|x| ea.element_order(x) == 2));
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(FiniteGroup::dihedral(0).is_err());
        assert!(FiniteGroup::symmetric(0).is_err());
        assert!(FiniteGroup::symmetric(9).is_err());
        assert!(FiniteGroup::elementary_abelian(4, 2).is_err());
        assert!(FiniteGroup::elementary_abelian(3, 0).is_err());
        assert!(matches!(FiniteGroup::elementary_abelian(2, 64), Err(Error::OrderOverflow)));
        let big = FiniteGroup::cyclic(u64::MAX).unwrap();
        assert!(matches!(FiniteGroup::product(&big, &big), Err(Error::OrderOverflow)));
    }

    #[test]
    fn axioms_hold_for_every_family() {
        let c = |n| FiniteGroup::cyclic(n).unwrap();
        let groups = vec![
            c(1),
            c(13),
            c(4096),
            c(2_684_354_560),
            FiniteGroup::dihedral(1).unwrap(),
            FiniteGroup::dihedral(7).unwrap(),
            FiniteGroup::dihedral(100).unwrap(),
            FiniteGroup::symmetric(4).unwrap(),
            FiniteGroup::symmetric(6).unwrap(),
            FiniteGroup::elementary_abelian(3, 4).unwrap(),
            FiniteGroup::product(&FiniteGroup::symmetric(3).unwrap(), &FiniteGroup::dihedral(5).unwrap()).unwrap(),
        ];
        for g in groups {
            g.check_axioms(1).unwrap_or_else(|e| panic!("{g}: {e}"));
        }
    }

    #[test]
    fn descriptors() {
        let g = FiniteGroup::product(&FiniteGroup::cyclic(20).unwrap(), &FiniteGroup::elementary_abelian(2, 5).unwrap()).unwrap();
        assert_eq!(g.descriptor(), "C20xEA(2,5)");
        assert_eq!(FiniteGroup::symmetric(4).unwrap().descriptor(), "S4");
        assert_eq!(FiniteGroup::dihedral(5).unwrap().descriptor(), "D5");
    }
}
