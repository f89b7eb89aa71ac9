//! Dense subsets of a finite group.

use std::fmt;

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::group::{Element, FiniteGroup};

/// Largest group for which a dense bit-vector subset is allowed (2²⁷ elements).
pub const DENSE_LIMIT: u64 = 1 << 27;

/// A subset of a finite group stored as a bit vector over element indices.
#[derive(Clone)]
pub struct GroupSubset {
    group: FiniteGroup,
    bits: BitSet,
    size: usize,
}

impl GroupSubset {
    pub fn empty(group: &FiniteGroup) -> Self {
        assert!(group.order() <= DENSE_LIMIT, "{group} too large for a dense subset");
        GroupSubset {
            group: group.clone(),
            bits: BitSet::new(group.order() as usize),
            size: 0,
        }
    }

    pub fn full(group: &FiniteGroup) -> Self {
        assert!(group.order() <= DENSE_LIMIT, "{group} too large for a dense subset");
        let n = group.order() as usize;
        GroupSubset {
            group: group.clone(),
            bits: BitSet::full(n),
            size: n,
        }
    }

    /// Fails on any index outside the group.
    pub fn from_elements(group: &FiniteGroup, elements: impl IntoIterator<Item = Element>) -> Result<Self> {
        if group.order() > DENSE_LIMIT {
            return Err(Error::InvalidGroup(format!("{group} too large for a dense subset")));
        }
        let mut s = Self::empty(group);
        for x in elements {
            if x >= group.order() {
                return Err(Error::InvalidGroup(format!("element {x} outside {group}")));
            }
            s.insert(x);
        }
        Ok(s)
    }

    pub(crate) fn from_bits(group: &FiniteGroup, bits: BitSet) -> Self {
        debug_assert_eq!(bits.len() as u64, group.order());
        let size = bits.count_ones();
        GroupSubset {
            group: group.clone(),
            bits,
            size,
        }
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub(crate) fn bits(&self) -> &BitSet {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    pub fn contains(&self, x: Element) -> bool {
        self.bits.contains(x as usize)
    }

    pub fn insert(&mut self, x: Element) -> bool {
        let fresh = self.bits.insert(x as usize);
        self.size += fresh as usize;
        fresh
    }

    pub fn remove(&mut self, x: Element) -> bool {
        let was = self.bits.remove(x as usize);
        self.size -= was as usize;
        was
    }

    /// Members in ascending index order.
    pub fn elements(&self) -> impl Iterator<Item = Element> + '_ {
        self.bits.ones().map(|i| i as Element)
    }

    pub fn to_vec(&self) -> Vec<Element> {
        self.elements().collect()
    }

    /// `gX`
    pub fn left_translate(&self, g: Element) -> Self {
        let mut bits = BitSet::new(self.bits.len());
        for x in self.elements() {
            bits.insert(self.group.mul(g, x) as usize);
        }
        GroupSubset {
            group: self.group.clone(),
            bits,
            size: self.size,
        }
    }

    /// `Xg`
    pub fn right_translate(&self, g: Element) -> Self {
        let mut bits = BitSet::new(self.bits.len());
        for x in self.elements() {
            bits.insert(self.group.mul(x, g) as usize);
        }
        GroupSubset {
            group: self.group.clone(),
            bits,
            size: self.size,
        }
    }

    pub fn union(&self, other: &GroupSubset) -> Self {
        let mut bits = self.bits.clone();
        bits.or_assign(&other.bits);
        Self::from_bits(&self.group, bits)
    }

    pub fn intersection(&self, other: &GroupSubset) -> Self {
        let mut bits = self.bits.clone();
        bits.and_assign(&other.bits);
        Self::from_bits(&self.group, bits)
    }

    pub fn intersects(&self, other: &GroupSubset) -> bool {
        self.bits.intersects(&other.bits)
    }

    pub fn is_subset(&self, other: &GroupSubset) -> bool {
        self.bits.is_subset(&other.bits)
    }

    /// Adds smallest-index non-members until the set has `target` elements.
    pub fn enlarge_to(&mut self, target: usize) {
        let mut x = 0;
        while self.size < target && x < self.group.order() {
            self.insert(x);
            x += 1;
        }
    }
}

impl PartialEq for GroupSubset {
    fn eq(&self, other: &Self) -> bool {
        self.group.order() == other.group.order() && self.bits == other.bits
    }
}

impl Eq for GroupSubset {}

impl fmt::Debug for GroupSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{:?}", self.group, self.bits)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rejects_out_of_range() {
        let c4 = FiniteGroup::cyclic(4).unwrap();
        assert!(GroupSubset::from_elements(&c4, [0, 4]).is_err());
    }

    #[test]
    fn enlargement_uses_smallest_indices() {
        let c8 = FiniteGroup::cyclic(8).unwrap();
        let mut s = GroupSubset::from_elements(&c8, [1, 5]).unwrap();
        s.enlarge_to(5);
        assert_eq!(s.to_vec(), vec![0, 1, 2, 3, 5]);
    }

    proptest! {
        #[test]
        fn translates_preserve_cardinality(
            members in proptest::collection::vec(0u64..24, 0..24),
            g in 0u64..24,
            family in 0usize..3,
        ) {
            let group = match family {
                0 => FiniteGroup::cyclic(24).unwrap(),
                1 => FiniteGroup::dihedral(12).unwrap(),
                _ => FiniteGroup::symmetric(4).unwrap(),
            };
            let s = GroupSubset::from_elements(&group, members).unwrap();
            let l = s.left_translate(g);
            let r = s.right_translate(g);
            prop_assert_eq!(l.len(), s.len());
            prop_assert_eq!(l.bits().count_ones(), s.len());
            prop_assert_eq!(r.bits().count_ones(), s.len());
            prop_assert_eq!(l.left_translate(group.inv(g)), s.clone());
            prop_assert_eq!(r.right_translate(group.inv(g)), s);
        }
    }
}
