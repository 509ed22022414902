use std::collections::BTreeSet;

use thiserror::Error;

use super::FiniteGroup;

/// Default order bound for subgroup enumeration.
pub const DEFAULT_SUBGROUP_BOUND: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SubgroupError {
    #[error("group order {order} exceeds the enumeration bound {bound}")]
    OrderTooLarge { order: usize, bound: usize },
}

/// A subset of a finite group, stored as sorted element indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ElementSet {
    parent: FiniteGroup,
    members: Vec<usize>,
}

impl ElementSet {
    /// Builds a set, sorting and deduplicating. Panics on out-of-range indices.
    pub fn new(parent: &FiniteGroup, members: impl IntoIterator<Item = usize>) -> Self {
        let set: BTreeSet<usize> = members.into_iter().collect();
        if let Some(&m) = set.iter().next_back() {
            assert!(m < parent.order(), "element {m} out of range for group of order {}", parent.order());
        }
        ElementSet { parent: parent.clone(), members: set.into_iter().collect() }
    }

    pub fn full(parent: &FiniteGroup) -> Self {
        Self::new(parent, parent.elements())
    }

    pub fn empty(parent: &FiniteGroup) -> Self {
        Self::new(parent, [])
    }

    /// Set whose members are the bits of `mask`.
    pub fn from_mask(parent: &FiniteGroup, mask: u64) -> Self {
        Self::new(parent, (0..parent.order()).filter(|&i| mask >> i & 1 == 1))
    }

    /// Bit mask of the members; requires order ≤ 64.
    pub fn mask(&self) -> u64 {
        self.members.iter().fold(0, |m, &i| m | 1 << i)
    }

    pub fn parent(&self) -> &FiniteGroup {
        &self.parent
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.members.binary_search(&x).is_ok()
    }

    /// The left translate `s·C`.
    pub fn translate(&self, s: usize) -> Self {
        Self::new(&self.parent, self.members.iter().map(|&c| self.parent.mul(s, c)))
    }

    /// First triple `(r, s, t)` of members with `r·s⁻¹·t` outside the set.
    pub fn coset_violation(&self) -> Option<(usize, usize, usize)> {
        let g = &self.parent;
        for &r in &self.members {
            for &s in &self.members {
                let rs = g.mul(r, g.inv(s));
                for &t in &self.members {
                    if !self.contains(g.mul(rs, t)) {
                        return Some((r, s, t));
                    }
                }
            }
        }
        None
    }

    /// If the set is a left coset, returns the subgroup `C⁻¹C` with `C = s·C⁻¹C`.
    /// The empty set is not a coset.
    pub fn is_coset(&self) -> Option<ElementSet> {
        if self.is_empty() || self.coset_violation().is_some() {
            return None;
        }
        let g = &self.parent;
        let sub = Self::new(
            g,
            self.members
                .iter()
                .flat_map(|&a| self.members.iter().map(move |&b| g.mul(g.inv(a), b))),
        );
        debug_assert!(self.members.iter().all(|&s| sub.translate(s) == *self));
        Some(sub)
    }

    pub fn is_subgroup(&self) -> bool {
        self.contains(self.parent.identity()) && self.is_coset().is_some()
    }
}

fn closure(g: &FiniteGroup, seed: u64) -> u64 {
    let mut mask = seed | 1 << g.identity();
    loop {
        let mut next = mask;
        for a in (0..g.order()).filter(|&a| mask >> a & 1 == 1) {
            for b in (0..g.order()).filter(|&b| mask >> b & 1 == 1) {
                next |= 1 << g.mul(a, b);
            }
        }
        if next == mask {
            return mask;
        }
        mask = next;
    }
}

/// Bit masks of all subgroups, sorted by size and then by mask.
pub(crate) fn subgroup_masks(g: &FiniteGroup) -> Vec<u64> {
    let mut found: BTreeSet<u64> = BTreeSet::new();
    let mut frontier = vec![closure(g, 0)];
    found.insert(frontier[0]);
    while let Some(s) = frontier.pop() {
        for x in (0..g.order()).filter(|&x| s >> x & 1 == 0) {
            let t = closure(g, s | 1 << x);
            if found.insert(t) {
                frontier.push(t);
            }
        }
    }
    let mut v: Vec<u64> = found.into_iter().collect();
    v.sort_by_key(|&m| (m.count_ones(), m));
    v
}

impl FiniteGroup {
    /// All subgroups, sorted by order and then by their sorted member lists.
    pub fn enumerate_subgroups(&self) -> Result<Vec<ElementSet>, SubgroupError> {
        self.enumerate_subgroups_bounded(DEFAULT_SUBGROUP_BOUND)
    }

    pub fn enumerate_subgroups_bounded(&self, bound: usize) -> Result<Vec<ElementSet>, SubgroupError> {
        if self.order() > bound || self.order() > 64 {
            return Err(SubgroupError::OrderTooLarge { order: self.order(), bound });
        }
        let mut subs: Vec<ElementSet> =
            subgroup_masks(self).into_iter().map(|m| ElementSet::from_mask(self, m)).collect();
        subs.sort_by(|a, b| (a.len(), a.members()).cmp(&(b.len(), b.members())));
        Ok(subs)
    }

    /// Every left coset of every subgroup, deduplicated, as bit masks.
    pub fn coset_masks(&self) -> Vec<u64> {
        let mut all = BTreeSet::new();
        for h in subgroup_masks(self) {
            for s in self.elements() {
                let mut m = 0u64;
                for x in (0..self.order()).filter(|&x| h >> x & 1 == 1) {
                    m |= 1 << self.mul(s, x);
                }
                all.insert(m);
            }
        }
        all.into_iter().collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn brute_force_coset(g: &FiniteGroup, members: &[usize]) -> bool {
        !members.is_empty()
            && members.iter().all(|&r| {
                members.iter().all(|&s| members.iter().all(|&t| members.contains(&g.affine_combination(r, s, t))))
            })
    }

    #[test]
    fn identity_singleton_is_trivial_coset() {
        let g = FiniteGroup::symmetric3();
        let c = ElementSet::new(&g, [g.identity()]);
        assert_eq!(c.is_coset().unwrap().members(), &[0]);
    }

    #[test]
    fn z6_coset_examples() {
        let z6 = FiniteGroup::cyclic(6);
        let c = ElementSet::new(&z6, [1, 4]);
        assert!(brute_force_coset(&z6, &[1, 4]));
        assert_eq!(c.is_coset().unwrap().members(), &[0, 3]);

        let d = ElementSet::new(&z6, [0, 1, 2]);
        assert!(!brute_force_coset(&z6, &[0, 1, 2]));
        assert!(d.is_coset().is_none());
        // 1 - 0 + 2 = 3 is outside
        assert!(!d.contains(z6.affine_combination(1, 0, 2)));
    }

    #[test]
    fn empty_set_is_not_a_coset() {
        let g = FiniteGroup::cyclic(3);
        assert!(ElementSet::empty(&g).is_coset().is_none());
        assert!(!ElementSet::empty(&g).is_subgroup());
    }

    #[test]
    fn z4_subgroup_examples() {
        let z4 = FiniteGroup::cyclic(4);
        assert!(ElementSet::new(&z4, [0, 2]).is_subgroup());
        assert!(!ElementSet::new(&z4, [1, 3]).is_subgroup());
        assert!(ElementSet::new(&z4, [1, 3]).is_coset().is_some());
        assert!(!ElementSet::new(&z4, [0, 1]).is_subgroup());
        assert!(!ElementSet::new(&z4, [0, 1]).contains(z4.mul(1, 1)));
    }

    #[test]
    fn subgroup_counts() {
        let z4 = FiniteGroup::cyclic(4);
        let subs: Vec<Vec<usize>> =
            z4.enumerate_subgroups().unwrap().iter().map(|s| s.members().to_vec()).collect();
        assert_eq!(subs, vec![vec![0], vec![0, 2], vec![0, 1, 2, 3]]);

        let s3 = FiniteGroup::symmetric3();
        let sizes: Vec<usize> = s3.enumerate_subgroups().unwrap().iter().map(|s| s.len()).collect();
        assert_eq!(sizes, vec![1, 2, 2, 2, 3, 6]);

        assert_eq!(FiniteGroup::trivial().enumerate_subgroups().unwrap().len(), 1);
    }

    #[test]
    fn subgroups_match_brute_force_over_subsets() {
        for g in [FiniteGroup::cyclic(6), FiniteGroup::symmetric3(), FiniteGroup::quaternion8(), FiniteGroup::dihedral(4)] {
            let n = g.order();
            let brute: Vec<u64> = (1u64..1 << n)
                .filter(|&m| {
                    let members: Vec<usize> = (0..n).filter(|&i| m >> i & 1 == 1).collect();
                    members.contains(&g.identity()) && brute_force_coset(&g, &members)
                })
                .collect();
            let mut ours: Vec<u64> = g.enumerate_subgroups().unwrap().iter().map(|s| s.mask()).collect();
            ours.sort_unstable();
            assert_eq!(ours, brute);
        }
    }

    #[test]
    fn order_bound_enforced() {
        let g = FiniteGroup::cyclic(30);
        assert_eq!(
            g.enumerate_subgroups(),
            Err(SubgroupError::OrderTooLarge { order: 30, bound: DEFAULT_SUBGROUP_BOUND })
        );
    }

    #[test]
    fn coset_masks_match_brute_force() {
        let g = FiniteGroup::dihedral(4);
        let brute: Vec<u64> = (1u64..1 << 8)
            .filter(|&m| {
                let members: Vec<usize> = (0..8).filter(|&i| m >> i & 1 == 1).collect();
                brute_force_coset(&g, &members)
            })
            .collect();
        assert_eq!(g.coset_masks(), brute);
    }

    proptest! {
        #[test]
        fn coset_equals_translate_of_difference_set(mask in 1u64..(1 << 8), which in 0usize..3) {
            let g = [FiniteGroup::cyclic(8), FiniteGroup::quaternion8(), FiniteGroup::dihedral(4)][which].clone();
            let c = ElementSet::from_mask(&g, mask);
            prop_assert_eq!(c.is_coset().is_some(), brute_force_coset(&g, c.members()));
            if let Some(sub) = c.is_coset() {
                prop_assert!(sub.is_subgroup());
                for &s in c.members() {
                    prop_assert_eq!(&sub.translate(s), &c);
                }
            }
        }
    }
}
