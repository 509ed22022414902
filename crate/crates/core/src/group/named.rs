//! Small named groups.
//!
//! Permutation groups list their elements in lexicographic order of the
//! image tuple, so the identity is always element 0.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use super::{FiniteGroup, GroupData};

type Perm = Vec<usize>;

fn compose(p: &Perm, q: &Perm) -> Perm {
    // (p·q)(x) = p(q(x))
    q.iter().map(|&x| p[x]).collect()
}

impl FiniteGroup {
    pub fn trivial() -> Self {
        Self::cyclic(1)
    }

    /// Z_n with element `k` standing for `k mod n`.
    pub fn cyclic(n: usize) -> Self {
        assert!(n > 0, "cyclic group of order 0");
        let table = (0..n).flat_map(|i| (0..n).map(move |j| (i + j) % n)).collect();
        let inverses = (0..n).map(|i| (n - i) % n).collect();
        FiniteGroup(Arc::new(GroupData { order: n, table, identity: 0, inverses }))
    }

    /// Z_{n1} × Z_{n2} × ... with the product encoding of `direct_product`.
    pub fn abelian(factors: &[usize]) -> Self {
        factors
            .iter()
            .fold(Self::trivial(), |g, &n| if g.order() == 1 { Self::cyclic(n) } else { g.direct_product(&Self::cyclic(n)) })
    }

    /// Closure of the given permutations under composition.
    pub fn from_permutations(generators: &[Perm]) -> Self {
        let degree = generators.first().map_or(0, |g| g.len());
        let id: Perm = (0..degree).collect();
        let mut elems: BTreeSet<Perm> = BTreeSet::from([id.clone()]);
        let mut frontier = vec![id];
        while let Some(p) = frontier.pop() {
            for g in generators {
                let q = compose(g, &p);
                if elems.insert(q.clone()) {
                    frontier.push(q);
                }
            }
        }
        let list: Vec<Perm> = elems.into_iter().collect();
        let index: HashMap<&Perm, usize> = list.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let n = list.len();
        let mut table = Vec::with_capacity(n * n);
        for a in &list {
            for b in &list {
                table.push(index[&compose(a, b)]);
            }
        }
        FiniteGroup::from_flat(n, table).expect("permutation closure is a group")
    }

    pub fn symmetric(n: usize) -> Self {
        if n <= 1 {
            return Self::trivial();
        }
        let mut transposition: Perm = (0..n).collect();
        transposition.swap(0, 1);
        let cycle: Perm = (0..n).map(|i| (i + 1) % n).collect();
        Self::from_permutations(&[transposition, cycle])
    }

    pub fn symmetric3() -> Self {
        Self::symmetric(3)
    }

    /// The alternating group A4 (order 12).
    pub fn alternating4() -> Self {
        Self::from_permutations(&[vec![1, 2, 0, 3], vec![1, 0, 3, 2]])
    }

    /// Symmetries of the regular `n`-gon, order `2n`.
    pub fn dihedral(n: usize) -> Self {
        assert!(n >= 3, "dihedral group needs n >= 3");
        let rotation: Perm = (0..n).map(|i| (i + 1) % n).collect();
        let reflection: Perm = (0..n).map(|i| (n - i) % n).collect();
        Self::from_permutations(&[rotation, reflection])
    }

    /// Quaternion group Q8 via its left regular action on
    /// `{1, i, j, k, -1, -i, -j, -k}`.
    pub fn quaternion8() -> Self {
        // unit products: i·j = k etc.; (sign, unit) with units 0=1,1=i,2=j,3=k
        let unit = |a: usize, b: usize| -> (bool, usize) {
            match (a, b) {
                (0, x) | (x, 0) => (false, x),
                (x, y) if x == y => (true, 0),
                (1, 2) => (false, 3),
                (2, 3) => (false, 1),
                (3, 1) => (false, 2),
                (2, 1) => (true, 3),
                (3, 2) => (true, 1),
                (1, 3) => (true, 2),
                _ => unreachable!(),
            }
        };
        let mul = |x: usize, y: usize| {
            let (neg, u) = unit(x % 4, y % 4);
            let sign = (x / 4) ^ (y / 4) ^ usize::from(neg);
            sign * 4 + u
        };
        let left = |g: usize| -> Perm { (0..8).map(|x| mul(g, x)).collect() };
        Self::from_permutations(&[left(1), left(2)])
    }
}
