//! Finite groups given by Cayley tables.
//!
//! Elements are the indices `0..order`; the table stores `a·b` at
//! `table[a * order + b]`. Symbolic names only exist in the catalog format.

mod named;
mod partial;
mod set;

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

pub use partial::{AffineWitness, PartialMap, PartialMapError};
pub use set::{ElementSet, SubgroupError, DEFAULT_SUBGROUP_BOUND};

/// The group axiom a candidate table violates.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NotAGroup {
    #[error("table is empty")]
    Empty,
    #[error("row {row} has length {len}, expected {order}")]
    NotSquare { row: usize, len: usize, order: usize },
    #[error("entry ({row}, {col}) = {value} is out of range 0..{order}")]
    EntryOutOfRange { row: usize, col: usize, value: usize, order: usize },
    #[error("no two-sided identity element")]
    NoIdentity,
    #[error("row {0} is not a permutation")]
    RowNotPermutation(usize),
    #[error("column {0} is not a permutation")]
    ColumnNotPermutation(usize),
    #[error("associativity fails: ({a}·{b})·{c} = {left} but {a}·({b}·{c}) = {right}")]
    NotAssociative { a: usize, b: usize, c: usize, left: usize, right: usize },
    #[error("element {0} has no inverse")]
    NoInverse(usize),
}

#[derive(Debug, PartialEq, Eq)]
struct GroupData {
    order: usize,
    table: Vec<usize>,
    identity: usize,
    inverses: Vec<usize>,
}

/// Validates a Cayley table; see [`FiniteGroup::from_table`].
pub fn build_group(rows: &[Vec<usize>]) -> Result<FiniteGroup, NotAGroup> {
    FiniteGroup::from_table(rows)
}

/// A validated finite group. Cloning is cheap (shared table).
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteGroup(Arc<GroupData>);

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteGroup(order={})", self.order())
    }
}

impl FiniteGroup {
    /// Validates a square multiplication table and builds the group.
    pub fn from_table(rows: &[Vec<usize>]) -> Result<Self, NotAGroup> {
        let n = rows.len();
        if n == 0 {
            return Err(NotAGroup::Empty);
        }
        let mut table = Vec::with_capacity(n * n);
        for (r, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(NotAGroup::NotSquare { row: r, len: row.len(), order: n });
            }
            for (c, &v) in row.iter().enumerate() {
                if v >= n {
                    return Err(NotAGroup::EntryOutOfRange { row: r, col: c, value: v, order: n });
                }
            }
            table.extend_from_slice(row);
        }
        Self::from_flat(n, table)
    }

    pub(crate) fn from_flat(n: usize, table: Vec<usize>) -> Result<Self, NotAGroup> {
        let at = |a: usize, b: usize| table[a * n + b];
        let identity = (0..n)
            .find(|&e| (0..n).all(|j| at(e, j) == j && at(j, e) == j))
            .ok_or(NotAGroup::NoIdentity)?;
        let mut seen = vec![false; n];
        for r in 0..n {
            seen.iter_mut().for_each(|s| *s = false);
            for c in 0..n {
                let v = at(r, c);
                if seen[v] {
                    return Err(NotAGroup::RowNotPermutation(r));
                }
                seen[v] = true;
            }
        }
        for c in 0..n {
            seen.iter_mut().for_each(|s| *s = false);
            for r in 0..n {
                let v = at(r, c);
                if seen[v] {
                    return Err(NotAGroup::ColumnNotPermutation(c));
                }
                seen[v] = true;
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = at(a, b);
                for c in 0..n {
                    let left = at(ab, c);
                    let right = at(a, at(b, c));
                    if left != right {
                        return Err(NotAGroup::NotAssociative { a, b, c, left, right });
                    }
                }
            }
        }
        let mut inverses = Vec::with_capacity(n);
        for a in 0..n {
            let inv = (0..n)
                .find(|&b| at(a, b) == identity && at(b, a) == identity)
                .ok_or(NotAGroup::NoInverse(a))?;
            inverses.push(inv);
        }
        Ok(FiniteGroup(Arc::new(GroupData { order: n, table, identity, inverses })))
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.0.order
    }

    #[inline]
    pub fn identity(&self) -> usize {
        self.0.identity
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.0.table[a * self.0.order + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.0.inverses[a]
    }

    /// `r·s⁻¹·t`, the ternary operation that characterises cosets.
    #[inline]
    pub fn affine_combination(&self, r: usize, s: usize, t: usize) -> usize {
        self.mul(self.mul(r, self.inv(s)), t)
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order()
    }

    pub fn inverses(&self) -> &[usize] {
        &self.0.inverses
    }

    /// Rows of the Cayley table.
    pub fn table_rows(&self) -> Vec<Vec<usize>> {
        self.0.table.chunks(self.order()).map(|r| r.to_vec()).collect()
    }

    pub fn is_abelian(&self) -> bool {
        self.elements()
            .all(|a| self.elements().all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut k = 1;
        let mut x = a;
        while x != self.identity() {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// Sorted multiset of element orders; a cheap isomorphism invariant.
    pub fn order_profile(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.elements().map(|a| self.element_order(a)).collect();
        v.sort_unstable();
        v
    }

    /// Direct product `self × other`; the pair `(i, j)` is encoded as
    /// `i * other.order() + j`.
    pub fn direct_product(&self, other: &FiniteGroup) -> FiniteGroup {
        let (n, m) = (self.order(), other.order());
        let size = n * m;
        let mut table = Vec::with_capacity(size * size);
        for x in 0..size {
            let (a, b) = (x / m, x % m);
            for y in 0..size {
                let (c, d) = (y / m, y % m);
                table.push(self.mul(a, c) * m + other.mul(b, d));
            }
        }
        let identity = self.identity() * m + other.identity();
        let inverses = (0..size)
            .map(|x| self.inv(x / m) * m + other.inv(x % m))
            .collect();
        FiniteGroup(Arc::new(GroupData { order: size, table, identity, inverses }))
    }

    /// Splits an element of `self = left × right` (encoded as in
    /// [`direct_product`](Self::direct_product)) into its components.
    pub fn split_product(x: usize, right_order: usize) -> (usize, usize) {
        (x / right_order, x % right_order)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyclic_rows(n: usize) -> Vec<Vec<usize>> {
        (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect()
    }

    // Order-5 loop: identity 0, every element self-inverse, hence not Z5.
    pub(crate) fn loop5() -> Vec<Vec<usize>> {
        vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ]
    }

    #[test]
    fn trivial_group() {
        let g = FiniteGroup::from_table(&[vec![0]]).unwrap();
        assert_eq!(g.order(), 1);
        assert_eq!(g.identity(), 0);
        assert_eq!(g.inv(0), 0);
    }

    #[test]
    fn z4_builds() {
        let g = FiniteGroup::from_table(&cyclic_rows(4)).unwrap();
        assert_eq!(g.order(), 4);
        assert_eq!(g.identity(), 0);
        assert_eq!(g.inverses(), &[0, 3, 2, 1]);
        assert!(g.is_abelian());
    }

    #[test]
    fn nonassociative_loop_rejected_with_witness() {
        let rows = loop5();
        // independent brute-force triple scan
        let mut oracle = None;
        'outer: for a in 0..5 {
            for b in 0..5 {
                for c in 0..5 {
                    if rows[rows[a][b]][c] != rows[a][rows[b][c]] {
                        oracle = Some((a, b, c));
                        break 'outer;
                    }
                }
            }
        }
        let (oa, ob, oc) = oracle.expect("loop must be non-associative");
        match FiniteGroup::from_table(&rows) {
            Err(NotAGroup::NotAssociative { a, b, c, left, right }) => {
                assert_eq!((a, b, c), (oa, ob, oc));
                assert_eq!(left, rows[rows[a][b]][c]);
                assert_eq!(right, rows[a][rows[b][c]]);
            }
            other => panic!("expected NotAssociative, got {other:?}"),
        }
    }

    #[test]
    fn malformed_tables() {
        assert_eq!(FiniteGroup::from_table(&[]), Err(NotAGroup::Empty));
        assert!(matches!(
            FiniteGroup::from_table(&[vec![0, 1], vec![1]]),
            Err(NotAGroup::NotSquare { row: 1, .. })
        ));
        assert!(matches!(
            FiniteGroup::from_table(&[vec![0, 2], vec![1, 0]]),
            Err(NotAGroup::EntryOutOfRange { .. })
        ));
        assert!(matches!(
            FiniteGroup::from_table(&[vec![0, 1], vec![1, 1]]),
            Err(NotAGroup::RowNotPermutation(1)) | Err(NotAGroup::ColumnNotPermutation(_))
        ));
        // (i - j) mod 3 is Latin but has no two-sided identity
        let sub: Vec<Vec<usize>> =
            (0..3).map(|i| (0..3).map(|j| (i + 3 - j) % 3).collect()).collect();
        assert_eq!(FiniteGroup::from_table(&sub), Err(NotAGroup::NoIdentity));
    }

    #[test]
    fn klein_four_from_product() {
        let z2 = FiniteGroup::cyclic(2);
        let v = z2.direct_product(&z2);
        assert_eq!(v.order(), 4);
        assert_eq!(v.order_profile(), vec![1, 2, 2, 2]);
    }

    #[test]
    fn z2_times_z3_is_cyclic() {
        let g = FiniteGroup::cyclic(2).direct_product(&FiniteGroup::cyclic(3));
        assert_eq!(g.order(), 6);
        // element-order scan: an element of order 6 exists
        assert!(g.elements().any(|x| g.element_order(x) == 6));
        assert_eq!(g.order_profile(), FiniteGroup::cyclic(6).order_profile());
    }

    #[test]
    fn trivial_times_g_is_g() {
        let g = FiniteGroup::symmetric3();
        let p = FiniteGroup::trivial().direct_product(&g);
        assert_eq!(p.table_rows(), g.table_rows());
    }

    #[test]
    fn product_associative_up_to_encoding() {
        let (a, b, c) = (FiniteGroup::cyclic(2), FiniteGroup::symmetric3(), FiniteGroup::cyclic(3));
        let left = a.direct_product(&b).direct_product(&c);
        let right = a.direct_product(&b.direct_product(&c));
        // ((i, j), k) = (i*|B| + j)*|C| + k = i*|B||C| + j*|C| + k = (i, (j, k))
        assert_eq!(left.table_rows(), right.table_rows());
    }
}
