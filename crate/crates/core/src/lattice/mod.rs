//! Cosets, coset rings and piecewise-affine maps over ℤ^d.
//!
//! Lattices are stored by a column Hermite normal form: the basis columns are
//! in echelon form with strictly increasing pivot rows and positive pivots,
//! and every entry at a pivot row to the left of that pivot is reduced into
//! `[0, pivot)`. Equal lattices therefore have identical bases.

mod affine;
mod coset;
mod cover;
mod decompose;
pub mod expr;
mod ring;

use thiserror::Error;

use crate::scalar::Int;

pub use affine::{LatticeAffineMap, LatticePiecewiseAffine};
pub use coset::{subgroup_index, Index, LatticeCoset};
pub use cover::{covering_witness, Coverage};
pub use decompose::graph_decompose;
pub use ring::{CosetRingSet, Piece};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("lattice is not contained in the claimed superlattice")]
    NotASublattice,
    #[error("not a graph: x = {x:?} has images {y1:?} and {y2:?}")]
    NotAGraph { x: Vec<i64>, y1: Vec<i64>, y2: Vec<i64> },
    #[error("point {x:?} lies in more than one piece")]
    AmbiguousPieces { x: Vec<i64> },
    #[error("region of piece {piece} is not inside its map's domain")]
    RegionOutsideDomain { piece: usize },
    #[error("pieces {first} and {second} overlap at {x:?}")]
    OverlappingPieces { first: usize, second: usize, x: Vec<i64> },
    #[error("split dimension {split} exceeds ambient dimension {dim}")]
    BadSplit { split: usize, dim: usize },
}

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<(), LatticeError> {
    if expected == found {
        Ok(())
    } else {
        Err(LatticeError::DimensionMismatch { expected, found })
    }
}

pub(crate) fn to_i64<T: Int>(v: &[T]) -> Vec<i64> {
    v.iter().map(|x| x.as_i64()).collect()
}

/// `y -= a·x`
pub(crate) fn sub_scaled<T: Int>(y: &mut [T], a: T, x: &[T]) {
    if a.is_zero() {
        return;
    }
    for (yi, &xi) in y.iter_mut().zip(x) {
        *yi = *yi - a * xi;
    }
}

pub(crate) fn add<T: Int>(a: &[T], b: &[T]) -> Vec<T> {
    a.iter().zip(b).map(|(&x, &y)| x + y).collect()
}

pub(crate) fn sub<T: Int>(a: &[T], b: &[T]) -> Vec<T> {
    a.iter().zip(b).map(|(&x, &y)| x - y).collect()
}

/// `Σ_k coeffs[k]·cols[k]` in dimension `dim`.
pub(crate) fn combine<T: Int>(dim: usize, cols: &[Vec<T>], coeffs: &[T]) -> Vec<T> {
    let mut out = vec![T::zero(); dim];
    for (c, &a) in cols.iter().zip(coeffs) {
        sub_scaled(&mut out, T::zero() - a, c);
    }
    out
}

pub(crate) struct HermiteForm<T> {
    /// Nonzero columns of the normal form.
    pub cols: Vec<Vec<T>>,
    pub pivots: Vec<usize>,
    /// Unimodular transform `U` (as columns) with `A·U = [H | 0]`.
    pub transform: Vec<Vec<T>>,
}

/// Column Hermite normal form of the `dim × n` matrix with columns `input`.
pub(crate) fn hermite<T: Int>(dim: usize, input: &[Vec<T>]) -> HermiteForm<T> {
    let n = input.len();
    let mut a: Vec<Vec<T>> = input.to_vec();
    let mut u: Vec<Vec<T>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { T::one() } else { T::zero() }).collect())
        .collect();
    let mut pivots = Vec::new();
    let mut k = 0;
    for p in 0..dim {
        if k == n {
            break;
        }
        loop {
            let best = (k..n).filter(|&j| !a[j][p].is_zero()).min_by_key(|&j| a[j][p].abs());
            let Some(b) = best else { break };
            a.swap(k, b);
            u.swap(k, b);
            let mut cleared = true;
            for j in k + 1..n {
                let q = a[j][p].div_floor(&a[k][p]);
                if !q.is_zero() {
                    let (lo, hi) = a.split_at_mut(j);
                    sub_scaled(&mut hi[0], q, &lo[k]);
                    let (lo, hi) = u.split_at_mut(j);
                    sub_scaled(&mut hi[0], q, &lo[k]);
                }
                cleared &= a[j][p].is_zero();
            }
            if cleared {
                if a[k][p] < T::zero() {
                    a[k].iter_mut().for_each(|x| *x = T::zero() - *x);
                    u[k].iter_mut().for_each(|x| *x = T::zero() - *x);
                }
                for j in 0..k {
                    let q = a[j][p].div_floor(&a[k][p]);
                    if !q.is_zero() {
                        let (lo, hi) = a.split_at_mut(k);
                        sub_scaled(&mut lo[j], q, &hi[0]);
                        let (lo, hi) = u.split_at_mut(k);
                        sub_scaled(&mut lo[j], q, &hi[0]);
                    }
                }
                pivots.push(p);
                k += 1;
                break;
            }
        }
    }
    a.truncate(k);
    HermiteForm { cols: a, pivots, transform: u }
}

/// Kernel basis of the `dim × n` integer matrix with columns `cols`.
pub(crate) fn integer_kernel<T: Int>(dim: usize, cols: &[Vec<T>]) -> Vec<Vec<T>> {
    let h = hermite(dim, cols);
    h.transform[h.cols.len()..].to_vec()
}

/// Some integer `z` with `Σ z_k cols[k] = b`, if one exists.
pub(crate) fn integer_solve<T: Int>(dim: usize, cols: &[Vec<T>], b: &[T]) -> Option<Vec<T>> {
    let h = hermite(dim, cols);
    let y = back_substitute(&h.cols, &h.pivots, b, false)?;
    let r = h.cols.len();
    Some(combine(cols.len(), &h.transform[..r], &y))
}

/// Coordinates of `x` in an echelon basis. With `reduce` set, returns the
/// floor quotients and writes nothing back; otherwise fails on a remainder.
fn back_substitute<T: Int>(cols: &[Vec<T>], pivots: &[usize], x: &[T], reduce: bool) -> Option<Vec<T>> {
    let mut res = x.to_vec();
    let mut coeffs = Vec::with_capacity(cols.len());
    for (c, &p) in cols.iter().zip(pivots) {
        let (q, r) = res[p].div_mod_floor(&c[p]);
        if !reduce && !r.is_zero() {
            return None;
        }
        sub_scaled(&mut res, q, c);
        coeffs.push(q);
    }
    if !reduce && res.iter().any(|v| !v.is_zero()) {
        return None;
    }
    Some(coeffs)
}

/// A subgroup of ℤ^d in canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntLattice<T: Int = i64> {
    dim: usize,
    basis: Vec<Vec<T>>,
    pivots: Vec<usize>,
}

impl<T: Int> IntLattice<T> {
    /// Canonical lattice generated by the given columns (each of length `dim`).
    pub fn canonicalize(dim: usize, generators: &[Vec<T>]) -> Self {
        for g in generators {
            assert_eq!(g.len(), dim, "generator has wrong dimension");
        }
        let h = hermite(dim, generators);
        IntLattice { dim, basis: h.cols, pivots: h.pivots }
    }

    /// The lattice generated by the rows given as a row-major matrix, read
    /// column by column (`rows[i][j]` is entry `i` of generator `j`).
    pub fn from_rows(rows: &[Vec<T>]) -> Self {
        let dim = rows.len();
        let n = rows.first().map_or(0, |r| r.len());
        let cols: Vec<Vec<T>> = (0..n).map(|j| rows.iter().map(|r| r[j]).collect()).collect();
        Self::canonicalize(dim, &cols)
    }

    pub fn zero(dim: usize) -> Self {
        IntLattice { dim, basis: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(dim: usize) -> Self {
        let cols: Vec<Vec<T>> = (0..dim)
            .map(|i| (0..dim).map(|j| if i == j { T::one() } else { T::zero() }).collect())
            .collect();
        Self::canonicalize(dim, &cols)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Canonical basis columns.
    pub fn basis(&self) -> &[Vec<T>] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Integer coordinates of `x` in the canonical basis, if `x` is in the lattice.
    pub fn coordinates(&self, x: &[T]) -> Option<Vec<T>> {
        back_substitute(&self.basis, &self.pivots, x, false)
    }

    pub fn contains(&self, x: &[T]) -> bool {
        self.coordinates(x).is_some()
    }

    /// Canonical representative of `x` modulo the lattice.
    pub fn reduce(&self, x: &[T]) -> Vec<T> {
        let q = back_substitute(&self.basis, &self.pivots, x, true).expect("reduction never fails");
        let mut r = x.to_vec();
        for (c, &qk) in self.basis.iter().zip(&q) {
            sub_scaled(&mut r, qk, c);
        }
        r
    }

    pub fn point(&self, coords: &[T]) -> Vec<T> {
        combine(self.dim, &self.basis, coords)
    }

    pub fn is_sublattice_of(&self, other: &Self) -> bool {
        self.dim == other.dim && self.basis.iter().all(|b| other.contains(b))
    }

    pub fn intersect(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let mut cols = self.basis.clone();
        cols.extend(other.basis.iter().map(|c| c.iter().map(|&x| T::zero() - x).collect()));
        let r = self.rank();
        let gens: Vec<Vec<T>> = integer_kernel(self.dim, &cols)
            .iter()
            .map(|z| combine(self.dim, &self.basis, &z[..r]))
            .collect();
        Self::canonicalize(self.dim, &gens)
    }

    pub fn sum(&self, other: &Self) -> Self {
        let mut cols = self.basis.clone();
        cols.extend(other.basis.iter().cloned());
        Self::canonicalize(self.dim, &cols)
    }

    /// Index in ℤ^d (infinite unless full rank).
    pub fn index_in_ambient(&self) -> Index<T> {
        coset::subgroup_index(self, &Self::full(self.dim)).expect("every lattice is in ℤ^d")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn canonical_examples() {
        let l = IntLattice::<i64>::from_rows(&[vec![2, 0], vec![0, 2]]);
        assert_eq!(l.rank(), 2);
        assert_eq!(l.basis(), &[vec![2, 0], vec![0, 2]]);

        let dep = IntLattice::<i64>::from_rows(&[vec![2, 4], vec![0, 0]]);
        assert_eq!(dep.rank(), 1);
        assert_eq!(dep.basis(), &[vec![2, 0]]);

        let empty = IntLattice::<i64>::canonicalize(3, &[]);
        assert_eq!(empty.rank(), 0);
        assert!(empty.contains(&[0, 0, 0]));
        assert!(!empty.contains(&[0, 1, 0]));
    }

    #[test]
    fn echelon_shape() {
        let l = IntLattice::<i64>::canonicalize(3, &[vec![3, 5, 7], vec![6, -1, 2], vec![0, 4, 4]]);
        for (k, (c, &p)) in l.basis().iter().zip(l.pivots()).enumerate() {
            assert!(c[p] > 0);
            assert!(c[..p].iter().all(|&x| x == 0));
            for left in &l.basis()[..k] {
                assert!(0 <= left[p] && left[p] < c[p]);
            }
        }
        // determinant of the generators is 3*(-4-8) - 6*(20-28) = 12
        let prod: i64 = l.basis().iter().zip(l.pivots()).map(|(c, &p)| c[p]).product();
        assert_eq!(prod, 12);
    }

    #[test]
    fn generic_over_i32() {
        let l = IntLattice::<i32>::canonicalize(2, &[vec![4, 2], vec![2, 4]]);
        assert!(l.contains(&[6, 6]));
        assert!(!l.contains(&[1, 0]));
    }

    #[test]
    fn kernel_and_solve() {
        let cols = vec![vec![2i64, 4], vec![3, 6], vec![1, 1]];
        for z in integer_kernel(2, &cols) {
            assert_eq!(combine(2, &cols, &z), vec![0, 0]);
        }
        let z = integer_solve(2, &cols, &[5, 9]).unwrap();
        assert_eq!(combine(2, &cols, &z), vec![5, 9]);
        assert!(integer_solve(2, &[vec![2i64, 0]], &[1, 0]).is_none());
    }

    fn random_unimodular(rng: &mut ChaCha8Rng, n: usize) -> Vec<Vec<i64>> {
        let mut u: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
        for _ in 0..6 {
            let (i, j) = (rng.random_range(0..n), rng.random_range(0..n));
            if i != j {
                let a = rng.random_range(-2..=2);
                let ui = u[i].clone();
                sub_scaled(&mut u[j], a, &ui);
            }
            if rng.random_bool(0.2) {
                u.swap(i, j);
            }
        }
        u
    }

    proptest! {
        #[test]
        fn canonical_form_is_basis_independent(
            gens in prop::collection::vec(prop::collection::vec(-6i64..=6, 3), 0..4),
            seed in any::<u64>(),
        ) {
            let l = IntLattice::canonicalize(3, &gens);
            prop_assert_eq!(&IntLattice::canonicalize(3, l.basis()), &l);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let n = gens.len();
            if n > 0 {
                let u = random_unimodular(&mut rng, n);
                let mixed: Vec<Vec<i64>> = u.iter().map(|col| combine(3, &gens, col)).collect();
                prop_assert_eq!(&IntLattice::canonicalize(3, &mixed), &l);
            }
            for g in &gens {
                prop_assert!(l.contains(g));
            }
        }

        #[test]
        fn reduce_is_canonical(
            gens in prop::collection::vec(prop::collection::vec(-5i64..=5, 2), 1..3),
            x in prop::collection::vec(-20i64..=20, 2),
            y in prop::collection::vec(-3i64..=3, 2),
        ) {
            let l = IntLattice::canonicalize(2, &gens);
            let shift = combine(2, &gens, &y[..gens.len().min(2)]);
            prop_assert_eq!(l.reduce(&x), l.reduce(&add(&x, &shift)));
            prop_assert!(l.contains(&sub(&x, &l.reduce(&x))));
        }

        #[test]
        fn intersection_is_exact(
            a in prop::collection::vec(prop::collection::vec(-4i64..=4, 2), 1..3),
            b in prop::collection::vec(prop::collection::vec(-4i64..=4, 2), 1..3),
        ) {
            let (la, lb) = (IntLattice::canonicalize(2, &a), IntLattice::canonicalize(2, &b));
            let both = la.intersect(&lb);
            for x in -12i64..=12 {
                for y in -12i64..=12 {
                    let p = [x, y];
                    prop_assert_eq!(both.contains(&p), la.contains(&p) && lb.contains(&p));
                }
            }
        }
    }
}
