use std::fmt;

use super::{check_dim, combine, hermite, integer_kernel, integer_solve, sub, IntLattice, LatticeError};
use crate::scalar::Int;

/// Index of one lattice in another.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Index<T> {
    Finite(T),
    Infinite,
}

impl<T: fmt::Display> fmt::Display for Index<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Index::Finite(n) => write!(f, "{n}"),
            Index::Infinite => write!(f, "infinite"),
        }
    }
}

/// `[sup : sub]`.
pub fn subgroup_index<T: Int>(sub: &IntLattice<T>, sup: &IntLattice<T>) -> Result<Index<T>, LatticeError> {
    check_dim(sup.dim(), sub.dim())?;
    if !sub.is_sublattice_of(sup) {
        return Err(LatticeError::NotASublattice);
    }
    if sub.rank() < sup.rank() {
        return Ok(Index::Infinite);
    }
    let r = sup.rank();
    let coords: Vec<Vec<T>> = sub.basis().iter().map(|b| sup.coordinates(b).expect("checked")).collect();
    let h = hermite(r, &coords);
    let det = h.cols.iter().zip(&h.pivots).fold(T::one(), |acc, (c, &p)| acc * c[p]);
    Ok(Index::Finite(det))
}

/// `offset + lattice`, with the offset reduced modulo the lattice.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LatticeCoset<T: Int = i64> {
    offset: Vec<T>,
    lattice: IntLattice<T>,
}

impl<T: Int> LatticeCoset<T> {
    pub fn new(offset: Vec<T>, lattice: IntLattice<T>) -> Self {
        assert_eq!(offset.len(), lattice.dim(), "offset has wrong dimension");
        let offset = lattice.reduce(&offset);
        LatticeCoset { offset, lattice }
    }

    pub fn point(x: Vec<T>) -> Self {
        let d = x.len();
        Self::new(x, IntLattice::zero(d))
    }

    pub fn whole(dim: usize) -> Self {
        Self::new(vec![T::zero(); dim], IntLattice::full(dim))
    }

    pub fn offset(&self) -> &[T] {
        &self.offset
    }

    pub fn lattice(&self) -> &IntLattice<T> {
        &self.lattice
    }

    pub fn dim(&self) -> usize {
        self.lattice.dim()
    }

    pub fn contains(&self, x: &[T]) -> Result<bool, LatticeError> {
        check_dim(self.dim(), x.len())?;
        Ok(self.lattice.contains(&sub(x, &self.offset)))
    }

    pub(crate) fn has(&self, x: &[T]) -> bool {
        self.lattice.contains(&sub(x, &self.offset))
    }

    /// The element with the given lattice coordinates.
    pub fn at(&self, coords: &[T]) -> Vec<T> {
        super::add(&self.offset, &self.lattice.point(coords))
    }

    pub fn intersect(&self, other: &Self) -> Option<Self> {
        assert_eq!(self.dim(), other.dim(), "cosets of different dimension");
        let d = self.dim();
        let mut cols: Vec<Vec<T>> = self.lattice.basis().to_vec();
        cols.extend(other.lattice.basis().iter().map(|c| c.iter().map(|&x| T::zero() - x).collect()));
        let z = integer_solve(d, &cols, &sub(&other.offset, &self.offset))?;
        let p = self.at(&z[..self.lattice.rank()]);
        Some(Self::new(p, self.lattice.intersect(&other.lattice)))
    }

    pub fn is_subset_of(&self, other: &Self) -> bool {
        self.dim() == other.dim() && other.has(&self.offset) && self.lattice.is_sublattice_of(&other.lattice)
    }

    /// Rewrites `inner ⊆ self` in the lattice coordinates of `self`.
    pub(crate) fn relative(&self, inner: &Self) -> LatticeCoset<T> {
        let r = self.lattice.rank();
        let off = self.lattice.coordinates(&sub(&inner.offset, &self.offset)).expect("inner coset not contained");
        let gens: Vec<Vec<T>> = inner
            .lattice
            .basis()
            .iter()
            .map(|b| self.lattice.coordinates(b).expect("inner lattice not contained"))
            .collect();
        LatticeCoset::new(off, IntLattice::canonicalize(r, &gens))
    }

    /// Image of a coset under `x ↦ offset + B x` for independent columns `B`.
    pub(crate) fn embed(&self, offset: &[T], cols: &[Vec<T>]) -> LatticeCoset<T> {
        let d = offset.len();
        let o = super::add(offset, &combine(d, cols, &self.offset));
        let gens: Vec<Vec<T>> = self.lattice.basis().iter().map(|b| combine(d, cols, b)).collect();
        LatticeCoset::new(o, IntLattice::canonicalize(d, &gens))
    }
}

/// Nonzero lattice vectors whose first `split` coordinates vanish, as a basis.
pub(crate) fn vertical_part<T: Int>(l: &IntLattice<T>, split: usize) -> Vec<Vec<T>> {
    let top: Vec<Vec<T>> = l.basis().iter().map(|c| c[..split].to_vec()).collect();
    integer_kernel(split, &top).iter().map(|z| l.point(z)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(gens: &[i64]) -> IntLattice<i64> {
        IntLattice::canonicalize(1, &gens.iter().map(|&g| vec![g]).collect::<Vec<_>>())
    }

    #[test]
    fn containment_examples() {
        let c = LatticeCoset::new(vec![1], z(&[2]));
        assert!(c.contains(&[5]).unwrap());
        assert!(!c.contains(&[4]).unwrap());
        let d = LatticeCoset::new(vec![0, 0], IntLattice::from_rows(&[vec![1], vec![1]]));
        assert!(d.contains(&[3, 3]).unwrap());
        assert!(!d.contains(&[3, 2]).unwrap());
        assert_eq!(c.contains(&[1, 1]), Err(LatticeError::DimensionMismatch { expected: 1, found: 2 }));
    }

    #[test]
    fn offsets_are_reduced() {
        assert_eq!(LatticeCoset::new(vec![7], z(&[2])), LatticeCoset::new(vec![-3], z(&[2])));
        assert_eq!(LatticeCoset::new(vec![7], z(&[2])).offset(), &[1]);
    }

    #[test]
    fn intersection_examples() {
        let a = LatticeCoset::new(vec![0], z(&[2]));
        let b = LatticeCoset::new(vec![0], z(&[3]));
        assert_eq!(a.intersect(&b), Some(LatticeCoset::new(vec![0], z(&[6]))));

        let odd = LatticeCoset::new(vec![1], z(&[2]));
        assert_eq!(odd.intersect(&a), None);

        let xaxis = LatticeCoset::new(vec![0, 0], IntLattice::from_rows(&[vec![1], vec![0]]));
        let yaxis = LatticeCoset::new(vec![0, 0], IntLattice::from_rows(&[vec![0], vec![1]]));
        assert_eq!(xaxis.intersect(&yaxis), Some(LatticeCoset::point(vec![0, 0])));

        // generalized CRT: x ≡ 1 mod 4, x ≡ 3 mod 6 gives x ≡ 9 mod 12
        let c = LatticeCoset::new(vec![1], z(&[4])).intersect(&LatticeCoset::new(vec![3], z(&[6]))).unwrap();
        assert_eq!(c, LatticeCoset::new(vec![9], z(&[12])));
    }

    #[test]
    fn index_examples() {
        assert_eq!(subgroup_index(&z(&[2]), &z(&[1])), Ok(Index::Finite(2)));
        let diag = IntLattice::from_rows(&[vec![1], vec![1]]);
        assert_eq!(subgroup_index(&diag, &IntLattice::full(2)), Ok(Index::Infinite));
        let six = IntLattice::from_rows(&[vec![6, 0], vec![0, 6]]);
        let two = IntLattice::from_rows(&[vec![2, 0], vec![0, 2]]);
        assert_eq!(subgroup_index(&six, &two), Ok(Index::Finite(9)));
        assert_eq!(subgroup_index(&two, &six), Err(LatticeError::NotASublattice));
    }

    #[test]
    fn index_is_multiplicative() {
        let a = IntLattice::from_rows(&[vec![4, 2], vec![0, 6]]);
        let b = IntLattice::from_rows(&[vec![2, 0], vec![0, 3]]);
        let c = IntLattice::<i64>::full(2);
        let (Index::Finite(ab), Index::Finite(bc), Index::Finite(ac)) = (
            subgroup_index(&a, &b).unwrap(),
            subgroup_index(&b, &c).unwrap(),
            subgroup_index(&a, &c).unwrap(),
        ) else {
            panic!("finite indices expected")
        };
        assert_eq!(ab * bc, ac);
        assert_eq!(ac, 24);
    }

    #[test]
    fn vertical_vectors() {
        let l = IntLattice::from_rows(&[vec![1, 2], vec![0, 3]]);
        let v = vertical_part(&l, 1);
        assert_eq!(v.len(), 1);
        assert_eq!(v[0][0], 0);
        assert_eq!(i64::abs(v[0][1]), 3);
        let diag = IntLattice::from_rows(&[vec![1], vec![1]]);
        assert!(vertical_part(&diag, 1).is_empty());
    }
}
