use super::{IntLattice, LatticeCoset};
use crate::scalar::Int;

/// Result of a covering search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Coverage<T> {
    Covered,
    Uncovered(Vec<T>),
}

/// Calls `f` on every point of `[0, sides[0]) × … × [0, sides[d-1])` until it returns true.
fn find_in_box<T: Int>(sides: &[T], mut f: impl FnMut(&[T]) -> bool) -> Option<Vec<T>> {
    let d = sides.len();
    if sides.iter().any(|s| *s <= T::zero()) {
        return None;
    }
    let mut p = vec![T::zero(); d];
    loop {
        if f(&p) {
            return Some(p);
        }
        let mut i = 0;
        loop {
            if i == d {
                return None;
            }
            p[i] = p[i] + T::one();
            if p[i] < sides[i] {
                break;
            }
            p[i] = T::zero();
            i += 1;
        }
    }
}

/// Decides whether the cosets cover ℤ^d, returning an uncovered point if not.
///
/// Finite-index cosets are unions of residue classes of the intersection
/// `L*` of their lattices, so they are settled by a scan over `ℤ^d / L*`.
/// Inside an uncovered residue class, each infinite-index coset lies in an
/// affine hyperplane of `L*`-coordinates and meets a box of side `N` in at
/// most `N^{d-1}` points; with `m` such cosets a box of side `m + 1` always
/// contains a witness. Boxes of side 2, 4, 8, … are tried up to that cap.
pub fn covering_witness<T: Int>(cosets: &[LatticeCoset<T>], dim: usize) -> Coverage<T> {
    for c in cosets {
        assert_eq!(c.dim(), dim, "coset of wrong dimension");
    }
    let (finite, infinite): (Vec<&LatticeCoset<T>>, Vec<&LatticeCoset<T>>) =
        cosets.iter().partition(|c| c.lattice().rank() == dim);

    let star = finite
        .iter()
        .fold(IntLattice::full(dim), |acc, c| acc.intersect(c.lattice()));
    let sides: Vec<T> = star.basis().iter().zip(star.pivots()).map(|(c, &p)| c[p]).collect();
    let residue = find_in_box(&sides, |r| !finite.iter().any(|c| c.has(r)));
    let Some(residue) = residue else {
        return Coverage::Covered;
    };

    let class = LatticeCoset::new(residue, star);
    let cap = T::from_i64(infinite.len() as i64 + 1);
    let mut side = T::one() + T::one();
    loop {
        let s = side.min(cap);
        let hit = find_in_box(&vec![s; dim], |t| {
            let x = class.at(t);
            !infinite.iter().any(|c| c.has(&x))
        });
        if let Some(t) = hit {
            return Coverage::Uncovered(class.at(&t));
        }
        assert!(s < cap, "no witness inside the proven bound");
        side = side + side;
    }
}
