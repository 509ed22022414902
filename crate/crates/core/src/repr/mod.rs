//! Functions on finite groups, their Fourier transforms and their norms in
//! the Fourier algebra `A(G)`.

mod irreps;
mod norm;

use nalgebra::DMatrix;
use thiserror::Error;

use crate::group::{ElementSet, FiniteGroup};
use crate::linalg::{is_psd_within, CMat};
use crate::scalar::{cabs, cre, Cx, Real};
use crate::sdp::SolverFailure;

pub use irreps::{compute_irreps, fourier_transform, inverse_fourier, FourierCoefficients, Irrep, IrrepSet, DEFAULT_IRREP_BOUND};
pub use norm::{a_norm, a_norm_oracle, NormMethod, NormReport, OracleReport, ORACLE_BOUND};

#[derive(Debug, Clone, Error)]
pub enum ReprError {
    #[error("{values} values given for a group of order {order}")]
    LengthMismatch { values: usize, order: usize },
    #[error("group order {order} exceeds the bound {bound}")]
    OrderTooLarge { order: usize, bound: usize },
    #[error("arguments live on different groups")]
    GroupMismatch,
    #[error("irreducible representations miss the tolerance: residual {residual:.3e}")]
    ToleranceNotMet { residual: f64 },
    #[error("primal and dual values disagree: {primal} vs {dual}")]
    OracleDisagreement { primal: f64, dual: f64 },
    #[error(transparent)]
    Solver(#[from] SolverFailure),
}

/// A complex function on a finite group, stored by element index.
#[derive(Debug, Clone, PartialEq)]
pub struct FunctionOnGroup<T: Real = f64> {
    group: FiniteGroup,
    values: Vec<Cx<T>>,
}

impl<T: Real> FunctionOnGroup<T> {
    pub fn new(group: &FiniteGroup, values: Vec<Cx<T>>) -> Result<Self, ReprError> {
        if values.len() != group.order() {
            return Err(ReprError::LengthMismatch { values: values.len(), order: group.order() });
        }
        Ok(FunctionOnGroup { group: group.clone(), values })
    }

    pub fn from_real(group: &FiniteGroup, values: &[T]) -> Result<Self, ReprError> {
        Self::new(group, values.iter().map(|&v| cre(v)).collect())
    }

    pub fn from_fn(group: &FiniteGroup, f: impl Fn(usize) -> Cx<T>) -> Self {
        FunctionOnGroup { group: group.clone(), values: group.elements().map(f).collect() }
    }

    pub fn indicator(set: &ElementSet) -> Self {
        Self::from_fn(set.parent(), |s| cre(if set.contains(s) { T::one() } else { T::zero() }))
    }

    pub fn delta(group: &FiniteGroup, s: usize) -> Self {
        Self::from_fn(group, |t| cre(if t == s { T::one() } else { T::zero() }))
    }

    pub fn constant(group: &FiniteGroup, c: Cx<T>) -> Self {
        Self::from_fn(group, |_| c)
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn values(&self) -> &[Cx<T>] {
        &self.values
    }

    pub fn at(&self, s: usize) -> Cx<T> {
        self.values[s]
    }

    /// Left translate `(s∗u)(t) = u(s⁻¹t)`.
    pub fn translate(&self, s: usize) -> Self {
        let g = &self.group;
        Self::from_fn(g, |t| self.values[g.mul(g.inv(s), t)])
    }

    /// Pointwise product. Panics on functions over different groups.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.group, other.group, "functions on different groups");
        Self::from_fn(&self.group, |s| self.values[s] * other.values[s])
    }

    pub fn sup_norm(&self) -> T {
        self.values.iter().fold(T::zero(), |m, &z| m.max(cabs(z)))
    }

    /// The Gram matrix `[u(s⁻¹t)]_{s,t}`.
    pub fn gram(&self) -> CMat<T> {
        let g = &self.group;
        CMat::from_fn(g.order(), g.order(), |s, t| self.values[g.mul(g.inv(s), t)])
    }
}

/// Left and right regular representations as permutation matrices:
/// `λ(s)δ_t = δ_{st}` and `ρ(t)δ_r = δ_{rt⁻¹}`.
pub fn regular_representations<T: Real>(g: &FiniteGroup) -> (Vec<DMatrix<T>>, Vec<DMatrix<T>>) {
    let n = g.order();
    let left = g
        .elements()
        .map(|s| DMatrix::from_fn(n, n, |r, c| if r == g.mul(s, c) { T::one() } else { T::zero() }))
        .collect();
    let right = g
        .elements()
        .map(|t| DMatrix::from_fn(n, n, |r, c| if r == g.mul(c, g.inv(t)) { T::one() } else { T::zero() }))
        .collect();
    (left, right)
}

/// `u` is positive definite when its Gram matrix is positive semidefinite.
pub fn is_positive_definite<T: Real>(u: &FunctionOnGroup<T>, tol: T) -> bool {
    is_psd_within(&u.gram(), tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn regular_representations_commute() {
        let g = FiniteGroup::symmetric3();
        let (l, r) = regular_representations::<f64>(&g);
        for s in g.elements() {
            for t in g.elements() {
                assert_eq!(&l[s] * &r[t], &r[t] * &l[s]);
                assert_eq!(&l[s] * &l[t], l[g.mul(s, t)]);
                assert_eq!(&r[s] * &r[t], r[g.mul(s, t)]);
            }
        }
    }

    #[test]
    fn small_regular_representations() {
        let (l, r) = regular_representations::<f64>(&FiniteGroup::trivial());
        assert_eq!(l[0], DMatrix::from_element(1, 1, 1.0));
        assert_eq!(r[0], DMatrix::from_element(1, 1, 1.0));
        let (l, _) = regular_representations::<f64>(&FiniteGroup::cyclic(2));
        assert_eq!(l[1], DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]));
    }

    #[test]
    fn positive_definite_examples() {
        let z4 = FiniteGroup::cyclic(4);
        let h = FunctionOnGroup::<f64>::indicator(&ElementSet::new(&z4, [0, 2]));
        assert!(is_positive_definite(&h, 1e-9));
        assert!(is_positive_definite(&FunctionOnGroup::<f64>::delta(&z4, 0), 1e-9));
        let c = FunctionOnGroup::<f64>::indicator(&ElementSet::new(&z4, [1, 3]));
        assert!(!is_positive_definite(&c, 1e-9));
    }

    #[test]
    fn wrong_length_is_rejected() {
        let z3 = FiniteGroup::cyclic(3);
        assert!(matches!(
            FunctionOnGroup::<f64>::from_real(&z3, &[1.0, 2.0]),
            Err(ReprError::LengthMismatch { values: 2, order: 3 })
        ));
    }
}
