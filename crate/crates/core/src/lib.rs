//! Completely bounded homomorphisms of Fourier algebras, computed on finite
//! groups and integer lattices.

pub mod catalog;
pub mod cb;
pub mod group;
pub mod lab;
pub mod lattice;
pub mod linalg;
pub mod mapfile;
pub mod repr;
pub mod scalar;
pub mod sdp;

pub use group::{build_group, AffineWitness, ElementSet, FiniteGroup, NotAGroup, PartialMap};

/// Functions on a finite group with `f64` components.
pub type Function = repr::FunctionOnGroup<f64>;
pub type Irreps = repr::IrrepSet<f64>;
pub type LinearMap = cb::LinearFunctionMap<f64>;
pub type Bound = cb::CbBound<f64>;
pub type CMatrix = linalg::CMat<f64>;
/// Subgroups of `ℤ^d` with `i64` entries.
pub type Lattice = lattice::IntLattice<i64>;
pub type Coset = lattice::LatticeCoset<i64>;
pub type CosetRing = lattice::CosetRingSet<i64>;
pub type PiecewiseAffine = lattice::LatticePiecewiseAffine<i64>;
