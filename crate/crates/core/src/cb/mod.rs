//! Linear maps between function spaces on finite groups, their adjoints
//! between group von Neumann algebras, and completely bounded norms.

mod block;
mod norm;

use thiserror::Error;

use crate::group::FiniteGroup;
use crate::linalg::{czeros, CMat};
use crate::repr::{FunctionOnGroup, IrrepSet};
use crate::scalar::{cre, Cx, Real};
use crate::sdp::SolverFailure;

pub use block::BlockMap;
pub use norm::{
    alternating_lower_bound, cb_norm, paulsen_sdp_upper, paulsen_upper_bound, CbBound, CbSettings, Contractivity,
    DEFAULT_CB_SIZE_BOUND,
};

#[derive(Debug, Clone, Error)]
pub enum CbError {
    #[error("matrix is {rows}×{cols}, expected {want_rows}×{want_cols}")]
    Shape { rows: usize, cols: usize, want_rows: usize, want_cols: usize },
    #[error("maps do not compose: inner output {inner} vs outer input {outer}")]
    Compose { inner: usize, outer: usize },
    #[error("algebra dimension {size} exceeds the bound {bound}")]
    TooLarge { size: usize, bound: usize },
    #[error("irreducible representations belong to other groups")]
    GroupMismatch,
    #[error("bounds did not close: lower {lower:.6}, upper {upper:.6}")]
    NonConvergence { lower: f64, upper: f64, bound: CbBound<f64> },
    #[error(transparent)]
    Solver(#[from] SolverFailure),
}

/// `(Φu)(h) = Σ_s M[h][s]·u(s)` from functions on `source` to functions on `target`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearFunctionMap<T: Real = f64> {
    source: FiniteGroup,
    target: FiniteGroup,
    matrix: CMat<T>,
}

impl<T: Real> LinearFunctionMap<T> {
    pub fn new(source: &FiniteGroup, target: &FiniteGroup, matrix: CMat<T>) -> Result<Self, CbError> {
        let (want_rows, want_cols) = (target.order(), source.order());
        if matrix.shape() != (want_rows, want_cols) {
            return Err(CbError::Shape { rows: matrix.nrows(), cols: matrix.ncols(), want_rows, want_cols });
        }
        Ok(LinearFunctionMap { source: source.clone(), target: target.clone(), matrix })
    }

    pub fn from_fn(source: &FiniteGroup, target: &FiniteGroup, f: impl Fn(usize, usize) -> Cx<T>) -> Self {
        let matrix = CMat::from_fn(target.order(), source.order(), f);
        LinearFunctionMap { source: source.clone(), target: target.clone(), matrix }
    }

    pub fn identity(g: &FiniteGroup) -> Self {
        Self::from_fn(g, g, |h, s| cre(if h == s { T::one() } else { T::zero() }))
    }

    pub fn zero(source: &FiniteGroup, target: &FiniteGroup) -> Self {
        Self::from_fn(source, target, |_, _| cre(T::zero()))
    }

    /// `v ↦ u·v` on functions over `u`'s group.
    pub fn multiplication(u: &FunctionOnGroup<T>) -> Self {
        Self::from_fn(u.group(), u.group(), |h, s| if h == s { u.at(s) } else { cre(T::zero()) })
    }

    /// `ιu(s) = u(s⁻¹)`.
    pub fn inversion(g: &FiniteGroup) -> Self {
        Self::from_fn(g, g, |h, s| cre(if s == g.inv(h) { T::one() } else { T::zero() }))
    }

    pub fn source(&self) -> &FiniteGroup {
        &self.source
    }

    pub fn target(&self) -> &FiniteGroup {
        &self.target
    }

    pub fn matrix(&self) -> &CMat<T> {
        &self.matrix
    }

    pub fn scaled(&self, c: Cx<T>) -> Self {
        LinearFunctionMap { matrix: &self.matrix * c, ..self.clone() }
    }

    pub fn apply(&self, u: &FunctionOnGroup<T>) -> FunctionOnGroup<T> {
        assert_eq!(u.group(), &self.source, "function lives on the wrong group");
        FunctionOnGroup::from_fn(&self.target, |h| {
            (0..self.source.order()).fold(cre(T::zero()), |acc, s| acc + self.matrix[(h, s)] * u.at(s))
        })
    }

    pub fn adjoint(&self) -> AdjointMap<T> {
        let g = &self.source;
        let n = g.order();
        let images = self
            .target
            .elements()
            .map(|h| {
                let mut m = czeros::<T>(n, n);
                for s in g.elements() {
                    let c = self.matrix[(h, s)];
                    for t in g.elements() {
                        m[(g.mul(s, t), t)] += c;
                    }
                }
                m
            })
            .collect();
        AdjointMap { source: self.target.clone(), target: self.source.clone(), images }
    }

    /// Choi blocks of the adjoint in Fourier coordinates: domain blocks are
    /// the irreducible representations `σ` of the target group, codomain
    /// blocks the irreducible representations `π` of the source group.
    pub fn block_map(&self, source_irreps: &IrrepSet<T>, target_irreps: &IrrepSet<T>) -> Result<BlockMap<T>, CbError> {
        if source_irreps.group() != &self.source || target_irreps.group() != &self.target {
            return Err(CbError::GroupMismatch);
        }
        let hn = T::from_count(self.target.order());
        let dom: Vec<usize> = target_irreps.dims();
        let cod: Vec<usize> = source_irreps.dims();
        // A_h^π = Σ_s M[h][s] π(s)
        let a: Vec<Vec<CMat<T>>> = source_irreps
            .irreps()
            .iter()
            .map(|p| {
                self.target
                    .elements()
                    .map(|h| {
                        let mut m = czeros::<T>(p.dim, p.dim);
                        for s in self.source.elements() {
                            let c = self.matrix[(h, s)];
                            if c != cre(T::zero()) {
                                m += &p.mats[s] * c;
                            }
                        }
                        m
                    })
                    .collect()
            })
            .collect();
        let choi = target_irreps
            .irreps()
            .iter()
            .map(|sigma| {
                let scale = cre(T::from_count(sigma.dim) / hn);
                a.iter()
                    .zip(&cod)
                    .map(|(ap, &b)| {
                        let mut j = czeros::<T>(sigma.dim * b, sigma.dim * b);
                        for h in self.target.elements() {
                            j += sigma.mats[h].map(|z| z.conj()).kronecker(&ap[h]);
                        }
                        j * scale
                    })
                    .collect()
            })
            .collect();
        Ok(BlockMap::new(dom, cod, choi))
    }

    /// `(1/|G|) Σ_π b_π Σ_σ ‖J_σπ‖₁`, the norm of `(Φ⊗id)(1_Δ)` in `A(H×G)`;
    /// a lower bound for the cb norm. `blocks` must come from [`Self::block_map`].
    pub fn diagonal_lower_bound(&self, blocks: &BlockMap<T>) -> T {
        let mut total = T::zero();
        for (p, &b) in blocks.cod().iter().enumerate() {
            for s in 0..blocks.dom().len() {
                total += T::from_count(b) * crate::linalg::trace_norm(&blocks.choi(s, p));
            }
        }
        total / T::from_count(self.source.order())
    }
}

/// `Φ*(λ_H(h)) = Σ_s M[h][s]·λ_G(s)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AdjointMap<T: Real = f64> {
    source: FiniteGroup,
    target: FiniteGroup,
    images: Vec<CMat<T>>,
}

impl<T: Real> AdjointMap<T> {
    /// The group whose von Neumann algebra is the domain.
    pub fn source(&self) -> &FiniteGroup {
        &self.source
    }

    pub fn target(&self) -> &FiniteGroup {
        &self.target
    }

    /// `Φ*(λ_H(h))` as a `|G|×|G|` matrix.
    pub fn image(&self, h: usize) -> &CMat<T> {
        &self.images[h]
    }

    /// `Φ*(Σ_h c_h λ_H(h))`.
    pub fn apply(&self, coeffs: &[Cx<T>]) -> CMat<T> {
        let n = self.target.order();
        coeffs.iter().zip(&self.images).fold(czeros::<T>(n, n), |acc, (&c, m)| acc + m * c)
    }

    /// `φ = Φ*∘E` on the full matrix algebra over `ℓ²(H)`.
    pub fn extended(&self) -> MatrixMap<T> {
        let h = &self.source;
        let m = h.order();
        let inv = cre(T::one() / T::from_count(m));
        MatrixMap::from_units(m, self.target.order(), |i, j| &self.images[h.mul(i, h.inv(j))] * inv)
    }
}

/// `⟨u, x⟩ = Σ_s u(s)·τ(x λ(s)*)` for `x` in the span of the `λ(s)`.
pub fn pairing<T: Real>(u: &FunctionOnGroup<T>, x: &CMat<T>) -> Cx<T> {
    let g = u.group();
    let n = g.order();
    let mut acc = cre(T::zero());
    for s in g.elements() {
        // τ(x λ(s)*) = (1/n) Σ_t x[st, t]
        let mut c = cre(T::zero());
        for t in g.elements() {
            c += x[(g.mul(s, t), t)];
        }
        acc += u.at(s) * c;
    }
    acc / cre(T::from_count(n))
}

/// A linear map `M_m → M_n`, stored as the images of the matrix units.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixMap<T: Real = f64> {
    m: usize,
    n: usize,
    units: Vec<CMat<T>>,
}

impl<T: Real> MatrixMap<T> {
    /// `f(i, j)` is the image of `E_ij`.
    pub fn from_units(m: usize, n: usize, f: impl Fn(usize, usize) -> CMat<T>) -> Self {
        let units: Vec<CMat<T>> = (0..m * m).map(|k| f(k / m, k % m)).collect();
        assert!(units.iter().all(|u| u.shape() == (n, n)), "unit images have the wrong size");
        MatrixMap { m, n, units }
    }

    pub fn from_fn(m: usize, n: usize, f: impl Fn(&CMat<T>) -> CMat<T>) -> Self {
        Self::from_units(m, n, |i, j| {
            let mut e = czeros::<T>(m, m);
            e[(i, j)] = cre(T::one());
            f(&e)
        })
    }

    pub fn identity(m: usize) -> Self {
        Self::from_fn(m, m, |x| x.clone())
    }

    pub fn transpose(m: usize) -> Self {
        Self::from_fn(m, m, |x| x.transpose())
    }

    pub fn input_dim(&self) -> usize {
        self.m
    }

    pub fn output_dim(&self) -> usize {
        self.n
    }

    pub fn unit(&self, i: usize, j: usize) -> &CMat<T> {
        &self.units[i * self.m + j]
    }

    pub fn apply(&self, x: &CMat<T>) -> CMat<T> {
        let mut out = czeros::<T>(self.n, self.n);
        for i in 0..self.m {
            for j in 0..self.m {
                let c = x[(i, j)];
                if c != cre(T::zero()) {
                    out += self.unit(i, j) * c;
                }
            }
        }
        out
    }

    /// `[φ(E_ij)]`, indexed `(i·n + k, j·n + l)`.
    pub fn choi(&self) -> CMat<T> {
        let (m, n) = (self.m, self.n);
        CMat::from_fn(m * n, m * n, |r, c| self.unit(r / n, c / n)[(r % n, c % n)])
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &MatrixMap<T>) -> Result<Self, CbError> {
        if inner.n != self.m {
            return Err(CbError::Compose { inner: inner.n, outer: self.m });
        }
        Ok(Self::from_units(inner.m, self.n, |i, j| self.apply(inner.unit(i, j))))
    }

    /// `φ ⊗ id_{M_k}` with `(i, a) ↦ i·k + a`.
    pub fn tensor_with_identity(&self, k: usize) -> Self {
        let (m, n) = (self.m, self.n);
        Self::from_units(m * k, n * k, |r, c| {
            let (i, a, j, b) = (r / k, r % k, c / k, c % k);
            let mut e = czeros::<T>(k, k);
            e[(a, b)] = cre(T::one());
            self.unit(i, j).kronecker(&e)
        })
    }

    /// Single-block view for the cb and positivity routines.
    pub fn to_block_map(&self) -> BlockMap<T> {
        BlockMap::new(vec![self.m], vec![self.n], vec![vec![self.choi()]])
    }
}

/// Trace-preserving conditional expectation of `M_{|H|}` onto the span of
/// `λ_H`: `E(X) = Σ_h τ(X λ(h)*) λ(h)`.
pub fn conditional_expectation<T: Real>(h: &FiniteGroup) -> MatrixMap<T> {
    let m = h.order();
    let inv = T::one() / T::from_count(m);
    MatrixMap::from_units(m, m, |i, j| {
        let s = h.mul(i, h.inv(j));
        CMat::from_fn(m, m, |r, c| cre(if r == h.mul(s, c) { inv } else { T::zero() }))
    })
}
