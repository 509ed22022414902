use std::cmp::Ordering;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{regular_representations, FunctionOnGroup, ReprError};
use crate::group::FiniteGroup;
use crate::linalg::{czeros, to_complex, CMat};
use crate::scalar::{cabs, cre, cx, Cx, Real};

/// Largest group order for which irreducible representations are computed.
pub const DEFAULT_IRREP_BOUND: usize = 24;

const ATTEMPTS: u64 = 6;

/// One unitary irreducible representation, `mats[s] = π(s)`.
#[derive(Debug, Clone)]
pub struct Irrep<T: Real> {
    pub dim: usize,
    pub mats: Vec<CMat<T>>,
    pub character: Vec<Cx<T>>,
}

/// A complete set of inequivalent unitary irreducible representations,
/// sorted by dimension.
#[derive(Debug, Clone)]
pub struct IrrepSet<T: Real = f64> {
    group: FiniteGroup,
    irreps: Vec<Irrep<T>>,
    residual: T,
}

impl<T: Real> IrrepSet<T> {
    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn irreps(&self) -> &[Irrep<T>] {
        &self.irreps
    }

    pub fn len(&self) -> usize {
        self.irreps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.irreps.is_empty()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.irreps.iter().map(|p| p.dim).collect()
    }

    /// Largest residual among the homomorphism, unitarity and Schur
    /// orthogonality checks.
    pub fn residual(&self) -> T {
        self.residual
    }

    /// Irreducible representations `π ⊗ π′` of `self.group() × other.group()`,
    /// encoded as in [`FiniteGroup::direct_product`].
    pub fn product(&self, other: &IrrepSet<T>) -> IrrepSet<T> {
        let group = self.group.direct_product(&other.group);
        let m = other.group.order();
        let size = group.order();
        let mut irreps: Vec<Irrep<T>> = self
            .irreps
            .iter()
            .flat_map(|a| {
                other.irreps.iter().map(move |b| {
                    let mats: Vec<CMat<T>> = (0..size).map(|x| a.mats[x / m].kronecker(&b.mats[x % m])).collect();
                    let character = mats.iter().map(|p| p.trace()).collect();
                    Irrep { dim: a.dim * b.dim, mats, character }
                })
            })
            .collect();
        irreps.sort_by_key(|p| p.dim);
        let residual = irrep_residual(&group, &irreps);
        IrrepSet { group, irreps, residual }
    }
}

/// Block-diagonalises the left regular representation with a random
/// Hermitian element of its commutant and keeps one block per equivalence
/// class. Retries with fresh randomness when the checks miss `tol`.
pub fn compute_irreps<T: Real>(g: &FiniteGroup, tol: T, seed: u64) -> Result<IrrepSet<T>, ReprError> {
    let n = g.order();
    if n > DEFAULT_IRREP_BOUND {
        return Err(ReprError::OrderTooLarge { order: n, bound: DEFAULT_IRREP_BOUND });
    }
    let (left, right) = regular_representations::<T>(g);
    let left: Vec<CMat<T>> = left.iter().map(to_complex).collect();
    let mut best = T::max_value().expect("bounded real");
    for attempt in 0..ATTEMPTS {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(attempt.wrapping_mul(0x9e37_79b9)));
        if let Some(set) = attempt_decomposition(g, &left, &right, &mut rng) {
            if set.residual <= tol {
                return Ok(set);
            }
            best = best.min(set.residual);
        }
    }
    Err(ReprError::ToleranceNotMet { residual: best.as_f64() })
}

fn attempt_decomposition<T: Real>(
    g: &FiniteGroup,
    left: &[CMat<T>],
    right: &[nalgebra::DMatrix<T>],
    rng: &mut ChaCha8Rng,
) -> Option<IrrepSet<T>> {
    let n = g.order();
    let mut coeff = vec![cre(T::zero()); n];
    for t in g.elements() {
        let ti = g.inv(t);
        if t < ti {
            let c = cx(T::lit(rng.random_range(-1.0..1.0)), T::lit(rng.random_range(-1.0..1.0)));
            coeff[t] = c;
            coeff[ti] = c.conj();
        } else if t == ti {
            coeff[t] = cre(T::lit(rng.random_range(-1.0..1.0)));
        }
    }
    let mut r = czeros::<T>(n, n);
    for t in g.elements() {
        r += to_complex(&right[t]) * coeff[t];
    }
    let eig = r.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].partial_cmp(&eig.eigenvalues[b]).unwrap_or(Ordering::Equal));
    let scale = eig.eigenvalues.iter().fold(T::one(), |m, &v| m.max(v.abs()));
    let gap = T::lit(1e-7) * scale;

    let mut clusters: Vec<Vec<usize>> = Vec::new();
    for &k in &order {
        match clusters.last_mut() {
            Some(c) if eig.eigenvalues[k] - eig.eigenvalues[*c.last().expect("nonempty")] < gap => c.push(k),
            _ => clusters.push(vec![k]),
        }
    }

    let nf = T::from_count(n);
    let mut found: Vec<Irrep<T>> = Vec::new();
    for c in clusters {
        let d = c.len();
        let b = CMat::from_fn(n, d, |i, j| eig.eigenvectors[(i, c[j])]);
        let bh = b.adjoint();
        let mats: Vec<CMat<T>> = left.iter().map(|l| &bh * l * &b).collect();
        let character: Vec<Cx<T>> = mats.iter().map(|m| m.trace()).collect();
        let norm2 = character.iter().fold(T::zero(), |s, z| s + z.norm_sqr());
        if (norm2 - nf).abs() > T::lit(1e-6) * nf {
            return None;
        }
        let same = |p: &Irrep<T>| {
            p.dim == d && p.character.iter().zip(&character).all(|(a, b)| cabs(*a - *b) < T::lit(1e-6))
        };
        if !found.iter().any(same) {
            found.push(Irrep { dim: d, mats, character });
        }
    }
    if found.iter().map(|p| p.dim * p.dim).sum::<usize>() != n {
        return None;
    }
    found.sort_by(|a, b| a.dim.cmp(&b.dim).then_with(|| character_key(b).cmp(&character_key(a))));
    let residual = irrep_residual(g, &found);
    Some(IrrepSet { group: g.clone(), irreps: found, residual })
}

fn character_key<T: Real>(p: &Irrep<T>) -> Vec<(i64, i64)> {
    let r = |x: T| (x.as_f64() * 1e6).round() as i64;
    p.character.iter().map(|z| (r(z.re), r(z.im))).collect()
}

fn max_abs<T: Real>(m: &CMat<T>) -> T {
    m.iter().fold(T::zero(), |s, z| s.max(cabs(*z)))
}

fn irrep_residual<T: Real>(g: &FiniteGroup, irreps: &[Irrep<T>]) -> T {
    let n = g.order();
    let mut res = T::zero();
    for p in irreps {
        let id = CMat::<T>::identity(p.dim, p.dim);
        res = res.max(max_abs(&(&p.mats[g.identity()] - &id)));
        for s in g.elements() {
            res = res.max(max_abs(&(p.mats[s].adjoint() * &p.mats[s] - &id)));
            for t in g.elements() {
                res = res.max(max_abs(&(&p.mats[s] * &p.mats[t] - &p.mats[g.mul(s, t)])));
            }
        }
    }
    // (d_π/|G|) Σ_s π(s)_ij conj(σ(s)_kl) = δ_πσ δ_ik δ_jl
    let nf = T::from_count(n);
    for (a, p) in irreps.iter().enumerate() {
        for (b, q) in irreps.iter().enumerate() {
            for i in 0..p.dim {
                for j in 0..p.dim {
                    for k in 0..q.dim {
                        for l in 0..q.dim {
                            let mut s = cre(T::zero());
                            for x in g.elements() {
                                s += p.mats[x][(i, j)] * q.mats[x][(k, l)].conj();
                            }
                            s *= cre(T::from_count(p.dim) / nf);
                            let want = if a == b && i == k && j == l { T::one() } else { T::zero() };
                            res = res.max(cabs(s - cre(want)));
                        }
                    }
                }
            }
        }
    }
    res
}

/// One block per irreducible representation, `û(π) = Σ_s u(s)π(s)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierCoefficients<T: Real = f64> {
    pub blocks: Vec<CMat<T>>,
}

pub fn fourier_transform<T: Real>(u: &FunctionOnGroup<T>, irreps: &IrrepSet<T>) -> Result<FourierCoefficients<T>, ReprError> {
    if u.group() != irreps.group() {
        return Err(ReprError::GroupMismatch);
    }
    let blocks = irreps
        .irreps()
        .iter()
        .map(|p| {
            let mut m = czeros::<T>(p.dim, p.dim);
            for (s, &v) in u.values().iter().enumerate() {
                m += &p.mats[s] * v;
            }
            m
        })
        .collect();
    Ok(FourierCoefficients { blocks })
}

/// `u(s) = (1/|G|) Σ_π d_π tr(û(π) π(s)*)`.
pub fn inverse_fourier<T: Real>(coeffs: &FourierCoefficients<T>, irreps: &IrrepSet<T>) -> FunctionOnGroup<T> {
    let g = irreps.group();
    let nf = T::from_count(g.order());
    FunctionOnGroup::from_fn(g, |s| {
        let mut v = cre(T::zero());
        for (p, b) in irreps.irreps().iter().zip(&coeffs.blocks) {
            v += (b * p.mats[s].adjoint()).trace() * cre(T::from_count(p.dim));
        }
        v / cre(nf)
    })
}
