//! Homomorphisms `Φ_α u = u∘α` between Fourier algebras as experiments:
//! construction, recovery of `α`, classification, and exhaustive scans.

mod classify;
mod context;
mod scan;

use thiserror::Error;

use crate::cb::{cb_norm, CbBound, CbError, CbSettings, LinearFunctionMap};
use crate::group::{ElementSet, FiniteGroup, PartialMap, PartialMapError, SubgroupError};
use crate::linalg::CMat;
use crate::repr::{a_norm, compute_irreps, regular_representations, FunctionOnGroup, IrrepSet, ReprError};
use crate::scalar::{cabs, cre, Cx, Real};

pub use classify::{classify, classify_partial, ClassificationReport};
pub use context::{MapAnalysis, PairContext, Tolerances};
pub use scan::{exhaustive_theorem_scan, map_count, MapRecord, ScanSettings, ScanSummary, DEFAULT_SCAN_BUDGET};

/// `½(1 + √2)`, the smallest norm of a non-coset idempotent on an abelian group.
pub const SAEKI_BOUND: f64 = 1.207_106_781_186_547_6;

#[derive(Debug, Clone, Error)]
pub enum LabError {
    #[error("not an algebra homomorphism: Φ(δ_{u}·δ_{v})({h}) = {lhs} but (Φδ_{u}·Φδ_{v})({h}) = {rhs}")]
    NotAHomomorphism { h: usize, u: usize, v: usize, lhs: Cx<f64>, rhs: Cx<f64> },
    #[error("not an isomorphism: {0}")]
    NotIsomorphism(String),
    #[error("not completely contractive: cb norm in [{:.6}, {:.6}]", bound.lower, bound.upper)]
    NotContractive { bound: CbBound<f64> },
    #[error("{maps} partial maps exceed the budget {budget}")]
    BudgetExceeded { maps: u128, budget: u128 },
    #[error("idempotent reports need a nonempty support")]
    EmptySupport,
    #[error("invariant violated: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Repr(#[from] ReprError),
    #[error(transparent)]
    Cb(#[from] CbError),
    #[error(transparent)]
    PartialMap(#[from] PartialMapError),
    #[error(transparent)]
    Subgroup(#[from] SubgroupError),
}

/// Settings shared by the experiments.
#[derive(Debug, Clone, Copy)]
pub struct LabSettings {
    pub seed: u64,
    pub tol: Tolerances,
    pub cb: CbSettings<f64>,
}

impl Default for LabSettings {
    fn default() -> Self {
        LabSettings { seed: 0, tol: Tolerances::default(), cb: CbSettings::default() }
    }
}

/// `(Φ_α u)(h) = u(α(h))` on the domain of `α` and `0` elsewhere.
pub fn build_phi_alpha<T: Real>(pm: &PartialMap) -> LinearFunctionMap<T> {
    LinearFunctionMap::from_fn(pm.target(), pm.source(), |h, s| {
        cre(if pm.get(h) == Some(s) { T::one() } else { T::zero() })
    })
}

/// Recovers `α` from an algebra homomorphism. Each coordinate functional
/// `u ↦ (Φu)(h)` is tested for multiplicativity on the δ-basis; a nonzero
/// multiplicative functional is evaluation at a single point.
pub fn extract_alpha<T: Real>(phi: &LinearFunctionMap<T>) -> Result<PartialMap, LabError> {
    let (g, h) = (phi.source(), phi.target());
    let m = phi.matrix();
    let tol = T::lit(1e-9);
    let mut pairs = Vec::new();
    for y in h.elements() {
        // Φ(δ_s δ_t)(y) = [s = t] M[y][s] against M[y][s] M[y][t]
        for s in g.elements() {
            for t in s..g.order() {
                let lhs = if s == t { m[(y, s)] } else { cre(T::zero()) };
                let rhs = m[(y, s)] * m[(y, t)];
                if cabs(lhs - rhs) > tol {
                    let f = |z: Cx<T>| Cx::new(z.re.as_f64(), z.im.as_f64());
                    return Err(LabError::NotAHomomorphism { h: y, u: s, v: t, lhs: f(lhs), rhs: f(rhs) });
                }
            }
        }
        if let Some(s) = g.elements().find(|&s| cabs(m[(y, s)]) > tol) {
            pairs.push((y, s));
        }
    }
    Ok(PartialMap::from_pairs(h, g, &pairs)?)
}

/// Norm and coset structure of an idempotent `1_S`.
#[derive(Debug, Clone, PartialEq)]
pub struct IdempotentReport {
    pub support: ElementSet,
    pub norm: f64,
    pub is_coset: bool,
    pub is_subgroup: bool,
    pub is_positive_definite: bool,
    /// `(norm ≤ 1 + 1e-6) ⟺ coset`, `positive definite ⟺ subgroup`, and on
    /// abelian groups `norm ≥ ½(1+√2) − 1e-6` off cosets.
    pub consistent: bool,
}

pub fn idempotent_report(support: &ElementSet, irreps: &IrrepSet<f64>) -> Result<IdempotentReport, LabError> {
    if support.is_empty() {
        return Err(LabError::EmptySupport);
    }
    let u = FunctionOnGroup::<f64>::indicator(support);
    let r = a_norm(&u, irreps)?;
    let is_coset = support.is_coset().is_some();
    let is_subgroup = support.is_subgroup();
    let saeki = !support.parent().is_abelian() || is_coset || r.a_norm >= SAEKI_BOUND - 1e-6;
    let consistent = ((r.a_norm <= 1.0 + 1e-6) == is_coset) && (r.is_positive_definite == is_subgroup) && saeki;
    Ok(IdempotentReport {
        support: support.clone(),
        norm: r.a_norm,
        is_coset,
        is_subgroup,
        is_positive_definite: r.is_positive_definite,
        consistent,
    })
}

/// `w(s, t) = ⟨λ(s)ρ(t)δ_e, δ_e⟩` on `G×G` with its checks.
#[derive(Debug, Clone)]
pub struct DiagonalReport {
    pub w: FunctionOnGroup<f64>,
    pub norm: f64,
    pub is_positive_definite: bool,
    /// `w` is exactly the indicator of the diagonal subgroup.
    pub is_diagonal_indicator: bool,
    pub diagonal_is_subgroup: bool,
}

impl DiagonalReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.is_diagonal_indicator && self.diagonal_is_subgroup && self.is_positive_definite && (self.norm - 1.0).abs() <= tol
    }
}

pub fn approximate_diagonal(irreps: &IrrepSet<f64>) -> Result<DiagonalReport, LabError> {
    let g = irreps.group();
    let n = g.order();
    let (left, right) = regular_representations::<f64>(g);
    let e = g.identity();
    let product = irreps.product(irreps);
    let gg = product.group();
    let w = FunctionOnGroup::from_fn(gg, |x| {
        let (s, t) = FiniteGroup::split_product(x, n);
        cre((&left[s] * &right[t])[(e, e)])
    });
    let diagonal = ElementSet::new(gg, g.elements().map(|s| s * n + s));
    let is_diagonal_indicator = gg.elements().all(|x| w.at(x) == cre(if diagonal.contains(x) { 1.0 } else { 0.0 }));
    let r = a_norm(&w, &product)?;
    Ok(DiagonalReport {
        norm: r.a_norm,
        is_positive_definite: r.is_positive_definite,
        is_diagonal_indicator,
        diagonal_is_subgroup: diagonal.is_subgroup(),
        w,
    })
}

/// The range of an algebra homomorphism described through its adjoint.
#[derive(Debug, Clone, PartialEq)]
pub struct RangeReport {
    /// Points `h` with `Φ*(λ(h)) = 0`, where every function in the range vanishes.
    pub vanishing: Vec<usize>,
    /// Classes of points with equal `Φ*(λ(h)) ≠ 0`, on which functions in the range are constant.
    pub classes: Vec<Vec<usize>>,
    pub subspace_dimension: usize,
    pub column_rank: usize,
    /// The subspace cut out by the two conditions equals the column space.
    pub equal: bool,
}

/// Exact rank of an integer matrix by fraction-free elimination.
fn exact_rank(mut a: Vec<Vec<i128>>) -> usize {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    let mut prev = 1i128;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&r| a[r][c] != 0) else { continue };
        a.swap(rank, p);
        for r in rank + 1..rows {
            for k in c + 1..cols {
                a[r][k] = (a[rank][c] * a[r][k] - a[r][c] * a[rank][k]) / prev;
            }
            a[r][c] = 0;
        }
        prev = a[rank][c];
        rank += 1;
    }
    rank
}

pub fn range_characterization(phi: &LinearFunctionMap<f64>) -> Result<RangeReport, LabError> {
    extract_alpha(phi)?;
    let adj = phi.adjoint();
    let h = phi.target();
    let zero = |m: &CMat<f64>| m.iter().all(|z| *z == cre(0.0));
    let mut vanishing = Vec::new();
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for y in h.elements() {
        if zero(adj.image(y)) {
            vanishing.push(y);
        } else if let Some(c) = classes.iter_mut().find(|c| adj.image(c[0]) == adj.image(y)) {
            c.push(y);
        } else {
            classes.push(vec![y]);
        }
    }
    // entries of a homomorphism matrix are 0 or 1
    let to_int = |z: Cx<f64>| z.re.round() as i128;
    let cols: Vec<Vec<i128>> = (0..phi.matrix().ncols()).map(|s| h.elements().map(|y| to_int(phi.matrix()[(y, s)])).collect()).collect();
    let basis: Vec<Vec<i128>> = classes.iter().map(|c| h.elements().map(|y| i128::from(c.contains(&y))).collect()).collect();
    let column_rank = exact_rank(cols.clone());
    let subspace_dimension = exact_rank(basis.clone());
    let joint = exact_rank(cols.into_iter().chain(basis).collect());
    Ok(RangeReport {
        vanishing,
        classes,
        subspace_dimension,
        column_rank,
        equal: joint == column_rank && joint == subspace_dimension,
    })
}

/// Certified cb sandwich of an arbitrary map: the Fourier-block bounds
/// together with the diagonal lower bound.
pub fn cb_sandwich(phi: &LinearFunctionMap<f64>, settings: &LabSettings) -> Result<CbBound<f64>, LabError> {
    let gi = compute_irreps(phi.source(), 1e-9, settings.seed)?;
    let hi = compute_irreps(phi.target(), 1e-9, settings.seed.wrapping_add(1))?;
    let bm = phi.block_map(&gi, &hi)?;
    let diag = CbBound { lower: phi.diagonal_lower_bound(&bm), upper: f64::INFINITY, level: 1 };
    let bound = match cb_norm(&bm, &settings.cb) {
        Ok(b) => b,
        Err(CbError::NonConvergence { bound, .. }) => bound,
        Err(e) => return Err(e.into()),
    };
    Ok(bound.meet(&diag))
}

/// `Φu(h) = u(s₀β(h))` for a completely contractive algebra isomorphism.
#[derive(Debug, Clone, PartialEq)]
pub struct WalterFactorization {
    pub s0: usize,
    /// `β(h) = s₀⁻¹α(h)`.
    pub beta: Vec<usize>,
    pub beta_is_isomorphism: bool,
    pub completely_positive: bool,
    pub cb: CbBound<f64>,
}

pub fn walter_classify(phi: &LinearFunctionMap<f64>, settings: &LabSettings) -> Result<WalterFactorization, LabError> {
    let (g, h) = (phi.source(), phi.target());
    let cb = cb_sandwich(phi, settings)?;
    if cb.upper > 1.0 + settings.tol.contractive {
        return Err(LabError::NotContractive { bound: cb });
    }
    let alpha = extract_alpha(phi)?;
    if g.order() != h.order() || alpha.domain().len() != h.order() || alpha.image_set().len() != g.order() {
        return Err(LabError::NotIsomorphism("α is not a bijection".into()));
    }
    let s0 = alpha.get(h.identity()).expect("total map");
    let s0inv = g.inv(s0);
    let beta: Vec<usize> = h.elements().map(|y| g.mul(s0inv, alpha.get(y).expect("total map"))).collect();
    let beta_is_isomorphism = h.elements().all(|x| h.elements().all(|y| beta[h.mul(x, y)] == g.mul(beta[x], beta[y])));
    if !beta_is_isomorphism {
        return Err(LabError::NotIsomorphism("s₀⁻¹α is not a homomorphism".into()));
    }
    let gi = compute_irreps(g, 1e-9, settings.seed)?;
    let hi = compute_irreps(h, 1e-9, settings.seed.wrapping_add(1))?;
    let completely_positive = phi.block_map(&gi, &hi)?.is_completely_positive(settings.tol.algebraic);
    if completely_positive && s0 != g.identity() {
        return Err(LabError::Inconsistent(format!("completely positive isomorphism with s₀ = {s0}")));
    }
    Ok(WalterFactorization { s0, beta, beta_is_isomorphism, completely_positive, cb })
}

/// cb sandwich of `ιu(s) = u(s⁻¹)`; on abelian groups the upper bound must be at most `1 + 1e-6`.
pub fn inversion_map_report(g: &FiniteGroup, settings: &LabSettings) -> Result<CbBound<f64>, LabError> {
    let pm = PartialMap::total(g, g, |s| g.inv(s))?;
    let ctx = PairContext::new(g, g, settings.seed, settings.tol)?;
    let fast = ctx.analyze(&pm.dense()).cb;
    let bound = if fast.relative_gap() > settings.cb.gap {
        fast.meet(&cb_sandwich(&LinearFunctionMap::inversion(g), settings)?)
    } else {
        fast
    };
    if g.is_abelian() && bound.upper > 1.0 + 1e-6 {
        return Err(LabError::Inconsistent(format!("inversion on an abelian group has cb upper bound {}", bound.upper)));
    }
    Ok(bound)
}

#[cfg(test)]
mod tests;
