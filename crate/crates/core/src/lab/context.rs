use crate::cb::{paulsen_upper_bound, BlockMap, CbBound, Contractivity};
use crate::group::{ElementSet, FiniteGroup};
use crate::linalg::{czeros, is_psd_by_cholesky, op_norm, trace_norm, CMat};
use crate::repr::{compute_irreps, IrrepSet};

use super::LabError;

/// Largest source order for which idempotent norms are tabulated over all subsets.
const TABLE_BOUND: usize = 14;

/// Tolerances used when classifying one map.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Positive semidefiniteness of Choi blocks.
    pub algebraic: f64,
    /// Slack in `upper ≤ 1 + tol` and `lower > 1 + tol`.
    pub contractive: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { algebraic: 1e-9, contractive: 1e-6 }
    }
}

/// Cheap certified facts about `Φ_α` for one partial map `α`.
#[derive(Debug, Clone, PartialEq)]
pub struct MapAnalysis {
    pub domain_size: usize,
    /// Empty domain, so `Φ_α = 0`.
    pub degenerate: bool,
    pub affine: bool,
    pub subgroup_homomorphism: bool,
    pub completely_positive: bool,
    pub cb: CbBound<f64>,
    pub contractivity: Contractivity,
    pub consistent: bool,
    /// `n·Σ_i ‖1_{Y_i}‖` for the decomposition of `Y` into singletons.
    pub singleton_bound: f64,
}

impl MapAnalysis {
    pub(crate) fn settle(&mut self, tol: &Tolerances) {
        self.contractivity = self.cb.completely_contractive(tol.contractive);
        let cc_matches = match self.contractivity {
            Contractivity::Contractive => self.affine,
            Contractivity::NotContractive => !self.affine,
            Contractivity::Indeterminate => false,
        };
        self.consistent =
            self.degenerate || (cc_matches && self.completely_positive == self.subgroup_homomorphism);
    }
}

/// Precomputed data for partial maps `α: Y ⊆ H → G`.
///
/// Maps are passed densely: `dense[h]` is `Some(α(h))` on `Y`.
#[derive(Debug, Clone)]
pub struct PairContext {
    source: FiniteGroup,
    target: FiniteGroup,
    source_irreps: IrrepSet<f64>,
    target_irreps: IrrepSet<f64>,
    /// `(d_σ/|H|)·conj(σ(h))`.
    scaled_conj: Vec<Vec<CMat<f64>>>,
    set_norms: Option<Vec<f64>>,
    source_cosets: Option<Vec<bool>>,
    source_subgroups: Option<Vec<bool>>,
    target_cosets: Vec<u64>,
    tol: Tolerances,
}

impl PairContext {
    pub fn new(source: &FiniteGroup, target: &FiniteGroup, seed: u64, tol: Tolerances) -> Result<Self, LabError> {
        let source_irreps = compute_irreps(source, 1e-9, seed)?;
        let target_irreps = compute_irreps(target, 1e-9, seed.wrapping_add(1))?;
        Self::with_irreps(source_irreps, target_irreps, tol)
    }

    pub fn with_irreps(source_irreps: IrrepSet<f64>, target_irreps: IrrepSet<f64>, tol: Tolerances) -> Result<Self, LabError> {
        let source = source_irreps.group().clone();
        let target = target_irreps.group().clone();
        let hn = source.order() as f64;
        let scaled_conj = source_irreps
            .irreps()
            .iter()
            .map(|s| s.mats.iter().map(|m| m.map(|z| z.conj() * (s.dim as f64 / hn))).collect())
            .collect();
        let mut ctx = PairContext {
            source,
            target: target.clone(),
            source_irreps,
            target_irreps,
            scaled_conj,
            set_norms: None,
            source_cosets: None,
            source_subgroups: None,
            target_cosets: target.coset_masks(),
            tol,
        };
        if ctx.source.order() <= TABLE_BOUND {
            let size = 1usize << ctx.source.order();
            ctx.set_norms = Some((0..size as u64).map(|m| ctx.compute_set_norm(m)).collect());
            let mut cosets = vec![false; size];
            for m in ctx.source.coset_masks() {
                cosets[m as usize] = true;
            }
            let mut subgroups = vec![false; size];
            for s in ctx.source.enumerate_subgroups_bounded(TABLE_BOUND)? {
                subgroups[s.mask() as usize] = true;
            }
            ctx.source_cosets = Some(cosets);
            ctx.source_subgroups = Some(subgroups);
        }
        Ok(ctx)
    }

    pub fn source(&self) -> &FiniteGroup {
        &self.source
    }

    pub fn target(&self) -> &FiniteGroup {
        &self.target
    }

    pub fn source_irreps(&self) -> &IrrepSet<f64> {
        &self.source_irreps
    }

    pub fn target_irreps(&self) -> &IrrepSet<f64> {
        &self.target_irreps
    }

    pub fn tolerances(&self) -> &Tolerances {
        &self.tol
    }

    fn compute_set_norm(&self, mask: u64) -> f64 {
        let n = self.source.order();
        let mut total = 0.0;
        for s in self.source_irreps.irreps() {
            let mut m = czeros::<f64>(s.dim, s.dim);
            for h in (0..n).filter(|&h| mask >> h & 1 == 1) {
                m += &s.mats[h];
            }
            total += s.dim as f64 * trace_norm(&m);
        }
        total / n as f64
    }

    /// `‖1_S‖` in the Fourier algebra of the source group.
    pub fn set_norm(&self, mask: u64) -> f64 {
        match &self.set_norms {
            Some(t) => t[mask as usize],
            None => self.compute_set_norm(mask),
        }
    }

    pub fn is_source_coset(&self, mask: u64) -> bool {
        match &self.source_cosets {
            Some(t) => t[mask as usize],
            None => mask != 0 && ElementSet::from_mask(&self.source, mask).is_coset().is_some(),
        }
    }

    pub fn is_source_subgroup(&self, mask: u64) -> bool {
        match &self.source_subgroups {
            Some(t) => t[mask as usize],
            None => ElementSet::from_mask(&self.source, mask).is_subgroup(),
        }
    }

    /// Smallest `‖1_S‖` over nonempty subsets `S` of the source group that are not cosets.
    pub fn min_noncoset_norm(&self) -> Option<f64> {
        let size = 1u64 << self.source.order();
        (1..size)
            .filter(|&m| !self.is_source_coset(m))
            .map(|m| self.set_norm(m))
            .min_by(|a, b| a.total_cmp(b))
    }

    pub fn domain_mask(dense: &[Option<usize>]) -> u64 {
        dense.iter().enumerate().filter(|(_, a)| a.is_some()).fold(0, |m, (h, _)| m | 1 << h)
    }

    /// Choi blocks `J_σπ = Σ_{h∈Y} (d_σ/|H|) conj(σ(h)) ⊗ π(α(h))`, `σ`-major.
    pub fn blocks(&self, dense: &[Option<usize>]) -> Vec<Vec<CMat<f64>>> {
        self.scaled_conj
            .iter()
            .map(|sig| {
                self.target_irreps
                    .irreps()
                    .iter()
                    .map(|p| {
                        let d = sig[0].nrows();
                        let mut j = czeros::<f64>(d * p.dim, d * p.dim);
                        for (h, a) in dense.iter().enumerate() {
                            if let Some(s) = *a {
                                let (x, y) = (&sig[h], &p.mats[s]);
                                for i in 0..d {
                                    for jj in 0..d {
                                        let c = x[(i, jj)];
                                        if c.re == 0.0 && c.im == 0.0 {
                                            continue;
                                        }
                                        for k in 0..p.dim {
                                            for l in 0..p.dim {
                                                j[(i * p.dim + k, jj * p.dim + l)] += c * y[(k, l)];
                                            }
                                        }
                                    }
                                }
                            }
                        }
                        j
                    })
                    .collect()
            })
            .collect()
    }

    pub fn block_map(&self, dense: &[Option<usize>]) -> BlockMap<f64> {
        BlockMap::new(self.source_irreps.dims(), self.target_irreps.dims(), self.blocks(dense))
    }

    /// `α(r y₀⁻¹ t) = α(r) α(y₀)⁻¹ α(t)` on a coset `Y ∋ y₀`.
    pub fn is_affine(&self, dense: &[Option<usize>]) -> bool {
        let mask = Self::domain_mask(dense);
        if mask == 0 || !self.is_source_coset(mask) {
            return false;
        }
        let (h, g) = (&self.source, &self.target);
        let y0 = mask.trailing_zeros() as usize;
        let a0inv = g.inv(dense[y0].expect("anchor in domain"));
        let y0inv = h.inv(y0);
        let pts: Vec<(usize, usize)> = dense.iter().enumerate().filter_map(|(y, a)| a.map(|a| (y, a))).collect();
        pts.iter().all(|&(r, ar)| {
            let left = g.mul(ar, a0inv);
            let base = h.mul(r, y0inv);
            pts.iter().all(|&(t, at)| dense[h.mul(base, t)] == Some(g.mul(left, at)))
        })
    }

    pub fn is_subgroup_homomorphism(&self, dense: &[Option<usize>]) -> bool {
        let mask = Self::domain_mask(dense);
        if mask == 0 || !self.is_source_subgroup(mask) {
            return false;
        }
        let (h, g) = (&self.source, &self.target);
        let pts: Vec<(usize, usize)> = dense.iter().enumerate().filter_map(|(y, a)| a.map(|a| (y, a))).collect();
        pts.iter().all(|&(x, ax)| pts.iter().all(|&(y, ay)| dense[h.mul(x, y)] == Some(g.mul(ax, ay))))
    }

    /// Certified `‖Φ_α‖_cb ≤ 1`-type bound for affine `α`. With `y₀ ∈ Y`,
    /// `a₀ = α(y₀)`, `θ(k) = a₀⁻¹α(y₀k)` on `K = y₀⁻¹Y` and
    /// `β(h) = a₀θ(y₀⁻¹hy₀)a₀⁻¹` on `y₀Ky₀⁻¹`, the Choi blocks of `Φ_β`
    /// and `Φ_θ` complete those of `Φ_α` to a positive block matrix.
    pub fn affine_upper_bound(&self, dense: &[Option<usize>], blocks: &[Vec<CMat<f64>>]) -> f64 {
        let (h, g) = (&self.source, &self.target);
        let n = h.order();
        let mask = Self::domain_mask(dense);
        let y0 = mask.trailing_zeros() as usize;
        let a0 = dense[y0].expect("anchor in domain");
        let (y0inv, a0inv) = (h.inv(y0), g.inv(a0));
        let mut theta = vec![None; n];
        for (y, a) in dense.iter().enumerate() {
            if let Some(a) = *a {
                theta[h.mul(y0inv, y)] = Some(g.mul(a0inv, a));
            }
        }
        let mut beta = vec![None; n];
        for (k, t) in theta.iter().enumerate() {
            if let Some(t) = *t {
                beta[h.mul(h.mul(y0, k), y0inv)] = Some(g.mul(g.mul(a0, t), a0inv));
            }
        }
        let p = self.blocks(&beta);
        let q = self.blocks(&theta);
        let dom = self.source_irreps.dims();
        let mut best = 0.0f64;
        for (pi, &b) in self.target_irreps.dims().iter().enumerate() {
            let col = |x: &[Vec<CMat<f64>>]| x.iter().map(|row| row[pi].clone()).collect::<Vec<_>>();
            let comp = BlockMap::new(dom.clone(), vec![b], blocks.iter().map(|row| vec![row[pi].clone()]).collect());
            best = best.max(paulsen_upper_bound(&comp, &col(&p), &col(&q)));
        }
        best
    }

    /// Facts about `Φ_α` that need no semidefinite program: Choi positivity,
    /// exact cb norms for abelian targets, and otherwise the graph,
    /// component and coset-preimage lower bounds against the fiber-sum,
    /// positive-map and affine-certificate upper bounds.
    pub fn analyze(&self, dense: &[Option<usize>]) -> MapAnalysis {
        let mask = Self::domain_mask(dense);
        let domain_size = mask.count_ones() as usize;
        let singleton_bound = domain_size as f64
            * (0..self.source.order()).filter(|&y| mask >> y & 1 == 1).map(|y| self.set_norm(1 << y)).sum::<f64>();
        let mut out = MapAnalysis {
            domain_size,
            degenerate: mask == 0,
            affine: false,
            subgroup_homomorphism: false,
            completely_positive: true,
            cb: CbBound::exact(0.0),
            contractivity: Contractivity::Contractive,
            consistent: true,
            singleton_bound,
        };
        if mask == 0 {
            out.settle(&self.tol);
            return out;
        }
        out.affine = self.is_affine(dense);
        out.subgroup_homomorphism = self.is_subgroup_homomorphism(dense);
        let blocks = self.blocks(dense);
        out.completely_positive = blocks.iter().flatten().all(|c| is_psd_by_cholesky(c, self.tol.algebraic));

        let cod = self.target_irreps.dims();
        let norms: Vec<Vec<f64>> = blocks.iter().map(|row| row.iter().map(trace_norm).collect()).collect();
        let component = |pi: usize| norms.iter().map(|row| row[pi]).sum::<f64>();
        let exact_components = cod.iter().enumerate().filter(|(_, &b)| b == 1).map(|(p, _)| component(p));
        if cod.iter().all(|&b| b == 1) {
            out.cb = CbBound::exact(exact_components.fold(0.0, f64::max));
        } else {
            let graph = cod.iter().enumerate().map(|(p, &b)| b as f64 * component(p)).sum::<f64>() / self.target.order() as f64;
            let mut lower = exact_components.fold(graph, f64::max);
            for &c in &self.target_cosets {
                let pre = dense
                    .iter()
                    .enumerate()
                    .filter(|(_, a)| a.is_some_and(|s| c >> s & 1 == 1))
                    .fold(0u64, |m, (h, _)| m | 1 << h);
                if pre != 0 {
                    lower = lower.max(self.set_norm(pre));
                }
            }
            let mut fibers = vec![0u64; self.target.order()];
            for (h, a) in dense.iter().enumerate() {
                if let Some(s) = *a {
                    fibers[s] |= 1 << h;
                }
            }
            let mut upper: f64 = fibers.iter().filter(|&&f| f != 0).map(|&f| self.set_norm(f)).sum();
            if out.completely_positive {
                // a positive map attains its cb norm at the unit
                let bm = BlockMap::new(self.source_irreps.dims(), cod.clone(), blocks.clone());
                let at_unit = (0..cod.len()).map(|p| op_norm(&bm.unit_image_of_identity(p))).fold(0.0, f64::max);
                upper = upper.min(at_unit);
            }
            if out.affine {
                upper = upper.min(self.affine_upper_bound(dense, &blocks));
            }
            out.cb = CbBound { lower, upper, level: 1 };
        }
        out.settle(&self.tol);
        out
    }

    /// Greedy decomposition of `Y` into cosets on which `α` is affine,
    /// largest cosets first. Returns the piece masks.
    pub fn affine_decomposition(&self, dense: &[Option<usize>]) -> Vec<u64> {
        let mut remaining = Self::domain_mask(dense);
        let mut cosets = self.source.coset_masks();
        cosets.sort_by_key(|&m| (std::cmp::Reverse(m.count_ones()), m));
        let mut pieces = Vec::new();
        for c in cosets {
            if c & remaining != c {
                continue;
            }
            let restricted: Vec<Option<usize>> =
                dense.iter().enumerate().map(|(h, a)| if c >> h & 1 == 1 { *a } else { None }).collect();
            if self.is_affine(&restricted) {
                pieces.push(c);
                remaining &= !c;
            }
            if remaining == 0 {
                break;
            }
        }
        pieces
    }

    /// `Σ_i` of the affine certificates of the pieces, a bound for `‖Φ_α‖_cb`.
    pub fn piecewise_upper_bound(&self, dense: &[Option<usize>], pieces: &[u64]) -> f64 {
        pieces
            .iter()
            .map(|&c| {
                let restricted: Vec<Option<usize>> =
                    dense.iter().enumerate().map(|(h, a)| if c >> h & 1 == 1 { *a } else { None }).collect();
                self.affine_upper_bound(&restricted, &self.blocks(&restricted))
            })
            .sum()
    }
}
