use rayon::prelude::*;

use crate::cb::{CbBound, Contractivity};
use crate::group::{FiniteGroup, PartialMap};
use crate::linalg::is_psd_by_cholesky;

use super::{build_phi_alpha, LabError, MapAnalysis, PairContext, Tolerances};

pub const DEFAULT_SCAN_BUDGET: u128 = 1_000_000;

const CHUNK: u128 = 2048;
const KEEP_INCONSISTENT: usize = 8;
const BOUND_SLACK: f64 = 1e-3;

#[derive(Debug, Clone, Copy)]
pub struct ScanSettings {
    pub seed: u64,
    pub budget: u128,
    pub tol: Tolerances,
    /// Check the full Choi matrix of `Φ*∘E ⊗ id_k`, `k = 1, 2, 3`, for every
    /// positive map and subgroup homomorphism.
    pub extended_choi: bool,
}

impl Default for ScanSettings {
    fn default() -> Self {
        ScanSettings { seed: 0, budget: DEFAULT_SCAN_BUDGET, tol: Tolerances::default(), extended_choi: true }
    }
}

/// One scanned map, `dense[h] = α(h)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MapRecord {
    pub dense: Vec<Option<usize>>,
    pub cb: CbBound<f64>,
    pub affine: bool,
    pub subgroup_homomorphism: bool,
    pub completely_positive: bool,
    pub contractivity: Contractivity,
}

impl MapRecord {
    fn new(dense: &[Option<usize>], a: &MapAnalysis) -> Self {
        MapRecord {
            dense: dense.to_vec(),
            cb: a.cb,
            affine: a.affine,
            subgroup_homomorphism: a.subgroup_homomorphism,
            completely_positive: a.completely_positive,
            contractivity: a.contractivity,
        }
    }
}

/// Counts over all partial maps `Y ⊆ H → G`. Positivity and contractivity
/// counts exclude the zero map.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanSummary {
    pub source_order: usize,
    pub target_order: usize,
    pub total: u64,
    pub degenerate: u64,
    pub affine: u64,
    pub subgroup_homomorphisms: u64,
    pub completely_positive: u64,
    pub completely_contractive: u64,
    pub inconsistent: u64,
    pub inconsistent_examples: Vec<MapRecord>,
    /// Largest `upper − lower` and a map attaining it.
    pub worst_gap: f64,
    pub worst_gap_map: Option<MapRecord>,
    /// Largest cb upper bound among affine maps.
    pub max_affine_upper: f64,
    /// Maps whose cb upper bound exceeds the singleton decomposition bound.
    pub bound_violations: u64,
    /// Largest `upper / (n·Σ‖1_{y}‖)` over nonempty domains.
    pub max_bound_ratio: f64,
    /// Smallest cb lower bound among non-affine maps.
    pub min_nonaffine_lower: f64,
    pub extended_choi_checked: u64,
    pub extended_choi_failures: u64,
    /// Smallest `‖1_S‖` over non-coset subsets of the source group.
    pub min_noncoset_idempotent_norm: Option<f64>,
}

impl ScanSummary {
    fn empty(source_order: usize, target_order: usize) -> Self {
        ScanSummary {
            source_order,
            target_order,
            total: 0,
            degenerate: 0,
            affine: 0,
            subgroup_homomorphisms: 0,
            completely_positive: 0,
            completely_contractive: 0,
            inconsistent: 0,
            inconsistent_examples: Vec::new(),
            worst_gap: 0.0,
            worst_gap_map: None,
            max_affine_upper: 0.0,
            bound_violations: 0,
            max_bound_ratio: 0.0,
            min_nonaffine_lower: f64::INFINITY,
            extended_choi_checked: 0,
            extended_choi_failures: 0,
            min_noncoset_idempotent_norm: None,
        }
    }

    pub fn all_consistent(&self) -> bool {
        self.inconsistent == 0 && self.bound_violations == 0 && self.extended_choi_failures == 0
    }

    /// Ordered merge: on ties the earlier map is kept.
    fn merge(mut self, other: ScanSummary) -> Self {
        self.total += other.total;
        self.degenerate += other.degenerate;
        self.affine += other.affine;
        self.subgroup_homomorphisms += other.subgroup_homomorphisms;
        self.completely_positive += other.completely_positive;
        self.completely_contractive += other.completely_contractive;
        self.inconsistent += other.inconsistent;
        for r in other.inconsistent_examples {
            if self.inconsistent_examples.len() < KEEP_INCONSISTENT {
                self.inconsistent_examples.push(r);
            }
        }
        if other.worst_gap > self.worst_gap {
            self.worst_gap = other.worst_gap;
            self.worst_gap_map = other.worst_gap_map;
        }
        self.max_affine_upper = self.max_affine_upper.max(other.max_affine_upper);
        self.bound_violations += other.bound_violations;
        self.max_bound_ratio = self.max_bound_ratio.max(other.max_bound_ratio);
        self.min_nonaffine_lower = self.min_nonaffine_lower.min(other.min_nonaffine_lower);
        self.extended_choi_checked += other.extended_choi_checked;
        self.extended_choi_failures += other.extended_choi_failures;
        self
    }

    fn record(&mut self, ctx: &PairContext, dense: &[Option<usize>], a: &MapAnalysis, settings: &ScanSettings) {
        self.total += 1;
        if a.degenerate {
            self.degenerate += 1;
        } else {
            self.affine += u64::from(a.affine);
            self.subgroup_homomorphisms += u64::from(a.subgroup_homomorphism);
            self.completely_positive += u64::from(a.completely_positive);
            self.completely_contractive += u64::from(a.contractivity == Contractivity::Contractive);
            if a.affine {
                self.max_affine_upper = self.max_affine_upper.max(a.cb.upper);
            } else {
                self.min_nonaffine_lower = self.min_nonaffine_lower.min(a.cb.lower);
            }
            if a.cb.upper > a.singleton_bound + BOUND_SLACK {
                self.bound_violations += 1;
            }
            self.max_bound_ratio = self.max_bound_ratio.max(a.cb.upper / a.singleton_bound);
        }
        if !a.consistent {
            self.inconsistent += 1;
            if self.inconsistent_examples.len() < KEEP_INCONSISTENT {
                self.inconsistent_examples.push(MapRecord::new(dense, a));
            }
        }
        if a.cb.gap() > self.worst_gap {
            self.worst_gap = a.cb.gap();
            self.worst_gap_map = Some(MapRecord::new(dense, a));
        }
        if settings.extended_choi && !a.degenerate && (a.completely_positive || a.subgroup_homomorphism) {
            self.extended_choi_checked += 1;
            if !extended_choi_is_psd(ctx, dense, settings.tol.algebraic) {
                self.extended_choi_failures += 1;
            }
        }
    }
}

/// Choi matrices of `Φ*∘E ⊗ id_k` for `k = 1, 2, 3` are all PSD within `tol`.
pub(crate) fn extended_choi_is_psd(ctx: &PairContext, dense: &[Option<usize>], tol: f64) -> bool {
    let pairs: Vec<(usize, usize)> = dense.iter().enumerate().filter_map(|(h, a)| a.map(|a| (h, a))).collect();
    let pm = PartialMap::from_pairs(ctx.source(), ctx.target(), &pairs).expect("valid partial map");
    let ext = build_phi_alpha::<f64>(&pm).adjoint().extended();
    (1..=3).all(|k| is_psd_by_cholesky(&ext.tensor_with_identity(k).choi(), tol))
}

/// `(|G| + 1)^{|H|}`, saturating.
pub fn map_count(source: &FiniteGroup, target: &FiniteGroup) -> u128 {
    (target.order() as u128 + 1).checked_pow(source.order() as u32).unwrap_or(u128::MAX)
}

fn decode(mut index: u128, base: u128, len: usize) -> Vec<Option<usize>> {
    (0..len)
        .map(|_| {
            let d = (index % base) as usize;
            index /= base;
            d.checked_sub(1)
        })
        .collect()
}

/// Analyses `Φ_α` for every partial map `α: Y ⊆ H → G`, where `H` is the
/// context's source group, in parallel with an ordered reduction.
pub fn exhaustive_theorem_scan(ctx: &PairContext, settings: &ScanSettings) -> Result<ScanSummary, LabError> {
    let (h, g) = (ctx.source(), ctx.target());
    let total = map_count(h, g);
    if total > settings.budget {
        return Err(LabError::BudgetExceeded { maps: total, budget: settings.budget });
    }
    let base = g.order() as u128 + 1;
    let chunks = total.div_ceil(CHUNK);
    let parts: Vec<ScanSummary> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut part = ScanSummary::empty(h.order(), g.order());
            for i in c * CHUNK..((c + 1) * CHUNK).min(total) {
                let dense = decode(i, base, h.order());
                let a = ctx.analyze(&dense);
                part.record(ctx, &dense, &a, settings);
            }
            part
        })
        .collect();
    let mut summary = parts.into_iter().fold(ScanSummary::empty(h.order(), g.order()), ScanSummary::merge);
    summary.min_noncoset_idempotent_norm = ctx.min_noncoset_norm();
    Ok(summary)
}
