use crate::cb::{cb_norm, CbBound, CbError, Contractivity, LinearFunctionMap};
use crate::group::{ElementSet, PartialMap};

use super::{extract_alpha, LabError, LabSettings, PairContext};

/// Slack allowed in the decomposition bounds.
const BOUND_SLACK: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq)]
pub struct ClassificationReport {
    pub is_algebra_homomorphism: bool,
    pub alpha: Option<PartialMap>,
    pub domain: ElementSet,
    /// Always true at finite scale: singletons are cosets.
    pub is_piecewise_affine: bool,
    /// Greedy decomposition of the domain into cosets carrying affine pieces.
    pub pieces: Vec<ElementSet>,
    pub is_affine: bool,
    pub is_subgroup_homomorphism: bool,
    /// `Φ = 0`; affine and positive by convention.
    pub degenerate: bool,
    pub cb: CbBound<f64>,
    pub completely_contractive: Contractivity,
    pub completely_positive: bool,
    /// `n·Σ_i ‖1_{Y_i}‖` over the singleton decomposition.
    pub singleton_bound: f64,
    /// `n·Σ_i ‖1_{Y_i}‖` over [`pieces`](Self::pieces).
    pub decomposition_bound: f64,
    /// `cb.upper` is within both decomposition bounds.
    pub bounds_hold: bool,
    /// (completely contractive ⟺ affine) and (completely positive ⟺ subgroup homomorphism).
    pub consistent: bool,
}

/// Classifies an algebra homomorphism `A(G) → A(H)`.
pub fn classify(phi: &LinearFunctionMap<f64>, settings: &LabSettings) -> Result<ClassificationReport, LabError> {
    let alpha = extract_alpha(phi)?;
    let ctx = PairContext::new(alpha.source(), alpha.target(), settings.seed, settings.tol)?;
    classify_partial(&ctx, &alpha, settings)
}

/// Classifies `Φ_α` for a partial map belonging to the context's pair of groups.
pub fn classify_partial(ctx: &PairContext, alpha: &PartialMap, settings: &LabSettings) -> Result<ClassificationReport, LabError> {
    let dense = alpha.dense();
    let mut a = ctx.analyze(&dense);
    let pieces = ctx.affine_decomposition(&dense);
    if !a.degenerate {
        a.cb.upper = a.cb.upper.min(ctx.piecewise_upper_bound(&dense, &pieces));
        if a.cb.relative_gap() > settings.cb.gap {
            let refined = match cb_norm(&ctx.block_map(&dense), &settings.cb) {
                Ok(b) => Some(b),
                Err(CbError::NonConvergence { bound, .. }) => Some(bound),
                Err(CbError::TooLarge { .. }) => None,
                Err(e) => return Err(e.into()),
            };
            if let Some(r) = refined {
                a.cb = a.cb.meet(&r);
            }
        }
        a.settle(ctx.tolerances());
    }
    let decomposition_bound = pieces.len() as f64 * pieces.iter().map(|&p| ctx.set_norm(p)).sum::<f64>();
    let bounds_hold =
        a.cb.upper <= a.singleton_bound + BOUND_SLACK && a.cb.upper <= decomposition_bound + BOUND_SLACK;
    Ok(ClassificationReport {
        is_algebra_homomorphism: true,
        alpha: Some(alpha.clone()),
        domain: alpha.domain().clone(),
        is_piecewise_affine: true,
        pieces: pieces.iter().map(|&p| ElementSet::from_mask(ctx.source(), p)).collect(),
        is_affine: a.affine,
        is_subgroup_homomorphism: a.subgroup_homomorphism,
        degenerate: a.degenerate,
        cb: a.cb,
        completely_contractive: a.contractivity,
        completely_positive: a.completely_positive,
        singleton_bound: a.singleton_bound,
        decomposition_bound,
        bounds_hold,
        consistent: a.consistent,
    })
}
