use super::*;
use crate::cb::Contractivity;
use approx::assert_relative_eq;

fn settings() -> LabSettings {
    LabSettings::default()
}

fn irreps(g: &FiniteGroup) -> IrrepSet<f64> {
    compute_irreps(g, 1e-9, 3).unwrap()
}

fn pm(h: &FiniteGroup, g: &FiniteGroup, pairs: &[(usize, usize)]) -> PartialMap {
    PartialMap::from_pairs(h, g, pairs).unwrap()
}

#[test]
fn phi_of_identity_is_identity() {
    let g = FiniteGroup::cyclic(4);
    let alpha = PartialMap::total(&g, &g, |s| s).unwrap();
    let phi = build_phi_alpha::<f64>(&alpha);
    assert_eq!(phi, LinearFunctionMap::identity(&g));
    let r = classify(&phi, &settings()).unwrap();
    assert!(r.cb.contains(1.0, 1e-6));
}

#[test]
fn doubling_into_z4_is_positive_and_contractive() {
    let (z2, z4) = (FiniteGroup::cyclic(2), FiniteGroup::cyclic(4));
    let r = classify(&build_phi_alpha(&pm(&z2, &z4, &[(0, 0), (1, 2)])), &settings()).unwrap();
    assert!(r.is_subgroup_homomorphism && r.completely_positive);
    assert_eq!(r.completely_contractive, Contractivity::Contractive);
    assert!(r.cb.contains(1.0, 1e-6));
    assert!(r.consistent);
}

#[test]
fn restriction_to_non_coset_multiplies_by_indicator() {
    let z4 = FiniteGroup::cyclic(4);
    let alpha = pm(&z4, &z4, &[(0, 0), (1, 1)]);
    let phi = build_phi_alpha::<f64>(&alpha);
    let ind = FunctionOnGroup::indicator(&ElementSet::new(&z4, [0, 1]));
    assert_eq!(phi, LinearFunctionMap::multiplication(&ind));
    let r = classify(&phi, &settings()).unwrap();
    assert!(!r.is_affine);
    assert!(r.cb.contains(SAEKI_BOUND, 1e-9));
    assert!(r.cb.relative_gap() <= 1e-3);
    assert_eq!(r.completely_contractive, Contractivity::NotContractive);
    assert!(r.consistent && r.bounds_hold);
}

#[test]
fn translation_is_affine_not_positive() {
    let z4 = FiniteGroup::cyclic(4);
    let alpha = PartialMap::total(&z4, &z4, |h| (h + 1) % 4).unwrap();
    let r = classify(&build_phi_alpha(&alpha), &settings()).unwrap();
    assert!(r.is_affine && !r.is_subgroup_homomorphism && !r.completely_positive);
    assert!(r.cb.contains(1.0, 1e-6));
    assert!(r.consistent);
    assert_eq!(r.pieces.len(), 1);
}

#[test]
fn extract_examples() {
    let z2 = FiniteGroup::cyclic(2);
    let id = LinearFunctionMap::<f64>::identity(&z2);
    assert_eq!(extract_alpha(&id).unwrap(), PartialMap::total(&z2, &z2, |h| h).unwrap());
    let eval0 = LinearFunctionMap::<f64>::from_fn(&z2, &z2, |_, s| cre(if s == 0 { 1.0 } else { 0.0 }));
    let a = extract_alpha(&eval0).unwrap();
    assert_eq!(a.domain().len(), 2);
    assert!(a.pairs().all(|(_, s)| s == 0));
    let sum = LinearFunctionMap::<f64>::from_fn(&z2, &z2, |h, _| cre(if h == 0 { 1.0 } else { 0.0 }));
    assert!(matches!(extract_alpha(&sum), Err(LabError::NotAHomomorphism { h: 0, u: 0, v: 1, .. })));
}

#[test]
fn idempotent_examples() {
    let z4 = FiniteGroup::cyclic(4);
    let set = irreps(&z4);
    let r = idempotent_report(&ElementSet::new(&z4, [0, 2]), &set).unwrap();
    assert_relative_eq!(r.norm, 1.0, epsilon = 1e-9);
    assert!(r.is_subgroup && r.is_positive_definite && r.consistent);
    let r = idempotent_report(&ElementSet::new(&z4, [1, 3]), &set).unwrap();
    assert_relative_eq!(r.norm, 1.0, epsilon = 1e-9);
    assert!(r.is_coset && !r.is_subgroup && !r.is_positive_definite && r.consistent);
    let r = idempotent_report(&ElementSet::new(&z4, [0, 1]), &set).unwrap();
    assert_relative_eq!(r.norm, SAEKI_BOUND, epsilon = 1e-9);
    assert!(!r.is_coset && r.consistent);
    assert!(matches!(idempotent_report(&ElementSet::empty(&z4), &set), Err(LabError::EmptySupport)));
}

#[test]
fn diagonal_examples() {
    for g in [FiniteGroup::cyclic(2), FiniteGroup::trivial(), FiniteGroup::symmetric3()] {
        let r = approximate_diagonal(&irreps(&g)).unwrap();
        assert!(r.passes(1e-9), "{g:?}");
    }
    let r = approximate_diagonal(&irreps(&FiniteGroup::trivial())).unwrap();
    assert_eq!(r.w.values(), &[cre(1.0)]);
}

#[test]
fn range_examples() {
    let (z2, z4) = (FiniteGroup::cyclic(2), FiniteGroup::cyclic(4));
    let r = range_characterization(&build_phi_alpha(&pm(&z2, &z4, &[(0, 0), (1, 1)]))).unwrap();
    assert!(r.equal);
    assert_eq!(r.column_rank, 2);
    let r = range_characterization(&LinearFunctionMap::zero(&z4, &z2)).unwrap();
    assert!(r.equal);
    assert_eq!((r.column_rank, r.vanishing.len()), (0, 2));
    let r = range_characterization(&build_phi_alpha(&PartialMap::total(&z4, &z2, |_| 1).unwrap())).unwrap();
    assert!(r.equal);
    assert_eq!(r.classes, vec![vec![0, 1, 2, 3]]);
}

#[test]
fn walter_examples() {
    let z4 = FiniteGroup::cyclic(4);
    let shift = build_phi_alpha(&PartialMap::total(&z4, &z4, |h| (h + 1) % 4).unwrap());
    let w = walter_classify(&shift, &settings()).unwrap();
    assert_eq!((w.s0, w.beta.clone()), (1, vec![0, 1, 2, 3]));
    let neg = build_phi_alpha(&PartialMap::total(&z4, &z4, |h| (4 - h) % 4).unwrap());
    let w = walter_classify(&neg, &settings()).unwrap();
    assert_eq!((w.s0, w.beta.clone()), (0, vec![0, 3, 2, 1]));
    assert!(w.completely_positive);
    let double = LinearFunctionMap::<f64>::identity(&z4).scaled(cre(2.0));
    assert!(matches!(walter_classify(&double, &settings()), Err(LabError::NotContractive { .. })));
}

#[test]
fn inversion_examples() {
    let b = inversion_map_report(&FiniteGroup::cyclic(4), &settings()).unwrap();
    assert!(b.contains(1.0, 1e-6));
    let b = inversion_map_report(&FiniteGroup::trivial(), &settings()).unwrap();
    assert!(b.contains(1.0, 1e-9));
    let b = inversion_map_report(&FiniteGroup::symmetric3(), &settings()).unwrap();
    assert!(b.lower >= 1.0 && b.lower <= b.upper + 1e-6);
}

fn scan(h: &FiniteGroup, g: &FiniteGroup) -> ScanSummary {
    let ctx = PairContext::new(h, g, 0, Tolerances::default()).unwrap();
    exhaustive_theorem_scan(&ctx, &ScanSettings::default()).unwrap()
}

#[test]
fn scan_examples() {
    let z2 = FiniteGroup::cyclic(2);
    let s = scan(&z2, &z2);
    assert_eq!((s.total, s.affine, s.subgroup_homomorphisms, s.degenerate), (9, 8, 3, 1));
    assert!(s.all_consistent());
    let t = FiniteGroup::trivial();
    let s = scan(&t, &t);
    assert_eq!(s.total, 2);
    assert!(s.all_consistent());
    let s = scan(&z2, &FiniteGroup::cyclic(4));
    assert_eq!(s.total, 25);
    assert!(s.all_consistent());
}

#[test]
fn budget_is_enforced() {
    let ctx = PairContext::new(&FiniteGroup::cyclic(12), &FiniteGroup::cyclic(12), 0, Tolerances::default()).unwrap();
    assert!(matches!(
        exhaustive_theorem_scan(&ctx, &ScanSettings::default()),
        Err(LabError::BudgetExceeded { .. })
    ));
}

#[test]
fn fast_predicates_match_partial_map() {
    let (h, g) = (FiniteGroup::symmetric3(), FiniteGroup::cyclic(2));
    let ctx = PairContext::new(&h, &g, 0, Tolerances::default()).unwrap();
    let total = map_count(&h, &g);
    for i in (0..total).step_by(7) {
        let mut k = i;
        let dense: Vec<Option<usize>> = (0..6)
            .map(|_| {
                let d = (k % 3) as usize;
                k /= 3;
                d.checked_sub(1)
            })
            .collect();
        let alpha = PartialMap::from_dense(&h, &g, &dense).unwrap();
        assert_eq!(ctx.is_affine(&dense), alpha.is_affine().is_some(), "{dense:?}");
        assert_eq!(ctx.is_subgroup_homomorphism(&dense), alpha.is_group_homomorphism(), "{dense:?}");
    }
}

#[test]
fn affine_certificates_on_nonabelian_targets() {
    let g = FiniteGroup::symmetric3();
    let ctx = PairContext::new(&g, &g, 0, Tolerances::default()).unwrap();
    for a in g.elements() {
        for b in g.elements() {
            // two-sided translations are affine
            let dense: Vec<Option<usize>> = g.elements().map(|h| Some(g.mul(g.mul(a, h), b))).collect();
            assert!(ctx.is_affine(&dense));
            let bound = ctx.affine_upper_bound(&dense, &ctx.blocks(&dense));
            assert!(bound <= 1.0 + 1e-9, "{a} {b}: {bound}");
        }
    }
}

#[test]
fn classify_agrees_with_fast_analysis_on_small_nonabelian_pair() {
    let (h, g) = (FiniteGroup::cyclic(2), FiniteGroup::symmetric3());
    let ctx = PairContext::new(&h, &g, 0, Tolerances::default()).unwrap();
    for i in 0..map_count(&h, &g) {
        let dense = vec![((i % 7) as usize).checked_sub(1), ((i / 7) as usize).checked_sub(1)];
        let fast = ctx.analyze(&dense);
        let full = classify_partial(&ctx, &PartialMap::from_dense(&h, &g, &dense).unwrap(), &settings()).unwrap();
        assert!(fast.consistent && full.consistent && full.bounds_hold, "{dense:?}");
        assert_eq!(fast.contractivity, full.completely_contractive);
        assert!(full.cb.lower >= fast.cb.lower - 1e-9 && full.cb.upper <= fast.cb.upper + 1e-9);
    }
}
