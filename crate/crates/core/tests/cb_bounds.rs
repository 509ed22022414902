use proptest::prelude::*;

use cbhom::cb::{cb_norm, CbSettings, Contractivity, MatrixMap};
use cbhom::lab::{build_phi_alpha, cb_sandwich, LabSettings};
use cbhom::linalg::op_norm;
use cbhom::repr::{compute_irreps, is_positive_definite};
use cbhom::scalar::Cx;
use cbhom::{ElementSet, FiniteGroup, Function, LinearMap, PartialMap};

fn small_groups() -> Vec<FiniteGroup> {
    vec![FiniteGroup::cyclic(2), FiniteGroup::cyclic(3), FiniteGroup::cyclic(4), FiniteGroup::abelian(&[2, 2]), FiniteGroup::symmetric3()]
}

fn random_map(source: &FiniteGroup, target: &FiniteGroup, raw: &[f64]) -> LinearMap {
    LinearMap::from_fn(source, target, |h, s| Cx::new(raw[h * 6 + s], raw[36 + h * 6 + s]))
}

fn sandwich(phi: &LinearMap) -> cbhom::Bound {
    cb_sandwich(phi, &LabSettings::default()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn composition_is_submultiplicative(a in 0usize..5, b in 0usize..4, c in 0usize..4,
                                        r1 in prop::collection::vec(-1.0f64..1.0, 72),
                                        r2 in prop::collection::vec(-1.0f64..1.0, 72)) {
        let gs = small_groups();
        let (g, h, k) = (&gs[a], &gs[b], &gs[c]);
        let phi = random_map(g, h, &r1);
        let psi = random_map(h, k, &r2);
        let composite = LinearMap::new(g, k, psi.matrix() * phi.matrix()).unwrap();
        let (p, q, pq) = (sandwich(&phi), sandwich(&psi), sandwich(&composite));
        prop_assert!(pq.lower <= p.upper * q.upper + 1e-6, "{pq:?} vs {p:?}·{q:?}");
    }

    #[test]
    fn diagonal_bound_is_below_upper(a in 0usize..5, b in 0usize..5, r in prop::collection::vec(-1.0f64..1.0, 72)) {
        let gs = small_groups();
        let phi = random_map(&gs[a], &gs[b], &r);
        let si = compute_irreps(&gs[a], 1e-9, 1).unwrap();
        let ti = compute_irreps(&gs[b], 1e-9, 1).unwrap();
        let blocks = phi.block_map(&si, &ti).unwrap();
        let bound = cb_norm(&blocks, &CbSettings::default()).unwrap();
        prop_assert!(phi.diagonal_lower_bound(&blocks) <= bound.upper + 1e-6);
    }

    #[test]
    fn positive_definite_multipliers_are_cp_with_norm_at_identity(raw in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 6)) {
        let g = FiniteGroup::symmetric3();
        let f = Function::new(&g, raw.iter().map(|&(a, b)| Cx::new(a, b)).collect()).unwrap();
        let u = Function::from_fn(&g, |s| g.elements().fold(Cx::new(0.0, 0.0), |acc, t| acc + f.at(t).conj() * f.at(g.mul(t, s))));
        prop_assume!(u.at(0).re > 1e-3);
        prop_assert!(is_positive_definite(&u, 1e-9));
        let phi = LinearMap::multiplication(&u);
        let irreps = compute_irreps(&g, 1e-9, 2).unwrap();
        let blocks = phi.block_map(&irreps, &irreps).unwrap();
        prop_assert!(blocks.is_completely_positive(1e-9));
        let one = (0..blocks.cod().len()).map(|p| op_norm(&blocks.unit_image_of_identity(p))).fold(0.0, f64::max);
        let b = cb_norm(&blocks, &CbSettings::default()).unwrap();
        prop_assert!(b.contains(one, 1e-6), "{b:?} vs ‖φ(1)‖ = {one}");
        prop_assert!((one - u.at(0).re).abs() <= 1e-9);
    }
}

#[test]
fn subgroup_homomorphisms_have_cb_norm_one() {
    let (s3, z2) = (FiniteGroup::symmetric3(), FiniteGroup::cyclic(2));
    // the sign map S3 → Z2 and the inclusion Z2 → S3 onto a reflection subgroup
    let sign = PartialMap::total(&s3, &z2, |h| usize::from(s3.element_order(h) == 2)).unwrap();
    assert!(sign.is_group_homomorphism());
    let reflection = s3.elements().find(|&h| s3.element_order(h) == 2).unwrap();
    let incl = PartialMap::total(&z2, &s3, |h| if h == 0 { s3.identity() } else { reflection }).unwrap();
    assert!(incl.is_group_homomorphism());
    for alpha in [sign, incl] {
        let b = sandwich(&build_phi_alpha(&alpha));
        assert!(b.contains(1.0, 1e-6), "{b:?}");
        assert_eq!(b.completely_contractive(1e-6), Contractivity::Contractive);
    }
}

#[test]
fn saeki_multiplier_sandwich() {
    let z4 = FiniteGroup::cyclic(4);
    let u = Function::indicator(&ElementSet::new(&z4, [0, 1]));
    let b = sandwich(&LinearMap::multiplication(&u));
    let want = 0.5 * (1.0 + 2f64.sqrt());
    assert!(b.contains(want, 1e-9));
    assert!(b.relative_gap() <= 1e-3);
}

#[test]
fn transpose_tensor_identity_is_not_positive() {
    for k in 1..=3 {
        let choi = MatrixMap::<f64>::transpose(2).tensor_with_identity(k).choi();
        assert!(cbhom::linalg::min_eigenvalue(&choi) < -0.5);
    }
    let b = cb_norm(&MatrixMap::<f64>::transpose(3).to_block_map(), &CbSettings::default()).unwrap();
    assert!(b.contains(3.0, 1e-6), "{b:?}");
}
