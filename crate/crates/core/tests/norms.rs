use proptest::prelude::*;

use cbhom::catalog::builtin_catalog;
use cbhom::repr::{a_norm, a_norm_oracle, compute_irreps, fourier_transform, inverse_fourier, is_positive_definite};
use cbhom::scalar::Cx;
use cbhom::sdp::SdpSettings;
use cbhom::{FiniteGroup, Function, Irreps};

fn groups() -> Vec<(FiniteGroup, Irreps)> {
    builtin_catalog()
        .into_iter()
        .map(|e| {
            let irreps = compute_irreps(&e.group, 1e-9, 5).unwrap();
            (e.group, irreps)
        })
        .collect()
}

fn function(g: &FiniteGroup, raw: &[(f64, f64)]) -> Function {
    Function::new(g, raw[..g.order()].iter().map(|&(a, b)| Cx::new(a, b)).collect()).unwrap()
}

fn norm(u: &Function, irreps: &Irreps) -> f64 {
    a_norm(u, irreps).unwrap().a_norm
}

fn values() -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((-2.0f64..2.0, -2.0f64..2.0), 12)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn translation_invariance(k in 0usize..15, raw in values(), s in 0usize..12) {
        let (g, irreps) = &groups()[k];
        let u = function(g, &raw);
        let n = norm(&u, irreps);
        let t = norm(&u.translate(s % g.order()), irreps);
        prop_assert!((n - t).abs() <= 1e-9 * n.max(1.0));
    }

    #[test]
    fn submultiplicative(k in 0usize..15, a in values(), b in values()) {
        let (g, irreps) = &groups()[k];
        let (u, v) = (function(g, &a), function(g, &b));
        prop_assert!(norm(&u.mul(&v), irreps) <= norm(&u, irreps) * norm(&v, irreps) + 1e-9);
    }

    #[test]
    fn sup_is_below_norm(k in 0usize..15, raw in values()) {
        let (g, irreps) = &groups()[k];
        let u = function(g, &raw);
        prop_assert!(u.sup_norm() <= norm(&u, irreps) + 1e-9);
    }

    #[test]
    fn positive_definite_norm_is_value_at_identity(k in 0usize..15, raw in values()) {
        // u(s) = Σ_t conj(f(t)) f(ts) is a coefficient of the regular representation
        let (g, irreps) = &groups()[k];
        let f = function(g, &raw);
        let u = Function::from_fn(g, |s| g.elements().fold(Cx::new(0.0, 0.0), |acc, t| acc + f.at(t).conj() * f.at(g.mul(t, s))));
        prop_assert!(is_positive_definite(&u, 1e-9));
        let r = a_norm(&u, irreps).unwrap();
        prop_assert!(r.is_positive_definite);
        prop_assert!((r.a_norm - u.at(g.identity()).re).abs() <= 1e-9 * r.a_norm.max(1.0));
    }

    #[test]
    fn fourier_round_trip(k in 0usize..15, raw in values()) {
        let (g, irreps) = &groups()[k];
        let u = function(g, &raw);
        let back = inverse_fourier(&fourier_transform(&u, irreps).unwrap(), irreps);
        for s in g.elements() {
            prop_assert!((back.at(s) - u.at(s)).norm() <= 1e-9);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn formula_matches_oracle(k in 0usize..15, raw in values()) {
        let (g, irreps) = &groups()[k];
        let u = function(g, &raw);
        let n = norm(&u, irreps);
        let o = a_norm_oracle(&u, &SdpSettings::default()).unwrap();
        prop_assert!((o.primal - n).abs() <= 1e-6 && (o.dual - n).abs() <= 1e-6, "{n} {o:?}");
    }
}

#[test]
fn wrong_group_is_rejected() {
    let all = groups();
    let u = Function::constant(&all[3].0, Cx::new(1.0, 0.0));
    assert!(a_norm(&u, &all[4].1).is_err());
}
