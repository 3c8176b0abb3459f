use num_bigint::BigUint;
use proptest::prelude::*;
use setmap_core::bounds::{
    compare, compare_symbolic, erdos_rado_upper, star_chain, stepping_up, ArrowFact, Cmp, TowerExpr,
};

fn expr() -> impl Strategy<Value = TowerExpr> {
    let leaf = prop_oneof![(0u64..6).prop_map(TowerExpr::lit), (6u64..40).prop_map(TowerExpr::lit)];
    leaf.prop_recursive(3, 12, 3, |inner| {
        prop_oneof![
            (inner.clone(), (0u64..4).prop_map(TowerExpr::lit)).prop_map(|(b, e)| TowerExpr::pow(b, e)),
            ((0u64..4).prop_map(TowerExpr::lit), inner.clone()).prop_map(|(b, e)| TowerExpr::pow(b, e)),
            prop::collection::vec(inner.clone(), 1..4).prop_map(TowerExpr::mul),
            prop::collection::vec(inner, 1..4).prop_map(TowerExpr::add),
        ]
    })
}

/// Towers of 2 and 3 whose exact values are far past f64 range but under the digit cap.
fn big_expr() -> impl Strategy<Value = TowerExpr> {
    (2u64..4, 2u64..4, 1u64..12, 0u64..3, 0u64..3).prop_map(|(a, b, c, m, s)| {
        let inner = TowerExpr::pow(TowerExpr::lit(b), TowerExpr::lit(c));
        let t = TowerExpr::pow(TowerExpr::lit(a), inner);
        TowerExpr::add(vec![TowerExpr::mul(vec![t, TowerExpr::lit(m + 1)]), TowerExpr::lit(s)])
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn normalization_keeps_value_and_is_idempotent(e in expr()) {
        let n = e.normalize();
        prop_assert_eq!(n.normalize(), n.clone());
        if let Some(v) = e.eval_capped(2000) {
            prop_assert_eq!(n.eval_capped(2000), Some(v));
        }
    }

    #[test]
    fn symbolic_comparison_is_sound(x in big_expr(), y in big_expr()) {
        let exact: Cmp = x.eval().unwrap().cmp(&y.eval().unwrap()).into();
        let sym = compare_symbolic(&x.normalize(), &y.normalize());
        prop_assert!(sym == Cmp::Unknown || sym == exact, "{} vs {}: {:?} but {:?}", x, y, sym, exact);
        prop_assert_eq!(compare(&x, &y), exact);
    }

    #[test]
    fn comparison_is_antisymmetric(x in big_expr(), y in big_expr()) {
        let (x, y) = (x.normalize(), y.normalize());
        prop_assert_eq!(compare_symbolic(&x, &y), compare_symbolic(&y, &x).reverse());
    }

    #[test]
    fn nested_powers_multiply_exponents(a in 1u64..6, b in 0u64..5, c in 0u64..5) {
        let nested = TowerExpr::pow(TowerExpr::pow(TowerExpr::lit(a), TowerExpr::lit(b)), TowerExpr::lit(c));
        let flat = TowerExpr::pow(TowerExpr::lit(a), TowerExpr::mul(vec![TowerExpr::lit(b), TowerExpr::lit(c)]));
        prop_assert_eq!(nested.eval(), flat.eval());
        let x = TowerExpr::var("x");
        let sym = TowerExpr::pow(TowerExpr::pow(TowerExpr::lit(a + 1), x.clone()), TowerExpr::lit(c + 2));
        let expect = TowerExpr::pow(TowerExpr::lit(a + 1), TowerExpr::mul(vec![TowerExpr::lit(c + 2), x]));
        prop_assert_eq!(sym.normalize(), expect.normalize());
    }

    #[test]
    fn star_chain_of_literals(a in 1u64..5, b in 1u64..4, c in 1u64..3) {
        let chain = star_chain(&[TowerExpr::lit(a), TowerExpr::lit(b), TowerExpr::lit(c)]).unwrap();
        let direct = BigUint::from(a).pow(u32::try_from(b.pow(c as u32)).unwrap());
        prop_assert_eq!(chain.eval(), Some(direct));
    }

    #[test]
    fn erdos_rado_pairs(l in 2u64..8, r in 2u64..5) {
        let e = erdos_rado_upper(2, l, &BigUint::from(r)).unwrap();
        let direct = BigUint::from(r).pow((r * (l - 2) + 1) as u32);
        prop_assert_eq!(e.eval(), Some(direct));
    }

    #[test]
    fn stepping_up_commutes_with_instantiation(l in 4u64..9) {
        let sym = stepping_up(&ArrowFact::two_l_triples()).unwrap();
        let late = sym.instantiate(l).unwrap();
        let early = stepping_up(&ArrowFact::two_l_triples().instantiate(l).unwrap()).unwrap();
        prop_assert_eq!(&late.n, &early.n);
        prop_assert_eq!(&late.targets, &early.targets);
        prop_assert_eq!(late.k, early.k);
        prop_assert_eq!(sym.replay().unwrap(), sym);
    }
}
