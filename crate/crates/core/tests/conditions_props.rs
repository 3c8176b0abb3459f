use proptest::prelude::*;
use setmap_core::conditions::{
    amalgamate, chain_union, extend_with_point, extends, random_compatible_pair, Background, Condition,
    ConditionDoc,
};
use setmap_core::random::{random_family, rng_from_seed};
use setmap_core::setmap::Carrier;
use setmap_core::ElemSet;

fn background(seed: u64, m: usize, k: usize) -> std::sync::Arc<Background> {
    let gamma = random_family(&mut rng_from_seed(seed), Carrier::new(m).unwrap(), &[3], seed.is_multiple_of(2));
    Background::new(gamma, k).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn compatible_pairs_amalgamate(seed: u64, m in 3usize..=12, k in 2usize..=3, low in 1u32..5) {
        prop_assume!(k <= m);
        let bg = background(seed, m, k);
        let (pi, pj) = random_compatible_pair(&mut rng_from_seed(!seed), &bg, low).unwrap();
        let q = amalgamate(&pi, &pj).unwrap();
        prop_assert!(q.is_coherent());
        prop_assert!(extends(&q, &pi).unwrap() && extends(&q, &pj).unwrap());
        prop_assert_eq!(q.support(), pi.support().union(pj.support()));
        prop_assert_eq!(amalgamate(&pj, &pi).unwrap().support(), q.support());
    }

    #[test]
    fn point_extensions_chain(seed: u64, m in 3usize..=12, k in 2usize..=3) {
        prop_assume!(k <= m);
        let bg = background(seed, m, k);
        let mut chain = vec![Condition::empty(&bg)];
        for alpha in 0..m {
            let prev = chain.last().unwrap();
            let next = extend_with_point(prev, alpha).unwrap();
            prop_assert!(extends(&next, prev).unwrap());
            for (t, img) in prev.images() {
                prop_assert_eq!(next.image(t), Some(img));
                prop_assert!(!img.contains(alpha));
            }
            chain.push(next);
        }
        let u = chain_union(&chain).unwrap();
        prop_assert_eq!(u.support(), ElemSet::full(m));
        prop_assert_eq!(&u, chain.last().unwrap());
    }

    #[test]
    fn document_round_trip(seed: u64, m in 3usize..=10) {
        let bg = background(seed, m, 2);
        let (pi, _) = random_compatible_pair(&mut rng_from_seed(seed ^ 1), &bg, 3).unwrap();
        let text = serde_json::to_string(&pi.to_doc()).unwrap();
        let doc: ConditionDoc = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(Condition::from_doc(&bg, &doc).unwrap(), pi);
    }
}

#[test]
fn broken_chains_are_rejected() {
    let bg = background(3, 6, 2);
    let a = extend_with_point(&Condition::empty(&bg), 0).unwrap();
    let b = extend_with_point(&a, 1).unwrap();
    assert!(chain_union(&[b, a]).is_err());
    assert!(chain_union(&[]).is_err());
}
