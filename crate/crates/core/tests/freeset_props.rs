use proptest::prelude::*;
use setmap_core::bits::KSubsets;
use setmap_core::freeset::{is_free, max_free_set, max_free_set_of};
use setmap_core::ramsey::is_type_homogeneous;
use setmap_core::random::{random_family, rng_from_seed};
use setmap_core::setmap::{generate, Carrier};
use setmap_core::ElemSet;

fn naive_max_free(f: &setmap_core::setmap::SetMapping) -> usize {
    let m = f.carrier().size();
    (0u64..1 << m)
        .map(ElemSet)
        .filter(|&h| is_free(f, h).unwrap())
        .map(ElemSet::len)
        .max()
        .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn search_is_sound_and_optimal(seed: u64, m in 3usize..=8, k in 2usize..=4) {
        prop_assume!(k <= m);
        let gamma = random_family(&mut rng_from_seed(seed), Carrier::new(m).unwrap(), &[2, 3], seed % 2 == 0);
        let f = generate(&gamma, k).unwrap();
        let r = max_free_set_of(&f, u64::MAX).unwrap();
        prop_assert!(r.exhausted);
        prop_assert!(is_free(&f, r.witness).unwrap());
        prop_assert_eq!(r.witness.len(), r.max_size);
        prop_assert_eq!(r.max_size, naive_max_free(&f));
    }

    #[test]
    fn larger_budget_never_shrinks(seed: u64, m in 6usize..=14, b in 1u64..200) {
        let gamma = random_family(&mut rng_from_seed(seed), Carrier::new(m).unwrap(), &[3], true);
        let small = max_free_set(&gamma, 3, b).unwrap();
        let large = max_free_set(&gamma, 3, 4 * b).unwrap();
        prop_assert!(small.max_size <= large.max_size);
        prop_assert!(is_free(&generate(&gamma, 3).unwrap(), small.witness).unwrap());
        prop_assert!(small.exhausted || small.nodes_explored >= b);
    }

    #[test]
    fn free_sets_avoid_homogeneous_five_sets(seed: u64, m in 6usize..=12) {
        let gamma = random_family(&mut rng_from_seed(seed), Carrier::new(m).unwrap(), &[2, 3], seed % 2 == 0);
        let r = max_free_set(&gamma, 4, u64::MAX).unwrap();
        for b in KSubsets::of(r.witness, 5) {
            prop_assert!(!is_type_homogeneous(&gamma, b), "{:?} inside {:?}", b, r.witness);
        }
    }
}
