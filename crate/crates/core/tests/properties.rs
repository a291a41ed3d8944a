//! Randomized invariant checks across the whole library surface.

use nervelab_core::adc::ChainMap;
use nervelab_core::cat2::enumerate::iso2_isomorphic;
use nervelab_core::homology::{betti, chains_from_value, chains_to_value, Completeness};
use nervelab_core::matrix::IntMat;
use nervelab_core::nerve::{
    diagonal, multinerve2, nerve1, normalized_chains, street_nerve2, total_complex,
};
use nervelab_core::theta::{compose, identity, random_morphism, random_object, theta_dual};
use nervelab_core::{
    fin2cat_from_value, fin2cat_to_value, homotopy_h, oriental_complex, tensor, verify_homotopy,
    Budget, ChainComplexZ, Error, Fin2Cat, FinCat,
};
use num_bigint::BigInt;
use num_traits::Zero;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn budget() -> Budget {
    Budget::new(500_000_000)
}

fn cat_pool() -> Vec<FinCat> {
    vec![
        FinCat::point(),
        FinCat::chain(1),
        FinCat::chain(2),
        FinCat::chain(3),
        FinCat::parallel_pair(),
        FinCat::product_of(&[&FinCat::chain(1), &FinCat::chain(1)]),
        FinCat::chain(2).op(),
    ]
}

fn cat2_pool() -> Vec<Fin2Cat> {
    use nervelab_core::cat2::{embed1as2, oriental2, realize2, sigma_prime, two_disc};
    use nervelab_core::theta::parse_object;
    vec![
        oriental2(),
        two_disc(),
        sigma_prime(&FinCat::parallel_pair()),
        sigma_prime(&FinCat::chain(1)),
        embed1as2(&FinCat::chain(2)),
        realize2(&parse_object("(Δ2; Δ1, Δ1)").unwrap()).unwrap(),
        realize2(&parse_object("(Δ1; Δ2)").unwrap()).unwrap(),
    ]
}

fn levels_from_mask(mask: u8) -> Vec<usize> {
    (0..4).filter(|i| mask & (1 << i) != 0).map(|i| i + 1).collect()
}

fn sym_diff(a: u8, b: u8) -> u8 {
    (a ^ b) & 0xF
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn dual_is_involutive(seed in any::<u64>(), mask in 0u8..16) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = random_object(&mut rng, 3, 3);
        let j = levels_from_mask(mask);
        prop_assert_eq!(theta_dual(&theta_dual(&s, &j), &j), s);
    }

    #[test]
    fn duals_compose_by_symmetric_difference(seed in any::<u64>(), a in 0u8..16, b in 0u8..16) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = random_object(&mut rng, 3, 3);
        let lhs = theta_dual(&theta_dual(&s, &levels_from_mask(a)), &levels_from_mask(b));
        let rhs = theta_dual(&s, &levels_from_mask(sym_diff(a, b)));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn dual_preserves_generator_counts(seed in any::<u64>(), mask in 0u8..16) {
        use nervelab_core::generator_counts;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = random_object(&mut rng, 3, 3);
        let d = theta_dual(&s, &levels_from_mask(mask));
        prop_assert_eq!(generator_counts(&s), generator_counts(&d));
    }

    #[test]
    fn composition_is_associative(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = random_object(&mut rng, 2, 2);
        let t = random_object(&mut rng, 2, 2);
        let u = random_object(&mut rng, 2, 2);
        let v = random_object(&mut rng, 2, 2);
        let f = random_morphism(&mut rng, &s, &t);
        let g = random_morphism(&mut rng, &t, &u);
        let h = random_morphism(&mut rng, &u, &v);
        let left = compose(&compose(&h, &g).unwrap(), &f).unwrap();
        let right = compose(&h, &compose(&g, &f).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn identities_are_neutral(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = random_object(&mut rng, 3, 2);
        let t = random_object(&mut rng, 3, 2);
        let f = random_morphism(&mut rng, &s, &t);
        prop_assert_eq!(&compose(&identity(&t), &f).unwrap(), &f);
        prop_assert_eq!(&compose(&f, &identity(&s)).unwrap(), &f);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn oriental_homotopy_identity_holds(n in 0u32..=5) {
        let k = oriental_complex(n);
        k.validate().unwrap();
        let verdict = verify_homotopy(&k, &homotopy_h(n)).unwrap();
        prop_assert!(verdict.ok);
    }

    #[test]
    fn oriental_tensor_is_contractible(n in 0u32..=2, m in 0u32..=2) {
        let t = tensor(&oriental_complex(n), &oriental_complex(m));
        t.validate().unwrap();
        let c = ChainComplexZ::from_directed(&t);
        let h = betti(&c, c.top_degree(), Completeness::Complete).unwrap();
        prop_assert!(h.is_point());
    }

    #[test]
    fn tensor_unit_is_neutral(n in 0u32..=3) {
        let k = oriental_complex(n);
        let unit = oriental_complex(0);
        let t = tensor(&k, &unit);
        prop_assert_eq!(t.ranks(), k.ranks());
        let c = ChainComplexZ::from_directed(&t);
        let ck = ChainComplexZ::from_directed(&k);
        for (a, b) in c.diffs.iter().zip(ck.diffs.iter()) {
            prop_assert_eq!(a.entries(), b.entries());
        }
    }
}

fn arb_matrix() -> impl Strategy<Value = IntMat> {
    (1usize..5, 1usize..5).prop_flat_map(|(r, c)| {
        proptest::collection::vec(-4i64..=4, r * c).prop_map(move |vals| {
            let dense: Vec<Vec<i64>> =
                vals.chunks(c).map(|row| row.to_vec()).collect();
            IntMat::from_dense(&dense)
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn rank_is_transpose_invariant(m in arb_matrix()) {
        prop_assert_eq!(m.rank(), m.transpose().rank());
    }

    #[test]
    fn smith_factors_divide_in_order(m in arb_matrix()) {
        let factors = m.smith_normal_form();
        let nonzero: Vec<&BigInt> = factors.iter().filter(|f| !f.is_zero()).collect();
        prop_assert_eq!(nonzero.len(), m.rank());
        for w in nonzero.windows(2) {
            prop_assert!((w[1] % w[0]).is_zero(), "{} does not divide {}", w[0], w[1]);
        }
    }

    #[test]
    fn rank_bounded_by_shape(m in arb_matrix()) {
        prop_assert!(m.rank() <= m.rows.min(m.cols));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn nerve_satisfies_simplicial_identities(idx in 0usize..7, dmax in 1usize..4) {
        let pool = cat_pool();
        let ner = nerve1(&pool[idx], dmax, &mut budget()).unwrap();
        ner.validate().unwrap();
        for n in 0..dmax {
            for x in 0..ner.card(n) {
                for i in 0..=n {
                    prop_assert!(ner.is_degenerate(n + 1, ner.degen(n, i, x)));
                }
            }
        }
    }

    #[test]
    fn street_nerve_satisfies_simplicial_identities(idx in 0usize..7, dmax in 1usize..4) {
        let pool = cat2_pool();
        let ner = street_nerve2(&pool[idx], dmax, &mut budget()).unwrap();
        ner.validate().unwrap();
        for n in 0..dmax {
            for x in 0..ner.card(n) {
                for i in 0..=n {
                    prop_assert!(ner.is_degenerate(n + 1, ner.degen(n, i, x)));
                }
            }
        }
    }

    #[test]
    fn multinerve_is_bisimplicial(idx in 0usize..7) {
        let pool = cat2_pool();
        let x = multinerve2(&pool[idx], 2, 2, &mut budget()).unwrap();
        x.validate().unwrap();
    }

    #[test]
    fn diagonal_and_total_homology_agree(idx in 0usize..7) {
        let pool = cat2_pool();
        let x = multinerve2(&pool[idx], 2, 2, &mut budget()).unwrap();
        let hd = betti(
            &normalized_chains(&diagonal(&x).unwrap(), 1).unwrap(),
            1,
            Completeness::Truncated,
        )
        .unwrap();
        let ht = betti(&total_complex(&x, 1).unwrap(), 1, Completeness::Truncated).unwrap();
        prop_assert_eq!(&hd.betti, &ht.betti);
        prop_assert_eq!(&hd.torsion, &ht.torsion);
    }

    #[test]
    fn two_category_json_round_trips(idx in 0usize..7) {
        let pool = cat2_pool();
        let v = fin2cat_to_value(&pool[idx]);
        let back = fin2cat_from_value(&v).unwrap();
        prop_assert_eq!(back.cells(), pool[idx].cells());
        prop_assert!(iso2_isomorphic(&back, &pool[idx], &mut budget()).unwrap());
    }

    #[test]
    fn chain_export_round_trips(idx in 0usize..7, dmax in 1usize..3) {
        let pool = cat2_pool();
        let ner = street_nerve2(&pool[idx], dmax + 1, &mut budget()).unwrap();
        let c = normalized_chains(&ner, dmax).unwrap();
        let v = chains_to_value(&c, Completeness::Truncated).unwrap();
        let (back, compl) = chains_from_value(&v).unwrap();
        prop_assert_eq!(compl, Completeness::Truncated);
        prop_assert_eq!(&back.ranks, &c.ranks);
        for (a, b) in back.diffs.iter().zip(c.diffs.iter()) {
            prop_assert_eq!(a.entries(), b.entries());
        }
    }

    #[test]
    fn tiny_budgets_fail_cleanly(idx in 0usize..7, limit in 1u64..40) {
        let pool = cat2_pool();
        let mut b = Budget::new(limit);
        match street_nerve2(&pool[idx], 3, &mut b) {
            Ok(_) => {}
            Err(Error::BudgetExceeded { limit: l }) => prop_assert_eq!(l, limit),
            Err(other) => prop_assert!(false, "unexpected error {other}"),
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn retraction_composed_with_inclusion_is_tracked_by_h(n in 1u32..=4) {
        // dh + hd = sr − id pointwise on random chains
        let k = oriental_complex(n);
        let hom = homotopy_h(n);
        let verdict = verify_homotopy(&k, &hom).unwrap();
        prop_assert!(verdict.ok);
        // both sides of the homotopy are endomaps of the same complex
        let sr: &ChainMap = &hom.target_map;
        for p in 0..=k.top_degree() {
            let m = &sr.maps[p];
            prop_assert_eq!((m.rows, m.cols), (k.rank(p), k.rank(p)));
        }
    }
}
