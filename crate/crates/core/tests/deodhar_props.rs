use std::sync::Arc;

use deodhar_core::deodhar::{
    classify, enumerate_subexpr, gdim_d, subset_solutions, verify_deodhar_identity, DEFAULT_MAX_SUBEXPR_LEN,
};
use deodhar_core::hecke::HeckeElement;
use deodhar_core::oracles::brute_force_subset_count;
use deodhar_core::{CoxeterSystem, Expression, Hecke, LaurentPoly};
use num_bigint::BigUint;
use proptest::prelude::*;

const CAP: usize = DEFAULT_MAX_SUBEXPR_LEN;

fn algebra(g: &str) -> Hecke {
    Hecke::new(Arc::new(CoxeterSystem::parse(g).unwrap()))
}

#[test]
fn defect_parity() {
    let alg = algebra("B3");
    let sys = alg.system();
    for w in deodhar_core::deodhar::all_words(3, 6) {
        let ybar = Expression::new(sys, w).unwrap();
        for e in enumerate_subexpr(sys, &ybar, None, CAP).unwrap() {
            let diff = ybar.len() as i32 - e.expressed.length() as i32;
            assert_eq!((e.defect - diff).rem_euclid(2), 0);
        }
    }
}

#[test]
fn graded_dimension_dominates_h_for_every_reduced_word() {
    let alg = algebra("A3");
    let sys = alg.system_arc().clone();
    for y in sys.elements_up_to(6).unwrap() {
        let words = sys.reduced_words(&y).unwrap();
        for x in sys.elements_up_to(y.length()).unwrap() {
            if !sys.bruhat_leq(&x, &y) {
                continue;
            }
            let h = alg.kl_poly(&x, &y).unwrap().h;
            let dims: Vec<LaurentPoly> = words
                .iter()
                .map(|w| gdim_d(&alg, &x, &Expression::new(&sys, w.clone()).unwrap(), CAP).unwrap())
                .collect();
            for d in &dims {
                let excess = d.clone() - h.clone();
                assert!(excess.has_nonneg_coeffs(), "h_x,y not dominated by gdim D");
            }
        }
    }
}

#[test]
fn graded_dimension_depends_on_the_reduced_word() {
    let alg = algebra("A2");
    let sys = alg.system();
    let x = sys.parse_element("1").unwrap();
    let d = |w: &str| gdim_d(&alg, &x, &Expression::parse(sys, w).unwrap(), CAP).unwrap().to_text();
    assert_eq!(d("1 2 1"), "0:1,0,1");
    assert_eq!(d("2 1 2"), "2:1");
}

#[test]
fn graded_dimension_matches_kl_expansion() {
    let alg = algebra("A3");
    let sys = alg.system_arc().clone();
    for w in deodhar_core::deodhar::all_words(3, 5) {
        let ybar = Expression::new(&sys, w).unwrap();
        let expansion: HeckeElement<_> = alg.to_kl_basis(&alg.b_product(ybar.letters())).unwrap();
        for (_, m) in expansion.iter() {
            assert!(m.has_nonneg_coeffs());
        }
        for x in sys.elements_up_to(ybar.len().min(6)).unwrap() {
            let mut expected = LaurentPoly::zero();
            for (z, m) in expansion.iter() {
                expected = expected + m.clone() * alg.kl_poly(&x, z).unwrap().h;
            }
            assert_eq!(gdim_d(&alg, &x, &ybar, CAP).unwrap(), expected);
        }
    }
}

#[test]
fn census_matches_brute_force() {
    for g in ["A2", "A3", "B2", "I2(5)"] {
        let alg = algebra(g);
        let sys = alg.system_arc().clone();
        for y in sys.elements_up_to(6).unwrap() {
            let ybar = Expression::new(&sys, sys.lex_reduced_word(&y)).unwrap();
            for x in sys.elements_up_to(y.length()).unwrap() {
                if !sys.bruhat_leq(&x, &y) {
                    continue;
                }
                let census = subset_solutions(&alg, &x, &ybar, CAP).unwrap();
                let defects: Vec<i32> = enumerate_subexpr(&sys, &ybar, Some(&x), CAP).unwrap().map(|e| e.defect).collect();
                if defects.len() > 16 {
                    continue;
                }
                let h = alg.kl_poly(&x, &y).unwrap().h;
                assert_eq!(census.count, BigUint::from(brute_force_subset_count(&defects, &h)));
                assert_eq!(census.forced, census.count == BigUint::from(1u32));
                let witness_sum: LaurentPoly = census
                    .witness
                    .iter()
                    .map(|b| LaurentPoly::v_pow(deodhar_core::deodhar::decorate(&sys, &ybar, *b).unwrap().defect))
                    .sum();
                assert_eq!(witness_sum, h);
                let c = classify(&alg, &x, &y).unwrap();
                if c.rationally_smooth && gdim_d(&alg, &x, &ybar, CAP).unwrap() == h {
                    assert!(census.forced);
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn deodhar_identity_on_random_words(
        g in prop::sample::select(vec!["A4", "B3", "D4", "G2", "At2", "Bt3", "I2(9)", "U3"]),
        word in prop::collection::vec(0usize..5, 0..10),
    ) {
        let alg = algebra(g);
        let sys = alg.system();
        let word: Vec<usize> = word.into_iter().map(|s| s % sys.rank()).collect();
        let ybar = Expression::new(sys, word).unwrap();
        prop_assert!(verify_deodhar_identity(&alg, &ybar, CAP).unwrap().holds());
    }
}
