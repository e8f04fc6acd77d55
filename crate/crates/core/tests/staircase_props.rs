//! Property suite for the staircase layer, checked against a naive
//! lattice-point counting oracle that shares no code with the library's
//! inclusion-exclusion walk.

use frobkit_core::staircase::{Exponent, MonomialIdeal};
use num_bigint::BigUint;
use num_traits::ToPrimitive;
use proptest::prelude::*;

/// Count the staircase complement by brute enumeration: every lattice
/// point not in the ideal lies under the componentwise maximum of the
/// generators, because each axis carries a pure power.
fn naive_colength(ideal: &MonomialIdeal) -> BigUint {
    assert!(ideal.is_zero_dimensional());
    let d = ideal.dim();
    let mut box_bounds = vec![0u64; d];
    for g in ideal.generators() {
        for (j, c) in g.coords().iter().enumerate() {
            box_bounds[j] = box_bounds[j].max(c.to_u64().expect("small exponent"));
        }
    }
    let mut count = 0u64;
    let mut cursor = vec![0u64; d];
    'walk: loop {
        if !ideal.contains(&Exponent::from_u64s(&cursor)) {
            count += 1;
        }
        for j in 0..d {
            cursor[j] += 1;
            if cursor[j] < box_bounds[j] {
                continue 'walk;
            }
            cursor[j] = 0;
        }
        break;
    }
    BigUint::from(count)
}

/// Random zero-dimensional monomial ideals: one pure power per axis plus
/// a few extra generators, in up to 3 variables with exponents up to 4.
fn zero_dim_ideal() -> impl Strategy<Value = MonomialIdeal> {
    (1usize..=3).prop_flat_map(|d| {
        let pure = proptest::collection::vec(1u64..=4, d);
        let extra = proptest::collection::vec(proptest::collection::vec(0u64..=4, d), 0..=3);
        (pure, extra).prop_map(move |(pure, extra)| {
            let mut gens: Vec<Vec<u64>> = Vec::new();
            for (j, b) in pure.iter().enumerate() {
                let mut g = vec![0u64; d];
                g[j] = *b;
                gens.push(g);
            }
            for g in extra {
                if g.iter().any(|&x| x > 0) {
                    gens.push(g);
                }
            }
            let refs: Vec<&[u64]> = gens.iter().map(|g| g.as_slice()).collect();
            MonomialIdeal::from_u64s(&refs, d).expect("generated ideals are valid")
        })
    })
}

/// Tuned case count for this suite; `PROPTEST_CASES` overrides it for soaks.
fn suite_config(default_cases: u32) -> ProptestConfig {
    if std::env::var_os("PROPTEST_CASES").is_some() {
        ProptestConfig::default()
    } else {
        ProptestConfig::with_cases(default_cases)
    }
}

proptest! {
    #![proptest_config(suite_config(128))]

    #[test]
    fn colength_matches_naive_enumeration(ideal in zero_dim_ideal()) {
        prop_assert_eq!(ideal.colength().unwrap(), naive_colength(&ideal));
    }

    #[test]
    fn bracket_powers_scale_the_colength_exactly(ideal in zero_dim_ideal(), q in 2u64..=5) {
        let q = BigUint::from(q);
        let scaled = ideal.bracket_power(&q);
        let expected = ideal.colength().unwrap() * q.pow(ideal.dim() as u32);
        prop_assert_eq!(scaled.colength().unwrap(), expected);
    }

    #[test]
    fn bracket_powers_compose(ideal in zero_dim_ideal()) {
        let two = BigUint::from(2u32);
        let three = BigUint::from(3u32);
        let six = BigUint::from(6u32);
        let stepwise = ideal.bracket_power(&two).bracket_power(&three);
        let direct = ideal.bracket_power(&six);
        prop_assert!(stepwise.is_contained_in(&direct));
        prop_assert!(direct.is_contained_in(&stepwise));
        prop_assert_eq!(stepwise.colength().unwrap(), direct.colength().unwrap());
    }

    #[test]
    fn adding_a_generator_never_grows_the_colength(
        ideal in zero_dim_ideal(),
        extra in proptest::collection::vec(0u64..=4, 1..=3),
    ) {
        let d = ideal.dim();
        let mut gen = vec![0u64; d];
        for (j, v) in extra.iter().take(d).enumerate() {
            gen[j] = *v;
        }
        prop_assume!(gen.iter().any(|&x| x > 0));
        let mut gens: Vec<Vec<u64>> = ideal
            .generators()
            .iter()
            .map(|g| g.coords().iter().map(|c| c.to_u64().unwrap()).collect())
            .collect();
        gens.push(gen);
        let refs: Vec<&[u64]> = gens.iter().map(|g| g.as_slice()).collect();
        let larger = MonomialIdeal::from_u64s(&refs, d).unwrap();
        prop_assert!(larger.colength().unwrap() <= ideal.colength().unwrap());
    }

    #[test]
    fn hk_function_points_match_direct_bracket_colengths(ideal in zero_dim_ideal(), p in 2u64..=3) {
        let points = ideal.hk_function(p, 1..=2).unwrap();
        prop_assert_eq!(points.len(), 2);
        for pt in &points {
            let direct = ideal.bracket_power(&pt.q).colength().unwrap();
            prop_assert_eq!(&pt.colength, &direct);
            prop_assert_eq!(&pt.q, &BigUint::from(p).pow(pt.e));
        }
    }

    #[test]
    fn hk_exact_is_the_colength(ideal in zero_dim_ideal()) {
        let exact = ideal.hk_exact().unwrap();
        prop_assert!(exact.is_integer());
        prop_assert_eq!(
            exact.to_integer().to_biguint().unwrap(),
            ideal.colength().unwrap()
        );
    }

    #[test]
    fn socle_monomials_lie_outside_and_push_inside(ideal in zero_dim_ideal()) {
        for s in ideal.socle_monomials().unwrap() {
            prop_assert!(!ideal.contains(&s));
            let coords: Vec<u64> = s.coords().iter().map(|c| c.to_u64().unwrap()).collect();
            for j in 0..ideal.dim() {
                let mut up = coords.clone();
                up[j] += 1;
                prop_assert!(ideal.contains(&Exponent::from_u64s(&up)));
            }
        }
    }
}
