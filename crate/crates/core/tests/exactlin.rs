mod common;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use toricfan::exactlin::{
    hermite_normal_form, smith_normal_form, solve_integral, strict_feasible, Feasibility,
    IntegerMatrix, LatticeVector, RationalVector, StrictSystem,
};

fn matrix(rows: usize, cols: usize, r: i64) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(-r..=r, cols), rows)
}

fn rational_rows(rows: &[Vec<i64>]) -> Vec<RationalVector> {
    rows.iter().map(|r| RationalVector::from_i64(r)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn hnf_is_a_unimodular_column_transform(
        (rows, cols) in (1usize..=4, 1usize..=5),
        seed in any::<u64>(),
    ) {
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(seed);
        let a: Vec<Vec<i64>> = (0..rows)
            .map(|_| (0..cols).map(|_| rand::Rng::gen_range(&mut rng, -6..=6)).collect())
            .collect();
        let m = IntegerMatrix::from_i64_rows(&a);
        let (h, u) = hermite_normal_form(&m);
        prop_assert!(u.is_unimodular());
        prop_assert_eq!(m.mul(&u).unwrap(), h.clone());
        // echelon: each row's pivot column strictly increases and is positive
        let mut last: Option<usize> = None;
        for r in 0..rows {
            let lead = (0..cols).rev().find(|&c| !h.get(r, c).is_zero());
            if let Some(c) = lead {
                if last.is_none_or(|l| c > l) {
                    prop_assert!(h.get(r, c).is_positive());
                    last = Some(c);
                }
            }
        }
    }

    #[test]
    fn snf_matches_minors(a in (1usize..=4, 1usize..=4).prop_flat_map(|(r, c)| matrix(r, c, 5))) {
        let m = IntegerMatrix::from_i64_rows(&a);
        let (s, u, v) = smith_normal_form(&m);
        prop_assert!(u.is_unimodular() && v.is_unimodular());
        prop_assert_eq!(u.mul(&m).unwrap().mul(&v).unwrap(), s.clone());
        let k_max = a.len().min(a[0].len());
        let mut product = BigInt::one();
        for k in 1..=k_max {
            product *= s.get(k - 1, k - 1).abs();
            prop_assert_eq!(&product, &common::gcd_of_minors(&a, k));
        }
    }

    #[test]
    fn primitive_is_idempotent_and_positive(v in prop::collection::vec(-30i64..=30, 1..5)) {
        prop_assume!(v.iter().any(|&x| x != 0));
        let v = LatticeVector::from_i64(&v);
        let p = v.primitive().unwrap();
        prop_assert_eq!(p.primitive().unwrap(), p.clone());
        let k = v.content();
        prop_assert!(k.is_positive());
        prop_assert_eq!(p.scale(&k), v);
    }

    #[test]
    fn strict_feasible_agrees_with_vertex_enumeration(
        (n, eq, strict) in (1usize..=4, 0usize..=2, 1usize..=6)
            .prop_flat_map(|(n, e, k)| (Just(n), matrix(e, n, 3), matrix(k, n, 3)))
    ) {
        let sys = StrictSystem::new(n, rational_rows(&eq), rational_rows(&strict)).unwrap();
        let got = strict_feasible(&sys).unwrap();
        prop_assert_eq!(got.is_feasible(), common::strict_feasible_by_vertices(&eq, &strict, n));
        if let Feasibility::Feasible(x) = got {
            prop_assert!(sys.is_satisfied_by(&x));
        }
    }

    #[test]
    fn integral_solutions_match_the_box(a in (1usize..=2).prop_flat_map(|r| matrix(r, 3, 3)), x0 in prop::collection::vec(-4i64..=4, 3)) {
        let b: Vec<i64> = a.iter().map(|row| row.iter().zip(&x0).map(|(p, q)| p * q).sum()).collect();
        let m = IntegerMatrix::from_i64_rows(&a);
        let (p, kernel) = solve_integral(&m, &LatticeVector::from_i64(&b)).unwrap().expect("planted solution");
        prop_assert_eq!(m.mul_vec(&p), LatticeVector::from_i64(&b));
        let basis: Vec<Vec<BigInt>> = kernel.iter().map(|k| k.coords().to_vec()).collect();
        for x in common::box_solutions(&a, &b, 3, 6) {
            prop_assert!(common::in_coset(&x, p.coords(), &basis));
        }
    }
}

#[test]
fn unsolvable_integral_system() {
    let m = IntegerMatrix::from_i64_rows(&[vec![2, 4]]);
    assert_eq!(
        solve_integral(&m, &LatticeVector::from_i64(&[3])).unwrap(),
        None
    );
    assert!(common::box_solutions(&[vec![2, 4]], &[3], 2, 10).is_empty());
}
