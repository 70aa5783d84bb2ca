use num_bigint::{BigInt, BigUint};
use proptest::prelude::*;

use lrn_core::arith::{is_perfect_square, SExponents};
use lrn_core::curves::{mordell_point_of, quartic_point_of};
use lrn_core::lehmer::{is_lehmer_pair, lehmer_number, lehmer_number_by_recurrence, LehmerInstance};
use lrn_core::oracle::{brute_force_search, verify_solution, SearchBox};
use lrn_core::solver::{compose_general_n, corollary_filter, ExponentConstraint};
use lrn_core::tables::corrected_golden_set;
use lrn_core::SolutionTuple;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lehmer_paths_agree(u in 1u64..60, v in 1u64..60, d in prop::sample::select(vec![1u64, 2, 3, 5, 13, 17, 65, 85, 221, 1105]), m in 0u32..2, k in 0u32..12) {
        prop_assume!(is_lehmer_pair(u, v, d, m));
        let inst = LehmerInstance::new(u, v, d, m).unwrap();
        let n = 2 * k + 1;
        let a = lehmer_number(&inst, n);
        prop_assert!(a.is_ok());
        prop_assert_eq!(a, lehmer_number_by_recurrence(&inst, n));
    }

    #[test]
    fn tuples_reject_perturbation(i in 0usize..27, dx in 1u64..5) {
        let t = &corrected_golden_set()[i];
        let x = &t.x + BigUint::from(dx);
        prop_assert!(!verify_solution(&x, &t.y, t.a, t.b, t.c, t.m, t.n).valid);
    }

    #[test]
    fn brute_force_is_monotone(y in 20u64..400, extra in 1u64..200, a in 0u32..4) {
        let small = SearchBox::new(a, 2, 2, 1, [3, 4], y).unwrap();
        let big = SearchBox::new(a + 1, 3, 2, 1, [3, 4], y + extra).unwrap();
        let s = brute_force_search(&small).unwrap();
        let l = brute_force_search(&big).unwrap();
        for t in &s {
            prop_assert!(l.contains(t));
            prop_assert!(verify_solution(&t.x, &t.y, t.a, t.b, t.c, t.m, t.n).valid);
        }
    }

    #[test]
    fn corollary_filter_is_a_subset(a in any::<bool>(), b in any::<bool>(), c in any::<bool>(), nt in any::<bool>()) {
        let all = corrected_golden_set();
        let k = ExponentConstraint { a_zero: a, b_zero: b, c_zero: c, nontrivial: nt };
        for t in corollary_filter(&all, k) {
            prop_assert!(all.contains(&t));
        }
    }

    #[test]
    fn composed_tuples_are_solutions(nmax in 3u32..40) {
        let base: Vec<SolutionTuple> = corrected_golden_set().into_iter().filter(|t| t.n == 3).collect();
        for t in compose_general_n(&base, nmax) {
            prop_assert!(t.n <= nmax);
            prop_assert!(verify_solution(&t.x, &t.y, t.a, t.b, t.c, t.m, t.n).valid);
        }
    }

    #[test]
    fn srational_values_are_s_units(e5 in 0u32..4, e13 in 0u32..4, e17 in 0u32..4) {
        let e = SExponents::new(e5, e13, e17);
        prop_assert_eq!(SExponents::from_value(&e.value()), Some(e));
        prop_assert!(is_perfect_square(&e.scale(2).value()).is_some());
    }
}

#[test]
fn every_table_row_has_a_curve_point() {
    for t in corrected_golden_set() {
        if t.n % 4 == 0 {
            let (c, p) = quartic_point_of(&t).unwrap();
            assert!(c.contains(&p), "{t}");
        }
        if t.n == 3 {
            let (c, p) = mordell_point_of(&t).unwrap();
            assert!(c.contains(&p), "{t}");
            assert!(p.first.num > BigInt::from(0));
        }
    }
}
