use std::sync::Arc;

use proptest::prelude::*;

use ssav::arith::{is_prime, primes_in};
use ssav::census::{sp1_count, sp1_even_by_classes};
use ssav::dimension::{dim_of, enumerate_multiple, CaseTag};
use ssav::oracle::{galois_conjugate_test, gauss_reduce, reduced_forms_oracle, CycloField, Parity};
use ssav::orders::{
    build_rsp, class_number_order, hnf, lattice_contains, suborders_between, Component,
    EtaleAlgebra, ZOrder,
};
use ssav::quadratics::{class_number_imaginary, fundamental_unit, kronecker, Bqf};
use ssav::types_even::{admissible_types, multiple_weil_of_type};
use ssav::weil::{are_conjugate_pm, canonicalize, enumerate_wss, MultipleWeil, PrimePower, Sign};

fn small_prime() -> impl Strategy<Value = u64> {
    prop::sample::select(primes_in(2, 60))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn canonicalize_is_idempotent(p in small_prime(), a in 1u32..5, n in 1u64..200, minus in any::<bool>()) {
        let ctx = PrimePower::new(p, a).unwrap();
        let sign = if minus { Sign::Minus } else { Sign::Plus };
        let w = canonicalize(sign, n, ctx);
        prop_assert_ne!(w.n() % 4, 2);
        prop_assert_eq!(canonicalize(w.sign(), w.n(), ctx), w);
    }

    #[test]
    fn enumerated_classes_are_canonical(p in small_prime(), a in 1u32..4) {
        let ctx = PrimePower::new(p, a).unwrap();
        for w in enumerate_wss(ctx, 90) {
            prop_assert_eq!(canonicalize(w.sign(), w.n(), ctx), w);
            let d = dim_of(&w);
            match d.case_tag {
                CaseTag::CmF => prop_assert_eq!(2 * d.dim, d.field_degree),
                _ => prop_assert_eq!(d.dim, d.field_degree),
            }
        }
    }

    #[test]
    fn conjugacy_agrees_with_galois_oracle(p in small_prime(), n in 1u64..=48, even in any::<bool>()) {
        prop_assume!(n % 4 != 2);
        let (a, parity) = if even { (2, Parity::Even) } else { (1, Parity::Odd) };
        let ctx = PrimePower::new(p, a).unwrap();
        prop_assert_eq!(galois_conjugate_test(n, p, parity).unwrap(), are_conjugate_pm(n, ctx).unwrap());
    }

    #[test]
    fn kronecker_is_multiplicative(a in -200i64..200, b in -200i64..200, n in 1i64..400) {
        prop_assume!(n % 2 == 1);
        prop_assert_eq!(kronecker(a * b, n), kronecker(a, n) * kronecker(b, n));
    }

    #[test]
    fn gauss_reduction_preserves_class_set(a in 1i64..40, b in -60i64..60, c in 1i64..60) {
        let f = Bqf::new(a, b, c);
        let disc = f.disc();
        prop_assume!(disc < 0 && f.is_primitive());
        let reduced = gauss_reduce(f);
        prop_assert_eq!(reduced.disc(), disc);
        let forms = reduced_forms_oracle(disc).unwrap();
        prop_assert!(forms.contains(&reduced));
        prop_assert_eq!(forms.len() as u64, class_number_imaginary(disc).unwrap());
    }

    #[test]
    fn fundamental_unit_has_norm_one(m in 2i64..3000) {
        prop_assume!(ssav::arith::is_squarefree(m));
        let e = fundamental_unit(m).unwrap();
        prop_assert!(e.norm == 1 || e.norm == -1);
        prop_assert!(e.log() > 0.0);
    }

    #[test]
    fn hnf_spans_same_lattice(rows in prop::collection::vec(prop::collection::vec(-30i64..30, 3), 1..6)) {
        let h = hnf(&rows, 3);
        for r in &rows {
            prop_assert!(lattice_contains(&h, r));
        }
        for r in &h {
            let h2 = hnf(&rows.iter().cloned().chain([r.clone()]).collect::<Vec<_>>(), 3);
            prop_assert_eq!(&h2, &h);
        }
        prop_assert_eq!(hnf(&h, 3), h);
    }

    #[test]
    fn sp1_is_independent_of_odd_exponent(p in small_prime(), k in 0u32..3) {
        let one = sp1_count(PrimePower::new(p, 1).unwrap()).unwrap();
        prop_assert_eq!(sp1_count(PrimePower::new(p, 2 * k + 3).unwrap()).unwrap(), one);
    }

    #[test]
    fn even_exponent_classes_sum_to_closed_form(p in small_prime(), k in 1u32..3) {
        let ctx = PrimePower::new(p, 2 * k).unwrap();
        let total = sp1_even_by_classes(ctx).unwrap();
        prop_assert_eq!(total, ssav::Rational::from_integer(sp1_count(ctx).unwrap().into()));
    }

    #[test]
    fn maximal_order_class_number(r1 in prop::sample::select(vec![2i64, 3, 5, 6, 7, 10, 11, 13, 14, 15]),
                                  r2 in prop::sample::select(vec![-1i64, -2, -3, -7])) {
        let c = Component::from_radicands(&[r1, r2]).unwrap();
        let alg = Arc::new(EtaleAlgebra::new(vec![c.clone()]).unwrap());
        let ok = ZOrder::maximal(alg.clone());
        prop_assert_eq!(class_number_order(&ok).unwrap(), alg.class_number().unwrap());
    }
}

#[test]
fn multiplication_tables_are_commutative_associative_unital() {
    let comps = vec![
        vec![
            Component::Quadratic { r: -1 },
            Component::Quadratic { r: -2 },
        ],
        vec![Component::from_radicands(&[3, -1]).unwrap()],
        vec![Component::Cyclotomic5],
        vec![
            Component::Quadratic { r: -3 },
            Component::Quadratic { r: -3 },
        ],
    ];
    for c in comps {
        let alg = EtaleAlgebra::new(c).unwrap();
        let n = alg.degree();
        let e = |i: usize| (0..n).map(|k| (k == i) as i64).collect::<Vec<_>>();
        let one = alg.one();
        for i in 0..n {
            assert_eq!(alg.mul(&one, &e(i)), e(i));
            for j in 0..n {
                assert_eq!(alg.mul(&e(i), &e(j)), alg.mul(&e(j), &e(i)));
                for k in 0..n {
                    assert_eq!(
                        alg.mul(&alg.mul(&e(i), &e(j)), &e(k)),
                        alg.mul(&e(i), &alg.mul(&e(j), &e(k)))
                    );
                }
            }
        }
    }
}

#[test]
fn suborders_form_a_lattice() {
    let ctx = PrimePower::new(3, 1).unwrap();
    let w = |s: i64, n| canonicalize(Sign::from_i64(s), n, ctx);
    for pi in [
        MultipleWeil::new([(w(1, 12), 1), (w(-1, 12), 1)]).unwrap(),
        MultipleWeil::new([(w(1, 4), 1), (w(1, 12), 1)]).unwrap(),
        MultipleWeil::simple(canonicalize(Sign::Plus, 3, PrimePower::new(13, 1).unwrap())),
    ] {
        let r = build_rsp(&pi).unwrap();
        let subs = suborders_between(&r);
        let reps = r.quotient_reps();
        let n = r.algebra().degree();
        for b1 in &subs {
            for b2 in &subs {
                let mut join = b1.basis().to_vec();
                join.extend(b2.basis().iter().cloned());
                let join = hnf(&join, n);
                assert!(
                    subs.iter().any(|b| b.basis() == join.as_slice()),
                    "join missing for {pi}"
                );
                let mut meet = r.basis().to_vec();
                meet.extend(
                    reps.iter()
                        .filter(|x| b1.contains(x) && b2.contains(x))
                        .cloned(),
                );
                let meet = hnf(&meet, n);
                assert!(
                    subs.iter().any(|b| b.basis() == meet.as_slice()),
                    "meet missing for {pi}"
                );
            }
        }
    }
}

#[test]
fn product_cases_share_the_maximal_class_number() {
    let p2 = PrimePower::new(2, 1).unwrap();
    let p3 = PrimePower::new(3, 1).unwrap();
    let w = |s: i64, n, ctx| canonicalize(Sign::from_i64(s), n, ctx);
    for pi in [
        MultipleWeil::new([(w(1, 4, p2), 1), (w(1, 8, p2), 1)]).unwrap(),
        MultipleWeil::new([(w(1, 8, p2), 1), (w(-1, 8, p2), 1)]).unwrap(),
        MultipleWeil::new([(w(1, 4, p3), 1), (w(-1, 12, p3), 1)]).unwrap(),
        MultipleWeil::new([(w(1, 12, p3), 1), (w(-1, 12, p3), 1)]).unwrap(),
    ] {
        let r = build_rsp(&pi).unwrap();
        for b in suborders_between(&r) {
            let data = ssav::orders::class_number_order_data(&b).unwrap();
            assert!(data.unit_image <= data.units_mod_max);
            if data.unit_image == data.units_mod_max {
                assert_eq!(data.h, data.h_max, "{pi}");
            }
            assert_eq!(data.h, data.h_max, "{pi} {}", b.label());
        }
    }
}

#[test]
fn types_match_multiple_weil_numbers() {
    for p in primes_in(2, 50) {
        assert!(is_prime(p));
        let ctx = PrimePower::new(p, 2).unwrap();
        for d in 1..=2 {
            let mut from_types: Vec<_> = admissible_types(d, ctx)
                .unwrap()
                .iter()
                .map(|t| multiple_weil_of_type(t).unwrap())
                .collect();
            from_types.sort();
            assert_eq!(from_types, enumerate_multiple(ctx, d).unwrap());
        }
    }
}

#[test]
fn cyclotomic_sqrt_squares() {
    for p in primes_in(2, 50) {
        let delta = if p == 2 {
            8
        } else if p % 4 == 1 {
            p
        } else {
            4 * p
        };
        let f = CycloField::new(delta);
        let r = f.sqrt_p(p).unwrap();
        assert_eq!(f.mul(&r, &r), f.from_terms(&[(0, p as i64)]));
    }
}
