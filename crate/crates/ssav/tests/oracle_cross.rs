use ssav::census::sp1_count;
use ssav::oracle::{
    brute_curve_census, curve_census, galois_conjugate_test, reduced_forms_oracle, Parity,
};
use ssav::quadratics::reduced_forms_imaginary;
use ssav::weil::{are_conjugate_pm, PrimePower};

#[test]
fn curve_counts_small_characteristic() {
    for (p, a) in [(2u64, 1u32), (2, 2), (2, 3), (2, 4), (3, 1), (3, 2), (3, 3)] {
        let q = p.pow(a);
        let ctx = PrimePower::new(p, a).unwrap();
        assert_eq!(
            brute_curve_census(q).unwrap(),
            sp1_count(ctx).unwrap(),
            "q = {p}^{a}"
        );
    }
}

#[test]
fn curve_counts_prime_powers() {
    for (p, a) in [
        (5u64, 2u32),
        (5, 3),
        (7, 2),
        (7, 3),
        (11, 2),
        (13, 2),
        (17, 2),
        (19, 2),
    ] {
        let q = p.pow(a);
        let ctx = PrimePower::new(p, a).unwrap();
        assert_eq!(
            brute_curve_census(q).unwrap(),
            sp1_count(ctx).unwrap(),
            "q = {p}^{a}"
        );
    }
}

#[test]
fn supersingular_traces_divisible_by_p() {
    for q in [9u64, 25, 49, 125] {
        let c = curve_census(q).unwrap();
        for class in &c.supersingular {
            assert_eq!(class.trace.rem_euclid(c.p as i64), 0);
            assert!(class.trace * class.trace <= 4 * q as i64);
        }
    }
}

#[test]
fn conjugacy_grid_matches_cases() {
    for p in [2u64, 3, 5, 7, 11, 13] {
        for n in (1..=40).filter(|n| n % 4 != 2) {
            for (a, parity) in [(1u32, Parity::Odd), (2, Parity::Even)] {
                let ctx = PrimePower::new(p, a).unwrap();
                assert_eq!(
                    galois_conjugate_test(n, p, parity).unwrap(),
                    are_conjugate_pm(n, ctx).unwrap(),
                    "n={n}, p={p}, a={a}"
                );
            }
        }
    }
}

#[test]
fn form_scan_matches_class_numbers() {
    for d in (3..=2000i64).map(|d| -d).filter(|d| d.rem_euclid(4) <= 1) {
        assert_eq!(
            reduced_forms_oracle(d).unwrap(),
            reduced_forms_imaginary(d).unwrap(),
            "disc {d}"
        );
    }
}
