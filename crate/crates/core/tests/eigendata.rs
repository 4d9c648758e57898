use abcong::eigendata::{
    ap_point_count, bundled_curve, delta_coeffs, eta_qexp, parse_curves, quadform_represents,
    DataError, BUNDLED_CURVES,
};
use abcong::ffield::prime_factors;

#[test]
fn tau_is_multiplicative_and_satisfies_hecke() {
    let d = delta_coeffs(200, 0).unwrap();
    let tau = |n: i64| d.coeff(n).unwrap();
    for (m, n) in [(2, 3), (3, 5), (4, 9), (5, 7), (8, 25), (11, 13)] {
        assert_eq!(tau(m * n), tau(m) * tau(n), "tau({m}) tau({n})");
    }
    for p in [2i128, 3, 5, 7, 11, 13] {
        let pi = p as i64;
        assert_eq!(tau(pi * pi), tau(pi).pow(2) - p.pow(11));
        if pi * pi * pi <= 200 {
            assert_eq!(tau(pi * pi * pi), tau(pi) * tau(pi * pi) - p.pow(11) * tau(pi));
        }
    }
    assert_eq!(tau(1), 1);
    assert_eq!(tau(2), -24);
    assert_eq!(tau(3), 252);
    assert_eq!(tau(5), 4830);
    assert_eq!(tau(7), -16744);
    assert_eq!(tau(11), 534612);
}

#[test]
fn reduced_delta_agrees_with_exact() {
    let exact = delta_coeffs(400, 0).unwrap();
    let m = delta_coeffs(400, 23).unwrap();
    for n in 1..=400 {
        assert_eq!(exact.coeff(n).unwrap().rem_euclid(23), m.coeff(n).unwrap());
    }
}

#[test]
fn eta_times_eta23_is_delta_mod_23() {
    let t = 2000;
    let e = eta_qexp(t, 23);
    let prod = e.mul(&e.substitute(23)).unwrap();
    let d = delta_coeffs(t, 23).unwrap();
    assert_eq!(prod.offset24, d.offset24);
    let n = prod.coeffs.len().min(d.coeffs.len());
    assert!(n >= 1900);
    assert_eq!(prod.coeffs[..n], d.coeffs[..n]);
}

#[test]
fn fixtures_are_consistent() {
    let curves = parse_curves(BUNDLED_CURVES).unwrap();
    assert!(curves.len() >= 6);
    for c in &curves {
        let digits: String = c.label.chars().take_while(|ch| ch.is_ascii_digit()).collect();
        assert_eq!(digits.parse::<u64>().unwrap(), c.conductor, "{}", c.label);
        let disc = c.discriminant().unsigned_abs();
        for p in prime_factors(c.conductor) {
            assert_eq!(disc % p as u128, 0, "{} bad at {p} but {p} does not divide disc", c.label);
            assert!(matches!(ap_point_count(c, p), Err(DataError::BadPrime { .. })));
        }
    }
}

/// Coefficients printed with each curve's q-expansion.
#[test]
fn fixtures_match_printed_expansions() {
    let printed: &[(&str, &[(u64, i64)])] = &[
        ("11a", &[(2, -2), (3, -1), (5, 1), (7, -2), (13, 4)]),
        ("338d", &[(3, -1), (5, 3), (7, 3), (11, 0)]),
        ("2450ba", &[(3, 0), (11, -2), (13, 0), (17, -7)]),
        ("608e", &[(3, 0), (5, 3), (7, -5), (11, -5), (13, -4), (17, -3)]),
        ("324b", &[(5, 3), (7, 2), (11, -6), (13, 5), (17, -3), (19, 2), (23, 6), (29, 3), (31, -4), (37, 5)]),
        ("50700u", &[(7, 0), (11, -3), (17, 0), (19, 0), (23, 7), (29, -4), (31, 0), (37, -3)]),
    ];
    for (label, coeffs) in printed {
        let c = bundled_curve(label).unwrap();
        for &(p, a) in *coeffs {
            assert_eq!(ap_point_count(&c, p).unwrap(), a, "{label} a_{p}");
        }
    }
}

#[test]
fn hasse_bound_holds_for_many_primes() {
    let c = bundled_curve("50700u").unwrap();
    for p in abcong::ffield::primes_up_to(3000).into_iter().filter(|p| 50700 % p != 0) {
        let a = ap_point_count(&c, p).unwrap();
        assert!((a * a) as u64 <= 4 * p);
    }
}

#[test]
fn quadform_against_enumeration() {
    for (a, b, c) in [(1i64, 0i64, 23i64), (2, 1, 3), (1, 1, 6), (3, 2, 5), (1, 0, 1)] {
        let mut hit = std::collections::BTreeSet::new();
        for x in -40i64..=40 {
            for y in -40i64..=40 {
                let v = a * x * x + b * x * y + c * y * y;
                if v <= 400 {
                    hit.insert(v as u64);
                }
            }
        }
        for n in 0..=400u64 {
            assert_eq!(quadform_represents(n, a, b, c).unwrap(), hit.contains(&n), "{a} {b} {c} n = {n}");
        }
    }
}
