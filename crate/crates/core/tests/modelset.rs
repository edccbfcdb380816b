mod common;

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use proxtile::algebra::AlgebraicNumber;
use proxtile::crosscheck::{crosscheck, CrosscheckError};
use proxtile::io::parse_scheme;
use proxtile::modelset::*;

const FIB: &str = "name = fib\npolynomial = x^2 - x - 1\nbasis = 1 ; 1\nbasis = l ; 1 - l\nwindow = -1 ; l\n";
const FIB_WIDE: &str = "name = wide\npolynomial = x^2 - x - 1\nbasis = 1 ; 1\nbasis = l ; 1 - l\nwindow = -1 ; 2\n";
const CUBIC: &str = "name = cubic\npolynomial = x^3 - 2\nbasis = 1 ; 1 ; 0\nbasis = l ; 0 ; 1\nbasis = l^2 ; l ; l^2\nvertex = -1 ; -1\nvertex = 1 ; -1\nvertex = 1 ; 1\nvertex = -1 ; 1\n";

fn el(s: &CutProjectScheme, t: &str) -> AlgebraicNumber {
    AlgebraicNumber::parse(&s.field, t).unwrap()
}

fn shift(s: &CutProjectScheme, phys: &str, int: &str) -> Vec<AlgebraicNumber> {
    vec![el(s, phys), el(s, int)]
}

/// Model set by direct scan over lattice coordinates (a, b) with
/// γ = a·(1, 1) + b·(φ, 1 − φ).
fn brute_fibonacci(s: &CutProjectScheme, x: &[AlgebraicNumber], r: i64) -> Vec<AlgebraicNumber> {
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let mut out = Vec::new();
    for b in -200i64..=200 {
        for a in -400i64..=400 {
            let p = a as f64 + b as f64 * phi + x[0].to_f64();
            if p.abs() > r as f64 + 1.0 {
                continue;
            }
            let g = s.lattice_point(&[BigInt::from(a), BigInt::from(b)]);
            let phys = &g[0] + &x[0];
            let int = &g[1] + &x[1];
            let rr = AlgebraicNumber::from_int(&s.field, r);
            if phys.abs() <= rr && s.window.contains(std::slice::from_ref(&int), Convention::Closed) {
                out.push(phys);
            }
        }
    }
    out.sort();
    out
}

#[test]
fn sample_matches_direct_scan() {
    let s = parse_scheme(FIB).unwrap();
    let r = AlgebraicNumber::from_int(&s.field, 30);
    for (p, i) in [("0", "1/3"), ("1/2", "0"), ("0", "-1")] {
        let x = shift(&s, p, i);
        let m = s.model_set(&x, (&-&r, &r), Convention::Closed, 1_000_000).unwrap();
        assert_eq!(m.points.points, brute_fibonacci(&s, &x, 30), "shift ({}, {})", p, i);
        for (pt, c) in m.points.points.iter().zip(&m.lifts) {
            let g = s.lattice_point(c);
            assert_eq!(&g[0] + &x[0], *pt);
        }
    }
}

#[test]
fn singular_points_have_two_samples() {
    let s = parse_scheme(FIB).unwrap();
    let r = AlgebraicNumber::from_int(&s.field, 40);
    // Window endpoints moved by internal lattice coordinates.
    for (p, i) in [("0", "-1"), ("0", "l"), ("0", "1 - 2*l")] {
        let x = shift(&s, p, i);
        let xi = s.torus_map(&x);
        let (sing, samples) = s.fiber(&xi, (&-&r, &r), 1_000_000).unwrap();
        assert!(sing.singular, "({}, {})", p, i);
        assert!(samples.len() >= 2);
        assert_ne!(samples[0].points.points, samples[1].points.points);
    }
}

#[test]
fn random_non_singular_points_have_one_sample() {
    let s = parse_scheme(FIB).unwrap();
    let r = AlgebraicNumber::from_int(&s.field, 40);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut done = 0;
    while done < 20 {
        let q = rng.gen_range(2i64..50);
        let p = rng.gen_range(1..q);
        let t = AlgebraicNumber::from_rational(&s.field, BigRational::new(BigInt::from(p), BigInt::from(q)));
        // A rational internal shift is singular only when it is an integer.
        if t.as_rational().is_some_and(|v| v.is_integer()) {
            continue;
        }
        let x = vec![AlgebraicNumber::zero(&s.field), t];
        let (sing, samples) = s.fiber(&s.torus_map(&x), (&-&r, &r), 1_000_000).unwrap();
        assert!(!sing.singular);
        assert_eq!(samples.len(), 1);
        done += 1;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn torus_map_ignores_lattice_translation(a in -30i64..30, b in -30i64..30, n in 1i64..20, d in 2i64..20) {
        let s = parse_scheme(FIB).unwrap();
        let t = AlgebraicNumber::from_rational(&s.field, BigRational::new(BigInt::from(n), BigInt::from(d)));
        let x = vec![t.clone(), &t + &el(&s, "l")];
        let g = s.lattice_point(&[BigInt::from(a), BigInt::from(b)]);
        let y: Vec<AlgebraicNumber> = x.iter().zip(&g).map(|(u, v)| u + v).collect();
        prop_assert_eq!(s.torus_map(&x), s.torus_map(&y));
        let xi = s.torus_map(&x);
        prop_assert!(xi.coords.iter().all(|c| !c.is_negative() && c.floor() == BigInt::from(0)));
        prop_assert_eq!(s.torus_map(&s.representative(&xi)), xi);
    }

    #[test]
    fn conventions_nest(n in 1i64..40, d in 2i64..40) {
        let s = parse_scheme(FIB).unwrap();
        let r = AlgebraicNumber::from_int(&s.field, 20);
        let t = AlgebraicNumber::from_rational(&s.field, BigRational::new(BigInt::from(n), BigInt::from(d)));
        let x = vec![AlgebraicNumber::zero(&s.field), t];
        let closed = s.model_set(&x, (&-&r, &r), Convention::Closed, 1_000_000).unwrap();
        for conv in [Convention::OpenHigh, Convention::OpenLow] {
            let open = s.model_set(&x, (&-&r, &r), conv, 1_000_000).unwrap();
            prop_assert!(open.points.points.iter().all(|p| closed.points.points.binary_search(p).is_ok()));
        }
    }
}

#[test]
fn polygon_window_scheme() {
    let s = parse_scheme(CUBIC).unwrap();
    assert_eq!(s.k, 2);
    let rep = s.validate().unwrap();
    assert!(rep.to_string().contains("dense"));
    let r = AlgebraicNumber::from_int(&s.field, 10);
    let x = vec![AlgebraicNumber::zero(&s.field), el(&s, "1/7"), el(&s, "1/5")];
    let m = s.model_set(&x, (&-&r, &r), Convention::Closed, 1_000_000).unwrap();
    assert!(m.points.len() > 5);
    assert!(m.points.points.windows(2).all(|w| w[0] < w[1]));
    let sing = s.is_singular(&x, &r, 1_000_000).unwrap();
    assert!(sing.search_bound.is_some());
    let on_edge = vec![AlgebraicNumber::zero(&s.field), el(&s, "1"), el(&s, "1/3")];
    assert!(s.is_singular(&on_edge, &r, 1_000_000).unwrap().singular);
}

#[test]
fn region_budget_is_enforced() {
    let s = parse_scheme(FIB).unwrap();
    let r = AlgebraicNumber::from_int(&s.field, 100_000);
    let x = shift(&s, "0", "1/3");
    assert!(matches!(
        s.model_set(&x, (&-&r, &r), Convention::Closed, 1000),
        Err(ModelSetError::RegionTooLarge { .. })
    ));
}

#[test]
fn fibonacci_crosscheck_is_exact() {
    let sys = common::fibonacci();
    let s = parse_scheme(FIB).unwrap();
    let r = AlgebraicNumber::from_int(sys.field(), 100);
    for pp in sys.periodic_points() {
        let rep = crosscheck(&sys, &pp, &s, &r, None, 1_000_000).unwrap();
        assert!(rep.matched(), "{}", rep.report());
        assert_eq!(rep.substitution_points, rep.model_points);
        assert!(rep.substitution_points > 200);
    }
}

#[test]
fn wrong_window_is_detected() {
    let sys = common::fibonacci();
    let s = parse_scheme(FIB_WIDE).unwrap();
    let r = AlgebraicNumber::from_int(sys.field(), 100);
    let rep = crosscheck(&sys, &sys.periodic_points()[0], &s, &r, None, 1_000_000).unwrap();
    assert!(!rep.matched());
    assert!(rep.first_discrepancy().is_some());
}

#[test]
fn crosscheck_needs_the_same_field() {
    let sys = common::thue_morse();
    let s = parse_scheme(FIB).unwrap();
    let r = AlgebraicNumber::from_int(sys.field(), 10);
    assert!(matches!(
        crosscheck(&sys, &sys.periodic_points()[0], &s, &r, None, 1000),
        Err(CrosscheckError::FieldMismatch { .. })
    ));
}
