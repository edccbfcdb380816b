mod common;

use num_traits::ToPrimitive;
use proxtile::algebra::AlgebraicNumber;
use proxtile::delone::*;
use proxtile::substitution::SubstitutionSystem;
use proxtile::tiling::PunctureMap;

fn midpoint_set(sys: &SubstitutionSystem, r: i64) -> PointSet {
    let radius = AlgebraicNumber::from_int(sys.field(), r);
    let w = sys.expand_to_radius(&sys.periodic_points()[0], &radius, 1_000_000).unwrap();
    punctures(&w, &PunctureMap::midpoints(&sys.alphabet)).restrict(&radius)
}

#[test]
fn difference_set_is_symmetric() {
    for sys in common::shipped() {
        let ps = midpoint_set(&sys, 40);
        let cap = AlgebraicNumber::from_int(sys.field(), 10);
        let d = difference_set(&ps, &cap);
        for x in &d.points {
            assert!(d.points.binary_search(&-x).is_ok(), "{}: {} without its negative", sys.name, x);
        }
        assert!(d.points.binary_search(&AlgebraicNumber::zero(sys.field())).is_ok());
    }
}

#[test]
fn meyer_margin_is_stable_under_doubling() {
    for sys in common::shipped() {
        let mut gaps = Vec::new();
        for r in [25, 50, 100, 200] {
            let rep = meyer_diagnostic(&midpoint_set(&sys, r)).unwrap();
            assert!(rep.meyer_consistent, "{} at radius {}", sys.name, r);
            gaps.push(rep.meyer_gap);
        }
        assert!(gaps.windows(2).all(|w| w[0] == w[1]), "{}: {:?}", sys.name, gaps);
    }
}

#[test]
fn flc_counts_do_not_grow_with_the_window() {
    for sys in common::shipped() {
        let small = midpoint_set(&sys, 60);
        let large = midpoint_set(&sys, 120);
        for k in [1, 2, 4] {
            let rho = AlgebraicNumber::from_int(sys.field(), k);
            assert_eq!(flc_count(&small, &rho), flc_count(&large, &rho), "{} rho {}", sys.name, k);
        }
    }
}

#[test]
fn fibonacci_differences_have_bounded_conjugates() {
    // Meyer sets in Z[φ] have D − D inside a cut-and-project set, so the
    // Galois conjugates of all differences stay bounded as the window grows.
    let sys = common::fibonacci();
    // x = a + bφ has conjugate a + b(1 − φ).
    let conj = |x: &AlgebraicNumber| -> f64 {
        let c = x.coords();
        let get = |k: usize| c.get(k).and_then(|q| q.to_f64()).unwrap_or(0.0);
        (get(0) + get(1) * (1.0 - (1.0 + 5f64.sqrt()) / 2.0)).abs()
    };
    let mut worst = Vec::new();
    for r in [30, 60, 120] {
        let ps = midpoint_set(&sys, r);
        let cap = AlgebraicNumber::from_int(sys.field(), r);
        let d = difference_set(&ps, &cap);
        worst.push(d.points.iter().map(conj).fold(0.0, f64::max));
    }
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    assert!(worst.iter().all(|&w| w < phi), "{:?}", worst);
}

#[test]
fn too_few_points_is_an_error() {
    let sys = common::fibonacci();
    let one = PointSet::new(vec![AlgebraicNumber::zero(sys.field())], AlgebraicNumber::one(sys.field()));
    assert!(meyer_diagnostic(&one).is_err());
}
