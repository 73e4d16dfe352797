use std::collections::BTreeMap;

use cable_curves::appio::corpus::{self, iterated_cable};
use cable_curves::cabling::{cable_geometric, cable_merge, torus_knot_curve, unknot};
use cable_curves::geometry::{homotopic, realize};
use cable_curves::invariants::{alexander, detect_lspace, epsilon, phi_table, report, tau, Laurent};
use cable_curves::obstructions::{check_cable, obstruction_report, Verdict};

#[test]
fn trefoil_report() {
    let r = report(&corpus::right_trefoil());
    assert_eq!((r.tau, r.epsilon, r.lspace, r.genus), (1, 1, true, Some(1)));
    assert_eq!(r.phi, BTreeMap::from([(1, 1)]));
    let u = report(&unknot());
    assert_eq!((u.tau, u.epsilon), (0, 0));
    assert!(u.phi.is_empty());
    assert_eq!(u.alexander, Laurent::one());
}

#[test]
fn trefoil_three_two_cable() {
    let c = cable_geometric(&corpus::right_trefoil(), 3, 2).unwrap();
    assert_eq!(tau(&c.curve), 4);
    assert_eq!(epsilon(&c.curve), 1);
    assert_eq!(c.shift, 1);
    assert!(detect_lspace(&c.curve).is_none());
    assert!(detect_lspace(&cable_geometric(&corpus::right_trefoil(), 3, 4).unwrap().curve).is_some());
}

#[test]
fn left_trefoil_is_the_mirror() {
    let l = corpus::left_trefoil();
    assert_eq!(tau(&l), -1);
    assert_eq!(epsilon(&l), -1);
    assert_eq!(alexander(&l), alexander(&corpus::right_trefoil()));
}

#[test]
fn small_cables_of_the_unknot_are_unknots() {
    for p in 1..=6 {
        for q in [-1, 1] {
            assert_eq!(cable_geometric(&unknot(), p, q).unwrap().curve, unknot());
            assert_eq!(cable_merge(&unknot(), p, q).unwrap().curve, unknot());
        }
    }
}

#[test]
fn torus_knots() {
    assert_eq!(torus_knot_curve(2, 3).unwrap(), corpus::right_trefoil());
    assert_eq!(torus_knot_curve(2, -3).unwrap(), corpus::left_trefoil());
    let t35 = torus_knot_curve(3, 5).unwrap();
    assert_eq!(tau(&t35), 4);
    assert_eq!(detect_lspace(&t35), Some(4));
}

#[test]
fn iterated_family() {
    assert_eq!(iterated_cable(0), corpus::right_trefoil());
    assert_eq!(phi_table(&iterated_cable(2)).phi, BTreeMap::from([(4, 1)]));
    for n in 0..=4 {
        let k = iterated_cable(n);
        assert_eq!(phi_table(&k).phi, BTreeMap::from([(1 << n, 1)]), "K_{n}");
        assert_eq!(phi_table(&k).unique_maximal_pp(), Some(1 << n));
    }
}

#[test]
fn synthetic_curve() {
    let k = corpus::synthetic_obstruction();
    // Alexander polynomial of the (-2, 3, 7) pretzel knot
    let pretzel = Laurent::from_terms([(1, 5), (-1, 4), (1, 2), (-1, 1), (1, 0), (-1, -1), (1, -2), (-1, -4), (1, -5)]);
    assert_eq!(alexander(&k), pretzel);
    assert_eq!(detect_lspace(&k), Some(5));
    let r = obstruction_report(&k, 5);
    assert_eq!(r.p_max, Some(3));
    assert!(r.entries.iter().all(|e| e.verdict == Verdict::Obstructed));
}

#[test]
fn figure_eight_is_not_a_cable() {
    let k = corpus::figure_eight();
    for p in 2..=8 {
        let e = check_cable(&k, p);
        assert_eq!(e.verdict, Verdict::Obstructed);
        assert_eq!(e.closed_components.verdict, Verdict::Obstructed);
    }
}

#[test]
fn homotopy_sees_heights() {
    let c = realize(&"a1 c2' b1".parse().unwrap(), (0, 0));
    assert!(homotopic(&c, &c.translated(1, 0)).unwrap());
    assert!(!homotopic(&c, &c.translated(0, 1)).unwrap());
    assert!(!homotopic(&c, &c.reversed()).unwrap());
}
