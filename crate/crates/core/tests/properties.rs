use cable_curves::appio::suite::{base_corpus, involution, GRID};
use cable_curves::appio::{corpus, word_from_choices, CurveFile};
use cable_curves::cabling::{cable_geometric, cable_merge, cable_merge_with, CableParams};
use cable_curves::geometry::{homotopic, pull_tight, realize, word_from_curve, PLCurve, Point, Q};
use cable_curves::invariants::alexander;
use cable_curves::loopcalc::{Letter, LoopWord};
use cable_curves::merge::{merge, merge_geometric};
use num_integer::Integer;
use proptest::prelude::*;

fn word() -> impl Strategy<Value = LoopWord> {
    prop::collection::vec((0u8..4, -3i64..=3), 1..=12).prop_map(|c| word_from_choices(&c))
}

fn c_word() -> impl Strategy<Value = LoopWord> {
    prop::collection::vec(-3i64..=3, 1..=4)
        .prop_map(|ks| LoopWord::new(ks.into_iter().map(Letter::c).collect()).unwrap())
}

fn normalized(ws: &[LoopWord]) -> Vec<String> {
    let mut v: Vec<String> = ws.iter().map(|w| w.normalize().to_string()).collect();
    v.sort();
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn word_curve_word(w in word()) {
        let c = realize(&w, (0, 0));
        prop_assert!(c.avoids_lattice());
        prop_assert_eq!(word_from_curve(&c).unwrap(), w.clone());
        let text = w.to_string();
        prop_assert_eq!(text.parse::<LoopWord>().unwrap(), w);
    }

    #[test]
    fn pull_tight_is_idempotent(w in word(), dx in -3i64..=3, dy in 0i64..4) {
        let c = realize(&w, (dx, dy));
        let once = pull_tight(&c).unwrap();
        prop_assert_eq!(pull_tight(&once).unwrap(), once.clone());
        prop_assert_eq!(once, c);
    }

    #[test]
    fn detours_are_pulled_out(w in word(), at in any::<prop::sample::Index>(), dx in -9i128..=9, dy in -9i128..=9) {
        let c = realize(&w, (0, 0));
        let i = at.index(c.waypoints.len());
        let p = c.waypoints[i];
        let spike = Point::new(p.x + Q::new(dx, 4), p.y + Q::new(2 * dy + 1, 6));
        let mut pts = c.waypoints.clone();
        pts.splice(i + 1..i + 1, [spike, p]);
        let d = PLCurve::new(pts, c.period);
        prop_assume!(d.avoids_lattice());
        prop_assert!(homotopic(&d, &c).unwrap());
        prop_assert!(homotopic(&pull_tight(&d).unwrap(), &c).unwrap());
    }

    #[test]
    fn reversal_and_rotation(w in word(), k in 0usize..12) {
        prop_assert_eq!(w.reversed().reversed(), w.clone());
        prop_assert!(w.rotated(k % w.len()).equivalent(&w));
        prop_assert!(w.reversed().equivalent(&w));
        prop_assert_eq!(w.normalize(), w.reversed().rotated(k % w.len()).normalize());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn merge_matches_vertical_sum(gamma in c_word(), theta in word()) {
        prop_assume!((gamma.len() as i64).gcd(&theta.horizontal_period()) == 1);
        let a = normalized(&merge(&gamma, &theta).unwrap());
        let b = normalized(&merge_geometric(&gamma, &theta).unwrap());
        prop_assert_eq!(a, b);
    }

    #[test]
    fn merge_with_any_period(gamma in c_word(), theta in word()) {
        let grid = merge(&gamma, &theta).unwrap();
        let a = normalized(&grid);
        let b = normalized(&merge_geometric(&gamma, &theta).unwrap());
        prop_assert_eq!(a, b);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn framing_does_not_matter(i in 0usize..5, j in 0usize..GRID.len(), k in -2i64..=2) {
        let (_, knot) = base_corpus().swap_remove(i);
        let (p, q) = GRID[j];
        let params = CableParams::new(p, q).unwrap();
        let a = cable_merge_with(&knot, params).unwrap().curve;
        let b = cable_merge_with(&knot, params.reframed(k)).unwrap().curve;
        prop_assert_eq!(a, b);
    }

    #[test]
    fn cables_have_symmetric_alexander(i in 0usize..5, p in 1i64..5, q in -7i64..=7) {
        prop_assume!(p.gcd(&q) == 1 && (p == 1 || q != 0));
        let (_, knot) = base_corpus().swap_remove(i);
        let c = cable_geometric(&knot, p, q).unwrap().curve;
        let d = alexander(&c);
        prop_assert!(d.is_symmetric());
        prop_assert_eq!(d.eval_one(), 1);
        prop_assert_eq!(c.word_set(), cable_merge(&knot, p, q).unwrap().curve.word_set());
    }
}

#[test]
fn involution_preserves_word_sets() {
    for (name, k) in corpus::corpus() {
        assert_eq!(involution(&k).unwrap().word_set(), k.word_set(), "{name}");
    }
    let t = corpus::right_trefoil();
    for (p, q) in GRID {
        let c = cable_geometric(&t, p, q).unwrap().curve;
        assert_eq!(involution(&c).unwrap().word_set(), c.word_set(), "({p},{q})");
    }
}

#[test]
fn curve_files_round_trip() {
    for (name, k) in corpus::corpus() {
        let text = CurveFile::from_multicurve(name, &k).to_json();
        let parsed = CurveFile::from_json(&text).unwrap();
        assert_eq!(parsed.to_multicurve().unwrap(), k);
        assert_eq!(parsed.normalized().unwrap().to_json(), text);
    }
}
