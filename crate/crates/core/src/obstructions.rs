//! Necessary conditions for a curve set to come from a `(p, q)`-cable.
//!
//! These are obstructions, not a decision procedure: "possible" only means no
//! check fired.

use itertools::Itertools;
use num_integer::Integer;
use serde::Serialize;

use crate::cabling::torus_knot_curve;
use crate::geometry::cable_shift;
use crate::geometry::Multicurve;
use crate::invariants::{epsilon, tau};
use crate::loopcalc::LetterKind;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Possible,
    Obstructed,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub verdict: Verdict,
    pub witnesses: Vec<String>,
}

impl Check {
    fn possible() -> Self {
        Self { verdict: Verdict::Possible, witnesses: Vec::new() }
    }

    fn from_witnesses(witnesses: Vec<String>) -> Self {
        let verdict = if witnesses.is_empty() { Verdict::Possible } else { Verdict::Obstructed };
        Self { verdict, witnesses }
    }
}

/// Closed components of a cable come from single copies of the companion's
/// curves, so each one encloses pegs of a single height class mod `p`.
pub fn closed_component_check(k: &Multicurve, p: i64) -> Check {
    if p <= 1 {
        return Check::possible();
    }
    let witnesses = k
        .closed
        .iter()
        .filter_map(|c| {
            let pegs = c.curve().enclosed_pegs();
            let classes: Vec<i64> = pegs.iter().map(|&(_, y, _)| y.rem_euclid(p)).unique().collect();
            (classes.len() > 1).then(|| {
                let heights = pegs.iter().map(|&(_, y, _)| y).join(", ");
                format!("component {} encloses pegs at heights {heights}", c.word)
            })
        })
        .collect();
    Check::from_witnesses(witnesses)
}

/// Which side of each peg `γ0` passes on, in order along `γ0` starting from its
/// wrap: `(height, passes_left)`.
pub fn passing_sequence(k: &Multicurve) -> Vec<(i64, bool)> {
    let w = &k.gamma0.word;
    let cs = w.crossings(0, k.gamma0.height);
    let mut out = Vec::new();
    for (i, l) in w.letters().iter().enumerate() {
        let left = match l.kind {
            LetterKind::A => false,
            LetterKind::B => true,
            _ => continue,
        };
        let (from, to) = (cs[i].n, cs[i + 1].n);
        if to < from {
            out.extend((to + 1..=from).rev().map(|h| (h, left)));
        } else {
            out.extend((from + 1..=to).map(|h| (h, left)));
        }
    }
    out
}

/// Order of the peg classes along the cabling map: the copy of the
/// companion drawn in column `j` has its pegs at heights `shift - q j` mod `p`.
/// Returns the column of each height class mod `p`.
fn column_of_class(p: i64, q: i64) -> Vec<usize> {
    let shift = cable_shift(p, q);
    let mut col = vec![0; p as usize];
    for j in 0..p {
        col[(shift - q * j).rem_euclid(p) as usize] = j as usize;
    }
    col
}

/// The copy in column `j` passes right of every peg from columns before `j`
/// and left of every peg from columns after it, and the copies are traversed
/// in column order. So along `γ0` of a cable, every left pass of a column-`i`
/// peg comes before every right pass of a column-`j` peg when `i < j`.
///
/// `q` is unknown, so the check tries every column order that some `q`
/// produces and obstructs only when all of them fail.
pub fn gamma0_passing_check(k: &Multicurve, p: i64) -> Check {
    if p <= 1 {
        return Check::possible();
    }
    let seq = passing_sequence(k);
    // the labelling depends on q mod 2p
    let orders: Vec<(i64, Vec<usize>)> = (1..=2 * p)
        .filter(|q| q.gcd(&p) == 1)
        .map(|q| (q, column_of_class(p, q)))
        .unique_by(|(_, c)| c.clone())
        .collect();
    let modulus = if p % 2 == 0 { 2 * p } else { p };
    let mut witnesses = Vec::new();
    for (q, col) in orders {
        let violation = seq.iter().enumerate().find_map(|(i, &(h, left))| {
            if !left {
                return None;
            }
            let c = col[h.rem_euclid(p) as usize];
            seq[..i]
                .iter()
                .find(|&&(h2, left2)| !left2 && col[h2.rem_euclid(p) as usize] > c)
                .map(|&(h2, _)| (h, h2))
        });
        match violation {
            None => return Check::possible(),
            Some((h, r)) => witnesses.push(format!(
                "q = {} mod {modulus}: passes left of the peg at height {h} after passing right of the peg at height {r}",
                q % modulus
            )),
        }
    }
    Check::from_witnesses(witnesses)
}

/// Length of the first left arc met after the wrap.
pub fn first_left_arc(k: &Multicurve) -> Option<i64> {
    k.gamma0
        .word
        .letters()
        .iter()
        .find(|l| l.kind == LetterKind::B)
        .map(|l| l.index.abs())
}

/// `q` such that `γ0` could be the curve of `T(p, q)`, judged by `τ`.
fn torus_partner(k: &Multicurve, p: i64) -> Option<i64> {
    let t = tau(k);
    if p < 2 || t == 0 || (2 * t.abs()) % (p - 1) != 0 {
        return None;
    }
    Some(t.signum() * (2 * t.abs() / (p - 1) + 1))
}

/// True when `γ0` is exactly the curve of a torus knot `T(p, q)`; such curves
/// are `p`-cables of the unknot whatever their arc lengths.
pub fn is_torus_gamma0(k: &Multicurve, p: i64) -> bool {
    torus_partner(k, p)
        .and_then(|q| torus_knot_curve(p, q).ok())
        .is_some_and(|t| t.gamma0 == k.gamma0)
}

/// Upper bound on `p` for a cable of a nontrivial knot: the first left arc
/// of the cable has length at least `p - 1`. `None` when `γ0` is horizontal.
pub fn arc_length_bound(k: &Multicurve) -> Option<i64> {
    if epsilon(k) == 0 {
        return None;
    }
    first_left_arc(k).map(|l| l + 1)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PEntry {
    pub p: i64,
    pub verdict: Verdict,
    pub closed_components: Check,
    pub gamma0_passing: Check,
    pub arc_length: Check,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ObstructionReport {
    pub p_max: Option<i64>,
    pub entries: Vec<PEntry>,
    pub note: &'static str,
}

pub fn check_cable(k: &Multicurve, p: i64) -> PEntry {
    let closed = closed_component_check(k, p);
    let passing = gamma0_passing_check(k, p);
    let arc = match arc_length_bound(k) {
        Some(b) if p > b && !is_torus_gamma0(k, p) => Check::from_witnesses(vec![format!(
            "first left arc has length {}, so p <= {b}",
            b - 1
        )]),
        _ => Check::possible(),
    };
    let obstructed = [&closed, &passing, &arc].iter().any(|c| c.verdict == Verdict::Obstructed);
    PEntry {
        p,
        verdict: if obstructed { Verdict::Obstructed } else { Verdict::Possible },
        closed_components: closed,
        gamma0_passing: passing,
        arc_length: arc,
    }
}

pub fn obstruction_report(k: &Multicurve, p_max: i64) -> ObstructionReport {
    ObstructionReport {
        p_max: arc_length_bound(k),
        entries: (2..=p_max).map(|p| check_cable(k, p)).collect(),
        note: "necessary conditions only: 'possible' means no obstruction was found",
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cabling::{cable_geometric, unknot};

    fn mc(g: &str, closed: &[(&str, i64)]) -> Multicurve {
        Multicurve::new(
            g.parse().unwrap(),
            closed.iter().map(|(w, n)| (w.parse().unwrap(), *n)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn figure_eight_component() {
        let k = mc("e", &[("a1 b1' a1' b1", 0)]);
        assert_eq!(closed_component_check(&k, 1).verdict, Verdict::Possible);
        for p in 2..6 {
            assert_eq!(closed_component_check(&k, p).verdict, Verdict::Obstructed);
        }
    }

    #[test]
    fn synthetic_curve() {
        let k = mc("c10 a1' b2' a1' b1' a1' b1' a2' b1'", &[]);
        assert_eq!(arc_length_bound(&k), Some(3));
        assert_eq!(gamma0_passing_check(&k, 2).verdict, Verdict::Obstructed);
        assert_eq!(gamma0_passing_check(&k, 3).verdict, Verdict::Obstructed);
        assert_eq!(check_cable(&k, 4).verdict, Verdict::Obstructed);
    }

    #[test]
    fn trefoil_and_unknot() {
        let t = mc("a1 c2' b1", &[]);
        assert_eq!(arc_length_bound(&t), Some(2));
        assert_eq!(arc_length_bound(&unknot()), None);
        for p in 2..6 {
            assert_eq!(check_cable(&unknot(), p).verdict, Verdict::Possible);
        }
        // the trefoil is T(2, 3) and T(3, 2)
        assert_eq!(check_cable(&t, 2).verdict, Verdict::Possible);
        assert_eq!(check_cable(&t, 3).verdict, Verdict::Possible);
        assert_eq!(check_cable(&t, 4).verdict, Verdict::Obstructed);
    }

    #[test]
    fn cables_pass_their_own_checks() {
        let t = mc("a1 c2' b1", &[]);
        for (p, q) in [(2, 1), (3, 2), (3, -2), (5, 2)] {
            let c = cable_geometric(&t, p, q).unwrap().curve;
            assert_eq!(check_cable(&c, p).verdict, Verdict::Possible, "({p}, {q})");
        }
    }
}
