use rand::Rng;

use crate::cabling::{cable_geometric, unknot};
use crate::geometry::Multicurve;
use crate::loopcalc::{Letter, LetterKind, LoopWord, Side};

fn curve(gamma0: &str, closed: &[(&str, i64)]) -> Multicurve {
    Multicurve::new(
        gamma0.parse().expect("corpus word"),
        closed.iter().map(|(w, n)| (w.parse().expect("corpus word"), *n)).collect(),
    )
    .expect("corpus curve")
}

pub fn right_trefoil() -> Multicurve {
    curve("a1 c2' b1", &[])
}

/// Mirror of the right trefoil: reverse the word, swap arcs, negate indices.
pub fn left_trefoil() -> Multicurve {
    curve("b1' a1' d2", &[])
}

/// Horizontal `γ0` plus a figure-eight component around two stacked pegs.
pub fn figure_eight() -> Multicurve {
    curve("e", &[("a1 b1' a1' b1", 0)])
}

/// Staircase `γ0` with a length-two first left arc; same Alexander
/// polynomial as the `(-2, 3, 7)` pretzel knot.
pub fn synthetic_obstruction() -> Multicurve {
    curve("c10 a1' b2' a1' b1' a1' b1' a2' b1'", &[])
}

/// `K_n`: the right trefoil cabled `n` times with `(2, 1)`.
pub fn iterated_cable(n: usize) -> Multicurve {
    (0..n).fold(right_trefoil(), |k, _| {
        cable_geometric(&k, 2, 1).expect("(2, 1) is a valid cable").curve
    })
}

/// The built-in named curves, in a fixed order.
pub fn corpus() -> Vec<(&'static str, Multicurve)> {
    vec![
        ("unknot", unknot()),
        ("right-trefoil", right_trefoil()),
        ("left-trefoil", left_trefoil()),
        ("figure-eight", figure_eight()),
        ("synthetic-12n242", synthetic_obstruction()),
        ("iterated-1", iterated_cable(1)),
        ("iterated-2", iterated_cable(2)),
    ]
}

pub fn lookup(name: &str) -> Option<Multicurve> {
    if let Some(n) = name.strip_prefix("iterated-") {
        return n.parse().ok().filter(|&n| n <= 8).map(iterated_cable);
    }
    corpus().into_iter().find(|(n, _)| *n == name).map(|(_, k)| k)
}

/// Builds a valid word from free choices: the first entry picks the first
/// letter's kind (`0..4`), each later one picks between the two kinds allowed
/// after its predecessor. Indices are taken as given, except that arcs with
/// index zero get index one. The last letter is forced so the word closes up.
pub fn word_from_choices(choices: &[(u8, i64)]) -> LoopWord {
    let pick = |kind: LetterKind, k: i64| match kind {
        LetterKind::A => Letter::a(if k == 0 { 1 } else { k }),
        LetterKind::B => Letter::b(if k == 0 { 1 } else { k }),
        LetterKind::C => Letter::c(k),
        LetterKind::CBar => Letter::c_bar(k),
    };
    let starting = |side: Side| match side {
        Side::R => [LetterKind::A, LetterKind::C],
        Side::L => [LetterKind::B, LetterKind::CBar],
    };
    let Some(&(first, k0)) = choices.first() else {
        return LoopWord::new(vec![Letter::c(0)]).expect("a lone wrap is valid");
    };
    let kinds = [LetterKind::A, LetterKind::B, LetterKind::C, LetterKind::CBar];
    let mut letters = vec![pick(kinds[first as usize % 4], k0)];
    if choices.len() == 1 {
        // a single letter only closes up as a wrap
        let kind = if first % 2 == 0 { LetterKind::C } else { LetterKind::CBar };
        return LoopWord::new(vec![pick(kind, k0)]).expect("a lone wrap is valid");
    }
    let first_start = letters[0].sides().0;
    for (i, &(c, k)) in choices.iter().enumerate().skip(1) {
        let options = starting(letters[i - 1].sides().1.flip());
        let kind = if i + 1 == choices.len() {
            *options
                .iter()
                .find(|o| pick(**o, 1).sides().1 != first_start)
                .expect("one option closes up")
        } else {
            options[c as usize % 2]
        };
        letters.push(pick(kind, k));
    }
    LoopWord::new(letters).expect("choices always give a valid word")
}

/// A random valid word of length `1..=max_len` with indices in `-3..=3`.
pub fn random_word<R: Rng>(rng: &mut R, max_len: usize) -> LoopWord {
    let len = rng.gen_range(1..=max_len);
    let choices: Vec<(u8, i64)> = (0..len).map(|_| (rng.gen_range(0..4), rng.gen_range(-3..=3))).collect();
    word_from_choices(&choices)
}
