//! Loop calculus: cyclic words in the letters `a_k`, `b_k`, `c_k` (with `d_k`
//! and `e` folded into barred `c` letters), their local systems, and the
//! translation to and from sequences of crossings with the vertical lattice
//! lines.
//!
//! Conventions. A letter is one segment of curve between consecutive crossings
//! of a vertical lattice line; its index is the number of units it moves
//! upward. `a` segments stay to the right of the line they start and end on,
//! `b` segments stay to the left, a forward `c` wraps rightward to the next
//! line and a barred `c` wraps leftward. With these conventions the right-hand
//! trefoil is `a1 c2' b1`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{CurveError, Result};
use crate::gf2::BitMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum LetterKind {
    A,
    B,
    /// Rightward wrap.
    C,
    /// Leftward wrap.
    CBar,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    L,
    R,
}

impl Side {
    pub fn flip(self) -> Self {
        match self {
            Side::L => Side::R,
            Side::R => Side::L,
        }
    }
}

/// Direction in which a curve passes through a vertical line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Dir {
    Right,
    Left,
}

impl Dir {
    pub fn flip(self) -> Self {
        match self {
            Dir::Right => Dir::Left,
            Dir::Left => Dir::Right,
        }
    }

    pub fn sign(self) -> i64 {
        match self {
            Dir::Right => 1,
            Dir::Left => -1,
        }
    }
}

/// A crossing of the vertical line `x = line` through the open interval
/// `(n, n + 1)` between two pegs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Crossing {
    pub line: i64,
    pub n: i64,
    pub dir: Dir,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub kind: LetterKind,
    /// Vertical displacement of the segment, in units.
    pub index: i64,
}

impl Letter {
    pub fn new(kind: LetterKind, index: i64) -> Result<Self> {
        match kind {
            LetterKind::A if index == 0 => Err(CurveError::ZeroIndex { letter: 'a' }),
            LetterKind::B if index == 0 => Err(CurveError::ZeroIndex { letter: 'b' }),
            _ => Ok(Self { kind, index }),
        }
    }

    pub fn a(k: i64) -> Self {
        Self::new(LetterKind::A, k).expect("a_0 does not exist")
    }

    pub fn b(k: i64) -> Self {
        Self::new(LetterKind::B, k).expect("b_0 does not exist")
    }

    pub fn c(k: i64) -> Self {
        Self { kind: LetterKind::C, index: k }
    }

    pub fn c_bar(k: i64) -> Self {
        Self { kind: LetterKind::CBar, index: k }
    }

    /// Side of the vertical line the segment occupies near its start and end.
    pub fn sides(self) -> (Side, Side) {
        match self.kind {
            LetterKind::A => (Side::R, Side::R),
            LetterKind::B => (Side::L, Side::L),
            LetterKind::C => (Side::R, Side::L),
            LetterKind::CBar => (Side::L, Side::R),
        }
    }

    /// The same segment traversed backwards.
    pub fn reversed(self) -> Self {
        let kind = match self.kind {
            LetterKind::A => LetterKind::A,
            LetterKind::B => LetterKind::B,
            LetterKind::C => LetterKind::CBar,
            LetterKind::CBar => LetterKind::C,
        };
        Self { kind, index: -self.index }
    }

    /// Net number of lines crossed to the right.
    pub fn horizontal(self) -> i64 {
        match self.kind {
            LetterKind::C => 1,
            LetterKind::CBar => -1,
            _ => 0,
        }
    }

    pub fn is_wrap(self) -> bool {
        matches!(self.kind, LetterKind::C | LetterKind::CBar)
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = self.index;
        match (self.kind, k.signum()) {
            (LetterKind::A, 1) => write!(f, "a{k}"),
            (LetterKind::A, _) => write!(f, "a{}'", -k),
            (LetterKind::B, 1) => write!(f, "b{k}"),
            (LetterKind::B, _) => write!(f, "b{}'", -k),
            (LetterKind::C, 1) => write!(f, "c{k}"),
            (LetterKind::C, 0) => write!(f, "e'"),
            (LetterKind::C, _) => write!(f, "d{}'", -k),
            (LetterKind::CBar, 1) => write!(f, "d{k}"),
            (LetterKind::CBar, 0) => write!(f, "e"),
            (LetterKind::CBar, _) => write!(f, "c{}'", -k),
        }
    }
}

/// An invertible GF(2) matrix decorating a curve component.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LocalSystem(BitMatrix);

impl LocalSystem {
    pub fn new(matrix: BitMatrix) -> Result<Self> {
        if !matrix.is_invertible() {
            return Err(CurveError::LocalSystem(format!("{matrix} is not invertible")));
        }
        Ok(Self(matrix))
    }

    pub fn trivial(dim: usize) -> Self {
        Self(BitMatrix::identity(dim))
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn matrix(&self) -> &BitMatrix {
        &self.0
    }

    /// True when the monodromy is the identity (parallel copies only).
    pub fn is_trivial(&self) -> bool {
        self.0.is_identity()
    }

    pub fn compose(&self, other: &Self) -> Self {
        Self(self.0.mul(&other.0))
    }

    pub fn inverse(&self) -> Self {
        Self(self.0.inverse().expect("local systems are invertible"))
    }

    pub fn canonical(&self) -> Self {
        Self(self.0.canonical_form())
    }

    pub fn is_conjugate(&self, other: &Self) -> bool {
        self.0.is_conjugate(&other.0)
    }
}

/// A cyclic word, optionally with a local system carried by one letter.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LoopWord {
    letters: Vec<Letter>,
    local_system: Option<(LocalSystem, usize)>,
}

impl LoopWord {
    pub fn new(letters: Vec<Letter>) -> Result<Self> {
        Self::with_local_system(letters, None)
    }

    pub fn with_local_system(
        letters: Vec<Letter>,
        local_system: Option<(LocalSystem, usize)>,
    ) -> Result<Self> {
        if letters.is_empty() {
            return Err(CurveError::EmptyWord);
        }
        for l in &letters {
            Letter::new(l.kind, l.index)?;
        }
        let n = letters.len();
        for i in 0..n {
            let next = (i + 1) % n;
            if letters[i].sides().1 == letters[next].sides().0 {
                return Err(CurveError::SideAlternation { junction: i, next });
            }
        }
        let local_system = match local_system {
            Some((ls, _)) if ls.dim() == 1 => None,
            Some((ls, pos)) => {
                if pos >= n {
                    return Err(CurveError::LocalSystem(format!("carrier {pos} out of range")));
                }
                let carrier = if ls.is_trivial() {
                    first_a(&letters).unwrap_or(pos)
                } else if letters[pos].kind == LetterKind::A {
                    pos
                } else {
                    first_a(&letters).ok_or_else(|| {
                        CurveError::LocalSystem("nontrivial local system on a word with no a-letter".into())
                    })?
                };
                Some((ls, carrier))
            }
            None => None,
        };
        Ok(Self { letters, local_system })
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn local_system(&self) -> Option<&(LocalSystem, usize)> {
        self.local_system.as_ref()
    }

    pub fn local_dim(&self) -> usize {
        self.local_system.as_ref().map_or(1, |(ls, _)| ls.dim())
    }

    /// Horizontal period: net number of vertical lines crossed rightward.
    pub fn horizontal_period(&self) -> i64 {
        self.letters.iter().map(|l| l.horizontal()).sum()
    }

    /// Net vertical drift over one pass.
    pub fn vertical_drift(&self) -> i64 {
        self.letters.iter().map(|l| l.index).sum()
    }

    pub fn is_c_word(&self) -> bool {
        self.letters.iter().all(|l| l.kind == LetterKind::C)
    }

    pub fn reversed(&self) -> Self {
        let n = self.letters.len();
        let letters = self.letters.iter().rev().map(|l| l.reversed()).collect();
        let local_system = self
            .local_system
            .as_ref()
            .map(|(ls, pos)| (ls.inverse(), n - 1 - pos));
        Self { letters, local_system }
    }

    pub fn rotated(&self, k: usize) -> Self {
        let n = self.letters.len();
        let k = k % n;
        let mut letters = self.letters.clone();
        letters.rotate_left(k);
        let local_system = self
            .local_system
            .as_ref()
            .map(|(ls, pos)| (ls.clone(), (pos + n - k) % n));
        Self { letters, local_system }
    }

    /// Canonical rotation keeping the orientation: the lexicographically least
    /// rotation, with the local system moved to the first `a` letter in its
    /// canonical conjugacy form.
    pub fn canonical_rotation(&self) -> Self {
        let k = least_rotation(&self.letters);
        let mut w = self.rotated(k);
        if let Some((ls, pos)) = w.local_system.take() {
            let carrier = first_a(&w.letters).unwrap_or(pos);
            w.local_system = Some((ls.canonical(), carrier));
        }
        w
    }

    /// Canonical representative up to rotation and reversal. Words that wrap
    /// are oriented leftward (the usual display orientation, so the unknot is
    /// `e`); closed words take the lesser of the two orientations.
    pub fn normalize(&self) -> Self {
        let fwd = self.canonical_rotation();
        let rev = self.reversed().canonical_rotation();
        match self.horizontal_period().signum() {
            1 => rev,
            -1 => fwd,
            _ => fwd.min(rev),
        }
    }

    pub fn equivalent(&self, other: &Self) -> bool {
        self.normalize() == other.normalize()
    }

    /// Crossings before each letter, starting at `(line, n)`. The returned
    /// vector has one more entry than the word: the last is the image of the
    /// first under the deck translation.
    pub fn crossings(&self, line: i64, n: i64) -> Vec<Crossing> {
        let first_dir = match self.letters[0].sides().0 {
            Side::R => Dir::Right,
            Side::L => Dir::Left,
        };
        let mut out = Vec::with_capacity(self.letters.len() + 1);
        let mut c = Crossing { line, n, dir: first_dir };
        out.push(c);
        for l in &self.letters {
            let (line, dir) = match l.kind {
                LetterKind::A => (c.line, Dir::Left),
                LetterKind::B => (c.line, Dir::Right),
                LetterKind::C => (c.line + 1, Dir::Right),
                LetterKind::CBar => (c.line - 1, Dir::Left),
            };
            c = Crossing { line, n: c.n + l.index, dir };
            out.push(c);
        }
        out
    }

    /// Letters between consecutive crossings. `crossings` must be closed: its
    /// last entry is the translate of its first.
    pub fn letters_from_crossings(crossings: &[Crossing]) -> Result<Vec<Letter>> {
        crossings
            .windows(2)
            .enumerate()
            .map(|(i, w)| {
                let (a, b) = (w[0], w[1]);
                let index = b.n - a.n;
                let kind = match (a.dir, b.dir, b.line - a.line) {
                    (Dir::Right, Dir::Left, 0) => LetterKind::A,
                    (Dir::Left, Dir::Right, 0) => LetterKind::B,
                    (Dir::Right, Dir::Right, 1) => LetterKind::C,
                    (Dir::Left, Dir::Left, -1) => LetterKind::CBar,
                    _ => {
                        return Err(CurveError::InvalidMulticurve(format!(
                            "inconsistent crossings {a:?} -> {b:?}"
                        )))
                    }
                };
                if index == 0 && matches!(kind, LetterKind::A | LetterKind::B) {
                    return Err(CurveError::NotReduced(i));
                }
                Ok(Letter { kind, index })
            })
            .collect()
    }

    /// Expands the local system into parallel copies joined on the carrier.
    pub fn tensor_local_system(&self) -> ExpandedTrack {
        let (copies, carrier, connections) = match &self.local_system {
            None => (1, 0, vec![(0, 0)]),
            Some((ls, pos)) => {
                let m = ls.matrix();
                let n = m.dim();
                let conn = (0..n)
                    .flat_map(|i| (0..n).map(move |j| (i, j)))
                    .filter(|&(i, j)| m.get(i, j))
                    .collect();
                (n, *pos, conn)
            }
        };
        ExpandedTrack {
            copies,
            letters: self.letters.clone(),
            carrier,
            connections,
        }
    }
}

impl fmt::Display for LoopWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{l}")?;
            if let Some((ls, pos)) = &self.local_system {
                if *pos == i {
                    write!(f, "{}", ls.matrix())?;
                }
            }
        }
        Ok(())
    }
}

impl std::str::FromStr for LoopWord {
    type Err = CurveError;

    fn from_str(s: &str) -> Result<Self> {
        parse_word(s)
    }
}

/// Letter-level train track for a word with a local system: `copies` parallel
/// copies of every letter, with copy `i` of the carrier's initial end joined
/// to copy `j` of its final end for each `(i, j)` in `connections`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpandedTrack {
    pub copies: usize,
    pub letters: Vec<Letter>,
    pub carrier: usize,
    pub connections: Vec<(usize, usize)>,
}

fn first_a(letters: &[Letter]) -> Option<usize> {
    letters.iter().position(|l| l.kind == LetterKind::A)
}

/// Index of the lexicographically least rotation (quadratic; words are short).
pub fn least_rotation<T: Ord>(xs: &[T]) -> usize {
    let n = xs.len();
    (0..n)
        .min_by(|&i, &j| {
            (0..n)
                .map(|k| xs[(i + k) % n].cmp(&xs[(j + k) % n]))
                .find(|o| o.is_ne())
                .unwrap_or(std::cmp::Ordering::Equal)
                .then(i.cmp(&j))
        })
        .unwrap_or(0)
}

/// Parses the word grammar: whitespace separated `a<k>`, `b<k>`, `c<k>`,
/// `d<k>`, `e`, each optionally followed by `'` and by a local system block
/// `[n; row; row; ...]` with rows as bit strings.
pub fn parse_word(text: &str) -> Result<LoopWord> {
    let bytes = text.as_bytes();
    let mut pos = 0;
    let mut letters = Vec::new();
    let mut systems: Vec<(LocalSystem, usize)> = Vec::new();
    let syntax = |pos: usize, msg: &str| CurveError::Syntax { pos, msg: msg.to_string() };

    loop {
        while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
            pos += 1;
        }
        if pos >= bytes.len() {
            break;
        }
        let start = pos;
        let ch = bytes[pos] as char;
        pos += 1;
        let digits_start = pos;
        while pos < bytes.len() && bytes[pos].is_ascii_digit() {
            pos += 1;
        }
        let k: Option<i64> = if pos > digits_start {
            Some(
                text[digits_start..pos]
                    .parse()
                    .map_err(|_| syntax(digits_start, "index out of range"))?,
            )
        } else {
            None
        };
        let bar = pos < bytes.len() && bytes[pos] == b'\'';
        if bar {
            pos += 1;
        }
        let letter = match (ch, k) {
            ('e', None) => Letter::c_bar(0),
            ('e', Some(_)) => return Err(syntax(digits_start, "e takes no index")),
            (_, None) if "abcd".contains(ch) => return Err(syntax(digits_start, "missing index")),
            ('a', Some(k)) => Letter::new(LetterKind::A, k)?,
            ('b', Some(k)) => Letter::new(LetterKind::B, k)?,
            ('c', Some(k)) => Letter::c(k),
            ('d', Some(k)) => Letter::c_bar(k),
            _ => return Err(syntax(start, &format!("unexpected character {ch:?}"))),
        };
        letters.push(if bar { letter.reversed() } else { letter });

        if pos < bytes.len() && bytes[pos] == b'[' {
            let close = text[pos..]
                .find(']')
                .map(|i| pos + i)
                .ok_or_else(|| syntax(pos, "unterminated local system"))?;
            let body = &text[pos + 1..close];
            let mut parts = body.split(';').map(str::trim);
            let dim: usize = parts
                .next()
                .and_then(|d| d.parse().ok())
                .ok_or_else(|| syntax(pos + 1, "local system needs a dimension"))?;
            let rows: Vec<&str> = parts.collect();
            if rows.len() != dim {
                return Err(syntax(pos + 1, "local system row count does not match dimension"));
            }
            let m = BitMatrix::from_bit_strings(&rows)?;
            systems.push((LocalSystem::new(m)?, letters.len() - 1));
            pos = close + 1;
        }
        if pos < bytes.len() && !bytes[pos].is_ascii_whitespace() {
            return Err(syntax(pos, "expected whitespace between letters"));
        }
    }

    let local = match systems.len() {
        0 => None,
        _ => {
            let dim = systems[0].0.dim();
            if systems.iter().any(|(s, _)| s.dim() != dim) {
                return Err(CurveError::LocalSystem("local systems of different dimensions".into()));
            }
            let pos = systems[0].1;
            let composed = systems
                .iter()
                .skip(1)
                .fold(systems[0].0.clone(), |acc, (s, _)| acc.compose(s));
            Some((composed, pos))
        }
    };
    LoopWord::with_local_system(letters, local)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_trefoil() {
        let w = parse_word("a1 c2' b1").unwrap();
        assert_eq!(w.letters(), &[Letter::a(1), Letter::c_bar(-2), Letter::b(1)]);
        assert_eq!(w.to_string(), "a1 c2' b1");
        assert_eq!(w.horizontal_period(), -1);
        assert_eq!(w.vertical_drift(), 0);
    }

    #[test]
    fn d_and_e_fold_into_c() {
        let w = parse_word("e").unwrap();
        assert_eq!(w.letters(), &[Letter::c_bar(0)]);
        assert_eq!(parse_word("e'").unwrap().letters(), &[Letter::c(0)]);
        assert_eq!(parse_word("d3").unwrap().letters(), &[Letter::c_bar(3)]);
        assert_eq!(parse_word("d3'").unwrap().letters(), &[Letter::c(-3)]);
        assert_eq!(parse_word("c0").unwrap().letters(), &[Letter::c(0)]);
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(parse_word("a0 b1'"), Err(CurveError::ZeroIndex { letter: 'a' })));
        assert!(matches!(parse_word("a1 x2"), Err(CurveError::Syntax { .. })));
        assert!(matches!(parse_word("a"), Err(CurveError::Syntax { .. })));
        assert!(matches!(parse_word(""), Err(CurveError::EmptyWord)));
        // a ends on the right, so the next letter must start on the left
        assert!(matches!(
            parse_word("a1 a1'"),
            Err(CurveError::SideAlternation { junction: 0, next: 1 })
        ));
        assert!(matches!(parse_word("a1 c2"), Err(CurveError::SideAlternation { .. })));
    }

    #[test]
    fn closed_loop_word() {
        let w = parse_word("a1 b1'").unwrap();
        assert_eq!(w.letters(), &[Letter::a(1), Letter::b(-1)]);
        assert_eq!(w.horizontal_period(), 0);
        assert_eq!(w.vertical_drift(), 0);
    }

    #[test]
    fn normalize_rotation_and_reversal() {
        let w = parse_word("a1 c2' b1").unwrap();
        let rot = parse_word("b1 a1 c2'").unwrap();
        assert_eq!(w.normalize(), rot.normalize());
        assert_eq!(w.normalize(), w.reversed().normalize());
        assert_eq!(w.normalize().to_string(), "a1 c2' b1");
        let f8 = parse_word("a1 b1' a1' b1").unwrap();
        assert_eq!(f8.normalize(), f8.reversed().normalize());
        assert_eq!(f8.normalize(), f8.rotated(3).normalize());
    }

    #[test]
    fn crossing_round_trip() {
        let w = parse_word("a1 c2' b1").unwrap();
        let cs = w.crossings(0, 1);
        assert_eq!(cs.len(), 4);
        assert_eq!(cs[3].line, -1);
        assert_eq!(cs[3].n, 1);
        assert_eq!(LoopWord::letters_from_crossings(&cs).unwrap(), w.letters());
    }

    #[test]
    fn local_system_parsing() {
        let w = parse_word("a2[3; 001; 100; 111] b2'").unwrap();
        let (ls, pos) = w.local_system().unwrap();
        assert_eq!(*pos, 0);
        assert_eq!(ls.dim(), 3);
        assert_eq!(w.to_string(), "a2[3; 001; 100; 111] b2'");
        // a system written on the b letter moves to the a letter
        let moved = parse_word("a2 b2'[2; 01; 11]").unwrap();
        assert_eq!(moved.local_system().unwrap().1, 0);
        // systems on several letters compose in traversal order
        let two = parse_word("a2[2; 01; 11] b2'[2; 01; 11]").unwrap();
        let m = BitMatrix::from_bit_strings(&["01", "11"]).unwrap();
        assert_eq!(two.local_system().unwrap().0.matrix(), &m.mul(&m));
        assert!(parse_word("a1[2; 11; 11] b1'").is_err());
        assert!(parse_word("c1[2; 01; 11]").is_err());
    }

    #[test]
    fn tensor_expansion() {
        let plain = parse_word("a1 b1'").unwrap().tensor_local_system();
        assert_eq!(plain.copies, 1);
        assert_eq!(plain.connections, vec![(0, 0)]);
        let id = parse_word("a1[3; 100; 010; 001] b1'").unwrap().tensor_local_system();
        assert_eq!(id.connections, vec![(0, 0), (1, 1), (2, 2)]);
        let w = parse_word("a2[3; 001; 100; 111] b2'").unwrap().tensor_local_system();
        assert_eq!(w.copies, 3);
        assert_eq!(w.connections, vec![(0, 2), (1, 0), (2, 0), (2, 1), (2, 2)]);
    }
}
