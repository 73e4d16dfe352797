//! Exact piecewise-linear geometry in the plane punctured at the integer
//! lattice: realizing words as curves, reading them back, tightening, and the
//! plane maps used for cabling (the lattice slide `g`, its rescaled form `f`,
//! fractional shears keyed by staircase curves, and integral basis changes).
//!
//! A curve is stored as the waypoints of one period together with the deck
//! translation `(h, v)` that closes it. Homotopy classes are handled through
//! crossing sequences against the vertical lines `x = m`: the strips between
//! those lines are simply connected, so the sequence of (line, gap between
//! pegs, direction) crossings determines a curve up to homotopy, and freely
//! cancelling back-and-forth pairs yields the tight representative.
//!
//! Points with `x == m` count as lying to the right of line `m`. This amounts
//! to nudging every line infinitesimally leftward, which is harmless because
//! no curve may touch a lattice point.

use std::fmt;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{CurveError, Result};
use crate::loopcalc::{Crossing, Dir, LetterKind, LocalSystem, LoopWord};

pub type Q = Ratio<i128>;

pub fn q(n: i64) -> Q {
    Q::from_integer(n as i128)
}

pub fn half() -> Q {
    Q::new(1, 2)
}

pub fn floor_q(x: &Q) -> i64 {
    x.floor().to_integer() as i64
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    pub x: Q,
    pub y: Q,
}

impl Point {
    pub fn new(x: Q, y: Q) -> Self {
        Self { x, y }
    }

    pub fn shift(self, dx: i64, dy: i64) -> Self {
        Self::new(self.x + q(dx), self.y + q(dy))
    }

    pub fn is_lattice(&self) -> bool {
        self.x.is_integer() && self.y.is_integer()
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// A closed curve in the plane modulo the translation `period`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PLCurve {
    pub waypoints: Vec<Point>,
    pub period: (i64, i64),
}

impl PLCurve {
    pub fn new(waypoints: Vec<Point>, period: (i64, i64)) -> Self {
        Self { waypoints, period }
    }

    /// The curve left after tightening a nullhomotopic loop.
    pub fn empty() -> Self {
        Self { waypoints: Vec::new(), period: (0, 0) }
    }

    pub fn is_empty(&self) -> bool {
        self.waypoints.is_empty()
    }

    fn closing_point(&self) -> Point {
        self.waypoints[0].shift(self.period.0, self.period.1)
    }

    /// Segments of one period, the last one closing up to the translate of
    /// the first waypoint.
    pub fn segments(&self) -> Vec<(Point, Point)> {
        if self.waypoints.is_empty() {
            return Vec::new();
        }
        let n = self.waypoints.len();
        (0..n)
            .map(|i| {
                let b = if i + 1 < n { self.waypoints[i + 1] } else { self.closing_point() };
                (self.waypoints[i], b)
            })
            .collect()
    }

    pub fn translated(&self, dx: i64, dy: i64) -> Self {
        Self {
            waypoints: self.waypoints.iter().map(|p| p.shift(dx, dy)).collect(),
            period: self.period,
        }
    }

    pub fn reversed(&self) -> Self {
        if self.is_empty() {
            return self.clone();
        }
        Self {
            waypoints: self.waypoints.iter().rev().copied().collect(),
            period: (-self.period.0, -self.period.1),
        }
    }

    /// True when no segment touches a lattice point.
    pub fn avoids_lattice(&self) -> bool {
        self.segments().iter().all(|&(a, b)| !segment_hits_lattice(a, b))
    }

    /// Image under the half-turn about the cell centre `(1/2, 1/2)`.
    pub fn half_turn(&self) -> Self {
        let one = Q::one();
        Self {
            waypoints: self
                .waypoints
                .iter()
                .map(|p| Point::new(one - p.x, one - p.y))
                .collect(),
            period: (-self.period.0, -self.period.1),
        }
    }

    /// Winding number around `peg`; only meaningful for curves closed in the
    /// plane (period zero).
    pub fn winding_number(&self, peg: Point) -> i64 {
        let mut wn = 0;
        for (a, b) in self.segments() {
            let side = (b.x - a.x) * (peg.y - a.y) - (peg.x - a.x) * (b.y - a.y);
            if a.y <= peg.y {
                if b.y > peg.y && side.is_positive() {
                    wn += 1;
                }
            } else if b.y <= peg.y && side.is_negative() {
                wn -= 1;
            }
        }
        wn
    }

    /// Pegs with nonzero winding number, as `(x, y, winding)`.
    pub fn enclosed_pegs(&self) -> Vec<(i64, i64, i64)> {
        if self.is_empty() || self.period != (0, 0) {
            return Vec::new();
        }
        let xs = self.waypoints.iter().map(|p| p.x);
        let ys = self.waypoints.iter().map(|p| p.y);
        let (x0, x1) = minmax(xs);
        let (y0, y1) = minmax(ys);
        let mut out = Vec::new();
        for x in floor_q(&x0)..=floor_q(&x1) + 1 {
            for y in floor_q(&y0)..=floor_q(&y1) + 1 {
                let w = self.winding_number(Point::new(q(x), q(y)));
                if w != 0 {
                    out.push((x, y, w));
                }
            }
        }
        out
    }
}

fn minmax(it: impl Iterator<Item = Q>) -> (Q, Q) {
    it.fold(None, |acc: Option<(Q, Q)>, v| match acc {
        None => Some((v, v)),
        Some((lo, hi)) => Some((lo.min(v), hi.max(v))),
    })
    .unwrap_or((Q::zero(), Q::zero()))
}

fn segment_hits_lattice(a: Point, b: Point) -> bool {
    if a.x == b.x {
        if !a.x.is_integer() {
            return false;
        }
        let (lo, hi) = if a.y <= b.y { (a.y, b.y) } else { (b.y, a.y) };
        return lo.ceil() <= hi.floor();
    }
    let (lo, hi) = if a.x <= b.x { (a.x, b.x) } else { (b.x, a.x) };
    let mut m = lo.ceil();
    while m <= hi {
        let t = (m - a.x) / (b.x - a.x);
        if (a.y + t * (b.y - a.y)).is_integer() {
            return true;
        }
        m += Q::one();
    }
    false
}

/// Realizes a word as a curve whose first crossing is of line `origin.0` in
/// the gap `(origin.1, origin.1 + 1)`. Crossings sit at `(line, n + 1/2)`;
/// `a` arcs bulge to `x = line + 1/2`, `b` arcs to `x = line - 1/2`, and wraps
/// are straight segments between neighbouring lines.
pub fn realize(w: &LoopWord, origin: (i64, i64)) -> PLCurve {
    let cs = w.crossings(origin.0, origin.1);
    let mut pts = Vec::with_capacity(3 * w.len());
    for (c, (l, next)) in cs.iter().zip(w.letters().iter().zip(&cs[1..])) {
        let here = Point::new(q(c.line), q(c.n) + half());
        pts.push(here);
        let bulge = match l.kind {
            LetterKind::A => Some(q(c.line) + half()),
            LetterKind::B => Some(q(c.line) - half()),
            _ => None,
        };
        if let Some(x) = bulge {
            pts.push(Point::new(x, here.y));
            pts.push(Point::new(x, q(next.n) + half()));
        }
    }
    PLCurve::new(pts, (w.horizontal_period(), w.vertical_drift()))
}

/// Crossings of the vertical lattice lines over one period, in order.
pub fn crossing_sequence(c: &PLCurve) -> Result<Vec<Crossing>> {
    let mut out = Vec::new();
    for (a, b) in c.segments() {
        let (fa, fb) = (floor_q(&a.x), floor_q(&b.x));
        if fa == fb {
            continue;
        }
        let (lines, dir): (Vec<i64>, Dir) = if fb > fa {
            ((fa + 1..=fb).collect(), Dir::Right)
        } else {
            ((fb + 1..=fa).rev().collect(), Dir::Left)
        };
        for m in lines {
            let t = (q(m) - a.x) / (b.x - a.x);
            let y = a.y + t * (b.y - a.y);
            if y.is_integer() {
                return Err(CurveError::InvalidMulticurve(format!(
                    "curve passes through lattice point ({m}, {y})"
                )));
            }
            out.push(Crossing { line: m, n: floor_q(&y), dir });
        }
    }
    // A crossing met exactly at the closing point belongs at the start: it is
    // the crossing through the first waypoint.
    if let (Some(last), Some(first)) = (out.last().copied(), c.waypoints.first()) {
        let (h, v) = c.period;
        let closing = first.shift(h, v);
        if closing.x == q(last.line) && floor_q(&closing.y) == last.n && !closing.y.is_integer() {
            out.pop();
            out.insert(0, Crossing { line: last.line - h, n: last.n - v, dir: last.dir });
        }
    }
    Ok(out)
}

fn cancels(a: &Crossing, b: &Crossing) -> bool {
    a.line == b.line && a.n == b.n && a.dir != b.dir
}

/// Free cyclic reduction of a crossing sequence whose successor of the last
/// entry is the first entry translated by `period`.
pub fn reduce_crossings(seq: &[Crossing], period: (i64, i64)) -> Vec<Crossing> {
    let mut st: Vec<Crossing> = Vec::with_capacity(seq.len());
    for c in seq {
        match st.last() {
            Some(t) if cancels(t, c) => {
                st.pop();
            }
            _ => st.push(*c),
        }
    }
    let shift = |c: &Crossing| Crossing { line: c.line + period.0, n: c.n + period.1, dir: c.dir };
    let (mut lo, mut hi) = (0, st.len());
    while hi - lo >= 2 && cancels(&st[hi - 1], &shift(&st[lo])) {
        lo += 1;
        hi -= 1;
    }
    st[lo..hi].to_vec()
}

fn word_from_sequence(seq: &[Crossing], period: (i64, i64)) -> Result<(LoopWord, (i64, i64))> {
    let first = seq[0];
    let mut closed = seq.to_vec();
    closed.push(Crossing { line: first.line + period.0, n: first.n + period.1, dir: first.dir });
    let letters = LoopWord::letters_from_crossings(&closed)?;
    Ok((LoopWord::new(letters)?, (first.line, first.n)))
}

/// The word of the tight representative together with the `(line, n)` of its
/// first crossing, or `None` when the curve is nullhomotopic.
pub fn tight_word(c: &PLCurve) -> Result<Option<(LoopWord, (i64, i64))>> {
    if c.is_empty() {
        return Ok(None);
    }
    let seq = reduce_crossings(&crossing_sequence(c)?, c.period);
    if seq.is_empty() {
        if c.period != (0, 0) {
            // a loop running along a strip without meeting a line
            return Err(CurveError::InvalidMulticurve(format!(
                "curve with period {:?} misses every vertical line",
                c.period
            )));
        }
        return Ok(None);
    }
    word_from_sequence(&seq, c.period).map(Some)
}

/// Reads the word of an already tight curve.
pub fn word_from_curve(c: &PLCurve) -> Result<LoopWord> {
    let seq = crossing_sequence(c)?;
    if seq.is_empty() {
        return Err(CurveError::EmptyWord);
    }
    let red = reduce_crossings(&seq, c.period);
    if red.len() != seq.len() {
        let at = seq
            .windows(2)
            .position(|w| cancels(&w[0], &w[1]))
            .unwrap_or(seq.len() - 1);
        return Err(CurveError::NotReduced(at));
    }
    Ok(word_from_sequence(&seq, c.period)?.0)
}

/// Tight representative of the homotopy class (empty if nullhomotopic).
pub fn pull_tight(c: &PLCurve) -> Result<PLCurve> {
    Ok(match tight_word(c)? {
        Some((w, origin)) => realize(&w, origin),
        None => PLCurve::empty(),
    })
}

/// Whether two oriented curves are homotopic among the pegs, ignoring where
/// their parametrizations start.
pub fn homotopic(a: &PLCurve, b: &PLCurve) -> Result<bool> {
    if a.period != b.period {
        return Ok(false);
    }
    let (h, v) = a.period;
    let translate = |(dl, dn): (i64, i64)| match (h, v) {
        (0, 0) => dl == 0 && dn == 0,
        (0, v) => dl == 0 && dn % v == 0,
        (h, v) => dl % h == 0 && dn == dl / h * v,
    };
    Ok(match (tight_word(a)?, tight_word(b)?) {
        (None, None) => true,
        (Some((wa, oa)), Some((wb, ob))) => {
            let cs = wa.crossings(oa.0, oa.1);
            (0..wa.len()).any(|k| {
                wa.rotated(k).letters() == wb.letters() && translate((cs[k].line - ob.0, cs[k].n - ob.1))
            })
        }
        _ => false,
    })
}

/// Lifts a curve from the cylinder to its `p`-fold horizontal cover. A curve
/// of horizontal period `h` lifts to `gcd(h, p)` curves, each concatenating
/// `p / gcd(h, p)` consecutive translates; closed curves give `p` translates.
pub fn lift_to_cover(c: &PLCurve, p: i64) -> Vec<PLCurve> {
    let (h, v) = c.period;
    let d = h.gcd(&p);
    let reps = p / d;
    (0..d)
        .map(|j| {
            let waypoints = (0..reps)
                .flat_map(|k| c.waypoints.iter().map(move |w| w.shift(k * h + j, k * v)))
                .collect();
            PLCurve::new(waypoints, (reps * h, reps * v))
        })
        .collect()
}

/// Applies a piecewise-affine map, subdividing every segment where one of the
/// linear forms `a x + b y` takes an integer value (the break lines).
fn map_piecewise(
    c: &PLCurve,
    breaks: &[(Q, Q)],
    f: impl Fn(Point) -> Point,
    period: (i64, i64),
) -> PLCurve {
    let mut pts = Vec::new();
    for (a, b) in c.segments() {
        let mut ts: Vec<Q> = Vec::new();
        for &(ca, cb) in breaks {
            let la = ca * a.x + cb * a.y;
            let lb = ca * b.x + cb * b.y;
            if la == lb {
                continue;
            }
            let (lo, hi) = if la < lb { (la, lb) } else { (lb, la) };
            let mut k = lo.floor() + Q::one();
            while k < hi {
                ts.push((k - la) / (lb - la));
                k += Q::one();
            }
        }
        ts.sort();
        ts.dedup();
        pts.push(f(a));
        for t in ts {
            pts.push(f(Point::new(a.x + t * (b.x - a.x), a.y + t * (b.y - a.y))));
        }
    }
    PLCurve::new(pts, period)
}

fn check_coprime(p: i64, q_: i64) -> Result<()> {
    if p < 1 {
        return Err(CurveError::InvalidParams(format!("p must be positive, got {p}")));
    }
    if p.gcd(&q_) != 1 {
        return Err(CurveError::InvalidParams(format!("gcd({p}, {q_}) != 1")));
    }
    Ok(())
}

/// `(-t * q^{-1}) mod p`: how far the lattice points at sheared height `t/p`
/// slide to the left.
fn slide_amount(t: i64, p: i64, qinv: i64) -> i64 {
    (-t * qinv).rem_euclid(p)
}

/// The lattice slide: a homeomorphism of the plane fixing the lines `x = pk`
/// that moves `(pk + i, n)` leftward along slope `q/p` to `(pk, n - qi/p)`.
///
/// In sheared coordinates `(x, y - qx/p)` the lattice lies on the horizontal
/// lines of height `t/p`; there the map is a horizontal translation by a
/// piecewise-linear function of height, so it is a homeomorphism and the
/// straight-line isotopy to the identity pushes each lattice point along its
/// slide segment.
pub fn g_pq(c: &PLCurve, p: i64, q_: i64) -> Result<PLCurve> {
    check_coprime(p, q_)?;
    if c.period.0 % p != 0 {
        return Err(CurveError::InvalidParams(format!(
            "horizontal period {} is not a multiple of {p}",
            c.period.0
        )));
    }
    let qinv = if p == 1 { 0 } else { q_.extended_gcd(&p).x.rem_euclid(p) };
    let (pq, qq) = (q(p), q(q_));
    let map = |pt: Point| {
        let ys = pt.y - qq * pt.x / pq;
        let s = ys * pq;
        let t = floor_q(&s);
        let frac = s - q(t);
        let (i0, i1) = (slide_amount(t, p, qinv), slide_amount(t + 1, p, qinv));
        let tau = q(i0) + q(i1 - i0) * frac;
        let x = pt.x - tau;
        Point::new(x, ys + qq * x / pq)
    };
    Ok(map_piecewise(c, &[(-qq, pq)], map, c.period))
}

/// Vertical shift built into the cabling map.
pub fn cable_shift(p: i64, q_: i64) -> i64 {
    (p - 1) * (q_ - 1) / 2
}

/// The cabling map: lattice slide, then horizontal compression and vertical
/// stretch by `p`, then the shift `(p-1)(q-1)/2`. Sends the lattice onto itself.
pub fn f_pq(c: &PLCurve, p: i64, q_: i64) -> Result<PLCurve> {
    let g = g_pq(c, p, q_)?;
    let shift = q(cable_shift(p, q_));
    let pq = q(p);
    Ok(PLCurve {
        waypoints: g
            .waypoints
            .iter()
            .map(|pt| Point::new(pt.x / pq, pt.y * pq + shift))
            .collect(),
        period: (c.period.0 / p, c.period.1 * p),
    })
}

/// Piecewise-linear staircase with vertices at lattice points: `heights[j]`
/// is the height at `x = j` for `0 <= j < m`, and `K(j + m) = K(j) + rise`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct KeyCurve {
    pub heights: Vec<i64>,
    pub rise: i64,
}

impl KeyCurve {
    pub fn columns(&self) -> i64 {
        self.heights.len() as i64
    }

    pub fn at(&self, j: i64) -> i64 {
        let m = self.columns();
        self.heights[j.rem_euclid(m) as usize] + j.div_euclid(m) * self.rise
    }

    pub fn at_q(&self, x: Q) -> Q {
        let j = floor_q(&x);
        let frac = x - q(j);
        q(self.at(j)) + frac * q(self.at(j + 1) - self.at(j))
    }

    /// Key of a word `c_{k_1} ... c_{k_m}`: `K(0) = 0`, `K(i) = K(i-1) + k_i`.
    pub fn from_c_word(gamma: &LoopWord) -> Result<Self> {
        if !gamma.is_c_word() {
            return Err(CurveError::NotCWord(gamma.to_string()));
        }
        let ks: Vec<i64> = gamma.letters().iter().map(|l| l.index).collect();
        let mut heights = vec![0];
        for k in &ks[..ks.len() - 1] {
            heights.push(heights.last().unwrap() + k);
        }
        Ok(Self { heights, rise: ks.iter().sum() })
    }

    /// Column increments `K(i) - K(i-1)` for `i = 1..=m`.
    pub fn steps(&self) -> Vec<i64> {
        (1..=self.columns()).map(|i| self.at(i) - self.at(i - 1)).collect()
    }

    pub fn to_c_word(&self) -> LoopWord {
        let letters = self.steps().into_iter().map(crate::loopcalc::Letter::c).collect();
        LoopWord::new(letters).expect("c-words are always valid")
    }
}

/// Lattice points immediately below the line `y = slope * x + intercept`.
pub fn floor_key(slope: Q, intercept: Q) -> KeyCurve {
    let m = *slope.denom() as i64;
    KeyCurve {
        heights: (0..m).map(|j| floor_q(&(slope * q(j) + intercept))).collect(),
        rise: *slope.numer() as i64,
    }
}

/// Lattice points immediately above the line.
pub fn ceil_key(slope: Q, intercept: Q) -> KeyCurve {
    let m = *slope.denom() as i64;
    KeyCurve {
        heights: (0..m).map(|j| (slope * q(j) + intercept).ceil().to_integer() as i64).collect(),
        rise: *slope.numer() as i64,
    }
}

/// Floor key of a curve that is a graph over `x` with horizontal period > 0.
pub fn floor_key_of_curve(c: &PLCurve) -> Result<KeyCurve> {
    let (h, v) = c.period;
    let segs = c.segments();
    if h <= 0 || segs.iter().any(|(a, b)| b.x <= a.x) {
        return Err(CurveError::VerticalTangent);
    }
    let heights = crossing_sequence(c)?
        .into_iter()
        .map(|x| (x.line, x.n))
        .collect::<Vec<_>>();
    let mut by_line: Vec<(i64, i64)> = heights;
    let base = by_line[0].0;
    by_line.sort();
    Ok(KeyCurve {
        heights: (0..h)
            .map(|j| {
                let line = base.div_euclid(h) * h + j;
                let (l, n) = by_line
                    .iter()
                    .copied()
                    .find(|(l, _)| l.rem_euclid(h) == j.rem_euclid(h))
                    .expect("a graph meets every line once per period");
                n + (line - l) / h * v
            })
            .collect(),
        rise: v,
    })
}

/// Translates each vertical line by the key height above it, carrying the
/// horizontal axis onto the key curve.
pub fn vertical_sum(c: &PLCurve, key: &KeyCurve) -> Result<PLCurve> {
    let (h, v) = c.period;
    let m = key.columns();
    if h % m != 0 {
        return Err(CurveError::InvalidParams(format!(
            "horizontal period {h} is not a multiple of the key period {m}"
        )));
    }
    let period = (h, v + (h / m) * key.rise);
    Ok(map_piecewise(
        c,
        &[(Q::one(), Q::zero())],
        |pt| Point::new(pt.x, pt.y + key.at_q(pt.x)),
        period,
    ))
}

/// Linear image under an integral matrix of determinant +1 or -1.
pub fn apply_basis_change(c: &PLCurve, m: [[i64; 2]; 2]) -> Result<PLCurve> {
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    if det.abs() != 1 {
        return Err(CurveError::Determinant(det));
    }
    let [[a, b], [cc, d]] = m;
    let (h, v) = c.period;
    Ok(PLCurve {
        waypoints: c
            .waypoints
            .iter()
            .map(|p| Point::new(q(a) * p.x + q(b) * p.y, q(cc) * p.x + q(d) * p.y))
            .collect(),
        period: (a * h + b * v, cc * h + d * v),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Turn {
    Up,
    Down,
    Straight,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxisCrossing {
    pub height: Q,
    pub turn: Turn,
    pub dir: Dir,
}

/// The wrapping component oriented rightward, rotated so that it starts with
/// its unique rightward wrap, and the `(line, n)` of the wrap's first crossing.
pub fn rightward_from_wrap(w: &LoopWord, origin: (i64, i64)) -> Result<(LoopWord, (i64, i64))> {
    let (w, origin) = match w.horizontal_period() {
        1 => (w.clone(), origin),
        -1 => {
            let cs = w.crossings(origin.0, origin.1);
            let end = cs[cs.len() - 1];
            let r = w.reversed();
            // the reversed word starts at the crossing before the last letter,
            // i.e. at the translate of the original starting crossing
            (r, (end.line, end.n))
        }
        h => return Err(CurveError::NotGamma0(format!("horizontal period {h}"))),
    };
    let wraps: Vec<usize> = w
        .letters()
        .iter()
        .enumerate()
        .filter(|(_, l)| l.is_wrap())
        .map(|(i, _)| i)
        .collect();
    if wraps.len() != 1 {
        return Err(CurveError::NotGamma0(format!("{} wraps in {w}", wraps.len())));
    }
    let k = wraps[0];
    let c = w.crossings(origin.0, origin.1)[k];
    Ok((w.rotated(k), (c.line, c.n)))
}

/// Crossings of the vertical axis by a tight wrapping curve, starting with the
/// first one after the crossing of `x = 1/2`, with the way the curve turns
/// right after each crossing.
pub fn axis_crossings(c: &PLCurve) -> Result<Vec<AxisCrossing>> {
    let (w, origin) = tight_word(c)?.ok_or_else(|| CurveError::NotGamma0("nullhomotopic".into()))?;
    let (w, origin) = rightward_from_wrap(&w, origin)?;
    let cs = w.crossings(origin.0, origin.1);
    let n = w.len();
    Ok((1..=n)
        .map(|i| {
            let next = w.letters()[i % n];
            let turn = match next.kind {
                LetterKind::C | LetterKind::CBar => Turn::Straight,
                _ if next.index < 0 => Turn::Down,
                _ => Turn::Up,
            };
            AxisCrossing { height: q(cs[i].n) + half(), turn, dir: cs[i].dir }
        })
        .collect())
}

/// One component of a multicurve: a word, the gap of its first crossing, and
/// an optional local system. The line of the first crossing is normalized to
/// zero (all vertical lines are identified in the cylinder).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Component {
    pub word: LoopWord,
    pub height: i64,
}

impl Component {
    pub fn curve(&self) -> PLCurve {
        realize(&self.word, (0, self.height))
    }

    pub fn local_system(&self) -> Option<&LocalSystem> {
        self.word.local_system().map(|(ls, _)| ls)
    }

    pub fn dim(&self) -> usize {
        self.word.local_dim()
    }

    fn with_system(word: LoopWord, ls: Option<LocalSystem>) -> Result<LoopWord> {
        match ls {
            None => Ok(word),
            Some(ls) => LoopWord::with_local_system(word.letters().to_vec(), Some((ls, 0))),
        }
    }

    /// Canonical form of a closed component: least rotation, keeping the
    /// orientation, with the height of the new first crossing.
    fn closed(word: LoopWord, origin: (i64, i64)) -> Self {
        let canon = word.canonical_rotation();
        let cs = word.crossings(origin.0, origin.1);
        let k = (0..word.len())
            .find(|&k| word.rotated(k).letters() == canon.letters())
            .unwrap_or(0);
        Self { word: canon, height: cs[k].n }
    }
}

/// The invariant of a knot complement: the wrapping component `γ0`, stored
/// rightward and starting with its wrap letter, centred so that the wrap runs
/// from gap `-τ` to gap `τ`; plus closed components in canonical rotation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Multicurve {
    pub gamma0: Component,
    pub closed: Vec<Component>,
}

impl Multicurve {
    pub fn new(gamma0: LoopWord, closed: Vec<(LoopWord, i64)>) -> Result<Self> {
        let g = Self::centred_gamma0(&gamma0, (0, 0))?.0;
        let mut comps = Vec::new();
        for (w, n) in closed {
            if (w.horizontal_period(), w.vertical_drift()) != (0, 0) {
                return Err(CurveError::NotClosed { h: w.horizontal_period(), v: w.vertical_drift() });
            }
            comps.push(Component::closed(w, (0, n)));
        }
        comps.sort();
        Ok(Self { gamma0: g, closed: comps })
    }

    /// Centres a wrapping word; returns the component and the vertical
    /// translation that was needed.
    fn centred_gamma0(w: &LoopWord, origin: (i64, i64)) -> Result<(Component, i64)> {
        if w.local_system().is_some_and(|(ls, _)| ls.dim() > 1 || !ls.is_trivial()) {
            return Err(CurveError::NotGamma0("γ0 carries a nontrivial local system".into()));
        }
        let (w, (_, n)) = rightward_from_wrap(w, origin)?;
        let end = n + w.letters()[0].index;
        if (n + end) % 2 != 0 {
            return Err(CurveError::NotGamma0(format!("{w} cannot be centred at height 1/2")));
        }
        let shift = -(n + end) / 2;
        Ok((Component { word: w, height: n + shift }, shift))
    }

    /// Assembles a multicurve from plane curves in the cylinder of period
    /// `(1, 0)`: the curve at `gamma0` must wrap once, the others must be
    /// closed. Every curve is tightened; nullhomotopic ones are dropped.
    /// Returns the multicurve and the vertical recentring applied.
    pub fn from_curves(
        gamma0: &PLCurve,
        closed: &[(PLCurve, Option<LocalSystem>)],
    ) -> Result<(Self, i64)> {
        let (w, origin) =
            tight_word(gamma0)?.ok_or_else(|| CurveError::NotGamma0("nullhomotopic".into()))?;
        let (g, shift) = Self::centred_gamma0(&w, origin)?;
        let mut comps = Vec::new();
        for (c, ls) in closed {
            if c.period != (0, 0) {
                return Err(CurveError::NotClosed { h: c.period.0, v: c.period.1 });
            }
            if let Some((w, (line, n))) = tight_word(c)? {
                let w = Component::with_system(w, ls.clone())?;
                comps.push(Component::closed(w, (line, n + shift)));
            }
        }
        comps.sort();
        Ok((Self { gamma0: g, closed: comps }, shift))
    }

    pub fn components(&self) -> impl Iterator<Item = &Component> {
        std::iter::once(&self.gamma0).chain(self.closed.iter())
    }

    /// Multiset of unoriented normalized words, sorted.
    pub fn word_set(&self) -> Vec<String> {
        let mut v: Vec<String> = self.components().map(|c| c.word.normalize().to_string()).collect();
        v.sort();
        v
    }

    /// Oriented words with their heights: a finer key than `word_set`.
    pub fn oriented_key(&self) -> Vec<(String, i64)> {
        let mut v: Vec<(String, i64)> =
            self.components().map(|c| (c.word.to_string(), c.height)).collect();
        v[1..].sort();
        v
    }

    /// Display form of γ0 (leftward, least rotation), as in the usual tables.
    pub fn gamma0_display(&self) -> String {
        self.gamma0.word.normalize().to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::loopcalc::parse_word;

    fn w(s: &str) -> LoopWord {
        parse_word(s).unwrap()
    }

    #[test]
    fn realize_round_trip() {
        for s in ["a1 c2' b1", "e", "a1 b1' a1' b1", "a2 b1' c3 a1' d1 b3'", "c1 c2 d1'"] {
            let word = w(s);
            let c = realize(&word, (0, 0));
            assert!(c.avoids_lattice());
            let back = word_from_curve(&c).unwrap();
            assert_eq!(back, word, "{s}");
        }
    }

    #[test]
    fn unknot_is_horizontal() {
        let c = realize(&w("e"), (0, 0));
        assert_eq!(c.waypoints, vec![Point::new(q(0), half())]);
        assert_eq!(c.period, (-1, 0));
    }

    #[test]
    fn detour_is_removed() {
        let c = realize(&w("e'"), (0, 0));
        // add an excursion across x = 0 and back between the same pegs
        let mut pts = c.waypoints.clone();
        pts.push(Point::new(Q::new(1, 3), half()));
        pts.push(Point::new(Q::new(-1, 3), Q::new(2, 3)));
        pts.push(Point::new(Q::new(1, 4), Q::new(2, 3)));
        let detoured = PLCurve::new(pts, c.period);
        assert!(matches!(word_from_curve(&detoured), Err(CurveError::NotReduced(_))));
        let tight = pull_tight(&detoured).unwrap();
        assert_eq!(word_from_curve(&tight).unwrap(), w("e'"));
        assert_eq!(pull_tight(&tight).unwrap(), tight);
    }

    #[test]
    fn figure_eight_encloses_two_pegs() {
        let c = realize(&w("a1 b1' a1' b1"), (0, 0));
        assert_eq!(c.enclosed_pegs(), vec![(0, 0, -1), (0, 1, 1)]);
        let single = realize(&w("a1 b1'"), (0, 0));
        assert_eq!(single.enclosed_pegs(), vec![(0, 1, 1)]);
    }

    #[test]
    fn lift_counts() {
        let tre = realize(&w("a1 c2' b1"), (0, 0));
        let l = lift_to_cover(&tre, 3);
        assert_eq!(l.len(), 1);
        assert_eq!(l[0].period, (-3, 0));
        let f8 = realize(&w("a1 b1' a1' b1"), (0, 0));
        assert_eq!(lift_to_cover(&f8, 2).len(), 2);
    }

    #[test]
    fn slide_moves_lattice_points() {
        // a tiny loop around the peg (1, 0) follows the peg to (0, -1/2)
        let around = PLCurve::new(
            vec![
                Point::new(Q::new(3, 4), Q::new(-1, 4)),
                Point::new(Q::new(5, 4), Q::new(-1, 4)),
                Point::new(Q::new(5, 4), Q::new(1, 4)),
                Point::new(Q::new(3, 4), Q::new(1, 4)),
            ],
            (0, 0),
        );
        let g = g_pq(&around, 2, 1).unwrap();
        assert_eq!(g.winding_number(Point::new(q(0), Q::new(-1, 2))), 1);
        assert_eq!(g.winding_number(Point::new(q(1), q(0))), 0);
        // p = 1 is the identity
        assert_eq!(g_pq(&around, 1, 5).unwrap().enclosed_pegs(), around.enclosed_pegs());
        assert!(g_pq(&around, 2, 4).is_err());
    }

    #[test]
    fn f_maps_lattice_to_lattice() {
        for (p, qq) in [(2, 1), (3, 2), (3, -2), (5, 2), (2, -1)] {
            for i in 0..p {
                let peg = (i, 0);
                let loop_ = PLCurve::new(
                    vec![
                        Point::new(q(peg.0) - Q::new(1, 4), Q::new(-1, 4)),
                        Point::new(q(peg.0) + Q::new(1, 4), Q::new(-1, 4)),
                        Point::new(q(peg.0) + Q::new(1, 4), Q::new(1, 4)),
                        Point::new(q(peg.0) - Q::new(1, 4), Q::new(1, 4)),
                    ],
                    (0, 0),
                );
                let img = f_pq(&loop_, p, qq).unwrap();
                let pegs = img.enclosed_pegs();
                assert_eq!(pegs.len(), 1, "{p} {qq} {i}");
                assert_eq!(pegs[0].1, -qq * i + cable_shift(p, qq));
            }
        }
    }

    #[test]
    fn keys() {
        let k = floor_key(Q::new(1, 2), Q::zero());
        assert_eq!(k.heights, vec![0, 0]);
        assert_eq!((k.at(1), k.at(2)), (0, 1));
        let c = ceil_key(Q::new(2, 3), Q::zero());
        assert_eq!(c.heights, vec![0, 1, 2]);
        let g = KeyCurve::from_c_word(&w("c1 c2 d1'")).unwrap();
        assert_eq!(g.heights, vec![0, 1, 3]);
        assert_eq!(g.rise, 2);
        assert_eq!(g.to_c_word().letters(), w("c1 c2 d1'").letters());
        assert!(KeyCurve::from_c_word(&w("a1 b1'")).is_err());
        let line = realize(&w("c1 c2 d1'"), (0, 0));
        assert_eq!(floor_key_of_curve(&line).unwrap(), g);
        assert!(floor_key_of_curve(&realize(&w("a1 b1'"), (0, 0))).is_err());
    }

    #[test]
    fn integer_key_is_a_shear() {
        let theta = realize(&w("a1 c2' b1"), (0, 0));
        let key = floor_key(q(1), Q::zero());
        let a = tight_word(&vertical_sum(&theta, &key).unwrap()).unwrap().unwrap();
        let b = tight_word(&apply_basis_change(&theta, [[1, 0], [1, 1]]).unwrap())
            .unwrap()
            .unwrap();
        assert_eq!(a, b);
        assert!(apply_basis_change(&theta, [[2, 0], [0, 1]]).is_err());
    }

    #[test]
    fn axis_crossings_of_trefoils() {
        let u = axis_crossings(&realize(&w("e"), (0, 0))).unwrap();
        assert_eq!(u.len(), 1);
        assert_eq!(u[0].turn, Turn::Straight);
        let t = axis_crossings(&realize(&w("a1 c2' b1"), (0, -1))).unwrap();
        assert_eq!(t[0].turn, Turn::Down);
        let l = axis_crossings(&realize(&w("b1' a1' d2"), (0, 0))).unwrap();
        assert_eq!(l[0].turn, Turn::Up);
    }

    #[test]
    fn multicurve_centres_gamma0() {
        let m = Multicurve::new(w("a1 c2' b1"), vec![]).unwrap();
        assert_eq!(m.gamma0.word.to_string(), "c2 a1' b1'");
        assert_eq!(m.gamma0.height, -1);
        assert_eq!(m.gamma0_display(), "a1 c2' b1");
        let (again, shift) =
            Multicurve::from_curves(&m.gamma0.curve().translated(3, 2), &[]).unwrap();
        assert_eq!(again, m);
        assert_eq!(shift, -2);
    }

    #[test]
    fn reversal_and_half_turn() {
        let c = realize(&w("a1 c2' b1"), (0, -1));
        let r = c.reversed();
        assert_eq!(tight_word(&r).unwrap().unwrap().0.normalize(), w("a1 c2' b1").normalize());
        let h = c.half_turn();
        assert_eq!(tight_word(&h).unwrap().unwrap().0.normalize(), w("a1 c2' b1").normalize());
    }
}
