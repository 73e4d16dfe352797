//! Concordance and L-space data read off the wrapping component `γ0`, plus the
//! Alexander polynomial of the whole curve set, and executable checks of the
//! cabling formulas for these quantities.
//!
//! `γ0` is stored oriented rightward and starting with its wrap, which runs
//! from gap `-τ` on the axis to gap `τ` on the next copy of the axis. Its
//! remaining letters alternate between right arcs (`a`) and left arcs (`b`).

use std::collections::BTreeMap;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::cabling::{cable_geometric, CableResult};
use crate::error::{CurveError, Result};
use crate::geometry::Multicurve;
use crate::loopcalc::{Dir, Letter, LetterKind};

/// Integer Laurent polynomial in `t`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Laurent(BTreeMap<i64, i64>);

impl Laurent {
    pub fn one() -> Self {
        Self::monomial(1, 0)
    }

    pub fn monomial(coeff: i64, exp: i64) -> Self {
        let mut l = Self::default();
        l.add_term(coeff, exp);
        l
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (i64, i64)>) -> Self {
        let mut l = Self::default();
        for (c, e) in terms {
            l.add_term(c, e);
        }
        l
    }

    pub fn add_term(&mut self, coeff: i64, exp: i64) {
        let c = self.0.entry(exp).or_insert(0);
        *c += coeff;
        if *c == 0 {
            self.0.remove(&exp);
        }
    }

    pub fn coeff(&self, exp: i64) -> i64 {
        self.0.get(&exp).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i64, i64)> + '_ {
        self.0.iter().map(|(&e, &c)| (e, c))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::default();
        for (e1, c1) in self.terms() {
            for (e2, c2) in other.terms() {
                out.add_term(c1 * c2, e1 + e2);
            }
        }
        out
    }

    /// `Δ(t) -> Δ(t^p)`.
    pub fn substitute_power(&self, p: i64) -> Self {
        Self::from_terms(self.terms().map(|(e, c)| (c, e * p)))
    }

    pub fn eval_one(&self) -> i64 {
        self.0.values().sum()
    }

    pub fn is_symmetric(&self) -> bool {
        self.terms().all(|(e, c)| self.coeff(-e) == c)
    }
}

impl fmt::Display for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("0");
        }
        for (i, (e, c)) in self.terms().rev().enumerate() {
            let sign = if c < 0 { "-" } else { "+" };
            if i == 0 {
                if c < 0 {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let a = c.abs();
            match (e, a) {
                (0, _) => write!(f, "{a}")?,
                (1, 1) => f.write_str("t")?,
                (1, _) => write!(f, "{a}t")?,
                (_, 1) => write!(f, "t^{e}")?,
                _ => write!(f, "{a}t^{e}")?,
            }
        }
        Ok(())
    }
}

impl Serialize for Laurent {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// End behaviour of a left arc: the direction `γ0` turns at the top, then at
/// the bottom.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ArcType {
    PlusPlus,
    PlusMinus,
    MinusPlus,
    MinusMinus,
}

impl ArcType {
    pub const ALL: [ArcType; 4] = [Self::PlusPlus, Self::PlusMinus, Self::MinusPlus, Self::MinusMinus];

    fn from_turns(top_up: bool, bottom_up: bool) -> Self {
        match (top_up, bottom_up) {
            (true, true) => Self::PlusPlus,
            (true, false) => Self::PlusMinus,
            (false, true) => Self::MinusPlus,
            (false, false) => Self::MinusMinus,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::PlusPlus => "++",
            Self::PlusMinus => "+-",
            Self::MinusPlus => "-+",
            Self::MinusMinus => "--",
        }
    }
}

impl fmt::Display for ArcType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for ArcType {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LeftArc {
    pub top: i64,
    pub bottom: i64,
    pub length: i64,
    /// +1 for arcs traversed downward.
    pub sign: i64,
    pub kind: ArcType,
}

/// Letters of `γ0` (rightward, starting at the wrap) and the gap of each
/// crossing before them; the last crossing closes up.
fn gamma0_data(k: &Multicurve) -> (Vec<Letter>, Vec<i64>) {
    let w = &k.gamma0.word;
    let cs = w.crossings(0, k.gamma0.height);
    (w.letters().to_vec(), cs.iter().map(|c| c.n).collect())
}

/// Height (gap index) of the first axis crossing after the wrap.
pub fn tau(k: &Multicurve) -> i64 {
    gamma0_data(k).1[1]
}

/// +1 if `γ0` turns down after that crossing, -1 if up, 0 if it goes straight.
pub fn epsilon(k: &Multicurve) -> i64 {
    let (letters, _) = gamma0_data(k);
    match letters.get(1) {
        None => 0,
        Some(l) if l.index < 0 => 1,
        Some(_) => -1,
    }
}

/// All left arcs of `γ0`, in traversal order from the wrap.
pub fn left_arcs(k: &Multicurve) -> Vec<LeftArc> {
    let (letters, ns) = gamma0_data(k);
    let n = letters.len();
    letters
        .iter()
        .enumerate()
        .filter(|(_, l)| l.kind == LetterKind::B)
        .map(|(i, l)| {
            let prev = letters[(i + n - 1) % n];
            let next = letters[(i + 1) % n];
            // direction the curve heads when leaving each endpoint of the arc
            let start_up = -prev.index >= 0;
            let end_up = next.index >= 0;
            let (start, end) = (ns[i], ns[i + 1]);
            let down = l.index < 0;
            let kind = if down {
                ArcType::from_turns(start_up, end_up)
            } else {
                ArcType::from_turns(end_up, start_up)
            };
            LeftArc {
                top: start.max(end),
                bottom: start.min(end),
                length: l.index.abs(),
                sign: if down { 1 } else { -1 },
                kind,
            }
        })
        .collect()
}

/// Signed left-arc counts, by length and by (length, type).
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct PhiTable {
    pub phi: BTreeMap<i64, i64>,
    pub refined: BTreeMap<ArcType, BTreeMap<i64, i64>>,
}

impl PhiTable {
    pub fn phi(&self, i: i64) -> i64 {
        self.phi.get(&i).copied().unwrap_or(0)
    }

    pub fn refined(&self, i: i64, t: ArcType) -> i64 {
        self.refined.get(&t).and_then(|m| m.get(&i)).copied().unwrap_or(0)
    }

    pub fn max_length(&self) -> i64 {
        self.phi.keys().copied().max().unwrap_or(0)
    }

    /// True when `φ_N^{++} = 1` is the only nonzero count at lengths `>= N`.
    pub fn unique_maximal_pp(&self) -> Option<i64> {
        let n = self
            .refined
            .values()
            .flat_map(|m| m.iter().filter(|(_, c)| **c != 0).map(|(l, _)| *l))
            .max()?;
        let ok = self.refined(n, ArcType::PlusPlus) == 1
            && ArcType::ALL[1..]
                .iter()
                .all(|&t| self.refined.get(&t).is_none_or(|m| m.range(n..).all(|(_, c)| *c == 0)));
        ok.then_some(n)
    }
}

pub fn phi_table(k: &Multicurve) -> PhiTable {
    let mut t = PhiTable::default();
    for arc in left_arcs(k) {
        *t.phi.entry(arc.length).or_insert(0) += arc.sign;
        *t.refined.entry(arc.kind).or_default().entry(arc.length).or_insert(0) += arc.sign;
    }
    t.phi.retain(|_, c| *c != 0);
    for m in t.refined.values_mut() {
        m.retain(|_, c| *c != 0);
    }
    t.refined.retain(|_, m| !m.is_empty());
    t
}

/// Signed count of axis crossings by gap, weighted by local-system dimension.
pub fn alexander(k: &Multicurve) -> Laurent {
    let mut out = Laurent::default();
    for c in k.components() {
        let cs = c.word.crossings(0, c.height);
        for x in &cs[..cs.len() - 1] {
            let sign = match x.dir {
                Dir::Right => 1,
                Dir::Left => -1,
            };
            out.add_term(sign * c.dim() as i64, x.n);
        }
    }
    if out.eval_one() < 0 {
        out = Laurent::from_terms(out.terms().map(|(e, c)| (-c, e)));
    }
    out
}

/// Closed-form Alexander polynomial of `T(p, q)`, symmetrized:
/// `(t^{pq} - 1)(t - 1) / ((t^p - 1)(t^q - 1))`.
pub fn torus_alexander(p: i64, q: i64) -> Laurent {
    let (p, q) = (p.abs(), q.abs());
    if p <= 1 || q <= 1 {
        return Laurent::one();
    }
    // numerator coefficients, degree pq + 1
    let mut num = vec![0i64; (p * q + 2) as usize];
    num[(p * q + 1) as usize] += 1;
    num[(p * q) as usize] -= 1;
    num[1] -= 1;
    num[0] += 1;
    let mut den = vec![0i64; (p + q + 1) as usize];
    den[(p + q) as usize] += 1;
    den[p as usize] -= 1;
    den[q as usize] -= 1;
    den[0] += 1;
    // exact long division by a monic polynomial
    let dq = den.len() - 1;
    let mut quot = vec![0i64; num.len() - dq];
    for i in (0..quot.len()).rev() {
        let c = num[i + dq];
        quot[i] = c;
        for (j, d) in den.iter().enumerate() {
            num[i + j] -= c * d;
        }
    }
    debug_assert!(num.iter().all(|&c| c == 0));
    let half = (quot.len() as i64 - 1) / 2;
    Laurent::from_terms(quot.iter().enumerate().map(|(e, &c)| (c, e as i64 - half)))
}

/// Genus if `k` is a single curve moving monotonically downward next to the
/// axis (all its arcs descend), otherwise `None`.
pub fn detect_lspace(k: &Multicurve) -> Option<i64> {
    if !k.closed.is_empty() {
        return None;
    }
    let (letters, _) = gamma0_data(k);
    if letters[1..].iter().all(|l| l.index < 0) {
        Some(letters[0].index / 2)
    } else {
        None
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LSpaceVerdict {
    pub genus: i64,
    /// Verdict from the slope criterion `q/p >= 2g - 1`.
    pub formula: bool,
    /// Verdict from inspecting the cabled curve.
    pub direct: bool,
    /// `q/p = 2g - 1` exactly.
    pub boundary_case: bool,
    pub explanation: String,
}

impl LSpaceVerdict {
    pub fn agree(&self) -> bool {
        self.formula == self.direct
    }
}

pub fn lspace_cable_check(k: &Multicurve, p: i64, q: i64) -> Result<LSpaceVerdict> {
    let g = detect_lspace(k).ok_or(CurveError::NotLSpace)?;
    let cable = cable_geometric(k, p, q)?.curve;
    let direct = detect_lspace(&cable).is_some();
    let bound = (2 * g - 1) * p;
    // for the unknot the cable is T(p, q), a positive L-space knot iff q >= -1
    let formula = if g == 0 { q >= -1 } else { q >= bound };
    let explanation = if g == 0 {
        format!("companion is unknotted; T({p},{q}) has a positive L-space surgery iff q >= -1")
    } else {
        let cmp = if q >= bound { ">=" } else { "<" };
        format!("q/p = {q}/{p} {cmp} 2g - 1 = {}", 2 * g - 1)
    };
    Ok(LSpaceVerdict {
        genus: g,
        formula,
        direct,
        boundary_case: g > 0 && q == bound,
        explanation,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InvariantReport {
    pub tau: i64,
    pub epsilon: i64,
    pub phi: BTreeMap<i64, i64>,
    pub phi_refined: BTreeMap<ArcType, BTreeMap<i64, i64>>,
    pub lspace: bool,
    pub genus: Option<i64>,
    pub alexander: Laurent,
}

pub fn report(k: &Multicurve) -> InvariantReport {
    let phi = phi_table(k);
    let genus = detect_lspace(k);
    InvariantReport {
        tau: tau(k),
        epsilon: epsilon(k),
        phi: phi.phi,
        phi_refined: phi.refined,
        lspace: genus.is_some(),
        genus,
        alexander: alexander(k),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    pub name: String,
    pub lhs: String,
    pub rhs: String,
    pub pass: bool,
}

impl IdentityCheck {
    fn new(name: impl Into<String>, lhs: impl ToString, rhs: impl ToString) -> Self {
        let (lhs, rhs) = (lhs.to_string(), rhs.to_string());
        Self { name: name.into(), pass: lhs == rhs, lhs, rhs }
    }
}

/// Predicted `τ` of the `(p, q)`-cable.
pub fn predicted_tau(tau_k: i64, eps_k: i64, p: i64, q: i64) -> i64 {
    match eps_k {
        1 => p * tau_k + (p - 1) * (q - 1) / 2,
        -1 => p * tau_k + (p - 1) * (q + 1) / 2,
        _ => q.signum() * (p - 1) * (q.abs() - 1) / 2,
    }
}

/// Predicted `ε` of the `(p, q)`-cable.
pub fn predicted_epsilon(eps_k: i64, p: i64, q: i64) -> i64 {
    match eps_k {
        0 if p > 1 && q.abs() > 1 => q.signum(),
        0 => 0,
        e => e,
    }
}

/// Cables `k` and checks the `τ`, `ε`, Alexander and (for `(2, 1)`) `φ`
/// transfer identities on the result.
pub fn verify_cabling_formulas(k: &Multicurve, p: i64, q: i64) -> Result<Vec<IdentityCheck>> {
    let CableResult { curve: cable, .. } = cable_geometric(k, p, q)?;
    Ok(verify_against(k, &cable, p, q))
}

/// Identity checks for a cable computed elsewhere.
pub fn verify_against(k: &Multicurve, cable: &Multicurve, p: i64, q: i64) -> Vec<IdentityCheck> {
    let (t, e) = (tau(k), epsilon(k));
    let mut out = vec![
        IdentityCheck::new("tau", tau(cable), predicted_tau(t, e, p, q)),
        IdentityCheck::new("epsilon", epsilon(cable), predicted_epsilon(e, p, q)),
        IdentityCheck::new(
            "alexander",
            alexander(cable),
            alexander(k).substitute_power(p).mul(&torus_alexander(p, q)),
        ),
    ];
    if (p, q) == (2, 1) {
        let before = phi_table(k);
        let after = phi_table(cable);
        let top = 2 * before.max_length().max(after.max_length()) + 2;
        for i in 2..=top {
            for t in ArcType::ALL {
                let n = i / 2;
                let expected = match (i % 2, t) {
                    (0, ArcType::PlusPlus | ArcType::MinusMinus) => before.refined(n, t),
                    (1, ArcType::PlusMinus) => before.refined(n, t),
                    (1, ArcType::MinusPlus) => before.refined(n + 1, t),
                    _ => 0,
                };
                out.push(IdentityCheck::new(format!("phi_{i}^{t}"), after.refined(i, t), expected));
            }
        }
        let sum: i64 = before.phi.values().sum();
        let expected = -sum + i64::from(t > 0);
        out.push(IdentityCheck::new("phi_1", after.phi(1), expected));
        if let Some(n) = before.unique_maximal_pp() {
            out.push(IdentityCheck::new(
                "unique maximal ++ arc doubles",
                format!("{:?}", after.unique_maximal_pp()),
                format!("{:?}", Some(2 * n)),
            ));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cabling::{torus_knot_curve, unknot};

    fn mc(s: &str) -> Multicurve {
        Multicurve::new(s.parse().unwrap(), vec![]).unwrap()
    }

    #[test]
    fn trefoil_invariants() {
        let t = mc("a1 c2' b1");
        assert_eq!(tau(&t), 1);
        assert_eq!(epsilon(&t), 1);
        let arcs = left_arcs(&t);
        assert_eq!(arcs.len(), 1);
        assert_eq!(arcs[0].kind, ArcType::PlusPlus);
        assert_eq!((arcs[0].length, arcs[0].sign), (1, 1));
        assert_eq!(alexander(&t).to_string(), "t - 1 + t^-1");
        assert_eq!(detect_lspace(&t), Some(1));
    }

    #[test]
    fn left_trefoil_invariants() {
        let t = mc("b1' a1' d2");
        assert_eq!(tau(&t), -1);
        assert_eq!(epsilon(&t), -1);
        assert_eq!(phi_table(&t).phi(1), -1);
        assert_eq!(alexander(&t).to_string(), "t - 1 + t^-1");
        assert_eq!(detect_lspace(&t), None);
    }

    #[test]
    fn unknot_invariants() {
        let u = unknot();
        assert_eq!((tau(&u), epsilon(&u)), (0, 0));
        assert_eq!(phi_table(&u), PhiTable::default());
        assert_eq!(alexander(&u), Laurent::one());
        assert_eq!(detect_lspace(&u), Some(0));
    }

    #[test]
    fn torus_alexander_closed_form() {
        assert_eq!(torus_alexander(2, 3).to_string(), "t - 1 + t^-1");
        assert_eq!(torus_alexander(3, 4), alexander(&torus_knot_curve(3, 4).unwrap()));
        assert_eq!(torus_alexander(2, -5), torus_alexander(2, 5));
        assert_eq!(torus_alexander(5, 1), Laurent::one());
    }

    #[test]
    fn torus_knot_taus() {
        assert_eq!(tau(&torus_knot_curve(3, 4).unwrap()), 3);
        assert_eq!(epsilon(&torus_knot_curve(3, 4).unwrap()), 1);
        assert_eq!(epsilon(&torus_knot_curve(3, -2).unwrap()), -1);
    }

    #[test]
    fn trefoil_two_one() {
        let checks = verify_cabling_formulas(&mc("a1 c2' b1"), 2, 1).unwrap();
        for c in &checks {
            assert!(c.pass, "{c:?}");
        }
        assert!(checks.iter().any(|c| c.name == "phi_2^++" && c.lhs == "1"));
    }

    #[test]
    fn lspace_cables_of_trefoil() {
        let t = mc("a1 c2' b1");
        let v = lspace_cable_check(&t, 3, 4).unwrap();
        assert!(v.formula && v.direct);
        let v = lspace_cable_check(&t, 3, 2).unwrap();
        assert!(!v.formula && !v.direct);
        assert!(lspace_cable_check(&mc("b1' a1' d2"), 2, 1).is_err());
    }
}
