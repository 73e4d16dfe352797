//! Cabling a knot complement's curve set, two ways.
//!
//! Geometric route: lift to the `p`-fold cover, apply the cabling map
//! [`f_pq`](crate::geometry::f_pq), pull tight.
//!
//! Merge route: rewrite the curves in the basis `(b, -f)` with `f = (p, q)` and
//! `b = (-r, -s)`, merge with the key of the slope `r/p` line, then rewrite
//! in the basis where the cable's meridian is `b` and its longitude is the
//! new horizontal period. Every basis change here is integral with
//! determinant one, so no rescaling is needed.

use num_integer::Integer;
use serde::Serialize;

use crate::error::{CurveError, Result};
use crate::geometry::{
    apply_basis_change, cable_shift, f_pq, floor_key, lift_to_cover, realize, tight_word, Multicurve,
    PLCurve, Point, Q,
};
use crate::loopcalc::LocalSystem;
use crate::merge::merge_anchored;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct CableParams {
    pub p: i64,
    pub q: i64,
    pub r: i64,
    pub s: i64,
}

impl CableParams {
    /// `(p, q)` with the default framing: least `0 <= r < p` with
    /// `ps - qr = -1`.
    pub fn new(p: i64, q: i64) -> Result<Self> {
        check_params(p, q)?;
        let r = (0..p)
            .find(|r| (q * r - 1).rem_euclid(p) == 0)
            .expect("q is invertible mod p");
        Self::with_framing(p, q, r, (q * r - 1) / p)
    }

    pub fn with_framing(p: i64, q: i64, r: i64, s: i64) -> Result<Self> {
        check_params(p, q)?;
        if p * s - q * r != -1 {
            return Err(CurveError::InvalidParams(format!(
                "framing ({r}, {s}) does not satisfy ps - qr = -1"
            )));
        }
        Ok(Self { p, q, r, s })
    }

    /// Another valid framing, `(r + kp, s + kq)`.
    pub fn reframed(&self, k: i64) -> Self {
        Self { r: self.r + k * self.p, s: self.s + k * self.q, ..*self }
    }

    /// Coordinates with respect to `(b, -f)`.
    fn into_merge_basis(self) -> [[i64; 2]; 2] {
        [[-self.q, self.p], [self.s, -self.r]]
    }

    /// Sends `b` to the vertical and the merged longitude `(-pq, -1)` to the
    /// horizontal.
    fn out_of_merge_basis(self) -> [[i64; 2]; 2] {
        [[0, -1], [1, -self.p * self.q]]
    }
}

/// Validates `(p, q)`: `p >= 1`, `gcd(p, q) = 1`, and `q != 0` unless `p = 1`.
pub fn check_params(p: i64, q: i64) -> Result<()> {
    if p < 1 {
        return Err(CurveError::InvalidParams(format!("p must be positive, got {p}")));
    }
    if p.gcd(&q) != 1 {
        return Err(CurveError::InvalidParams(format!("gcd({p}, {q}) != 1")));
    }
    if p > 1 && q == 0 {
        return Err(CurveError::InvalidParams("q = 0".into()));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CableResult {
    pub curve: Multicurve,
    /// Built-in vertical shift of the cabling map, `(p-1)(q-1)/2`.
    pub shift: i64,
    /// Extra vertical translation needed to centre the output; zero whenever
    /// the built-in shift is right.
    pub recentring: i64,
}

fn closed_curves(k: &Multicurve) -> Vec<(PLCurve, Option<LocalSystem>)> {
    k.closed
        .iter()
        .map(|c| (c.curve(), c.local_system().cloned()))
        .collect()
}

pub fn cable_geometric(k: &Multicurve, p: i64, q: i64) -> Result<CableResult> {
    check_params(p, q)?;
    let lifted = lift_to_cover(&k.gamma0.curve(), p);
    debug_assert_eq!(lifted.len(), 1);
    let gamma0 = f_pq(&lifted[0], p, q)?;
    let mut closed = Vec::new();
    for (c, ls) in closed_curves(k) {
        for lift in lift_to_cover(&c, p) {
            closed.push((f_pq(&lift, p, q)?, ls.clone()));
        }
    }
    let (curve, recentring) = Multicurve::from_curves(&gamma0, &closed)?;
    Ok(CableResult { curve, shift: cable_shift(p, q), recentring })
}

/// Merge route, with the curve's own framing choice.
pub fn cable_merge_with(k: &Multicurve, params: CableParams) -> Result<CableResult> {
    let CableParams { p, q, r, .. } = params;
    if p == 1 && q == 0 {
        // the longitude becomes vertical in the merge basis; (1, 0) is trivial
        return Ok(CableResult { curve: k.clone(), shift: 0, recentring: 0 });
    }
    let key = floor_key(Q::new(r as i128, p as i128), Q::from_integer(0));
    let into = params.into_merge_basis();
    let back = params.out_of_merge_basis();
    let run = |c: &PLCurve| -> Result<Option<PLCurve>> {
        let Some((w, origin)) = tight_word(&apply_basis_change(c, into)?)? else {
            return Ok(None);
        };
        let (merged, start) = merge_anchored(&key, &w, origin);
        Ok(Some(apply_basis_change(&realize(&merged, start), back)?))
    };
    let gamma0 = run(&k.gamma0.curve())?
        .ok_or_else(|| CurveError::NotGamma0("γ0 vanished".into()))?;
    let mut closed = Vec::new();
    for (c, ls) in closed_curves(k) {
        for j in 0..p {
            if let Some(out) = run(&c.translated(j, 0))? {
                closed.push((out, ls.clone()));
            }
        }
    }
    let (curve, recentring) = Multicurve::from_curves(&gamma0, &closed)?;
    Ok(CableResult { curve, shift: cable_shift(p, q), recentring })
}

pub fn cable_merge(k: &Multicurve, p: i64, q: i64) -> Result<CableResult> {
    cable_merge_with(k, CableParams::new(p, q)?)
}

pub fn unknot() -> Multicurve {
    Multicurve::new("e".parse().expect("valid word"), vec![]).expect("valid curve")
}

/// Curve set of the torus knot `T(p, q)`, as the `(p, q)`-cable of the unknot.
pub fn torus_knot_curve(p: i64, q: i64) -> Result<Multicurve> {
    Ok(cable_geometric(&unknot(), p, q)?.curve)
}

/// Fundamental tile of the cabling tiling: the image of `p` unit squares in a
/// row, and the two translations generating the tiling.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tile {
    pub outline: Vec<Point>,
    pub translations: [(i64, i64); 2],
}

pub fn tile(p: i64, q: i64) -> Result<Tile> {
    check_params(p, q)?;
    let corner = |x: i64, y: i64| Point::new(Q::from_integer(x as i128), Q::from_integer(y as i128));
    let boundary = PLCurve::new(
        vec![corner(0, 0), corner(p, 0), corner(p, 1), corner(0, 1)],
        (0, 0),
    );
    Ok(Tile {
        outline: f_pq(&boundary, p, q)?.waypoints,
        translations: [(1, 0), (0, p)],
    })
}
