//! Square bit matrices over GF(2), used for local systems on curve components.
//!
//! Row `i` is stored as a `u64` whose bit `j` is the `(i, j)` entry, so the
//! dimension is capped at 64. Polynomials over GF(2) are `u128` bitmasks with
//! bit `k` the coefficient of `x^k`.

use std::fmt;

use crate::error::CurveError;

pub const MAX_DIM: usize = 64;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitMatrix {
    dim: usize,
    rows: Vec<u64>,
}

impl BitMatrix {
    pub fn zero(dim: usize) -> Self {
        assert!(dim <= MAX_DIM);
        Self { dim, rows: vec![0; dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zero(dim);
        for i in 0..dim {
            m.rows[i] = 1 << i;
        }
        m
    }

    pub fn from_rows(dim: usize, rows: Vec<u64>) -> Result<Self, CurveError> {
        if dim == 0 || dim > MAX_DIM {
            return Err(CurveError::LocalSystem(format!("dimension {dim} out of range 1..=64")));
        }
        if rows.len() != dim {
            return Err(CurveError::LocalSystem(format!(
                "expected {dim} rows, found {}",
                rows.len()
            )));
        }
        let mask = if dim == 64 { u64::MAX } else { (1u64 << dim) - 1 };
        if rows.iter().any(|r| r & !mask != 0) {
            return Err(CurveError::LocalSystem("row wider than dimension".into()));
        }
        Ok(Self { dim, rows })
    }

    /// Parses rows written as bit strings, leftmost character is column 0.
    pub fn from_bit_strings<S: AsRef<str>>(rows: &[S]) -> Result<Self, CurveError> {
        let dim = rows.len();
        let mut out = Vec::with_capacity(dim);
        for row in rows {
            let row = row.as_ref().trim();
            if row.len() != dim {
                return Err(CurveError::LocalSystem(format!(
                    "row {row:?} has length {}, expected {dim}",
                    row.len()
                )));
            }
            let mut bits = 0u64;
            for (j, ch) in row.chars().enumerate() {
                match ch {
                    '0' => {}
                    '1' => bits |= 1 << j,
                    _ => {
                        return Err(CurveError::LocalSystem(format!("bad bit {ch:?} in row {row:?}")))
                    }
                }
            }
            out.push(bits);
        }
        Self::from_rows(dim, out)
    }

    pub fn to_bit_strings(&self) -> Vec<String> {
        self.rows
            .iter()
            .map(|r| (0..self.dim).map(|j| if r >> j & 1 == 1 { '1' } else { '0' }).collect())
            .collect()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i] >> j & 1 == 1
    }

    pub fn set(&mut self, i: usize, j: usize, v: bool) {
        if v {
            self.rows[i] |= 1 << j;
        } else {
            self.rows[i] &= !(1 << j);
        }
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.dim)
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let rows = self
            .rows
            .iter()
            .map(|&r| {
                let mut acc = 0u64;
                let mut bits = r;
                while bits != 0 {
                    let k = bits.trailing_zeros() as usize;
                    acc ^= other.rows[k];
                    bits &= bits - 1;
                }
                acc
            })
            .collect();
        Self { dim: self.dim, rows }
    }

    fn add(&self, other: &Self) -> Self {
        let rows = self.rows.iter().zip(&other.rows).map(|(a, b)| a ^ b).collect();
        Self { dim: self.dim, rows }
    }

    pub fn rank(&self) -> usize {
        let mut rows = self.rows.clone();
        let mut rank = 0;
        for col in 0..self.dim {
            let Some(p) = (rank..self.dim).find(|&i| rows[i] >> col & 1 == 1) else {
                continue;
            };
            rows.swap(rank, p);
            let pivot = rows[rank];
            for (i, r) in rows.iter_mut().enumerate() {
                if i != rank && *r >> col & 1 == 1 {
                    *r ^= pivot;
                }
            }
            rank += 1;
        }
        rank
    }

    pub fn is_invertible(&self) -> bool {
        self.rank() == self.dim
    }

    /// Gauss-Jordan inverse.
    pub fn inverse(&self) -> Option<Self> {
        let n = self.dim;
        let mut a = self.rows.clone();
        let mut inv = Self::identity(n).rows;
        for col in 0..n {
            let p = (col..n).find(|&i| a[i] >> col & 1 == 1)?;
            a.swap(col, p);
            inv.swap(col, p);
            for i in 0..n {
                if i != col && a[i] >> col & 1 == 1 {
                    a[i] ^= a[col];
                    inv[i] ^= inv[col];
                }
            }
        }
        Some(Self { dim: n, rows: inv })
    }

    /// Evaluates a polynomial at this matrix.
    fn eval_poly(&self, poly: u128) -> Self {
        let mut acc = Self::zero(self.dim);
        for k in (0..=poly_deg(poly).max(0) as u32).rev() {
            acc = acc.mul(self);
            if poly >> k & 1 == 1 {
                acc = acc.add(&Self::identity(self.dim));
            }
        }
        acc
    }

    fn pow(&self, mut e: usize) -> Self {
        let mut base = self.clone();
        let mut acc = Self::identity(self.dim);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Characteristic polynomial `det(xI + A)` by fraction-free elimination over GF(2)[x].
    pub fn char_poly(&self) -> u128 {
        let n = self.dim;
        let mut m: Vec<Vec<u128>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let a = u128::from(self.get(i, j));
                        if i == j {
                            a ^ 2
                        } else {
                            a
                        }
                    })
                    .collect()
            })
            .collect();
        // Bareiss: every division below is exact.
        let mut prev = 1u128;
        for k in 0..n {
            if m[k][k] == 0 {
                let Some(p) = (k + 1..n).find(|&i| m[i][k] != 0) else {
                    return 0;
                };
                m.swap(k, p);
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = poly_mul(m[i][j], m[k][k]) ^ poly_mul(m[i][k], m[k][j]);
                    let (q, r) = poly_divmod(num, prev);
                    debug_assert_eq!(r, 0);
                    m[i][j] = q;
                }
                m[i][k] = 0;
            }
            prev = m[k][k];
        }
        if n == 0 {
            1
        } else {
            m[n - 1][n - 1]
        }
    }

    /// Primary rational canonical form: a block-diagonal sum of companion
    /// matrices of prime-power factors, sorted. Two matrices are conjugate iff
    /// their canonical forms are equal.
    pub fn canonical_form(&self) -> Self {
        let n = self.dim;
        let mut blocks: Vec<(u128, usize)> = Vec::new();
        for (f, mult) in factor(self.char_poly()) {
            let d = poly_deg(f) as usize;
            let fa = self.eval_poly(f);
            let mut ranks = vec![n];
            for k in 1..=mult + 1 {
                ranks.push(fa.pow(k).rank());
            }
            // at_least[k] = number of blocks f^j with j >= k
            let at_least: Vec<usize> = (0..=mult + 1)
                .map(|k| if k == 0 { 0 } else { (ranks[k - 1] - ranks[k]) / d })
                .collect();
            for k in 1..=mult {
                let exact = at_least[k] - at_least.get(k + 1).copied().unwrap_or(0);
                for _ in 0..exact {
                    blocks.push((f, k));
                }
            }
        }
        blocks.sort();
        let mut out = Self::zero(n);
        let mut offset = 0;
        for (f, k) in blocks {
            let g = poly_pow(f, k);
            let d = poly_deg(g) as usize;
            // companion: subdiagonal ones, last column holds the coefficients
            for i in 1..d {
                out.set(offset + i, offset + i - 1, true);
            }
            for i in 0..d {
                if g >> i & 1 == 1 {
                    out.set(offset + i, offset + d - 1, true);
                }
            }
            offset += d;
        }
        debug_assert_eq!(offset, n);
        out
    }

    pub fn is_conjugate(&self, other: &Self) -> bool {
        self.dim == other.dim && self.canonical_form() == other.canonical_form()
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}; {}]", self.dim, self.to_bit_strings().join("; "))
    }
}

impl fmt::Display for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

pub fn poly_deg(p: u128) -> i32 {
    127 - p.leading_zeros() as i32
}

pub fn poly_mul(a: u128, b: u128) -> u128 {
    let mut acc = 0u128;
    let mut bits = b;
    while bits != 0 {
        let k = bits.trailing_zeros();
        acc ^= a << k;
        bits &= bits - 1;
    }
    acc
}

pub fn poly_divmod(mut a: u128, b: u128) -> (u128, u128) {
    assert!(b != 0, "division by zero polynomial");
    let db = poly_deg(b);
    let mut q = 0u128;
    while a != 0 && poly_deg(a) >= db {
        let s = poly_deg(a) - db;
        q |= 1 << s;
        a ^= b << s;
    }
    (q, a)
}

fn poly_pow(f: u128, k: usize) -> u128 {
    (0..k).fold(1, |acc, _| poly_mul(acc, f))
}

/// Factors a polynomial by trial division; returns (irreducible, multiplicity)
/// pairs in increasing order.
pub fn factor(mut p: u128) -> Vec<(u128, usize)> {
    let mut out = Vec::new();
    let mut cand = 2u128;
    while poly_deg(p) > 0 {
        if 2 * poly_deg(cand) > poly_deg(p) {
            out.push((p, 1));
            break;
        }
        let mut mult = 0;
        loop {
            let (q, r) = poly_divmod(p, cand);
            if r != 0 {
                break;
            }
            p = q;
            mult += 1;
        }
        if mult > 0 {
            out.push((cand, mult));
        }
        cand += 1;
    }
    // merge a trailing duplicate of the last trial divisor
    out.sort();
    let mut merged: Vec<(u128, usize)> = Vec::new();
    for (f, m) in out {
        match merged.last_mut() {
            Some((g, n)) if *g == f => *n += m,
            _ => merged.push((f, m)),
        }
    }
    merged
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&str]) -> BitMatrix {
        BitMatrix::from_bit_strings(rows).unwrap()
    }

    #[test]
    fn inverse_round_trip() {
        let a = m(&["001", "100", "111"]);
        let inv = a.inverse().unwrap();
        assert!(a.mul(&inv).is_identity());
        assert!(m(&["11", "11"]).inverse().is_none());
    }

    #[test]
    fn char_poly_of_small_matrices() {
        // x^2 + x + 1 for the order-3 element
        assert_eq!(m(&["01", "11"]).char_poly(), 0b111);
        assert_eq!(BitMatrix::identity(2).char_poly(), poly_mul(0b11, 0b11));
    }

    #[test]
    fn factoring() {
        assert_eq!(factor(poly_mul(0b11, 0b111)), vec![(0b11, 1), (0b111, 1)]);
        assert_eq!(factor(poly_mul(0b11, 0b11)), vec![(0b11, 2)]);
    }

    #[test]
    fn conjugacy_classes() {
        let jordan = m(&["11", "01"]);
        let other = m(&["10", "11"]);
        assert!(jordan.is_conjugate(&other));
        assert!(!jordan.is_conjugate(&BitMatrix::identity(2)));
        let a = m(&["001", "100", "111"]);
        let p = m(&["110", "010", "011"]);
        let conj = p.inverse().unwrap().mul(&a).mul(&p);
        assert!(a.is_conjugate(&conj));
        assert_eq!(a.canonical_form(), conj.canonical_form());
    }
}
