//! The merge of a `c`-only word `γ` with an arbitrary word `ϑ`, read off a
//! toroidal grid whose columns are the letters of `γ`.
//!
//! Columns are tracked through the absolute vertical line the cursor sits on,
//! so that a forward wrap from line `j` picks up `K(j+1) - K(j)` and a
//! leftward wrap picks up `K(j-1) - K(j)`, where `K` is the key of `γ`.

use num_integer::Integer;

use crate::error::{CurveError, Result};
use crate::geometry::{lift_to_cover, realize, tight_word, vertical_sum, KeyCurve};
use crate::loopcalc::{Letter, LetterKind, LoopWord};

/// Grid for one merge: column increments from `γ` and rows from `ϑ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MergeGrid {
    pub columns: Vec<i64>,
    pub rows: Vec<Letter>,
}

impl MergeGrid {
    pub fn new(gamma: &LoopWord, theta: &LoopWord) -> Result<Self> {
        if !gamma.is_c_word() {
            return Err(CurveError::NotCWord(gamma.to_string()));
        }
        Ok(Self {
            columns: gamma.letters().iter().map(|l| l.index).collect(),
            rows: theta.letters().to_vec(),
        })
    }

    /// Number of vertical passes a component starting anywhere makes before
    /// closing up.
    pub fn passes(&self) -> i64 {
        let m = self.columns.len() as i64;
        let h: i64 = self.rows.iter().map(|l| l.horizontal()).sum();
        if h == 0 {
            1
        } else {
            m / m.gcd(&h)
        }
    }

    /// Number of output components.
    pub fn components(&self) -> i64 {
        let m = self.columns.len() as i64;
        let h: i64 = self.rows.iter().map(|l| l.horizontal()).sum();
        m.gcd(&h)
    }
}

/// Merges one component starting on vertical line `origin.0` in gap
/// `origin.1`. Returns the merged word and the gap of its first crossing
/// after the vertical sum.
pub fn merge_anchored(
    key: &KeyCurve,
    theta: &LoopWord,
    origin: (i64, i64),
) -> (LoopWord, (i64, i64)) {
    let m = key.columns();
    let h = theta.horizontal_period();
    let passes = if h == 0 { 1 } else { m / m.gcd(&h) };
    let mut line = origin.0;
    let mut letters = Vec::with_capacity(theta.len() * passes as usize);
    for _ in 0..passes {
        for l in theta.letters() {
            let out = match l.kind {
                LetterKind::A | LetterKind::B => *l,
                LetterKind::C => {
                    line += 1;
                    Letter::c(l.index + key.at(line) - key.at(line - 1))
                }
                LetterKind::CBar => {
                    line -= 1;
                    Letter::c_bar(l.index + key.at(line) - key.at(line + 1))
                }
            };
            letters.push(out);
        }
    }
    let local = theta.local_system().map(|(ls, pos)| {
        let total = (1..passes).fold(ls.clone(), |acc, _| acc.compose(ls));
        (total, *pos)
    });
    let word = LoopWord::with_local_system(letters, local)
        .expect("merging preserves side alternation and nonzero a/b indices");
    (word, (origin.0, origin.1 + key.at(origin.0)))
}

/// All components of `m(γ, ϑ)`: one for each residue class of starting
/// column modulo `gcd(m, h)`.
pub fn merge(gamma: &LoopWord, theta: &LoopWord) -> Result<Vec<LoopWord>> {
    let grid = MergeGrid::new(gamma, theta)?;
    let key = KeyCurve::from_c_word(gamma)?;
    Ok((0..grid.components())
        .map(|col| merge_anchored(&key, theta, (col, 0)).0)
        .collect())
}

/// Componentwise merge. The images of the first component come first.
pub fn merge_components(gamma: &LoopWord, theta: &[LoopWord]) -> Result<Vec<Vec<LoopWord>>> {
    theta.iter().map(|t| merge(gamma, t)).collect()
}

/// Geometric counterpart of [`merge`]: lift `ϑ` to the cover matching the
/// period of `γ`, add the key of `γ` vertically, and pull tight.
pub fn merge_geometric(gamma: &LoopWord, theta: &LoopWord) -> Result<Vec<LoopWord>> {
    let key = KeyCurve::from_c_word(gamma)?;
    let curve = realize(theta, (0, 0));
    let mut out = Vec::new();
    for lift in lift_to_cover(&curve, key.columns()) {
        if let Some((w, _)) = tight_word(&vertical_sum(&lift, &key)?)? {
            out.push(w);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::loopcalc::parse_word;

    fn w(s: &str) -> LoopWord {
        parse_word(s).unwrap()
    }

    fn norm(ws: &[LoopWord]) -> Vec<LoopWord> {
        let mut v: Vec<LoopWord> = ws.iter().map(|x| x.normalize()).collect();
        v.sort();
        v
    }

    #[test]
    fn zero_key_is_identity() {
        for t in ["a1 c2' b1", "a1 b1' a1' b1", "e"] {
            assert_eq!(merge(&w("c0"), &w(t)).unwrap(), vec![w(t)]);
        }
    }

    #[test]
    fn letter_rules() {
        let out = merge(&w("c2"), &w("e'")).unwrap();
        assert_eq!(out[0].letters(), &[Letter::c(2)]);
        let out = merge(&w("c2"), &w("c1")).unwrap();
        assert_eq!(out[0].letters(), &[Letter::c(3)]);
        assert!(merge(&w("a1 b1'"), &w("e")).is_err());
    }

    #[test]
    fn component_counts() {
        let gamma = w("c1 c2 d1'");
        let closed = merge(&gamma, &w("a1 b1' a1' b1")).unwrap();
        assert_eq!(closed.len(), 3);
        let wrap = merge(&gamma, &w("a1 c2' b1")).unwrap();
        assert_eq!(wrap.len(), 1);
        assert_eq!(wrap[0].len(), 9);
        assert_eq!(wrap[0].horizontal_period(), -3);
    }

    #[test]
    fn agrees_with_vertical_sum() {
        let gamma = w("c1 c2 d1'");
        for t in ["a1 c2' b1", "a1 b1' a1' b1", "e", "a2 b1' c3 a1' d1 b3'", "c1 a2 d2 b1"] {
            let t = w(t);
            assert_eq!(
                norm(&merge(&gamma, &t).unwrap()),
                norm(&merge_geometric(&gamma, &t).unwrap()),
                "{t}"
            );
        }
    }

    #[test]
    fn local_system_is_carried() {
        let t = w("a2[3; 001; 100; 111] b2'");
        let out = merge(&w("c1 c1"), &t).unwrap();
        assert_eq!(out.len(), 2);
        assert!(out.iter().all(|o| o.local_dim() == 3));
    }
}
