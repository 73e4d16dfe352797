//! JSON curve files. Words reuse the text grammar; a local system may be given
//! either inline in the word or as a separate `local_system` object.

use std::fmt;

use itertools::Itertools;
use num_rational::Ratio;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{CurveError, Result};
use crate::geometry::{Component, Multicurve, Q};
use crate::gf2::BitMatrix;
use crate::loopcalc::{parse_word, LocalSystem, LoopWord};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalSystemEntry {
    pub dim: usize,
    pub rows: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentEntry {
    pub word: String,
    /// Gap of the first crossing. Ignored for `γ0`, which is always centred.
    #[serde(default)]
    pub height: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub local_system: Option<LocalSystemEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveFile {
    pub name: String,
    pub components: Vec<ComponentEntry>,
    pub gamma0: usize,
}

fn entry(c: &Component) -> ComponentEntry {
    let word = c.word.letters().iter().join(" ");
    let local_system = c.local_system().map(|ls| LocalSystemEntry {
        dim: ls.dim(),
        rows: ls.matrix().to_bit_strings(),
    });
    ComponentEntry { word, height: c.height, local_system }
}

fn parse_entry(e: &ComponentEntry) -> Result<LoopWord> {
    let w = parse_word(&e.word)?;
    let Some(ls) = &e.local_system else {
        return Ok(w);
    };
    if w.local_system().is_some() {
        return Err(CurveError::LocalSystem("local system given twice".into()));
    }
    if ls.rows.len() != ls.dim {
        return Err(CurveError::LocalSystem(format!(
            "dim {} but {} rows",
            ls.dim,
            ls.rows.len()
        )));
    }
    let m = LocalSystem::new(BitMatrix::from_bit_strings(&ls.rows)?)?;
    LoopWord::with_local_system(w.letters().to_vec(), Some((m, 0)))
}

impl CurveFile {
    /// Normalized file for a multicurve: `γ0` first, closed components in
    /// canonical order.
    pub fn from_multicurve(name: impl Into<String>, k: &Multicurve) -> Self {
        Self {
            name: name.into(),
            components: k.components().map(entry).collect(),
            gamma0: 0,
        }
    }

    pub fn to_multicurve(&self) -> Result<Multicurve> {
        if self.gamma0 >= self.components.len() {
            return Err(CurveError::InvalidMulticurve(format!(
                "gamma0 index {} out of range",
                self.gamma0
            )));
        }
        let gamma0 = parse_entry(&self.components[self.gamma0])?;
        let closed = self
            .components
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != self.gamma0)
            .map(|(_, e)| Ok((parse_entry(e)?, e.height)))
            .collect::<Result<Vec<_>>>()?;
        Multicurve::new(gamma0, closed)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| CurveError::Syntax {
            pos: e.column(),
            msg: format!("line {}: {e}", e.line()),
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("curve files always serialize") + "\n"
    }

    /// Parses and rewrites in normal form.
    pub fn normalized(&self) -> Result<Self> {
        Ok(Self::from_multicurve(self.name.clone(), &self.to_multicurve()?))
    }
}

/// An exact rational written as `"num/den"` (or `"num"` when integral).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RationalStr(pub Q);

impl fmt::Display for RationalStr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl Serialize for RationalStr {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for RationalStr {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        let parse = |t: &str| t.trim().parse::<i128>().map_err(serde::de::Error::custom);
        let q = match s.split_once('/') {
            Some((n, den)) => {
                let den = parse(den)?;
                if den == 0 {
                    return Err(serde::de::Error::custom("zero denominator"));
                }
                Ratio::new(parse(n)?, den)
            }
            None => Ratio::from_integer(parse(&s)?),
        };
        Ok(Self(q))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::appio::corpus::corpus;

    #[test]
    fn corpus_round_trips() {
        for (name, k) in corpus() {
            let f = CurveFile::from_multicurve(name, &k);
            let text = f.to_json();
            let back = CurveFile::from_json(&text).unwrap();
            assert_eq!(back.to_multicurve().unwrap(), k, "{name}");
            assert_eq!(back.normalized().unwrap().to_json(), text, "{name}");
        }
    }

    #[test]
    fn local_system_object() {
        let text = r#"{"name": "x", "gamma0": 1, "components": [
            {"word": "a1 b1' a1' b1", "local_system": {"dim": 2, "rows": ["01", "11"]}},
            {"word": "e"}]}"#;
        let f = CurveFile::from_json(text).unwrap();
        let k = f.to_multicurve().unwrap();
        assert_eq!(k.closed[0].dim(), 2);
        let again = CurveFile::from_multicurve("x", &k);
        assert_eq!(again.components[1].local_system.as_ref().unwrap().dim, 2);
        assert!(CurveFile::from_json("{").is_err());
    }

    #[test]
    fn rationals() {
        let r = RationalStr(Ratio::new(-3, 6));
        let s = serde_json::to_string(&r).unwrap();
        assert_eq!(s, "\"-1/2\"");
        assert_eq!(serde_json::from_str::<RationalStr>(&s).unwrap(), r);
        assert!(serde_json::from_str::<RationalStr>("\"1/0\"").is_err());
    }
}
