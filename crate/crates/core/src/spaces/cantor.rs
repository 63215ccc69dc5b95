//! Cantor space `{0,1}^ω` with cylinder basics indexed by word rank.

use std::fmt;
use std::sync::Arc;

use super::{BaseIndex, Basic, PointName, Space};
use crate::error::{Error, Result};
use crate::kernel::Enumerator;

/// Longest word we index; ranks stay inside `u128`.
pub const MAX_WORD_LEN: u32 = 120;

/// A finite binary word; bit `i` is `(bits >> i) & 1`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word {
    pub len: u32,
    pub bits: u128,
}

impl Word {
    pub const EMPTY: Word = Word { len: 0, bits: 0 };

    pub fn from_bits(bits: &[bool]) -> Word {
        assert!(bits.len() as u32 <= MAX_WORD_LEN, "word too long");
        let mut w = Word::EMPTY;
        for &b in bits {
            w = w.push(b);
        }
        w
    }

    pub fn bit(&self, i: u32) -> bool {
        (self.bits >> i) & 1 == 1
    }

    pub fn push(&self, b: bool) -> Word {
        Word { len: self.len + 1, bits: self.bits | ((b as u128) << self.len) }
    }

    pub fn truncate(&self, len: u32) -> Word {
        let len = len.min(self.len);
        let mask = if len == 0 { 0 } else { u128::MAX >> (128 - len) };
        Word { len, bits: self.bits & mask }
    }

    pub fn is_prefix_of(&self, other: &Word) -> bool {
        self.len <= other.len && other.truncate(self.len) == *self
    }

    pub fn comparable(&self, other: &Word) -> bool {
        self.is_prefix_of(other) || other.is_prefix_of(self)
    }

    /// Rank `2^len - 1 + value`, value read most-significant first.
    pub fn rank(&self) -> u128 {
        let mut v: u128 = 0;
        for i in 0..self.len {
            v = (v << 1) | self.bit(i) as u128;
        }
        ((1u128 << self.len) - 1) + v
    }

    pub fn from_rank(r: u128) -> Word {
        let len = 127 - (r + 1).leading_zeros();
        let v = r + 1 - (1u128 << len);
        let mut w = Word::EMPTY;
        for i in (0..len).rev() {
            w = w.push((v >> i) & 1 == 1);
        }
        w
    }

    pub fn index(&self) -> BaseIndex {
        BaseIndex(self.rank())
    }

    /// `e` or the empty string is the empty word, otherwise `0`/`1` digits.
    pub fn parse(s: &str) -> Result<Word> {
        let t = s.trim();
        if t == "e" || t.is_empty() {
            return Ok(Word::EMPTY);
        }
        if t.len() as u32 > MAX_WORD_LEN {
            return Err(Error::MalformedLiteral(format!("word `{t}` is too long")));
        }
        let mut w = Word::EMPTY;
        for c in t.chars() {
            match c {
                '0' => w = w.push(false),
                '1' => w = w.push(true),
                _ => return Err(Error::MalformedLiteral(format!("bad word `{t}`"))),
            }
        }
        Ok(w)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.len == 0 {
            return f.write_str("e");
        }
        for i in 0..self.len {
            f.write_str(if self.bit(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{self}]")
    }
}

/// An ultimately periodic infinite word `prefix cycle cycle ...`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CantorPoint {
    pub prefix: Vec<bool>,
    pub cycle: Vec<bool>,
}

impl CantorPoint {
    pub fn new(prefix: Vec<bool>, cycle: Vec<bool>) -> Self {
        assert!(!cycle.is_empty(), "cycle must be nonempty");
        CantorPoint { prefix, cycle }
    }

    pub fn bit(&self, i: usize) -> bool {
        if i < self.prefix.len() {
            self.prefix[i]
        } else {
            self.cycle[(i - self.prefix.len()) % self.cycle.len()]
        }
    }

    pub fn word(&self, len: u32) -> Word {
        Word::from_bits(&(0..len as usize).map(|i| self.bit(i)).collect::<Vec<_>>())
    }

    pub fn in_cylinder(&self, w: &Word) -> bool {
        self.word(w.len) == *w
    }

    /// `w(c)` for prefix `w` and repeating `c`; a bare `w` repeats `0`.
    pub fn parse(s: &str) -> Result<CantorPoint> {
        let t = s.trim();
        let bad = || Error::MalformedLiteral(format!("bad cantor point `{t}`"));
        let (pre, cyc) = match t.split_once('(') {
            Some((p, rest)) => (p, rest.strip_suffix(')').ok_or_else(bad)?),
            None => (t, "0"),
        };
        let bits = |s: &str| -> Result<Vec<bool>> {
            s.chars()
                .map(|c| match c {
                    '0' => Ok(false),
                    '1' => Ok(true),
                    _ => Err(bad()),
                })
                .collect()
        };
        let cycle = bits(cyc)?;
        if cycle.is_empty() {
            return Err(bad());
        }
        Ok(CantorPoint::new(bits(pre)?, cycle))
    }
}

pub struct CantorSpace;

impl CantorSpace {
    pub fn new() -> Arc<CantorSpace> {
        Arc::new(CantorSpace)
    }

    /// Name listing the cylinder of every finite prefix, one per step.
    pub fn point_name(self: &Arc<Self>, x: &CantorPoint) -> PointName {
        let x = x.clone();
        let nb = Enumerator::from_fn(move |s| (s <= MAX_WORD_LEN as u64).then(|| x.word(s as u32).index()));
        PointName::new(self.clone(), nb)
    }
}

pub fn word_of(n: BaseIndex) -> Word {
    Word::from_rank(n.0)
}

/// Whether the union of cylinders `ws` contains cylinder `w`.
pub fn cylinders_cover(w: &Word, ws: &[Word]) -> bool {
    if ws.iter().any(|f| f.is_prefix_of(w)) {
        return true;
    }
    if !ws.iter().any(|f| w.is_prefix_of(f)) || w.len >= MAX_WORD_LEN {
        return false;
    }
    cylinders_cover(&w.push(false), ws) && cylinders_cover(&w.push(true), ws)
}

impl Space for CantorSpace {
    fn name(&self) -> String {
        "cantor".into()
    }

    fn decode(&self, n: BaseIndex) -> Option<Basic> {
        let w = word_of(n);
        (w.len <= MAX_WORD_LEN).then_some(Basic::Cylinder(w))
    }

    fn formal_subset(&self, a: &Basic, b: &Basic) -> Option<bool> {
        match (a, b) {
            (Basic::Cylinder(u), Basic::Cylinder(v)) => Some(v.is_prefix_of(u)),
            _ => None,
        }
    }

    fn search_order(&self) -> Enumerator<BaseIndex> {
        Enumerator::from_fn(|t| Some(BaseIndex(t as u128)))
    }

    fn basic_meet(&self, a: BaseIndex, b: BaseIndex) -> Vec<BaseIndex> {
        let (u, v) = (word_of(a), word_of(b));
        if u.is_prefix_of(&v) {
            vec![b]
        } else if v.is_prefix_of(&u) {
            vec![a]
        } else {
            Vec::new()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_roundtrip() {
        for r in 0..5000u128 {
            assert_eq!(Word::from_rank(r).rank(), r);
        }
        assert_eq!(Word::parse("e").unwrap().rank(), 0);
        assert_eq!(Word::parse("0").unwrap().rank(), 1);
        assert_eq!(Word::parse("1").unwrap().rank(), 2);
        assert_eq!(Word::parse("01").unwrap().rank(), 4);
        assert_eq!(Word::parse("01").unwrap().to_string(), "01");
    }

    #[test]
    fn prefix_order() {
        let a = Word::parse("01").unwrap();
        let b = Word::parse("0110").unwrap();
        assert!(a.is_prefix_of(&b));
        assert!(!b.is_prefix_of(&a));
        assert!(Word::EMPTY.is_prefix_of(&a));
        assert_eq!(b.truncate(2), a);
    }

    #[test]
    fn cover_check() {
        let w = |s| Word::parse(s).unwrap();
        assert!(cylinders_cover(&Word::EMPTY, &[w("0"), w("1")]));
        assert!(cylinders_cover(&Word::EMPTY, &[w("0"), w("10"), w("11")]));
        assert!(!cylinders_cover(&Word::EMPTY, &[w("0"), w("10")]));
        assert!(cylinders_cover(&w("01"), &[w("0")]));
    }

    #[test]
    fn points_and_names() {
        let c = CantorSpace::new();
        let x = CantorPoint::parse("01(0)").unwrap();
        assert!(x.in_cylinder(&Word::parse("010").unwrap()));
        let nb = c.point_name(&x).neighborhoods.listing(4);
        assert_eq!(
            nb,
            vec![
                Word::EMPTY.index(),
                Word::parse("0").unwrap().index(),
                Word::parse("01").unwrap().index(),
                Word::parse("010").unwrap().index()
            ]
        );
        assert!(CantorPoint::parse("01(").is_err());
    }
}
