//! The star space: countably many unit spokes glued at a common endpoint
//! `∞`, with `d(∞,(n,x)) = 2^-n + x`, `d((n,x),(n,y)) = |x-y|` and
//! `d((n,x),(m,y)) = x + y + 2^-n + 2^-m` for `n ≠ m`.
//!
//! It is a complete separable metric space but no ball around `∞` is
//! compact, so it carries no ercs.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::{BaseIndex, Basic, MetricSpace, PointIndex, PointName, Space};
use crate::ercs::CompactCandidate;
use crate::error::{Error, Result};
use crate::kernel::{Enumerator, Fuel, Outcome, PairingScheme};
use crate::rational::{dyadic, fmt_rational, int, parse_rational, positive_code, positive_from_code, Rational};
use crate::sets::CompactSet;

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum StarPoint {
    Infinity,
    /// `(n, x)` with `x ∈ [0, 1]`.
    Spoke {
        n: u64,
        x: Rational,
    },
}

impl fmt::Debug for StarPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StarPoint::Infinity => f.write_str("inf"),
            StarPoint::Spoke { n, x } => write!(f, "({n},{})", fmt_rational(x)),
        }
    }
}

impl StarPoint {
    pub fn spoke(n: u64, x: Rational) -> Result<StarPoint> {
        if x.is_negative() || x > int(1) {
            return Err(Error::OutOfSpace(format!("spoke coordinate {} outside [0,1]", fmt_rational(&x))));
        }
        Ok(StarPoint::Spoke { n, x })
    }

    /// `inf` or `(n,x)`.
    pub fn parse(s: &str) -> Result<StarPoint> {
        let t = s.trim();
        if t == "inf" || t == "∞" {
            return Ok(StarPoint::Infinity);
        }
        let body = t
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| Error::MalformedLiteral(format!("bad star point `{t}`")))?;
        let (n, x) = body.split_once(',').ok_or_else(|| Error::MalformedLiteral(format!("bad star point `{t}`")))?;
        let n: u64 = n.trim().parse().map_err(|_| Error::MalformedLiteral(format!("bad spoke `{n}`")))?;
        StarPoint::spoke(n, parse_rational(x)?)
    }
}

/// The exact three-case metric.
pub fn star_distance(p: &StarPoint, q: &StarPoint) -> Rational {
    use StarPoint::*;
    match (p, q) {
        (Infinity, Infinity) => Rational::zero(),
        (Infinity, Spoke { n, x }) | (Spoke { n, x }, Infinity) => dyadic(*n as u32) + x,
        (Spoke { n, x }, Spoke { n: m, x: y }) => {
            if n == m {
                (x - y).abs()
            } else {
                x + y + dyadic(*n as u32) + dyadic(*m as u32)
            }
        }
    }
}

/// Dense sequence: index 0 is `∞`; `1 + <n, <p, q-1>>` is `(n, min(p,q)/q)`.
pub fn dense_point(i: PointIndex) -> StarPoint {
    if i == 0 {
        return StarPoint::Infinity;
    }
    let (n, c) = PairingScheme::decode(i - 1);
    let (p, d) = PairingScheme::decode(c);
    let q = d + 1;
    StarPoint::Spoke { n: n as u64, x: Rational::new(BigInt::from(p.min(q)), BigInt::from(q)) }
}

pub fn dense_index(p: &StarPoint) -> Option<PointIndex> {
    match p {
        StarPoint::Infinity => Some(0),
        StarPoint::Spoke { n, x } => {
            use num_traits::ToPrimitive;
            let num = x.numer().to_u128()?;
            let den = x.denom().to_u128()?;
            let c = PairingScheme::checked_encode(num, den - 1)?;
            Some(PairingScheme::checked_encode(*n as u128, c)? + 1)
        }
    }
}

pub fn ball_index_of(center: PointIndex, radius: &Rational) -> Option<BaseIndex> {
    Some(BaseIndex(PairingScheme::checked_encode(center, positive_code(radius)?)?))
}

pub fn decode_ball(n: BaseIndex) -> (StarPoint, Rational) {
    let (c, r) = PairingScheme::decode(n.0);
    (dense_point(c), positive_from_code(r))
}

pub struct StarSpace;

impl StarSpace {
    pub fn new() -> Arc<StarSpace> {
        Arc::new(StarSpace)
    }

    pub fn point_name(self: &Arc<Self>, p: &StarPoint) -> Result<PointName> {
        let i = dense_index(p).ok_or_else(|| Error::OutOfSpace(format!("{p:?} has no index")))?;
        let p = p.clone();
        let nb = Enumerator::from_fn(move |t| {
            if t % 2 == 0 {
                ball_index_of(i, &dyadic((t / 2) as u32))
            } else {
                let n = BaseIndex(((t - 1) / 2) as u128);
                let (c, r) = decode_ball(n);
                (star_distance(&c, &p) < r).then_some(n)
            }
        });
        Ok(PointName::new(self.clone(), nb))
    }

    /// Compact name for a finite union of whole spokes, optionally with `∞`.
    pub fn spokes_compact(self: &Arc<Self>, spokes: Vec<u64>, with_infinity: bool) -> CompactSet {
        CompactSet::new(self.clone(), move |cover: &[BaseIndex], _f: Fuel| {
            let balls: Vec<(StarPoint, Rational)> = cover.iter().map(|&n| decode_ball(n)).collect();
            let inf_ok = !with_infinity || balls.iter().any(|(c, r)| star_distance(c, &StarPoint::Infinity) < *r);
            if inf_ok && spokes.iter().all(|&n| spoke_covered(n, &balls)) {
                Outcome::Accepted(0)
            } else {
                Outcome::Pending
            }
        })
    }
}

impl StarSpace {
    /// Finite unions of spokes `0..=s` with `∞`, each knowing which balls it
    /// contains. A ball reaching `∞` meets infinitely many spokes, so it is
    /// never contained in a member.
    pub fn spoke_family(self: &Arc<Self>) -> Enumerator<CompactCandidate> {
        let sp = self.clone();
        Enumerator::from_fn(move |s| {
            let compact = sp.spokes_compact((0..=s).collect(), true);
            Some(CompactCandidate::new(format!("spokes 0..={s} with inf"), compact, move |n| {
                let (c, r) = decode_ball(n);
                match c {
                    StarPoint::Infinity => false,
                    StarPoint::Spoke { n: m, .. } => star_distance(&c, &StarPoint::Infinity) >= r && m <= s,
                }
            }))
        })
    }
}

/// Whether spoke `n`, i.e. `{(n,x) : x ∈ [0,1]}`, lies in the union of balls.
fn spoke_covered(n: u64, balls: &[(StarPoint, Rational)]) -> bool {
    // each ball meets the spoke in a relatively open interval of [0,1]
    let mut opens: Vec<(Rational, Rational)> = Vec::new();
    let base = dyadic(n as u32);
    for (c, r) in balls {
        match c {
            StarPoint::Infinity => opens.push((int(-1), r - &base)),
            StarPoint::Spoke { n: m, x } if *m == n => opens.push((x - r, x + r)),
            StarPoint::Spoke { n: m, x } => opens.push((int(-1), r - x - &base - dyadic(*m as u32))),
        }
    }
    // relative to [0,1]: open at 0 from the left is fine, extend the right end
    let opens: Vec<(Rational, Rational)> =
        opens.into_iter().map(|(lo, hi)| if hi > int(1) { (lo, int(2)) } else { (lo, hi) }).collect();
    super::line::LineSet::interval(int(0), int(1)).covered_by_opens(&opens)
}

impl Space for StarSpace {
    fn name(&self) -> String {
        "star".into()
    }

    fn decode(&self, n: BaseIndex) -> Option<Basic> {
        let (center, radius) = decode_ball(n);
        Some(Basic::StarBall { center, radius })
    }

    /// `d(c1,c2) + r1 <= r2` certifies containment; anything else is unknown.
    fn formal_subset(&self, a: &Basic, b: &Basic) -> Option<bool> {
        let (Basic::StarBall { center: c1, radius: r1 }, Basic::StarBall { center: c2, radius: r2 }) = (a, b) else {
            return None;
        };
        (star_distance(c1, c2) + r1 <= *r2).then_some(true)
    }

    fn search_order(&self) -> Enumerator<BaseIndex> {
        Enumerator::from_fn(|t| Some(BaseIndex(t as u128)))
    }
}

impl MetricSpace for StarSpace {
    fn distance_error(&self, _precision: u32) -> Rational {
        Rational::zero()
    }

    fn distance(&self, i: PointIndex, j: PointIndex, _precision: u32) -> Rational {
        star_distance(&dense_point(i), &dense_point(j))
    }

    fn ball_index(&self, center: PointIndex, radius: &Rational) -> Option<BaseIndex> {
        ball_index_of(center, radius)
    }

    /// The center first, then every dense point that falls inside.
    fn dense_in_basic(&self, n: BaseIndex, j: u64) -> Option<PointIndex> {
        let (c, _) = PairingScheme::decode(n.0);
        if j == 0 {
            return Some(c);
        }
        let (center, r) = decode_ball(n);
        let i = (j - 1) as PointIndex;
        (star_distance(&center, &dense_point(i)) < r).then_some(i)
    }
}
