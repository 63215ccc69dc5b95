//! Closed subspaces of the real line with a finite-union-of-intervals
//! carrier: the real line itself, the unit interval, and small fixtures.
//!
//! Basic index `<code(c), poscode(w)>` names the open interval `(c-w, c+w)`,
//! traced on the carrier.

use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{BaseIndex, Basic, MetricSpace, PointIndex, PointName, Space};
use crate::error::{Error, Result};
use crate::kernel::{Enumerator, Fuel, Outcome, PairingScheme};
use crate::rational::{
    dyadic, fmt_rational, int, max_r, min_r, parse_rational, positive_code, positive_from_code, pow2, rational_code,
    rational_from_code, Rational,
};
use crate::sets::{ClosedSet, CompactSet, LocatedSet, OpenSet, OvertSet};

/// A finite union of closed rational intervals (points allowed), kept sorted
/// with overlapping or touching pieces merged.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LineSet {
    parts: Vec<(Rational, Rational)>,
}

impl LineSet {
    pub fn empty() -> Self {
        LineSet { parts: Vec::new() }
    }

    pub fn interval(a: Rational, b: Rational) -> Self {
        LineSet::new(vec![(a, b)])
    }

    pub fn point(a: Rational) -> Self {
        LineSet::new(vec![(a.clone(), a)])
    }

    pub fn new(mut parts: Vec<(Rational, Rational)>) -> Self {
        parts.retain(|(a, b)| a <= b);
        parts.sort();
        let mut out: Vec<(Rational, Rational)> = Vec::new();
        for (a, b) in parts {
            match out.last_mut() {
                Some(last) if a <= last.1 => {
                    if b > last.1 {
                        last.1 = b;
                    }
                }
                _ => out.push((a, b)),
            }
        }
        LineSet { parts: out }
    }

    pub fn parts(&self) -> &[(Rational, Rational)] {
        &self.parts
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn union(&self, other: &LineSet) -> LineSet {
        let mut v = self.parts.clone();
        v.extend(other.parts.iter().cloned());
        LineSet::new(v)
    }

    pub fn contains(&self, x: &Rational) -> bool {
        self.parts.iter().any(|(a, b)| a <= x && x <= b)
    }

    /// Convex hull `[min, max]`.
    pub fn hull(&self) -> Option<(Rational, Rational)> {
        Some((self.parts.first()?.0.clone(), self.parts.last()?.1.clone()))
    }

    /// Whether the set meets the open interval `(lo, hi)`.
    pub fn meets_open(&self, lo: &Rational, hi: &Rational) -> bool {
        self.parts.iter().any(|(a, b)| a < hi && lo < b || (a == b && lo < a && a < hi))
    }

    /// `self ∩ [lo, hi]`.
    pub fn intersect_closed(&self, lo: &Rational, hi: &Rational) -> LineSet {
        LineSet::new(self.parts.iter().map(|(a, b)| (max_r(a, lo), min_r(b, hi))).collect())
    }

    /// Whether the set is contained in the union of the open intervals.
    pub fn covered_by_opens(&self, opens: &[(Rational, Rational)]) -> bool {
        self.parts.iter().all(|(a, b)| closed_covered(a, b, opens))
    }

    /// Exact distance from `x`, `None` for the empty set.
    pub fn distance(&self, x: &Rational) -> Option<Rational> {
        self.parts
            .iter()
            .map(|(a, b)| {
                if x < a {
                    a - x
                } else if x > b {
                    x - b
                } else {
                    Rational::zero()
                }
            })
            .min()
    }

    /// Nearest point of the set to `x`; ties go to the lower point.
    pub fn project(&self, x: &Rational) -> Option<Rational> {
        let mut best: Option<(Rational, Rational)> = None;
        for (a, b) in &self.parts {
            let p = if x < a {
                a.clone()
            } else if x > b {
                b.clone()
            } else {
                x.clone()
            };
            let d = (&p - x).abs();
            if best.as_ref().is_none_or(|(bd, _)| d < *bd) {
                best = Some((d, p));
            }
        }
        best.map(|(_, p)| p)
    }

    /// Parses `[a,b]`, `{p,q,..}` pieces joined by `+`, or `empty`.
    pub fn parse(s: &str) -> Result<LineSet> {
        let t = s.trim();
        if t == "empty" || t == "{}" {
            return Ok(LineSet::empty());
        }
        let mut parts = Vec::new();
        for piece in t.split('+') {
            let p = piece.trim();
            if let Some(body) = p.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
                let (a, b) = body
                    .split_once(',')
                    .ok_or_else(|| Error::MalformedLiteral(format!("interval `{p}` needs two endpoints")))?;
                let (a, b) = (parse_rational(a)?, parse_rational(b)?);
                if a > b {
                    return Err(Error::MalformedLiteral(format!("interval `{p}` has lo > hi")));
                }
                parts.push((a, b));
            } else if let Some(body) = p.strip_prefix('{').and_then(|r| r.strip_suffix('}')) {
                for q in body.split(',').filter(|q| !q.trim().is_empty()) {
                    let q = parse_rational(q)?;
                    parts.push((q.clone(), q));
                }
            } else {
                return Err(Error::MalformedLiteral(format!("bad set piece `{p}`")));
            }
        }
        Ok(LineSet::new(parts))
    }

    pub fn render(&self) -> String {
        if self.parts.is_empty() {
            return "empty".into();
        }
        let v: Vec<String> = self
            .parts
            .iter()
            .map(|(a, b)| {
                if a == b {
                    format!("{{{}}}", fmt_rational(a))
                } else {
                    format!("[{},{}]", fmt_rational(a), fmt_rational(b))
                }
            })
            .collect();
        v.join("+")
    }
}

/// `[a, b] ⊆ ⋃ (lo_i, hi_i)`.
fn closed_covered(a: &Rational, b: &Rational, opens: &[(Rational, Rational)]) -> bool {
    let mut pos = a.clone();
    loop {
        let reach = opens.iter().filter(|(lo, hi)| *lo < pos && pos < *hi).map(|(_, hi)| hi).max();
        match reach {
            None => return false,
            Some(h) if h > b => return true,
            Some(h) => pos = h.clone(),
        }
    }
}

/// Intersection of an open interval with a closed component, with endpoint
/// closedness tracked.
struct Piece {
    lo: Rational,
    lo_closed: bool,
    hi: Rational,
    hi_closed: bool,
}

impl Piece {
    fn of(lo: &Rational, hi: &Rational, c: &Rational, d: &Rational) -> Option<Piece> {
        let (l, lc) = if c > lo { (c.clone(), true) } else { (lo.clone(), false) };
        let (h, hc) = if d < hi { (d.clone(), true) } else { (hi.clone(), false) };
        if l < h || (l == h && lc && hc) {
            Some(Piece { lo: l, lo_closed: lc, hi: h, hi_closed: hc })
        } else {
            None
        }
    }

    fn inside_open(&self, lo: &Rational, hi: &Rational) -> bool {
        let left = if self.lo_closed { *lo < self.lo } else { *lo <= self.lo };
        let right = if self.hi_closed { self.hi < *hi } else { self.hi <= *hi };
        left && right
    }

    /// A point strictly inside, or the point itself for a degenerate piece.
    fn sample(&self, j: u64) -> Rational {
        if self.lo == self.hi {
            return self.lo.clone();
        }
        // van der Corput style spread over the open interior
        let m = 63 - (j + 1).leading_zeros();
        let r = (j + 1) - (1u64 << m);
        let t = Rational::new(BigInt::from(2 * r + 1), BigInt::one() << (m as usize + 1));
        &self.lo + (&self.hi - &self.lo) * t
    }
}

/// Encodes the open interval `(c - w, c + w)`.
pub fn interval_index(lo: &Rational, hi: &Rational) -> Option<BaseIndex> {
    if lo >= hi {
        return None;
    }
    let two = int(2);
    let c = (lo + hi) / &two;
    let w = (hi - lo) / two;
    Some(BaseIndex(PairingScheme::checked_encode(rational_code(&c)?, positive_code(&w)?)?))
}

pub fn decode_interval(n: BaseIndex) -> (Rational, Rational) {
    let (cc, wc) = PairingScheme::decode(n.0);
    let c = rational_from_code(cc);
    let w = positive_from_code(wc);
    (&c - &w, c + w)
}

/// A closed subspace of the line given by a finite-union carrier, or the
/// whole line when the carrier is `None`.
pub struct LineSpace {
    label: String,
    carrier: Option<LineSet>,
}

impl LineSpace {
    pub fn real_line() -> Arc<LineSpace> {
        Arc::new(LineSpace { label: "real-line".into(), carrier: None })
    }

    pub fn unit_interval() -> Arc<LineSpace> {
        Arc::new(LineSpace { label: "unit-interval".into(), carrier: Some(LineSet::interval(int(0), int(1))) })
    }

    pub fn with_carrier(label: impl Into<String>, carrier: LineSet) -> Result<Arc<LineSpace>> {
        if carrier.is_empty() {
            return Err(Error::MalformedSpace("empty carrier".into()));
        }
        Ok(Arc::new(LineSpace { label: label.into(), carrier: Some(carrier) }))
    }

    pub fn carrier(&self) -> Option<&LineSet> {
        self.carrier.as_ref()
    }

    pub fn is_compact(&self) -> bool {
        self.carrier.is_some()
    }

    pub fn contains(&self, x: &Rational) -> bool {
        self.carrier.as_ref().is_none_or(|c| c.contains(x))
    }

    /// Trace of the open interval on the carrier is nonempty.
    pub fn trace_nonempty(&self, lo: &Rational, hi: &Rational) -> bool {
        match &self.carrier {
            None => lo < hi,
            Some(c) => c.meets_open(lo, hi),
        }
    }

    /// Trace of `(lo, hi)` contains `x` (for `x` in the carrier).
    fn trace_contains(&self, lo: &Rational, hi: &Rational, x: &Rational) -> bool {
        lo < x && x < hi && self.contains(x)
    }

    fn pieces(&self, lo: &Rational, hi: &Rational) -> Vec<Piece> {
        match &self.carrier {
            None => Piece::of(lo, hi, &(lo - int(1)), &(hi + int(1))).into_iter().collect(),
            Some(c) => c.parts().iter().filter_map(|(a, b)| Piece::of(lo, hi, a, b)).collect(),
        }
    }

    /// Closure of a basic, `[lo, hi] ∩ carrier`; `None` on the whole line
    /// means the interval itself.
    pub fn closed_trace(&self, lo: &Rational, hi: &Rational) -> LineSet {
        match &self.carrier {
            None => LineSet::interval(lo.clone(), hi.clone()),
            Some(c) => c.intersect_closed(lo, hi),
        }
    }

    /// Name of a rational point of the space.
    pub fn point_name(self: &Arc<Self>, x: &Rational) -> Result<PointName> {
        if !self.contains(x) {
            return Err(Error::OutOfSpace(format!("{} is not in {}", fmt_rational(x), self.label)));
        }
        let x = x.clone();
        let nb = Enumerator::from_fn(move |t| {
            if t % 2 == 0 {
                let w = dyadic((t / 2) as u32);
                interval_index(&(&x - &w), &(&x + &w))
            } else {
                let n = BaseIndex(((t - 1) / 2) as u128);
                let (lo, hi) = decode_interval(n);
                (lo < x && x < hi).then_some(n)
            }
        });
        Ok(PointName::new(self.clone(), nb))
    }

    /// Name of a point given by approximations `|approx(k) - x| <= 2^-k`;
    /// the caller guarantees the limit lies in the carrier.
    pub fn point_name_from_approx(
        self: &Arc<Self>,
        approx: impl Fn(u32) -> Rational + Send + Sync + 'static,
    ) -> PointName {
        let approx = Arc::new(approx);
        let nb = Enumerator::from_fn(move |t| {
            if t % 2 == 0 {
                let s = (t / 2) as u32;
                let a = approx(s + 1);
                let w = dyadic(s);
                interval_index(&(&a - &w), &(&a + &w))
            } else {
                let (r, k) = PairingScheme::decode64((t - 1) / 2);
                let (lo, hi) = decode_interval(BaseIndex(r as u128));
                let inside = |k: u64| {
                    let a = approx(k as u32);
                    let e = dyadic(k as u32);
                    lo < &a - &e && &a + &e < hi
                };
                (inside(k) && (k == 0 || !inside(k - 1))).then_some(BaseIndex(r as u128))
            }
        });
        PointName::new(self.clone(), nb)
    }

    fn grid_bounds(&self, level: u32) -> (BigInt, BigInt) {
        match &self.carrier {
            Some(c) => {
                let (m, mm) = c.hull().expect("nonempty carrier");
                let s = pow2(level);
                let lo = (&m * &s).floor().to_integer() - 1;
                let hi = (&mm * &s).ceil().to_integer() + 1;
                (lo, hi)
            }
            None => {
                let r = BigInt::from(level + 1) << level as usize;
                (-r.clone(), r)
            }
        }
    }

    fn to_dense(&self, q: &Rational) -> Rational {
        match &self.carrier {
            None => q.clone(),
            Some(c) => c.project(q).expect("nonempty carrier"),
        }
    }
}

/// Stateful walk through grid levels; one valid item per call.
struct GridWalk {
    level: u32,
    j: BigInt,
    jmax: BigInt,
    big_done: bool,
}

impl GridWalk {
    fn next(&mut self, sp: &LineSpace) -> BaseIndex {
        loop {
            if !self.big_done {
                self.big_done = true;
                if sp.carrier.is_none() {
                    let r = pow2(self.level);
                    if let Some(n) = interval_index(&-r.clone(), &r) {
                        return n;
                    }
                }
            }
            if self.j > self.jmax {
                self.level += 1;
                let (lo, hi) = sp.grid_bounds(self.level);
                self.j = lo;
                self.jmax = hi;
                self.big_done = false;
                continue;
            }
            let c = Rational::new(self.j.clone(), BigInt::one() << self.level as usize);
            self.j += 1;
            let w = dyadic(self.level);
            let (lo, hi) = (&c - &w, &c + &w);
            if sp.trace_nonempty(&lo, &hi) {
                if let Some(n) = interval_index(&lo, &hi) {
                    return n;
                }
            }
        }
    }
}

impl LineSpace {
    /// Grid basics level by level, `(j-1)/2^L .. (j+1)/2^L`.
    pub fn grid_order(self: &Arc<Self>) -> Enumerator<BaseIndex> {
        let sp = self.clone();
        let (lo, hi) = sp.grid_bounds(0);
        let walk = Mutex::new(GridWalk { level: 0, j: lo, jmax: hi, big_done: false });
        Enumerator::from_fn(move |_| Some(walk.lock().unwrap_or_else(|e| e.into_inner()).next(&sp)))
    }

    fn search_order_arc(self: &Arc<Self>) -> Enumerator<BaseIndex> {
        let grid = self.grid_order();
        Enumerator::from_steps(
            move |t| {
                if t % 2 == 0 {
                    grid.batch(t / 2)
                } else {
                    vec![BaseIndex(((t - 1) / 2) as u128)]
                }
            },
        )
    }

    /// Closed interval `m` inside closed interval `n`, by endpoints.
    pub fn closure_within(m: BaseIndex, n: BaseIndex) -> bool {
        let (a, b) = decode_interval(m);
        let (c, d) = decode_interval(n);
        c <= a && b <= d
    }
}

/// `Space` needs `search_order(&self)`; the grid walk wants an `Arc`, so the
/// space keeps no self-reference and rebuilds one from its data.
impl Space for LineSpace {
    fn name(&self) -> String {
        self.label.clone()
    }

    fn decode(&self, n: BaseIndex) -> Option<Basic> {
        let (lo, hi) = decode_interval(n);
        Some(Basic::Interval { lo, hi })
    }

    fn formal_subset(&self, a: &Basic, b: &Basic) -> Option<bool> {
        let (Basic::Interval { lo: la, hi: ha }, Basic::Interval { lo: lb, hi: hb }) = (a, b) else {
            return None;
        };
        Some(self.pieces(la, ha).iter().all(|p| p.inside_open(lb, hb)))
    }

    fn search_order(&self) -> Enumerator<BaseIndex> {
        Arc::new(LineSpace { label: self.label.clone(), carrier: self.carrier.clone() }).search_order_arc()
    }

    fn basic_meet(&self, a: BaseIndex, b: BaseIndex) -> Vec<BaseIndex> {
        let (la, ha) = decode_interval(a);
        let (lb, hb) = decode_interval(b);
        interval_index(&max_r(&la, &lb), &min_r(&ha, &hb)).into_iter().collect()
    }
}

impl MetricSpace for LineSpace {
    fn distance_error(&self, _precision: u32) -> Rational {
        Rational::zero()
    }

    fn distance(&self, i: PointIndex, j: PointIndex, _precision: u32) -> Rational {
        (self.dense_point(i) - self.dense_point(j)).abs()
    }

    fn ball_index(&self, center: PointIndex, radius: &Rational) -> Option<BaseIndex> {
        let c = self.dense_point(center);
        interval_index(&(&c - radius), &(&c + radius))
    }

    fn dense_in_basic(&self, n: BaseIndex, j: u64) -> Option<PointIndex> {
        let (lo, hi) = decode_interval(n);
        let pieces = self.pieces(&lo, &hi);
        if pieces.is_empty() {
            return None;
        }
        let p = &pieces[(j % pieces.len() as u64) as usize];
        rational_code(&p.sample(j / pieces.len() as u64))
    }

    fn exterior_parts(&self, center: PointIndex, radius: &Rational, k: u32) -> Vec<BaseIndex> {
        let c = self.dense_point(center);
        let far = pow2(k);
        let r = radius.clone();
        let mut out = Vec::new();
        out.extend(interval_index(&(&c + &r), &(&c + &r + &far)));
        out.extend(interval_index(&(&c - &r - &far), &(&c - &r)));
        out
    }

    fn net(&self, level: u32) -> Vec<PointIndex> {
        let Some(c) = &self.carrier else { return Vec::new() };
        let (lo, hi) = self.grid_bounds(level + 1);
        let mut out: Vec<PointIndex> = Vec::new();
        let mut j = lo;
        while j <= hi {
            let g = Rational::new(j.clone(), BigInt::one() << (level as usize + 1));
            if let Some(code) = c.project(&g).and_then(|p| rational_code(&p)) {
                if out.last() != Some(&code) && !out.contains(&code) {
                    out.push(code);
                }
            }
            j += 1;
        }
        out
    }

    fn proper_balls(&self) -> bool {
        true
    }

    fn closed_ball_covered(&self, center: PointIndex, radius: &Rational, cover: &[BaseIndex]) -> Option<bool> {
        let c = self.dense_point(center);
        let ball = self.closed_trace(&(&c - radius), &(&c + radius));
        let opens: Vec<(Rational, Rational)> = cover.iter().map(|&n| decode_interval(n)).collect();
        Some(ball.covered_by_opens(&opens))
    }

    fn dense_index_of_rational(&self, q: &Rational) -> Option<PointIndex> {
        if self.contains(q) {
            rational_code(q)
        } else {
            None
        }
    }
}

impl LineSpace {
    /// The dense point with index `i`: the code's rational projected onto
    /// the carrier.
    pub fn dense_point(&self, i: PointIndex) -> Rational {
        self.to_dense(&rational_from_code(i))
    }

    pub fn trace_contains_point(&self, n: BaseIndex, x: &Rational) -> bool {
        let (lo, hi) = decode_interval(n);
        self.trace_contains(&lo, &hi, x)
    }
}

impl LineSpace {
    /// Compact name of a literal set (exact cover test).
    pub fn literal_compact(self: &Arc<Self>, set: LineSet) -> CompactSet {
        CompactSet::new(self.clone(), move |cover: &[BaseIndex], _f: Fuel| {
            let opens: Vec<(Rational, Rational)> = cover.iter().map(|&n| decode_interval(n)).collect();
            if set.covered_by_opens(&opens) {
                Outcome::Accepted(0)
            } else {
                Outcome::Pending
            }
        })
    }

    /// Overt name of a literal set (exact meet test).
    pub fn literal_overt(self: &Arc<Self>, set: LineSet) -> OvertSet {
        OvertSet::from_probe(self.clone(), move |n: BaseIndex, _f: Fuel| {
            let (lo, hi) = decode_interval(n);
            if set.meets_open(&lo, &hi) {
                Outcome::Accepted(0)
            } else {
                Outcome::Pending
            }
        })
    }

    /// Closed name of a literal set: the gaps at step 0, then rays of length
    /// `2^k` on both sides at step `k`.
    pub fn literal_closed(self: &Arc<Self>, set: LineSet) -> ClosedSet {
        let sp: Arc<dyn Space> = self.clone();
        let Some((first, last)) = set.hull() else { return ClosedSet::empty(sp) };
        let gaps: Vec<BaseIndex> = set.parts().windows(2).filter_map(|w| interval_index(&w[0].1, &w[1].0)).collect();
        let parts = Enumerator::from_steps(move |k| {
            let far = pow2(k as u32);
            let mut out = if k == 0 { gaps.clone() } else { Vec::new() };
            out.extend(interval_index(&last, &(&last + &far)));
            out.extend(interval_index(&(&first - &far), &first));
            out
        });
        ClosedSet::new(OpenSet::new(sp, parts))
    }

    /// Located name of a literal set, which must lie in the carrier.
    pub fn literal_located(self: &Arc<Self>, set: LineSet) -> Result<LocatedSet> {
        if let Some(c) = &self.carrier {
            let inside = set.parts().iter().all(|(a, b)| c.parts().iter().any(|(p, q)| p <= a && b <= q));
            if !inside {
                return Err(Error::OutOfSpace(format!("{} is not inside {}", set.render(), self.label)));
            }
        }
        Ok(LocatedSet::new(self.literal_closed(set.clone()), self.literal_overt(set)))
    }

    /// The carrier as a compact set, when bounded.
    pub fn whole_compact(self: &Arc<Self>) -> Option<CompactSet> {
        self.carrier.clone().map(|c| self.literal_compact(c))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn interval_codes_roundtrip() {
        for n in 0..3000u128 {
            let (lo, hi) = decode_interval(BaseIndex(n));
            let back = interval_index(&lo, &hi).unwrap();
            assert_eq!(decode_interval(back), (lo, hi));
        }
    }

    #[test]
    fn trace_containment_on_unit_interval() {
        let u = LineSpace::unit_interval();
        let a = Basic::Interval { lo: rat(-1, 2), hi: rat(1, 2) };
        let b = Basic::Interval { lo: rat(-1, 4), hi: rat(3, 4) };
        // [0, 1/2) inside (-1/4, 3/4)
        assert_eq!(u.formal_subset(&a, &b), Some(true));
        let r = LineSpace::real_line();
        assert_eq!(r.formal_subset(&a, &b), Some(false));
        let far = Basic::Interval { lo: int(3), hi: int(4) };
        assert_eq!(u.formal_subset(&far, &b), Some(true));
    }

    #[test]
    fn cover_sweep() {
        let s = LineSet::interval(int(0), int(1));
        assert!(s.covered_by_opens(&[(rat(-1, 2), rat(1, 2)), (rat(1, 4), rat(3, 2))]));
        assert!(!s.covered_by_opens(&[(rat(-1, 2), rat(1, 2)), (rat(1, 2), rat(3, 2))]));
        assert!(LineSet::empty().covered_by_opens(&[]));
    }

    #[test]
    fn literal_parse_and_render() {
        let s = LineSet::parse("[0,1/2] + {3/4, 1}").unwrap();
        assert_eq!(s.render(), "[0,1/2]+{3/4}+{1}");
        assert!(LineSet::parse("[1,0]").is_err());
        assert!(LineSet::parse("(0,1)").is_err());
        assert_eq!(s.distance(&rat(5, 8)), Some(rat(1, 8)));
    }

    #[test]
    fn point_name_contains_quarter_interval_early() {
        let u = LineSpace::unit_interval();
        let x = u.point_name(&rat(1, 2)).unwrap();
        let target = interval_index(&rat(1, 4), &rat(3, 4)).unwrap();
        assert_eq!(target, BaseIndex(145));
        assert!(x.neighborhoods.listing(5).contains(&target));
        assert!(u.point_name(&rat(2, 1)).is_err());
    }

    #[test]
    fn grid_walk_emits_valid_unit_basics() {
        let u = LineSpace::unit_interval();
        let g = u.grid_order();
        let items = g.listing(40);
        assert_eq!(items.len(), 40);
        for n in items {
            let (lo, hi) = decode_interval(n);
            assert!(u.trace_nonempty(&lo, &hi));
        }
    }

    #[test]
    fn net_covers_unit_interval() {
        let u = LineSpace::unit_interval();
        for level in 0..5 {
            let net = u.net(level);
            let opens: Vec<_> = net
                .iter()
                .map(|&p| {
                    let c = u.dense_point(p);
                    (&c - dyadic(level), &c + dyadic(level))
                })
                .collect();
            assert!(LineSet::interval(int(0), int(1)).covered_by_opens(&opens));
        }
    }
}
