//! Computable metric spaces: points as fast Cauchy sequences of dense
//! indices, balls in their open, closed and overt roles, compact balls, and
//! real quantities (radius, nice radius, distance to a located set,
//! Hausdorff distance) as nested rational intervals.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use num_traits::{Signed, Zero};

use crate::ercs::{compact_base, compact_neighborhood_search, CompactCandidate, Ercs, ErcsParts};
use crate::error::{Error, Result};
use crate::kernel::{dovetail_any, dovetail_first, Enumerator, Fuel, Outcome, PairingScheme, Semidecision};
use crate::rational::{
    dyadic, dyadic_floor, half, int, log2_floor_inv, max_r, min_r, positive_from_code, pow2, rational_from_code,
    Rational,
};
use crate::sets::{
    compact_subset, intersect_closed_compact, open_of_basic, open_union, overt_meets, ClosedSet, CompactSet,
    LocatedSet, OpenSet, OvertSet,
};
use crate::spaces::{BaseIndex, MetricSpace, PointIndex, PointName, Registered, Space};

/// A closed rational interval `[lo, hi]`.
pub type Interval = (Rational, Rational);

fn as_space(m: &Arc<dyn MetricSpace>) -> Arc<dyn Space> {
    m.clone()
}

fn width(iv: &Interval) -> Rational {
    &iv.1 - &iv.0
}

fn meet(a: &Interval, b: &Interval) -> Interval {
    (max_r(&a.0, &b.0), min_r(&a.1, &b.1))
}

// ---------------------------------------------------------------- points

type CauchyFn = dyn Fn(u32) -> PointIndex + Send + Sync;

#[derive(Clone)]
enum Cauchy {
    Dense(PointIndex),
    Seq(Arc<CauchyFn>),
}

/// A point given by dense indices `cauchy(k)` within `2^-k` of it.
#[derive(Clone)]
pub struct MetricPoint {
    pub space: Arc<dyn MetricSpace>,
    cauchy: Cauchy,
}

impl fmt::Debug for MetricPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.cauchy {
            Cauchy::Dense(i) => write!(f, "MetricPoint({}, dense {i})", self.space.name()),
            Cauchy::Seq(_) => write!(f, "MetricPoint({}, sequence)", self.space.name()),
        }
    }
}

impl MetricPoint {
    /// The dense point with index `i`, exactly.
    pub fn dense(space: Arc<dyn MetricSpace>, i: PointIndex) -> Self {
        MetricPoint { space, cauchy: Cauchy::Dense(i) }
    }

    pub fn new(space: Arc<dyn MetricSpace>, cauchy: impl Fn(u32) -> PointIndex + Send + Sync + 'static) -> Self {
        MetricPoint { space, cauchy: Cauchy::Seq(Arc::new(cauchy)) }
    }

    /// The dense point of a rational literal, for spaces that index them.
    pub fn rational(space: Arc<dyn MetricSpace>, q: &Rational) -> Result<Self> {
        let i = space
            .dense_index_of_rational(q)
            .ok_or_else(|| Error::OutOfSpace(format!("{} is not a point of {}", q, space.name())))?;
        Ok(MetricPoint::dense(space, i))
    }

    pub fn approx(&self, k: u32) -> PointIndex {
        match &self.cauchy {
            Cauchy::Dense(i) => *i,
            Cauchy::Seq(f) => f(k),
        }
    }

    pub fn dense_index(&self) -> Option<PointIndex> {
        match self.cauchy {
            Cauchy::Dense(i) => Some(i),
            Cauchy::Seq(_) => None,
        }
    }

    /// Bound on `d(x, approx(k))`.
    pub fn slack(&self, k: u32) -> Rational {
        match self.cauchy {
            Cauchy::Dense(_) => Rational::zero(),
            Cauchy::Seq(_) => dyadic(k),
        }
    }

    /// Rational bounds on `d(x, dense m)` at precision `k`.
    pub fn distance_bounds(&self, m: PointIndex, k: u32) -> Interval {
        let d = self.space.distance(self.approx(k), m, k);
        let e = self.slack(k) + self.space.distance_error(k);
        (max_r(&(&d - &e), &Rational::zero()), d + e)
    }

    /// First `k < upto` where consecutive approximations are provably too far
    /// apart for a fast Cauchy sequence.
    pub fn fast_cauchy_violation(&self, upto: u32) -> Option<u32> {
        (0..upto).find(|&k| {
            let d = self.space.distance(self.approx(k), self.approx(k + 1), k + 2);
            d - self.space.distance_error(k + 2) > dyadic(k) + dyadic(k + 1)
        })
    }

    /// Neighbourhood name: shrinking balls around the approximations.
    pub fn name(&self) -> PointName {
        let x = self.clone();
        let nb = Enumerator::from_fn(move |t| {
            let k = t as u32;
            match x.cauchy {
                Cauchy::Dense(i) => x.space.ball_index(i, &dyadic(k)),
                Cauchy::Seq(_) => x.space.ball_index(x.approx(k + 1), &dyadic(k)),
            }
        });
        PointName::new(as_space(&self.space), nb)
    }
}

// ---------------------------------------------------------------- reals

type CutFn = dyn Fn(&Rational) -> Semidecision + Send + Sync;

/// A real given from below: `test(q)` semidecides `q < value`.
#[derive(Clone)]
pub struct LowerReal {
    test: Arc<CutFn>,
}

/// A real given from above: `test(q)` semidecides `value < q`.
#[derive(Clone)]
pub struct UpperReal {
    test: Arc<CutFn>,
}

/// Running extremum of the rationals a cut accepts, in dovetail order.
fn cut_bounds(test: Arc<CutFn>, lower: bool) -> Enumerator<Rational> {
    let best: Mutex<Option<Rational>> = Mutex::new(None);
    Enumerator::from_fn(move |t| {
        let (c, j) = PairingScheme::decode64(t);
        let q = rational_from_code(c as u128);
        if test(&q).run(Fuel(j + 1)) != Outcome::Accepted(j) {
            return None;
        }
        let mut b = best.lock().unwrap_or_else(|e| e.into_inner());
        let better = match b.as_ref() {
            None => true,
            Some(cur) => (lower && q > *cur) || (!lower && q < *cur),
        };
        if better {
            *b = Some(q);
        }
        b.clone()
    })
}

impl LowerReal {
    pub fn new(test: impl Fn(&Rational) -> Semidecision + Send + Sync + 'static) -> Self {
        LowerReal { test: Arc::new(test) }
    }

    pub fn test(&self, q: &Rational) -> Semidecision {
        (self.test)(q)
    }

    /// Nondecreasing lower bounds whose supremum is the value.
    pub fn bounds(&self) -> Enumerator<Rational> {
        cut_bounds(self.test.clone(), true)
    }
}

impl UpperReal {
    pub fn new(test: impl Fn(&Rational) -> Semidecision + Send + Sync + 'static) -> Self {
        UpperReal { test: Arc::new(test) }
    }

    pub fn test(&self, q: &Rational) -> Semidecision {
        (self.test)(q)
    }

    /// Nonincreasing upper bounds whose infimum is the value.
    pub fn bounds(&self) -> Enumerator<Rational> {
        cut_bounds(self.test.clone(), false)
    }
}

type InitFn = dyn Fn() -> Result<Interval> + Send + Sync;
type StepFn = dyn Fn(&Interval, usize) -> Result<Interval> + Send + Sync;
type LevelFn = dyn Fn(u32) -> Result<Interval> + Send + Sync;

enum Source {
    Exact(Rational),
    Refine { init: Arc<InitFn>, step: Arc<StepFn> },
    Levels(Arc<LevelFn>),
}

/// A real as a deterministic chain of nested rational intervals;
/// `approx(k)` is the first link of width at most `2^-k`.
#[derive(Clone)]
pub struct CReal {
    src: Arc<Source>,
    chain: Arc<Mutex<Vec<Interval>>>,
}

impl fmt::Debug for CReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("CReal(..)")
    }
}

/// Links computed before giving up on a precision.
const MAX_LINKS: usize = 400;

impl CReal {
    pub fn exact(q: Rational) -> Self {
        CReal { src: Arc::new(Source::Exact(q)), chain: Arc::new(Mutex::new(Vec::new())) }
    }

    /// From a first interval and a refinement step; every link is
    /// intersected with its predecessor.
    pub fn refining(
        init: impl Fn() -> Result<Interval> + Send + Sync + 'static,
        step: impl Fn(&Interval, usize) -> Result<Interval> + Send + Sync + 'static,
    ) -> Self {
        CReal {
            src: Arc::new(Source::Refine { init: Arc::new(init), step: Arc::new(step) }),
            chain: Arc::new(Mutex::new(Vec::new())),
        }
    }

    /// From a procedure producing an interval of width at most `2^-k`
    /// directly; results are memoised per precision.
    pub fn from_levels(level: impl Fn(u32) -> Result<Interval> + Send + Sync + 'static) -> Self {
        CReal { src: Arc::new(Source::Levels(Arc::new(level))), chain: Arc::new(Mutex::new(Vec::new())) }
    }

    /// Bisection-style search driven by the two cuts: each step keeps
    /// three quarters of the interval, on the side of whichever cut
    /// accepts first. `floor` is a known lower bound.
    pub fn from_cuts(lower: LowerReal, upper: UpperReal, floor: Option<Rational>, max_fuel: u64) -> Self {
        let (l1, u1) = (lower.clone(), upper.clone());
        let init = move || bracket(&l1, &u1, floor.as_ref(), max_fuel);
        let step = move |iv: &Interval, _i: usize| {
            let (a, b) = split_points(iv);
            if race(&upper.test(&b), &lower.test(&a), max_fuel)? {
                Ok((iv.0.clone(), b))
            } else {
                Ok((a, iv.1.clone()))
            }
        };
        CReal::refining(init, step)
    }

    /// An interval of width at most `2^-k` containing the value.
    pub fn approx(&self, k: u32) -> Result<Interval> {
        let (init, step) = match self.src.as_ref() {
            Source::Exact(q) => return Ok((q.clone(), q.clone())),
            Source::Refine { init, step } => (init, step),
            Source::Levels(level) => return self.level_approx(level, k),
        };
        let target = dyadic(k);
        let mut chain = self.chain.lock().unwrap_or_else(|e| e.into_inner());
        if chain.is_empty() {
            chain.push(init()?);
        }
        if let Some(iv) = chain.iter().find(|iv| width(iv) <= target) {
            return Ok(iv.clone());
        }
        while chain.len() < MAX_LINKS {
            let last = chain.last().expect("nonempty chain").clone();
            let next = meet(&step(&last, chain.len())?, &last);
            let done = width(&next) <= target;
            chain.push(next.clone());
            if done {
                return Ok(next);
            }
        }
        Err(Error::Unsupported(format!("no convergence to precision {k} within {MAX_LINKS} refinements")))
    }

    fn level_approx(&self, level: &Arc<LevelFn>, k: u32) -> Result<Interval> {
        let target = dyadic(k);
        let mut chain = self.chain.lock().unwrap_or_else(|e| e.into_inner());
        if let Some(iv) = chain.iter().find(|iv| width(iv) <= target) {
            return Ok(iv.clone());
        }
        let iv = level(k)?;
        chain.push(iv.clone());
        Ok(iv)
    }

    pub fn midpoint(&self, k: u32) -> Result<Rational> {
        let (lo, hi) = self.approx(k)?;
        Ok((lo + hi) * half())
    }
}

/// Dyadic points near the quarter and three-quarter marks. Snapping to a
/// grid of `w/16` keeps ball indices small at every precision.
fn split_points(iv: &Interval) -> (Rational, Rational) {
    let w = width(iv);
    let p = log2_floor_inv(&(&w / int(16)));
    let a = -dyadic_floor(&-(&iv.0 + &w / int(4)), p);
    let b = dyadic_floor(&(&iv.0 + &w * Rational::new(3.into(), 4.into())), p);
    (a, b)
}

/// Runs two processes with growing fuel; `true` when `a` accepts no later
/// than `b`.
fn race(a: &Semidecision, b: &Semidecision, max_fuel: u64) -> Result<bool> {
    let mut f = 16u64.min(max_fuel.max(1));
    loop {
        match (a.run(Fuel(f)), b.run(Fuel(f))) {
            (Outcome::Accepted(x), Outcome::Accepted(y)) => return Ok(x <= y),
            (Outcome::Accepted(_), Outcome::Pending) => return Ok(true),
            (Outcome::Pending, Outcome::Accepted(_)) => return Ok(false),
            _ if f >= max_fuel => return Err(Error::FuelExhausted { fuel: max_fuel }),
            _ => f = (f * 4).min(max_fuel),
        }
    }
}

/// First interval for a cut pair: `[floor, floor + 2^j]` (or `[-2^j, 2^j]`)
/// for the least `j` accepted at the least sufficient fuel.
fn bracket(lower: &LowerReal, upper: &UpperReal, floor: Option<&Rational>, max_fuel: u64) -> Result<Interval> {
    let mut f = 16u64.min(max_fuel.max(1));
    loop {
        for j in 0..64u32 {
            let s = pow2(j);
            let found = match floor {
                Some(lo) => upper.test(&(lo + &s)).accepts_within(f).then(|| (lo.clone(), lo + &s)),
                None => (upper.test(&s).accepts_within(f) && lower.test(&-&s).accepts_within(f))
                    .then(|| (-s.clone(), s.clone())),
            };
            if let Some(iv) = found {
                return Ok(iv);
            }
        }
        if f >= max_fuel {
            return Err(Error::FuelExhausted { fuel: max_fuel });
        }
        f = (f * 4).min(max_fuel);
    }
}

// ---------------------------------------------------------------- balls

/// `B(x, r)`: for a dense center the ball itself, then balls
/// `B(x_k, r - 2^-k - 2^-j)` around the approximations, then every
/// `B(dense m, q)` certified by `d(x, m) + q < r`.
pub fn ball_open(x: &MetricPoint, r: &Rational) -> OpenSet {
    let (x, r) = (x.clone(), r.clone());
    let sp = as_space(&x.space);
    let parts = Enumerator::from_steps(move |t| {
        let u = t / 2;
        if t % 2 == 0 {
            match x.cauchy {
                Cauchy::Dense(i) => {
                    if u == 0 && r.is_positive() {
                        x.space.ball_index(i, &r).into_iter().collect()
                    } else {
                        Vec::new()
                    }
                }
                Cauchy::Seq(_) => {
                    let (k, j) = PairingScheme::decode64(u);
                    let rad = &r - x.slack(k as u32) - dyadic(j as u32);
                    if rad.is_positive() {
                        x.space.ball_index(x.approx(k as u32), &rad).into_iter().collect()
                    } else {
                        Vec::new()
                    }
                }
            }
        } else {
            let (m, qk) = PairingScheme::decode(u as u128);
            let (qc, k) = PairingScheme::decode(qk);
            let q = positive_from_code(qc);
            let (_, hi) = x.distance_bounds(m, k.min(200) as u32);
            if hi + &q < r {
                x.space.ball_index(m, &q).into_iter().collect()
            } else {
                Vec::new()
            }
        }
    });
    OpenSet::new(sp, parts)
}

/// `{y : d(x, y) > r}`: the space's exterior parts around the
/// approximations, then every `B(dense m, q)` with `d(x, m) - q > r`.
pub fn exterior_open(x: &MetricPoint, r: &Rational) -> OpenSet {
    let (x, r) = (x.clone(), r.clone());
    let sp = as_space(&x.space);
    let parts = Enumerator::from_steps(move |t| {
        let u = t / 2;
        if t % 2 == 0 {
            let k = u as u32;
            x.space.exterior_parts(x.approx(k), &(&r + x.slack(k)), k)
        } else {
            let (m, qk) = PairingScheme::decode(u as u128);
            let (qc, k) = PairingScheme::decode(qk);
            let q = positive_from_code(qc);
            let (lo, _) = x.distance_bounds(m, k.min(200) as u32);
            if lo - &q > r {
                x.space.ball_index(m, &q).into_iter().collect()
            } else {
                Vec::new()
            }
        }
    });
    OpenSet::new(sp, parts)
}

/// `B̄(x, r)` as a closed set.
pub fn closed_ball_closed(x: &MetricPoint, r: &Rational) -> ClosedSet {
    ClosedSet::new(exterior_open(x, r))
}

/// `cl B(x, r)` as an overt set: a basic is hit once one of its dense
/// points is certified inside the ball.
pub fn cl_ball_overt(x: &MetricPoint, r: &Rational) -> OvertSet {
    let (x, r) = (x.clone(), r.clone());
    let sp = x.space.clone();
    OvertSet::from_probe(as_space(&x.space), move |n: BaseIndex, f: Fuel| {
        for t in 0..f.0 {
            let (j, k) = PairingScheme::decode64(t);
            let Some(p) = sp.dense_in_basic(n, j) else { continue };
            if x.distance_bounds(p, k.min(200) as u32).1 < r {
                return Outcome::Accepted(t);
            }
        }
        Outcome::Pending
    })
}

// ---------------------------------------------------------------- context

/// The structures a metric computation may draw on.
#[derive(Clone)]
pub struct MetricContext {
    pub space: Arc<dyn MetricSpace>,
    pub ercs: Option<Ercs>,
    /// Compact name of the whole space, when it is compact.
    pub ambient: Option<CompactSet>,
    /// Budget for every inner search.
    pub fuel: u64,
}

impl fmt::Debug for MetricContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MetricContext({}, fuel {})", self.space.name(), self.fuel)
    }
}

impl MetricContext {
    pub fn new(space: Arc<dyn MetricSpace>, fuel: u64) -> Self {
        MetricContext { space, ercs: None, ambient: None, fuel }
    }

    pub fn from_registered(reg: &Registered, fuel: u64) -> Result<Self> {
        Ok(MetricContext {
            space: reg.require_metric()?.clone(),
            ercs: reg.ercs.clone(),
            ambient: reg.whole_compact.clone(),
            fuel,
        })
    }

    pub fn point(&self, i: PointIndex) -> MetricPoint {
        MetricPoint::dense(self.space.clone(), i)
    }

    /// Closed-ball compacts around `x`, by the first route available:
    /// exact proper-space covers, the compact ambient, or a compact ball
    /// from the ercs.
    pub fn ball_compacts(&self, x: &MetricPoint) -> BallCompacts {
        let local = if self.space.proper_balls() || self.ambient.is_some() {
            None
        } else {
            self.ercs.as_ref().and_then(|e| compact_ball(e, x, Fuel(self.fuel)).ok())
        };
        BallCompacts { x: x.clone(), ambient: self.ambient.clone(), local }
    }
}

/// Compact names of `B̄(x, r)` for a fixed `x`.
#[derive(Clone)]
pub struct BallCompacts {
    x: MetricPoint,
    ambient: Option<CompactSet>,
    local: Option<(u32, CompactSet)>,
}

impl BallCompacts {
    pub fn get(&self, r: &Rational) -> Option<CompactSet> {
        let x = &self.x;
        let sp = x.space.clone();
        if sp.proper_balls() {
            let (x, r) = (x.clone(), r.clone());
            return Some(CompactSet::new(as_space(&sp), move |cover: &[BaseIndex], f: Fuel| {
                let kmax = if x.dense_index().is_some() { 1 } else { f.0.min(64) };
                for k in 0..kmax {
                    let rad = &r + x.slack(k as u32);
                    if sp.closed_ball_covered(x.approx(k as u32), &rad, cover) == Some(true) {
                        return Outcome::Accepted(k);
                    }
                }
                Outcome::Pending
            }));
        }
        if let Some(amb) = &self.ambient {
            return Some(intersect_closed_compact(&closed_ball_closed(x, r), amb));
        }
        match &self.local {
            Some((n, k)) if *r <= dyadic(*n) => Some(intersect_closed_compact(&closed_ball_closed(x, r), k)),
            _ => None,
        }
    }
}

// ---------------------------------------------------------------- compact balls

/// Some `n` and a compact name of `B̄(x, 2^-n)`: a compact neighbourhood
/// `x ∈ V ⊆ K` from the ercs, a ball `B(x, 2^-n)` formally inside `V`, and
/// the closed ball cut down to `K`.
pub fn compact_ball(e: &Ercs, x: &MetricPoint, fuel: Fuel) -> Result<(u32, CompactSet)> {
    let sp = x.space.clone();
    let whole = OpenSet::whole(as_space(&sp));
    let cb = compact_base(e, &x.name(), &whole, fuel)?;
    for t in 0..fuel.0 {
        let (n, k) = PairingScheme::decode64(t);
        let (n, k) = (n as u32, k as u32);
        let Some(ball) = sp.ball_index(x.approx(k), &(dyadic(n) + x.slack(k))) else { continue };
        let Some(b) = sp.decode(ball) else { continue };
        let hit =
            cb.v.listing(k as u64 + 1)
                .into_iter()
                .any(|v| v == ball || sp.decode(v).is_some_and(|bv| sp.formal_subset(&b, &bv) == Some(true)));
        if hit {
            return Ok((n, intersect_closed_compact(&closed_ball_closed(x, &dyadic(n)), &cb.k)));
        }
    }
    Err(Error::FuelExhausted { fuel: fuel.0 })
}

/// Searches for some `j` and a family member holding `B(x, 2^-j)`; the only
/// generic compact-ball search when the space has no ercs.
pub fn compact_ball_search(x: &MetricPoint, family: &Enumerator<CompactCandidate>) -> Semidecision {
    compact_neighborhood_search(&x.name(), &OpenSet::whole(as_space(&x.space)), family)
}

type BallProvider = dyn Fn(PointIndex) -> (u32, CompactSet) + Send + Sync;

/// The ercs of a metric space with compact balls `B̄(x_m, 2^-k_m)`: opens
/// `<n, i>` are `B(x_n, 2^-i)`, compacts `<m, j>` are
/// `B̄(x_m, 2^-max(k_m, j))`, and `<n, i> ≪ <m, j>` when
/// `d(x_n, x_m) + 2^-i < 2^-max(k_m, j)`.
pub fn ercs_from_compact_ball(
    space: Arc<dyn MetricSpace>,
    cb: impl Fn(PointIndex) -> (u32, CompactSet) + Send + Sync + 'static,
) -> Ercs {
    let memo: Arc<Mutex<HashMap<PointIndex, (u32, CompactSet)>>> = Arc::new(Mutex::new(HashMap::new()));
    let cb: Arc<BallProvider> = Arc::new(cb);
    let ball = {
        let memo = memo.clone();
        Arc::new(move |m: PointIndex| {
            let mut g = memo.lock().unwrap_or_else(|e| e.into_inner());
            g.entry(m).or_insert_with(|| cb(m)).clone()
        })
    };
    let sp = as_space(&space);
    let related = {
        let (space, ball) = (space.clone(), ball.clone());
        Arc::new(move |a: BaseIndex, b: BaseIndex| {
            let (n, i) = PairingScheme::decode(a.0);
            let (m, j) = PairingScheme::decode(b.0);
            if i > 4096 || j > 4096 {
                return false;
            }
            let (km, _) = ball(m);
            let d = space.distance(n, m, 64) + space.distance_error(64);
            d + dyadic(i as u32) < dyadic(km.max(j as u32))
        })
    };
    let open = {
        let (space, sp) = (space.clone(), sp.clone());
        Arc::new(move |a: BaseIndex| {
            let (n, i) = PairingScheme::decode(a.0);
            match space.ball_index(n, &dyadic(i.min(4096) as u32)) {
                Some(b) => open_of_basic(sp.clone(), b),
                None => OpenSet::empty(sp.clone()),
            }
        })
    };
    let compact = {
        let (space, ball) = (space.clone(), ball.clone());
        Arc::new(move |b: BaseIndex| {
            let (m, j) = PairingScheme::decode(b.0);
            let (km, k) = ball(m);
            let r = dyadic(km.max(j.min(4096) as u32));
            intersect_closed_compact(&closed_ball_closed(&MetricPoint::dense(space.clone(), m), &r), &k)
        })
    };
    let above = {
        let (related, ball) = (related.clone(), ball.clone());
        Arc::new(move |a: BaseIndex| {
            let (n, i) = PairingScheme::decode(a.0);
            let related = related.clone();
            // B(x_n, 2^-i) ≪ B̄(x_n, 2^-(i-1)) once i > k_n
            let first = (i >= 1 && (ball(n).0 as u128) < i).then(|| BaseIndex(PairingScheme::encode(n, i - 1)));
            let rest = Enumerator::from_fn(move |t| {
                let b = BaseIndex(t as u128);
                (Some(b) != first && related(a, b)).then_some(b)
            });
            Enumerator::interleave(vec![Enumerator::finite(first.into_iter().collect()), rest])
        })
    };
    let all = Enumerator::from_fn(|t| Some(BaseIndex(t as u128)));
    Ercs::from_parts(ErcsParts {
        space: sp,
        open,
        compact,
        above,
        decider: Some(related),
        order: all.clone(),
        query_order: all.clone(),
        compact_order: all,
        basic_of: false,
    })
}

// ---------------------------------------------------------------- radius and distance

/// The radius `ρ` of a set given as compact `K` and overt `V` that is the
/// closed ball `B̄(x, ρ)`: `ρ < q` iff `K ⊆ B(x, q)`, and `q < ρ` iff `V`
/// meets `{y : d(x, y) > q}`.
pub fn radius(ctx: &MetricContext, x: &MetricPoint, k: &CompactSet, v: &OvertSet) -> CReal {
    let (x1, x2, k, v) = (x.clone(), x.clone(), k.clone(), v.clone());
    let upper =
        UpperReal::new(
            move |q| {
                if q.is_positive() {
                    compact_subset(&k, &ball_open(&x1, q))
                } else {
                    Semidecision::never()
                }
            },
        );
    let lower = LowerReal::new(move |q| {
        if q.is_negative() {
            Semidecision::accept_at(0)
        } else {
            overt_meets(&v, &exterior_open(&x2, q))
        }
    });
    CReal::from_cuts(lower, upper, Some(Rational::zero()), ctx.fuel)
}

/// `d(x, A) = inf_{a ∈ A} d(x, a)` for nonempty located `A`: `d < q` iff the
/// overt side meets `B(x, q)`, and `q < d` iff some closed ball
/// `B̄(x, q + 2^-j)` is compactly inside the complement of the closed side.
/// On an empty `A` every precision runs out of fuel.
pub fn distance_to_located(ctx: &MetricContext, x: &MetricPoint, a: &LocatedSet) -> Result<CReal> {
    let balls = ctx.ball_compacts(x);
    if balls.get(&int(1)).is_none() && balls.local.is_none() {
        return Err(Error::Unsupported(format!("no compact closed balls in {}", ctx.space.name())));
    }
    let (x1, over, comp) = (x.clone(), a.overt.clone(), a.closed.complement.clone());
    let upper =
        UpperReal::new(
            move |q| {
                if q.is_positive() {
                    overt_meets(&over, &ball_open(&x1, q))
                } else {
                    Semidecision::never()
                }
            },
        );
    let lower = LowerReal::new(move |q| {
        if q.is_negative() {
            return Semidecision::accept_at(0);
        }
        let (q, balls, comp) = (q.clone(), balls.clone(), comp.clone());
        let procs = Enumerator::from_fn(move |j| {
            let k = balls.get(&(&q + dyadic(j as u32)))?;
            Some(compact_subset(&k, &comp))
        });
        dovetail_any(&procs)
    });
    Ok(CReal::from_cuts(lower, upper, Some(Rational::zero()), ctx.fuel))
}

// ---------------------------------------------------------------- nets

/// Net points of each level, sorted by distance to an anchor point.
struct SortedNets {
    anchor: MetricPoint,
    levels: Mutex<HashMap<u32, Arc<Vec<(Rational, PointIndex)>>>>,
}

/// Precision used for anchor distances.
const NET_PREC: u32 = 48;

impl SortedNets {
    fn new(anchor: MetricPoint) -> Self {
        SortedNets { anchor, levels: Mutex::new(HashMap::new()) }
    }

    fn level(&self, l: u32) -> Arc<Vec<(Rational, PointIndex)>> {
        let mut g = self.levels.lock().unwrap_or_else(|e| e.into_inner());
        g.entry(l)
            .or_insert_with(|| {
                let sp = &self.anchor.space;
                let c = self.anchor.approx(NET_PREC);
                let mut v: Vec<(Rational, PointIndex)> =
                    sp.net(l).into_iter().map(|p| (sp.distance(c, p, NET_PREC), p)).collect();
                v.sort();
                Arc::new(v)
            })
            .clone()
    }

    fn slack(&self) -> Rational {
        self.anchor.slack(NET_PREC) + self.anchor.space.distance_error(NET_PREC)
    }

    /// Level-`l` points whose anchor distance may lie in `[lo, hi]`.
    fn window(&self, l: u32, lo: &Rational, hi: &Rational) -> Vec<(Rational, PointIndex)> {
        let v = self.level(l);
        let s = self.slack();
        let (lo, hi) = (lo - &s, hi + &s);
        let a = v.partition_point(|(d, _)| *d < lo);
        let b = v.partition_point(|(d, _)| *d <= hi);
        v[a..b.max(a)].to_vec()
    }
}

fn has_net(sp: &Arc<dyn MetricSpace>) -> bool {
    !sp.net(0).is_empty()
}

// ---------------------------------------------------------------- nice radius

/// Deepest subdivision tried for one nested interval.
const MAX_DEPTH: u32 = 16;

/// Closed subinterval number `s` strictly inside `[lo, hi]`: depth `d >= 2`
/// splits into `2^d` pieces and skips the two outer ones.
fn subinterval(iv: &Interval, s: u64) -> Option<Interval> {
    let mut s = s;
    for d in 2..=MAX_DEPTH {
        let count = (1u64 << d) - 2;
        if s < count {
            let w = width(iv) / pow2(d);
            let a = &iv.0 + &w * int(s as i64 + 1);
            return Some((a.clone(), a + w));
        }
        s -= count;
    }
    None
}

/// Balls `B(z, q)` each holding a dense `w` with `d(x, w) < a` and
/// `d(z, w) + q < 2^-n`: every sphere point in such a ball is within
/// `2^-n` of the open ball `B(x, a)`.
fn good_balls(x: &MetricPoint, nets: Option<Arc<SortedNets>>, n: u32, a: &Rational, b: &Rational) -> OpenSet {
    let space = as_space(&x.space);
    let (x, a, b) = (x.clone(), a.clone(), b.clone());
    let sp = x.space.clone();
    let eps = dyadic(n);
    let parts = Enumerator::from_steps(move |p| {
        let good = |z: PointIndex, w: PointIndex, q: &Rational| {
            x.distance_bounds(w, NET_PREC).1 < a && sp.distance(z, w, NET_PREC) + sp.distance_error(NET_PREC) + q < eps
        };
        match &nets {
            Some(nets) => {
                let p = p as u32;
                if p > n + 8 {
                    return Vec::new();
                }
                let q = dyadic(p);
                let mut out = Vec::new();
                for (dz, z) in nets.window(p, &(&a - &q), &(&b + &q)) {
                    let ws = nets.window(p, &(&dz - &eps), &a);
                    if ws.iter().any(|&(_, w)| good(z, w, &q)) {
                        out.extend(sp.ball_index(z, &q));
                    }
                }
                out
            }
            None => {
                let (z, rest) = PairingScheme::decode(p as u128);
                let (qc, w) = PairingScheme::decode(rest);
                let q = positive_from_code(qc);
                if good(z, w, &q) {
                    sp.ball_index(z, &q).into_iter().collect()
                } else {
                    Vec::new()
                }
            }
        }
    });
    OpenSet::new(space, parts)
}

/// `[a, b] ⊆ U_n`: the annulus `{y ∈ K : a <= d(x, y) <= b}` is covered by
/// good balls.
fn annulus_certificate(
    x: &MetricPoint,
    k: &CompactSet,
    nets: Option<Arc<SortedNets>>,
    n: u32,
    a: &Rational,
    b: &Rational,
) -> Semidecision {
    let sp = as_space(&x.space);
    let outside = open_union(sp, &[ball_open(x, a), exterior_open(x, b)]);
    let annulus = intersect_closed_compact(&ClosedSet::new(outside), k);
    compact_subset(&annulus, &good_balls(x, nets, n, a, b))
}

/// A radius `r'` in `(0, r)` with `cl B(x, r') = B̄(x, r')`, where `K` names
/// `B̄(x, r)`. Stage `n` picks a closed subinterval, strictly inside the
/// previous one and at most a quarter of its width, whose radii all lie
/// in `U_n`; the limit lies in every `U_n`.
pub fn nice_radius(ctx: &MetricContext, x: &MetricPoint, r: &Rational, k: &CompactSet) -> Result<CReal> {
    if !r.is_positive() {
        return Err(Error::Unsupported("nice radius needs r > 0".into()));
    }
    let nets = has_net(&ctx.space).then(|| Arc::new(SortedNets::new(x.clone())));
    let fuel = ctx.fuel;
    let stage = {
        let (x, k) = (x.clone(), k.clone());
        Arc::new(move |n: u32, iv: &Interval| -> Result<Interval> {
            let (x, k, nets, iv) = (x.clone(), k.clone(), nets.clone(), iv.clone());
            let cands = Enumerator::from_fn(move |s| {
                let (a, b) = subinterval(&iv, s)?;
                let p = annulus_certificate(&x, &k, nets.clone(), n, &a, &b);
                Some(((a, b), p))
            });
            let mut f = 256u64.min(fuel);
            loop {
                if let Some((iv, _)) = dovetail_first(&cands, Fuel(f)) {
                    return Ok(iv);
                }
                if f >= fuel {
                    return Err(Error::FuelExhausted { fuel });
                }
                f = (f * 4).min(fuel);
            }
        })
    };
    let first = (Rational::zero(), r.clone());
    let s1 = stage.clone();
    Ok(CReal::refining(move || s1(0, &first), move |iv, i| stage(i as u32, iv)))
}

// ---------------------------------------------------------------- Hausdorff distance

/// A net point with bounds on its distance to the target set.
#[derive(Clone, Debug)]
struct Cell {
    z: PointIndex,
    lo: Rational,
    hi: Rational,
}

fn ball_hit(sp: &Arc<dyn MetricSpace>, v: &OvertSet, z: PointIndex, r: &Rational, fuel: u64) -> bool {
    r.is_positive() && sp.ball_index(z, r).is_some_and(|n| v.probe(n, Fuel(fuel)).is_accepted())
}

/// Fuel for the bound-tightening checks inside branch and bound; a miss
/// only costs precision.
fn inner_fuel(ctx: &MetricContext) -> u64 {
    ctx.fuel.min(INNER_FUEL)
}

const INNER_FUEL: u64 = 4096;

/// `B̄(z, r)` is certified inside the open set.
fn ball_inside(ctx: &MetricContext, z: PointIndex, r: &Rational, u: &OpenSet) -> bool {
    match ctx.ball_compacts(&ctx.point(z)).get(r) {
        Some(k) => compact_subset(&k, u).accepts_within(inner_fuel(ctx)),
        None => false,
    }
}

/// Bounds on `sup_{a ∈ A} d(a, B)` of width at most `2^-k`, by branch and
/// bound over the nets: cells far below the best certified lower bound
/// are dropped, cells certified disjoint from `A` too.
fn directed_hausdorff(
    ctx: &MetricContext,
    nets: &SortedNets,
    a: &LocatedSet,
    b: &LocatedSet,
    k: u32,
) -> Result<Interval> {
    let sp = &ctx.space;
    let fuel = ctx.fuel;
    let target = dyadic(k);
    let mut cells: Vec<Cell> = Vec::new();
    for (_, z) in nets.level(0).iter() {
        let j = (0..64u32).find(|&j| ball_hit(sp, &b.overt, *z, &pow2(j), fuel));
        let j = j.ok_or(Error::FuelExhausted { fuel })?;
        cells.push(Cell { z: *z, lo: Rational::zero(), hi: pow2(j) });
    }
    let mut level = 0u32;
    loop {
        let rho = dyadic(level);
        cells.sort_by(|p, q| q.hi.cmp(&p.hi).then(p.z.cmp(&q.z)));
        let mut glo = Rational::zero();
        let mut kept: Vec<Cell> = Vec::new();
        for mut c in cells {
            if &c.hi + &rho < glo {
                continue;
            }
            let hit = ball_hit(sp, &a.overt, c.z, &rho, inner_fuel(ctx));
            if !hit && ball_inside(ctx, c.z, &rho, &a.closed.complement) {
                continue;
            }
            refine_cell(ctx, &mut c, &b.overt, &b.closed.complement, level);
            if hit {
                glo = max_r(&glo, &(&c.lo - &rho));
            }
            kept.push(c);
        }
        kept.retain(|c| &c.hi + &rho >= glo);
        let ghi = kept.iter().map(|c| &c.hi + &rho).max().ok_or(Error::FuelExhausted { fuel })?;
        if &ghi - &glo <= target {
            return Ok((glo, ghi));
        }
        if level > k + 12 {
            return Err(Error::FuelExhausted { fuel });
        }
        let reach = &rho + dyadic(level + 1);
        let mut children: HashMap<PointIndex, Cell> = HashMap::new();
        for p in &kept {
            let dp = sp.distance(nets.anchor.approx(NET_PREC), p.z, NET_PREC);
            for (_, z) in nets.window(level + 1, &(&dp - &reach), &(&dp + &reach)) {
                let d = sp.distance(p.z, z, NET_PREC) + sp.distance_error(NET_PREC);
                if d >= reach {
                    continue;
                }
                let lo = max_r(&(&p.lo - &d), &Rational::zero());
                let hi = &p.hi + &d;
                children
                    .entry(z)
                    .and_modify(|c| {
                        c.lo = max_r(&c.lo, &lo);
                        c.hi = min_r(&c.hi, &hi);
                    })
                    .or_insert(Cell { z, lo, hi });
            }
        }
        cells = children.into_values().collect();
        level += 1;
    }
}

/// Narrows `d(z, B)` to width `2^-level` where the fuel allows: overt hits
/// lower the upper bound, compact balls inside `B^c` raise the lower one.
fn refine_cell(ctx: &MetricContext, c: &mut Cell, over: &OvertSet, comp: &OpenSet, level: u32) {
    let rho = dyadic(level);
    for _ in 0..16 {
        if &c.hi - &c.lo <= rho {
            return;
        }
        let m = dyadic_floor(&((&c.lo + &c.hi) * half()), level + 4);
        if ball_hit(&ctx.space, over, c.z, &m, inner_fuel(ctx)) {
            c.hi = m;
            continue;
        }
        let r2 = &m - &rho / int(4);
        if r2 > c.lo && ball_inside(ctx, c.z, &r2, comp) {
            c.lo = r2;
            continue;
        }
        return;
    }
}

/// Hausdorff distance between nonempty located sets of a compact metric
/// space with a net: the larger of the two directed distances.
pub fn hausdorff_distance(ctx: &MetricContext, a: &LocatedSet, b: &LocatedSet) -> Result<CReal> {
    let net0 = ctx.space.net(0);
    let Some(&anchor) = net0.first() else {
        return Err(Error::Unsupported(format!("{} has no finite nets", ctx.space.name())));
    };
    let nets = Arc::new(SortedNets::new(ctx.point(anchor)));
    let (ctx, a, b) = (ctx.clone(), a.clone(), b.clone());
    let level = move |k: u32| -> Result<Interval> {
        let (l1, h1) = directed_hausdorff(&ctx, &nets, &a, &b, k)?;
        let (l2, h2) = directed_hausdorff(&ctx, &nets, &b, &a, k)?;
        Ok((max_r(&l1, &l2), max_r(&h1, &h2)))
    };
    Ok(CReal::from_levels(level))
}
