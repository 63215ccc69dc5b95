//! Open, closed, compact, overt and located subsets of a [`Space`], and the
//! lattice and duality operations between them.
//!
//! Compact and overt sets are stored as their semideciders (`K ⊆ ⋃F` for
//! finite `F`, and `U_n ∩ V ≠ ∅`); the cover and hit enumerations are derived
//! by dovetailing, so both views are available.

use std::fmt;
use std::sync::Arc;

use crate::kernel::{min_upset_pair, Enumerator, Fuel, Outcome, PairingScheme, Semidecision};
use crate::spaces::{BaseIndex, Basic, PointName, Space};

/// Union of the enumerated basics.
#[derive(Clone)]
pub struct OpenSet {
    pub space: Arc<dyn Space>,
    pub parts: Enumerator<BaseIndex>,
}

impl fmt::Debug for OpenSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "OpenSet({})", self.space.name())
    }
}

impl OpenSet {
    pub fn new(space: Arc<dyn Space>, parts: Enumerator<BaseIndex>) -> Self {
        OpenSet { space, parts }
    }

    pub fn empty(space: Arc<dyn Space>) -> Self {
        OpenSet::new(space, Enumerator::empty())
    }

    pub fn whole(space: Arc<dyn Space>) -> Self {
        let parts = space.search_order();
        OpenSet::new(space, parts)
    }

    pub fn of_basics(space: Arc<dyn Space>, ns: Vec<BaseIndex>) -> Self {
        OpenSet::new(space, Enumerator::finite(ns))
    }

    pub fn listing(&self, stage: u64) -> Vec<BaseIndex> {
        self.parts.listing(stage)
    }

    /// Pairwise basic meets of the two part enumerations.
    pub fn intersection(&self, other: &OpenSet) -> OpenSet {
        let (a, b, sp) = (self.parts.clone(), other.parts.clone(), self.space.clone());
        let parts = Enumerator::from_steps(move |t| {
            let (s1, s2) = PairingScheme::decode64(t);
            let mut out = Vec::new();
            for p in a.batch(s1) {
                for q in b.batch(s2) {
                    out.extend(sp.basic_meet(p, q));
                }
            }
            out
        });
        OpenSet::new(self.space.clone(), parts)
    }
}

pub fn open_of_basic(space: Arc<dyn Space>, n: BaseIndex) -> OpenSet {
    OpenSet::of_basics(space, vec![n])
}

/// Interleaved union; the empty list gives the empty open.
pub fn open_union(space: Arc<dyn Space>, us: &[OpenSet]) -> OpenSet {
    OpenSet::new(space, Enumerator::interleave(us.iter().map(|u| u.parts.clone()).collect()))
}

/// Complement of an open set.
#[derive(Clone, Debug)]
pub struct ClosedSet {
    pub complement: OpenSet,
}

impl ClosedSet {
    pub fn new(complement: OpenSet) -> Self {
        ClosedSet { complement }
    }

    pub fn whole(space: Arc<dyn Space>) -> Self {
        ClosedSet::new(OpenSet::empty(space))
    }

    pub fn empty(space: Arc<dyn Space>) -> Self {
        ClosedSet::new(OpenSet::whole(space))
    }

    pub fn space(&self) -> Arc<dyn Space> {
        self.complement.space.clone()
    }
}

type CoverFn = dyn Fn(&[BaseIndex], Fuel) -> Outcome + Send + Sync;

/// A compact set, given by the semidecider "`K ⊆ ⋃ F`" for finite `F`.
#[derive(Clone)]
pub struct CompactSet {
    pub space: Arc<dyn Space>,
    cover: Arc<CoverFn>,
}

impl fmt::Debug for CompactSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CompactSet({})", self.space.name())
    }
}

impl CompactSet {
    /// `cover` must be monotone in fuel and in `F` (supersets stay covered).
    pub fn new(space: Arc<dyn Space>, cover: impl Fn(&[BaseIndex], Fuel) -> Outcome + Send + Sync + 'static) -> Self {
        CompactSet { space, cover: Arc::new(cover) }
    }

    pub fn empty(space: Arc<dyn Space>) -> Self {
        CompactSet::new(space, |_, _| Outcome::Accepted(0))
    }

    /// Runs the cover test; an acceptance at stage `s` needs fuel above `s`.
    pub fn covered_by(&self, cover: &[BaseIndex], fuel: Fuel) -> Outcome {
        if fuel.0 == 0 {
            return Outcome::Pending;
        }
        match (self.cover)(cover, fuel) {
            Outcome::Accepted(s) if s < fuel.0 => Outcome::Accepted(s),
            _ => Outcome::Pending,
        }
    }

    /// Every finite cover, in dovetail order. Step `<c, j>` emits the set of
    /// search-order positions given by the bits of `c` when its cover test
    /// first accepts at stage `j`.
    pub fn covers(&self) -> Enumerator<Vec<BaseIndex>> {
        let k = self.clone();
        let order = self.space.search_order();
        Enumerator::from_fn(move |t| {
            let (c, j) = PairingScheme::decode64(t);
            let width = 64 - c.leading_zeros() as usize;
            let items = order.prefix(width, 4 * width as u64 + 4);
            if items.len() < width {
                return None;
            }
            let f: Vec<BaseIndex> = (0..width).filter(|&i| c >> i & 1 == 1).map(|i| items[i]).collect();
            (k.covered_by(&f, Fuel(j + 1)) == Outcome::Accepted(j)).then_some(f)
        })
    }
}

type ProbeFn = dyn Fn(BaseIndex, Fuel) -> Outcome + Send + Sync;

/// An overt set: the semidecider "`U_n` meets `V`", with its hit enumeration.
#[derive(Clone)]
pub struct OvertSet {
    pub space: Arc<dyn Space>,
    probe: Arc<ProbeFn>,
    pub hits: Enumerator<BaseIndex>,
}

impl fmt::Debug for OvertSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "OvertSet({})", self.space.name())
    }
}

impl OvertSet {
    /// From a monotone probe; hits are every basic in search order, emitted
    /// at the stage its probe accepts.
    pub fn from_probe(
        space: Arc<dyn Space>,
        probe: impl Fn(BaseIndex, Fuel) -> Outcome + Send + Sync + 'static,
    ) -> Self {
        let probe: Arc<ProbeFn> = Arc::new(probe);
        let order = space.search_order();
        let p = probe.clone();
        let hits = Enumerator::from_steps(move |t| {
            let (s, j) = PairingScheme::decode64(t);
            order
                .batch(s)
                .into_iter()
                .filter(|&n| matches!(p(n, Fuel(j + 1)), Outcome::Accepted(st) if st == j))
                .collect()
        });
        OvertSet { space, probe, hits }
    }

    /// From a hit enumeration; a basic is probed positive once a listed hit
    /// is formally inside it.
    pub fn from_hits(space: Arc<dyn Space>, hits: Enumerator<BaseIndex>) -> Self {
        let (h, sp) = (hits.clone(), space.clone());
        let probe = move |n: BaseIndex, f: Fuel| {
            let Some(target) = sp.decode(n) else { return Outcome::Pending };
            for s in 0..f.0 {
                for m in h.batch(s) {
                    if m == n || sp.decode(m).is_some_and(|b| sp.formal_subset(&b, &target) == Some(true)) {
                        return Outcome::Accepted(s);
                    }
                }
            }
            Outcome::Pending
        };
        OvertSet { space, probe: Arc::new(probe), hits }
    }

    pub fn empty(space: Arc<dyn Space>) -> Self {
        OvertSet { space, probe: Arc::new(|_, _| Outcome::Pending), hits: Enumerator::empty() }
    }

    pub fn probe(&self, n: BaseIndex, fuel: Fuel) -> Outcome {
        if fuel.0 == 0 {
            return Outcome::Pending;
        }
        match (self.probe)(n, fuel) {
            Outcome::Accepted(s) if s < fuel.0 => Outcome::Accepted(s),
            _ => Outcome::Pending,
        }
    }
}

/// A closed set together with an overt name of the same set.
#[derive(Clone, Debug)]
pub struct LocatedSet {
    pub closed: ClosedSet,
    pub overt: OvertSet,
}

impl LocatedSet {
    pub fn new(closed: ClosedSet, overt: OvertSet) -> Self {
        LocatedSet { closed, overt }
    }

    pub fn empty(space: Arc<dyn Space>) -> Self {
        LocatedSet::new(ClosedSet::empty(space.clone()), OvertSet::empty(space))
    }

    pub fn space(&self) -> Arc<dyn Space> {
        self.overt.space.clone()
    }

    /// A basic probed positive by the overt side and formally inside a
    /// complement part listed by `stage`; `None` means coherent so far.
    pub fn coherence_violation(&self, candidates: &[BaseIndex], stage: u64) -> Option<BaseIndex> {
        let sp = self.space();
        let comp: Vec<Basic> = self.closed.complement.listing(stage).iter().filter_map(|&m| sp.decode(m)).collect();
        candidates.iter().copied().find(|&n| {
            self.overt.probe(n, Fuel(stage)).is_accepted()
                && sp.decode(n).is_some_and(|b| comp.iter().any(|c| sp.formal_subset(&b, c) == Some(true)))
        })
    }
}

/// Whether basic `a` is `b` or formally inside it.
fn matches_inside(sp: &dyn Space, a: (BaseIndex, &Basic), b: (BaseIndex, &Basic)) -> bool {
    a.0 == b.0 || sp.formal_subset(a.1, b.1) == Some(true)
}

/// Decoded batches, filled on demand.
struct Decoded<'a> {
    src: &'a Enumerator<BaseIndex>,
    sp: &'a dyn Space,
    steps: Vec<Vec<(BaseIndex, Basic)>>,
}

impl<'a> Decoded<'a> {
    fn new(src: &'a Enumerator<BaseIndex>, sp: &'a dyn Space) -> Self {
        Decoded { src, sp, steps: Vec::new() }
    }

    fn get(&mut self, s: u64) -> &[(BaseIndex, Basic)] {
        while self.steps.len() as u64 <= s {
            let k = self.steps.len() as u64;
            let b = self.src.batch(k).into_iter().filter_map(|n| self.sp.decode(n).map(|d| (n, d))).collect();
            self.steps.push(b);
        }
        &self.steps[s as usize]
    }
}

/// Semidecides `x ∈ U`: some neighbourhood of `x` equals or lies formally
/// inside some part of `U`. The stage is the schedule step `<a, b>` pairing
/// neighbourhood step `a` with part step `b`.
pub fn member_open(x: &PointName, u: &OpenSet) -> Semidecision {
    let (x, u) = (x.clone(), u.clone());
    Semidecision::new(move |f| {
        let sp = x.space.as_ref();
        let mut xs = Decoded::new(&x.neighborhoods, sp);
        let mut us = Decoded::new(&u.parts, sp);
        for t in 0..f.0 {
            let (a, b) = PairingScheme::decode64(t);
            if xs.get(a).is_empty() {
                continue;
            }
            let xa: Vec<(BaseIndex, Basic)> = xs.get(a).to_vec();
            let ub = us.get(b);
            if xa.iter().any(|(n, bn)| ub.iter().any(|(m, bm)| matches_inside(sp, (*n, bn), (*m, bm)))) {
                return Outcome::Accepted(t);
            }
        }
        Outcome::Pending
    })
}

/// Semidecides `K ⊆ U`: some listing prefix of `U.parts` is a cover of `K`.
/// The stage is the least `<s, j>` with `K.covered_by(listing(s), j)`.
pub fn compact_subset(k: &CompactSet, u: &OpenSet) -> Semidecision {
    let (k, u) = (k.clone(), u.clone());
    Semidecision::new(move |f| {
        min_upset_pair(f, |s, j| u.parts.with_listing(s, |ps| k.covered_by(ps, Fuel(j)).is_accepted()))
    })
}

/// Semidecides `V ∩ U ≠ ∅` by probing every listed part of `U`; the stage
/// is the least `<s, j>` with a part listed by `s` probed positive with
/// fuel `j`.
pub fn overt_meets(v: &OvertSet, u: &OpenSet) -> Semidecision {
    let (v, u) = (v.clone(), u.clone());
    Semidecision::new(move |f| {
        let f128 = f.0 as u128;
        let mut best: Option<u128> = None;
        let mut s: u128 = 0;
        // part emitted at step `s` is listed from stage `s + 1`
        while PairingScheme::encode(s + 1, 0) < f128 {
            if best.is_some_and(|b| PairingScheme::encode(s + 1, 0) >= b) {
                break;
            }
            let jmax = largest_j(s + 1, f128);
            for n in u.parts.batch(s as u64) {
                if let Outcome::Accepted(st) = v.probe(n, Fuel(jmax as u64)) {
                    let t = PairingScheme::encode(s + 1, st as u128 + 1);
                    if best.is_none_or(|b| t < b) {
                        best = Some(t);
                    }
                }
            }
            s += 1;
        }
        match best {
            Some(t) => Outcome::Accepted(t as u64),
            None => Outcome::Pending,
        }
    })
}

fn largest_j(a: u128, f: u128) -> u128 {
    let (mut lo, mut hi) = (0u128, f);
    while lo < hi {
        let mid = lo + (hi - lo).div_ceil(2);
        if PairingScheme::encode(a, mid) < f {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    lo
}

/// `V ⊄ A`, i.e. `V` meets the complement of `A`.
pub fn not_subset(v: &OvertSet, a: &ClosedSet) -> Semidecision {
    overt_meets(v, &a.complement)
}

/// `A ∩ K`: `F` covers it when `K ⊆ ⋃F ∪ A^c`.
pub fn intersect_closed_compact(a: &ClosedSet, k: &CompactSet) -> CompactSet {
    let (a, k) = (a.clone(), k.clone());
    let sp = k.space.clone();
    CompactSet::new(sp.clone(), move |f: &[BaseIndex], fuel| {
        let u = open_union(sp.clone(), &[OpenSet::of_basics(sp.clone(), f.to_vec()), a.complement.clone()]);
        compact_subset(&k, &u).run(fuel)
    })
}

/// `K1 ∪ K2`: `F` covers it when it covers both; the stage is the later one.
pub fn union_compact(k1: &CompactSet, k2: &CompactSet) -> CompactSet {
    let (a, b) = (k1.clone(), k2.clone());
    CompactSet::new(k1.space.clone(), move |f: &[BaseIndex], fuel| {
        match (a.covered_by(f, fuel), b.covered_by(f, fuel)) {
            (Outcome::Accepted(x), Outcome::Accepted(y)) => Outcome::Accepted(x.max(y)),
            _ => Outcome::Pending,
        }
    })
}
