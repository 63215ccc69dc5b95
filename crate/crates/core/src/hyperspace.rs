//! The hyperspace of located sets over an ercs: bit specifications, their
//! consistency, translations between located sets, specs and truth
//! sequences, and a compactness search quantifying over all located sets.

use std::fmt;
use std::sync::Arc;

use crate::ercs::Ercs;
use crate::error::{Error, Result};
use crate::kernel::{
    dovetail_any, dovetail_first, min_monotone_pair, Enumerator, Fuel, Outcome, PairingScheme, Semidecision,
};
use crate::sets::{
    compact_subset, not_subset, open_of_basic, open_union, overt_meets, ClosedSet, CompactSet, LocatedSet, OpenSet,
    OvertSet,
};
use crate::spaces::BaseIndex;

type BitFn = dyn Fn(BaseIndex) -> bool + Send + Sync;

/// Bits `p(n)` indexed by the open indices of an ercs.
#[derive(Clone)]
pub enum SpecBits {
    Total(Arc<BitFn>),
    /// Only the listed indices are known; the list is the query log.
    Prefix(Vec<(BaseIndex, bool)>),
}

impl fmt::Debug for SpecBits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpecBits::Total(_) => f.write_str("SpecBits::Total(..)"),
            SpecBits::Prefix(v) => write!(f, "SpecBits::Prefix({v:?})"),
        }
    }
}

impl SpecBits {
    pub fn total(bit: impl Fn(BaseIndex) -> bool + Send + Sync + 'static) -> Self {
        SpecBits::Total(Arc::new(bit))
    }

    pub fn zero() -> Self {
        SpecBits::total(|_| false)
    }

    pub fn bit(&self, n: BaseIndex) -> Option<bool> {
        match self {
            SpecBits::Total(f) => Some(f(n)),
            SpecBits::Prefix(v) => v.iter().find(|(m, _)| *m == n).map(|&(_, b)| b),
        }
    }

    fn domain(&self, e: &Ercs) -> Enumerator<BaseIndex> {
        match self {
            SpecBits::Total(_) => e.order.clone(),
            SpecBits::Prefix(v) => Enumerator::finite(v.iter().map(|&(n, _)| n).collect()),
        }
    }

    fn with_bit(&self, e: &Ercs, b: bool) -> Enumerator<BaseIndex> {
        let p = self.clone();
        self.domain(e).filter(move |&n| p.bit(n) == Some(b))
    }
}

/// `p(n) = 1`, `U_n ≪ B_k` and `B_k ⊆ ⋃ cover` with every cover bit 0: no
/// located set realizes such a `p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConsistencyCondition {
    pub n: BaseIndex,
    pub k: BaseIndex,
    pub cover: Vec<BaseIndex>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Refutation {
    Refuted { cond: ConsistencyCondition, stage: u64 },
    NoneYet,
}

impl Refutation {
    pub fn is_refuted(&self) -> bool {
        matches!(self, Refutation::Refuted { .. })
    }
}

/// Searches for a violated condition. Step `<a, b>` takes the `a`-th pair
/// `(n, k)` with `p(n) = 1` and `U_n ≪ B_k`, and asks whether the zero bits
/// listed by stage `b` cover `B_k` at fuel `b`.
pub fn consistency_refute(e: &Ercs, p: &SpecBits, fuel: Fuel) -> Refutation {
    let e1 = e.clone();
    let pairs = p.with_bit(e, true).flat_product(move |&n| e1.above(n));
    let zeros = p.with_bit(e, false);
    let pair_at = |a: u64, b: u64| pairs.with_listing(b, |xs| xs.get(a as usize).copied());
    let covered = |k: BaseIndex, b: u64| zeros.with_listing(b, |zs| e.compact(k).covered_by(zs, Fuel(b)).is_accepted());
    let hit = |a: u64, b: u64| pair_at(a, b).is_some_and(|(_, k)| covered(k, b));
    match min_monotone_pair(fuel, hit) {
        Outcome::Accepted(t) => {
            let (a, b) = PairingScheme::decode64(t);
            let (n, k) = pair_at(a, b).expect("accepted pair is listed");
            let cover = minimal_cover(&e.compact(k), &zeros.listing(b), Fuel(b));
            Refutation::Refuted { cond: ConsistencyCondition { n, k, cover }, stage: t }
        }
        Outcome::Pending => Refutation::NoneYet,
    }
}

/// Shortest covering prefix, then greedy removal.
fn minimal_cover(k: &CompactSet, zs: &[BaseIndex], fuel: Fuel) -> Vec<BaseIndex> {
    let ok = |c: &[BaseIndex]| k.covered_by(c, fuel).is_accepted();
    let (mut lo, mut hi) = (0usize, zs.len());
    while lo < hi {
        let mid = (lo + hi) / 2;
        if ok(&zs[..mid]) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    let mut cover = zs[..lo].to_vec();
    let mut i = cover.len();
    while i > 0 {
        i -= 1;
        let mut trial = cover.clone();
        trial.remove(i);
        if ok(&trial) {
            cover = trial;
        }
    }
    cover
}

/// Re-checks a refutation from scratch: the bits, `k` among the first
/// `fuel` partners of `n` (or the instance decider), and the cover.
pub fn verify_condition(e: &Ercs, p: &SpecBits, c: &ConsistencyCondition, fuel: Fuel) -> bool {
    let bits = p.bit(c.n) == Some(true) && c.cover.iter().all(|&m| p.bit(m) == Some(false));
    let related = match e.related(c.n, c.k) {
        Some(r) => r,
        None => e.above(c.n).listing(fuel.0).contains(&c.k),
    };
    bits && related && e.compact(c.k).covered_by(&c.cover, fuel).is_accepted()
}

/// One of Kleene's three truth values, with the stage at which it was
/// observed; `Bottom` is silence so far.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Truth {
    One(u64),
    Zero(u64),
    Bottom,
}

type EntryFn = dyn Fn(BaseIndex, Fuel) -> Truth + Send + Sync;

/// A sequence in `T^ω`; entries are fuel-monotone.
#[derive(Clone)]
pub struct TruthSequence {
    entry: Arc<EntryFn>,
}

impl fmt::Debug for TruthSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("TruthSequence(..)")
    }
}

impl TruthSequence {
    pub fn new(entry: impl Fn(BaseIndex, Fuel) -> Truth + Send + Sync + 'static) -> Self {
        TruthSequence { entry: Arc::new(entry) }
    }

    /// Known bits at stage 0; unknown prefix bits stay silent.
    pub fn from_bits(p: &SpecBits) -> Self {
        let p = p.clone();
        TruthSequence::new(move |n, f| match (f.0, p.bit(n)) {
            (0, _) | (_, None) => Truth::Bottom,
            (_, Some(true)) => Truth::One(0),
            (_, Some(false)) => Truth::Zero(0),
        })
    }

    pub fn entry(&self, n: BaseIndex, fuel: Fuel) -> Truth {
        (self.entry)(n, fuel)
    }

    fn one(&self, n: BaseIndex) -> Semidecision {
        let t = self.clone();
        Semidecision::new(move |f| match t.entry(n, f) {
            Truth::One(s) => Outcome::Accepted(s),
            _ => Outcome::Pending,
        })
    }
}

/// `1` where `A` meets `U_n`, `0` where some `B_k` above `U_n` misses `A`.
pub fn spec_from_located(e: &Ercs, a: &LocatedSet) -> TruthSequence {
    let (e, a) = (e.clone(), a.clone());
    TruthSequence::new(move |n, f| {
        let one = overt_meets(&a.overt, &e.open(n)).run(f);
        let (e2, comp) = (e.clone(), a.closed.complement.clone());
        let zero = dovetail_any(&e.above(n).map(move |k| compact_subset(&e2.compact(k), &comp))).run(f);
        match (one, zero) {
            (Outcome::Accepted(s), Outcome::Accepted(z)) if z < s => Truth::Zero(z),
            (Outcome::Accepted(s), _) => Truth::One(s),
            (_, Outcome::Accepted(z)) => Truth::Zero(z),
            _ => Truth::Bottom,
        }
    })
}

/// Complement from the zeros; `U` is hit when some `n` with entry 1 has a
/// `B_l` above it inside `U`.
pub fn located_from_truth(e: &Ercs, t: &TruthSequence) -> LocatedSet {
    let space = e.space.clone();
    let (e1, t1) = (e.clone(), t.clone());
    // index `i` of the order is emitted at the first step its zero is seen
    let zero_idx = Enumerator::from_steps(move |s| {
        let (i, j) = PairingScheme::decode64(s);
        let Some(app) = e1.order.appearance(i as usize, j) else { return Vec::new() };
        let n = e1.order.with_listing(j, |xs| xs[i as usize]);
        match t1.entry(n, Fuel(j)) {
            Truth::Zero(z) if j == (z + 1).max(app) => vec![n],
            _ => Vec::new(),
        }
    });
    let parts = if e.basic_of {
        zero_idx
    } else {
        let e2 = e.clone();
        zero_idx.flat_product(move |&n| e2.open(n).parts).map(|(_, u)| u)
    };
    let closed = ClosedSet::new(OpenSet::new(space.clone(), parts));
    let relation = tight_relation(e);
    let (e3, t3, sp) = (e.clone(), t.clone(), space.clone());
    let overt = OvertSet::from_probe(space, move |u, f| {
        let target = open_of_basic(sp.clone(), u);
        let (e4, t4) = (e3.clone(), t3.clone());
        let cands = relation
            .map(move |(n, l)| ((n, l), Semidecision::both(&t4.one(n), &compact_subset(&e4.compact(l), &target))));
        match dovetail_first(&cands, f) {
            Some((_, s)) => Outcome::Accepted(s),
            None => Outcome::Pending,
        }
    });
    LocatedSet::new(closed, overt)
}

/// The relation with each `n`'s tightest partner interleaved ahead, so
/// useful pairs appear at a linear rather than quadratic stage.
fn tight_relation(e: &Ercs) -> Enumerator<(BaseIndex, BaseIndex)> {
    let e1 = e.clone();
    let order = e.order.clone();
    let tight = Enumerator::from_steps(move |s| {
        order.batch(s).into_iter().filter_map(|n| e1.above(n).prefix(1, 8).first().map(|&k| (n, k))).collect()
    });
    Enumerator::interleave(vec![tight, e.relation()])
}

/// The located set named by a consistent spec.
pub fn located_from_spec(e: &Ercs, p: &SpecBits) -> LocatedSet {
    located_from_truth(e, &TruthSequence::from_bits(p))
}

/// Semidecides `A ≠ B`.
pub fn located_not_equal(a: &LocatedSet, b: &LocatedSet) -> Semidecision {
    Semidecision::either(&not_subset(&a.overt, &b.closed), &not_subset(&b.overt, &a.closed))
}

type QueryFn = dyn Fn(&SpecBits, Fuel) -> Outcome + Send + Sync;

/// Open predicates on located sets, read off a spec prefix.
#[derive(Clone)]
pub enum Predicate {
    /// `A ⊆ U`
    Subset(OpenSet),
    /// `A ∩ U ≠ ∅`
    Meets(OpenSet),
    /// `A = ∅` or the inner predicate.
    IsEmptyOr(Box<Predicate>),
    And(Vec<Predicate>),
    Or(Vec<Predicate>),
    /// A raw procedure on the prefix; it must be monotone in bits and fuel.
    Query(Arc<QueryFn>),
}

impl fmt::Debug for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Predicate::Subset(_) => f.write_str("Subset(..)"),
            Predicate::Meets(_) => f.write_str("Meets(..)"),
            Predicate::IsEmptyOr(p) => write!(f, "IsEmptyOr({p:?})"),
            Predicate::And(ps) => write!(f, "And({ps:?})"),
            Predicate::Or(ps) => write!(f, "Or({ps:?})"),
            Predicate::Query(_) => f.write_str("Query(..)"),
        }
    }
}

impl Predicate {
    /// Evaluates on the located set a prefix describes. `A ⊆ U` uses the
    /// whole space: `X ⊆ U ∪ ⋃ zeros`. `A ∩ U ≠ ∅` needs a one bit `n` and
    /// `U_n ≪ B_l ⊆ U`.
    pub fn eval(&self, e: &Ercs, whole: &CompactSet, p: &SpecBits, fuel: Fuel) -> Outcome {
        match self {
            Predicate::Subset(u) => {
                let mut us: Vec<OpenSet> = vec![u.clone()];
                let zeros = p.with_bit(e, false).listing(1);
                if e.basic_of {
                    us.push(OpenSet::of_basics(e.space.clone(), zeros));
                } else {
                    us.extend(zeros.into_iter().map(|n| e.open(n)));
                }
                compact_subset(whole, &open_union(e.space.clone(), &us)).run(fuel)
            }
            Predicate::Meets(u) => {
                let (e1, e2, u) = (e.clone(), e.clone(), u.clone());
                let pairs = p.with_bit(e, true).flat_product(move |&n| e1.above(n));
                dovetail_any(&pairs.map(move |(_, l)| compact_subset(&e2.compact(l), &u))).run(fuel)
            }
            Predicate::IsEmptyOr(q) => {
                let empty = Predicate::Subset(OpenSet::empty(e.space.clone()));
                Predicate::Or(vec![empty, (**q).clone()]).eval(e, whole, p, fuel)
            }
            Predicate::And(ps) => {
                let mut stage = 0;
                for q in ps {
                    match q.eval(e, whole, p, fuel) {
                        Outcome::Accepted(s) => stage = stage.max(s),
                        Outcome::Pending => return Outcome::Pending,
                    }
                }
                Outcome::Accepted(stage)
            }
            Predicate::Or(ps) => ps
                .iter()
                .filter_map(|q| q.eval(e, whole, p, fuel).stage())
                .min()
                .map_or(Outcome::Pending, Outcome::Accepted),
            Predicate::Query(f) => f(p, fuel),
        }
    }
}

/// Outcome of the compactness search. `depth` is the deepest node closed
/// in the accepting round.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ForallReport {
    pub outcome: Outcome,
    pub depth: Option<u32>,
    pub rounds: u32,
    pub nodes: u64,
}

/// Inner fuel per node: `INNER_BASE`, doubled every four rounds.
const INNER_BASE: u64 = 128;
/// Depth limit added per round.
const DEPTH_STEP: usize = 2;

/// First `d` distinct indices of the query order, fewer if it runs dry.
fn query_list(e: &Ercs, d: usize) -> Vec<BaseIndex> {
    let mut stage = d as u64 + 1;
    loop {
        let mut out: Vec<BaseIndex> = Vec::new();
        for n in e.query_order.listing(stage) {
            if !out.contains(&n) {
                out.push(n);
            }
        }
        if out.len() >= d || stage > 4 * d as u64 + 64 {
            out.truncate(d);
            return out;
        }
        stage *= 2;
    }
}

enum Node {
    Closed,
    Open,
    OutOfFuel,
}

struct Search<'a> {
    e: &'a Ercs,
    whole: &'a CompactSet,
    pred: &'a Predicate,
    query: Vec<BaseIndex>,
    inner: u64,
    fuel: u64,
    cost: u64,
    nodes: u64,
    depth: u32,
}

impl Search<'_> {
    fn visit(&mut self, bits: &mut Vec<bool>, limit: usize) -> Node {
        if self.cost.saturating_add(self.inner) > self.fuel {
            return Node::OutOfFuel;
        }
        self.cost += self.inner;
        self.nodes += 1;
        let prefix = SpecBits::Prefix(self.query.iter().copied().zip(bits.iter().copied()).collect());
        let g = Fuel(self.inner);
        if self.pred.eval(self.e, self.whole, &prefix, g).is_accepted()
            || consistency_refute(self.e, &prefix, g).is_refuted()
        {
            self.depth = self.depth.max(bits.len() as u32);
            return Node::Closed;
        }
        if bits.len() >= limit {
            return Node::Open;
        }
        for b in [false, true] {
            bits.push(b);
            let r = self.visit(bits, limit);
            bits.pop();
            if !matches!(r, Node::Closed) {
                return r;
            }
        }
        Node::Closed
    }
}

/// Searches the binary tree of spec prefixes over the query order; round
/// `r` explores to depth `2r` depth-first, bit 0 first. A node closes when
/// the predicate accepts on it or its bits are already inconsistent. Each
/// node costs its inner fuel, so an acceptance stage does not depend on the
/// fuel offered.
pub fn forall_located_report(e: &Ercs, whole: &CompactSet, pred: &Predicate, fuel: Fuel) -> ForallReport {
    let mut search = Search { e, whole, pred, query: Vec::new(), inner: 0, fuel: fuel.0, cost: 0, nodes: 0, depth: 0 };
    let mut round = 0u32;
    loop {
        search.query = query_list(e, DEPTH_STEP * round as usize);
        search.inner = INNER_BASE << (round / 4).min(20);
        search.depth = 0;
        let limit = search.query.len();
        match search.visit(&mut Vec::new(), limit) {
            Node::Closed => {
                return ForallReport {
                    outcome: Outcome::Accepted(search.cost - 1),
                    depth: Some(search.depth),
                    rounds: round + 1,
                    nodes: search.nodes,
                }
            }
            Node::Open => round += 1,
            Node::OutOfFuel => {
                return ForallReport { outcome: Outcome::Pending, depth: None, rounds: round, nodes: search.nodes }
            }
        }
    }
}

/// Semidecides "every located set satisfies `pred`" on a compact space.
pub fn forall_located(e: &Ercs, whole: &CompactSet, pred: &Predicate) -> Semidecision {
    let (e, whole, pred) = (e.clone(), whole.clone(), pred.clone());
    Semidecision::new(move |f| forall_located_report(&e, &whole, &pred, f).outcome)
}

/// The whole-space compact the search needs, or a domain error.
pub fn require_whole(whole: Option<&CompactSet>, name: &str) -> Result<CompactSet> {
    whole.cloned().ok_or_else(|| Error::Unsupported(format!("{name} is not compact")))
}


#[cfg(test)]
mod search_tests {
    use super::*;
    use crate::rational::rat;
    use crate::spaces::cantor::Word;
    use crate::spaces::line::interval_index;
    use crate::spaces::registry::registry_get;
    use crate::spaces::Space;

    fn iv(space: &Arc<dyn Space>, a: (i64, i64), b: (i64, i64)) -> OpenSet {
        OpenSet::of_basics(space.clone(), vec![interval_index(&rat(a.0, a.1), &rat(b.0, b.1)).unwrap()])
    }

    fn cy(space: &Arc<dyn Space>, w: &str) -> OpenSet {
        OpenSet::of_basics(space.clone(), vec![Word::parse(w).unwrap().index()])
    }

    fn run(name: &str, p: impl Fn(&Arc<dyn Space>) -> Predicate, fuel: u64) -> ForallReport {
        let r = registry_get(name).unwrap();
        let e = r.require_ercs().unwrap();
        let p = p(&e.space);
        let t = std::time::Instant::now();
        let rep = forall_located_report(e, r.whole_compact.as_ref().unwrap(), &p, Fuel(fuel));
        eprintln!("{name} {p:?}: {rep:?} in {:?}", t.elapsed());
        rep
    }

    #[test]
    fn line_disjunction_closes() {
        let rep = run(
            "unit-interval",
            |s| {
                Predicate::IsEmptyOr(Box::new(Predicate::Or(vec![
                    Predicate::Meets(iv(s, (-1, 1), (1, 2))),
                    Predicate::Meets(iv(s, (1, 3), (2, 1))),
                ])))
            },
            1_000_000,
        );
        assert!(rep.outcome.is_accepted());
    }

    #[test]
    fn cantor_tautologies_close() {
        let t2 = |s: &Arc<dyn Space>| Predicate::Or(vec![Predicate::Meets(cy(s, "0")), Predicate::Subset(cy(s, "1"))]);
        assert_eq!(run("cantor", t2, 1_000_000).depth, Some(2));
        let t3 = |s: &Arc<dyn Space>| {
            Predicate::IsEmptyOr(Box::new(Predicate::Or(vec![
                Predicate::Meets(cy(s, "0")),
                Predicate::Meets(cy(s, "1")),
            ])))
        };
        assert!(run("cantor", t3, 1_000_000).outcome.is_accepted());
    }

    #[test]
    fn falsifiable_stays_pending() {
        let f = |s: &Arc<dyn Space>| {
            Predicate::Or(vec![Predicate::Subset(iv(s, (-1, 1), (1, 2))), Predicate::Subset(iv(s, (1, 2), (2, 1)))])
        };
        assert_eq!(run("unit-interval", f, 1_000_000).outcome, Outcome::Pending);
        let g = |s: &Arc<dyn Space>| {
            Predicate::IsEmptyOr(Box::new(Predicate::And(vec![
                Predicate::Meets(cy(s, "0")),
                Predicate::Meets(cy(s, "1")),
            ])))
        };
        assert_eq!(run("cantor", g, 1_000_000).outcome, Outcome::Pending);
    }
}
