//! Fuel-bounded semidecision, monotone enumerations and the dovetailing
//! schedules the rest of the crate is built from.
//!
//! A [`Semidecision`] is evaluated against a [`Fuel`] budget and either
//! reports the schedule step at which it accepted or stays [`Outcome::Pending`].
//! Every process in the crate is monotone: more fuel never turns an
//! acceptance back into `Pending`, and the reported stage never grows.
//! Stages are always the *first* accepting schedule step, so they do not
//! depend on how much fuel was supplied beyond that point.

use std::fmt;
use std::sync::{Arc, Mutex};

/// A finite computation budget, counted in schedule steps.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fuel(pub u64);

impl Fuel {
    pub const ZERO: Fuel = Fuel(0);

    pub fn steps(self) -> u64 {
        self.0
    }
}

impl From<u64> for Fuel {
    fn from(steps: u64) -> Self {
        Fuel(steps)
    }
}

impl fmt::Display for Fuel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Result of running a semidecision with a finite budget.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Outcome {
    Accepted(u64),
    Pending,
}

impl Outcome {
    pub fn is_accepted(self) -> bool {
        matches!(self, Outcome::Accepted(_))
    }

    pub fn stage(self) -> Option<u64> {
        match self {
            Outcome::Accepted(s) => Some(s),
            Outcome::Pending => None,
        }
    }
}

type ProcessFn = dyn Fn(Fuel) -> Outcome + Send + Sync;

/// A monotone, deterministic fuel-indexed accept/pending computation.
#[derive(Clone)]
pub struct Semidecision {
    eval: Arc<ProcessFn>,
}

impl fmt::Debug for Semidecision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("Semidecision(..)")
    }
}

impl Semidecision {
    /// Wraps a raw evaluation function. The caller guarantees monotonicity.
    pub fn new(eval: impl Fn(Fuel) -> Outcome + Send + Sync + 'static) -> Self {
        Semidecision { eval: Arc::new(eval) }
    }

    pub fn never() -> Self {
        Semidecision::new(|_| Outcome::Pending)
    }

    /// Accepts once the budget exceeds `stage`.
    pub fn accept_at(stage: u64) -> Self {
        Semidecision::new(move |f| if f.0 > stage { Outcome::Accepted(stage) } else { Outcome::Pending })
    }

    /// A process given by a predicate that is monotone in fuel; the reported
    /// stage is the least fuel at which the predicate holds.
    pub fn from_monotone(pred: impl Fn(Fuel) -> bool + Send + Sync + 'static) -> Self {
        Semidecision::new(move |f| {
            if f.0 == 0 || !pred(Fuel(f.0 - 1)) {
                return Outcome::Pending;
            }
            let (mut lo, mut hi) = (0u64, f.0 - 1);
            while lo < hi {
                let mid = lo + (hi - lo) / 2;
                if pred(Fuel(mid)) {
                    hi = mid;
                } else {
                    lo = mid + 1;
                }
            }
            Outcome::Accepted(lo)
        })
    }

    pub fn run(&self, fuel: Fuel) -> Outcome {
        (self.eval)(fuel)
    }

    pub fn accepts_within(&self, fuel: impl Into<Fuel>) -> bool {
        self.run(fuel.into()).is_accepted()
    }

    /// Conjunction; the stage is the later of the two.
    pub fn both(a: &Semidecision, b: &Semidecision) -> Semidecision {
        let (a, b) = (a.clone(), b.clone());
        Semidecision::new(move |f| match (a.run(f), b.run(f)) {
            (Outcome::Accepted(x), Outcome::Accepted(y)) => Outcome::Accepted(x.max(y)),
            _ => Outcome::Pending,
        })
    }

    /// Disjunction; the stage is the earlier of the two.
    pub fn either(a: &Semidecision, b: &Semidecision) -> Semidecision {
        let (a, b) = (a.clone(), b.clone());
        Semidecision::new(move |f| match (a.run(f), b.run(f)) {
            (Outcome::Accepted(x), Outcome::Accepted(y)) => Outcome::Accepted(x.min(y)),
            (Outcome::Accepted(x), Outcome::Pending) | (Outcome::Pending, Outcome::Accepted(x)) => Outcome::Accepted(x),
            _ => Outcome::Pending,
        })
    }
}

/// Runs a process once. Pure: equal fuel gives equal answers.
pub fn run_process(p: &Semidecision, fuel: Fuel) -> Outcome {
    p.run(fuel)
}

/// Conjunction of two semidecisions.
pub fn both_accept(a: &Semidecision, b: &Semidecision) -> Semidecision {
    Semidecision::both(a, b)
}

/// Cantor pairing between `N x N` and `N`.
#[derive(Clone, Copy, Debug, Default)]
pub struct PairingScheme;

impl PairingScheme {
    pub fn encode(a: u128, b: u128) -> u128 {
        let s = a + b;
        s * (s + 1) / 2 + b
    }

    pub fn checked_encode(a: u128, b: u128) -> Option<u128> {
        let s = a.checked_add(b)?;
        let tri =
            if s % 2 == 0 { (s / 2).checked_mul(s.checked_add(1)?)? } else { s.checked_mul(s.checked_add(1)? / 2)? };
        tri.checked_add(b)
    }

    pub fn decode(z: u128) -> (u128, u128) {
        // w = floor((sqrt(8z+1) - 1) / 2), estimated without overflow
        let mut w = if z <= u128::MAX / 8 { (isqrt(8 * z + 1) - 1) / 2 } else { 2 * isqrt(z / 2) };
        while tri_checked(w + 1).is_some_and(|t| t <= z) {
            w += 1;
        }
        while tri(w) > z {
            w -= 1;
        }
        let b = z - tri(w);
        (w - b, b)
    }

    pub fn encode64(a: u64, b: u64) -> u64 {
        Self::encode(a as u128, b as u128) as u64
    }

    pub fn decode64(z: u64) -> (u64, u64) {
        let (a, b) = Self::decode(z as u128);
        (a as u64, b as u64)
    }
}

fn tri_checked(w: u128) -> Option<u128> {
    if w.is_multiple_of(2) {
        (w / 2).checked_mul(w + 1)
    } else {
        w.checked_mul(w.div_ceil(2))
    }
}

fn tri(w: u128) -> u128 {
    if w.is_multiple_of(2) {
        (w / 2) * (w + 1)
    } else {
        w * w.div_ceil(2)
    }
}

/// Integer square root (floor).
pub fn isqrt(n: u128) -> u128 {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as u128;
    while x.checked_mul(x).is_none_or(|sq| sq > n) {
        x -= 1;
    }
    while (x + 1).checked_mul(x + 1).is_some_and(|sq| sq <= n) {
        x += 1;
    }
    x
}

struct Cache<T> {
    steps_done: u64,
    items: Vec<T>,
    /// `counts[s]` is the listing length after `s` steps.
    counts: Vec<usize>,
}

type StepFn<T> = dyn Fn(u64) -> Vec<T> + Send + Sync;

struct EnumInner<T> {
    step: Box<StepFn<T>>,
    cache: Mutex<Cache<T>>,
}

/// A stage-indexed growing listing. `listing(s)` is the concatenation of the
/// batches emitted at steps `0..s`, so it is a prefix of `listing(s + 1)` by
/// construction. Batches are memoised.
pub struct Enumerator<T> {
    inner: Arc<EnumInner<T>>,
}

impl<T> Clone for Enumerator<T> {
    fn clone(&self) -> Self {
        Enumerator { inner: Arc::clone(&self.inner) }
    }
}

impl<T> fmt::Debug for Enumerator<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("Enumerator(..)")
    }
}

impl<T: Clone + Send + Sync + 'static> Enumerator<T> {
    /// Builds an enumerator from its per-step batches.
    pub fn from_steps(step: impl Fn(u64) -> Vec<T> + Send + Sync + 'static) -> Self {
        Enumerator {
            inner: Arc::new(EnumInner {
                step: Box::new(step),
                cache: Mutex::new(Cache { steps_done: 0, items: Vec::new(), counts: vec![0] }),
            }),
        }
    }

    pub fn empty() -> Self {
        Enumerator::from_steps(|_| Vec::new())
    }

    /// All items emitted at step 0.
    pub fn finite(items: Vec<T>) -> Self {
        Enumerator::from_steps(move |s| if s == 0 { items.clone() } else { Vec::new() })
    }

    /// One item per step, from an index function; `None` ends nothing, it
    /// just skips the step.
    pub fn from_fn(f: impl Fn(u64) -> Option<T> + Send + Sync + 'static) -> Self {
        Enumerator::from_steps(move |s| f(s).into_iter().collect())
    }

    fn ensure(&self, stage: u64) -> std::sync::MutexGuard<'_, Cache<T>> {
        let mut cache = self.inner.cache.lock().unwrap_or_else(|e| e.into_inner());
        while cache.steps_done < stage {
            let s = cache.steps_done;
            let batch = (self.inner.step)(s);
            cache.items.extend(batch);
            let len = cache.items.len();
            cache.counts.push(len);
            cache.steps_done += 1;
        }
        cache
    }

    pub fn listing(&self, stage: u64) -> Vec<T> {
        let cache = self.ensure(stage);
        cache.items[..cache.counts[stage as usize]].to_vec()
    }

    /// Calls `f` on the listing at `stage` without copying it.
    pub fn with_listing<R>(&self, stage: u64, f: impl FnOnce(&[T]) -> R) -> R {
        let cache = self.ensure(stage);
        f(&cache.items[..cache.counts[stage as usize]])
    }

    /// Items emitted exactly at step `step`.
    pub fn batch(&self, step: u64) -> Vec<T> {
        let cache = self.ensure(step + 1);
        cache.items[cache.counts[step as usize]..cache.counts[step as usize + 1]].to_vec()
    }

    pub fn len_at(&self, stage: u64) -> usize {
        let cache = self.ensure(stage);
        cache.counts[stage as usize]
    }

    /// Least stage `s <= max_stage` at which the listing holds more than `i`
    /// items.
    pub fn appearance(&self, i: usize, max_stage: u64) -> Option<u64> {
        let mut cache = self.inner.cache.lock().unwrap_or_else(|e| e.into_inner());
        // step only as far as needed to see item `i`
        while cache.steps_done < max_stage && cache.items.len() <= i {
            let s = cache.steps_done;
            let batch = (self.inner.step)(s);
            cache.items.extend(batch);
            let len = cache.items.len();
            cache.counts.push(len);
            cache.steps_done += 1;
        }
        let known = cache.steps_done.min(max_stage) as usize;
        let pos = cache.counts[..=known].partition_point(|&c| c <= i);
        (pos <= known).then_some(pos as u64)
    }

    /// The first `n` items, if they have appeared by `max_stage`.
    pub fn prefix(&self, n: usize, max_stage: u64) -> Vec<T> {
        self.with_listing(max_stage, |items| items[..n.min(items.len())].to_vec())
    }

    pub fn map<U: Clone + Send + Sync + 'static>(&self, f: impl Fn(T) -> U + Send + Sync + 'static) -> Enumerator<U> {
        let src = self.clone();
        Enumerator::from_steps(move |s| src.batch(s).into_iter().map(&f).collect())
    }

    pub fn filter(&self, f: impl Fn(&T) -> bool + Send + Sync + 'static) -> Enumerator<T> {
        let src = self.clone();
        Enumerator::from_steps(move |s| src.batch(s).into_iter().filter(|x| f(x)).collect())
    }

    /// Dependent product: step `<s, a>` pairs every item emitted at step `s`
    /// with the items its own enumerator emits at step `a`.
    pub fn flat_product<U: Clone + Send + Sync + 'static>(
        &self,
        f: impl Fn(&T) -> Enumerator<U> + Send + Sync + 'static,
    ) -> Enumerator<(T, U)> {
        let src = self.clone();
        let inner: Mutex<std::collections::HashMap<u64, Vec<Enumerator<U>>>> = Mutex::new(Default::default());
        Enumerator::from_steps(move |t| {
            let (s, a) = PairingScheme::decode64(t);
            let items = src.batch(s);
            if items.is_empty() {
                return Vec::new();
            }
            let subs = {
                let mut cache = inner.lock().unwrap_or_else(|e| e.into_inner());
                cache.entry(s).or_insert_with(|| items.iter().map(&f).collect()).clone()
            };
            let mut out = Vec::new();
            for (x, sub) in items.iter().zip(subs) {
                for y in sub.batch(a) {
                    out.push((x.clone(), y));
                }
            }
            out
        })
    }

    /// Round-robin merge: step `t` takes step `t / k` of source `t mod k`.
    pub fn interleave(sources: Vec<Enumerator<T>>) -> Enumerator<T> {
        if sources.is_empty() {
            return Enumerator::empty();
        }
        let k = sources.len() as u64;
        Enumerator::from_steps(move |t| sources[(t % k) as usize].batch(t / k))
    }
}

/// Least schedule step `t < fuel` whose decoded pair satisfies `pred`, when
/// `pred` is monotone in the second coordinate.
pub fn min_monotone_pair(fuel: Fuel, pred: impl Fn(u64, u64) -> bool) -> Outcome {
    let f = fuel.0 as u128;
    let mut best: Option<u128> = None;
    let mut a: u128 = 0;
    while PairingScheme::encode(a, 0) < f {
        if best.is_some_and(|b| PairingScheme::encode(a, 0) >= b) {
            break;
        }
        // largest b with pair(a, b) < f
        let mut lo = 0u128;
        let mut hi = f;
        while lo < hi {
            let mid = lo + (hi - lo).div_ceil(2);
            if PairingScheme::encode(a, mid) < f {
                lo = mid;
            } else {
                hi = mid - 1;
            }
        }
        let jmax = lo;
        if pred(a as u64, jmax as u64) {
            let (mut l, mut h) = (0u128, jmax);
            while l < h {
                let mid = l + (h - l) / 2;
                if pred(a as u64, mid as u64) {
                    h = mid;
                } else {
                    l = mid + 1;
                }
            }
            let t = PairingScheme::encode(a, l);
            if best.is_none_or(|b| t < b) {
                best = Some(t);
            }
        }
        a += 1;
    }
    match best {
        Some(t) => Outcome::Accepted(t as u64),
        None => Outcome::Pending,
    }
}

/// Scans the schedule `0..fuel` and returns the first step whose decoded
/// pair satisfies `pred`, together with that pair.
pub fn scan_pairs(fuel: Fuel, mut pred: impl FnMut(u64, u64) -> bool) -> Option<(u64, u64, u64)> {
    for t in 0..fuel.0 {
        let (a, b) = PairingScheme::decode64(t);
        if pred(a, b) {
            return Some((t, a, b));
        }
    }
    None
}

/// Fair existential search over an enumeration of candidate processes, each
/// tagged with a witness. At schedule step `t = <i, j>` the `i`-th candidate
/// (if it has appeared by enumeration stage `j`) is run for `j` steps. Returns
/// the witness of the first acceptance in schedule order and its step.
pub fn dovetail_first<W: Clone + Send + Sync + 'static>(
    candidates: &Enumerator<(W, Semidecision)>,
    fuel: Fuel,
) -> Option<(W, u64)> {
    let f = fuel.0 as u128;
    if f == 0 {
        return None;
    }
    let mut best: Option<(u128, W)> = None;
    for i in 0usize.. {
        let i128 = i as u128;
        let start = PairingScheme::encode(i128, 0);
        if start >= f || best.as_ref().is_some_and(|(b, _)| start >= *b) {
            break;
        }
        let ji = largest_second(i128, f);
        // items appear in order, so a later one cannot beat this budget
        let Some(appear) = candidates.appearance(i, ji as u64) else { break };
        let (w, proc_) = candidates.with_listing(appear, |items| items[i].clone());
        if let Outcome::Accepted(s) = proc_.run(Fuel(ji as u64)) {
            let j = ((s + 1).max(appear)) as u128;
            if j <= ji {
                let t = PairingScheme::encode(i128, j);
                if best.as_ref().is_none_or(|(b, _)| t < *b) {
                    best = Some((t, w));
                }
            }
        }
    }
    best.map(|(t, w)| (w, t as u64))
}

/// As [`min_monotone_pair`] for a `pred` monotone in both coordinates: a
/// staircase walk costing about two evaluations per row.
pub fn min_upset_pair(fuel: Fuel, pred: impl Fn(u64, u64) -> bool) -> Outcome {
    let f = fuel.0 as u128;
    let mut best: Option<u128> = None;
    // least true b seen so far; later rows are true at least from there
    let mut bound: Option<u128> = None;
    let mut a: u128 = 0;
    while PairingScheme::encode(a, 0) < f {
        if best.is_some_and(|t| PairingScheme::encode(a, 0) >= t) {
            break;
        }
        let cap = largest_second(a, f);
        let mut b = bound.map_or(cap, |x| x.min(cap));
        if pred(a as u64, b as u64) {
            if b > 0 && pred(a as u64, (b - 1) as u64) {
                let (mut lo, mut hi) = (0u128, b - 1);
                while lo < hi {
                    let mid = lo + (hi - lo) / 2;
                    if pred(a as u64, mid as u64) {
                        hi = mid;
                    } else {
                        lo = mid + 1;
                    }
                }
                b = lo;
            }
            bound = Some(b);
            let t = PairingScheme::encode(a, b);
            if best.is_none_or(|x| t < x) {
                best = Some(t);
            }
        }
        a += 1;
    }
    match best {
        Some(t) => Outcome::Accepted(t as u64),
        None => Outcome::Pending,
    }
}

fn largest_second(a: u128, f: u128) -> u128 {
    let mut lo = 0u128;
    let mut hi = f;
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

/// Accepts iff some enumerated process accepts.
pub fn dovetail_any(ps: &Enumerator<Semidecision>) -> Semidecision {
    let tagged = ps.map(|p| ((), p));
    Semidecision::new(move |f| match dovetail_first(&tagged, f) {
        Some((_, t)) => Outcome::Accepted(t),
        None => Outcome::Pending,
    })
}
