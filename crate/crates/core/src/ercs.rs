//! Effective relatively compact systems: opens `U_n`, compacts `B_k` and a
//! formal containment `U_n ≪ B_k`, with basis search, compact
//! neighbourhoods and the subspace transfers built on them.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::kernel::{dovetail_any, dovetail_first, Enumerator, Fuel, PairingScheme, Semidecision};
use crate::rational::dyadic;
use crate::sets::{
    compact_subset, intersect_closed_compact, member_open, open_of_basic, open_union, union_compact, ClosedSet,
    CompactSet, OpenSet,
};
use crate::spaces::cantor::{cylinders_cover, word_of, CantorSpace, Word};
use crate::spaces::finite::FiniteSpace;
use crate::spaces::line::{decode_interval, interval_index, LineSpace};
use crate::spaces::{BaseIndex, PointName, Space};

type OpenFn = dyn Fn(BaseIndex) -> OpenSet + Send + Sync;
type CompactFn = dyn Fn(BaseIndex) -> CompactSet + Send + Sync;
type AboveFn = dyn Fn(BaseIndex) -> Enumerator<BaseIndex> + Send + Sync;
type RelFn = dyn Fn(BaseIndex, BaseIndex) -> bool + Send + Sync;

#[derive(Clone)]
pub struct Ercs {
    pub space: Arc<dyn Space>,
    open_fn: Arc<OpenFn>,
    compact_fn: Arc<CompactFn>,
    above_fn: Arc<AboveFn>,
    decider: Option<Arc<RelFn>>,
    /// Complete enumeration of open indices.
    pub order: Enumerator<BaseIndex>,
    /// Coarse-to-fine open indices for the hyperspace tree search.
    pub query_order: Enumerator<BaseIndex>,
    /// Enumeration of compact indices.
    pub compact_order: Enumerator<BaseIndex>,
    /// `U_n` is the space's basic `n`.
    pub basic_of: bool,
}

impl fmt::Debug for Ercs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ercs({})", self.space.name())
    }
}

/// Parts used to assemble an ercs by hand.
pub struct ErcsParts {
    pub space: Arc<dyn Space>,
    pub open: Arc<OpenFn>,
    pub compact: Arc<CompactFn>,
    pub above: Arc<AboveFn>,
    pub decider: Option<Arc<RelFn>>,
    pub order: Enumerator<BaseIndex>,
    pub query_order: Enumerator<BaseIndex>,
    pub compact_order: Enumerator<BaseIndex>,
    pub basic_of: bool,
}

impl Ercs {
    pub fn from_parts(p: ErcsParts) -> Ercs {
        Ercs {
            space: p.space,
            open_fn: p.open,
            compact_fn: p.compact,
            above_fn: p.above,
            decider: p.decider,
            order: p.order,
            query_order: p.query_order,
            compact_order: p.compact_order,
            basic_of: p.basic_of,
        }
    }

    pub fn open(&self, n: BaseIndex) -> OpenSet {
        (self.open_fn)(n)
    }

    pub fn compact(&self, k: BaseIndex) -> CompactSet {
        (self.compact_fn)(k)
    }

    /// Every `k` with `U_n ≪ B_k`; `n`'s tightest partner comes first.
    pub fn above(&self, n: BaseIndex) -> Enumerator<BaseIndex> {
        (self.above_fn)(n)
    }

    /// Decides `U_n ≪ B_k` where the instance can.
    pub fn related(&self, n: BaseIndex, k: BaseIndex) -> Option<bool> {
        self.decider.as_ref().map(|d| d(n, k))
    }

    /// The relation `R` as an enumeration of pairs.
    pub fn relation(&self) -> Enumerator<(BaseIndex, BaseIndex)> {
        let e = self.clone();
        self.order.flat_product(move |&n| e.above(n))
    }

    /// Real line, unit interval and other line subspaces: `B_k` is the
    /// closed interval traced on the carrier, `n ≪ k` compares endpoints.
    pub fn for_line(sp: &Arc<LineSpace>) -> Ercs {
        let space: Arc<dyn Space> = sp.clone();
        let (s1, s2) = (space.clone(), sp.clone());
        Ercs::from_parts(ErcsParts {
            space: space.clone(),
            open: Arc::new(move |n| open_of_basic(s1.clone(), n)),
            compact: Arc::new(move |k| {
                let (lo, hi) = decode_interval(k);
                s2.literal_compact(s2.closed_trace(&lo, &hi))
            }),
            above: Arc::new(|n| {
                let (lo, hi) = decode_interval(n);
                Enumerator::from_fn(move |t| {
                    if t == 0 {
                        Some(n)
                    } else if t % 2 == 0 {
                        let w = dyadic((t / 2) as u32);
                        interval_index(&(&lo - &w), &(&hi + &w))
                    } else {
                        let k = BaseIndex(((t - 1) / 2) as u128);
                        (k != n && LineSpace::closure_within(n, k)).then_some(k)
                    }
                })
            }),
            decider: Some(Arc::new(LineSpace::closure_within)),
            order: space.search_order(),
            query_order: sp.grid_order(),
            compact_order: space.search_order(),
            basic_of: true,
        })
    }

    /// Cantor space: `U = B =` cylinders, `n ≪ k` iff word `k` is a prefix
    /// of word `n`.
    pub fn for_cantor(sp: &Arc<CantorSpace>) -> Ercs {
        let space: Arc<dyn Space> = sp.clone();
        let (s1, s2) = (space.clone(), space.clone());
        Ercs::from_parts(ErcsParts {
            space: space.clone(),
            open: Arc::new(move |n| open_of_basic(s1.clone(), n)),
            compact: Arc::new(move |k| {
                let w = word_of(k);
                CompactSet::new(s2.clone(), move |cover: &[BaseIndex], _f| {
                    let ws: Vec<Word> = cover.iter().map(|&n| word_of(n)).collect();
                    if cylinders_cover(&w, &ws) {
                        crate::kernel::Outcome::Accepted(0)
                    } else {
                        crate::kernel::Outcome::Pending
                    }
                })
            }),
            above: Arc::new(|n| {
                let w = word_of(n);
                Enumerator::finite((0..=w.len).rev().map(|l| w.truncate(l).index()).collect())
            }),
            decider: Some(Arc::new(|n, k| word_of(k).is_prefix_of(&word_of(n)))),
            order: space.search_order(),
            query_order: space.search_order(),
            compact_order: space.search_order(),
            basic_of: true,
        })
    }

    /// Finite spaces: every subset is compact, so `B_k` ranges over all
    /// masks `k` and `n ≪ k` is exact containment.
    pub fn for_finite(sp: &Arc<FiniteSpace>) -> Ercs {
        let space: Arc<dyn Space> = sp.clone();
        let s1 = space.clone();
        let (s2, s3, s4) = (sp.clone(), sp.clone(), sp.clone());
        let full = sp.full();
        Ercs::from_parts(ErcsParts {
            space: space.clone(),
            open: Arc::new(move |n| open_of_basic(s1.clone(), n)),
            compact: Arc::new(move |k| {
                if k.0 > full as u128 {
                    CompactSet::empty(s2.clone())
                } else {
                    s2.compact_of_mask(k.0 as u32)
                }
            }),
            above: Arc::new(move |n| {
                let Some(m) = s3.base_mask(n) else { return Enumerator::empty() };
                let mut ks = vec![BaseIndex(m as u128)];
                ks.extend((0..=full).filter(|&k| k != m && m & !k == 0).map(|k| BaseIndex(k as u128)));
                Enumerator::finite(ks)
            }),
            decider: Some(Arc::new(move |n, k| {
                s4.base_mask(n).is_some_and(|m| k.0 <= full as u128 && m & !(k.0 as u32) == 0)
            })),
            order: space.search_order(),
            query_order: space.search_order(),
            compact_order: Enumerator::finite((0..=full as u128).map(BaseIndex).collect()),
            basic_of: true,
        })
    }
}

/// Witness of `x ∈ U_n ≪ B_k ⊆ U`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisWitness {
    pub n: BaseIndex,
    pub k: BaseIndex,
    pub stage: u64,
}

/// Candidate pairs `(n, k)` with `n ≪ k`, together with the process
/// confirming `x ∈ U_n` and `B_k ⊆ U`.
fn basis_candidates(e: &Ercs, x: &PointName, u: &OpenSet) -> Enumerator<((BaseIndex, BaseIndex), Semidecision)> {
    let source = if e.basic_of {
        Enumerator::interleave(vec![x.neighborhoods.clone(), e.order.clone()])
    } else {
        e.order.clone()
    };
    let (e1, e2, x, u) = (e.clone(), e.clone(), x.clone(), u.clone());
    source.flat_product(move |&n| e1.above(n)).map(move |(n, k)| {
        let p = Semidecision::both(&member_open(&x, &e2.open(n)), &compact_subset(&e2.compact(k), &u));
        ((n, k), p)
    })
}

/// Some `n` with `x ∈ U_n ⊆ U`, witnessed through `U_n ≪ B_k ⊆ U`; the first
/// in schedule order.
pub fn basis_search(e: &Ercs, x: &PointName, u: &OpenSet, fuel: Fuel) -> Result<BasisWitness> {
    match dovetail_first(&basis_candidates(e, x, u), fuel) {
        Some(((n, k), stage)) => Ok(BasisWitness { n, k, stage }),
        None => Err(Error::FuelExhausted { fuel: fuel.0 }),
    }
}

/// `x ∈ V ⊆ K ⊆ U`.
#[derive(Clone, Debug)]
pub struct CompactBase {
    pub witness: BasisWitness,
    pub v: OpenSet,
    pub k: CompactSet,
}

pub fn compact_base(e: &Ercs, x: &PointName, u: &OpenSet, fuel: Fuel) -> Result<CompactBase> {
    let w = basis_search(e, x, u, fuel)?;
    Ok(CompactBase { v: e.open(w.n), k: e.compact(w.k), witness: w })
}

/// Compact neighbourhood inside the closed subspace `A`: run the ambient
/// search against `U ∪ A^c`, then return `V ∩ U` and `K ∩ A`.
pub fn closed_subspace_compact_base(
    e: &Ercs,
    a: &ClosedSet,
    x: &PointName,
    u: &OpenSet,
    fuel: Fuel,
) -> Result<CompactBase> {
    let widened = open_union(e.space.clone(), &[u.clone(), a.complement.clone()]);
    let cb = compact_base(e, x, &widened, fuel)?;
    Ok(CompactBase { v: cb.v.intersection(u), k: intersect_closed_compact(a, &cb.k), witness: cb.witness })
}

/// The ercs of an open subspace `Y`. Index `<m, <k, s>>` denotes `U_m` when
/// `m ≪ k` shows up in `above(m)` by stage `s` and `B_k ⊆ Y` is certified
/// with fuel `s`, and `∅` otherwise; compact index `<k, s>` is `B_k` under
/// the same certificate. Every index is therefore decidable.
pub fn open_subspace_ercs(e: &Ercs, y: &OpenSet) -> Ercs {
    let inside = {
        let (e, y) = (e.clone(), y.clone());
        Arc::new(move |k: BaseIndex, s: u64| compact_subset(&e.compact(k), &y).accepts_within(s))
    };
    let cert = {
        let (e, inside) = (e.clone(), inside.clone());
        Arc::new(move |m: BaseIndex, k: BaseIndex, s: u64| {
            e.above(m).with_listing(s.min(4096), |ks| ks.contains(&k)) && inside(k, s)
        })
    };
    let sp = e.space.clone();
    let open = {
        let (e, cert, sp) = (e.clone(), cert.clone(), sp.clone());
        Arc::new(move |i: BaseIndex| {
            let (m, ks) = PairingScheme::decode(i.0);
            let (k, s) = PairingScheme::decode(ks);
            if cert(BaseIndex(m), BaseIndex(k), s as u64) {
                e.open(BaseIndex(m))
            } else {
                OpenSet::empty(sp.clone())
            }
        })
    };
    let compact = {
        let (e, inside, sp) = (e.clone(), inside.clone(), sp.clone());
        Arc::new(move |j: BaseIndex| {
            let (k, s) = PairingScheme::decode(j.0);
            if inside(BaseIndex(k), s as u64) {
                e.compact(BaseIndex(k))
            } else {
                CompactSet::empty(sp.clone())
            }
        })
    };
    let levels = || Enumerator::from_fn(|r| (r < 16).then(|| 4u64.pow(r as u32)));
    let above = {
        let (e, cert, inside) = (e.clone(), cert.clone(), inside.clone());
        Arc::new(move |i: BaseIndex| {
            let (m, ks) = PairingScheme::decode(i.0);
            let (k, s) = PairingScheme::decode(ks);
            let m = BaseIndex(m);
            if !cert(m, BaseIndex(k), s as u64) {
                return Enumerator::finite(vec![BaseIndex(0)]);
            }
            let first = BaseIndex(ks);
            let inside = inside.clone();
            let rest = e
                .above(m)
                .flat_product(move |_| levels())
                .filter(move |(k2, s2)| fresh(inside(*k2, *s2), &|| inside(*k2, *s2 / 4), *s2))
                .map(|(k2, s2)| BaseIndex(PairingScheme::encode(k2.0, s2 as u128)));
            Enumerator::interleave(vec![Enumerator::finite(vec![first]), rest])
        })
    };
    let order = {
        let (e2, cert) = (e.clone(), cert.clone());
        e.order
            .flat_product(move |&m| e2.above(m))
            .flat_product(move |_| levels())
            .filter(move |((m, k), s)| fresh(cert(*m, *k, *s), &|| cert(*m, *k, *s / 4), *s))
            .map(|((m, k), s)| BaseIndex(PairingScheme::encode(m.0, PairingScheme::encode(k.0, s as u128))))
    };
    let compact_order = {
        let inside = inside.clone();
        e.compact_order
            .flat_product(move |_| levels())
            .filter(move |(k, s)| fresh(inside(*k, *s), &|| inside(*k, *s / 4), *s))
            .map(|(k, s)| BaseIndex(PairingScheme::encode(k.0, s as u128)))
    };
    Ercs::from_parts(ErcsParts {
        space: sp,
        open,
        compact,
        above,
        decider: None,
        query_order: order.clone(),
        order,
        compact_order,
        basic_of: false,
    })
}

/// A certificate is listed only at the first level that grants it.
fn fresh(ok: bool, prev: &dyn Fn() -> bool, s: u64) -> bool {
    ok && (s == 1 || !prev())
}

/// Compact neighbourhood in the locally closed subspace `A ∩ Y`.
pub fn locally_closed_compact_base(
    e: &Ercs,
    a: &ClosedSet,
    y: &OpenSet,
    x: &PointName,
    u: &OpenSet,
    fuel: Fuel,
) -> Result<CompactBase> {
    closed_subspace_compact_base(&open_subspace_ercs(e, y), a, x, u, fuel)
}

/// The compacts `B_k` in compact order; their union is the space.
pub fn sigma_cover(e: &Ercs) -> Enumerator<(BaseIndex, CompactSet)> {
    let e2 = e.clone();
    e.compact_order.map(move |k| (k, e2.compact(k)))
}

/// Union of the hinted compacts. A hint that misses part of the space
/// silently yields a name of a proper subset.
pub fn whole_space_compact(e: &Ercs, hint: &[BaseIndex]) -> CompactSet {
    hint.iter()
        .map(|&k| e.compact(k))
        .reduce(|a, b| union_compact(&a, &b))
        .unwrap_or_else(|| CompactSet::empty(e.space.clone()))
}

#[derive(Clone, Debug)]
pub struct ProbeReport {
    pub probe: usize,
    /// `(m, n)` with `x ∈ U_m ≪ B_n ⊆ U`.
    pub witness: Option<(BaseIndex, BaseIndex)>,
    pub stage: Option<u64>,
}

/// Finite-stage check of `U = ⋃_{B_n ⊆ U} ⋃_{U_m ≪ B_n} U_m`: each probe is
/// captured by a selected `U_m`, or reported pending (possibly a probe
/// outside `U`).
pub fn check_main_property(e: &Ercs, u: &OpenSet, probes: &[PointName], fuel: Fuel) -> Vec<ProbeReport> {
    probes
        .iter()
        .enumerate()
        .map(|(i, x)| match basis_search(e, x, u, fuel) {
            Ok(w) => ProbeReport { probe: i, witness: Some((w.n, w.k)), stage: Some(w.stage) },
            Err(_) => ProbeReport { probe: i, witness: None, stage: None },
        })
        .collect()
}

type ContainsFn = dyn Fn(BaseIndex) -> bool + Send + Sync;

/// A compact set from some family, with a decision of which basics it
/// contains.
#[derive(Clone)]
pub struct CompactCandidate {
    pub label: String,
    pub compact: CompactSet,
    contains: Arc<ContainsFn>,
}

impl CompactCandidate {
    pub fn new(
        label: String,
        compact: CompactSet,
        contains: impl Fn(BaseIndex) -> bool + Send + Sync + 'static,
    ) -> Self {
        CompactCandidate { label, compact, contains: Arc::new(contains) }
    }

    pub fn contains_basic(&self, n: BaseIndex) -> bool {
        (self.contains)(n)
    }
}

/// Searches for a neighbourhood `V` of `x` and a family member `K` with
/// `V ⊆ K ⊆ U`. Without an ercs this is the only generic route to a compact
/// neighbourhood.
pub fn compact_neighborhood_search(x: &PointName, u: &OpenSet, family: &Enumerator<CompactCandidate>) -> Semidecision {
    let (fam, u) = (family.clone(), u.clone());
    let procs = x.neighborhoods.flat_product(move |_| fam.clone()).map(move |(v, c)| {
        if c.contains_basic(v) {
            compact_subset(&c.compact, &u)
        } else {
            Semidecision::never()
        }
    });
    dovetail_any(&procs)
}
