//! The one-point compactification `Q ∪ {∞}` of the rationals.
//!
//! Basic `2k` is `I_k ∩ Q` for the line interval `I_k`; basic `2k+1` is
//! `{∞} ∪ (Q \ E_k)` where bit `i` of `k` puts `rational_from_code(i)` into
//! the finite set `E_k`.
//!
//! A point name is a token stream. `∞` excludes every rational in turn and
//! never stops; a rational excludes finitely many others, emits `Stop`, then
//! shrinking intervals around itself.

use std::collections::BTreeSet;
use std::sync::Arc;

use super::line::{decode_interval, interval_index};
use super::{BaseIndex, Basic, PointName, Space};
use crate::ercs::CompactCandidate;
use crate::kernel::{Enumerator, Fuel, Outcome};
use crate::rational::{dyadic, fmt_rational, rational_code, rational_from_code, Rational};
use crate::sets::{CompactSet, OpenSet};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QhatToken {
    Exclude(Rational),
    Stop,
    Interval(Rational, Rational),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QhatPoint {
    Infinity,
    Rational(Rational),
}

/// The `i`-th rational in code order, skipping non-canonical codes.
pub fn canonical_rationals() -> Enumerator<Rational> {
    Enumerator::from_fn(|c| {
        let q = rational_from_code(c as u128);
        (rational_code(&q) == Some(c as u128)).then_some(q)
    })
}

/// Finite set `E_k`.
pub fn excluded_set(k: u128) -> Vec<Rational> {
    let mut out = BTreeSet::new();
    for i in 0..128 {
        if (k >> i) & 1 == 1 {
            out.insert(rational_from_code(i));
        }
    }
    out.into_iter().collect()
}

pub fn interval_basic(lo: &Rational, hi: &Rational) -> Option<BaseIndex> {
    interval_index(lo, hi).map(|n| BaseIndex(2 * n.0))
}

/// Cofinite basic for the set of codes; codes must be below 128.
pub fn cofinite_basic(codes: &[u32]) -> BaseIndex {
    let k: u128 = codes.iter().fold(0, |acc, &c| acc | (1u128 << c));
    BaseIndex(2 * k + 1)
}

pub fn decode_qhat(n: BaseIndex) -> Basic {
    if n.0.is_multiple_of(2) {
        let (lo, hi) = decode_interval(BaseIndex(n.0 / 2));
        Basic::QhatInterval { lo, hi }
    } else {
        Basic::QhatCofinite(excluded_set(n.0 / 2))
    }
}

/// Whether the basic contains the point.
pub fn basic_contains(b: &Basic, p: &QhatPoint) -> bool {
    match (b, p) {
        (Basic::QhatInterval { .. }, QhatPoint::Infinity) => false,
        (Basic::QhatInterval { lo, hi }, QhatPoint::Rational(q)) => lo < q && q < hi,
        (Basic::QhatCofinite(_), QhatPoint::Infinity) => true,
        (Basic::QhatCofinite(e), QhatPoint::Rational(q)) => !e.contains(q),
        _ => false,
    }
}

/// What a token prefix tells us about the named point.
struct Knowledge {
    excluded: BTreeSet<Rational>,
    stopped: bool,
    intervals: Vec<(Rational, Rational)>,
}

impl Knowledge {
    fn of(tokens: &[QhatToken]) -> Knowledge {
        let mut k = Knowledge { excluded: BTreeSet::new(), stopped: false, intervals: Vec::new() };
        for t in tokens {
            match t {
                QhatToken::Exclude(q) => {
                    k.excluded.insert(q.clone());
                }
                QhatToken::Stop => k.stopped = true,
                QhatToken::Interval(a, b) => k.intervals.push((a.clone(), b.clone())),
            }
        }
        k
    }

    /// The point certainly differs from `q`.
    fn rules_out(&self, q: &Rational) -> bool {
        self.excluded.contains(q) || self.intervals.iter().any(|(a, b)| !(a < q && q < b))
    }

    fn certifies(&self, b: &Basic) -> bool {
        match b {
            Basic::QhatInterval { lo, hi } => self.stopped && self.intervals.iter().any(|(a, c)| lo <= a && c <= hi),
            Basic::QhatCofinite(e) => e.iter().all(|q| self.rules_out(q)),
            _ => false,
        }
    }
}

pub struct QhatSpace;

impl QhatSpace {
    pub fn new() -> Arc<QhatSpace> {
        Arc::new(QhatSpace)
    }

    /// Token stream of a point; a rational first excludes `exclusions`
    /// other rationals.
    pub fn tokens(p: &QhatPoint, exclusions: usize) -> Enumerator<QhatToken> {
        let rats = canonical_rationals();
        match p.clone() {
            QhatPoint::Infinity => {
                // canonical rationals are sparse in code order; one token per
                // produced rational
                rats.map(QhatToken::Exclude)
            }
            QhatPoint::Rational(x) => {
                let others = rats.filter({
                    let x = x.clone();
                    move |q| *q != x
                });
                Enumerator::from_fn(move |s| {
                    let s = s as usize;
                    if s < exclusions {
                        // the s-th other rational; found by growing the stage
                        let mut stage = 2 * s as u64 + 4;
                        loop {
                            let l = others.prefix(s + 1, stage);
                            if l.len() > s {
                                return Some(QhatToken::Exclude(l[s].clone()));
                            }
                            stage *= 2;
                        }
                    } else if s == exclusions {
                        Some(QhatToken::Stop)
                    } else {
                        let w = dyadic((s - exclusions - 1) as u32);
                        Some(QhatToken::Interval(&x - &w, &x + &w))
                    }
                })
            }
        }
    }

    /// Neighbourhood name read off a token stream: basic `n` is emitted at
    /// the first step `t >= n` at which the tokens so far certify it.
    pub fn name_from_tokens(self: &Arc<Self>, tokens: Enumerator<QhatToken>) -> PointName {
        let nb = Enumerator::from_steps(move |t| {
            let now = Knowledge::of(&tokens.listing(t + 1));
            let before = Knowledge::of(&tokens.listing(t));
            (0..=t as u128)
                .map(BaseIndex)
                .filter(|&n| {
                    let b = decode_qhat(n);
                    now.certifies(&b) && !(n.0 < t as u128 && before.certifies(&b))
                })
                .collect()
        });
        PointName::new(self.clone(), nb)
    }

    pub fn point_name(self: &Arc<Self>, p: &QhatPoint, exclusions: usize) -> PointName {
        self.name_from_tokens(QhatSpace::tokens(p, exclusions))
    }

    /// `Q` itself: the union of all interval basics.
    pub fn rationals_open(self: &Arc<Self>) -> OpenSet {
        OpenSet::new(self.clone(), Enumerator::from_fn(|t| Some(BaseIndex(2 * t as u128))))
    }

    /// Compact name of the whole space: a cover must contain `∞`, after
    /// which only the finitely many rationals missed by every cofinite
    /// member remain to check.
    pub fn whole_compact(self: &Arc<Self>) -> CompactSet {
        CompactSet::new(self.clone(), |cover: &[BaseIndex], _f: Fuel| {
            let basics: Vec<Basic> = cover.iter().map(|&n| decode_qhat(n)).collect();
            let mut left: Option<BTreeSet<Rational>> = None;
            for b in &basics {
                if let Basic::QhatCofinite(e) = b {
                    let e: BTreeSet<Rational> = e.iter().cloned().collect();
                    left = Some(match left {
                        None => e,
                        Some(l) => l.intersection(&e).cloned().collect(),
                    });
                }
            }
            let Some(left) = left else { return Outcome::Pending };
            let ok = left.iter().all(|q| basics.iter().any(|b| basic_contains(b, &QhatPoint::Rational(q.clone()))));
            if ok {
                Outcome::Accepted(0)
            } else {
                Outcome::Pending
            }
        })
    }

    /// Compact name of a finite set of rationals.
    pub fn finite_compact(self: &Arc<Self>, qs: Vec<Rational>) -> CompactSet {
        CompactSet::new(self.clone(), move |cover: &[BaseIndex], _f: Fuel| {
            let basics: Vec<Basic> = cover.iter().map(|&n| decode_qhat(n)).collect();
            let ok = qs.iter().all(|q| basics.iter().any(|b| basic_contains(b, &QhatPoint::Rational(q.clone()))));
            if ok {
                Outcome::Accepted(0)
            } else {
                Outcome::Pending
            }
        })
    }

    /// The compact subsets of `Q`: every finite set `E_k`. None of them
    /// contains a basic open, since every basic is infinite.
    pub fn finite_family(self: &Arc<Self>) -> Enumerator<CompactCandidate> {
        let sp = self.clone();
        Enumerator::from_fn(move |k| {
            let qs = excluded_set(k as u128);
            let label = format!("{{{}}}", qs.iter().map(fmt_rational).collect::<Vec<_>>().join(","));
            Some(CompactCandidate::new(label, sp.finite_compact(qs), |_| false))
        })
    }
}

impl Space for QhatSpace {
    fn name(&self) -> String {
        "qhat".into()
    }

    fn decode(&self, n: BaseIndex) -> Option<Basic> {
        Some(decode_qhat(n))
    }

    fn formal_subset(&self, a: &Basic, b: &Basic) -> Option<bool> {
        Some(match (a, b) {
            (Basic::QhatInterval { lo, hi }, _) if lo >= hi => true,
            (Basic::QhatInterval { lo: a1, hi: b1 }, Basic::QhatInterval { lo: a2, hi: b2 }) => a2 <= a1 && b1 <= b2,
            (Basic::QhatInterval { lo, hi }, Basic::QhatCofinite(e)) => e.iter().all(|q| !(lo < q && q < hi)),
            (Basic::QhatCofinite(_), Basic::QhatInterval { .. }) => false,
            (Basic::QhatCofinite(e1), Basic::QhatCofinite(e2)) => e2.iter().all(|q| e1.contains(q)),
            _ => return None,
        })
    }

    fn search_order(&self) -> Enumerator<BaseIndex> {
        Enumerator::from_fn(|t| Some(BaseIndex(t as u128)))
    }
}
