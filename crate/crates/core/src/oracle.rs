//! Brute-force reference answers on finite spaces. Sets are point masks;
//! every question is settled by exhaustion.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::hyperspace::Predicate;
use crate::rational::{int, rat, Rational};
use crate::sets::{LocatedSet, OpenSet};
use crate::spaces::finite::FiniteSpace;
use crate::spaces::registry::Registered;

/// The finite space with its ercs, whole-space compact and (when
/// metric-induced) its metric.
pub fn lift_finite(fs: &Arc<FiniteSpace>) -> Registered {
    Registered::finite(fs.clone())
}

/// Every subset with the located name of its closure.
pub fn brute_located(fs: &Arc<FiniteSpace>) -> Vec<(u32, LocatedSet)> {
    (0..=fs.full()).map(|m| (m, fs.located_of_mask(m))).collect()
}

/// The closed sets, which are what located sets name.
pub fn closed_masks(fs: &FiniteSpace) -> Vec<u32> {
    (0..=fs.full()).filter(|&m| fs.is_closed(m)).collect()
}

/// `P` on the closure of every subset.
pub fn brute_forall(fs: &FiniteSpace, p: impl Fn(u32) -> bool) -> bool {
    (0..=fs.full()).all(|m| p(fs.closure(m)))
}

/// `min_{a ∈ A} d(x, a)`.
pub fn brute_distance(fs: &FiniteSpace, x: usize, a: u32) -> Result<Rational> {
    points(a).filter_map(|y| fs.dist(x, y).cloned()).min().ok_or(Error::EmptySetArgument)
}

/// `max_{k ∈ K} d(x, k)`, zero on the empty set.
pub fn brute_radius(fs: &FiniteSpace, x: usize, k: u32) -> Rational {
    points(k).filter_map(|y| fs.dist(x, y).cloned()).max().unwrap_or_else(|| int(0))
}

pub fn brute_hausdorff(fs: &FiniteSpace, a: u32, b: u32) -> Result<Rational> {
    let directed = |p: u32, q: u32| -> Result<Rational> {
        points(p).map(|x| brute_distance(fs, x, q)).try_fold(int(0), |acc, d| Ok(acc.max(d?)))
    };
    if a == 0 || b == 0 {
        return Err(Error::EmptySetArgument);
    }
    Ok(directed(a, b)?.max(directed(b, a)?))
}

/// Closed ball `{y : d(x, y) <= r}`.
pub fn brute_closed_ball(fs: &FiniteSpace, x: usize, r: &Rational) -> u32 {
    (0..fs.size()).filter(|&y| fs.dist(x, y).is_some_and(|d| d <= r)).fold(0, |m, y| m | 1 << y)
}

/// Spec of a set over the base: bit `n` says whether basic `n` meets it.
pub fn brute_spec(fs: &FiniteSpace, a: u32) -> Vec<bool> {
    fs.base().iter().map(|&b| b & a != 0).collect()
}

/// Some closed set realizes the bits.
pub fn brute_consistent(fs: &FiniteSpace, bits: &[bool]) -> bool {
    closed_masks(fs).into_iter().any(|m| brute_spec(fs, m) == bits)
}

/// Some basic holds `x` inside `u`.
pub fn brute_basis(fs: &FiniteSpace, x: usize, u: u32) -> bool {
    fs.base().iter().any(|&b| b >> x & 1 == 1 && b & !u == 0)
}

/// Predicates over point masks, mirrored to the generic form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MaskPredicate {
    Subset(u32),
    Meets(u32),
    IsEmptyOr(Box<MaskPredicate>),
    And(Vec<MaskPredicate>),
    Or(Vec<MaskPredicate>),
}

impl MaskPredicate {
    pub fn holds(&self, a: u32) -> bool {
        match self {
            MaskPredicate::Subset(u) => a & !u == 0,
            MaskPredicate::Meets(u) => a & u != 0,
            MaskPredicate::IsEmptyOr(p) => a == 0 || p.holds(a),
            MaskPredicate::And(ps) => ps.iter().all(|p| p.holds(a)),
            MaskPredicate::Or(ps) => ps.iter().any(|p| p.holds(a)),
        }
    }

    /// Open masks become open sets; a non-open mask is read as its interior.
    pub fn to_predicate(&self, fs: &Arc<FiniteSpace>) -> Predicate {
        let open = |u: u32| -> OpenSet { fs.open_of_mask(fs.interior(u)) };
        match self {
            MaskPredicate::Subset(u) => Predicate::Subset(open(*u)),
            MaskPredicate::Meets(u) => Predicate::Meets(open(*u)),
            MaskPredicate::IsEmptyOr(p) => Predicate::IsEmptyOr(Box::new(p.to_predicate(fs))),
            MaskPredicate::And(ps) => Predicate::And(ps.iter().map(|p| p.to_predicate(fs)).collect()),
            MaskPredicate::Or(ps) => Predicate::Or(ps.iter().map(|p| p.to_predicate(fs)).collect()),
        }
    }
}

/// A fixed family of small spaces: metric ones (discrete topology) and
/// non-Hausdorff topologies, all with at most four points.
pub fn oracle_spaces() -> Vec<Arc<FiniteSpace>> {
    let names = |k: usize| (0..k).map(|i| format!("p{i}")).collect::<Vec<_>>();
    let metric = |k: usize, d: &dyn Fn(usize, usize) -> Rational| {
        let dist = (0..k).map(|i| (0..k).map(|j| if i == j { int(0) } else { d(i, j) }).collect()).collect();
        FiniteSpace::from_metric(names(k), dist).expect("valid metric")
    };
    let topo = |label: &str, k: usize, opens: &[u32]| {
        FiniteSpace::from_topology(label, names(k), opens.to_vec()).expect("valid topology")
    };
    vec![
        metric(1, &|_, _| int(1)),
        metric(2, &|_, _| int(1)),
        metric(3, &|_, _| int(1)),
        metric(3, &|i, j| int(i.abs_diff(j) as i64)),
        metric(3, &|i, j| if i.min(j) == 0 && i.max(j) == 2 { rat(3, 2) } else { int(1) }),
        metric(4, &|_, _| int(1)),
        metric(4, &|i, j| rat(i.abs_diff(j) as i64, 2)),
        metric(4, &|i, j| if i / 2 == j / 2 { rat(1, 3) } else { int(2) }),
        topo("sierpinski", 2, &[0, 0b01, 0b11]),
        topo("chain3", 3, &[0, 0b001, 0b011, 0b111]),
        topo("fork3", 3, &[0, 0b001, 0b010, 0b011, 0b111]),
        topo("indiscrete2", 2, &[0, 0b11]),
        topo("pairs4", 4, &[0, 0b0011, 0b1100, 0b1111]),
    ]
}

fn points(m: u32) -> impl Iterator<Item = usize> {
    (0..32).filter(move |&i| m >> i & 1 == 1)
}
