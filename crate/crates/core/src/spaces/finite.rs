//! Finite spaces given by a rational metric or an explicit topology. Sets
//! are bit masks over the points; everything is decidable by exhaustion.

use std::sync::Arc;

use super::{BaseIndex, Basic, MetricSpace, PointIndex, PointName, Space};
use crate::error::{Error, Result};
use crate::kernel::{Enumerator, Fuel, Outcome};
use crate::rational::{parse_rational, Rational};
use crate::sets::{ClosedSet, CompactSet, LocatedSet, OpenSet, OvertSet};
use num_traits::{Signed, Zero};

/// Oracle spaces are capped well below the mask width.
pub const MAX_POINTS: usize = 8;

pub struct FiniteSpace {
    label: String,
    points: Vec<String>,
    metric: Option<Vec<Vec<Rational>>>,
    base: Vec<u32>,
    opens: Vec<u32>,
}

impl FiniteSpace {
    /// Metric space; the induced topology is discrete, every nonempty subset
    /// is a basic, and basic `n` is mask `n + 1`.
    pub fn from_metric(points: Vec<String>, dist: Vec<Vec<Rational>>) -> Result<Arc<FiniteSpace>> {
        let k = points.len();
        check_size(k)?;
        if dist.len() != k || dist.iter().any(|r| r.len() != k) {
            return Err(Error::MalformedSpace("distance matrix has the wrong shape".into()));
        }
        for i in 0..k {
            if !dist[i][i].is_zero() {
                return Err(Error::MalformedSpace("d(p,p) must be 0".into()));
            }
            for j in 0..k {
                if dist[i][j] != dist[j][i] {
                    return Err(Error::MalformedSpace("metric is not symmetric".into()));
                }
                if i != j && !dist[i][j].is_positive() {
                    return Err(Error::MalformedSpace("distinct points need positive distance".into()));
                }
                for l in 0..k {
                    if dist[i][l] > &dist[i][j] + &dist[j][l] {
                        return Err(Error::MalformedSpace("triangle inequality fails".into()));
                    }
                }
            }
        }
        let full = full_mask(k);
        let label = format!("finite:{}", render_metric(&points, &dist));
        Ok(Arc::new(FiniteSpace {
            label,
            points,
            metric: Some(dist),
            base: (1..=full).collect(),
            opens: (0..=full).collect(),
        }))
    }

    /// Topological space from its full family of opens (closed under finite
    /// unions and intersections, containing `∅` and the whole set). The base
    /// is the family of nonempty opens.
    pub fn from_topology(label: impl Into<String>, points: Vec<String>, opens: Vec<u32>) -> Result<Arc<FiniteSpace>> {
        let k = points.len();
        check_size(k)?;
        let full = full_mask(k);
        let mut opens: Vec<u32> = opens.into_iter().map(|m| m & full).collect();
        opens.sort_unstable();
        opens.dedup();
        if !opens.contains(&0) || !opens.contains(&full) {
            return Err(Error::MalformedSpace("opens must contain the empty set and the whole space".into()));
        }
        for &a in &opens {
            for &b in &opens {
                if !opens.contains(&(a | b)) || !opens.contains(&(a & b)) {
                    return Err(Error::MalformedSpace("opens are not closed under union and intersection".into()));
                }
            }
        }
        let base = opens.iter().copied().filter(|&m| m != 0).collect();
        Ok(Arc::new(FiniteSpace { label: label.into(), points, metric: None, base, opens }))
    }

    /// Parses `{p1,..,pk; d(pi,pj)=r, ...}`; the symmetric closure is taken
    /// and every distinct pair must receive a distance.
    pub fn parse(literal: &str) -> Result<Arc<FiniteSpace>> {
        let bad = |m: &str| Error::MalformedLiteral(format!("{m} in `{literal}`"));
        let body =
            literal.trim().strip_prefix('{').and_then(|r| r.strip_suffix('}')).ok_or_else(|| bad("expected braces"))?;
        let (pts, dists) = body.split_once(';').unwrap_or((body, ""));
        let points: Vec<String> = pts.split(',').map(|p| p.trim().to_string()).collect();
        if points.iter().any(|p| p.is_empty() || !p.chars().all(|c| c.is_alphanumeric() || c == '_')) {
            return Err(bad("bad point name"));
        }
        for (i, p) in points.iter().enumerate() {
            if points[..i].contains(p) {
                return Err(bad("duplicate point"));
            }
        }
        let k = points.len();
        check_size(k).map_err(|_| bad("too many points"))?;
        let pos = |name: &str| points.iter().position(|p| p == name.trim());
        let mut d: Vec<Vec<Option<Rational>>> = vec![vec![None; k]; k];
        for i in 0..k {
            d[i][i] = Some(Rational::zero());
        }
        for entry in split_top(dists) {
            let e = entry.trim();
            if e.is_empty() {
                continue;
            }
            let (lhs, rhs) = e.split_once('=').ok_or_else(|| bad("distance needs `=`"))?;
            let args = lhs
                .trim()
                .strip_prefix("d(")
                .and_then(|r| r.strip_suffix(')'))
                .ok_or_else(|| bad("distance must read d(p,q)"))?;
            let (a, b) = args.split_once(',').ok_or_else(|| bad("distance must read d(p,q)"))?;
            let (i, j) = (pos(a).ok_or_else(|| bad("unknown point"))?, pos(b).ok_or_else(|| bad("unknown point"))?);
            let r = parse_rational(rhs).map_err(|_| bad("bad distance value"))?;
            for (x, y) in [(i, j), (j, i)] {
                if let Some(old) = &d[x][y] {
                    if *old != r {
                        return Err(bad("conflicting distances"));
                    }
                }
                d[x][y] = Some(r.clone());
            }
        }
        let mut dist = vec![vec![Rational::zero(); k]; k];
        for i in 0..k {
            for j in 0..k {
                dist[i][j] = d[i][j].clone().ok_or_else(|| bad("unspecified distance"))?;
            }
        }
        FiniteSpace::from_metric(points, dist)
    }

    pub fn size(&self) -> usize {
        self.points.len()
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn point_index(&self, name: &str) -> Option<usize> {
        self.points.iter().position(|p| p == name)
    }

    pub fn full(&self) -> u32 {
        full_mask(self.points.len())
    }

    pub fn is_metric(&self) -> bool {
        self.metric.is_some()
    }

    pub fn dist(&self, i: usize, j: usize) -> Option<&Rational> {
        self.metric.as_ref().map(|d| &d[i][j])
    }

    pub fn base(&self) -> &[u32] {
        &self.base
    }

    pub fn opens(&self) -> &[u32] {
        &self.opens
    }

    pub fn is_open(&self, m: u32) -> bool {
        self.opens.contains(&m)
    }

    pub fn is_closed(&self, m: u32) -> bool {
        self.is_open(self.full() & !m)
    }

    pub fn base_mask(&self, n: BaseIndex) -> Option<u32> {
        self.base.get(usize::try_from(n.0).ok()?).copied()
    }

    pub fn index_of_mask(&self, m: u32) -> Option<BaseIndex> {
        self.base.iter().position(|&b| b == m).map(|i| BaseIndex(i as u128))
    }

    /// Largest open inside `m`.
    pub fn interior(&self, m: u32) -> u32 {
        self.opens.iter().filter(|&&o| o & !m == 0).fold(0, |a, &o| a | o)
    }

    /// Smallest closed set containing `m`.
    pub fn closure(&self, m: u32) -> u32 {
        self.full() & !self.interior(self.full() & !m)
    }

    /// Base indices contained in `m`.
    pub fn basics_inside(&self, m: u32) -> Vec<BaseIndex> {
        (0..self.base.len()).filter(|&i| self.base[i] & !m == 0).map(|i| BaseIndex(i as u128)).collect()
    }

    pub fn union_of(&self, cover: &[BaseIndex]) -> u32 {
        cover.iter().filter_map(|&n| self.base_mask(n)).fold(0, |a, m| a | m)
    }

    pub fn point_name(self: &Arc<Self>, i: usize) -> PointName {
        let nb: Vec<BaseIndex> =
            (0..self.base.len()).filter(|&n| self.base[n] >> i & 1 == 1).map(|n| BaseIndex(n as u128)).collect();
        PointName::new(self.clone(), Enumerator::finite(nb))
    }

    /// Open set with mask `m` (which should be open); parts are all basics
    /// inside it.
    pub fn open_of_mask(self: &Arc<Self>, m: u32) -> OpenSet {
        OpenSet::new(self.clone(), Enumerator::finite(self.basics_inside(m)))
    }

    pub fn closed_of_mask(self: &Arc<Self>, m: u32) -> ClosedSet {
        ClosedSet::new(self.open_of_mask(self.full() & !m))
    }

    pub fn compact_of_mask(self: &Arc<Self>, m: u32) -> CompactSet {
        let sp = self.clone();
        CompactSet::new(self.clone(), move |cover: &[BaseIndex], _f: Fuel| {
            if m & !sp.union_of(cover) == 0 {
                Outcome::Accepted(0)
            } else {
                Outcome::Pending
            }
        })
    }

    pub fn overt_of_mask(self: &Arc<Self>, m: u32) -> OvertSet {
        let sp = self.clone();
        OvertSet::from_probe(self.clone(), move |n: BaseIndex, _f: Fuel| match sp.base_mask(n) {
            Some(b) if b & m != 0 => Outcome::Accepted(0),
            _ => Outcome::Pending,
        })
    }

    /// Located set of the closed set `m`.
    pub fn located_of_mask(self: &Arc<Self>, m: u32) -> LocatedSet {
        LocatedSet::new(self.closed_of_mask(m), self.overt_of_mask(m))
    }

    pub fn mask_of_points(&self, names: &[&str]) -> Option<u32> {
        names.iter().map(|n| self.point_index(n).map(|i| 1u32 << i)).sum()
    }
}

fn check_size(k: usize) -> Result<()> {
    if k == 0 || k > MAX_POINTS {
        return Err(Error::MalformedSpace(format!("finite spaces need 1..={MAX_POINTS} points")));
    }
    Ok(())
}

pub fn full_mask(k: usize) -> u32 {
    (1u32 << k) - 1
}

/// Splits on commas that are not inside parentheses.
fn split_top(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let (mut depth, mut start) = (0i32, 0usize);
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

fn render_metric(points: &[String], d: &[Vec<Rational>]) -> String {
    let mut ds = Vec::new();
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            ds.push(format!("d({},{})={}", points[i], points[j], crate::rational::fmt_rational(&d[i][j])));
        }
    }
    format!("{{{};{}}}", points.join(","), ds.join(","))
}

impl Space for FiniteSpace {
    fn name(&self) -> String {
        self.label.clone()
    }

    fn decode(&self, n: BaseIndex) -> Option<Basic> {
        self.base_mask(n).map(Basic::Finite)
    }

    fn formal_subset(&self, a: &Basic, b: &Basic) -> Option<bool> {
        match (a, b) {
            (Basic::Finite(x), Basic::Finite(y)) => Some(x & !y == 0),
            _ => None,
        }
    }

    fn search_order(&self) -> Enumerator<BaseIndex> {
        Enumerator::finite((0..self.base.len() as u128).map(BaseIndex).collect())
    }

    fn basic_count(&self) -> Option<u128> {
        Some(self.base.len() as u128)
    }

    fn basic_meet(&self, a: BaseIndex, b: BaseIndex) -> Vec<BaseIndex> {
        match (self.base_mask(a), self.base_mask(b)) {
            (Some(x), Some(y)) => self.basics_inside(x & y),
            _ => Vec::new(),
        }
    }
}

impl FiniteSpace {
    /// The dense sequence cycles through the points.
    fn wrap(&self, i: PointIndex) -> usize {
        (i % self.size() as PointIndex) as usize
    }
}

impl MetricSpace for FiniteSpace {
    fn distance_error(&self, _precision: u32) -> Rational {
        Rational::zero()
    }

    fn distance(&self, i: PointIndex, j: PointIndex, _precision: u32) -> Rational {
        let (i, j) = (self.wrap(i), self.wrap(j));
        self.metric.as_ref().expect("metric finite space")[i][j].clone()
    }

    fn ball_index(&self, center: PointIndex, radius: &Rational) -> Option<BaseIndex> {
        let d = self.metric.as_ref()?;
        let m = (0..self.size()).filter(|&j| d[self.wrap(center)][j] < *radius).fold(0u32, |a, j| a | 1 << j);
        self.index_of_mask(m)
    }

    fn dense_in_basic(&self, n: BaseIndex, j: u64) -> Option<PointIndex> {
        let m = self.base_mask(n)?;
        let pts: Vec<usize> = (0..self.size()).filter(|&i| m >> i & 1 == 1).collect();
        (!pts.is_empty()).then(|| pts[(j % pts.len() as u64) as usize] as PointIndex)
    }

    fn exterior_parts(&self, center: PointIndex, radius: &Rational, _k: u32) -> Vec<BaseIndex> {
        let Some(d) = self.metric.as_ref() else { return Vec::new() };
        let outside = (0..self.size()).filter(|&j| d[self.wrap(center)][j] > *radius).fold(0u32, |a, j| a | 1 << j);
        self.basics_inside(outside)
    }

    fn net(&self, _level: u32) -> Vec<PointIndex> {
        (0..self.size() as PointIndex).collect()
    }

    fn proper_balls(&self) -> bool {
        self.metric.is_some()
    }

    fn closed_ball_covered(&self, center: PointIndex, radius: &Rational, cover: &[BaseIndex]) -> Option<bool> {
        let d = self.metric.as_ref()?;
        let ball = (0..self.size()).filter(|&j| d[self.wrap(center)][j] <= *radius).fold(0u32, |a, j| a | 1 << j);
        Some(ball & !self.union_of(cover) == 0)
    }
}
