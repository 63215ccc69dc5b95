//! Represented spaces with a countable base of decodable basic opens.
//!
//! A [`Space`] decodes natural-number indices into basic-open descriptions
//! and decides a sound syntactic containment between them. Points are named
//! by enumerations of basic neighbourhoods ([`PointName`]).

use std::fmt;
use std::sync::Arc;

use crate::kernel::Enumerator;
use crate::rational::Rational;

pub mod cantor;
pub mod finite;
pub mod line;
pub mod qhat;
pub mod registry;
pub mod star;

pub use registry::{registry_get, Registered};

/// Index of a basic open set (or, inside an ercs, of `U_n` / `B_n`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct BaseIndex(pub u128);

impl fmt::Display for BaseIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// Index into a metric space's dense sequence.
pub type PointIndex = u128;

/// Decoded basic open set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Basic {
    /// Open rational interval, traced on the carrier of a line space.
    Interval { lo: Rational, hi: Rational },
    /// Cylinder of all infinite words extending the given finite word.
    Cylinder(cantor::Word),
    /// Open ball in the star space.
    StarBall { center: star::StarPoint, radius: Rational },
    /// `(lo, hi) ∩ Q` in the one-point compactification of `Q`.
    QhatInterval { lo: Rational, hi: Rational },
    /// `{∞} ∪ (Q \ I)` for the finite set `I`.
    QhatCofinite(Vec<Rational>),
    /// Subset of a finite space, as a bit mask over its points.
    Finite(u32),
}

/// Countably based represented space.
pub trait Space: Send + Sync {
    fn name(&self) -> String;

    /// Decodes a basic index; `None` only for indices outside a finite base.
    fn decode(&self, n: BaseIndex) -> Option<Basic>;

    /// Sound syntactic containment: `Some(true)` certifies `a ⊆ b`,
    /// `Some(false)` certifies non-containment, `None` is "unknown".
    fn formal_subset(&self, a: &Basic, b: &Basic) -> Option<bool>;

    /// A complete enumeration of basic indices, front-loaded with a coarse to
    /// fine grid where the space has one.
    fn search_order(&self) -> Enumerator<BaseIndex>;

    /// Number of basics, when the base is finite.
    fn basic_count(&self) -> Option<u128> {
        None
    }

    /// Basics whose union is `a ∩ b`, as far as they can be listed.
    fn basic_meet(&self, _a: BaseIndex, _b: BaseIndex) -> Vec<BaseIndex> {
        Vec::new()
    }

    fn formal_subset_idx(&self, m: BaseIndex, n: BaseIndex) -> Option<bool> {
        if m == n {
            return Some(true);
        }
        match (self.decode(m), self.decode(n)) {
            (Some(a), Some(b)) => self.formal_subset(&a, &b),
            _ => None,
        }
    }
}

/// A name of a point: an enumeration of basic neighbourhoods, sound at every
/// stage and complete in the limit.
#[derive(Clone)]
pub struct PointName {
    pub space: Arc<dyn Space>,
    pub neighborhoods: Enumerator<BaseIndex>,
}

impl fmt::Debug for PointName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PointName({})", self.space.name())
    }
}

impl PointName {
    pub fn new(space: Arc<dyn Space>, neighborhoods: Enumerator<BaseIndex>) -> Self {
        PointName { space, neighborhoods }
    }
}

/// Computable metric space over a countable dense sequence; basic opens are
/// rational balls around dense points.
pub trait MetricSpace: Space {
    /// Rational `q` with `|q - d(dense i, dense j)| <= 2^-precision`.
    fn distance(&self, i: PointIndex, j: PointIndex, precision: u32) -> Rational;

    /// Error bound of [`MetricSpace::distance`] at a precision.
    fn distance_error(&self, precision: u32) -> Rational {
        crate::rational::dyadic(precision)
    }

    /// Basic index of the open ball `B(dense center, radius)`.
    fn ball_index(&self, center: PointIndex, radius: &Rational) -> Option<BaseIndex>;

    /// The `j`-th dense point lying inside basic `n`, if any.
    fn dense_in_basic(&self, n: BaseIndex, j: u64) -> Option<PointIndex>;

    /// Basics contained in `{y : d(dense center, y) > radius}`; their union
    /// over all `k` is that whole set.
    fn exterior_parts(&self, _center: PointIndex, _radius: &Rational, _k: u32) -> Vec<BaseIndex> {
        Vec::new()
    }

    /// Dense points whose `2^-level` balls cover the space (compact spaces
    /// only; empty when unsupported).
    fn net(&self, _level: u32) -> Vec<PointIndex> {
        Vec::new()
    }

    /// Whether every closed ball is compact and the space can name it.
    fn proper_balls(&self) -> bool {
        false
    }

    /// Exact cover test `B̄(dense center, radius) ⊆ ⋃ cover` for spaces with
    /// `proper_balls()`; `None` otherwise or when undecided.
    fn closed_ball_covered(&self, _center: PointIndex, _radius: &Rational, _cover: &[BaseIndex]) -> Option<bool> {
        None
    }

    /// Dense index of an explicitly given point description, used by
    /// fixtures to build names of rational points.
    fn dense_index_of_rational(&self, _q: &Rational) -> Option<PointIndex> {
        None
    }
}
