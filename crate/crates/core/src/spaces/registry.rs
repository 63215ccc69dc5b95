//! Named spaces with every structure each one supports.

use std::fmt;
use std::sync::Arc;

use super::cantor::{CantorSpace, Word};
use super::finite::FiniteSpace;
use super::line::{LineSet, LineSpace};
use super::qhat::QhatSpace;
use super::star::StarSpace;
use super::{MetricSpace, Space};
use crate::ercs::Ercs;
use crate::error::{Error, Result};
use crate::sets::CompactSet;

/// The concrete space behind a registry entry.
#[derive(Clone)]
pub enum SpaceKind {
    Line(Arc<LineSpace>),
    Cantor(Arc<CantorSpace>),
    Star(Arc<StarSpace>),
    Qhat(Arc<QhatSpace>),
    Finite(Arc<FiniteSpace>),
}

#[derive(Clone)]
pub struct Registered {
    pub name: String,
    pub kind: SpaceKind,
    pub space: Arc<dyn Space>,
    pub metric: Option<Arc<dyn MetricSpace>>,
    pub ercs: Option<Ercs>,
    /// Compact name of the whole space, when it is compact.
    pub whole_compact: Option<CompactSet>,
}

impl fmt::Debug for Registered {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Registered({}, metric: {}, ercs: {})", self.name, self.metric.is_some(), self.ercs.is_some())
    }
}

impl Registered {
    pub fn line(name: &str, sp: Arc<LineSpace>) -> Registered {
        Registered {
            name: name.into(),
            space: sp.clone(),
            metric: Some(sp.clone()),
            ercs: Some(Ercs::for_line(&sp)),
            whole_compact: sp.whole_compact(),
            kind: SpaceKind::Line(sp),
        }
    }

    pub fn finite(sp: Arc<FiniteSpace>) -> Registered {
        Registered {
            name: sp.name(),
            space: sp.clone(),
            metric: sp.is_metric().then(|| sp.clone() as Arc<dyn MetricSpace>),
            ercs: Some(Ercs::for_finite(&sp)),
            whole_compact: Some(sp.compact_of_mask(sp.full())),
            kind: SpaceKind::Finite(sp),
        }
    }

    pub fn require_ercs(&self) -> Result<&Ercs> {
        self.ercs.as_ref().ok_or_else(|| Error::NoErcs(self.name.clone()))
    }

    pub fn require_metric(&self) -> Result<&Arc<dyn MetricSpace>> {
        self.metric.as_ref().ok_or_else(|| Error::NoMetric(self.name.clone()))
    }
}

/// Looks up `real-line`, `unit-interval`, `cantor`, `star`, `qhat`,
/// `finite:{..}`, or `line:<set literal>` for a closed subspace of the line.
pub fn registry_get(name: &str) -> Result<Registered> {
    let name = name.trim();
    match name {
        "real-line" => Ok(Registered::line(name, LineSpace::real_line())),
        "unit-interval" => Ok(Registered::line(name, LineSpace::unit_interval())),
        "cantor" => {
            let c = CantorSpace::new();
            let e = Ercs::for_cantor(&c);
            Ok(Registered {
                name: name.into(),
                space: c.clone(),
                metric: None,
                whole_compact: Some(e.compact(Word::EMPTY.index())),
                ercs: Some(e),
                kind: SpaceKind::Cantor(c),
            })
        }
        "star" => {
            let s = StarSpace::new();
            Ok(Registered {
                name: name.into(),
                space: s.clone(),
                metric: Some(s.clone()),
                ercs: None,
                whole_compact: None,
                kind: SpaceKind::Star(s),
            })
        }
        "qhat" => {
            let q = QhatSpace::new();
            Ok(Registered {
                name: name.into(),
                space: q.clone(),
                metric: None,
                ercs: None,
                whole_compact: Some(q.whole_compact()),
                kind: SpaceKind::Qhat(q),
            })
        }
        _ => {
            if let Some(lit) = name.strip_prefix("finite:") {
                let fs = FiniteSpace::parse(lit).map_err(|e| match e {
                    Error::MalformedSpace(m) => Error::MalformedLiteral(m),
                    other => other,
                })?;
                Ok(Registered::finite(fs))
            } else if let Some(lit) = name.strip_prefix("line:") {
                let carrier = LineSet::parse(lit)?;
                Ok(Registered::line(name, LineSpace::with_carrier(name, carrier)?))
            } else {
                Err(Error::UnknownSpace(name.into()))
            }
        }
    }
}
