//! Deciding whether a prescription can be met by a good drawing.
//!
//! Two engines are provided. The relaxed engine enumerates crossing orders and
//! tests planarity of the resulting planarization; a prescription for which
//! every order gives a non-planar planarization has no drawing. The exact
//! engine inserts edges one at a time into a plane map, routing each new edge
//! through faces so that it crosses exactly its prescribed partners. It finds
//! a drawing whenever one exists.

mod catalog;
mod drawing;
mod exact;
mod layout;
mod planarity;
mod relaxed;

pub use catalog::{
    connected_subsets, find_unrealizable_subgraph, ordering_cost, CatalogEntry, CatalogKind, Elimination,
    EliminationMethod, EliminationPolicy, SubgraphCatalog,
};
pub use drawing::{verify_drawing, CombinatorialDrawing, CrossingReport, Segment};
pub use exact::{decide_exact, decide_exact_with, ExactOptions, ExactVerdict};
pub use layout::{attach_coordinates, coordinates_are_plane, extract_drawing, layout, render_svg};
pub use planarity::{is_planar_graph, planarity_test, Planarization};
pub use relaxed::{build_planarization, prove_unrealizable_relaxed, CrossingOrders, RelaxedVerdict};

use serde::{Deserialize, Serialize};
use std::time::{Duration, Instant};

/// Search limits. Exhausting either is reported as its own outcome.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Budget {
    pub max_nodes: u64,
    /// Infinite when absent; serialized as `null` in that case.
    #[serde(with = "seconds", default = "seconds::infinite")]
    pub max_seconds: f64,
}

mod seconds {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn infinite() -> f64 {
        f64::INFINITY
    }

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_some(v)
        } else {
            s.serialize_none()
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::INFINITY))
    }
}

impl Budget {
    pub const UNLIMITED: Budget = Budget {
        max_nodes: u64::MAX,
        max_seconds: f64::INFINITY,
    };

    pub fn nodes(max_nodes: u64) -> Budget {
        Budget {
            max_nodes,
            max_seconds: f64::INFINITY,
        }
    }

    pub(crate) fn start(&self) -> Meter {
        Meter {
            budget: *self,
            started: Instant::now(),
            nodes: 0,
            exhausted: false,
        }
    }
}

impl Default for Budget {
    fn default() -> Budget {
        Budget {
            max_nodes: 50_000_000,
            max_seconds: 600.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct SearchStats {
    pub nodes: u64,
    pub millis: u64,
}

pub(crate) struct Meter {
    budget: Budget,
    started: Instant,
    pub(crate) nodes: u64,
    pub(crate) exhausted: bool,
}

impl Meter {
    /// Count one node; returns false once the budget is gone.
    #[inline]
    pub(crate) fn tick(&mut self) -> bool {
        self.nodes += 1;
        if self.nodes > self.budget.max_nodes
            || (self.nodes & 0x3ff == 0
                && self.budget.max_seconds.is_finite()
                && self.started.elapsed() > Duration::from_secs_f64(self.budget.max_seconds))
        {
            self.exhausted = true;
        }
        !self.exhausted
    }

    pub(crate) fn stats(&self) -> SearchStats {
        SearchStats {
            nodes: self.nodes,
            millis: self.started.elapsed().as_millis() as u64,
        }
    }
}
