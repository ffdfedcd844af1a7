use crate::graph::{Graph, PairIndex};
use crate::prescription::MissedPairSet;
use crate::realize::{find_unrealizable_subgraph, Elimination, EliminationPolicy, SubgraphCatalog};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EliminationEntry {
    pub missed: Vec<[usize; 2]>,
    /// None marks a survivor.
    pub eliminated_by: Option<Elimination>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EliminationReport {
    pub host: String,
    pub candidates: usize,
    pub eliminated: usize,
    pub survivors: Vec<Vec<[usize; 2]>>,
    pub all_eliminated: bool,
    pub entries: Vec<EliminationEntry>,
}

impl EliminationReport {
    /// Eliminations grouped by subgraph size: `(edges, count)`.
    pub fn size_histogram(&self) -> Vec<(usize, usize)> {
        let mut h = std::collections::BTreeMap::new();
        for e in self.entries.iter().filter_map(|e| e.eliminated_by.as_ref()) {
            *h.entry(e.edges.len()).or_insert(0) += 1;
        }
        h.into_iter().collect()
    }
}

pub fn eliminate_all(
    host: &Graph,
    candidates: &[MissedPairSet],
    catalog: &SubgraphCatalog,
    policy: &EliminationPolicy,
) -> EliminationReport {
    let index = PairIndex::new(host);
    let entries: Vec<EliminationEntry> = candidates
        .par_iter()
        .map(|m| EliminationEntry {
            missed: m.edge_pairs(&index),
            eliminated_by: find_unrealizable_subgraph(host, m, catalog, policy),
        })
        .collect();
    let survivors: Vec<Vec<[usize; 2]>> = entries
        .iter()
        .filter(|e| e.eliminated_by.is_none())
        .map(|e| e.missed.clone())
        .collect();
    EliminationReport {
        host: host.name().to_string(),
        candidates: entries.len(),
        eliminated: entries.len() - survivors.len(),
        all_eliminated: survivors.is_empty(),
        survivors,
        entries,
    }
}
