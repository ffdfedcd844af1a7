use super::{decide_exact, prove_unrealizable_relaxed, Budget, RelaxedVerdict, SearchStats};
use crate::bits::EdgeSet;
use crate::graph::{Graph, PairIndex};
use crate::prescription::{MissedPairSet, Prescription};
use crate::subgraph::enumerate_cycles;
use serde::{Deserialize, Serialize};
use std::collections::HashSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CatalogKind {
    Connected,
    CycleUnion,
    Host,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub kind: CatalogKind,
    pub edges: EdgeSet,
}

/// Candidate subgraphs for elimination, as edge sets of the host.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SubgraphCatalog {
    pub host_edges: usize,
    pub entries: Vec<CatalogEntry>,
}

impl SubgraphCatalog {
    /// Connected edge subsets with at most `max_edges` edges, unions of two or
    /// three cycles within the same size limit, and the host itself.
    pub fn standard(host: &Graph, max_edges: usize) -> SubgraphCatalog {
        let mut seen = HashSet::new();
        let mut entries = Vec::new();
        for edges in connected_subsets(host, max_edges) {
            if seen.insert(edges) {
                entries.push(CatalogEntry {
                    kind: CatalogKind::Connected,
                    edges,
                });
            }
        }
        let cycles = enumerate_cycles(host);
        for (i, a) in cycles.iter().enumerate() {
            for (j, b) in cycles.iter().enumerate().skip(i + 1) {
                let ab = a.edges.union(b.edges);
                if ab.len() > max_edges {
                    continue;
                }
                if seen.insert(ab) {
                    entries.push(CatalogEntry {
                        kind: CatalogKind::CycleUnion,
                        edges: ab,
                    });
                }
                for c in &cycles[j + 1..] {
                    let abc = ab.union(c.edges);
                    if abc.len() <= max_edges && seen.insert(abc) {
                        entries.push(CatalogEntry {
                            kind: CatalogKind::CycleUnion,
                            edges: abc,
                        });
                    }
                }
            }
        }
        SubgraphCatalog::with_host(host, entries, &seen)
    }

    /// Only the host itself.
    pub fn host_only(host: &Graph) -> SubgraphCatalog {
        SubgraphCatalog::with_host(host, Vec::new(), &HashSet::new())
    }

    fn with_host(host: &Graph, mut entries: Vec<CatalogEntry>, seen: &HashSet<EdgeSet>) -> SubgraphCatalog {
        let all = host.all_edges();
        if !seen.contains(&all) {
            entries.push(CatalogEntry {
                kind: CatalogKind::Host,
                edges: all,
            });
        } else if let Some(e) = entries.iter_mut().find(|e| e.edges == all) {
            e.kind = CatalogKind::Host;
        }
        SubgraphCatalog {
            host_edges: host.edge_count(),
            entries,
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Connected edge subsets of size `1..=max_edges`, grown from each edge.
pub fn connected_subsets(g: &Graph, max_edges: usize) -> Vec<EdgeSet> {
    let mut seen: HashSet<EdgeSet> = HashSet::new();
    let mut frontier: Vec<EdgeSet> = (0..g.edge_count()).map(EdgeSet::singleton).collect();
    seen.extend(frontier.iter().copied());
    let mut out = frontier.clone();
    for _ in 1..max_edges {
        let mut next = Vec::new();
        for s in &frontier {
            let verts = g.vertices_of(*s);
            for e in g.all_edges().difference(*s).iter() {
                let (u, v) = g.edge(e);
                if verts >> u & 1 == 0 && verts >> v & 1 == 0 {
                    continue;
                }
                let mut t = *s;
                t.insert(e);
                if seen.insert(t) {
                    next.push(t);
                }
            }
        }
        next.sort_unstable();
        out.extend(next.iter().copied());
        frontier = next;
    }
    out
}

fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|i| (i as f64).ln()).sum()
}

/// Log of the number of crossing orders of `p` restricted to `edges`.
pub fn ordering_cost(p: &Prescription, edges: EdgeSet) -> f64 {
    edges
        .iter()
        .map(|e| ln_factorial(p.crossings(e).intersection(edges).len()))
        .sum()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EliminationPolicy {
    /// Try the relaxed prover first, with this budget.
    pub relaxed: Option<Budget>,
    /// Exact budget for the first sweep over the catalog.
    pub exact_first: Budget,
    /// Exact budget for the escalation sweep over entries the first left open.
    pub exact_escalated: Budget,
}

impl Default for EliminationPolicy {
    fn default() -> EliminationPolicy {
        EliminationPolicy {
            relaxed: Some(Budget::nodes(300)),
            exact_first: Budget::nodes(200_000),
            exact_escalated: Budget::default(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EliminationMethod {
    Relaxed,
    Exact,
}

/// A subgraph on which the restricted prescription has no drawing.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Elimination {
    pub kind: CatalogKind,
    /// Host edge indices of the subgraph.
    pub edges: Vec<usize>,
    pub crossings: usize,
    pub method: EliminationMethod,
    pub stats: SearchStats,
    /// Catalog entries tried, including this one.
    pub tried: usize,
}

/// Walk `catalog` in ascending estimated ordering cost and return the first
/// subgraph whose restriction of `missed` is unrealizable.
pub fn find_unrealizable_subgraph(
    host: &Graph,
    missed: &MissedPairSet,
    catalog: &SubgraphCatalog,
    policy: &EliminationPolicy,
) -> Option<Elimination> {
    let index = PairIndex::new(host);
    let p = Prescription::from_missed(host, &index, missed).ok()?;
    let mut ranked: Vec<(f64, usize, EdgeSet, CatalogKind)> = catalog
        .entries
        .iter()
        .filter(|e| e.edges.iter().all(|x| x < host.edge_count()))
        .map(|e| (ordering_cost(&p, e.edges), e.edges.len(), e.edges, e.kind))
        .collect();
    ranked.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));

    let mut tried = 0;
    let mut open = Vec::new();
    for &(_, _, edges, kind) in &ranked {
        tried += 1;
        let (sub, _) = p.restrict_to_edges(edges);
        if let Some(b) = policy.relaxed {
            if let Ok((RelaxedVerdict::Unrealizable, stats)) = prove_unrealizable_relaxed(&sub, b) {
                return Some(found(kind, edges, &sub, EliminationMethod::Relaxed, stats, tried));
            }
        }
        let (v, stats) = decide_exact(&sub, policy.exact_first);
        if v.is_unrealizable() {
            return Some(found(kind, edges, &sub, EliminationMethod::Exact, stats, tried));
        }
        if !v.is_realizable() {
            open.push((edges, kind));
        }
    }
    for (edges, kind) in open {
        tried += 1;
        let (sub, _) = p.restrict_to_edges(edges);
        let (v, stats) = decide_exact(&sub, policy.exact_escalated);
        if v.is_unrealizable() {
            return Some(found(kind, edges, &sub, EliminationMethod::Exact, stats, tried));
        }
    }
    None
}

fn found(
    kind: CatalogKind,
    edges: EdgeSet,
    sub: &Prescription,
    method: EliminationMethod,
    stats: SearchStats,
    tried: usize,
) -> Elimination {
    Elimination {
        kind,
        edges: edges.to_vec(),
        crossings: sub.total_crossings(),
        method,
        stats,
        tried,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_named;

    #[test]
    fn connected_subsets_of_a_triangle() {
        let g = build_named("cycle", &[3]).unwrap();
        assert_eq!(connected_subsets(&g, 3).len(), 7);
        let c4 = build_named("cycle", &[4]).unwrap();
        // 4 singletons, 4 paths of length 2, 4 of length 3, the cycle.
        assert_eq!(connected_subsets(&c4, 4).len(), 13);
    }

    #[test]
    fn bowtie_thrackle_is_eliminated() {
        let g = build_named("bowtie", &[]).unwrap();
        let cat = SubgraphCatalog::standard(&g, 6);
        assert_eq!(cat.entries.last().unwrap().edges, g.all_edges());
        let e = find_unrealizable_subgraph(&g, &MissedPairSet::empty(), &cat, &EliminationPolicy::default()).unwrap();
        assert_eq!(e.edges.len(), 6);
        assert_eq!(e.crossings, 5);
    }

    #[test]
    fn realizable_prescription_has_no_elimination() {
        // The prism missing its three pairs of matching triangle edges has 15 crossings.
        let g = build_named("prism", &[]).unwrap();
        let idx = PairIndex::new(&g);
        let pairs: Vec<(usize, usize)> = (0..g.edge_count())
            .filter_map(|e| {
                let (u, v) = g.edge(e);
                let f = g.edge_index(u ^ 1, v ^ 1)?;
                (u % 2 == 0 && u / 2 != v / 2).then_some((e, f))
            })
            .collect();
        assert_eq!(pairs.len(), 3);
        let missed = MissedPairSet::from_edge_pairs(&idx, &pairs).unwrap();
        let cat = SubgraphCatalog::standard(&g, 9);
        assert!(find_unrealizable_subgraph(&g, &missed, &cat, &EliminationPolicy::default()).is_none());
    }
}
