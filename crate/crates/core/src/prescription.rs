//! Missed-pair sets and the prescriptions they induce.

use crate::bits::{EdgeSet, PairSet};
use crate::error::{invalid, Result};
use crate::graph::{thrackle_number, Graph, PairIndex};
use crate::subgraph::SubgraphEmbedding;
use serde::{Deserialize, Serialize};

/// A set of non-incident edge pairs of a host graph that are declared not to cross.
///
/// Stored as a bit set over the host's canonical [`PairIndex`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MissedPairSet {
    pairs: PairSet,
}

impl MissedPairSet {
    pub fn empty() -> MissedPairSet {
        MissedPairSet { pairs: PairSet::EMPTY }
    }

    pub fn from_bits(index: &PairIndex, pairs: PairSet) -> Result<MissedPairSet> {
        if let Some(bad) = pairs.iter().find(|&i| i >= index.len()) {
            return invalid(format!("pair index {bad} out of range (host has {} pairs)", index.len()));
        }
        Ok(MissedPairSet { pairs })
    }

    /// Build from explicit edge pairs. Incident or out-of-range pairs are rejected.
    pub fn from_edge_pairs(index: &PairIndex, list: &[(usize, usize)]) -> Result<MissedPairSet> {
        let mut pairs = PairSet::EMPTY;
        for &(e, f) in list {
            match index.index_of(e, f) {
                Some(i) => pairs.insert(i),
                None => return invalid(format!("edges {e} and {f} do not form a non-incident pair")),
            }
        }
        Ok(MissedPairSet { pairs })
    }

    pub fn bits(&self) -> &PairSet {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.pairs.contains(i)
    }

    pub fn with(mut self, i: usize) -> MissedPairSet {
        self.pairs.insert(i);
        self
    }

    /// Sorted list of `[e, f]` edge pairs, the serialized form.
    pub fn edge_pairs(&self, index: &PairIndex) -> Vec<[usize; 2]> {
        self.pairs
            .iter()
            .map(|i| {
                let (e, f) = index.pair(i);
                [e, f]
            })
            .collect()
    }
}

/// Number of missed pairs with one edge in `a` and the other in `b`.
pub fn count_missed_between(index: &PairIndex, missed: &MissedPairSet, a: EdgeSet, b: EdgeSet) -> Result<usize> {
    if !a.is_disjoint(b) {
        return invalid("edge sets overlap");
    }
    Ok(missed.bits().intersection_len(&index.between(a, b)))
}

/// The map `P`: for each edge, the set of edges it must cross.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Prescription {
    host: Graph,
    crossings: Vec<EdgeSet>,
}

impl Prescription {
    /// Validate a raw crossing map against the good-drawing constraints.
    pub fn new(host: Graph, crossings: Vec<EdgeSet>) -> Result<Prescription> {
        let m = host.edge_count();
        if crossings.len() != m {
            return invalid(format!("prescription has {} entries for {m} edges", crossings.len()));
        }
        for (e, &set) in crossings.iter().enumerate() {
            if !set.is_subset(EdgeSet::full(m)) {
                return invalid(format!("edge {e} crosses a non-existent edge"));
            }
            if !set.is_disjoint(host.incident_to_edge(e)) {
                return invalid(format!("edge {e} is prescribed to cross itself or an incident edge"));
            }
            for f in set.iter() {
                if !crossings[f].contains(e) {
                    return invalid(format!("crossing {e}x{f} is not symmetric"));
                }
            }
        }
        Ok(Prescription { host, crossings })
    }

    /// `P(e)` = non-incident partners of `e` minus its missed partners.
    pub fn from_missed(host: &Graph, index: &PairIndex, missed: &MissedPairSet) -> Result<Prescription> {
        let m = host.edge_count();
        let mut crossings = vec![EdgeSet::EMPTY; m];
        for (i, &(e, f)) in index.pairs().iter().enumerate() {
            if !missed.contains(i) {
                crossings[e].insert(f);
                crossings[f].insert(e);
            }
        }
        if let Some(bad) = missed.bits().iter().find(|&i| i >= index.len()) {
            return invalid(format!("pair index {bad} out of range"));
        }
        Ok(Prescription {
            host: host.clone(),
            crossings,
        })
    }

    /// Every non-incident pair crosses.
    pub fn full(host: &Graph) -> Prescription {
        let index = PairIndex::new(host);
        Prescription::from_missed(host, &index, &MissedPairSet::empty()).unwrap()
    }

    pub fn host(&self) -> &Graph {
        &self.host
    }

    pub fn crossings(&self, e: usize) -> EdgeSet {
        self.crossings[e]
    }

    pub fn crossing_map(&self) -> &[EdgeSet] {
        &self.crossings
    }

    pub fn crosses(&self, e: usize, f: usize) -> bool {
        self.crossings[e].contains(f)
    }

    pub fn total_crossings(&self) -> usize {
        self.crossings.iter().map(|s| s.len()).sum::<usize>() / 2
    }

    /// Crossing pairs `(e, f)` with `e < f`, sorted.
    pub fn crossing_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (e, set) in self.crossings.iter().enumerate() {
            for f in set.iter().filter(|&f| f > e) {
                out.push((e, f));
            }
        }
        out
    }

    /// The missed pairs, i.e. the complement within the non-incident pairs.
    pub fn missed(&self, index: &PairIndex) -> MissedPairSet {
        let pairs = index
            .pairs()
            .iter()
            .enumerate()
            .filter(|(_, &(e, f))| !self.crossings[e].contains(f))
            .map(|(i, _)| i)
            .collect();
        MissedPairSet { pairs }
    }

    /// Restrict to a pattern embedding, renumbered to the pattern's edges.
    pub fn restrict(&self, pattern: &Graph, sub: &SubgraphEmbedding) -> Result<Prescription> {
        if sub.edge_map.len() != pattern.edge_count() {
            return invalid("embedding does not match pattern");
        }
        if sub.edge_map.iter().any(|&h| h >= self.host.edge_count()) {
            return invalid("embedding references edges outside the host");
        }
        let mut crossings = vec![EdgeSet::EMPTY; pattern.edge_count()];
        for (pe, &he) in sub.edge_map.iter().enumerate() {
            for (pf, &hf) in sub.edge_map.iter().enumerate() {
                if self.crossings[he].contains(hf) {
                    crossings[pe].insert(pf);
                }
            }
        }
        Prescription::new(pattern.clone(), crossings)
    }

    /// Restrict to an edge subset of the host; returns the prescription on the
    /// induced edge subgraph and the subgraph-edge to host-edge map.
    pub fn restrict_to_edges(&self, edges: EdgeSet) -> (Prescription, Vec<usize>) {
        let (sub, map) = self.host.edge_subgraph(edges);
        let mut crossings = vec![EdgeSet::EMPTY; sub.edge_count()];
        for (se, &he) in map.iter().enumerate() {
            for (sf, &hf) in map.iter().enumerate() {
                if self.crossings[he].contains(hf) {
                    crossings[se].insert(sf);
                }
            }
        }
        (Prescription { host: sub, crossings }, map)
    }

    pub fn thrackle_number(&self) -> usize {
        thrackle_number(&self.host)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_named, delete_vertex};
    use crate::subgraph::find_subgraphs;

    fn host(name: &str) -> (Graph, PairIndex) {
        let g = build_named(name, &[]).unwrap();
        let idx = PairIndex::new(&g);
        (g, idx)
    }

    #[test]
    fn totals_follow_the_thrackle_identity() {
        let (g, idx) = host("prism");
        let p = Prescription::from_missed(&g, &idx, &MissedPairSet::empty()).unwrap();
        assert_eq!(p.total_crossings(), 18);
        let three: PairSet = [0, 1, 2].into_iter().collect();
        let m = MissedPairSet::from_bits(&idx, three).unwrap();
        assert_eq!(Prescription::from_missed(&g, &idx, &m).unwrap().total_crossings(), 15);

        let (g, idx) = host("c3xc3");
        let m = MissedPairSet::from_bits(&idx, (0..21).collect()).unwrap();
        assert_eq!(Prescription::from_missed(&g, &idx, &m).unwrap().total_crossings(), 78);
    }

    #[test]
    fn out_of_range_pairs_are_rejected() {
        let (_, idx) = host("prism");
        assert!(MissedPairSet::from_bits(&idx, [18].into_iter().collect()).is_err());
        assert!(MissedPairSet::from_edge_pairs(&idx, &[(0, 1)]).is_err());
    }

    #[test]
    fn new_rejects_bad_maps() {
        let g = build_named("cycle", &[4]).unwrap();
        // edges (0,1)=0 (0,3)=1 (1,2)=2 (2,3)=3; 0 and 3 are opposite.
        let asym = vec![EdgeSet::singleton(3), EdgeSet::EMPTY, EdgeSet::EMPTY, EdgeSet::EMPTY];
        assert!(Prescription::new(g.clone(), asym).is_err());
        let incident = vec![EdgeSet::singleton(1), EdgeSet::singleton(0), EdgeSet::EMPTY, EdgeSet::EMPTY];
        assert!(Prescription::new(g.clone(), incident).is_err());
        let ok = vec![EdgeSet::singleton(3), EdgeSet::EMPTY, EdgeSet::EMPTY, EdgeSet::singleton(0)];
        assert_eq!(Prescription::new(g, ok).unwrap().total_crossings(), 1);
    }

    #[test]
    fn restriction_to_c4_and_db531() {
        let g = build_named("c3xc3", &[]).unwrap();
        let gv = delete_vertex(&g, 0).unwrap().graph;
        let p = Prescription::full(&gv);
        let c4 = build_named("cycle", &[4]).unwrap();
        for emb in find_subgraphs(&gv, &c4) {
            assert_eq!(p.restrict(&c4, &emb).unwrap().total_crossings(), 2);
        }
        let db = build_named("db531", &[]).unwrap();
        let embs = find_subgraphs(&gv, &db);
        assert!(!embs.is_empty());
        for emb in embs {
            assert_eq!(p.restrict(&db, &emb).unwrap().total_crossings(), 11);
        }
    }

    #[test]
    fn missed_between_triangles() {
        let (g, idx) = host("prism");
        // triangles {0,2,4} and {1,3,5}
        let t1: EdgeSet = [(0, 2), (2, 4), (0, 4)].iter().map(|&(a, b)| g.edge_index(a, b).unwrap()).collect();
        let t2: EdgeSet = [(1, 3), (3, 5), (1, 5)].iter().map(|&(a, b)| g.edge_index(a, b).unwrap()).collect();
        let empty = MissedPairSet::empty();
        assert_eq!(count_missed_between(&idx, &empty, t1, t2).unwrap(), 0);
        let e = t1.iter().next().unwrap();
        let f = t2.iter().next().unwrap();
        let one = MissedPairSet::from_edge_pairs(&idx, &[(e.min(f), e.max(f))]).unwrap();
        assert_eq!(count_missed_between(&idx, &one, t1, t2).unwrap(), 1);
        assert_eq!(count_missed_between(&idx, &one, t2, t1).unwrap(), 1);
        assert!(count_missed_between(&idx, &one, t1, t1).is_err());
    }

    #[test]
    fn missed_round_trip() {
        let (g, idx) = host("db531");
        let m = MissedPairSet::from_bits(&idx, [1, 4, 7].into_iter().collect()).unwrap();
        let p = Prescription::from_missed(&g, &idx, &m).unwrap();
        assert_eq!(p.missed(&idx), m);
        assert_eq!(p.total_crossings() + m.len(), p.thrackle_number());
    }
}
