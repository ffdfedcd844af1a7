//! Pattern embeddings, simple cycles and disjoint cycle pairs.

use crate::bits::EdgeSet;
use crate::graph::{build_named, Graph};
use serde::{Deserialize, Serialize};

/// One occurrence of a pattern graph inside a host, listed once per host subgraph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubgraphEmbedding {
    pub pattern_name: String,
    /// `vertex_map[pattern vertex] = host vertex` for a representative embedding.
    pub vertex_map: Vec<usize>,
    /// `edge_map[pattern edge] = host edge`, consistent with `vertex_map`.
    pub edge_map: Vec<usize>,
    pub edge_set: EdgeSet,
}

impl SubgraphEmbedding {
    pub fn vertex_mask(&self) -> u16 {
        self.vertex_map.iter().fold(0, |m, &v| m | 1 << v)
    }
}

/// All (not necessarily induced) copies of `pattern` in `g`, one per distinct
/// host subgraph, sorted by host edge set and then vertex set.
pub fn find_subgraphs(g: &Graph, pattern: &Graph) -> Vec<SubgraphEmbedding> {
    let k = pattern.vertex_count();
    if k > g.vertex_count() {
        return Vec::new();
    }
    // Connected-first order: each vertex after the first is adjacent to an
    // earlier one when possible, so adjacency pruning bites early.
    let mut order: Vec<usize> = Vec::with_capacity(k);
    let mut placed = 0u16;
    while order.len() < k {
        let next = (0..k)
            .filter(|&v| placed >> v & 1 == 0)
            .max_by_key(|&v| ((pattern.neighbours(v) & placed).count_ones(), pattern.degree(v), usize::MAX - v))
            .unwrap();
        order.push(next);
        placed |= 1 << next;
    }

    let mut found: Vec<(EdgeSet, u16, Vec<usize>)> = Vec::new();
    let mut map = vec![usize::MAX; k];
    search(g, pattern, &order, 0, 0, &mut map, &mut found);

    found.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
    found.dedup_by(|a, b| a.0 == b.0 && a.1 == b.1);
    found
        .into_iter()
        .map(|(edge_set, _, vertex_map)| {
            let edge_map = pattern
                .edges()
                .iter()
                .map(|&(a, b)| g.edge_index(vertex_map[a], vertex_map[b]).unwrap())
                .collect();
            SubgraphEmbedding {
                pattern_name: pattern.name().to_string(),
                vertex_map,
                edge_map,
                edge_set,
            }
        })
        .collect()
}

fn search(
    g: &Graph,
    pattern: &Graph,
    order: &[usize],
    depth: usize,
    used: u16,
    map: &mut [usize],
    found: &mut Vec<(EdgeSet, u16, Vec<usize>)>,
) {
    if depth == order.len() {
        let edges = pattern
            .edges()
            .iter()
            .map(|&(a, b)| g.edge_index(map[a], map[b]).unwrap())
            .collect::<EdgeSet>();
        found.push((edges, used, map.to_vec()));
        return;
    }
    let pv = order[depth];
    for hv in 0..g.vertex_count() {
        if used >> hv & 1 == 1 || g.degree(hv) < pattern.degree(pv) {
            continue;
        }
        let ok = order[..depth]
            .iter()
            .all(|&pu| !pattern.has_edge(pu, pv) || g.has_edge(map[pu], hv));
        if ok {
            map[pv] = hv;
            search(g, pattern, order, depth + 1, used | 1 << hv, map, found);
        }
    }
    map[pv] = usize::MAX;
}

/// Number of distinct copies of a named pattern.
pub fn count_named(g: &Graph, name: &str, params: &[usize]) -> usize {
    let pattern = build_named(name, params).expect("valid pattern name");
    find_subgraphs(g, &pattern).len()
}

/// `Th(g) - #C4 + #K4`, an upper bound on the maximum crossing number.
pub fn sub_thrackle_number(g: &Graph) -> usize {
    crate::graph::thrackle_number(g) + count_named(g, "complete", &[4]) - count_named(g, "cycle", &[4])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Cycle {
    pub vertices: u16,
    pub edges: EdgeSet,
}

impl Cycle {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }
}

/// Every simple cycle once, sorted by length and then edge set.
pub fn enumerate_cycles(g: &Graph) -> Vec<Cycle> {
    let mut out = Vec::new();
    let mut path = Vec::with_capacity(g.vertex_count());
    for start in 0..g.vertex_count() {
        path.clear();
        path.push(start);
        grow(g, start, 1 << start, &mut path, &mut out);
    }
    out.sort_by_key(|c| (c.len(), c.edges));
    out.dedup();
    out
}

fn grow(g: &Graph, start: usize, visited: u16, path: &mut Vec<usize>, out: &mut Vec<Cycle>) {
    let last = *path.last().unwrap();
    let nb = g.neighbours(last);
    for w in 0..g.vertex_count() {
        if nb >> w & 1 == 0 || w < start {
            continue;
        }
        if w == start {
            // Each cycle is seen in both directions; keep the one whose second
            // vertex is smaller than its last.
            if path.len() >= 3 && path[1] < last {
                let mut edges = EdgeSet::EMPTY;
                for i in 0..path.len() {
                    let (a, b) = (path[i], path[(i + 1) % path.len()]);
                    edges.insert(g.edge_index(a, b).unwrap());
                }
                out.push(Cycle { vertices: visited, edges });
            }
            continue;
        }
        if visited >> w & 1 == 1 {
            continue;
        }
        path.push(w);
        grow(g, start, visited | 1 << w, path, out);
        path.pop();
    }
}

/// Unordered pairs of vertex-disjoint simple cycles.
pub fn disjoint_cycle_pairs(g: &Graph) -> Vec<(Cycle, Cycle)> {
    let cycles = enumerate_cycles(g);
    let mut out = Vec::new();
    for (i, a) in cycles.iter().enumerate() {
        for b in &cycles[i + 1..] {
            if a.vertices & b.vertices == 0 {
                out.push((*a, *b));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::delete_vertex;

    fn named(name: &str, p: &[usize]) -> Graph {
        build_named(name, p).unwrap()
    }

    #[test]
    fn cycle_counts() {
        assert_eq!(enumerate_cycles(&named("cycle", &[4])).len(), 1);
        assert_eq!(enumerate_cycles(&named("bowtie", &[])).len(), 2);
        let db = enumerate_cycles(&named("db531", &[]));
        let lens: Vec<usize> = db.iter().map(Cycle::len).collect();
        assert_eq!(lens, vec![3, 5, 6]);
        // K4: four triangles and three 4-cycles.
        assert_eq!(enumerate_cycles(&named("complete", &[4])).len(), 7);
    }

    #[test]
    fn disjoint_pairs() {
        assert!(disjoint_cycle_pairs(&named("bowtie", &[])).is_empty());
        let g = named("c3xc3", &[]);
        let tri = disjoint_cycle_pairs(&g)
            .into_iter()
            .filter(|(a, b)| a.len() == 3 && b.len() == 3)
            .count();
        assert_eq!(tri, 6);
        let gv = delete_vertex(&g, 0).unwrap().graph;
        let tri = disjoint_cycle_pairs(&gv)
            .into_iter()
            .filter(|(a, b)| a.len() == 3 && b.len() == 3)
            .count();
        assert_eq!(tri, 2);
    }

    #[test]
    fn pattern_counts_in_host() {
        let g = named("c3xc3", &[]);
        assert_eq!(count_named(&g, "cycle", &[4]), 9);
        assert_eq!(count_named(&g, "cycle", &[3]), 6);
        let gv = delete_vertex(&g, 0).unwrap().graph;
        assert_eq!(count_named(&gv, "cycle", &[4]), 5);
        assert_eq!(count_named(&gv, "bowtie", &[]), 4);
    }

    #[test]
    fn embeddings_are_consistent() {
        let g = named("c3xc3", &[]);
        let pattern = named("bowtie", &[]);
        for emb in find_subgraphs(&g, &pattern) {
            assert_eq!(emb.edge_map.len(), pattern.edge_count());
            for (pe, &he) in emb.edge_map.iter().enumerate() {
                let (a, b) = pattern.edge(pe);
                assert_eq!(g.edge_index(emb.vertex_map[a], emb.vertex_map[b]), Some(he));
            }
            assert_eq!(emb.edge_set, emb.edge_map.iter().copied().collect());
        }
    }

    #[test]
    fn sub_thrackle_numbers() {
        assert_eq!(sub_thrackle_number(&named("prism", &[])), 15);
        assert_eq!(sub_thrackle_number(&named("cycle", &[4])), 1);
        assert_eq!(sub_thrackle_number(&named("complete", &[4])), 1);
    }

    #[test]
    fn prism_is_not_in_k4() {
        assert!(find_subgraphs(&named("complete", &[4]), &named("prism", &[])).is_empty());
    }
}
