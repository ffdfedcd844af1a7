//! Small simple undirected graphs with canonical edge numbering.

use crate::bits::{EdgeSet, PairSet, MAX_PAIRS};
use crate::error::{invalid, Result};
use serde::{Deserialize, Serialize};
use std::fmt;

pub const MAX_VERTICES: usize = 16;
pub const MAX_EDGES: usize = 32;

/// A simple undirected graph on at most 16 vertices and 32 edges.
///
/// Edges are stored sorted lexicographically by their sorted endpoint pair,
/// so the index of an edge depends only on the edge set.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GraphRepr", into = "GraphRepr")]
pub struct Graph {
    name: String,
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<u16>,
    incident: Vec<EdgeSet>,
    lookup: Vec<u8>,
}

#[derive(Serialize, Deserialize)]
struct GraphRepr {
    name: String,
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
}

impl TryFrom<GraphRepr> for Graph {
    type Error = crate::Error;

    fn try_from(r: GraphRepr) -> Result<Graph> {
        Graph::new(r.vertex_count, r.edges).map(|g| g.with_name(r.name))
    }
}

impl From<Graph> for GraphRepr {
    fn from(g: Graph) -> GraphRepr {
        GraphRepr {
            name: g.name,
            vertex_count: g.vertex_count,
            edges: g.edges,
        }
    }
}

const NO_EDGE: u8 = u8::MAX;

impl Graph {
    pub fn new(vertex_count: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Graph> {
        if vertex_count > MAX_VERTICES {
            return invalid(format!("{vertex_count} vertices exceeds the cap of {MAX_VERTICES}"));
        }
        let mut list: Vec<(usize, usize)> = Vec::new();
        for (u, v) in edges {
            if u >= vertex_count || v >= vertex_count {
                return invalid(format!("edge {u}-{v} references a vertex outside 0..{vertex_count}"));
            }
            if u == v {
                return invalid(format!("loop at vertex {u}"));
            }
            list.push((u.min(v), u.max(v)));
        }
        list.sort_unstable();
        if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
            return invalid(format!("parallel edge {}-{}", w[0].0, w[0].1));
        }
        if list.len() > MAX_EDGES {
            return invalid(format!("{} edges exceeds the cap of {MAX_EDGES}", list.len()));
        }
        let mut adjacency = vec![0u16; vertex_count];
        let mut incident = vec![EdgeSet::EMPTY; vertex_count];
        let mut lookup = vec![NO_EDGE; vertex_count * vertex_count];
        for (i, &(u, v)) in list.iter().enumerate() {
            adjacency[u] |= 1 << v;
            adjacency[v] |= 1 << u;
            incident[u].insert(i);
            incident[v].insert(i);
            lookup[u * vertex_count + v] = i as u8;
            lookup[v * vertex_count + u] = i as u8;
        }
        Ok(Graph {
            name: String::new(),
            vertex_count,
            edges: list,
            adjacency,
            incident,
            lookup,
        })
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Graph {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> (usize, usize) {
        self.edges[e]
    }

    pub fn all_edges(&self) -> EdgeSet {
        EdgeSet::full(self.edges.len())
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].count_ones() as usize
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.vertex_count).map(|v| self.degree(v)).collect()
    }

    /// Neighbours of `v` as a vertex bit mask.
    pub fn neighbours(&self, v: usize) -> u16 {
        self.adjacency[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.vertex_count && v < self.vertex_count && self.adjacency[u] >> v & 1 == 1
    }

    pub fn edge_index(&self, u: usize, v: usize) -> Option<usize> {
        if u >= self.vertex_count || v >= self.vertex_count {
            return None;
        }
        match self.lookup[u * self.vertex_count + v] {
            NO_EDGE => None,
            i => Some(i as usize),
        }
    }

    /// Edges incident to `v`.
    pub fn incident_edges(&self, v: usize) -> EdgeSet {
        self.incident[v]
    }

    /// Edges sharing an endpoint with `e`, including `e` itself.
    pub fn incident_to_edge(&self, e: usize) -> EdgeSet {
        let (u, v) = self.edges[e];
        self.incident[u].union(self.incident[v])
    }

    pub fn edges_incident(&self, e: usize, f: usize) -> bool {
        let (a, b) = self.edges[e];
        let (c, d) = self.edges[f];
        a == c || a == d || b == c || b == d
    }

    /// Vertices touched by an edge set, as a bit mask.
    pub fn vertices_of(&self, edges: EdgeSet) -> u16 {
        edges
            .iter()
            .fold(0u16, |m, e| m | 1 << self.edges[e].0 | 1 << self.edges[e].1)
    }

    pub fn is_connected_edge_set(&self, edges: EdgeSet) -> bool {
        let first = match edges.iter().next() {
            Some(e) => e,
            None => return true,
        };
        let mut reached = EdgeSet::singleton(first);
        loop {
            let verts = self.vertices_of(reached);
            let grown = edges
                .iter()
                .filter(|&e| {
                    let (u, v) = self.edges[e];
                    verts >> u & 1 == 1 || verts >> v & 1 == 1
                })
                .collect::<EdgeSet>();
            if grown == reached {
                return reached == edges;
            }
            reached = grown;
        }
    }

    /// Renumber vertices by `perm` (old vertex `v` becomes `perm[v]`).
    pub fn relabel(&self, perm: &[usize]) -> Result<Graph> {
        if perm.len() != self.vertex_count {
            return invalid("relabelling permutation has the wrong length");
        }
        let mut seen = 0u32;
        for &p in perm {
            if p >= self.vertex_count || seen >> p & 1 == 1 {
                return invalid("relabelling is not a permutation");
            }
            seen |= 1 << p;
        }
        Graph::new(self.vertex_count, self.edges.iter().map(|&(u, v)| (perm[u], perm[v])))
            .map(|g| g.with_name(self.name.clone()))
    }

    /// The subgraph formed by an edge set, on the vertices it touches.
    ///
    /// Returns the subgraph and, for each of its edges, the host edge index.
    pub fn edge_subgraph(&self, edges: EdgeSet) -> (Graph, Vec<usize>) {
        let verts = self.vertices_of(edges);
        let mut new_index = [usize::MAX; MAX_VERTICES];
        let mut k = 0;
        for (v, slot) in new_index.iter_mut().enumerate().take(self.vertex_count) {
            if verts >> v & 1 == 1 {
                *slot = k;
                k += 1;
            }
        }
        let sub = Graph::new(
            k,
            edges.iter().map(|e| (new_index[self.edges[e].0], new_index[self.edges[e].1])),
        )
        .expect("subgraph of a valid graph is valid");
        let map = sub
            .edges
            .iter()
            .map(|&(a, b)| {
                let u = new_index.iter().position(|&x| x == a).unwrap();
                let v = new_index.iter().position(|&x| x == b).unwrap();
                self.edge_index(u, v).unwrap()
            })
            .collect();
        (sub, map)
    }

    /// Plain text edge list, one `u v` pair per line.
    pub fn to_edge_list(&self) -> String {
        let mut s = format!("# {} vertices\n", self.vertex_count);
        for &(u, v) in &self.edges {
            s.push_str(&format!("{u} {v}\n"));
        }
        s
    }

    /// Parse an edge list. Blank lines and `#` comments are ignored; a comment
    /// of the form `# N vertices` fixes the vertex count, otherwise it is one
    /// more than the largest vertex mentioned.
    pub fn from_edge_list(text: &str) -> Result<Graph> {
        let mut declared = None;
        let mut edges = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if let Some(comment) = line.strip_prefix('#') {
                let mut words = comment.split_whitespace();
                if let (Some(n), Some("vertices")) = (words.next(), words.next()) {
                    declared = n.parse::<usize>().ok();
                }
                continue;
            }
            if line.is_empty() {
                continue;
            }
            let nums: Vec<&str> = line.split_whitespace().collect();
            let parse = |s: &str| {
                s.parse::<usize>()
                    .map_err(|_| crate::Error::InvalidInput(format!("line {}: bad vertex {s:?}", lineno + 1)))
            };
            match nums.as_slice() {
                [a, b] => edges.push((parse(a)?, parse(b)?)),
                _ => return invalid(format!("line {}: expected `u v`", lineno + 1)),
            }
        }
        let inferred = edges.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(0);
        Graph::new(declared.unwrap_or(inferred).max(inferred), edges)
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph({:?}, n={}, {:?})", self.name, self.vertex_count, self.edges)
    }
}

/// Result of deleting a vertex: the new graph plus index maps back to the host.
#[derive(Clone, Debug)]
pub struct VertexDeletion {
    pub graph: Graph,
    /// `vertex_map[new] = old`.
    pub vertex_map: Vec<usize>,
    /// `edge_map[new] = old`.
    pub edge_map: Vec<usize>,
}

pub fn delete_vertex(g: &Graph, v: usize) -> Result<VertexDeletion> {
    if v >= g.vertex_count {
        return invalid(format!("vertex {v} not in graph with {} vertices", g.vertex_count));
    }
    let vertex_map: Vec<usize> = (0..g.vertex_count).filter(|&u| u != v).collect();
    let renumber = |u: usize| if u > v { u - 1 } else { u };
    let kept: Vec<(usize, usize)> = g
        .edges
        .iter()
        .filter(|&&(a, b)| a != v && b != v)
        .map(|&(a, b)| (renumber(a), renumber(b)))
        .collect();
    let graph = Graph::new(g.vertex_count - 1, kept)?.with_name(format!("{}-v{v}", g.name));
    let edge_map = graph
        .edges
        .iter()
        .map(|&(a, b)| g.edge_index(vertex_map[a], vertex_map[b]).unwrap())
        .collect();
    Ok(VertexDeletion {
        graph,
        vertex_map,
        edge_map,
    })
}

/// `(a,x) ~ (b,y)` iff `a = b` and `x ~ y`, or `x = y` and `a ~ b`.
/// Vertex `(a, x)` gets index `a * |V(h)| + x`.
pub fn cartesian_product(g: &Graph, h: &Graph) -> Result<Graph> {
    let (n, m) = (g.vertex_count, h.vertex_count);
    if n * m > MAX_VERTICES {
        return invalid(format!("product has {} vertices, cap is {MAX_VERTICES}", n * m));
    }
    let mut edges = Vec::new();
    for a in 0..n {
        for &(x, y) in &h.edges {
            edges.push((a * m + x, a * m + y));
        }
    }
    for &(a, b) in &g.edges {
        for x in 0..m {
            edges.push((a * m + x, b * m + x));
        }
    }
    Graph::new(n * m, edges).map(|p| p.with_name(format!("{}x{}", g.name, h.name)))
}

/// Build one of the named graphs.
///
/// | name | params | graph |
/// |------|--------|-------|
/// | `cycle` | `n >= 3` | `C_n` |
/// | `path` | `m >= 1` | path with `m` edges |
/// | `complete` | `n` | `K_n` |
/// | `complete-bipartite` | `a, b` | `K_{a,b}` |
/// | `bowtie` | | two triangles sharing vertex 0 |
/// | `db531` | | 6-cycle plus the chord `{0, 2}` |
/// | `prism` | | `C_3 x P_1` |
/// | `c3xc3` | | `C_3 x C_3` |
pub fn build_named(name: &str, params: &[usize]) -> Result<Graph> {
    let want = |k: usize| -> Result<()> {
        if params.len() == k {
            Ok(())
        } else {
            invalid(format!("{name} takes {k} parameter(s), got {}", params.len()))
        }
    };
    match name {
        "cycle" => {
            want(1)?;
            let n = params[0];
            if n < 3 {
                return invalid("cycle needs n >= 3");
            }
            Graph::new(n, (0..n).map(|i| (i, (i + 1) % n))).map(|g| g.with_name(format!("C{n}")))
        }
        "path" => {
            want(1)?;
            let m = params[0];
            if m < 1 {
                return invalid("path needs m >= 1");
            }
            Graph::new(m + 1, (0..m).map(|i| (i, i + 1))).map(|g| g.with_name(format!("P{m}")))
        }
        "complete" => {
            want(1)?;
            let n = params[0];
            if n < 1 {
                return invalid("complete graph needs n >= 1");
            }
            let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
            Graph::new(n, edges).map(|g| g.with_name(format!("K{n}")))
        }
        "complete-bipartite" => {
            want(2)?;
            let (a, b) = (params[0], params[1]);
            let edges = (0..a).flat_map(|u| (0..b).map(move |v| (u, a + v)));
            Graph::new(a + b, edges).map(|g| g.with_name(format!("K{a},{b}")))
        }
        "bowtie" => {
            want(0)?;
            Graph::new(5, [(0, 1), (1, 2), (2, 0), (0, 3), (3, 4), (4, 0)]).map(|g| g.with_name("bowtie"))
        }
        "db531" => {
            want(0)?;
            Graph::new(6, (0..6).map(|i| (i, (i + 1) % 6)).chain([(0, 2)])).map(|g| g.with_name("DB(5,3,-1)"))
        }
        "prism" => {
            want(0)?;
            let c3 = build_named("cycle", &[3])?;
            let p1 = build_named("path", &[1])?;
            cartesian_product(&c3, &p1).map(|g| g.with_name("C3xP1"))
        }
        "c3xc3" => {
            want(0)?;
            let c3 = build_named("cycle", &[3])?;
            cartesian_product(&c3, &c3).map(|g| g.with_name("C3xC3"))
        }
        other => invalid(format!("unknown graph name {other:?}")),
    }
}

/// Parse a graph designator such as `cycle:5`, `complete-bipartite:3,3`,
/// `c3xc3`, or `c3xc3-v0` (C3xC3 with vertex 0 deleted).
pub fn parse_designator(text: &str) -> Result<Graph> {
    if let Some(rest) = text.strip_prefix("c3xc3-v") {
        let v: usize = rest
            .parse()
            .map_err(|_| crate::Error::InvalidInput(format!("bad vertex in {text:?}")))?;
        let g = build_named("c3xc3", &[])?;
        return delete_vertex(&g, v).map(|d| d.graph);
    }
    let (name, params) = match text.split_once(':') {
        Some((n, p)) => {
            let params = p
                .split(',')
                .map(|s| {
                    s.trim()
                        .parse::<usize>()
                        .map_err(|_| crate::Error::InvalidInput(format!("bad parameter {s:?}")))
                })
                .collect::<Result<Vec<_>>>()?;
            (n, params)
        }
        None => (text, Vec::new()),
    };
    build_named(name, &params)
}

/// Closed form: sum over edges of `(|E| - d(u) - d(v) + 1) / 2`.
pub fn thrackle_number(g: &Graph) -> usize {
    let m = g.edge_count() as i64;
    let twice: i64 = g
        .edges
        .iter()
        .map(|&(u, v)| m - g.degree(u) as i64 - g.degree(v) as i64 + 1)
        .sum();
    debug_assert!(twice >= 0 && twice % 2 == 0);
    (twice / 2) as usize
}

/// All unordered non-incident edge pairs `(e, f)` with `e < f`, in lexicographic order.
pub fn non_incident_pairs(g: &Graph) -> Vec<(usize, usize)> {
    let m = g.edge_count();
    let mut out = Vec::new();
    for e in 0..m {
        for f in e + 1..m {
            if !g.edges_incident(e, f) {
                out.push((e, f));
            }
        }
    }
    out
}

/// Bidirectional map between non-incident edge pairs and their canonical indices.
#[derive(Clone, Debug)]
pub struct PairIndex {
    pairs: Vec<(usize, usize)>,
    index: Vec<u16>,
    edges: usize,
}

const NO_PAIR: u16 = u16::MAX;

impl PairIndex {
    pub fn new(g: &Graph) -> PairIndex {
        let pairs = non_incident_pairs(g);
        debug_assert!(pairs.len() <= MAX_PAIRS);
        let m = g.edge_count();
        let mut index = vec![NO_PAIR; m * m];
        for (i, &(e, f)) in pairs.iter().enumerate() {
            index[e * m + f] = i as u16;
            index[f * m + e] = i as u16;
        }
        PairIndex { pairs, index, edges: m }
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn pair(&self, i: usize) -> (usize, usize) {
        self.pairs[i]
    }

    pub fn index_of(&self, e: usize, f: usize) -> Option<usize> {
        if e >= self.edges || f >= self.edges {
            return None;
        }
        match self.index[e * self.edges + f] {
            NO_PAIR => None,
            i => Some(i as usize),
        }
    }

    /// Pairs with both edges inside `edges`.
    pub fn internal(&self, edges: EdgeSet) -> PairSet {
        self.pairs
            .iter()
            .enumerate()
            .filter(|(_, &(e, f))| edges.contains(e) && edges.contains(f))
            .map(|(i, _)| i)
            .collect()
    }

    /// Pairs with one edge in `a` and the other in `b`.
    pub fn between(&self, a: EdgeSet, b: EdgeSet) -> PairSet {
        self.pairs
            .iter()
            .enumerate()
            .filter(|(_, &(e, f))| (a.contains(e) && b.contains(f)) || (a.contains(f) && b.contains(e)))
            .map(|(i, _)| i)
            .collect()
    }
}

/// Brute-force isomorphism test with degree and adjacency pruning.
pub fn are_isomorphic(g: &Graph, h: &Graph) -> bool {
    if g.vertex_count != h.vertex_count || g.edge_count() != h.edge_count() {
        return false;
    }
    let mut dg = g.degrees();
    let mut dh = h.degrees();
    dg.sort_unstable();
    dh.sort_unstable();
    if dg != dh {
        return false;
    }
    let n = g.vertex_count;
    let mut map = vec![usize::MAX; n];
    fn extend(g: &Graph, h: &Graph, map: &mut [usize], used: u16, v: usize) -> bool {
        if v == map.len() {
            return true;
        }
        for w in 0..h.vertex_count {
            if used >> w & 1 == 1 || g.degree(v) != h.degree(w) {
                continue;
            }
            let consistent = (0..v).all(|u| g.has_edge(u, v) == h.has_edge(map[u], w));
            if consistent {
                map[v] = w;
                if extend(g, h, map, used | 1 << w, v + 1) {
                    return true;
                }
            }
        }
        false
    }
    extend(g, h, &mut map, 0, 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn named(name: &str) -> Graph {
        build_named(name, &[]).unwrap()
    }

    #[test]
    fn named_graph_sizes() {
        let c3 = build_named("cycle", &[3]).unwrap();
        assert_eq!((c3.vertex_count(), c3.edge_count()), (3, 3));
        let g = named("c3xc3");
        assert_eq!((g.vertex_count(), g.edge_count()), (9, 18));
        assert!(g.degrees().iter().all(|&d| d == 4));
        let db = named("db531");
        assert_eq!((db.vertex_count(), db.edge_count()), (6, 7));
        let mut degs = db.degrees();
        degs.sort_unstable_by(|a, b| b.cmp(a));
        assert_eq!(degs, vec![3, 3, 2, 2, 2, 2]);
    }

    #[test]
    fn named_graph_errors() {
        assert!(build_named("cycle", &[2]).is_err());
        assert!(build_named("path", &[0]).is_err());
        assert!(build_named("petersen", &[]).is_err());
        assert!(build_named("bowtie", &[1]).is_err());
    }

    #[test]
    fn graph_rejects_non_simple_input() {
        assert!(Graph::new(3, [(0, 0)]).is_err());
        assert!(Graph::new(3, [(0, 1), (1, 0)]).is_err());
        assert!(Graph::new(17, []).is_err());
        assert!(Graph::new(2, [(0, 2)]).is_err());
    }

    #[test]
    fn products() {
        let c3 = build_named("cycle", &[3]).unwrap();
        let p1 = build_named("path", &[1]).unwrap();
        let prism = cartesian_product(&c3, &p1).unwrap();
        assert_eq!((prism.vertex_count(), prism.edge_count()), (6, 9));
        let c4 = cartesian_product(&p1, &p1).unwrap();
        assert!(are_isomorphic(&c4, &build_named("cycle", &[4]).unwrap()));
        assert_eq!(cartesian_product(&c3, &c3).unwrap().edge_count(), 18);
        let k5 = build_named("complete", &[5]).unwrap();
        assert!(cartesian_product(&k5, &c3).is_err());
    }

    #[test]
    fn vertex_deletion() {
        let g = named("c3xc3");
        for v in 0..9 {
            let d = delete_vertex(&g, v).unwrap();
            assert_eq!((d.graph.vertex_count(), d.graph.edge_count()), (8, 14));
            let mut degs = d.graph.degrees();
            degs.sort_unstable();
            assert_eq!(degs, vec![3, 3, 3, 3, 4, 4, 4, 4]);
            for (new, &old) in d.edge_map.iter().enumerate() {
                let (a, b) = d.graph.edge(new);
                assert_eq!(g.edge(old), (d.vertex_map[a], d.vertex_map[b]));
            }
        }
        assert!(delete_vertex(&g, 9).is_err());
    }

    #[test]
    fn thrackle_numbers() {
        assert_eq!(thrackle_number(&named("c3xc3")), 99);
        assert_eq!(thrackle_number(&named("prism")), 18);
        assert_eq!(thrackle_number(&named("db531")), 11);
        assert_eq!(thrackle_number(&named("bowtie")), 5);
        let gv = delete_vertex(&named("c3xc3"), 0).unwrap().graph;
        assert_eq!(thrackle_number(&gv), 55);
    }

    #[test]
    fn non_incident_pair_counts() {
        let c4 = build_named("cycle", &[4]).unwrap();
        assert_eq!(non_incident_pairs(&c4), vec![(0, 3), (1, 2)]);
        let gv = delete_vertex(&named("c3xc3"), 0).unwrap().graph;
        assert_eq!(non_incident_pairs(&gv).len(), 55);
        assert_eq!(non_incident_pairs(&named("c3xc3")).len(), 99);
    }

    #[test]
    fn edge_list_round_trip() {
        let g = named("db531");
        let back = Graph::from_edge_list(&g.to_edge_list()).unwrap();
        assert_eq!(back.edges(), g.edges());
        assert_eq!(back.vertex_count(), g.vertex_count());
        assert!(Graph::from_edge_list("0 1\n1\n").is_err());
        let iso = Graph::from_edge_list("# 4 vertices\n0 1\n").unwrap();
        assert_eq!(iso.vertex_count(), 4);
    }

    #[test]
    fn designators() {
        assert_eq!(parse_designator("cycle:5").unwrap().edge_count(), 5);
        assert_eq!(parse_designator("c3xc3-v4").unwrap().edge_count(), 14);
        assert_eq!(parse_designator("complete-bipartite:3,3").unwrap().edge_count(), 9);
        assert!(parse_designator("cycle:x").is_err());
    }

    #[test]
    fn edge_subgraph_maps_back() {
        let g = named("c3xc3");
        let s: EdgeSet = [0, 5, 9].into_iter().collect();
        let (sub, map) = g.edge_subgraph(s);
        assert_eq!(sub.edge_count(), 3);
        let mut sorted = map.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, vec![0, 5, 9]);
    }

    #[test]
    fn serde_round_trip() {
        let g = named("prism");
        let json = serde_json::to_string(&g).unwrap();
        let back: Graph = serde_json::from_str(&json).unwrap();
        assert_eq!(back, g);
    }
}
