use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::map::{Node, PlaneMap};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Segment {
    pub from: usize,
    pub to: usize,
    pub edge: usize,
}

/// A good drawing described combinatorially: the planarization's nodes and
/// segments, the counter-clockwise dart order at every node (dart `2s` runs
/// `from -> to` along segment `s`, dart `2s + 1` the reverse), and for each
/// original edge the edges it crosses, walking from its smaller endpoint.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CombinatorialDrawing {
    pub graph: Graph,
    pub nodes: Vec<Node>,
    pub segments: Vec<Segment>,
    pub rotation: Vec<Vec<usize>>,
    pub orders: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coordinates: Option<Vec<[f64; 2]>>,
}

impl CombinatorialDrawing {
    pub fn from_map(graph: &Graph, map: &PlaneMap) -> CombinatorialDrawing {
        let mut map = map.clone();
        if !map.is_compact() {
            map.compact();
        }
        CombinatorialDrawing {
            graph: graph.clone(),
            nodes: (0..map.node_count()).map(|v| map.node(v)).collect(),
            segments: map
                .segments()
                .into_iter()
                .map(|(from, to, edge)| Segment { from, to, edge })
                .collect(),
            rotation: map.rotations(),
            orders: map.crossing_orders(graph.edges()),
            coordinates: None,
        }
    }

    pub fn to_map(&self) -> Option<PlaneMap> {
        let segs: Vec<(usize, usize, usize)> = self.segments.iter().map(|s| (s.from, s.to, s.edge)).collect();
        PlaneMap::from_parts(self.nodes.clone(), &segs, &self.rotation)
    }

    pub fn crossing_count(&self) -> usize {
        self.nodes.iter().filter(|n| matches!(n, Node::Crossing(..))).count()
    }

    /// Crossing pairs `(e, f)`, `e < f`, sorted.
    pub fn crossing_pairs(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = self
            .nodes
            .iter()
            .filter_map(|n| match *n {
                Node::Crossing(a, b) => Some((a, b)),
                Node::Vertex(_) => None,
            })
            .collect();
        out.sort_unstable();
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossingReport {
    pub count: usize,
    pub pairs: Vec<(usize, usize)>,
}

fn violation<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Violation(msg.into()))
}

/// Recompute the crossings of `d` and check it is a good drawing of `host`.
pub fn verify_drawing(d: &CombinatorialDrawing, host: &Graph) -> Result<CrossingReport> {
    if d.graph.edges() != host.edges() || d.graph.vertex_count() != host.vertex_count() {
        return violation("drawing is of a different graph");
    }
    let n = host.vertex_count();
    if d.nodes.len() < n || (0..n).any(|v| d.nodes[v] != Node::Vertex(v)) {
        return violation("original vertices must be the first nodes, in order");
    }
    if d.nodes[n..].iter().any(|x| matches!(x, Node::Vertex(_))) {
        return violation("extra vertex nodes");
    }
    if d.segments.iter().any(|s| s.edge >= host.edge_count()) {
        return violation("segment labelled with an unknown edge");
    }
    let map = match d.to_map() {
        Some(m) => m,
        None => return violation("rotation system is inconsistent with the segments"),
    };

    let mut pairs = Vec::new();
    for (c, node) in d.nodes.iter().enumerate() {
        let (a, b) = match *node {
            Node::Crossing(a, b) => (a, b),
            Node::Vertex(_) => continue,
        };
        if a == b {
            return violation(format!("edge {a} crosses itself"));
        }
        if a > b || b >= host.edge_count() {
            return violation(format!("malformed crossing node {c}"));
        }
        if host.edges_incident(a, b) {
            return violation(format!("incident edges {a} and {b} cross"));
        }
        let labels: Vec<usize> = map.rotation(c).iter().map(|&x| map.label(x)).collect();
        if labels.len() != 4 {
            return violation(format!("crossing node {c} has degree {}", labels.len()));
        }
        let alternates = labels[0] == labels[2] && labels[1] == labels[3] && labels[0] != labels[1];
        let matches = {
            let mut s = [labels[0], labels[1]];
            s.sort_unstable();
            s == [a, b]
        };
        if !alternates || !matches {
            return violation(format!("edges {a} and {b} touch at node {c} without crossing"));
        }
        pairs.push((a, b));
    }
    pairs.sort_unstable();
    if let Some(w) = pairs.windows(2).find(|w| w[0] == w[1]) {
        return violation(format!("edges {} and {} cross more than once", w[0].0, w[0].1));
    }

    for v in 0..n {
        let mut labels: Vec<usize> = map.rotation(v).iter().map(|&x| map.label(x)).collect();
        labels.sort_unstable();
        let expected = host.incident_edges(v).to_vec();
        if labels != expected {
            return violation(format!("vertex {v} has darts {labels:?}, expected edges {expected:?}"));
        }
    }

    let mut seg_per_edge = vec![0usize; host.edge_count()];
    for s in &d.segments {
        seg_per_edge[s.edge] += 1;
    }
    for (e, &(u, v)) in host.edges().iter().enumerate() {
        let path = match map.edge_path(e, u) {
            Some(p) => p,
            None => return violation(format!("edge {e} is not drawn")),
        };
        if map.head(*path.last().unwrap()) != v {
            return violation(format!("edge {e} does not reach vertex {v}"));
        }
        if path.len() != seg_per_edge[e] {
            return violation(format!("edge {e} has stray segments"));
        }
        let crossings = pairs.iter().filter(|&&(a, b)| a == e || b == e).count();
        if path.len() != crossings + 1 {
            return violation(format!("edge {e} path does not pass through all its crossings"));
        }
    }

    if !map.euler_holds() {
        return violation("Euler characteristic check failed");
    }
    if d.orders != map.crossing_orders(host.edges()) {
        return violation("crossing orders disagree with the rotation system");
    }
    Ok(CrossingReport {
        count: pairs.len(),
        pairs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_named;
    use crate::map::twin;

    /// C4 with edges (0,1)=0 (0,3)=1 (1,2)=2 (2,3)=3 and 0 crossing 3.
    fn c4_one_crossing() -> (Graph, PlaneMap) {
        let g = build_named("cycle", &[4]).unwrap();
        let mut m = PlaneMap::new(4);
        let a = m.add_segment(0, None, 1, None, 0); // 0-1
        let b = m.add_segment(1, Some(twin(a)), 2, None, 2); // 1-2
        let (c, z) = m.subdivide(a, Node::Crossing(0, 3));
        // edge 3 = 2-3 runs from 2 through c to 3
        m.add_segment(2, Some(twin(b)), c, Some(twin(a)), 3);
        let w = m.add_segment(c, Some(z), 3, None, 3);
        m.add_segment(3, Some(twin(w)), 0, Some(a), 1);
        (g, m)
    }

    #[test]
    fn valid_drawing_passes() {
        let (g, m) = c4_one_crossing();
        let d = CombinatorialDrawing::from_map(&g, &m);
        let r = verify_drawing(&d, &g).unwrap();
        assert_eq!(r.pairs, vec![(0, 3)]);
        assert_eq!(d.orders[0], vec![3]);
    }

    #[test]
    fn touching_is_rejected() {
        let (g, m) = c4_one_crossing();
        let mut d = CombinatorialDrawing::from_map(&g, &m);
        let c = 4;
        let rot = &mut d.rotation[c];
        assert_eq!(rot.len(), 4);
        rot.swap(1, 2);
        let err = verify_drawing(&d, &g).unwrap_err();
        assert!(err.to_string().contains("touch"), "{err}");
    }

    #[test]
    fn wrong_graph_is_rejected() {
        let (g, m) = c4_one_crossing();
        let d = CombinatorialDrawing::from_map(&g, &m);
        let other = build_named("cycle", &[5]).unwrap();
        assert!(verify_drawing(&d, &other).is_err());
    }

    #[test]
    fn json_round_trip() {
        let (g, m) = c4_one_crossing();
        let d = CombinatorialDrawing::from_map(&g, &m);
        let back: CombinatorialDrawing = serde_json::from_str(&serde_json::to_string(&d).unwrap()).unwrap();
        assert_eq!(back, d);
    }
}
