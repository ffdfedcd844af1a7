use crate::graph::Graph;
use crate::map::Node;
use rustworkx_core::petgraph::graph::UnGraph;
use serde::{Deserialize, Serialize};

/// Planarity of an arbitrary simple graph given as an edge list.
pub fn planarity_test(vertex_count: usize, edges: &[(usize, usize)]) -> bool {
    // Euler bound short-circuit for simple graphs.
    if vertex_count >= 3 && edges.len() > 3 * vertex_count - 6 {
        return false;
    }
    let mut g = UnGraph::<(), ()>::with_capacity(vertex_count, edges.len());
    for _ in 0..vertex_count {
        g.add_node(());
    }
    for &(u, v) in edges {
        g.add_edge((u as u32).into(), (v as u32).into(), ());
    }
    rustworkx_core::planar::is_planar(&g)
}

pub fn is_planar_graph(g: &Graph) -> bool {
    planarity_test(g.vertex_count(), g.edges())
}

/// A host graph with every crossing replaced by a degree-4 node.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Planarization {
    /// Original vertices first, then one node per crossing.
    pub nodes: Vec<Node>,
    pub edges: Vec<(usize, usize)>,
    /// For each original edge, the indices into `edges` of its segments in
    /// order from its smaller endpoint.
    pub segment_map: Vec<Vec<usize>>,
}

impl Planarization {
    pub fn crossing_count(&self) -> usize {
        self.nodes.iter().filter(|n| matches!(n, Node::Crossing(..))).count()
    }

    pub fn is_planar(&self) -> bool {
        planarity_test(self.nodes.len(), &self.edges)
    }

    /// Crossing node to the pair of original edges it joins.
    pub fn crossing_vertex_map(&self) -> Vec<(usize, (usize, usize))> {
        self.nodes
            .iter()
            .enumerate()
            .filter_map(|(i, n)| match *n {
                Node::Crossing(a, b) => Some((i, (a, b))),
                Node::Vertex(_) => None,
            })
            .collect()
    }
}
