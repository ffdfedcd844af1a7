use super::planarity::{planarity_test, Planarization};
use super::{Budget, Meter, SearchStats};
use crate::bits::EdgeSet;
use crate::error::{invalid, Result};
use crate::graph::thrackle_number;
use crate::map::Node;
use crate::prescription::Prescription;
use serde::{Deserialize, Serialize};

/// For each original edge, the order in which it meets its crossing partners,
/// walking from its smaller endpoint.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CrossingOrders(pub Vec<Vec<usize>>);

impl CrossingOrders {
    pub fn validate(&self, p: &Prescription) -> Result<()> {
        let m = p.host().edge_count();
        if self.0.len() != m {
            return invalid(format!("orders given for {} edges, host has {m}", self.0.len()));
        }
        for (e, order) in self.0.iter().enumerate() {
            let set: EdgeSet = order.iter().copied().filter(|&f| f < m).collect();
            if set.len() != order.len() || set != p.crossings(e) {
                return invalid(format!("order of edge {e} is not a permutation of P({e})"));
            }
        }
        Ok(())
    }
}

/// Replace every prescribed crossing by a node, threading each edge through
/// its crossing nodes in the given order.
pub fn build_planarization(p: &Prescription, orders: &CrossingOrders) -> Result<Planarization> {
    orders.validate(p)?;
    let g = p.host();
    let n = g.vertex_count();
    let mut nodes: Vec<Node> = (0..n).map(Node::Vertex).collect();
    let mut crossing_id = std::collections::HashMap::new();
    for (a, b) in p.crossing_pairs() {
        crossing_id.insert((a, b), nodes.len());
        nodes.push(Node::Crossing(a, b));
    }
    let mut edges = Vec::new();
    let mut segment_map = Vec::with_capacity(g.edge_count());
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        let mut segs = Vec::new();
        let mut at = u;
        for &f in &orders.0[e] {
            let c = crossing_id[&(e.min(f), e.max(f))];
            segs.push(edges.len());
            edges.push((at, c));
            at = c;
        }
        segs.push(edges.len());
        edges.push((at, v));
        segment_map.push(segs);
    }
    Ok(Planarization {
        nodes,
        edges,
        segment_map,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RelaxedVerdict {
    /// Every crossing order gives a non-planar planarization.
    Unrealizable,
    /// Some order gives a planar planarization (recorded here).
    Undecided(CrossingOrders),
    BudgetExhausted,
}

impl RelaxedVerdict {
    pub fn is_unrealizable(&self) -> bool {
        matches!(self, RelaxedVerdict::Unrealizable)
    }
}

/// Sound unrealizability prover that ignores the crossing alternation
/// requirement. Edges are added in descending `|P(e)|` order; each new edge
/// chooses its own crossing order and where each new crossing sits along the
/// partner edge, and partial planarizations are tested for planarity.
pub fn prove_unrealizable_relaxed(p: &Prescription, budget: Budget) -> Result<(RelaxedVerdict, SearchStats)> {
    if p.total_crossings() > thrackle_number(p.host()) {
        return invalid("prescription exceeds the thrackle number");
    }
    let g = p.host();
    let m = g.edge_count();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by_key(|&e| (std::cmp::Reverse(p.crossings(e).len()), e));
    let mut state = Relaxed {
        p,
        order,
        seq: vec![Vec::new(); m],
        meter: budget.start(),
        witness: None,
    };
    state.extend(0, EdgeSet::EMPTY);
    let stats = state.meter.stats();
    let verdict = if let Some(w) = state.witness {
        RelaxedVerdict::Undecided(CrossingOrders(w))
    } else if state.meter.exhausted {
        RelaxedVerdict::BudgetExhausted
    } else {
        RelaxedVerdict::Unrealizable
    };
    Ok((verdict, stats))
}

struct Relaxed<'a> {
    p: &'a Prescription,
    order: Vec<usize>,
    /// Current crossing sequence of each processed edge (processed partners only).
    seq: Vec<Vec<usize>>,
    meter: Meter,
    witness: Option<Vec<Vec<usize>>>,
}

impl Relaxed<'_> {
    /// Returns true to stop.
    fn extend(&mut self, idx: usize, processed: EdgeSet) -> bool {
        if !self.meter.tick() {
            return true;
        }
        if idx == self.order.len() {
            self.witness = Some(self.seq.clone());
            return true;
        }
        let e = self.order[idx];
        let partners = self.p.crossings(e).intersection(processed);
        let mut now = processed;
        now.insert(e);
        self.place(idx, e, partners, now)
    }

    /// Place the remaining crossings of `e` one at a time: the next crossing
    /// along `e`, then its position along the partner.
    fn place(&mut self, idx: usize, e: usize, remaining: EdgeSet, processed: EdgeSet) -> bool {
        if remaining.is_empty() {
            if self.partial_planar(processed) {
                return self.extend(idx + 1, processed);
            }
            return false;
        }
        if !self.meter.tick() {
            return true;
        }
        for f in remaining.iter() {
            let mut rest = remaining;
            rest.remove(f);
            self.seq[e].push(f);
            for pos in 0..=self.seq[f].len() {
                self.seq[f].insert(pos, e);
                let stop = self.place(idx, e, rest, processed);
                self.seq[f].remove(pos);
                if stop {
                    self.seq[e].pop();
                    return true;
                }
            }
            self.seq[e].pop();
        }
        false
    }

    fn partial_planar(&self, processed: EdgeSet) -> bool {
        let g = self.p.host();
        let n = g.vertex_count();
        let mut ids = std::collections::HashMap::new();
        let mut count = n;
        let mut edges = Vec::new();
        for e in processed.iter() {
            let (u, v) = g.edge(e);
            let mut at = u;
            for &f in &self.seq[e] {
                let key = (e.min(f), e.max(f));
                let c = *ids.entry(key).or_insert_with(|| {
                    count += 1;
                    count - 1
                });
                edges.push((at, c));
                at = c;
            }
            edges.push((at, v));
        }
        planarity_test(count, &edges)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_named, PairIndex};
    use crate::prescription::MissedPairSet;

    #[test]
    fn zero_crossings_is_the_host() {
        let g = build_named("prism", &[]).unwrap();
        let idx = PairIndex::new(&g);
        let all = MissedPairSet::from_bits(&idx, crate::bits::PairSet::full(idx.len())).unwrap();
        let p = Prescription::from_missed(&g, &idx, &all).unwrap();
        let pl = build_planarization(&p, &CrossingOrders(vec![Vec::new(); 9])).unwrap();
        assert_eq!(pl.nodes.len(), 6);
        assert_eq!(pl.edges.len(), 9);
    }

    #[test]
    fn c4_both_diagonals() {
        let g = build_named("cycle", &[4]).unwrap();
        let p = Prescription::full(&g);
        // edges (0,1)=0 (0,3)=1 (1,2)=2 (2,3)=3; 0x3 and 1x2
        let orders = CrossingOrders(vec![vec![3], vec![2], vec![1], vec![0]]);
        let pl = build_planarization(&p, &orders).unwrap();
        assert_eq!((pl.nodes.len(), pl.edges.len()), (6, 8));
        assert!(pl.segment_map.iter().all(|s| s.len() == 2));
        assert!(pl.is_planar());
        let (v, _) = prove_unrealizable_relaxed(&p, Budget::UNLIMITED).unwrap();
        assert!(matches!(v, RelaxedVerdict::Undecided(_)));
    }

    #[test]
    fn mismatched_orders_are_rejected() {
        let g = build_named("cycle", &[4]).unwrap();
        let p = Prescription::full(&g);
        let bad = CrossingOrders(vec![vec![2], vec![2], vec![1], vec![0]]);
        assert!(build_planarization(&p, &bad).is_err());
    }
}
