use super::{Budget, Meter, SearchStats};
use crate::bits::EdgeSet;
use crate::map::{twin, Node, PlaneMap};
use crate::prescription::Prescription;
use crate::realize::CombinatorialDrawing;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExactOptions {
    pub budget: Budget,
    /// Fix the orientation at the first original vertex that reaches degree
    /// three, discarding mirror images.
    pub mirror_reduction: bool,
}

impl Default for ExactOptions {
    fn default() -> ExactOptions {
        ExactOptions {
            budget: Budget::default(),
            mirror_reduction: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ExactVerdict {
    Realizable(Box<CombinatorialDrawing>),
    Unrealizable,
    BudgetExhausted,
}

impl ExactVerdict {
    pub fn is_realizable(&self) -> bool {
        matches!(self, ExactVerdict::Realizable(_))
    }

    pub fn is_unrealizable(&self) -> bool {
        matches!(self, ExactVerdict::Unrealizable)
    }
}

pub fn decide_exact(p: &Prescription, budget: Budget) -> (ExactVerdict, SearchStats) {
    decide_exact_with(
        p,
        ExactOptions {
            budget,
            ..ExactOptions::default()
        },
    )
}

/// Complete decision: returns a drawing whose crossing set equals `p`, or
/// proves none exists.
pub fn decide_exact_with(p: &Prescription, options: ExactOptions) -> (ExactVerdict, SearchStats) {
    let g = p.host();
    let mut meter = options.budget.start();
    let mut combined = PlaneMap::new(g.vertex_count());
    for class in edge_classes(p) {
        let mut solver = Solver::new(p, class, options.mirror_reduction, &mut meter);
        let empty = PlaneMap::new(g.vertex_count());
        solver.place(&empty, 0);
        let found = solver.found.take();
        match found {
            Some(map) => combined.absorb(&map),
            None if meter.exhausted => return (ExactVerdict::BudgetExhausted, meter.stats()),
            None => return (ExactVerdict::Unrealizable, meter.stats()),
        }
    }
    combined.compact();
    let drawing = CombinatorialDrawing::from_map(g, &combined);
    (ExactVerdict::Realizable(Box::new(drawing)), meter.stats())
}

/// Edge classes connected through shared endpoints or prescribed crossings.
/// Classes can be drawn independently of each other.
fn edge_classes(p: &Prescription) -> Vec<EdgeSet> {
    let g = p.host();
    let m = g.edge_count();
    let mut assigned = EdgeSet::EMPTY;
    let mut out = Vec::new();
    for start in 0..m {
        if assigned.contains(start) {
            continue;
        }
        let mut class = EdgeSet::singleton(start);
        loop {
            let mut grown = class;
            for e in class.iter() {
                grown = grown.union(g.incident_to_edge(e)).union(p.crossings(e));
            }
            if grown == class {
                break;
            }
            class = grown;
        }
        assigned = assigned.union(class);
        out.push(class);
    }
    out
}

#[derive(Clone, Copy)]
enum Target {
    Drawn(usize),
    Fresh(usize),
}

struct Solver<'a, 'm> {
    p: &'a Prescription,
    order: Vec<usize>,
    targets: Vec<EdgeSet>,
    drawn_before: Vec<u16>,
    mirror: Option<(usize, usize)>,
    meter: &'m mut Meter,
    found: Option<PlaneMap>,
}

impl<'a, 'm> Solver<'a, 'm> {
    fn new(p: &'a Prescription, class: EdgeSet, mirror_reduction: bool, meter: &'m mut Meter) -> Self {
        let g = p.host();
        let order = insertion_order(p, class);
        let mut targets = Vec::with_capacity(order.len());
        let mut drawn_before = Vec::with_capacity(order.len());
        let mut drawn_edges = EdgeSet::EMPTY;
        let mut drawn_vertices = 0u16;
        let mut degree = vec![0usize; g.vertex_count()];
        let mut mirror = None;
        for (i, &e) in order.iter().enumerate() {
            targets.push(p.crossings(e).intersection(drawn_edges));
            drawn_before.push(drawn_vertices);
            let (u, v) = g.edge(e);
            drawn_edges.insert(e);
            drawn_vertices |= 1 << u | 1 << v;
            degree[u] += 1;
            degree[v] += 1;
            if mirror.is_none() && mirror_reduction {
                let w = [u.min(v), u.max(v)].into_iter().find(|&w| degree[w] == 3);
                if let Some(w) = w {
                    mirror = Some((i + 1, w));
                }
            }
        }
        Solver {
            p,
            order,
            targets,
            drawn_before,
            mirror,
            meter,
            found: None,
        }
    }

    /// Returns true when the search should stop (drawing found or budget gone).
    fn place(&mut self, map: &PlaneMap, idx: usize) -> bool {
        if !self.meter.tick() {
            return true;
        }
        if let Some((at, w)) = self.mirror {
            if idx == at && !oriented(map, w) {
                return false;
            }
        }
        if idx == self.order.len() {
            self.found = Some(map.clone());
            return true;
        }
        let e = self.order[idx];
        let (u, v) = self.p.host().edge(e);
        let wanted = self.targets[idx];
        let drawn = self.drawn_before[idx];
        let (ud, vd) = (drawn >> u & 1 == 1, drawn >> v & 1 == 1);

        if idx == 0 {
            let mut m = map.clone();
            m.add_segment(u, None, v, None, e);
            return self.place(&m, 1);
        }
        if ud || vd {
            let (s, t) = if ud { (u, v) } else { (v, u) };
            let target = if ud && vd { Target::Drawn(t) } else { Target::Fresh(t) };
            for d in map.rotation(s) {
                if self.route(map, idx, s, d, wanted, target) {
                    return true;
                }
            }
            return false;
        }
        // Neither endpoint drawn: start at the first crossing, with `u` hanging
        // off on one side of the crossed segment.
        for y in 0..map.dart_count() as u32 {
            if !map.is_alive(y) || !wanted.contains(map.label(y)) {
                continue;
            }
            let f = map.label(y);
            let mut m = map.clone();
            let (c, z) = m.subdivide(y, crossing_node(e, f));
            m.add_segment(c, Some(twin(y)), u, None, e);
            let mut rest = wanted;
            rest.remove(f);
            if self.route(&m, idx, c, z, rest, Target::Fresh(v)) {
                return true;
            }
        }
        false
    }

    /// Extend the route of `order[idx]` from the corner `(tip, after)`.
    fn route(&mut self, map: &PlaneMap, idx: usize, tip: usize, after: u32, remaining: EdgeSet, target: Target) -> bool {
        if !self.meter.tick() {
            return true;
        }
        let e = self.order[idx];
        let face = map.corner_face(after);
        if remaining.is_empty() {
            match target {
                Target::Drawn(t) => {
                    for &y in &face {
                        if map.origin(y) == t {
                            let mut m = map.clone();
                            m.add_segment(tip, Some(after), t, Some(map.prev(y)), e);
                            if self.place(&m, idx + 1) {
                                return true;
                            }
                        }
                    }
                }
                Target::Fresh(t) => {
                    let mut m = map.clone();
                    m.add_segment(tip, Some(after), t, None, e);
                    if self.place(&m, idx + 1) {
                        return true;
                    }
                }
            }
            return false;
        }
        for &y in &face {
            let f = map.label(y);
            if !remaining.contains(f) {
                continue;
            }
            let mut m = map.clone();
            let (c, z) = m.subdivide(y, crossing_node(e, f));
            m.add_segment(tip, Some(after), c, Some(twin(y)), e);
            let mut rest = remaining;
            rest.remove(f);
            if self.route(&m, idx, c, z, rest, target) {
                return true;
            }
        }
        false
    }
}

fn crossing_node(e: usize, f: usize) -> Node {
    Node::Crossing(e.min(f), e.max(f))
}

/// Canonical orientation test: around `w`, reading counter-clockwise from the
/// smallest label, the remaining two labels appear in increasing order.
fn oriented(map: &PlaneMap, w: usize) -> bool {
    let rot = map.rotation(w);
    debug_assert_eq!(rot.len(), 3);
    let labels: Vec<usize> = rot.iter().map(|&d| map.label(d)).collect();
    let k = (0..3).min_by_key(|&i| labels[i]).unwrap();
    labels[(k + 1) % 3] < labels[(k + 2) % 3]
}

/// Greedy insertion order: each edge after the first touches a drawn vertex or
/// crosses a drawn edge; closing edges and heavily constrained edges go first.
fn insertion_order(p: &Prescription, class: EdgeSet) -> Vec<usize> {
    let g = p.host();
    let mut order = Vec::with_capacity(class.len());
    let first = class
        .iter()
        .max_by_key(|&e| (p.crossings(e).intersection(class).len(), usize::MAX - e))
        .expect("non-empty class");
    order.push(first);
    let mut drawn_edges = EdgeSet::singleton(first);
    let (a, b) = g.edge(first);
    let mut drawn_vertices: u16 = 1 << a | 1 << b;
    while order.len() < class.len() {
        let next = class
            .difference(drawn_edges)
            .iter()
            .filter_map(|e| {
                let (u, v) = g.edge(e);
                let ends = (drawn_vertices >> u & 1) + (drawn_vertices >> v & 1);
                let cross = p.crossings(e).intersection(drawn_edges).len();
                if ends == 0 && cross == 0 {
                    None
                } else {
                    Some(((ends, cross), e))
                }
            })
            .max_by_key(|&(score, e)| (score, usize::MAX - e))
            .map(|(_, e)| e)
            .expect("class is connected through incidences and crossings");
        order.push(next);
        drawn_edges.insert(next);
        let (u, v) = g.edge(next);
        drawn_vertices |= 1 << u | 1 << v;
    }
    order
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_named, PairIndex};
    use crate::prescription::MissedPairSet;
    use crate::realize::verify_drawing;

    fn full(name: &str, params: &[usize]) -> Prescription {
        Prescription::full(&build_named(name, params).unwrap())
    }

    fn verdict(p: &Prescription) -> ExactVerdict {
        decide_exact(p, Budget::UNLIMITED).0
    }

    #[test]
    fn odd_cycles_are_thrackleable() {
        for n in [3, 5, 7] {
            let p = full("cycle", &[n]);
            match verdict(&p) {
                ExactVerdict::Realizable(d) => {
                    let report = verify_drawing(&d, p.host()).unwrap();
                    assert_eq!(report.pairs, p.crossing_pairs());
                }
                other => panic!("C{n}: {other:?}"),
            }
        }
    }

    #[test]
    fn c4_and_bowtie_are_not_thrackleable() {
        assert!(verdict(&full("cycle", &[4])).is_unrealizable());
        assert!(verdict(&full("bowtie", &[])).is_unrealizable());
    }

    #[test]
    fn c4_with_one_missed_pair_is_drawable() {
        let g = build_named("cycle", &[4]).unwrap();
        let idx = PairIndex::new(&g);
        let p = Prescription::from_missed(&g, &idx, &MissedPairSet::empty().with(0)).unwrap();
        assert!(verdict(&p).is_realizable());
    }

    #[test]
    fn disconnected_classes_are_combined() {
        // Two disjoint triangles with no crossings: drawable.
        let g = crate::graph::Graph::new(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap();
        let p = Prescription::new(g.clone(), vec![EdgeSet::EMPTY; 6]).unwrap();
        match verdict(&p) {
            ExactVerdict::Realizable(d) => {
                assert_eq!(verify_drawing(&d, &g).unwrap().count, 0);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn mirror_reduction_does_not_change_verdicts() {
        let g = build_named("bowtie", &[]).unwrap();
        let idx = PairIndex::new(&g);
        for i in 0..idx.len() {
            let p = Prescription::from_missed(&g, &idx, &MissedPairSet::empty().with(i)).unwrap();
            let mut opts = ExactOptions {
                budget: Budget::UNLIMITED,
                mirror_reduction: true,
            };
            let with = decide_exact_with(&p, opts).0.is_realizable();
            opts.mirror_reduction = false;
            let without = decide_exact_with(&p, opts).0.is_realizable();
            assert_eq!(with, without);
        }
    }

    #[test]
    fn budget_is_reported() {
        let p = full("prism", &[]);
        let (v, stats) = decide_exact(&p, Budget::nodes(10));
        assert_eq!(v, ExactVerdict::BudgetExhausted);
        assert!(stats.nodes > 10);
    }
}
