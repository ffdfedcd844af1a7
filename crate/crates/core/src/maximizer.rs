//! Crossing-maximizing drawings by planarization insertion.
//!
//! Edges are inserted one at a time into a plane map. Each new edge follows a
//! long simple path in the dual of the current planarization, crossing edges
//! that are distinct, already drawn, and not incident to it. A rip-and-reroute
//! phase then removes a few edges (or the star of a vertex) and inserts them
//! again, keeping the result unless the count drops. Restarts differ in seed
//! and run in parallel.

use crate::bits::EdgeSet;
use crate::graph::Graph;
use crate::map::{twin, Node, PlaneMap};
use crate::realize::{attach_coordinates, CombinatorialDrawing};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::time::{Duration, Instant};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MaximizeBudget {
    pub restarts: usize,
    /// Consecutive rejected reroutes before a restart ends.
    pub stall_limit: usize,
    /// Dual search steps per insertion.
    pub route_steps: u64,
    /// Wall clock per restart.
    pub max_seconds: f64,
    /// A restart stops improving once it reaches this count.
    pub target: Option<usize>,
    /// Largest number of edges ripped out in one move.
    pub max_rip: usize,
    /// Also rip out every edge at a random vertex, now and then.
    pub vertex_rips: bool,
    /// Keep reroutes that tie the current count.
    pub accept_ties: bool,
}

impl Default for MaximizeBudget {
    fn default() -> MaximizeBudget {
        MaximizeBudget {
            restarts: 8,
            stall_limit: 400,
            route_steps: 20_000,
            max_seconds: 60.0,
            target: None,
            max_rip: 3,
            vertex_rips: true,
            accept_ties: true,
        }
    }
}

/// A drawing under construction: the plane map of the inserted edges. Faces
/// are read from the map on demand, so there is no separate dual to keep in sync.
#[derive(Clone, Debug)]
pub struct PartialDrawing {
    pub graph: Graph,
    pub map: PlaneMap,
    pub inserted: EdgeSet,
}

/// A route for a new edge `s -> t`: the corner it leaves `s` from (None when
/// `s` is not drawn yet), the darts it crosses in order, and a dart out of `t`
/// on the final face (None when `t` is not drawn yet).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Route {
    pub s: usize,
    pub t: usize,
    pub start: Option<u32>,
    pub crossed: Vec<u32>,
    pub end: Option<u32>,
}

impl PartialDrawing {
    pub fn new(graph: &Graph) -> PartialDrawing {
        PartialDrawing {
            graph: graph.clone(),
            map: PlaneMap::new(graph.vertex_count()),
            inserted: EdgeSet::EMPTY,
        }
    }

    pub fn crossing_count(&self) -> usize {
        self.map.crossing_count()
    }

    fn drawn(&self, v: usize) -> bool {
        self.map.degree(v) > 0
    }

    /// Search for a route for `e` crossing as many edges as possible. The
    /// search extends the route segment by segment on a copy of the map, so
    /// faces split as the route advances and no face needs to be avoided.
    pub fn longest_route<R: Rng>(&mut self, e: usize, rng: &mut R, steps: u64) -> Option<Route> {
        let (u, v) = self.graph.edge(e);
        let (s, t) = if !self.drawn(u) && self.drawn(v) { (v, u) } else { (u, v) };
        let allowed: EdgeSet = self
            .inserted
            .iter()
            .filter(|&f| !self.graph.edges_incident(e, f))
            .collect();
        let mut search = RouteSearch {
            e,
            t,
            t_drawn: self.drawn(t),
            allowed,
            start: None,
            path: Vec::new(),
            best: None,
            steps_left: steps,
        };
        let map = &self.map;
        if self.drawn(s) {
            let mut corners = map.rotation(s);
            corners.shuffle(rng);
            for a in corners {
                search.start = Some(a);
                search.explore(map, s, a, EdgeSet::EMPTY, rng);
            }
        } else {
            // `s` hangs off the first crossing, or joins `t` directly.
            if search.t_drawn {
                let y = map.rotation(t)[0];
                search.offer(None, Some(y));
            } else if self.inserted.is_empty() {
                search.offer(None, None);
            }
            let mut darts: Vec<u32> = (0..map.dart_count() as u32)
                .filter(|&y| map.is_alive(y) && search.allowed.contains(map.label(y)))
                .collect();
            darts.shuffle(rng);
            for y in darts {
                let mut m = map.clone();
                let (c, z) = m.subdivide(y, crossing_node(e, m.label(y)));
                m.add_segment(c, Some(twin(y)), s, None, e);
                search.start = None;
                search.path.push(y);
                search.explore(&m, c, z, EdgeSet::singleton(map.label(y)), rng);
                search.path.pop();
                if search.out_of_steps() {
                    break;
                }
            }
        }
        search.best.map(|(start, crossed, end)| Route {
            s,
            t,
            start,
            crossed,
            end,
        })
    }

    /// Draw `e` along `route`.
    pub fn apply_route(&mut self, e: usize, route: &Route) {
        let m = &mut self.map;
        let crossing = |m: &PlaneMap, y: u32| crossing_node(e, m.label(y));
        let Route {
            s, t, start, crossed, end, ..
        } = route.clone();
        if crossed.is_empty() {
            match (start, end) {
                (Some(a), Some(y)) => {
                    let py = m.prev(y);
                    m.add_segment(s, Some(a), t, Some(py), e);
                }
                (Some(a), None) => {
                    m.add_segment(s, Some(a), t, None, e);
                }
                (None, Some(y)) => {
                    let py = m.prev(y);
                    m.add_segment(t, Some(py), s, None, e);
                }
                (None, None) => {
                    m.add_segment(s, None, t, None, e);
                }
            }
        } else {
            let y0 = crossed[0];
            let node = crossing(m, y0);
            let (mut tip, mut after) = m.subdivide(y0, node);
            match start {
                Some(a) => m.add_segment(s, Some(a), tip, Some(twin(y0)), e),
                None => m.add_segment(tip, Some(twin(y0)), s, None, e),
            };
            for &y in &crossed[1..] {
                let node = crossing(m, y);
                let (c, z) = m.subdivide(y, node);
                m.add_segment(tip, Some(after), c, Some(twin(y)), e);
                tip = c;
                after = z;
            }
            match end {
                Some(y) => {
                    let py = m.prev(y);
                    m.add_segment(tip, Some(after), t, Some(py), e);
                }
                None => {
                    m.add_segment(tip, Some(after), t, None, e);
                }
            }
        }
        self.inserted.insert(e);
    }

    pub fn remove(&mut self, e: usize) {
        self.map.remove_edge(e);
        self.inserted.remove(e);
    }

    pub fn to_drawing(&self) -> CombinatorialDrawing {
        CombinatorialDrawing::from_map(&self.graph, &self.map)
    }
}

fn crossing_node(e: usize, f: usize) -> Node {
    Node::Crossing(e.min(f), e.max(f))
}

struct RouteSearch {
    e: usize,
    t: usize,
    t_drawn: bool,
    allowed: EdgeSet,
    start: Option<u32>,
    path: Vec<u32>,
    best: Option<(Option<u32>, Vec<u32>, Option<u32>)>,
    steps_left: u64,
}

impl RouteSearch {
    fn best_len(&self) -> Option<usize> {
        self.best.as_ref().map(|b| b.1.len())
    }

    fn offer(&mut self, start: Option<u32>, end: Option<u32>) {
        if self.best_len().is_none_or(|b| self.path.len() > b) {
            self.best = Some((start, self.path.clone(), end));
        }
    }

    /// Continue from the corner `(tip, after)` of `map`.
    /// The step budget only limits improvement: until some route is found the
    /// search keeps going.
    fn out_of_steps(&self) -> bool {
        self.steps_left == 0 && self.best.is_some()
    }

    fn explore<R: Rng>(&mut self, map: &PlaneMap, tip: usize, after: u32, crossed: EdgeSet, rng: &mut R) {
        if self.out_of_steps() {
            return;
        }
        self.steps_left = self.steps_left.saturating_sub(1);
        if self
            .best_len()
            .is_some_and(|b| self.path.len() + self.allowed.difference(crossed).len() <= b)
        {
            return;
        }
        let mut face = map.corner_face(after);
        if self.t_drawn {
            if let Some(&y) = face.iter().find(|&&y| map.origin(y) == self.t) {
                self.offer(self.start, Some(y));
            }
        } else {
            self.offer(self.start, None);
        }
        face.shuffle(rng);
        for y in face {
            let f = map.label(y);
            if !self.allowed.contains(f) || crossed.contains(f) {
                continue;
            }
            let mut m = map.clone();
            let (c, z) = m.subdivide(y, crossing_node(self.e, f));
            m.add_segment(tip, Some(after), c, Some(twin(y)), self.e);
            self.path.push(y);
            let mut next = crossed;
            next.insert(f);
            self.explore(&m, c, z, next, rng);
            self.path.pop();
            if self.out_of_steps() {
                return;
            }
        }
    }
}

/// Insert `e` along the longest route found; returns the crossings it gained.
pub fn insert_edge_max_route<R: Rng>(d: &mut PartialDrawing, e: usize, rng: &mut R, steps: u64) -> Option<usize> {
    if d.inserted.contains(e) {
        return None;
    }
    let route = d.longest_route(e, rng, steps)?;
    let gained = route.crossed.len();
    d.apply_route(e, &route);
    Some(gained)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MaximizeResult {
    pub crossings: usize,
    pub seed: u64,
    pub restart: usize,
    pub drawing: CombinatorialDrawing,
    /// Best count of every restart, in restart order.
    pub restart_counts: Vec<usize>,
}

/// Random insertion order in which every edge after the first touches an
/// already chosen vertex whenever possible.
fn connected_order<R: Rng>(g: &Graph, rng: &mut R) -> Vec<usize> {
    let m = g.edge_count();
    let mut left: Vec<usize> = (0..m).collect();
    let mut seen = vec![false; g.vertex_count()];
    let mut order = Vec::with_capacity(m);
    while !left.is_empty() {
        let touching: Vec<usize> = (0..left.len())
            .filter(|&i| {
                let (u, v) = g.edge(left[i]);
                seen[u] || seen[v]
            })
            .collect();
        let i = if touching.is_empty() {
            rng.gen_range(0..left.len())
        } else {
            touching[rng.gen_range(0..touching.len())]
        };
        let e = left.swap_remove(i);
        let (u, v) = g.edge(e);
        seen[u] = true;
        seen[v] = true;
        order.push(e);
    }
    order
}

/// Insert every edge in a random order. An edge that cannot be added to the
/// partial drawing without breaking goodness sends the construction back to
/// the start with a new order.
fn construct<R: Rng>(g: &Graph, budget: &MaximizeBudget, rng: &mut R) -> PartialDrawing {
    for _ in 0..1000 {
        let mut d = PartialDrawing::new(g);
        let complete = connected_order(g, rng)
            .into_iter()
            .all(|e| insert_edge_max_route(&mut d, e, rng, budget.route_steps).is_some());
        if complete {
            return d;
        }
    }
    panic!("no insertion order of {:?} completed", g.name());
}

/// One restart: randomized construction, then rip-and-reroute.
pub fn single_run(g: &Graph, budget: &MaximizeBudget, seed: u64) -> PartialDrawing {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let started = Instant::now();
    let limit = Duration::from_secs_f64(budget.max_seconds.max(0.0));
    let mut d = construct(g, budget, &mut rng);
    let m = g.edge_count();
    let mut stall = 0;
    while m > 1 && stall < budget.stall_limit && started.elapsed() < limit {
        if budget.target.is_some_and(|t| d.crossing_count() >= t) {
            break;
        }
        let before = d.crossing_count();
        let saved = d.clone();
        let mut ripped: Vec<usize> = if budget.vertex_rips && rng.gen_bool(0.25) {
            d.graph.incident_edges(rng.gen_range(0..d.graph.vertex_count())).to_vec()
        } else {
            let r = rng.gen_range(1..=budget.max_rip.clamp(1, m));
            let mut all: Vec<usize> = (0..m).collect();
            all.shuffle(&mut rng);
            all.truncate(r);
            all
        };
        for &e in &ripped {
            d.remove(e);
        }
        ripped.shuffle(&mut rng);
        let ok = ripped
            .iter()
            .all(|&e| insert_edge_max_route(&mut d, e, &mut rng, budget.route_steps).is_some());
        let after = d.crossing_count();
        if ok && (after > before || (budget.accept_ties && after == before)) {
            if after > before {
                stall = 0;
            } else {
                stall += 1;
            }
        } else {
            d = saved;
            stall += 1;
        }
    }
    d
}

/// Best drawing over `budget.restarts` seeded restarts. The winner has the
/// most crossings; ties go to the least crossing-pair list, then the earliest
/// restart.
pub fn maximize_crossings(g: &Graph, budget: &MaximizeBudget, seed: u64) -> MaximizeResult {
    let runs: Vec<(usize, u64, PartialDrawing)> = (0..budget.restarts.max(1))
        .into_par_iter()
        .map(|i| {
            let s = seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(i as u64);
            (i, s, single_run(g, budget, s))
        })
        .collect();
    let restart_counts: Vec<usize> = runs.iter().map(|r| r.2.crossing_count()).collect();
    let (restart, run_seed, best) = runs
        .into_iter()
        .map(|(i, s, d)| {
            let pairs = d.map.crossing_pairs();
            (i, s, d, pairs)
        })
        .min_by(|a, b| {
            b.2.crossing_count()
                .cmp(&a.2.crossing_count())
                .then_with(|| a.3.cmp(&b.3))
                .then(a.0.cmp(&b.0))
        })
        .map(|(i, s, d, _)| (i, s, d))
        .unwrap();
    let mut drawing = best.to_drawing();
    attach_coordinates(&mut drawing).expect("maps built by insertion are consistent");
    MaximizeResult {
        crossings: drawing.crossing_count(),
        seed: run_seed,
        restart,
        drawing,
        restart_counts,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_named;
    use crate::realize::verify_drawing;

    #[test]
    fn empty_drawing_gets_no_crossings() {
        let g = build_named("path", &[1]).unwrap();
        let mut d = PartialDrawing::new(&g);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert_eq!(insert_edge_max_route(&mut d, 0, &mut rng, 100), Some(0));
    }

    #[test]
    fn disjoint_edges_cross() {
        let g = Graph::new(4, [(0, 1), (2, 3)]).unwrap();
        let mut d = PartialDrawing::new(&g);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        assert_eq!(insert_edge_max_route(&mut d, 0, &mut rng, 1000), Some(0));
        assert_eq!(insert_edge_max_route(&mut d, 1, &mut rng, 1000), Some(1));
        assert_eq!(verify_drawing(&d.to_drawing(), &g).unwrap().count, 1);
    }

    #[test]
    fn gains_add_up_to_the_drawing() {
        let g = Graph::new(5, [(0, 1), (1, 2), (2, 3), (3, 4), (0, 4), (0, 2), (1, 3)]).unwrap();
        let mut d = PartialDrawing::new(&g);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut total = 0;
        for (a, b) in [(0, 1), (1, 2), (2, 3), (3, 4), (0, 4), (0, 2), (1, 3)] {
            let e = g.edge_index(a, b).unwrap();
            total += insert_edge_max_route(&mut d, e, &mut rng, 1000).unwrap();
        }
        assert_eq!(verify_drawing(&d.to_drawing(), &g).unwrap().count, total);
        assert!(total >= 5);
    }

    #[test]
    fn runs_are_deterministic_and_valid() {
        let g = build_named("prism", &[]).unwrap();
        let budget = MaximizeBudget {
            restarts: 2,
            stall_limit: 50,
            ..MaximizeBudget::default()
        };
        let a = maximize_crossings(&g, &budget, 3);
        let b = maximize_crossings(&g, &budget, 3);
        assert_eq!(a.drawing, b.drawing);
        assert_eq!(verify_drawing(&a.drawing, &g).unwrap().count, a.crossings);
    }

    #[test]
    fn prism_reaches_fifteen() {
        let g = build_named("prism", &[]).unwrap();
        let r = maximize_crossings(&g, &MaximizeBudget::default(), 1);
        assert_eq!(r.crossings, 15);
    }
}
