#![allow(dead_code)]

use maxcr_core::maximizer::{single_run, MaximizeBudget};
use maxcr_core::realize::{verify_drawing, CombinatorialDrawing};
use maxcr_core::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Random graph with 2 to 8 edges and no isolated vertices.
pub fn random_graph(rng: &mut ChaCha8Rng) -> Graph {
    loop {
        let n = rng.gen_range(3..=7);
        let mut all: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        all.shuffle(rng);
        let m = rng.gen_range(2..=8.min(all.len()));
        all.truncate(m);
        let used: std::collections::BTreeSet<usize> = all.iter().flat_map(|&(u, v)| [u, v]).collect();
        let relabel: Vec<usize> = (0..n).map(|v| used.range(..v).count()).collect();
        let edges: Vec<(usize, usize)> = all.iter().map(|&(u, v)| (relabel[u], relabel[v])).collect();
        let g = Graph::new(used.len(), edges).unwrap();
        if thrackle_number(&g) > 0 {
            return g;
        }
    }
}

pub fn prescription_of(d: &CombinatorialDrawing) -> Prescription {
    let mut crossings = vec![EdgeSet::EMPTY; d.graph.edge_count()];
    for (a, b) in d.crossing_pairs() {
        crossings[a].insert(b);
        crossings[b].insert(a);
    }
    Prescription::new(d.graph.clone(), crossings).unwrap()
}

/// Prescriptions read off drawings, so each is realizable by construction.
pub fn realizable_instances(count: usize) -> Vec<Prescription> {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    (0..count)
        .map(|_| {
            let g = random_graph(&mut rng);
            let budget = MaximizeBudget {
                stall_limit: rng.gen_range(0..20),
                route_steps: *[1u64, 3, 10, 20_000].choose(&mut rng).unwrap(),
                ..MaximizeBudget::default()
            };
            let d = single_run(&g, &budget, rng.gen()).to_drawing();
            verify_drawing(&d, &g).unwrap();
            prescription_of(&d)
        })
        .collect()
}
