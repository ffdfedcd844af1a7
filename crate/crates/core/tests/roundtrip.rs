mod common;

use common::{random_graph, realizable_instances};
use maxcr_core::realize::{
    decide_exact, extract_drawing, prove_unrealizable_relaxed, verify_drawing, Budget, ExactVerdict, RelaxedVerdict,
};
use maxcr_core::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn extracted_drawings_reproduce_realizable_prescriptions() {
    let instances = realizable_instances(200);
    let mut distinct_totals = std::collections::BTreeSet::new();
    for p in &instances {
        let d = extract_drawing(p, Budget::default()).unwrap();
        let report = verify_drawing(&d, p.host()).unwrap();
        assert_eq!(report.pairs, p.crossing_pairs(), "on {:?}", p.host());
        assert!(d.coordinates.is_some());
        distinct_totals.insert(p.total_crossings());
    }
    assert!(distinct_totals.len() > 3, "instances too uniform: {distinct_totals:?}");
}

#[test]
fn relaxed_never_rejects_a_realizable_prescription() {
    for p in realizable_instances(60) {
        let (v, _) = prove_unrealizable_relaxed(&p, Budget::nodes(200_000)).unwrap();
        assert!(!v.is_unrealizable(), "relaxed rejected a drawn prescription on {:?}", p.host());
    }
}

#[test]
fn relaxed_unrealizable_implies_exact_unrealizable() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let (mut both, mut rejected) = (0, 0);
    for _ in 0..300 {
        let g = random_graph(&mut rng);
        let index = PairIndex::new(&g);
        let bits: PairSet = (0..index.len()).filter(|_| rng.gen_bool(0.3)).collect();
        let m = MissedPairSet::from_bits(&index, bits).unwrap();
        let p = Prescription::from_missed(&g, &index, &m).unwrap();
        let (relaxed, _) = prove_unrealizable_relaxed(&p, Budget::nodes(100_000)).unwrap();
        let (exact, _) = decide_exact(&p, Budget::nodes(2_000_000));
        if matches!(relaxed, RelaxedVerdict::BudgetExhausted) || matches!(exact, ExactVerdict::BudgetExhausted) {
            continue;
        }
        both += 1;
        if relaxed.is_unrealizable() {
            rejected += 1;
            assert!(exact.is_unrealizable(), "relaxed and exact disagree on {:?}", p.crossing_pairs());
        }
    }
    assert!(both >= 250, "only {both} instances settled by both engines");
    assert!(rejected > 0, "relaxed prover never fired");
}

#[test]
fn budgets_survive_json() {
    for b in [Budget::UNLIMITED, Budget::nodes(5), Budget::default()] {
        let back: Budget = serde_json::from_str(&serde_json::to_string(&b).unwrap()).unwrap();
        assert_eq!(back, b);
    }
}
