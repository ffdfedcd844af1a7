//! Prints one PASS/FAIL line per acceptance criterion, with the measured
//! values. Failing criteria are reported, not asserted.

mod common;

use maxcr_core::graph::non_incident_pairs;
use maxcr_core::maximizer::{maximize_crossings, MaximizeBudget};
use maxcr_core::pipeline::*;
use maxcr_core::realize::{
    decide_exact, extract_drawing, prove_unrealizable_relaxed, verify_drawing, Budget, ExactVerdict, RelaxedVerdict,
};
use maxcr_core::search::compute_maxcr_exact;
use maxcr_core::subgraph::sub_thrackle_number;
use maxcr_core::*;
use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::time::Instant;

struct Line {
    id: usize,
    title: &'static str,
    pass: bool,
    details: Vec<String>,
    seconds: f64,
}

fn report(lines: &[Line]) {
    for l in lines {
        let verdict = if l.pass { "PASS" } else { "FAIL" };
        println!("criterion {} {verdict}: {} ({:.1} s)", l.id, l.title, l.seconds);
        for d in &l.details {
            println!("    {d}");
        }
    }
    let passed = lines.iter().filter(|l| l.pass).count();
    println!("acceptance: {passed}/{} criteria pass", lines.len());
}

fn mark(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "MISMATCH"
    }
}

fn criterion1() -> Line {
    let t = Instant::now();
    let mut details = Vec::new();
    let mut pass = true;
    let checks = [
        ("Th(C3xC3)", thrackle_number(&build_named("c3xc3", &[]).unwrap()), 99),
        ("Th(G-v)", thrackle_number(&graph::parse_designator("c3xc3-v0").unwrap()), 55),
        ("STh(prism)", sub_thrackle_number(&build_named("prism", &[]).unwrap()), 15),
        ("Th(db531)", thrackle_number(&build_named("db531", &[]).unwrap()), 11),
    ];
    for (name, got, want) in checks {
        pass &= got == want;
        details.push(format!("{name} = {got}, expected {want}: {}", mark(got == want)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut agree = 0;
    for _ in 0..100 {
        let n = rng.gen_range(2..=12);
        let edges: Vec<(usize, usize)> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .filter(|_| rng.gen_bool(0.35))
            .take(graph::MAX_EDGES)
            .collect();
        let g = Graph::new(n, edges).unwrap();
        let direct = (0..g.edge_count())
            .flat_map(|e| (e + 1..g.edge_count()).map(move |f| (e, f)))
            .filter(|&(e, f)| !g.edges_incident(e, f))
            .count();
        if thrackle_number(&g) == direct && non_incident_pairs(&g).len() == direct {
            agree += 1;
        }
    }
    pass &= agree == 100;
    details.push(format!("Th equals the non-incident pair count on {agree}/100 random graphs"));
    let seconds = t.elapsed().as_secs_f64();
    pass &= seconds < 1.0;
    Line {
        id: 1,
        title: "thrackle calculus",
        pass,
        details,
        seconds,
    }
}

fn criterion2() -> Line {
    let t = Instant::now();
    let ctx = FilterContext::new(&graph::parse_designator("c3xc3-v0").unwrap());
    let (pools, disjoint) = ctx.coverage_pools();
    let sizes: Vec<usize> = pools.iter().map(|p| p.len()).collect();
    let seconds = t.elapsed().as_secs_f64();
    let pass = ctx.c4s.len() == 5 && ctx.bowties.len() == 4 && disjoint && seconds < 1.0;
    Line {
        id: 2,
        title: "structure counts in G-v",
        pass,
        details: vec![
            format!("{} C4 copies (expected 5), {} bowties (expected 4)", ctx.c4s.len(), ctx.bowties.len()),
            format!("pair pools pairwise disjoint: {disjoint}; sizes {sizes:?}"),
        ],
        seconds,
    }
}

fn criterion3() -> Line {
    let t = Instant::now();
    let expected = [
        ("cycle:3", 0),
        ("cycle:4", 1),
        ("cycle:5", 5),
        ("cycle:6", 8),
        ("cycle:7", 14),
        ("bowtie", 4),
        ("db531", 10),
        ("prism", 15),
    ];
    let mut pass = true;
    let mut details = Vec::new();
    for (designator, want) in expected {
        let g = graph::parse_designator(designator).unwrap();
        let extra = usize::from(designator == "prism");
        let r = compute_maxcr_exact(&g, Budget::default(), extra);
        let verified = r
            .witness
            .as_ref()
            .is_some_and(|w| verify_drawing(w, &g).map(|x| x.count).ok() == r.maxcr);
        let ok = r.maxcr == Some(want) && verified;
        pass &= ok;
        let mut line = format!(
            "maxcr({designator}) = {:?}, expected {want}; witness verified: {verified}: {}",
            r.maxcr,
            mark(ok)
        );
        if designator == "prism" {
            let level = r.level(14).unwrap();
            let gap = level.realizable == 0 && level.unknown == 0;
            pass &= gap;
            line.push_str(&format!(
                "; 14-crossing level: {} prescriptions, {} realizable, {} undecided",
                level.prescriptions, level.realizable, level.unknown
            ));
        }
        details.push(line);
    }
    Line {
        id: 3,
        title: "realizability ground truths",
        pass,
        details,
        seconds: t.elapsed().as_secs_f64(),
    }
}

fn stage_steps(c: &Certificate, stage: u8) -> Vec<&Step> {
    c.steps.iter().filter(|s| s.stage == stage).collect()
}

fn count_of(step: &Step) -> u64 {
    step.outputs["count"].as_u64().unwrap()
}

fn elimination_step(c: &Certificate, stage: u8) -> Option<&Step> {
    stage_steps(c, stage).into_iter().find(|s| s.outputs.get("report_digest").is_some())
}

fn criterion4(c: &Certificate, seconds: f64) -> Line {
    let mut pass = true;
    let mut details = Vec::new();
    let rows = [
        ("k=9", stage_steps(c, 4).first().copied(), 0),
        ("k=10", elimination_step(c, 5), 74),
        ("k=11 with a bowtie holding 2", elimination_step(c, 8), 13),
    ];
    for (label, step, want) in rows {
        match step {
            Some(s) => {
                let got = count_of(s);
                pass &= got == want;
                details.push(format!("{label}: {got} candidates, expected {want}: {}", mark(got == want)));
            }
            None => {
                pass = false;
                details.push(format!("{label}: not reached"));
            }
        }
    }
    Line {
        id: 4,
        title: "enumeration counts on G-v (filters 1-3 plus C4/bowtie coverage)",
        pass,
        details,
        seconds,
    }
}

fn criterion5(c: &Certificate, seconds: f64) -> Line {
    let mut pass = true;
    let mut details = Vec::new();
    for (label, stage) in [("k=10", 5), ("k=11", 8)] {
        match elimination_step(c, stage) {
            Some(s) => {
                let survivors = s.outputs["survivors"].as_array().unwrap().len();
                let ok = survivors == 0 && s.status == Status::Pass;
                pass &= ok;
                details.push(format!(
                    "{label}: {} of {} eliminated ({} by the relaxed prover), subgraph sizes {}: {}",
                    s.outputs["eliminated"],
                    s.outputs["candidates"],
                    s.outputs["by_relaxed"],
                    s.outputs["subgraph_sizes"],
                    mark(ok)
                ));
            }
            None => {
                pass = false;
                details.push(format!("{label}: not reached"));
            }
        }
    }
    Line {
        id: 5,
        title: "elimination of every survivor",
        pass,
        details,
        seconds,
    }
}

fn criterion6(c: &Certificate) -> Line {
    let t = Instant::now();
    let first = counting_bound(&[44; 9]).unwrap();
    let second = counting_bound_split(&[(5, 44), (4, 43)]).unwrap();
    let mut pass = first == Ratio::new(396, 5) && second == Ratio::new(392, 5);
    let mut details = vec![
        format!("9 x 44 / 5 = {} ({first})", decimal(first)),
        format!("(5 x 44 + 4 x 43) / 5 = {} ({second})", decimal(second)),
    ];
    let upper = c.conclusion.as_ref().map(|con| con.upper_bound);
    pass &= upper == Some(78);
    details.push(format!("certificate upper bound: {upper:?}"));
    let bytes = certificate_bytes(c);
    let reloaded: Certificate = serde_json::from_slice(&bytes).unwrap();
    let check = check_certificate(&reloaded);
    pass &= check.ok && certificate_bytes(&reloaded) == bytes;
    details.push(format!(
        "re-check from {} serialized bytes: {} of {} checks pass",
        bytes.len(),
        check.checks.iter().filter(|c| c.ok).count(),
        check.checks.len()
    ));
    Line {
        id: 6,
        title: "bound assembly and certificate re-check",
        pass,
        details,
        seconds: t.elapsed().as_secs_f64(),
    }
}

fn criterion7(c: &Certificate) -> Line {
    let t = Instant::now();
    let mut pass = true;
    let mut details = Vec::new();
    for (name, target) in [("prism", 15), ("db531", 10)] {
        let g = build_named(name, &[]).unwrap();
        let started = Instant::now();
        let hit = (1..=10u64).find(|&seed| {
            let budget = MaximizeBudget {
                target: Some(target),
                ..MaximizeBudget::default()
            };
            let r = maximize_crossings(&g, &budget, seed);
            let valid = check_witness(&r.drawing, &g).ok() == Some(r.crossings);
            r.crossings == target && valid
        });
        let secs = started.elapsed().as_secs_f64();
        let ok = hit.is_some() && secs < 10.0;
        pass &= ok;
        details.push(format!("{name}: {target} crossings reached with seed {hit:?} in {secs:.2} s: {}", mark(ok)));
    }
    for (name, host, target) in [("g_minus_v", "c3xc3-v0", 44), ("g", "c3xc3", 78)] {
        match c.witness(name) {
            Some(w) => {
                let g = graph::parse_designator(host).unwrap();
                let valid = check_witness(&w.drawing, &g).ok() == Some(w.crossings);
                let ok = valid && w.crossings == target;
                pass &= ok;
                let mut line = format!(
                    "{host}: witness with {} crossings (target {target}), verified with complementarity: {valid}: {}",
                    w.crossings,
                    mark(ok)
                );
                if host == "c3xc3" {
                    let counts = deletion_counts(&w.drawing).unwrap();
                    pass &= counts.uniform;
                    line.push_str(&format!(
                        "; vertex deletions keep {:?}, each crossing in exactly 5: {}",
                        counts.per_vertex, counts.uniform
                    ));
                }
                details.push(line);
            }
            None => {
                pass = false;
                details.push(format!("{host}: no witness in certificate"));
            }
        }
    }
    let every = c
        .witnesses
        .iter()
        .all(|w| check_witness(&w.drawing, &graph::parse_designator(&w.host).unwrap()).is_ok());
    pass &= every;
    details.push(format!("all {} emitted drawings verify: {every}", c.witnesses.len()));
    if let Some(con) = &c.conclusion {
        details.push(format!("conclusion: {}", con.statement));
    }
    Line {
        id: 7,
        title: "lower-bound witnesses",
        pass,
        details,
        seconds: t.elapsed().as_secs_f64(),
    }
}

fn criterion8() -> Line {
    let t = Instant::now();
    let instances = common::realizable_instances(200);
    let mut reproduced = 0;
    for p in &instances {
        let ok = extract_drawing(p, Budget::default())
            .and_then(|d| verify_drawing(&d, p.host()))
            .is_ok_and(|r| r.pairs == p.crossing_pairs());
        reproduced += usize::from(ok);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut both, mut unsound) = (0, 0);
    let random = (0..200).map(|_| {
        let g = common::random_graph(&mut rng);
        let index = PairIndex::new(&g);
        let bits: PairSet = (0..index.len()).filter(|_| rng.gen_bool(0.3)).collect();
        let m = MissedPairSet::from_bits(&index, bits).unwrap();
        Prescription::from_missed(&g, &index, &m).unwrap()
    });
    for p in instances.iter().cloned().chain(random.collect::<Vec<_>>()) {
        let (relaxed, _) = prove_unrealizable_relaxed(&p, Budget::nodes(100_000)).unwrap();
        let (exact, _) = decide_exact(&p, Budget::nodes(2_000_000));
        if matches!(relaxed, RelaxedVerdict::BudgetExhausted) || matches!(exact, ExactVerdict::BudgetExhausted) {
            continue;
        }
        both += 1;
        if relaxed.is_unrealizable() && !exact.is_unrealizable() {
            unsound += 1;
        }
    }
    Line {
        id: 8,
        title: "round-trip and relaxed-vs-exact soundness",
        pass: reproduced == 200 && unsound == 0,
        details: vec![
            format!("{reproduced}/200 realizable prescriptions reproduced exactly by extract then verify"),
            format!("{both} instances decided by both engines, {unsound} soundness violations"),
        ],
        seconds: t.elapsed().as_secs_f64(),
    }
}

fn main() {
    // Cargo passes harness flags such as `--list`; only a plain run executes.
    if std::env::args().any(|a| a == "--list") {
        return;
    }
    let mut lines = vec![criterion1(), criterion2(), criterion3()];
    let started = Instant::now();
    let run = run_theorem(&TheoremConfig::default()).unwrap();
    let seconds = started.elapsed().as_secs_f64();
    let c = &run.certificate;
    lines.push(criterion4(c, seconds));
    lines.push(criterion5(c, seconds));
    lines.push(criterion6(c));
    lines.push(criterion7(c));
    lines.push(criterion8());
    println!();
    print!("{}", proof_log(c));
    println!();
    report(&lines);
}
