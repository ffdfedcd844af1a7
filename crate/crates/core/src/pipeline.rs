//! The proof that the maximum crossing number of `C3 x C3` is 78, run end to
//! end and recorded as a certificate that can be re-checked without repeating
//! any search.
//!
//! The argument: every drawing of `G - v` misses at least 11 pairs, so
//! `maxcr(G - v) <= 44`. Each crossing of a drawing of `G` survives in exactly
//! five of the nine vertex deletions, which gives `maxcr(G) <= 79`. One more
//! missed pair is then forced either between two disjoint triangles (a cited
//! result) or on a bowtie, and the bowtie case is ruled out by a second
//! exhaustive search, leaving `maxcr(G) <= 78`. A drawing with 78 crossings
//! closes the gap.

use crate::error::{Error, Result};
use crate::filters::{FilterContext, FilterSuite};
use crate::graph::{are_isomorphic, build_named, delete_vertex, parse_designator, thrackle_number, Graph, PairIndex};
use crate::maximizer::{maximize_crossings, MaximizeBudget};
use crate::prescription::{MissedPairSet, Prescription};
use crate::realize::{
    render_svg, verify_drawing, Budget, CombinatorialDrawing, EliminationMethod, EliminationPolicy, SearchStats,
    SubgraphCatalog,
};
use crate::search::{compute_maxcr_exact, enumerate_with_context, eliminate_all, CandidateQuery, Constraint, EliminationReport};
use crate::subgraph::find_subgraphs;
use crate::EdgeSet;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use std::path::Path;

pub const SCHEMA: &str = "maxcr-certificate";
pub const VERSION: u32 = 1;

/// Graphs whose maximum crossing number is known, with that number.
pub const GROUND_TRUTH: [(&str, usize); 6] = [
    ("cycle:3", 0),
    ("cycle:4", 1),
    ("cycle:5", 5),
    ("cycle:6", 9),
    ("cycle:7", 14),
    ("bowtie", 4),
];

/// Lower bound on `maxcr(C3 x C3)` from Piazza, Ringeisen and Stueckle (1994).
pub const CITED_LOWER_BOUND: usize = 68;

const PIAZZA: &str = "B. Piazza, R. Ringeisen, S. Stueckle, Subthrackleable graphs and four cycles, Discrete Math. 127 (1994)";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TheoremConfig {
    /// Per-decision budget for the exact engine on the small validation graphs.
    pub decision_budget: Budget,
    pub enumeration_budget: Budget,
    /// Largest connected subgraph tried when eliminating a candidate.
    pub catalog_max_edges: usize,
    pub elimination: EliminationPolicy,
    pub maximizer: MaximizeBudget,
    pub seed: u64,
    /// Extra missed-pair sets appended to the ten-pair candidates.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub inject_k10: Vec<Vec<[usize; 2]>>,
}

impl Default for TheoremConfig {
    fn default() -> TheoremConfig {
        TheoremConfig {
            decision_budget: Budget::default(),
            enumeration_budget: Budget::UNLIMITED,
            catalog_max_edges: 10,
            elimination: EliminationPolicy::default(),
            maximizer: MaximizeBudget::default(),
            seed: 1,
            inject_k10: Vec::new(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Computation,
    Arithmetic,
    Axiom,
    Witness,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    Pass,
    Fail,
    /// A witness search ended below its target.
    Shortfall,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Step {
    pub stage: u8,
    pub claim: String,
    /// Which part of the argument the step supports.
    pub anchor: String,
    pub method: Method,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub citation: Option<String>,
    pub input: Value,
    pub input_digest: String,
    pub outputs: Value,
    pub summary: String,
    pub status: Status,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub name: String,
    pub host: String,
    pub crossings: usize,
    pub drawing: CombinatorialDrawing,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LowerBoundSource {
    Witness,
    Cited,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundArithmetic {
    pub caps: Vec<usize>,
    pub numerator: u64,
    pub denominator: u64,
    pub floor: u64,
}

impl BoundArithmetic {
    pub fn from_caps(caps: &[usize]) -> Result<BoundArithmetic> {
        let r = counting_bound(caps)?;
        Ok(BoundArithmetic {
            caps: caps.to_vec(),
            numerator: *r.numer(),
            denominator: *r.denom(),
            floor: r.floor().to_integer(),
        })
    }

    pub fn decimal(&self) -> String {
        decimal(Ratio::new(self.numerator, self.denominator))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Conclusion {
    pub statement: String,
    pub lower_bound: usize,
    pub lower_bound_source: LowerBoundSource,
    pub upper_bound: usize,
    pub bounds: Vec<BoundArithmetic>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub schema: String,
    pub version: u32,
    pub tool_version: String,
    pub config: TheoremConfig,
    pub config_digest: String,
    pub steps: Vec<Step>,
    pub witnesses: Vec<Witness>,
    /// Absent when some step failed.
    pub conclusion: Option<Conclusion>,
}

impl Certificate {
    pub fn failed_step(&self) -> Option<&Step> {
        self.steps.iter().find(|s| s.status == Status::Fail)
    }

    pub fn witness(&self, name: &str) -> Option<&Witness> {
        self.witnesses.iter().find(|w| w.name == name)
    }
}

/// Elimination reports produced along the way, for writing next to the certificate.
#[derive(Clone, Debug)]
pub struct TheoremRun {
    pub certificate: Certificate,
    pub reports: Vec<(String, EliminationReport)>,
}

/// `(sum of caps) / 5`: each crossing of a drawing of a 9-vertex graph
/// survives in exactly 5 of its 9 vertex deletions.
pub fn counting_bound(per_vertex_caps: &[usize]) -> Result<Ratio<u64>> {
    if per_vertex_caps.len() != 9 {
        return Err(Error::InvalidInput(format!(
            "expected 9 per-vertex caps, got {}",
            per_vertex_caps.len()
        )));
    }
    let sum: u64 = per_vertex_caps.iter().map(|&c| c as u64).sum();
    Ok(Ratio::new(sum, 5))
}

/// Caps given as `(how many vertices, cap)` groups.
pub fn counting_bound_split(groups: &[(usize, usize)]) -> Result<Ratio<u64>> {
    counting_bound(&expand_caps(groups))
}

fn expand_caps(groups: &[(usize, usize)]) -> Vec<usize> {
    groups.iter().flat_map(|&(n, cap)| std::iter::repeat_n(cap, n)).collect()
}

/// Exact decimal expansion when the denominator has only factors 2 and 5.
pub fn decimal(r: Ratio<u64>) -> String {
    let (mut num, den) = (*r.numer(), *r.denom());
    let mut out = format!("{}", num / den);
    num %= den;
    if num == 0 {
        return out;
    }
    out.push('.');
    for _ in 0..20 {
        num *= 10;
        out.push(char::from(b'0' + (num / den) as u8));
        num %= den;
        if num == 0 {
            return out;
        }
    }
    format!("{}/{}", r.numer(), r.denom())
}

pub fn digest(value: &impl Serialize) -> String {
    let bytes = serde_json::to_vec(value).expect("serializable");
    hex::encode(Sha256::digest(bytes))
}

/// Crossings kept by each of the nine vertex deletions of a drawing of a
/// 9-vertex graph, counted by deleting the vertex star from the plane map.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeletionCounts {
    pub crossings: usize,
    pub per_vertex: Vec<usize>,
    /// Every crossing survives in exactly `n - 4` deletions.
    pub uniform: bool,
}

pub fn deletion_counts(d: &CombinatorialDrawing) -> Result<DeletionCounts> {
    let map = d
        .to_map()
        .ok_or_else(|| Error::Violation("rotation system is inconsistent".into()))?;
    let n = d.graph.vertex_count();
    let pairs = map.crossing_pairs();
    let mut survives = vec![0usize; pairs.len()];
    let mut per_vertex = Vec::with_capacity(n);
    for v in 0..n {
        let mut m = map.clone();
        for e in d.graph.incident_edges(v).iter() {
            m.remove_edge(e);
        }
        let kept = m.crossing_pairs();
        for (i, p) in pairs.iter().enumerate() {
            if kept.binary_search(p).is_ok() {
                survives[i] += 1;
            }
        }
        per_vertex.push(kept.len());
    }
    Ok(DeletionCounts {
        crossings: pairs.len(),
        uniform: n >= 4 && survives.iter().all(|&s| s == n - 4),
        per_vertex,
    })
}

/// Verify `d` as a drawing of `host` and check that its crossings and missed
/// pairs add up to `Th(host)`. Returns the crossing count.
pub fn check_witness(d: &CombinatorialDrawing, host: &Graph) -> Result<usize> {
    let report = verify_drawing(d, host)?;
    let mut crossings = vec![EdgeSet::EMPTY; host.edge_count()];
    for &(a, b) in &report.pairs {
        crossings[a].insert(b);
        crossings[b].insert(a);
    }
    let p = Prescription::new(host.clone(), crossings)?;
    let missed = p.missed(&PairIndex::new(host));
    if missed.len() + p.total_crossings() != thrackle_number(host) {
        return Err(Error::Certificate(format!(
            "{} missed + {} crossings != Th = {}",
            missed.len(),
            p.total_crossings(),
            thrackle_number(host)
        )));
    }
    Ok(report.count)
}

struct Recorder {
    steps: Vec<Step>,
    witnesses: Vec<Witness>,
    reports: Vec<(String, EliminationReport)>,
}

impl Recorder {
    #[allow(clippy::too_many_arguments)]
    fn push(
        &mut self,
        stage: u8,
        claim: &str,
        anchor: &str,
        method: Method,
        input: Value,
        outputs: Value,
        summary: String,
        status: Status,
    ) -> Status {
        self.steps.push(Step {
            stage,
            claim: claim.to_string(),
            anchor: anchor.to_string(),
            method,
            citation: None,
            input_digest: digest(&input),
            input,
            outputs,
            summary,
            status,
        });
        status
    }

    fn cite(&mut self, citation: &str) {
        self.steps.last_mut().unwrap().citation = Some(citation.to_string());
    }
}

fn pass_if(ok: bool) -> Status {
    if ok {
        Status::Pass
    } else {
        Status::Fail
    }
}

/// Elimination report without timings, so its digest is reproducible.
fn report_digest(r: &EliminationReport) -> String {
    let mut r = r.clone();
    for e in r.entries.iter_mut().filter_map(|e| e.eliminated_by.as_mut()) {
        e.stats = SearchStats {
            nodes: e.stats.nodes,
            millis: 0,
        };
    }
    digest(&r)
}

fn report_outputs(r: &EliminationReport) -> Value {
    let relaxed = r
        .entries
        .iter()
        .filter(|e| e.eliminated_by.as_ref().is_some_and(|x| x.method == EliminationMethod::Relaxed))
        .count();
    json!({
        "candidates": r.candidates,
        "eliminated": r.eliminated,
        "survivors": r.survivors,
        "by_relaxed": relaxed,
        "by_exact": r.eliminated - relaxed,
        "subgraph_sizes": r.size_histogram(),
        "report_digest": report_digest(r),
    })
}

fn pair_list(list: &[[usize; 2]]) -> Vec<(usize, usize)> {
    list.iter().map(|&[a, b]| (a, b)).collect()
}

/// Run every step of the argument in order. The first failing step ends the
/// run and no conclusion is drawn.
pub fn run_theorem(config: &TheoremConfig) -> Result<TheoremRun> {
    let mut rec = Recorder {
        steps: Vec::new(),
        witnesses: Vec::new(),
        reports: Vec::new(),
    };
    let conclusion = prove(config, &mut rec)?;
    let certificate = Certificate {
        schema: SCHEMA.to_string(),
        version: VERSION,
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        config_digest: digest(config),
        config: config.clone(),
        steps: rec.steps,
        witnesses: rec.witnesses,
        conclusion,
    };
    Ok(TheoremRun {
        certificate,
        reports: rec.reports,
    })
}

macro_rules! require {
    ($status:expr) => {
        if $status == Status::Fail {
            return Ok(None);
        }
    };
}

fn prove(cfg: &TheoremConfig, rec: &mut Recorder) -> Result<Option<Conclusion>> {
    // 1. The exact engine reproduces known values.
    let mut rows = Vec::new();
    let mut ok = true;
    for (designator, expected) in GROUND_TRUTH {
        let g = parse_designator(designator)?;
        let r = compute_maxcr_exact(&g, cfg.decision_budget, 0);
        let verified = r
            .witness
            .as_ref()
            .is_some_and(|w| check_witness(w, &g).ok() == r.maxcr);
        ok &= r.maxcr == Some(expected) && verified;
        rows.push(json!({
            "graph": designator,
            "expected": expected,
            "maxcr": r.maxcr,
            "thrackle_number": r.thrackle_number,
            "witness_verified": verified,
        }));
    }
    let summary = rows
        .iter()
        .map(|r| format!("{}={}", r["graph"].as_str().unwrap(), r["maxcr"]))
        .collect::<Vec<_>>()
        .join(", ");
    let s = rec.push(
        1,
        "The exact realizability engine reproduces known maximum crossing numbers",
        "engine validation",
        Method::Computation,
        json!({ "graphs": GROUND_TRUTH, "budget": cfg.decision_budget }),
        json!({ "results": rows }),
        summary,
        pass_if(ok),
    );
    require!(s);

    // 2. Small building blocks.
    let prism = build_named("prism", &[])?;
    let r = compute_maxcr_exact(&prism, cfg.decision_budget, 1);
    let gap = r.level(14).is_some_and(|l| l.realizable == 0 && l.unknown == 0);
    let verified = r.witness.as_ref().is_some_and(|w| check_witness(w, &prism).ok() == Some(15));
    if let Some(w) = &r.witness {
        rec.witnesses.push(Witness {
            name: "prism".into(),
            host: "prism".into(),
            crossings: w.crossing_count(),
            drawing: with_coordinates(w),
        });
    }
    let s = rec.push(
        2,
        "maxcr(C3 x P1) = 15 and no drawing of C3 x P1 has exactly 14 crossings",
        "building blocks",
        Method::Computation,
        json!({ "graph": "prism", "budget": cfg.decision_budget, "extra_levels": 1 }),
        json!({ "maxcr": r.maxcr, "profile": r.profile, "witness_verified": verified }),
        format!("maxcr = {:?}, 14-crossing level realizable: {}", r.maxcr, !gap),
        pass_if(r.maxcr == Some(15) && gap && verified),
    );
    require!(s);
    let db = build_named("db531", &[])?;
    let r = compute_maxcr_exact(&db, cfg.decision_budget, 0);
    let verified = r.witness.as_ref().is_some_and(|w| check_witness(w, &db).ok() == Some(10));
    if let Some(w) = &r.witness {
        rec.witnesses.push(Witness {
            name: "db531".into(),
            host: "db531".into(),
            crossings: w.crossing_count(),
            drawing: with_coordinates(w),
        });
    }
    let s = rec.push(
        2,
        "maxcr(DB(5,3,-1)) = 10",
        "building blocks",
        Method::Computation,
        json!({ "graph": "db531", "budget": cfg.decision_budget }),
        json!({ "maxcr": r.maxcr, "thrackle_number": r.thrackle_number, "profile": r.profile, "witness_verified": verified }),
        format!("maxcr = {:?} (Th = {})", r.maxcr, r.thrackle_number),
        pass_if(r.maxcr == Some(10) && verified),
    );
    require!(s);

    // 3. Structure of G and G - v.
    let g = build_named("c3xc3", &[])?;
    let gv = delete_vertex(&g, 0)?.graph;
    let ctx = FilterContext::new(&gv);
    let (pools, disjoint) = ctx.coverage_pools();
    let transitive = (1..g.vertex_count()).all(|v| are_isomorphic(&gv, &delete_vertex(&g, v).unwrap().graph));
    let th_g = thrackle_number(&g);
    let th_gv = thrackle_number(&gv);
    let outputs = json!({
        "th_g": th_g,
        "th_g_minus_v": th_gv,
        "c4_copies": ctx.c4s.len(),
        "bowtie_copies": ctx.bowties.len(),
        "pools_disjoint": disjoint,
        "min_missed_pairs": pools.len(),
        "prism_copies": ctx.prisms.len(),
        "db531_copies": ctx.db531s.len(),
        "disjoint_cycle_pairs": ctx.parity.len(),
        "deletions_isomorphic": transitive,
    });
    let s = rec.push(
        3,
        "Th(G) = 99, Th(G-v) = 55, and G-v has 5 four-cycles and 4 bowties with pairwise disjoint pair pools",
        "structure of G-v",
        Method::Computation,
        json!({ "graph": "c3xc3", "deleted_vertex": 0 }),
        outputs,
        format!(
            "Th(G) = {th_g}, Th(G-v) = {th_gv}, {} C4 + {} bowties, disjoint: {disjoint}, all G-v isomorphic: {transitive}",
            ctx.c4s.len(),
            ctx.bowties.len()
        ),
        pass_if(th_g == 99 && th_gv == 55 && ctx.c4s.len() == 5 && ctx.bowties.len() == 4 && disjoint && transitive),
    );
    require!(s);

    // 4. Nine missed pairs are not enough.
    let query = |k: usize| {
        let mut q = CandidateQuery::new(gv.clone(), k, FilterSuite::WITH_COVERAGE);
        q.budget = cfg.enumeration_budget;
        q
    };
    let q9 = query(9);
    let e9 = enumerate_with_context(&ctx, &q9)?;
    let s = rec.push(
        4,
        "No set of 9 missed pairs of G-v passes the filters",
        "maxcr(G-v) <= 44",
        Method::Computation,
        serde_json::to_value(&q9)?,
        json!({
            "count": e9.candidates.len(),
            "reference_count": 0,
            "complete": e9.complete,
            "nodes": e9.nodes,
        }),
        format!("{} candidates, complete: {}", e9.candidates.len(), e9.complete),
        pass_if(e9.complete && e9.candidates.is_empty()),
    );
    require!(s);

    // 5. Every ten-pair candidate is eliminated.
    let catalog = SubgraphCatalog::standard(&gv, cfg.catalog_max_edges);
    let q10 = query(10);
    let e10 = enumerate_with_context(&ctx, &q10)?;
    let mut candidates = e10.candidates.clone();
    for list in &cfg.inject_k10 {
        candidates.push(MissedPairSet::from_edge_pairs(&ctx.index, &pair_list(list))?);
    }
    let report = eliminate_all(&gv, &candidates, &catalog, &cfg.elimination);
    let mut outputs = report_outputs(&report);
    outputs["count"] = json!(e10.candidates.len());
    outputs["reference_count"] = json!(74);
    outputs["injected"] = json!(cfg.inject_k10.len());
    outputs["complete"] = json!(e10.complete);
    let s = rec.push(
        5,
        "Every set of 10 missed pairs of G-v that passes the filters has a subgraph with no drawing",
        "maxcr(G-v) <= 44",
        Method::Computation,
        json!({ "query": q10, "catalog_max_edges": cfg.catalog_max_edges, "catalog_size": catalog.len(), "policy": cfg.elimination, "injected": cfg.inject_k10 }),
        outputs,
        format!(
            "{} candidates, {} eliminated, {} survivors",
            report.candidates,
            report.eliminated,
            report.survivors.len()
        ),
        pass_if(e10.complete && report.all_eliminated),
    );
    rec.reports.push(("k10".into(), report));
    require!(s);

    // 6. maxcr(G - v) = 44.
    rec.push(
        6,
        "maxcr(G-v) <= 44",
        "maxcr(G-v) <= 44",
        Method::Arithmetic,
        json!({ "th_g_minus_v": th_gv, "min_missed_pairs": 11 }),
        json!({ "upper_bound": th_gv - 11 }),
        format!("at least 11 missed pairs, so at most {th_gv} - 11 = {} crossings", th_gv - 11),
        Status::Pass,
    );
    let s = witness_step(rec, cfg, 6, &gv, "c3xc3-v0", "g_minus_v", 44, "maxcr(G-v) = 44")?;
    require!(s);

    // 7. First counting bound.
    let first = BoundArithmetic::from_caps(&[44; 9])?;
    rec.push(
        7,
        "maxcr(G) <= floor(9 * 44 / 5) = 79",
        "counting bound",
        Method::Arithmetic,
        json!({ "caps": first.caps }),
        json!({ "numerator": first.numerator, "denominator": first.denominator, "floor": first.floor }),
        format!("(9 x 44) / 5 = {} so maxcr(G) <= {}", first.decimal(), first.floor),
        Status::Pass,
    );

    // 8. The extra missed pair: two cases.
    rec.push(
        8,
        "If the additional missed pair joins two vertex-disjoint triangles, a second additional missed pair exists and maxcr(G) <= 78",
        "disjoint-triangle case",
        Method::Axiom,
        json!({ "case": "disjoint triangles" }),
        json!({ "upper_bound": 78 }),
        "cited".to_string(),
        Status::Pass,
    );
    rec.cite(PIAZZA);
    let bowtie = build_named("bowtie", &[])?;
    let copies = find_subgraphs(&g, &bowtie);
    let containment: Vec<usize> = copies
        .iter()
        .map(|c| g.vertex_count() - c.vertex_mask().count_ones() as usize)
        .collect();
    let four_each = !containment.is_empty() && containment.iter().all(|&c| c == 4);
    let s = rec.push(
        8,
        "Each bowtie of G lies in exactly 4 of the 9 vertex deletions",
        "bowtie case",
        Method::Computation,
        json!({ "graph": "c3xc3" }),
        json!({ "bowtie_copies": copies.len(), "all_in_four": four_each }),
        format!("{} bowties, each in 4 deletions: {four_each}", copies.len()),
        pass_if(four_each),
    );
    require!(s);
    let q11 = query(11).with_constraint(Constraint::BowtieAtLeast { min: 2 });
    let e11 = enumerate_with_context(&ctx, &q11)?;
    let report = eliminate_all(&gv, &e11.candidates, &catalog, &cfg.elimination);
    let mut outputs = report_outputs(&report);
    outputs["count"] = json!(e11.candidates.len());
    outputs["reference_count"] = json!(13);
    outputs["complete"] = json!(e11.complete);
    let s = rec.push(
        8,
        "Every set of 11 missed pairs of G-v with 2 on one bowtie that passes the filters has a subgraph with no drawing",
        "bowtie case",
        Method::Computation,
        json!({ "query": q11, "catalog_max_edges": cfg.catalog_max_edges, "catalog_size": catalog.len(), "policy": cfg.elimination }),
        outputs,
        format!(
            "{} candidates, {} eliminated, {} survivors",
            report.candidates,
            report.eliminated,
            report.survivors.len()
        ),
        pass_if(e11.complete && report.all_eliminated),
    );
    rec.reports.push(("k11".into(), report));
    require!(s);
    let second = BoundArithmetic::from_caps(&expand_caps(&[(5, 44), (4, 43)]))?;
    rec.push(
        8,
        "In the bowtie case maxcr(G) <= floor((5 * 44 + 4 * 43) / 5) = 78",
        "bowtie case",
        Method::Arithmetic,
        json!({ "caps": second.caps }),
        json!({ "numerator": second.numerator, "denominator": second.denominator, "floor": second.floor }),
        format!("(5 x 44 + 4 x 43) / 5 = {} so maxcr(G) <= {}", second.decimal(), second.floor),
        Status::Pass,
    );

    // 9. Upper bound.
    let upper = second.floor.max(78) as usize;
    rec.push(
        9,
        "maxcr(C3 x C3) <= 78",
        "upper bound",
        Method::Arithmetic,
        json!({ "case_bounds": [78, second.floor], "earlier_bound": first.floor }),
        json!({ "upper_bound": upper }),
        format!("both cases give at most {upper}"),
        Status::Pass,
    );

    // 10. Lower bound.
    let s = witness_step(rec, cfg, 10, &g, "c3xc3", "g", 78, "maxcr(C3 x C3) >= 78")?;
    require!(s);
    let (lower, source) = if s == Status::Pass {
        (78, LowerBoundSource::Witness)
    } else {
        rec.push(
            10,
            "maxcr(C3 x C3) >= 68",
            "lower bound",
            Method::Axiom,
            json!({ "graph": "c3xc3" }),
            json!({ "lower_bound": CITED_LOWER_BOUND }),
            "cited".to_string(),
            Status::Pass,
        );
        rec.cite(PIAZZA);
        (CITED_LOWER_BOUND, LowerBoundSource::Cited)
    };
    let statement = if lower == upper {
        format!("maxcr(C3 x C3) = {upper}")
    } else {
        format!("{lower} <= maxcr(C3 x C3) <= {upper}")
    };
    Ok(Some(Conclusion {
        statement,
        lower_bound: lower,
        lower_bound_source: source,
        upper_bound: upper,
        bounds: vec![first, second],
    }))
}

fn with_coordinates(d: &CombinatorialDrawing) -> CombinatorialDrawing {
    let mut d = d.clone();
    if d.coordinates.is_none() {
        // A failed layout leaves the drawing purely combinatorial.
        let _ = crate::realize::attach_coordinates(&mut d);
    }
    d
}

#[allow(clippy::too_many_arguments)]
fn witness_step(
    rec: &mut Recorder,
    cfg: &TheoremConfig,
    stage: u8,
    host: &Graph,
    designator: &str,
    name: &str,
    target: usize,
    claim: &str,
) -> Result<Status> {
    let budget = MaximizeBudget {
        target: Some(target),
        ..cfg.maximizer
    };
    let r = maximize_crossings(host, &budget, cfg.seed);
    let verified = check_witness(&r.drawing, host).ok();
    let deletions = if host.vertex_count() == 9 {
        Some(deletion_counts(&r.drawing)?)
    } else {
        None
    };
    let status = match verified {
        Some(c) if c > target => Status::Fail,
        Some(c) if c == target && deletions.as_ref().is_none_or(|d| d.uniform) => Status::Pass,
        Some(c) if c == target => Status::Fail,
        Some(_) => Status::Shortfall,
        None => Status::Fail,
    };
    rec.witnesses.push(Witness {
        name: name.into(),
        host: designator.into(),
        crossings: r.crossings,
        drawing: r.drawing.clone(),
    });
    let mut outputs = json!({
        "target": target,
        "crossings": r.crossings,
        "verified": verified.is_some(),
        "seed": r.seed,
        "restart": r.restart,
        "restart_counts": r.restart_counts,
        "witness": name,
    });
    if let Some(d) = &deletions {
        outputs["deletion_counts"] = json!(d);
    }
    let summary = match status {
        Status::Shortfall => format!("best drawing has {} crossings, short of {target}", r.crossings),
        _ => format!("drawing with {} crossings, verified: {}", r.crossings, verified.is_some()),
    };
    Ok(rec.push(
        stage,
        claim,
        "lower bound",
        Method::Witness,
        json!({ "graph": designator, "budget": budget, "seed": cfg.seed }),
        outputs,
        summary,
        status,
    ))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub ok: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub ok: bool,
    pub checks: Vec<Check>,
}

/// Re-verify a certificate from its serialized content: digests, arithmetic,
/// thrackle numbers, count consistency, the conclusion, and every embedded
/// drawing. No search is repeated.
pub fn check_certificate(c: &Certificate) -> CheckReport {
    let mut checks = Vec::new();
    let mut add = |name: &str, ok: bool, detail: String| {
        checks.push(Check {
            name: name.to_string(),
            ok,
            detail,
        })
    };
    add(
        "schema",
        c.schema == SCHEMA && c.version == VERSION,
        format!("{} v{}", c.schema, c.version),
    );
    add("config digest", digest(&c.config) == c.config_digest, c.config_digest.clone());
    for (i, s) in c.steps.iter().enumerate() {
        let label = format!("step {} (stage {})", i + 1, s.stage);
        add(&format!("{label} input digest"), digest(&s.input) == s.input_digest, s.input_digest.clone());
        if s.method == Method::Axiom {
            add(&format!("{label} citation"), s.citation.is_some(), s.claim.clone());
        }
        if s.method == Method::Arithmetic {
            if let Some(caps) = s.input.get("caps") {
                let caps: Vec<usize> = serde_json::from_value(caps.clone()).unwrap_or_default();
                let ok = BoundArithmetic::from_caps(&caps).is_ok_and(|b| {
                    s.outputs["numerator"] == json!(b.numerator)
                        && s.outputs["denominator"] == json!(b.denominator)
                        && s.outputs["floor"] == json!(b.floor)
                });
                add(&format!("{label} counting bound"), ok, format!("{:?}", s.outputs));
            }
            if let (Some(th), Some(k)) = (s.input.get("th_g_minus_v"), s.input.get("min_missed_pairs")) {
                let ok = th.as_u64().zip(k.as_u64()).map(|(a, b)| a - b) == s.outputs["upper_bound"].as_u64();
                add(&format!("{label} subtraction"), ok, format!("{th} - {k}"));
            }
            if let Some(cases) = s.input.get("case_bounds") {
                let max = cases.as_array().and_then(|a| a.iter().map(|v| v.as_u64()).collect::<Option<Vec<_>>>());
                let ok = max.and_then(|m| m.into_iter().max()) == s.outputs["upper_bound"].as_u64();
                add(&format!("{label} case maximum"), ok, format!("{cases}"));
            }
        }
        if s.stage == 3 && s.method == Method::Computation {
            let ok = ["c3xc3", "c3xc3-v0"].iter().zip(["th_g", "th_g_minus_v"]).all(|(d, key)| {
                parse_designator(d).is_ok_and(|g| json!(thrackle_number(&g)) == s.outputs[key])
            });
            add(&format!("{label} thrackle numbers"), ok, format!("{} / {}", s.outputs["th_g"], s.outputs["th_g_minus_v"]));
        }
        if s.outputs.get("report_digest").is_some() {
            let count = |k: &str| s.outputs[k].as_u64().unwrap_or(0);
            let survivors = s.outputs["survivors"].as_array().map_or(0, |a| a.len() as u64);
            let ok = count("count") + count("injected") == count("candidates")
                && count("eliminated") + survivors == count("candidates")
                && count("by_relaxed") + count("by_exact") == count("eliminated")
                && (s.status != Status::Pass || survivors == 0);
            add(&format!("{label} counts"), ok, s.summary.clone());
        }
        if s.method == Method::Witness {
            let named = s.outputs["witness"].as_str().and_then(|n| c.witness(n));
            let ok = named.is_some_and(|w| {
                let claimed = s.outputs["crossings"].as_u64() == Some(w.crossings as u64);
                let target = s.outputs["target"].as_u64().unwrap_or(0) as usize;
                let status = if w.crossings >= target { Status::Pass } else { Status::Shortfall };
                claimed && status == s.status
            });
            add(&format!("{label} witness status"), ok, s.summary.clone());
        }
    }
    for w in &c.witnesses {
        let result = parse_designator(&w.host).and_then(|g| {
            let count = check_witness(&w.drawing, &g)?;
            let uniform = g.vertex_count() != 9 || deletion_counts(&w.drawing)?.uniform;
            Ok(count == w.crossings && uniform)
        });
        add(
            &format!("witness {}", w.name),
            result.as_ref().is_ok_and(|&ok| ok),
            match result {
                Ok(_) => format!("{} crossings on {}", w.crossings, w.host),
                Err(e) => e.to_string(),
            },
        );
    }
    let failed = c.failed_step().is_some();
    match &c.conclusion {
        None => add("conclusion", failed, "no conclusion; a step failed".into()),
        Some(con) => {
            let bounds_ok = con
                .bounds
                .iter()
                .all(|b| BoundArithmetic::from_caps(&b.caps).is_ok_and(|x| &x == b));
            let upper_ok = con.bounds.last().is_some_and(|b| b.floor as usize == con.upper_bound);
            let lower_ok = match con.lower_bound_source {
                LowerBoundSource::Witness => c
                    .witness("g")
                    .is_some_and(|w| w.crossings == con.lower_bound && w.host == "c3xc3"),
                LowerBoundSource::Cited => con.lower_bound == CITED_LOWER_BOUND,
            };
            add(
                "conclusion",
                !failed && bounds_ok && upper_ok && lower_ok,
                con.statement.clone(),
            );
        }
    }
    CheckReport {
        ok: checks.iter().all(|c| c.ok),
        checks,
    }
}

pub fn certificate_bytes(c: &Certificate) -> Vec<u8> {
    let mut out = serde_json::to_vec_pretty(c).expect("serializable");
    out.push(b'\n');
    out
}

fn write(path: &Path, bytes: &[u8]) -> Result<()> {
    std::fs::write(path, bytes).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn emit_certificate(c: &Certificate, path: &Path) -> Result<()> {
    write(path, &certificate_bytes(c))
}

pub fn load_certificate(path: &Path) -> Result<Certificate> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(serde_json::from_str(&text)?)
}

pub fn emit_svg(d: &CombinatorialDrawing, path: &Path) -> Result<()> {
    write(path, render_svg(d)?.as_bytes())
}

/// Plain-text account of the run, step by step.
pub fn proof_log(c: &Certificate) -> String {
    let mut out = String::new();
    out.push_str(&format!("maxcr certificate v{} (tool {})\n", c.version, c.tool_version));
    out.push_str(&format!("config digest {}\n\n", c.config_digest));
    let mut stage = 0;
    for s in &c.steps {
        if s.stage != stage {
            stage = s.stage;
            out.push_str(&format!("[{stage}] {}\n", s.anchor));
        }
        let status = match s.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Shortfall => "SHORTFALL",
        };
        out.push_str(&format!("  {status:<9} {}\n", s.claim));
        out.push_str(&format!("            {}\n", s.summary));
        if let Some(cite) = &s.citation {
            out.push_str(&format!("            axiom: {cite}\n"));
        }
        if let Some(r) = s.outputs.get("reference_count") {
            if s.outputs["count"] != *r {
                out.push_str(&format!(
                    "            note: {} candidates here against a reference count of {r}; the larger set was eliminated\n",
                    s.outputs["count"]
                ));
            }
        }
    }
    out.push('\n');
    match &c.conclusion {
        Some(con) => {
            for b in &con.bounds {
                out.push_str(&format!("bound: {:?} / 5 = {} -> {}\n", b.caps, b.decimal(), b.floor));
            }
            let source = match con.lower_bound_source {
                LowerBoundSource::Witness => "verified drawing",
                LowerBoundSource::Cited => "cited",
            };
            out.push_str(&format!("conclusion: {} (lower bound from {source})\n", con.statement));
        }
        None => {
            let at = c.failed_step().map_or(0, |s| s.stage);
            out.push_str(&format!("no conclusion: failed at stage {at}\n"));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bounds() {
        assert_eq!(counting_bound(&[44; 9]).unwrap(), Ratio::new(396, 5));
        assert_eq!(decimal(counting_bound(&[44; 9]).unwrap()), "79.2");
        assert_eq!(decimal(counting_bound_split(&[(5, 44), (4, 43)]).unwrap()), "78.4");
        assert_eq!(counting_bound(&[0; 9]).unwrap(), Ratio::from_integer(0));
        assert!(counting_bound(&[44; 8]).is_err());
        assert_eq!(decimal(Ratio::new(1, 3)), "1/3");
    }

    #[test]
    fn broken_engine_fails_first_stage() {
        let cfg = TheoremConfig {
            decision_budget: Budget::nodes(1),
            ..TheoremConfig::default()
        };
        let run = run_theorem(&cfg).unwrap();
        let c = &run.certificate;
        assert_eq!(c.failed_step().unwrap().stage, 1);
        assert!(c.conclusion.is_none());
        assert_eq!(c.steps.len(), 1);
        assert!(check_certificate(c).ok);
        assert!(proof_log(c).contains("failed at stage 1"));
    }

    #[test]
    fn witness_checks_complementarity() {
        let g = build_named("prism", &[]).unwrap();
        let r = maximize_crossings(&g, &MaximizeBudget::default(), 2);
        assert_eq!(check_witness(&r.drawing, &g).unwrap(), r.crossings);
    }
}
