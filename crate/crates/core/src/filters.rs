//! Necessary conditions a missed-pair set must meet before any drawing can realize it.
//!
//! * Property 1: for two vertex-disjoint cycles of lengths `n` and `m`, the
//!   number of missed pairs between them is congruent to `n * m` mod 2.
//! * Property 2: every `C3 x P1` copy carries 15 or at most 13 crossings.
//! * Property 3: every `DB(5,3,-1)` copy carries at most 10 crossings.
//! * Coverage: every `C4` and every bowtie contains a missed pair.

use crate::bits::{EdgeSet, PairSet};
use crate::graph::{build_named, thrackle_number, Graph, PairIndex};
use crate::prescription::{MissedPairSet, Prescription};
use crate::subgraph::{disjoint_cycle_pairs, find_subgraphs, Cycle, SubgraphEmbedding};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FilterKind {
    Property1,
    Property2,
    Property3,
    Coverage,
}

/// Which filters to run. Coverage runs first when selected since it is the cheapest.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FilterSuite {
    pub property1: bool,
    pub property2: bool,
    pub property3: bool,
    pub coverage: bool,
}

impl FilterSuite {
    pub const PROPERTIES: FilterSuite = FilterSuite {
        property1: true,
        property2: true,
        property3: true,
        coverage: false,
    };
    pub const WITH_COVERAGE: FilterSuite = FilterSuite {
        property1: true,
        property2: true,
        property3: true,
        coverage: true,
    };
    pub const NONE: FilterSuite = FilterSuite {
        property1: false,
        property2: false,
        property3: false,
        coverage: false,
    };

    pub fn kinds(&self) -> Vec<FilterKind> {
        let mut out = Vec::new();
        if self.coverage {
            out.push(FilterKind::Coverage);
        }
        if self.property1 {
            out.push(FilterKind::Property1);
        }
        if self.property2 {
            out.push(FilterKind::Property2);
        }
        if self.property3 {
            out.push(FilterKind::Property3);
        }
        out
    }
}

impl fmt::Display for FilterSuite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.property1 {
            parts.push("1");
        }
        if self.property2 {
            parts.push("2");
        }
        if self.property3 {
            parts.push("3");
        }
        if self.coverage {
            parts.push("coverage");
        }
        if parts.is_empty() {
            f.write_str("none")
        } else {
            f.write_str(&parts.join(","))
        }
    }
}

impl FromStr for FilterSuite {
    type Err = crate::Error;

    /// Accepts `props`, `full`, `none`, or a comma list such as `1,3,coverage`.
    fn from_str(s: &str) -> crate::Result<FilterSuite> {
        match s {
            "props" => return Ok(FilterSuite::PROPERTIES),
            "full" | "props+coverage" => return Ok(FilterSuite::WITH_COVERAGE),
            "none" => return Ok(FilterSuite::NONE),
            _ => {}
        }
        let mut suite = FilterSuite::NONE;
        for part in s.split(',') {
            match part.trim() {
                "1" => suite.property1 = true,
                "2" => suite.property2 = true,
                "3" => suite.property3 = true,
                "coverage" | "c" => suite.coverage = true,
                other => return Err(crate::Error::InvalidInput(format!("unknown filter {other:?}"))),
            }
        }
        Ok(suite)
    }
}

/// Disjoint cycle pair with the pair mask between them and the required parity.
#[derive(Clone, Debug)]
pub struct ParityConstraint {
    pub a: Cycle,
    pub b: Cycle,
    pub mask: PairSet,
    pub parity: usize,
}

/// A pattern copy together with the host pairs internal to it.
#[derive(Clone, Debug)]
pub struct PatternCopy {
    pub embedding: SubgraphEmbedding,
    pub internal: PairSet,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    CyclePair {
        a: Vec<usize>,
        b: Vec<usize>,
        missed_between: usize,
        required_parity: usize,
    },
    Restriction {
        pattern: String,
        edges: Vec<usize>,
        crossings: usize,
    },
    Uncovered {
        pattern: String,
        edges: Vec<usize>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FilterReport {
    pub passed: bool,
    pub failed: Option<FilterKind>,
    pub witness: Option<Witness>,
}

impl FilterReport {
    fn pass() -> FilterReport {
        FilterReport {
            passed: true,
            failed: None,
            witness: None,
        }
    }
}

pub fn prism_total_allowed(total: usize) -> bool {
    total <= 13 || total == 15
}

pub fn db531_total_allowed(total: usize) -> bool {
    total <= 10
}

/// Precomputed filter data for one host graph. Read-only after construction.
#[derive(Clone, Debug)]
pub struct FilterContext {
    pub graph: Graph,
    pub index: PairIndex,
    pub parity: Vec<ParityConstraint>,
    pub prisms: Vec<PatternCopy>,
    pub db531s: Vec<PatternCopy>,
    pub c4s: Vec<PatternCopy>,
    pub bowties: Vec<PatternCopy>,
    prism_th: usize,
    db531_th: usize,
}

impl FilterContext {
    pub fn new(graph: &Graph) -> FilterContext {
        let index = PairIndex::new(graph);
        let parity = disjoint_cycle_pairs(graph)
            .into_iter()
            .map(|(a, b)| ParityConstraint {
                mask: index.between(a.edges, b.edges),
                parity: (a.len() * b.len()) % 2,
                a,
                b,
            })
            .collect();
        let copies = |name: &str| {
            let pattern = build_named(name, if name == "cycle" { &[4] } else { &[] }).unwrap();
            find_subgraphs(graph, &pattern)
                .into_iter()
                .map(|embedding| PatternCopy {
                    internal: index.internal(embedding.edge_set),
                    embedding,
                })
                .collect::<Vec<_>>()
        };
        FilterContext {
            graph: graph.clone(),
            prisms: copies("prism"),
            db531s: copies("db531"),
            c4s: copies("cycle"),
            bowties: copies("bowtie"),
            parity,
            index,
            prism_th: thrackle_number(&build_named("prism", &[]).unwrap()),
            db531_th: thrackle_number(&build_named("db531", &[]).unwrap()),
        }
    }

    pub fn missed_from_prescription(&self, p: &Prescription) -> MissedPairSet {
        p.missed(&self.index)
    }

    pub fn check_property1(&self, missed: &MissedPairSet) -> FilterReport {
        for c in &self.parity {
            let between = missed.bits().intersection_len(&c.mask);
            if between % 2 != c.parity {
                return FilterReport {
                    passed: false,
                    failed: Some(FilterKind::Property1),
                    witness: Some(Witness::CyclePair {
                        a: c.a.edges.to_vec(),
                        b: c.b.edges.to_vec(),
                        missed_between: between,
                        required_parity: c.parity,
                    }),
                };
            }
        }
        FilterReport::pass()
    }

    pub fn check_property2(&self, missed: &MissedPairSet) -> FilterReport {
        self.check_totals(missed, &self.prisms, self.prism_th, FilterKind::Property2, prism_total_allowed)
    }

    pub fn check_property3(&self, missed: &MissedPairSet) -> FilterReport {
        self.check_totals(missed, &self.db531s, self.db531_th, FilterKind::Property3, db531_total_allowed)
    }

    fn check_totals(
        &self,
        missed: &MissedPairSet,
        copies: &[PatternCopy],
        th: usize,
        kind: FilterKind,
        allowed: fn(usize) -> bool,
    ) -> FilterReport {
        for copy in copies {
            let total = th - missed.bits().intersection_len(&copy.internal);
            if !allowed(total) {
                return FilterReport {
                    passed: false,
                    failed: Some(kind),
                    witness: Some(Witness::Restriction {
                        pattern: copy.embedding.pattern_name.clone(),
                        edges: copy.embedding.edge_set.to_vec(),
                        crossings: total,
                    }),
                };
            }
        }
        FilterReport::pass()
    }

    pub fn check_structure_coverage(&self, missed: &MissedPairSet) -> FilterReport {
        for copy in self.c4s.iter().chain(&self.bowties) {
            if !missed.bits().intersects(&copy.internal) {
                return FilterReport {
                    passed: false,
                    failed: Some(FilterKind::Coverage),
                    witness: Some(Witness::Uncovered {
                        pattern: copy.embedding.pattern_name.clone(),
                        edges: copy.embedding.edge_set.to_vec(),
                    }),
                };
            }
        }
        FilterReport::pass()
    }

    pub fn check(&self, kind: FilterKind, missed: &MissedPairSet) -> FilterReport {
        match kind {
            FilterKind::Property1 => self.check_property1(missed),
            FilterKind::Property2 => self.check_property2(missed),
            FilterKind::Property3 => self.check_property3(missed),
            FilterKind::Coverage => self.check_structure_coverage(missed),
        }
    }

    /// Run the selected filters, stopping at the first failure.
    pub fn run_filters(&self, missed: &MissedPairSet, suite: FilterSuite) -> FilterReport {
        for kind in suite.kinds() {
            let report = self.check(kind, missed);
            if !report.passed {
                return report;
            }
        }
        FilterReport::pass()
    }

    /// Fast boolean form of [`run_filters`](Self::run_filters).
    pub fn passes(&self, missed: &PairSet, suite: FilterSuite) -> bool {
        if suite.coverage
            && !self
                .c4s
                .iter()
                .chain(&self.bowties)
                .all(|c| missed.intersects(&c.internal))
        {
            return false;
        }
        if suite.property1 && !self.parity.iter().all(|c| missed.intersection_len(&c.mask) % 2 == c.parity) {
            return false;
        }
        if suite.property2
            && !self
                .prisms
                .iter()
                .all(|c| prism_total_allowed(self.prism_th - missed.intersection_len(&c.internal)))
        {
            return false;
        }
        if suite.property3
            && !self
                .db531s
                .iter()
                .all(|c| db531_total_allowed(self.db531_th - missed.intersection_len(&c.internal)))
        {
            return false;
        }
        true
    }

    /// Coverage pools (C4 copies first, then bowties) and whether they are pairwise disjoint.
    pub fn coverage_pools(&self) -> (Vec<PairSet>, bool) {
        let pools: Vec<PairSet> = self.c4s.iter().chain(&self.bowties).map(|c| c.internal).collect();
        let disjoint = pools
            .iter()
            .enumerate()
            .all(|(i, a)| pools[i + 1..].iter().all(|b| !a.intersects(b)));
        (pools, disjoint)
    }

    /// Copies of `bowtie` as edge sets, for structural query constraints.
    pub fn bowtie_edges(&self) -> Vec<EdgeSet> {
        self.bowties.iter().map(|c| c.embedding.edge_set).collect()
    }
}

/// Property 2 evaluated through explicit restriction of `p` to each `C3 x P1` copy.
pub fn check_property2_by_restriction(graph: &Graph, p: &Prescription) -> FilterReport {
    restriction_check(graph, p, "prism", FilterKind::Property2, prism_total_allowed)
}

/// Property 3 evaluated through explicit restriction of `p` to each `DB(5,3,-1)` copy.
pub fn check_property3_by_restriction(graph: &Graph, p: &Prescription) -> FilterReport {
    restriction_check(graph, p, "db531", FilterKind::Property3, db531_total_allowed)
}

fn restriction_check(
    graph: &Graph,
    p: &Prescription,
    name: &str,
    kind: FilterKind,
    allowed: fn(usize) -> bool,
) -> FilterReport {
    let pattern = build_named(name, &[]).unwrap();
    for emb in find_subgraphs(graph, &pattern) {
        let total = p.restrict(&pattern, &emb).expect("embedding from host").total_crossings();
        if !allowed(total) {
            return FilterReport {
                passed: false,
                failed: Some(kind),
                witness: Some(Witness::Restriction {
                    pattern: emb.pattern_name,
                    edges: emb.edge_set.to_vec(),
                    crossings: total,
                }),
            };
        }
    }
    FilterReport::pass()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::delete_vertex;

    fn gv() -> Graph {
        delete_vertex(&build_named("c3xc3", &[]).unwrap(), 0).unwrap().graph
    }

    fn missed_edges(ctx: &FilterContext, pairs: &[(usize, usize)]) -> MissedPairSet {
        MissedPairSet::from_edge_pairs(&ctx.index, pairs).unwrap()
    }

    #[test]
    fn parity_on_two_triangles() {
        let g = build_named("prism", &[]).unwrap();
        let ctx = FilterContext::new(&g);
        let tri_pair = ctx
            .parity
            .iter()
            .find(|c| c.a.len() == 3 && c.b.len() == 3)
            .expect("prism has two disjoint triangles");
        assert!(!ctx.check_property1(&MissedPairSet::empty()).passed);
        let one = tri_pair.mask.iter().next().unwrap();
        let m = MissedPairSet::empty().with(one);
        // the prism has exactly one disjoint cycle pair
        assert_eq!(ctx.parity.len(), 1);
        assert!(ctx.check_property1(&m).passed);
    }

    #[test]
    fn empty_set_on_gv_fails_property1_and_coverage() {
        let ctx = FilterContext::new(&gv());
        let r = ctx.check_property1(&MissedPairSet::empty());
        assert_eq!(r.failed, Some(FilterKind::Property1));
        assert!(matches!(r.witness, Some(Witness::CyclePair { .. })));
        let r = ctx.run_filters(&MissedPairSet::empty(), FilterSuite::WITH_COVERAGE);
        assert_eq!(r.failed, Some(FilterKind::Coverage));
    }

    #[test]
    fn prism_totals() {
        let g = build_named("prism", &[]).unwrap();
        let ctx = FilterContext::new(&g);
        let with = |k: usize| MissedPairSet::from_bits(&ctx.index, (0..k).collect()).unwrap();
        assert!(!ctx.check_property2(&with(0)).passed);
        assert!(ctx.check_property2(&with(3)).passed);
        let r = ctx.check_property2(&with(4));
        assert_eq!(
            r.witness,
            Some(Witness::Restriction {
                pattern: "C3xP1".into(),
                edges: (0..9).collect(),
                crossings: 14
            })
        );
        assert!(ctx.check_property2(&with(5)).passed);
    }

    #[test]
    fn db531_totals() {
        let g = build_named("db531", &[]).unwrap();
        let ctx = FilterContext::new(&g);
        assert!(!ctx.check_property3(&MissedPairSet::empty()).passed);
        assert!(ctx.check_property3(&MissedPairSet::empty().with(0)).passed);
        let empty = build_named("path", &[2]).unwrap();
        assert!(FilterContext::new(&empty).check_property3(&MissedPairSet::empty()).passed);
    }

    #[test]
    fn coverage_on_small_hosts() {
        let c4 = build_named("cycle", &[4]).unwrap();
        let ctx = FilterContext::new(&c4);
        assert!(!ctx.check_structure_coverage(&MissedPairSet::empty()).passed);
        let bt = build_named("bowtie", &[]).unwrap();
        let ctx = FilterContext::new(&bt);
        assert!(ctx.check_structure_coverage(&MissedPairSet::empty().with(2)).passed);
    }

    #[test]
    fn gv_pools_are_disjoint() {
        let ctx = FilterContext::new(&gv());
        assert_eq!((ctx.c4s.len(), ctx.bowties.len()), (5, 4));
        let (pools, disjoint) = ctx.coverage_pools();
        assert!(disjoint);
        let sizes: Vec<usize> = pools.iter().map(|p| p.len()).collect();
        assert_eq!(sizes, vec![2, 2, 2, 2, 2, 5, 5, 5, 5]);
    }

    #[test]
    fn restriction_and_mask_forms_agree() {
        let g = gv();
        let ctx = FilterContext::new(&g);
        for k in [0usize, 3, 9, 20] {
            let m = MissedPairSet::from_bits(&ctx.index, (0..55).step_by(55 / (k + 1)).take(k).collect()).unwrap();
            let p = Prescription::from_missed(&g, &ctx.index, &m).unwrap();
            assert_eq!(ctx.check_property2(&m), check_property2_by_restriction(&g, &p));
            assert_eq!(ctx.check_property3(&m), check_property3_by_restriction(&g, &p));
        }
    }

    #[test]
    fn suites_parse() {
        assert_eq!("props".parse::<FilterSuite>().unwrap(), FilterSuite::PROPERTIES);
        assert_eq!("1,2,3,coverage".parse::<FilterSuite>().unwrap(), FilterSuite::WITH_COVERAGE);
        assert!("4".parse::<FilterSuite>().is_err());
        assert_eq!(FilterSuite::WITH_COVERAGE.to_string(), "1,2,3,coverage");
    }

    #[test]
    fn report_is_deterministic() {
        let ctx = FilterContext::new(&gv());
        let m = missed_edges(&ctx, &[]);
        assert_eq!(
            ctx.run_filters(&m, FilterSuite::PROPERTIES),
            ctx.run_filters(&m, FilterSuite::PROPERTIES)
        );
    }
}
