use crate::bits::PairSet;
use crate::error::{Error, Result};
use crate::filters::{FilterContext, FilterSuite};
use crate::graph::{parse_designator, Graph};
use crate::prescription::MissedPairSet;
use crate::realize::Budget;
use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize};
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::time::{Duration, Instant};

/// Structural side conditions on a candidate set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Constraint {
    /// Some bowtie copy contains at least `min` of the missed pairs.
    BowtieAtLeast { min: usize },
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EnumerationMode {
    /// Lexicographic search with lookahead pruning on every selected filter.
    #[default]
    Allocation,
    /// Every k-subset, tested in full. For cross-validation on small inputs.
    BruteForce,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CandidateQuery {
    #[serde(deserialize_with = "host_from_json")]
    pub host: Graph,
    pub k: usize,
    #[serde(default)]
    pub constraints: Vec<Constraint>,
    #[serde(default = "default_suite", with = "suite_text")]
    pub suite: FilterSuite,
    #[serde(default)]
    pub mode: EnumerationMode,
    #[serde(default = "unlimited")]
    pub budget: Budget,
}

fn default_suite() -> FilterSuite {
    FilterSuite::WITH_COVERAGE
}

fn unlimited() -> Budget {
    Budget::UNLIMITED
}

#[derive(Deserialize)]
#[serde(untagged)]
enum HostRepr {
    Designator(String),
    Graph(Graph),
}

fn host_from_json<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Graph, D::Error> {
    match HostRepr::deserialize(d)? {
        HostRepr::Designator(s) => parse_designator(&s).map_err(serde::de::Error::custom),
        HostRepr::Graph(g) => Ok(g),
    }
}

mod suite_text {
    use crate::filters::FilterSuite;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(s: &FilterSuite, ser: S) -> Result<S::Ok, S::Error> {
        ser.serialize_str(&s.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<FilterSuite, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

impl CandidateQuery {
    pub fn new(host: Graph, k: usize, suite: FilterSuite) -> CandidateQuery {
        CandidateQuery {
            host,
            k,
            constraints: Vec::new(),
            suite,
            mode: EnumerationMode::Allocation,
            budget: Budget::UNLIMITED,
        }
    }

    pub fn with_constraint(mut self, c: Constraint) -> CandidateQuery {
        self.constraints.push(c);
        self
    }

    pub fn with_mode(mut self, mode: EnumerationMode) -> CandidateQuery {
        self.mode = mode;
        self
    }

    pub fn from_json(text: &str) -> Result<CandidateQuery> {
        Ok(serde_json::from_str(text)?)
    }
}

#[derive(Clone, Debug)]
pub struct Enumeration {
    /// Canonical order: lexicographic on the sorted pair-index lists.
    pub candidates: Vec<MissedPairSet>,
    pub nodes: u64,
    pub millis: u64,
    /// False when the budget ran out; the list is then partial.
    pub complete: bool,
    pub note: Option<String>,
}

impl Enumeration {
    fn infeasible(note: String) -> Enumeration {
        Enumeration {
            candidates: Vec::new(),
            nodes: 0,
            millis: 0,
            complete: true,
            note: Some(note),
        }
    }
}

/// Sort key giving the canonical candidate order.
pub fn canonical_key(m: &MissedPairSet) -> Vec<usize> {
    m.bits().to_vec()
}

pub fn enumerate_candidates(q: &CandidateQuery) -> Result<Enumeration> {
    let ctx = FilterContext::new(&q.host);
    enumerate_with_context(&ctx, q)
}

/// As [`enumerate_candidates`], reusing a prebuilt filter context for `q.host`.
pub fn enumerate_with_context(ctx: &FilterContext, q: &CandidateQuery) -> Result<Enumeration> {
    if ctx.graph.edges() != q.host.edges() {
        return Err(Error::InvalidInput("filter context built for another host".into()));
    }
    let n = ctx.index.len();
    if q.k > n {
        return Ok(Enumeration::infeasible(format!("k = {} exceeds the {n} non-incident pairs", q.k)));
    }
    let n_words = n.div_ceil(64).max(1);
    if n_words == 1 {
        run::<1>(ctx, q)
    } else if n_words == 2 {
        run::<2>(ctx, q)
    } else {
        run::<{ crate::bits::PAIR_WORDS }>(ctx, q)
    }
}

fn run<const W: usize>(ctx: &FilterContext, q: &CandidateQuery) -> Result<Enumeration> {
    let n = ctx.index.len();
    let plan = Plan::<W>::new(ctx, q);
    if let Some(note) = plan.infeasibility(q.k) {
        return Ok(Enumeration::infeasible(note));
    }
    let started = Instant::now();
    let meter = SharedMeter::new(q.budget);
    let candidates: Vec<MissedPairSet> = if q.k == 0 {
        if plan.accept(&[0; W]) {
            vec![MissedPairSet::empty()]
        } else {
            Vec::new()
        }
    } else {
        // Split on the first two picks; blocks are merged in order.
        let mut prefixes = Vec::new();
        for a in 0..=n - q.k {
            if q.k == 1 {
                prefixes.push(vec![a]);
            } else {
                for b in a + 1..=n - q.k + 1 {
                    prefixes.push(vec![a, b]);
                }
            }
        }
        let blocks: Vec<Vec<[u64; W]>> = prefixes
            .par_iter()
            .map(|prefix| {
                let mut out = Vec::new();
                let mut chosen = [0u64; W];
                let mut ok = true;
                for (depth, &i) in prefix.iter().enumerate() {
                    insert(&mut chosen, i);
                    if !plan.feasible(&chosen, i + 1, q.k - depth - 1) {
                        ok = false;
                        break;
                    }
                }
                if ok {
                    let last = *prefix.last().unwrap();
                    plan.dfs(&meter, &mut chosen, last + 1, q.k - prefix.len(), &mut out);
                }
                out
            })
            .collect();
        blocks
            .into_iter()
            .flatten()
            .map(|bits| MissedPairSet::from_bits(&ctx.index, widen(&bits)).expect("indices in range"))
            .collect()
    };
    Ok(Enumeration {
        candidates,
        nodes: meter.nodes.load(Ordering::Relaxed),
        millis: started.elapsed().as_millis() as u64,
        complete: !meter.exhausted.load(Ordering::Relaxed),
        note: None,
    })
}

struct SharedMeter {
    nodes: AtomicU64,
    exhausted: AtomicBool,
    max_nodes: u64,
    deadline: Option<Instant>,
}

impl SharedMeter {
    fn new(b: Budget) -> SharedMeter {
        SharedMeter {
            nodes: AtomicU64::new(0),
            exhausted: AtomicBool::new(false),
            max_nodes: b.max_nodes,
            deadline: b
                .max_seconds
                .is_finite()
                .then(|| Instant::now() + Duration::from_secs_f64(b.max_seconds)),
        }
    }

    #[inline]
    fn tick(&self) -> bool {
        if self.exhausted.load(Ordering::Relaxed) {
            return false;
        }
        let n = self.nodes.fetch_add(1, Ordering::Relaxed) + 1;
        let over = n > self.max_nodes || (n & 0xfff == 0 && self.deadline.is_some_and(|d| Instant::now() > d));
        if over {
            self.exhausted.store(true, Ordering::Relaxed);
        }
        !over
    }
}

type Mask<const W: usize> = [u64; W];

#[inline]
fn insert<const W: usize>(m: &mut Mask<W>, i: usize) {
    m[i >> 6] |= 1 << (i & 63);
}

#[inline]
fn remove<const W: usize>(m: &mut Mask<W>, i: usize) {
    m[i >> 6] &= !(1 << (i & 63));
}

#[inline]
fn common<const W: usize>(a: &Mask<W>, b: &Mask<W>) -> usize {
    let mut c = 0;
    for w in 0..W {
        c += (a[w] & b[w]).count_ones() as usize;
    }
    c
}

#[inline]
fn meets<const W: usize>(a: &Mask<W>, b: &Mask<W>) -> bool {
    (0..W).any(|w| a[w] & b[w] != 0)
}

fn narrow<const W: usize>(p: &PairSet) -> Mask<W> {
    let mut m = [0; W];
    m.copy_from_slice(&p.0[..W]);
    m
}

fn widen<const W: usize>(m: &Mask<W>) -> PairSet {
    let mut p = PairSet::EMPTY;
    p.0[..W].copy_from_slice(m);
    p
}

/// Requirement `|chosen & mask| >= need`.
struct LowerBound<const W: usize> {
    mask: Mask<W>,
    need: usize,
    /// Member of the pairwise disjoint coverage family, whose deficits add up.
    disjoint: bool,
}

struct Plan<'a, const W: usize> {
    ctx: &'a FilterContext,
    suite: FilterSuite,
    prune: bool,
    n: usize,
    /// `suffix[i]` holds the pair indices `>= i`.
    suffix: Vec<Mask<W>>,
    lower: Vec<LowerBound<W>>,
    parity: Vec<(Mask<W>, usize)>,
    bowtie_min: Option<usize>,
    bowties: Vec<Mask<W>>,
}

impl<'a, const W: usize> Plan<'a, W> {
    fn new(ctx: &'a FilterContext, q: &CandidateQuery) -> Plan<'a, W> {
        let n = ctx.index.len();
        let mut suffix = vec![[0; W]; n + 1];
        for i in (0..n).rev() {
            suffix[i] = suffix[i + 1];
            insert(&mut suffix[i], i);
        }
        let mut lower = Vec::new();
        if q.suite.coverage {
            let (pools, pools_disjoint) = ctx.coverage_pools();
            for mask in pools {
                lower.push(LowerBound {
                    mask: narrow(&mask),
                    need: 1,
                    disjoint: pools_disjoint,
                });
            }
        }
        if q.suite.property2 {
            // A prism copy needs at least 18 - 15 internal missed pairs.
            for c in &ctx.prisms {
                lower.push(LowerBound {
                    mask: narrow(&c.internal),
                    need: 3,
                    disjoint: false,
                });
            }
        }
        if q.suite.property3 {
            for c in &ctx.db531s {
                lower.push(LowerBound {
                    mask: narrow(&c.internal),
                    need: 1,
                    disjoint: false,
                });
            }
        }
        let parity = if q.suite.property1 {
            ctx.parity.iter().map(|c| (narrow(&c.mask), c.parity)).collect()
        } else {
            Vec::new()
        };
        let bowtie_min = q
            .constraints
            .iter()
            .map(|c| match *c {
                Constraint::BowtieAtLeast { min } => min,
            })
            .max();
        Plan {
            ctx,
            suite: q.suite,
            prune: q.mode == EnumerationMode::Allocation,
            n,
            suffix,
            lower,
            parity,
            bowtie_min,
            bowties: ctx.bowties.iter().map(|c| narrow(&c.internal)).collect(),
        }
    }

    fn infeasibility(&self, k: usize) -> Option<String> {
        let forced: usize = self.lower.iter().filter(|l| l.disjoint).map(|l| l.need).sum();
        if forced > k {
            return Some(format!(
                "coverage needs at least {forced} missed pairs from disjoint pools, k = {k}"
            ));
        }
        if let Some(min) = self.bowtie_min {
            if min > 0 {
                if self.bowties.is_empty() {
                    return Some("host has no bowtie".into());
                }
                if self.bowties.iter().all(|b| common(b, b) < min) {
                    return Some(format!("no bowtie has {min} internal pairs"));
                }
                if min > k {
                    return Some(format!("a bowtie with {min} missed pairs needs k >= {min}"));
                }
            }
        }
        None
    }

    /// Can `chosen` still be completed with `left` picks from indices `>= next`?
    #[inline]
    fn feasible(&self, chosen: &Mask<W>, next: usize, left: usize) -> bool {
        if !self.prune {
            return true;
        }
        let rest = &self.suffix[next.min(self.n)];
        let mut deficit_sum = 0;
        for lb in &self.lower {
            let have = common(chosen, &lb.mask);
            if have >= lb.need {
                continue;
            }
            let deficit = lb.need - have;
            if deficit > left || common(rest, &lb.mask) < deficit {
                return false;
            }
            if lb.disjoint {
                deficit_sum += deficit;
            }
        }
        if deficit_sum > left {
            return false;
        }
        for (mask, parity) in &self.parity {
            if !meets(rest, mask) && common(chosen, mask) % 2 != *parity {
                return false;
            }
        }
        if let Some(min) = self.bowtie_min {
            let reachable = self.bowties.iter().any(|b| {
                let have = common(chosen, b);
                have >= min || (min - have <= left && have + common(rest, b) >= min)
            });
            if !reachable {
                return false;
            }
        }
        true
    }

    fn accept(&self, chosen: &Mask<W>) -> bool {
        if !self.ctx.passes(&widen(chosen), self.suite) {
            return false;
        }
        match self.bowtie_min {
            Some(min) => self.bowties.iter().any(|b| common(chosen, b) >= min),
            None => true,
        }
    }

    fn dfs(&self, meter: &SharedMeter, chosen: &mut Mask<W>, start: usize, left: usize, out: &mut Vec<Mask<W>>) -> bool {
        if !meter.tick() {
            return false;
        }
        if left == 0 {
            if self.accept(chosen) {
                out.push(*chosen);
            }
            return true;
        }
        for i in start..=self.n - left {
            insert(chosen, i);
            if self.feasible(chosen, i + 1, left - 1) && !self.dfs(meter, chosen, i + 1, left - 1, out) {
                remove(chosen, i);
                return false;
            }
            remove(chosen, i);
        }
        true
    }
}
