use crate::bits::PairSet;
use crate::graph::{thrackle_number, Graph, PairIndex};
use crate::prescription::{MissedPairSet, Prescription};
use crate::realize::{decide_exact, Budget, CombinatorialDrawing, ExactVerdict};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Realizability of all prescriptions with a given crossing count.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProfileLevel {
    pub crossings: usize,
    pub prescriptions: usize,
    pub realizable: usize,
    /// Decisions that ran out of budget.
    pub unknown: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MaxcrResult {
    pub graph: String,
    pub thrackle_number: usize,
    /// None when no level could be settled within budget.
    pub maxcr: Option<usize>,
    pub witness: Option<CombinatorialDrawing>,
    pub witness_missed: Option<Vec<[usize; 2]>>,
    /// Levels from `Th` downward.
    pub profile: Vec<ProfileLevel>,
}

impl MaxcrResult {
    pub fn level(&self, crossings: usize) -> Option<&ProfileLevel> {
        self.profile.iter().find(|l| l.crossings == crossings)
    }
}

/// Every `k`-subset of `0..n` in lexicographic order.
pub fn k_subsets(n: usize, k: usize) -> Vec<PairSet> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.iter().copied().collect());
        let mut i = k;
        while i > 0 && idx[i - 1] == i - 1 + n - k {
            i -= 1;
        }
        if i == 0 {
            return out;
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Scan crossing counts downward from `Th(g)`, deciding every prescription
/// exactly. Stops at the first realizable level, or `extra_levels` below it
/// when a fuller profile is wanted. `budget` applies per decision.
pub fn compute_maxcr_exact(g: &Graph, budget: Budget, extra_levels: usize) -> MaxcrResult {
    let th = thrackle_number(g);
    let index = PairIndex::new(g);
    let mut result = MaxcrResult {
        graph: g.name().to_string(),
        thrackle_number: th,
        maxcr: None,
        witness: None,
        witness_missed: None,
        profile: Vec::new(),
    };
    let mut stop_at = None;
    for k in 0..=th {
        if stop_at.is_some_and(|s| k > s) {
            break;
        }
        let subsets = k_subsets(index.len(), k);
        let verdicts: Vec<(ExactVerdict, MissedPairSet)> = subsets
            .par_iter()
            .map(|bits| {
                let missed = MissedPairSet::from_bits(&index, *bits).expect("in range");
                let p = Prescription::from_missed(g, &index, &missed).expect("valid missed set");
                (decide_exact(&p, budget).0, missed)
            })
            .collect();
        let mut level = ProfileLevel {
            crossings: th - k,
            prescriptions: verdicts.len(),
            realizable: 0,
            unknown: 0,
        };
        for (v, missed) in verdicts {
            match v {
                ExactVerdict::Realizable(d) => {
                    level.realizable += 1;
                    if result.witness.is_none() {
                        result.witness = Some(*d);
                        result.witness_missed = Some(missed.edge_pairs(&index));
                    }
                }
                ExactVerdict::BudgetExhausted => level.unknown += 1,
                ExactVerdict::Unrealizable => {}
            }
        }
        let settled = level.realizable > 0;
        let blocked = level.unknown > 0 && result.maxcr.is_none();
        result.profile.push(level);
        if blocked {
            // The maximum cannot be placed above an undecided level.
            break;
        }
        if settled && result.maxcr.is_none() {
            result.maxcr = Some(th - k);
            stop_at = Some(k + extra_levels);
        }
    }
    result
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_named;

    #[test]
    fn subsets_are_lexicographic() {
        let s: Vec<Vec<usize>> = k_subsets(4, 2).iter().map(|p| p.to_vec()).collect();
        assert_eq!(s, vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]);
        assert_eq!(k_subsets(5, 0).len(), 1);
        assert_eq!(k_subsets(5, 5).len(), 1);
        assert!(k_subsets(2, 3).is_empty());
    }

    #[test]
    fn small_values() {
        let c4 = compute_maxcr_exact(&build_named("cycle", &[4]).unwrap(), Budget::UNLIMITED, 0);
        assert_eq!(c4.maxcr, Some(1));
        let bowtie = compute_maxcr_exact(&build_named("bowtie", &[]).unwrap(), Budget::UNLIMITED, 1);
        assert_eq!(bowtie.maxcr, Some(4));
        assert_eq!(bowtie.profile.len(), 3);
        assert_eq!(bowtie.level(5).unwrap().realizable, 0);
    }
}
