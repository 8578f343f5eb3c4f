//! Structure of multi-type optima and the cycle-breaking move.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{Scale, SuiteReport};
use crate::multitype::structure::{
    cycle_break_improve, segregated_blocks_check, singleton_bound_check, verify_structure,
    BipartiteStructure,
};
use crate::multitype::{
    evaluate_multitype, solve_multitype_bruteforce, AllocationMatrix, MultiTypeInstance,
};

#[derive(Debug, Clone, PartialEq)]
pub struct MultiGrid {
    pub max_students: usize,
    /// Distinct `p` values combined into pairs and triples.
    pub probs: Vec<f64>,
    pub teacher_costs: Vec<f64>,
}

impl MultiGrid {
    pub fn full() -> Self {
        Self {
            max_students: 10,
            probs: vec![0.35, 0.6, 0.85, 0.95],
            teacher_costs: vec![0.3, 0.6, 0.9, 1.2],
        }
    }

    pub fn quick() -> Self {
        Self {
            max_students: 7,
            ..Self::full()
        }
    }

    pub fn for_scale(scale: Scale) -> Self {
        match scale {
            Scale::Quick => Self::quick(),
            Scale::Full => Self::full(),
        }
    }

    /// Two- and three-type instances with every positive count split of
    /// every `Z` up to the limit.
    pub fn instances(&self) -> Vec<MultiTypeInstance> {
        let n = self.probs.len();
        let mut prob_sets = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                prob_sets.push(vec![self.probs[a], self.probs[b]]);
                for c in b + 1..n {
                    prob_sets.push(vec![self.probs[a], self.probs[b], self.probs[c]]);
                }
            }
        }
        let mut out = Vec::new();
        for probs in &prob_sets {
            for counts in compositions(self.max_students, probs.len()) {
                for &w in &self.teacher_costs {
                    out.push(
                        MultiTypeInstance::new(probs.clone(), counts.clone(), w)
                            .expect("valid grid"),
                    );
                }
            }
        }
        out
    }
}

/// Positive `parts`-tuples with sum at most `max_total`.
fn compositions(max_total: usize, parts: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..parts {
        out = out
            .into_iter()
            .flat_map(|prefix: Vec<usize>| {
                let used: usize = prefix.iter().sum();
                (1..=max_total.saturating_sub(used)).map(move |n| {
                    let mut c = prefix.clone();
                    c.push(n);
                    c
                })
            })
            .collect();
    }
    out
}

/// Every optimum on the grid is a forest with at most `s - 1` mixed
/// classes, admits no cycle-breaking move, and meets the singleton bound.
pub fn structure_sweep(grid: &MultiGrid) -> SuiteReport {
    let instances = grid.instances();
    let parts: Vec<(SuiteReport, usize)> = instances
        .par_iter()
        .map(|inst| {
            let mut r = SuiteReport::new("");
            let tag = || {
                format!(
                    "p={:?} a={:?} W={}",
                    inst.probs(),
                    inst.counts(),
                    inst.teacher_cost()
                )
            };
            let best = match solve_multitype_bruteforce(inst) {
                Ok(b) => b.best,
                Err(e) => {
                    r.check(false, || format!("{}: {e}", tag()));
                    return (r, 0);
                }
            };
            let mut paths = 0;
            match verify_structure(&best, inst.types()) {
                Ok(s) => {
                    r.check(s.holds(), || {
                        format!("{}: optimum {best} has structure {s:?}", tag())
                    });
                    paths += usize::from(s.path == Some(true));
                }
                Err(e) => r.check(false, || format!("{}: {e}", tag())),
            }
            match cycle_break_improve(inst, &best) {
                Ok(next) => r.check(next.is_none(), || {
                    format!("{}: optimum {best} can be improved", tag())
                }),
                Err(e) => r.check(false, || format!("{}: {e}", tag())),
            }
            match singleton_bound_check(inst, &best) {
                Ok(s) => r.check(s.holds != Some(false), || {
                    format!("{}: optimum {best}: {s:?}", tag())
                }),
                Err(e) => r.check(false, || format!("{}: {e}", tag())),
            }
            match segregated_blocks_check(inst, &best) {
                Ok(blocks) => {
                    for b in blocks {
                        r.check(b.nearly_equal, || {
                            format!("{}: type {} block {:?}", tag(), b.type_index, b.sizes)
                        });
                    }
                }
                Err(e) => r.check(false, || format!("{}: {e}", tag())),
            }
            (r, paths)
        })
        .collect();
    let mut r = SuiteReport::new("multi-type optimum structure");
    let mut paths = 0;
    for (part, n) in parts {
        r.merge(part);
        paths += n;
    }
    r.note(format!(
        "{} instances, {paths} optima with the maximal number of mixed classes",
        instances.len()
    ));
    r
}

/// Random allocation whose graph has a cycle, with distinct `p` values.
pub fn random_cyclic(rng: &mut impl Rng) -> (MultiTypeInstance, AllocationMatrix) {
    loop {
        let s = rng.gen_range(2..=3);
        let m = rng.gen_range(2..=4);
        let rows: Vec<Vec<usize>> = (0..s)
            .map(|_| (0..m).map(|_| rng.gen_range(0..=3)).collect())
            .collect();
        if rows.iter().any(|r| r.iter().all(|&n| n == 0)) {
            continue;
        }
        let Ok(alloc) = AllocationMatrix::from_rows(&rows) else {
            continue;
        };
        if BipartiteStructure::of(&alloc).find_cycle().is_none() {
            continue;
        }
        let mut grid: Vec<u32> = (5..=95).collect();
        grid.shuffle(rng);
        let probs = grid[..s].iter().map(|&i| i as f64 / 100.0).collect();
        let w = rng.gen_range(0.05..1.5);
        let inst = MultiTypeInstance::new(probs, alloc.row_sums(), w).expect("valid");
        return (inst, alloc);
    }
}

/// Each cyclic allocation is strictly improved by one cycle-breaking move.
pub fn cycle_breaking(samples: usize, seed: u64) -> SuiteReport {
    let mut r = SuiteReport::new("cycle breaking improves cyclic allocations");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let (inst, alloc) = random_cyclic(&mut rng);
        let before = evaluate_multitype(&inst, &alloc).expect("feasible");
        match cycle_break_improve(&inst, &alloc) {
            Ok(Some(next)) => {
                let after = evaluate_multitype(&inst, &next).unwrap_or(f64::NEG_INFINITY);
                r.check(after > before, || {
                    format!("{alloc} -> {next}: {before} to {after}")
                });
            }
            Ok(None) => r.check(false, || format!("{alloc}: cycle not found")),
            Err(e) => r.check(false, || format!("{alloc} with p={:?}: {e}", inst.probs())),
        }
    }
    r
}
