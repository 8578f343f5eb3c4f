//! Exact solvers for the single-type school.
//!
//! [`solve_bruteforce`] scans every partition of `Z` and is the oracle.
//! [`solve_balanced`] only looks at the nearly equal vector for each class
//! count, and on profitable instances it must agree with the oracle.
//!
//! Ties are broken by fewer classes, then by the lexicographically smallest
//! sorted vector. Profits are summed in sorted size order everywhere, so the
//! same vector always evaluates to the same bits.

pub mod balanced;
pub mod partitions;

use crate::error::{Error, Result};
use crate::model::{class_output, profit_unchecked, ClassSizeVector, Instance, SolveResult};

pub use balanced::{max_paired_classes, BalancedVector};
pub use partitions::{enumerate_partitions, Partitions};

/// Largest `Z` the partition oracle accepts by default (about 9.7e5
/// partitions).
pub const DEFAULT_ENUMERATION_CAP: usize = 60;

fn check_cap(students: usize, cap: usize) -> Result<()> {
    if students > cap {
        return Err(Error::Capacity {
            what: "Z",
            value: students,
            cap,
        });
    }
    Ok(())
}

/// `n p^n` for `n = 0..=Z`.
fn output_table(students: usize, p: f64) -> Vec<f64> {
    (0..=students).map(|n| class_output(n, p)).collect()
}

fn profit_from_table(inst: &Instance, table: &[f64], sizes: &[usize]) -> f64 {
    let output: f64 = sizes.iter().map(|&n| table[n]).sum();
    inst.unit_value() * output - sizes.len() as f64 * inst.teacher_cost()
}

/// Global optimum over all partitions of `Z`.
pub fn solve_bruteforce(inst: &Instance) -> Result<SolveResult> {
    solve_bruteforce_with_cap(inst, DEFAULT_ENUMERATION_CAP)
}

pub fn solve_bruteforce_with_cap(inst: &Instance, cap: usize) -> Result<SolveResult> {
    check_cap(inst.students(), cap)?;
    let table = output_table(inst.students(), inst.p());
    let mut parts = Partitions::new(inst.students());
    let mut best_profit = f64::NEG_INFINITY;
    let mut best: Vec<usize> = Vec::new();
    while let Some(sizes) = parts.next_slice() {
        let profit = profit_from_table(inst, &table, sizes);
        if profit > best_profit {
            best_profit = profit;
            best.clear();
            best.extend_from_slice(sizes);
        }
    }
    Ok(SolveResult::new(
        inst,
        ClassSizeVector::from_sorted(best),
        best_profit,
    ))
}

/// Best nearly equal vector. Class counts strictly between `M_o` and `Z`
/// are only examined when no admissible count is profitable.
pub fn solve_balanced(inst: &Instance) -> SolveResult {
    let z = inst.students();
    let gap_limit = max_paired_classes(z);
    let admissible = (1..=gap_limit.min(z)).chain((gap_limit < z).then_some(z));
    let best = best_balanced(inst, admissible);
    if best.profitable {
        return best;
    }
    best_balanced(inst, 1..=z)
}

fn best_balanced(inst: &Instance, counts: impl Iterator<Item = usize>) -> SolveResult {
    let z = inst.students();
    let mut best: Option<(Vec<usize>, f64)> = None;
    for k in counts {
        let sizes = BalancedVector {
            students: z,
            k,
            q: z / k,
            r: z % k,
        }
        .sizes();
        let profit = profit_unchecked(inst, &sizes);
        if best.as_ref().map_or(true, |(_, b)| profit > *b) {
            best = Some((sizes, profit));
        }
    }
    let (sizes, profit) = best.expect("at least one class count");
    SolveResult::new(inst, ClassSizeVector::from_sorted(sizes), profit)
}

/// Oracle when `Z` is within the cap, balanced solver otherwise.
pub fn solve_exact(inst: &Instance, cap: usize) -> SolveResult {
    match solve_bruteforce_with_cap(inst, cap) {
        Ok(r) => r,
        Err(_) => solve_balanced(inst),
    }
}

/// Best vector with exactly `m` classes.
///
/// Two classes are scanned directly for any `Z`; other counts between 3
/// and `Z - 1` enumerate partitions and honour the cap.
pub fn fixed_class_count_best(inst: &Instance, classes: usize) -> Result<ClassSizeVector> {
    fixed_class_count_best_with_cap(inst, classes, DEFAULT_ENUMERATION_CAP)
}

pub fn fixed_class_count_best_with_cap(
    inst: &Instance,
    classes: usize,
    cap: usize,
) -> Result<ClassSizeVector> {
    let z = inst.students();
    if classes == 0 || classes > z {
        return Err(Error::invalid(format!(
            "class count must be in 1..={z}, got {classes}"
        )));
    }
    if classes == 1 || classes == z {
        return Ok(BalancedVector::new(z, classes)?.to_vector());
    }
    let table = output_table(z, inst.p());
    if classes == 2 {
        let (mut best_k, mut best_profit) = (1, f64::NEG_INFINITY);
        for k in 1..=z / 2 {
            let profit = profit_from_table(inst, &table, &[k, z - k]);
            if profit > best_profit {
                best_k = k;
                best_profit = profit;
            }
        }
        return Ok(ClassSizeVector::from_sorted(vec![best_k, z - best_k]));
    }
    check_cap(z, cap)?;
    let mut parts = Partitions::exact(z, classes);
    let mut best_profit = f64::NEG_INFINITY;
    let mut best = Vec::new();
    while let Some(sizes) = parts.next_slice() {
        let profit = profit_from_table(inst, &table, sizes);
        if profit > best_profit {
            best_profit = profit;
            best.clear();
            best.extend_from_slice(sizes);
        }
    }
    Ok(ClassSizeVector::from_sorted(best))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GapBranch {
    /// `m = Z`.
    OnePerStudent,
    /// `m <= Z/2` (even `Z`) or `m <= (Z+1)/2` (odd `Z`).
    AtMostHalf,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GapReport {
    pub students: usize,
    pub classes: usize,
    /// `None` when `m` falls in the forbidden range `(M_o, Z)`.
    pub branch: Option<GapBranch>,
    pub optimum: SolveResult,
}

impl GapReport {
    pub fn holds(&self) -> bool {
        self.branch.is_some()
    }
}

pub fn gap_branch(students: usize, classes: usize) -> Option<GapBranch> {
    if classes == students {
        Some(GapBranch::OnePerStudent)
    } else if classes <= max_paired_classes(students) {
        Some(GapBranch::AtMostHalf)
    } else {
        None
    }
}

/// Checks that a profitable optimum never uses between `M_o + 1` and
/// `Z - 1` classes.
pub fn gap_check(inst: &Instance) -> Result<GapReport> {
    gap_check_with_cap(inst, DEFAULT_ENUMERATION_CAP)
}

pub fn gap_check_with_cap(inst: &Instance, cap: usize) -> Result<GapReport> {
    let optimum = solve_exact(inst, cap);
    if !optimum.profitable {
        return Err(Error::HypothesisUnmet(format!(
            "school is not profitable (best profit {})",
            optimum.profit
        )));
    }
    let classes = optimum.classes();
    Ok(GapReport {
        students: inst.students(),
        classes,
        branch: gap_branch(inst.students(), classes),
        optimum,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct NearEqualReport {
    pub instance: Instance,
    pub optimum: SolveResult,
    pub spread: usize,
    /// Spread at most 1, or the school is unprofitable.
    pub pass: bool,
}

pub fn near_equal_check(inst: &Instance) -> Result<NearEqualReport> {
    let optimum = solve_bruteforce(inst)?;
    let spread = optimum.best.spread();
    Ok(NearEqualReport {
        instance: *inst,
        pass: spread <= 1 || !optimum.profitable,
        spread,
        optimum,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::evaluate_profit;

    fn inst(z: usize, p: f64, w: f64) -> Instance {
        Instance::new(z, p, w).unwrap()
    }

    #[test]
    fn five_students_two_unequal_classes() {
        let r = solve_bruteforce(&inst(5, 0.77, 1.2)).unwrap();
        assert_eq!(r.best.sizes(), &[2, 3]);
        assert!((r.profit - 0.155399).abs() < 1e-6);
        assert!(r.profitable);
        assert_eq!(solve_balanced(&inst(5, 0.77, 1.2)), r);
    }

    #[test]
    fn rising_p_adds_a_class() {
        let low = solve_bruteforce(&inst(5, 0.60, 0.673)).unwrap();
        let high = solve_bruteforce(&inst(5, 0.62, 0.673)).unwrap();
        assert_eq!(low.best.sizes(), &[2, 3]);
        assert_eq!(high.best.sizes(), &[1, 2, 2]);
        assert_eq!(solve_balanced(&inst(5, 0.60, 0.673)), low);
        assert_eq!(solve_balanced(&inst(5, 0.62, 0.673)), high);
    }

    #[test]
    fn low_p_cheap_teachers_use_singletons() {
        for (z, p, w) in [(9, 0.4, 0.3), (14, 0.5, 0.45), (6, 0.2, 0.1)] {
            let r = solve_bruteforce(&inst(z, p, w)).unwrap();
            assert_eq!(r.best.sizes(), vec![1; z].as_slice());
            assert_eq!(solve_balanced(&inst(z, p, w)).best, r.best);
        }
    }

    #[test]
    fn profit_equals_direct_evaluation() {
        let i = inst(13, 0.83, 0.7);
        let r = solve_bruteforce(&i).unwrap();
        assert_eq!(r.profit, evaluate_profit(&i, &r.best).unwrap());
    }

    #[test]
    fn cap_is_enforced() {
        let i = inst(61, 0.9, 1.0);
        assert!(matches!(
            solve_bruteforce(&i),
            Err(Error::Capacity {
                value: 61,
                cap: 60,
                ..
            })
        ));
        assert!(solve_bruteforce_with_cap(&inst(12, 0.9, 1.0), 10).is_err());
    }

    #[test]
    fn certainty_uses_one_class() {
        // p = 1: output is Z regardless, so profit Z - mW is maximised by m = 1
        let r = solve_bruteforce(&inst(6, 1.0, 1e-9)).unwrap();
        assert_eq!(r.best.sizes(), &[6]);
    }

    #[test]
    fn hundred_students_two_classes() {
        let i = inst(100, 0.95, 0.5);
        let best = fixed_class_count_best(&i, 2).unwrap();
        assert_eq!(best.sizes(), &[23, 77]);
        let out = crate::model::evaluate_output(&best, 0.95).unwrap();
        assert!((out - 8.55).abs() < 0.01);
        let even = ClassSizeVector::new(vec![50, 50]).unwrap();
        assert!(evaluate_profit(&i, &even).unwrap() < evaluate_profit(&i, &best).unwrap());
    }

    #[test]
    fn fixed_count_edges() {
        let i = inst(9, 0.8, 0.5);
        assert_eq!(fixed_class_count_best(&i, 9).unwrap().sizes(), &[1; 9]);
        assert_eq!(fixed_class_count_best(&i, 1).unwrap().sizes(), &[9]);
        assert!(fixed_class_count_best(&i, 0).is_err());
        assert!(fixed_class_count_best(&i, 10).is_err());
        let big = inst(80, 0.99, 0.5);
        assert!(matches!(
            fixed_class_count_best(&big, 3),
            Err(Error::Capacity { .. })
        ));
        assert!(fixed_class_count_best(&big, 2).is_ok());
    }

    #[test]
    fn fixed_count_agrees_with_restricted_oracle() {
        let i = inst(14, 0.85, 0.3);
        for m in 1..=14 {
            let fast = fixed_class_count_best(&i, m).unwrap();
            let table = output_table(14, 0.85);
            let oracle = Partitions::exact(14, m)
                .max_by(|a, b| {
                    profit_from_table(&i, &table, a.sizes())
                        .partial_cmp(&profit_from_table(&i, &table, b.sizes()))
                        .unwrap()
                        .then_with(|| b.cmp(a))
                })
                .unwrap();
            assert_eq!(fast, oracle, "m={m}");
        }
    }

    #[test]
    fn gap_for_ten_students() {
        for p in [0.55, 0.7, 0.85, 0.95] {
            for w in [0.05, 0.2, 0.5, 1.0, 2.0] {
                match gap_check(&inst(10, p, w)) {
                    Ok(r) => {
                        assert!(r.holds());
                        assert!(r.classes <= 5 || r.classes == 10);
                    }
                    Err(Error::HypothesisUnmet(_)) => {}
                    Err(e) => panic!("{e}"),
                }
            }
        }
    }

    #[test]
    fn gap_example_and_unprofitable() {
        let r = gap_check(&inst(5, 0.77, 1.2)).unwrap();
        assert_eq!(r.classes, 2);
        assert_eq!(r.branch, Some(GapBranch::AtMostHalf));
        assert!(matches!(
            gap_check(&inst(5, 0.3, 5.0)),
            Err(Error::HypothesisUnmet(_))
        ));
        assert_eq!(gap_branch(10, 7), None);
        assert_eq!(gap_branch(10, 10), Some(GapBranch::OnePerStudent));
    }

    #[test]
    fn near_equal_report() {
        let r = near_equal_check(&inst(17, 0.9, 0.4)).unwrap();
        assert!(r.pass);
        assert!(r.spread <= 1);
    }
}
