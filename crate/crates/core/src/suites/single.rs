//! Checks over a dense `(Z, p, W)` grid solved once by both single-type
//! solvers.

use rayon::prelude::*;

use super::{Scale, SuiteReport};
use crate::evaluate_profit;
use crate::model::{lazear_dominates, Instance, SolveResult};
use crate::solver::{fixed_class_count_best, gap_branch, solve_balanced, solve_bruteforce};

#[derive(Debug, Clone)]
pub struct SweepGrid {
    pub students: Vec<usize>,
    /// `p = i / 100` for each listed `i`, per school size.
    pub p_hundredths: fn(usize) -> Vec<u32>,
    /// `W = j / 20` for each listed `j`.
    pub w_twentieths: Vec<u32>,
}

fn fine_p(z: usize) -> Vec<u32> {
    if z <= 20 {
        (5..=99).collect()
    } else {
        (1..=19).map(|i| 5 * i).chain([99]).collect()
    }
}

fn coarse_p(_: usize) -> Vec<u32> {
    (1..=19).map(|i| 5 * i).chain([99]).collect()
}

impl SweepGrid {
    /// Z in 2..=30, p in 0.05..=0.99 (every 0.05 above Z = 20), W in
    /// 0.05..=2.0.
    pub fn full() -> Self {
        Self {
            students: (2..=30).collect(),
            p_hundredths: fine_p,
            w_twentieths: (1..=40).collect(),
        }
    }

    pub fn quick() -> Self {
        Self {
            students: (2..=14).collect(),
            p_hundredths: coarse_p,
            w_twentieths: (1..=40).collect(),
        }
    }

    pub fn for_scale(scale: Scale) -> Self {
        match scale {
            Scale::Quick => Self::quick(),
            Scale::Full => Self::full(),
        }
    }

    fn points(&self) -> Vec<(usize, f64, f64)> {
        let mut out = Vec::new();
        for &z in &self.students {
            for i in (self.p_hundredths)(z) {
                for &j in &self.w_twentieths {
                    // exact quotients so that W == p is hit exactly
                    out.push((z, i as f64 / 100.0, j as f64 / 20.0));
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub instance: Instance,
    pub oracle: SolveResult,
    pub balanced: SolveResult,
}

/// Solved grid, ordered by `Z`, then `p`, then increasing `W`.
#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub points: Vec<SweepPoint>,
}

impl Sweep {
    pub fn run(grid: &SweepGrid) -> Self {
        let points = grid
            .points()
            .into_par_iter()
            .map(|(z, p, w)| {
                let instance = Instance::new(z, p, w).expect("grid values are valid");
                let oracle =
                    solve_bruteforce(&instance).expect("grid stays under the enumeration cap");
                let balanced = solve_balanced(&instance);
                SweepPoint {
                    instance,
                    oracle,
                    balanced,
                }
            })
            .collect();
        Self { points }
    }

    fn profitable(&self) -> impl Iterator<Item = &SweepPoint> {
        self.points.iter().filter(|pt| pt.oracle.profitable)
    }
}

fn tag(pt: &SweepPoint) -> String {
    let i = &pt.instance;
    format!("Z={} p={} W={}", i.students(), i.p(), i.teacher_cost())
}

/// Profitable optima are nearly equal and the balanced solver finds them.
pub fn near_equality(sweep: &Sweep) -> SuiteReport {
    let mut r = SuiteReport::new("near-equal optimum and balanced solver");
    for pt in sweep.profitable() {
        r.check(pt.oracle.best.spread() <= 1, || {
            format!("{}: optimum {}", tag(pt), pt.oracle.best)
        });
        r.check(pt.balanced == pt.oracle, || {
            format!(
                "{}: balanced {} vs oracle {}",
                tag(pt),
                pt.balanced.best,
                pt.oracle.best
            )
        });
    }
    r
}

/// No profitable optimum uses between `M_o + 1` and `Z - 1` classes.
pub fn class_count_gap(sweep: &Sweep) -> SuiteReport {
    let mut r = SuiteReport::new("class-count gap");
    for pt in sweep.profitable() {
        let z = pt.instance.students();
        r.check(gap_branch(z, pt.oracle.classes()).is_some(), || {
            format!("{}: {} classes", tag(pt), pt.oracle.classes())
        });
    }
    r
}

/// One class per student exactly when `W < 2p(1-p)` and `W < p`.
pub fn all_singleton_region(sweep: &Sweep) -> SuiteReport {
    let mut r = SuiteReport::new("one-class-per-student region");
    for pt in &sweep.points {
        let (z, p, w) = (
            pt.instance.students(),
            pt.instance.p(),
            pt.instance.teacher_cost(),
        );
        let predicted = w < 2.0 * p * (1.0 - p) && w < p;
        let observed = pt.oracle.profitable && pt.oracle.classes() == z;
        r.check(predicted == observed, || {
            format!(
                "{}: formula {predicted}, optimum {} profitable={}",
                tag(pt),
                pt.oracle.best,
                pt.oracle.profitable
            )
        });
    }
    r
}

/// `W >= 2p(1-p)` leaves at most one class of size 1.
pub fn singleton_bound(sweep: &Sweep) -> SuiteReport {
    let mut r = SuiteReport::new("at most one singleton class");
    for pt in &sweep.points {
        let (p, w) = (pt.instance.p(), pt.instance.teacher_cost());
        if w >= 2.0 * p * (1.0 - p) {
            r.check(pt.oracle.best.singleton_classes() <= 1, || {
                format!("{}: optimum {}", tag(pt), pt.oracle.best)
            });
        }
    }
    r
}

/// `p <= 1/2` and profitable: every class has one student and `p > W`.
pub fn low_p_singletons(sweep: &Sweep) -> SuiteReport {
    let mut r = SuiteReport::new("low p gives one class per student");
    for pt in sweep.profitable() {
        let (z, p, w) = (
            pt.instance.students(),
            pt.instance.p(),
            pt.instance.teacher_cost(),
        );
        if p <= 0.5 {
            r.check(pt.oracle.classes() == z && p > w, || {
                format!("{}: optimum {}", tag(pt), pt.oracle.best)
            });
        }
    }
    r
}

/// `(1, Z - 1)` is never optimal for `Z >= 4`, and a two-class optimum is
/// the best two-class vector.
pub fn two_class_structure(sweep: &Sweep) -> SuiteReport {
    let mut r = SuiteReport::new("two-class optimum is not (1, Z-1)");
    for pt in &sweep.points {
        let z = pt.instance.students();
        if z < 4 {
            continue;
        }
        r.check(pt.oracle.best.sizes() != [1, z - 1], || {
            format!("{}: optimum {}", tag(pt), pt.oracle.best)
        });
        if pt.oracle.classes() == 2 {
            match fixed_class_count_best(&pt.instance, 2) {
                Ok(two) => r.check(two == pt.oracle.best, || {
                    format!("{}: restricted {two} vs global {}", tag(pt), pt.oracle.best)
                }),
                Err(e) => r.check(false, || format!("{}: {e}", tag(pt))),
            }
        }
    }
    r
}

/// Smallest and largest class of an optimum form an optimal two-class
/// school of their own.
pub fn subschool_closure(sweep: &Sweep) -> SuiteReport {
    let mut r = SuiteReport::new("smallest and largest class are a two-class optimum");
    for pt in &sweep.points {
        let best = &pt.oracle.best;
        if best.classes() < 2 {
            continue;
        }
        let (lo, hi) = (best.smallest(), best.largest());
        let sub =
            Instance::new(lo + hi, pt.instance.p(), pt.instance.teacher_cost()).expect("valid");
        let pair = crate::ClassSizeVector::new(vec![lo, hi]).expect("valid");
        let outcome = fixed_class_count_best(&sub, 2).and_then(|two| {
            Ok((
                evaluate_profit(&sub, &pair)?,
                evaluate_profit(&sub, &two)?,
                two,
            ))
        });
        match outcome {
            Ok((own, restricted, two)) => r.check(own >= restricted - 1e-12, || {
                format!("{}: ({lo}, {hi}) loses to {two}", tag(pt))
            }),
            Err(e) => r.check(false, || format!("{}: {e}", tag(pt))),
        }
    }
    r
}

/// For fixed `p > 1/2`, lowering `W` never lowers the optimal class count.
pub fn monotone_in_w(sweep: &Sweep) -> SuiteReport {
    let mut r = SuiteReport::new("class count does not fall as W falls");
    let mut column: Vec<&SweepPoint> = Vec::new();
    let flush = |column: &mut Vec<&SweepPoint>, r: &mut SuiteReport| {
        // points arrive with increasing W
        let profitable: Vec<&&SweepPoint> =
            column.iter().filter(|pt| pt.oracle.profitable).collect();
        for pair in profitable.windows(2) {
            let (cheap, dear) = (pair[0], pair[1]);
            r.check(cheap.oracle.classes() >= dear.oracle.classes(), || {
                format!(
                    "{}: {} classes, but {} at W={}",
                    tag(cheap),
                    cheap.oracle.classes(),
                    dear.oracle.classes(),
                    dear.instance.teacher_cost()
                )
            });
        }
        column.clear();
    };
    for pt in &sweep.points {
        if pt.instance.p() <= 0.5 {
            continue;
        }
        if let Some(last) = column.last() {
            if last.instance.students() != pt.instance.students()
                || last.instance.p() != pt.instance.p()
            {
                flush(&mut column, &mut r);
            }
        }
        column.push(pt);
    }
    flush(&mut column, &mut r);
    r
}

/// Where its hypothesis holds, the Lazear profit is at least the per-class
/// profit at the same class count, with equality exactly when `m | Z`.
pub fn lazear_comparison(sweep: &Sweep) -> SuiteReport {
    let mut r = SuiteReport::new("Lazear profit dominates");
    let mut skipped = 0;
    for pt in sweep.profitable() {
        match lazear_dominates(&pt.instance, &pt.oracle) {
            Ok(c) => match c.holds {
                Some(ok) => r.check(ok, || {
                    format!("{}: gap {} at m={}", tag(pt), c.gap, c.classes)
                }),
                None => skipped += 1,
            },
            Err(e) => r.check(false, || format!("{}: {e}", tag(pt))),
        }
    }
    r.note(format!(
        "{skipped} profitable points outside the hypothesis"
    ));
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> Sweep {
        Sweep::run(&SweepGrid {
            students: (2..=9).collect(),
            p_hundredths: coarse_p,
            w_twentieths: (1..=40).collect(),
        })
    }

    #[test]
    fn small_sweep_passes_everything() {
        let s = small();
        assert_eq!(s.points.len(), 8 * 20 * 40);
        for r in [
            near_equality(&s),
            class_count_gap(&s),
            all_singleton_region(&s),
            singleton_bound(&s),
            low_p_singletons(&s),
            two_class_structure(&s),
            subschool_closure(&s),
            monotone_in_w(&s),
            lazear_comparison(&s),
        ] {
            assert!(r.passed(), "{r}");
        }
    }

    #[test]
    fn grid_hits_w_equal_p_exactly() {
        let pts = SweepGrid::full().points();
        assert!(pts.iter().any(|&(_, p, w)| p == 0.35 && w == 0.35));
        assert_eq!(pts.iter().filter(|&&(z, _, _)| z == 21).count(), 20 * 40);
        assert_eq!(pts.iter().filter(|&&(z, _, _)| z == 20).count(), 95 * 40);
    }

    #[test]
    fn broken_solver_is_caught() {
        let mut s = small();
        let pt = s
            .points
            .iter_mut()
            .find(|pt| pt.oracle.profitable && pt.oracle.classes() == 2)
            .unwrap();
        pt.balanced.best = crate::ClassSizeVector::new(vec![pt.instance.students()]).unwrap();
        assert!(!near_equality(&s).passed());
    }
}
