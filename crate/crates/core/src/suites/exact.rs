//! Integer identities, crossing roots and the two-class comparison
//! polynomials.

use rayon::prelude::*;

use super::{Scale, SuiteReport};
use crate::polynomials::{
    build_f_k, build_split_test, build_two_class_test, crossing_root, flat_case, junction_points,
    marginal, marginal_slope_at_one, peak_point, positive_roots, second_difference_s,
    unit_interval_roots, Constants, Crossing, SparsePolynomial, TripartiteSplit,
    DEFAULT_SCAN_POINTS,
};
use crate::regions::{conjecture_a_scan, gamma_counterexample, RegionModel};
use crate::solver::{max_paired_classes, BalancedVector};

/// Residual accepted on a crossing root.
pub const ROOT_RESIDUAL: f64 = 1e-10;

/// Floor ordering, the square-sum second difference and when consecutive
/// marginals coincide, for every `Z` in `2..=max_students`.
pub fn integer_identities(max_students: usize) -> SuiteReport {
    let parts: Vec<SuiteReport> = (2..=max_students)
        .into_par_iter()
        .map(integer_identities_for)
        .collect();
    let mut r = SuiteReport::new("integer identities");
    parts.into_iter().for_each(|p| r.merge(p));
    r
}

fn integer_identities_for(z: usize) -> SuiteReport {
    let mut r = SuiteReport::new("");
    let top = (max_paired_classes(z) + 1).min(z);
    let q = |k: usize| BalancedVector::new(z, k).expect("k <= Z");
    for k in 2..=top {
        let (now, before) = (q(k), q(k - 1));
        r.check(now.q <= before.q, || format!("Z={z} k={k}: q_k > q_(k-1)"));
        if now.q == before.q {
            r.check(before.r > now.r, || {
                format!("Z={z} k={k}: equal floors but r_(k-1) <= r_k")
            });
        }
    }
    for k in 2..z {
        match (second_difference_s(z, k), flat_case(z, k)) {
            (Ok(sd), Ok(flat)) => {
                r.check(sd.value() >= 0, || {
                    format!("Z={z} k={k}: second difference {}", sd.value())
                });
                r.check(sd.equal == flat.is_some(), || {
                    format!("Z={z} k={k}: equality {} but flat case {flat:?}", sd.equal)
                });
            }
            (Err(e), _) | (_, Err(e)) => r.check(false, || format!("Z={z} k={k}: {e}")),
        }
    }
    let slopes: Vec<i64> = (2..=top)
        .map(|k| marginal_slope_at_one(z, k).expect("k in range"))
        .collect();
    for (idx, pair) in slopes.windows(2).enumerate() {
        let k = idx + 2;
        r.check(pair[1] >= pair[0], || {
            format!("Z={z}: f'_{}(1) < f'_{k}(1)", k + 1)
        });
    }
    for k in 2..top {
        let (Ok(f), Ok(g)) = (build_f_k(z, k), build_f_k(z, k + 1)) else {
            r.check(false, || format!("Z={z} k={k}: cannot build marginals"));
            continue;
        };
        let same = f == g;
        let flat = second_difference_s(z, k)
            .map(|sd| sd.equal)
            .unwrap_or(false);
        let same_slope = slopes[k - 1] == slopes[k - 2];
        r.check(same == flat && flat == same_slope, || {
            format!("Z={z} k={k}: equal marginals {same}, flat {flat}, equal slopes {same_slope}")
        });
    }
    r
}

/// The constant `c`, every crossing root with its side signs, and every
/// peak, for `Z` in `2..=max_students`.
pub fn crossing_roots(max_students: usize) -> SuiteReport {
    let mut r = SuiteReport::new("crossing roots and peaks");
    match Constants::new(6) {
        Ok(k) => r.check((k.c - 0.52922).abs() <= 5e-5, || format!("c = {}", k.c)),
        Err(e) => r.check(false, || format!("c: {e}")),
    }
    let parts: Vec<(SuiteReport, usize)> = (2..=max_students)
        .into_par_iter()
        .map(crossing_roots_for)
        .collect();
    let mut equal = 0;
    for (part, n) in parts {
        r.merge(part);
        equal += n;
    }
    r.note(format!("{equal} pairs of identical marginals skipped"));
    r
}

fn crossing_roots_for(z: usize) -> (SuiteReport, usize) {
    let mut r = SuiteReport::new("");
    let top = (max_paired_classes(z) + 1).min(z);
    let mut equal = 0;
    for i in 1..=top {
        for j in i + 1..=top {
            let root = match crossing_root(z, i, j) {
                Ok(Crossing::Root(root)) => root,
                Ok(Crossing::EqualFunctions) => {
                    equal += 1;
                    continue;
                }
                Err(e) => {
                    r.check(false, || format!("Z={z} ({i},{j}): {e}"));
                    continue;
                }
            };
            r.check(root.certified && root.residual < ROOT_RESIDUAL, || {
                format!(
                    "Z={z} ({i},{j}): certified={} residual={}",
                    root.certified, root.residual
                )
            });
            let diff = &marginal(z, j).expect("j in range") - &marginal(z, i).expect("i in range");
            let (left, right) = (diff.eval(root.p / 2.0), diff.eval((1.0 + root.p) / 2.0));
            r.check(left > 0.0 && right < 0.0, || {
                format!("Z={z} ({i},{j}) root {}: sides {left}, {right}", root.p)
            });
        }
    }
    for k in 2..=top {
        let (peak, f) = match (peak_point(z, k), build_f_k(z, k)) {
            (Ok(peak), Ok(f)) => (peak, f),
            (Err(e), _) | (_, Err(e)) => {
                r.check(false, || format!("Z={z} k={k}: {e}"));
                continue;
            }
        };
        let df = f.derivative();
        r.check(peak.s > 0.0 && peak.s < 1.0, || {
            format!("Z={z} k={k}: peak at {}", peak.s)
        });
        r.check(
            df.eval(peak.s / 2.0) > 0.0 && df.eval((1.0 + peak.s) / 2.0) < 0.0,
            || format!("Z={z} k={k}: slope signs around peak {}", peak.s),
        );
        let above = (1..200)
            .map(|i| i as f64 / 200.0)
            .find(|&p| f.eval(p) > peak.value + 1e-12);
        r.check(above.is_none(), || {
            format!("Z={z} k={k}: f_k({above:?}) exceeds the peak value")
        });
    }
    (r, equal)
}

fn descartes_check(r: &mut SuiteReport, what: &str, poly: &SparsePolynomial) {
    let bound = match poly.sign_changes() {
        Ok(b) => b,
        Err(e) => return r.check(false, || format!("{what}: {e}")),
    };
    match positive_roots(poly, DEFAULT_SCAN_POINTS) {
        Ok(found) => {
            let n = found.count();
            r.check(n <= bound && (bound - n) % 2 == 0, || {
                format!("{what}: {n} positive roots against {bound} sign changes")
            });
        }
        Err(e) => r.check(false, || format!("{what}: {e}")),
    }
}

/// Positive roots located by scan never exceed the sign-change count and
/// share its parity, for every polynomial family up to `max_students`.
pub fn descartes_consistency(max_students: usize) -> SuiteReport {
    let parts: Vec<SuiteReport> = (2..=max_students)
        .into_par_iter()
        .map(|z| {
            let mut r = SuiteReport::new("");
            let top = (max_paired_classes(z) + 1).min(z);
            let family: Vec<SparsePolynomial> = (1..=top)
                .map(|k| marginal(z, k).expect("k in range"))
                .collect();
            for k in 2..=top {
                descartes_check(&mut r, &format!("Z={z} f_{k}"), &family[k - 1]);
                for i in 1..k {
                    let diff = &family[k - 1] - &family[i - 1];
                    if !diff.is_zero() {
                        descartes_check(&mut r, &format!("Z={z} f_{k} - f_{i}"), &diff);
                    }
                }
            }
            if z >= 3 {
                let b3 = TripartiteSplit::new(z).expect("Z >= 3").beta[2];
                for k in 1..=z / 2 {
                    let f = build_two_class_test(z, k).expect("k in range");
                    descartes_check(&mut r, &format!("Z={z} two-class test k={k}"), &f);
                    if k < b3 {
                        let g = build_split_test(z, k).expect("k < beta_3");
                        descartes_check(&mut r, &format!("Z={z} split test k={k}"), &g);
                    }
                }
            }
            r
        })
        .collect();
    let mut r = SuiteReport::new("root counts within the sign-change bound");
    parts.into_iter().for_each(|p| r.merge(p));
    r
}

/// Root structure of the two-class test `f` and the split test `g` against
/// `p_1 = c^{6/Z}`, for `Z` in `6..=max_students`.
pub fn two_class_polynomials(max_students: usize) -> SuiteReport {
    let parts: Vec<SuiteReport> = (6..=max_students)
        .into_par_iter()
        .map(two_class_for)
        .collect();
    let mut r = SuiteReport::new("two-class comparison polynomials");
    parts.into_iter().for_each(|p| r.merge(p));
    r
}

fn two_class_for(z: usize) -> SuiteReport {
    let mut r = SuiteReport::new("");
    let Ok(consts) = Constants::new(z) else {
        r.check(false, || format!("Z={z}: constants"));
        return r;
    };
    let p1 = consts.p1;
    let floor = (-4.0f64).exp();
    let high = |x: f64| x.powi(z as i32) > floor;
    r.check(high(p1), || format!("Z={z}: p_1^Z = {}", p1.powi(z as i32)));
    let split = TripartiteSplit::new(z).expect("Z >= 6");
    let b3 = split.beta[2];
    for k in 1..=z / 2 {
        let f = build_two_class_test(z, k).expect("k in range");
        r.check(f.eval(p1) < 0.0, || {
            format!("Z={z} k={k}: f(p_1) = {}", f.eval(p1))
        });
        let roots: Vec<f64> = match unit_interval_roots(&f, DEFAULT_SCAN_POINTS) {
            Ok(rs) => rs.into_iter().map(|x| x.value).collect(),
            Err(e) => {
                r.check(false, || format!("Z={z} k={k}: {e}"));
                continue;
            }
        };
        let at_one = f.multiplicity_at_one();
        if k >= b3 && !(k == b3 && z % 3 == 2) {
            let ok = roots.len() == 1 && at_one == 1 && roots[0] > p1 && high(roots[0]);
            r.check(ok, || {
                format!("Z={z} k={k}: roots {roots:?}, multiplicity at 1 = {at_one}")
            });
            if let [po] = roots[..] {
                r.check(
                    f.eval(po / 2.0) < 0.0 && f.eval((1.0 + po) / 2.0) > 0.0,
                    || format!("Z={z} k={k}: sign pattern around {po}"),
                );
            }
        } else if k >= b3 {
            let ok = roots.len() == 2
                && at_one == 1
                && roots[0] < 0.5
                && 0.5 < roots[1]
                && high(roots[1]);
            r.check(ok, || {
                format!("Z={z} k={k}: roots {roots:?}, multiplicity at 1 = {at_one}")
            });
        } else {
            let kf = k as f64;
            let ok = if kf <= consts.k_o {
                roots.len() == 1 && roots[0] < p1
            } else {
                roots.len() == 2 && roots[0] < p1 && p1 < roots[1]
            };
            r.check(ok, || {
                format!(
                    "Z={z} k={k} (k_o = {}): roots {roots:?} vs p_1 = {p1}",
                    consts.k_o
                )
            });
            let g = build_split_test(z, k).expect("k < beta_3");
            let l = z - k;
            let p4 = ((l - k) as f64 / z as f64).powf(1.0 / kf);
            r.check(p1 < p4, || format!("Z={z} k={k}: p_4 = {p4} <= p_1 = {p1}"));
            match unit_interval_roots(&g, DEFAULT_SCAN_POINTS) {
                Ok(rs) => r.check(rs.len() == 1 && (rs[0].value - p4).abs() < 1e-10, || {
                    format!("Z={z} k={k}: split-test roots {rs:?} vs {p4}")
                }),
                Err(e) => r.check(false, || format!("Z={z} k={k}: {e}")),
            }
        }
    }
    r
}

/// Every defined crossing in the scan is certified and compared; the
/// conjecture's own status is reported, not asserted.
pub fn conjecture_scan(students: impl IntoIterator<Item = usize>) -> SuiteReport {
    let mut r = SuiteReport::new("ordering scan of crossing roots");
    let students: Vec<usize> = students.into_iter().collect();
    match conjecture_a_scan(students.iter().copied()) {
        Ok(report) => {
            for line in &report.lines {
                let defined = line.p.is_some();
                let fine =
                    !defined || line.status != crate::regions::conjecture::RootStatus::Uncertified;
                r.check(fine, || {
                    format!(
                        "Z={} ({},{}): uncertified root",
                        line.students, line.i, line.j
                    )
                });
            }
            for c in &report.comparisons {
                r.check(c.certified && c.margin.is_finite(), || {
                    format!("Z={} {:?} vs {:?}: not compared", c.students, c.lhs, c.rhs)
                });
            }
            for &z in &students {
                r.check(report.comparisons.iter().any(|c| c.students == z), || {
                    format!("Z={z}: no comparisons")
                });
            }
            r.note(format!(
                "{} roots, {} comparisons, {} violations: {}",
                report.lines.len(),
                report.comparisons.len(),
                report.violations().len(),
                report.status()
            ));
        }
        Err(e) => r.check(false, || format!("scan: {e}")),
    }
    r
}

/// Inequality-defined regions against the oracle, boundary junctions and
/// the rising-`p` counterexample.
pub fn regions_on_grid(scale: Scale) -> SuiteReport {
    let mut r = SuiteReport::new("regions match the oracle");
    let (students, n): (Vec<usize>, usize) = match scale {
        Scale::Quick => (vec![5, 8, 11], 30),
        Scale::Full => ((2..=16).collect(), 60),
    };
    let parts: Vec<SuiteReport> = students
        .par_iter()
        .map(|&z| {
            let mut r = SuiteReport::new("");
            let model = RegionModel::new(z).expect("Z >= 2");
            let w_top = (z as f64 * 0.99f64.powi(z as i32)).max(1.0);
            for a in 1..n {
                let p = a as f64 / n as f64;
                for b in 1..=n {
                    let w = w_top * b as f64 / n as f64;
                    let labels = model.labels(p, w);
                    let cell = model.classify(p, w).expect("valid point");
                    let expected = cell.profitable.then_some(cell.optimal_m);
                    r.check(
                        labels.len() <= 1 && labels.first().copied() == expected,
                        || {
                            format!(
                                "Z={z} p={p} W={w}: labels {labels:?}, optimum {} profitable={}",
                                cell.optimal_m, cell.profitable
                            )
                        },
                    );
                }
            }
            for k in 2..=z {
                let Ok(points) = junction_points(z, k) else {
                    r.check(false, || format!("Z={z} k={k}: junction"));
                    continue;
                };
                for x in points {
                    let gap = model.value(k - 1).eval(x) / (k - 1) as f64
                        - model.value(k).eval(x) / k as f64;
                    r.check(gap.abs() < ROOT_RESIDUAL, || {
                        format!("Z={z} k={k}: junction {x} off by {gap}")
                    });
                }
            }
            r
        })
        .collect();
    parts.into_iter().for_each(|p| r.merge(p));
    match gamma_counterexample() {
        Ok(g) => r.check(g.confirmed, || {
            format!("rising p lowers the class count: {g:?}")
        }),
        Err(e) => r.check(false, || format!("gamma: {e}")),
    }
    r
}
