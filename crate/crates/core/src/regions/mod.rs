//! The `(p, W)` plane for a fixed school size.
//!
//! Every profitable point has an optimal class count `m`; the set of points
//! sharing `m` is `R(m)`. The inequality-defined sets `L(k)` describe the
//! same regions through the marginal polynomials:
//!
//! - `L(1)`: `f_2(p) <= W < V(Q_1, p)`;
//! - `L(k)`, `2 <= k <= M_o`: `f_{k+1}(p) <= W < f_k(p)` and `W < V(Q_k, p)/k`;
//! - `L(Z)`: `W < 2p(1 - p)` and `W < p`.

pub mod atlas;
pub mod conjecture;

use crate::error::{Error, Result};
use crate::polynomials::{balanced_value, build_f_k, roots, SparsePolynomial};
use crate::solver::{max_paired_classes, solve_exact, DEFAULT_ENUMERATION_CAP};
use crate::Instance;

pub use atlas::{emit_atlas, Atlas, CurveKind, CurveSample};
pub use conjecture::{conjecture_a_scan, ConjectureReport};

/// One classified point of the plane.
#[derive(Debug, Clone, PartialEq)]
pub struct RegionCell {
    pub p: f64,
    pub w: f64,
    pub optimal_m: usize,
    /// Least `k` with `(p, W)` in `L(k)`.
    pub l_label: Option<usize>,
    pub profitable: bool,
    pub profit: f64,
}

/// Marginal and balanced-value polynomials of one school size, built once
/// and shared by all predicates on the plane.
#[derive(Debug, Clone)]
pub struct RegionModel {
    students: usize,
    /// `marginals[k]` is `f_k` for `2 <= k <= M_o + 1`.
    marginals: Vec<SparsePolynomial>,
    /// `values[k]` is `V(Q_k, .)` for `1 <= k <= Z`.
    values: Vec<SparsePolynomial>,
    cap: usize,
}

impl RegionModel {
    pub fn new(students: usize) -> Result<Self> {
        Self::with_cap(students, DEFAULT_ENUMERATION_CAP)
    }

    pub fn with_cap(students: usize, cap: usize) -> Result<Self> {
        if students < 2 {
            return Err(Error::invalid(format!(
                "region analysis needs Z >= 2, got {students}"
            )));
        }
        let top = max_paired_classes(students) + 1;
        let mut marginals = vec![SparsePolynomial::zero(); top + 1];
        for (k, slot) in marginals.iter_mut().enumerate().skip(2) {
            *slot = build_f_k(students, k)?;
        }
        let mut values = vec![SparsePolynomial::zero(); students + 1];
        for (k, slot) in values.iter_mut().enumerate().skip(1) {
            *slot = balanced_value(students, k)?;
        }
        Ok(Self {
            students,
            marginals,
            values,
            cap,
        })
    }

    pub fn students(&self) -> usize {
        self.students
    }

    pub fn max_paired(&self) -> usize {
        max_paired_classes(self.students)
    }

    pub fn marginal(&self, k: usize) -> &SparsePolynomial {
        &self.marginals[k]
    }

    pub fn value(&self, k: usize) -> &SparsePolynomial {
        &self.values[k]
    }

    /// `{1, ..., M_o} ∪ {Z}`.
    pub fn admissible_labels(&self) -> Vec<usize> {
        let mut out: Vec<usize> = (1..=self.max_paired()).collect();
        if !out.contains(&self.students) {
            out.push(self.students);
        }
        out
    }

    pub fn in_l(&self, k: usize, p: f64, w: f64) -> Result<bool> {
        let z = self.students;
        if k == z {
            return Ok(w < 2.0 * p * (1.0 - p) && w < p);
        }
        if k == 0 || k > self.max_paired() {
            return Err(Error::invalid(format!(
                "L(k) is defined for k in 1..={} or k = {z}, got {k}",
                self.max_paired()
            )));
        }
        let below_next = self.marginals[k + 1].eval(p) <= w;
        if k == 1 {
            return Ok(below_next && w < self.values[1].eval(p));
        }
        Ok(below_next && w < self.marginals[k].eval(p) && w < self.values[k].eval(p) / k as f64)
    }

    /// Every admissible `k` with `(p, W)` in `L(k)`, ascending.
    pub fn labels(&self, p: f64, w: f64) -> Vec<usize> {
        self.admissible_labels()
            .into_iter()
            .filter(|&k| self.in_l(k, p, w).unwrap_or(false))
            .collect()
    }

    pub fn classify(&self, p: f64, w: f64) -> Result<RegionCell> {
        let inst = Instance::new(self.students, p, w)?;
        let optimum = solve_exact(&inst, self.cap);
        Ok(RegionCell {
            p,
            w,
            optimal_m: optimum.classes(),
            l_label: self.labels(p, w).first().copied(),
            profitable: optimum.profitable,
            profit: optimum.profit,
        })
    }

    /// Supremum of the profitable `W` at this `p`, with the class count
    /// attaining it: `max_k V(Q_k, p) / k`.
    pub fn profit_constraint(&self, p: f64) -> (f64, usize) {
        let mut best = (f64::NEG_INFINITY, 0);
        for k in 1..=self.students {
            let v = self.values[k].eval(p) / k as f64;
            if v > best.0 {
                best = (v, k);
            }
        }
        best
    }
}

pub fn classify_point(p: f64, w: f64, students: usize) -> Result<RegionCell> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::invalid(format!("p must lie in (0, 1), got {p}")));
    }
    RegionModel::new(students)?.classify(p, w)
}

pub fn in_l(k: usize, p: f64, w: f64, students: usize) -> Result<bool> {
    RegionModel::new(students)?.in_l(k, p, w)
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonotoneReport {
    pub p: f64,
    pub classes: Vec<usize>,
    pub monotone: bool,
}

/// Optimal class counts along a strictly decreasing sequence of `W`; all
/// points must be profitable.
pub fn monotonic_in_w(p: f64, ws: &[f64], students: usize) -> Result<MonotoneReport> {
    if ws.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::invalid("W sequence must be strictly decreasing"));
    }
    let model = RegionModel::new(students)?;
    let mut classes = Vec::with_capacity(ws.len());
    for &w in ws {
        let cell = model.classify(p, w)?;
        if !cell.profitable {
            return Err(Error::HypothesisUnmet(format!(
                "(p, W) = ({p}, {w}) is not profitable"
            )));
        }
        classes.push(cell.optimal_m);
    }
    let monotone = classes.windows(2).all(|c| c[1] >= c[0]);
    Ok(MonotoneReport {
        p,
        classes,
        monotone,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct GammaReport {
    pub w: f64,
    pub before: RegionCell,
    pub after: RegionCell,
    /// Both points profitable and the class count rose with `p`.
    pub confirmed: bool,
}

/// Five students at `W = 0.673`: two classes at `p = 0.60`, three at `p = 0.62`.
pub fn gamma_counterexample() -> Result<GammaReport> {
    let model = RegionModel::new(5)?;
    let w = 0.673;
    let before = model.classify(0.60, w)?;
    let after = model.classify(0.62, w)?;
    let confirmed = before.profitable && after.profitable && after.optimal_m > before.optimal_m;
    Ok(GammaReport {
        w,
        before,
        after,
        confirmed,
    })
}

/// A point of `L(1)` and a larger `p` at the same `W` inside `L(2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RisingWitness {
    pub p: f64,
    pub p_next: f64,
    pub w: f64,
}

/// Looks between the crossing `p_{1,2}` of `V(Q_1)` with `f_2` and the peak
/// `s_2` of `f_2`, where `L(1)` sits below the rising part of `f_2`. Each
/// witness is confirmed by the optimizer at both points.
pub fn find_rising_pair(students: usize) -> Result<Option<RisingWitness>> {
    let model = RegionModel::new(students)?;
    if model.max_paired() < 2 {
        return Ok(None);
    }
    let Some(cross) = roots::crossing_root(students, 1, 2)?.root().copied() else {
        return Ok(None);
    };
    let peak = roots::peak_point(students, 2)?;
    if cross.p >= peak.s {
        return Ok(None);
    }
    let f2 = model.marginal(2);
    for step in 1..20 {
        let p = cross.p + (peak.s - cross.p) * step as f64 / 20.0;
        let p_next = (p + peak.s) / 2.0;
        let w = (f2.eval(p) + f2.eval(p_next)) / 2.0;
        if model.in_l(1, p, w)? && model.in_l(2, p_next, w)? {
            let before = model.classify(p, w)?;
            let after = model.classify(p_next, w)?;
            if before.profitable
                && after.profitable
                && before.optimal_m == 1
                && after.optimal_m == 2
            {
                return Ok(Some(RisingWitness { p, p_next, w }));
            }
        }
    }
    Ok(None)
}

/// Lower-left corner removed from `L(k)` when the per-class-value boundary
/// meets `f_{k+1}` left of the peak of `f_{k+1}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Trim {
    pub k: usize,
    /// `s_{k+1}`.
    pub p_limit: f64,
    /// `f_{k+1}(s_{k+1})`.
    pub w_limit: f64,
}

/// Trims for `1 <= k <= M_o`; `None` where `L(k)` is kept whole.
pub fn trims(students: usize) -> Result<Vec<Option<Trim>>> {
    let top = max_paired_classes(students);
    let mut out = vec![None; top + 1];
    for (k, slot) in out.iter_mut().enumerate().skip(1) {
        let next = k + 1;
        if next > students {
            continue;
        }
        let peak = roots::peak_point(students, next)?;
        let meets_left = roots::junction_points(students, next)?
            .iter()
            .any(|&p| p < peak.s);
        if meets_left {
            *slot = Some(Trim {
                k,
                p_limit: peak.s,
                w_limit: peak.value,
            });
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonotoneInPReport {
    pub students: usize,
    /// Profitable grid cells inside the trimmed union.
    pub trimmed_cells: usize,
    /// Pairs `(p, W)` in the trimmed union and `p' > p` on the same row
    /// where the optimal class count went up.
    pub increases: Vec<(f64, f64, f64)>,
}

/// Checks, without asserting, that class counts never rise with `p` from
/// points of the trimmed regions.
pub fn monotone_in_p_report(
    students: usize,
    p_grid: &[f64],
    w_grid: &[f64],
) -> Result<MonotoneInPReport> {
    let model = RegionModel::new(students)?;
    let trims = trims(students)?;
    let mut trimmed_cells = 0;
    let mut increases = Vec::new();
    for &w in w_grid {
        let row: Vec<RegionCell> = p_grid
            .iter()
            .map(|&p| model.classify(p, w))
            .collect::<Result<_>>()?;
        for (a, cell) in row.iter().enumerate() {
            if !cell.profitable {
                continue;
            }
            let Some(k) = cell.l_label else { continue };
            let cut = trims.get(k).copied().flatten();
            if cut.is_some_and(|t| cell.p < t.p_limit && cell.w < t.w_limit) {
                continue;
            }
            trimmed_cells += 1;
            for later in &row[a + 1..] {
                if later.profitable && later.optimal_m > cell.optimal_m {
                    increases.push((cell.p, later.p, w));
                    break;
                }
            }
        }
    }
    Ok(MonotoneInPReport {
        students,
        trimmed_cells,
        increases,
    })
}
