//! School instances, class-size vectors and the two profit functions.
//!
//! A class of `n` students, each independently non-disruptive with
//! probability `p`, produces `n * p^n` units of learning. The per-class
//! profit function charges `W` per class against `V` per unit of output; the
//! Lazear form replaces the class sizes by the average `Z / m`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A single-type school: `Z` students, non-disruption probability `p`,
/// teacher cost `W` and value of a unit of learning `V`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Instance {
    students: usize,
    p: f64,
    teacher_cost: f64,
    unit_value: f64,
}

impl Instance {
    /// Builds an instance with `V = 1`.
    pub fn new(students: usize, p: f64, teacher_cost: f64) -> Result<Self> {
        Self::with_value(students, p, teacher_cost, 1.0)
    }

    pub fn with_value(students: usize, p: f64, teacher_cost: f64, unit_value: f64) -> Result<Self> {
        if students == 0 {
            return Err(Error::invalid("student count Z must be at least 1"));
        }
        check_probability(p)?;
        if !(teacher_cost > 0.0 && teacher_cost.is_finite()) {
            return Err(Error::invalid(format!(
                "teacher cost W must be positive, got {teacher_cost}"
            )));
        }
        if !(unit_value > 0.0 && unit_value.is_finite()) {
            return Err(Error::invalid(format!(
                "unit value V must be positive, got {unit_value}"
            )));
        }
        Ok(Self {
            students,
            p,
            teacher_cost,
            unit_value,
        })
    }

    pub fn students(&self) -> usize {
        self.students
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn teacher_cost(&self) -> f64 {
        self.teacher_cost
    }

    pub fn unit_value(&self) -> f64 {
        self.unit_value
    }

    pub fn reduced(&self) -> LazearReduced {
        LazearReduced {
            a: self.students as f64 * self.p.ln(),
            lambda0: self.teacher_cost / (self.students as f64 * self.unit_value),
        }
    }
}

pub(crate) fn check_probability(p: f64) -> Result<()> {
    if p > 0.0 && p <= 1.0 {
        Ok(())
    } else {
        Err(Error::invalid(format!(
            "probability p must lie in (0, 1], got {p}"
        )))
    }
}

/// Class sizes of a candidate solution, kept in non-decreasing order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ClassSizeVector(Vec<usize>);

impl ClassSizeVector {
    pub fn new(mut sizes: Vec<usize>) -> Result<Self> {
        if sizes.is_empty() {
            return Err(Error::invalid(
                "a class-size vector needs at least one class",
            ));
        }
        if sizes.contains(&0) {
            return Err(Error::invalid("class sizes must be positive"));
        }
        sizes.sort_unstable();
        Ok(Self(sizes))
    }

    /// Wraps sizes that are already sorted and positive.
    pub(crate) fn from_sorted(sizes: Vec<usize>) -> Self {
        debug_assert!(!sizes.is_empty() && sizes[0] >= 1);
        debug_assert!(sizes.windows(2).all(|w| w[0] <= w[1]));
        Self(sizes)
    }

    pub fn sizes(&self) -> &[usize] {
        &self.0
    }

    pub fn classes(&self) -> usize {
        self.0.len()
    }

    pub fn students(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn smallest(&self) -> usize {
        self.0[0]
    }

    pub fn largest(&self) -> usize {
        self.0[self.0.len() - 1]
    }

    /// Difference between the largest and smallest class.
    pub fn spread(&self) -> usize {
        self.largest() - self.smallest()
    }

    pub fn is_nearly_equal(&self) -> bool {
        self.spread() <= 1
    }

    pub fn singleton_classes(&self) -> usize {
        self.0.iter().take_while(|&&n| n == 1).count()
    }
}

impl fmt::Display for ClassSizeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, n) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{n}")?;
        }
        Ok(())
    }
}

/// Lazear profit divided by `Z V`: `h(m) = e^{a/m} - lambda0 * m`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LazearReduced {
    /// `Z ln p`, negative whenever `p < 1`.
    pub a: f64,
    /// `W / (Z V)`.
    pub lambda0: f64,
}

impl LazearReduced {
    pub fn h(&self, classes: usize) -> f64 {
        if classes == 0 {
            return 0.0;
        }
        let m = classes as f64;
        (self.a / m).exp() - self.lambda0 * m
    }

    /// Smallest maximiser of `h` over `1..=max_classes`.
    pub fn best_class_count(&self, max_classes: usize) -> usize {
        let mut best = 1;
        let mut best_value = self.h(1);
        for m in 2..=max_classes {
            let value = self.h(m);
            if value > best_value {
                best = m;
                best_value = value;
            }
        }
        best
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveResult {
    pub best: ClassSizeVector,
    pub profit: f64,
    /// Profit above `PROFIT_TOLERANCE * Z * V`.
    pub profitable: bool,
}

/// Relative size of the float noise ignored when testing profit for positivity.
pub const PROFIT_TOLERANCE: f64 = 1e-12;

impl SolveResult {
    pub(crate) fn new(inst: &Instance, best: ClassSizeVector, profit: f64) -> Self {
        let noise = PROFIT_TOLERANCE * inst.students() as f64 * inst.unit_value();
        Self {
            best,
            profit,
            profitable: profit > noise,
        }
    }

    pub fn classes(&self) -> usize {
        self.best.classes()
    }
}

/// `n p^n`; every evaluation of the model goes through this so equal vectors
/// produce bit-identical sums.
#[inline]
pub(crate) fn class_output(n: usize, p: f64) -> f64 {
    n as f64 * p.powi(n as i32)
}

/// Output of a class-size vector, `sum n_i p^{n_i}`, with `V` factored out.
pub fn evaluate_output(sizes: &ClassSizeVector, p: f64) -> Result<f64> {
    check_probability(p)?;
    Ok(output_unchecked(sizes.sizes(), p))
}

pub(crate) fn output_unchecked(sizes: &[usize], p: f64) -> f64 {
    sizes.iter().map(|&n| class_output(n, p)).sum()
}

/// Per-class profit `V sum n_i p^{n_i} - m W`.
pub fn evaluate_profit(inst: &Instance, sizes: &ClassSizeVector) -> Result<f64> {
    if sizes.students() != inst.students() {
        return Err(Error::invalid(format!(
            "class sizes sum to {} but the school has {} students",
            sizes.students(),
            inst.students()
        )));
    }
    Ok(profit_unchecked(inst, sizes.sizes()))
}

pub(crate) fn profit_unchecked(inst: &Instance, sizes: &[usize]) -> f64 {
    inst.unit_value * output_unchecked(sizes, inst.p) - sizes.len() as f64 * inst.teacher_cost
}

/// Lazear's profit `Z V p^{Z/m} - m W`; `m` need not divide `Z`.
pub fn evaluate_lazear(inst: &Instance, classes: usize) -> Result<f64> {
    if classes == 0 || classes > inst.students() {
        return Err(Error::invalid(format!(
            "class count must be in 1..={}, got {classes}",
            inst.students()
        )));
    }
    let z = inst.students() as f64;
    let m = classes as f64;
    Ok(z * inst.unit_value * inst.p.powf(z / m) - m * inst.teacher_cost)
}

/// Outcome of comparing an optimum of the per-class profit with the Lazear
/// profit at the same class count.
#[derive(Debug, Clone, PartialEq)]
pub struct LazearComparison {
    pub classes: usize,
    pub alt_profit: f64,
    pub lazear_profit: f64,
    /// `lazear_profit - alt_profit`.
    pub gap: f64,
    /// Integer maximiser of the reduced Lazear objective (smallest on ties).
    pub reduced_optimum: usize,
    /// `-a = -Z ln p`.
    pub neg_a: f64,
    pub hypothesis_met: bool,
    /// `p = 1` or `m` divides `Z`: the two profits must coincide.
    pub equality_expected: bool,
    /// `None` when the hypothesis fails; otherwise whether the gap has the
    /// predicted sign and vanishes exactly in the predicted cases.
    pub holds: Option<bool>,
}

/// Absolute tolerance used for "equal profits" in [`lazear_dominates`], per
/// unit of `Z V`.
pub const LAZEAR_EQUALITY_TOL: f64 = 1e-12;

pub fn lazear_dominates(inst: &Instance, result: &SolveResult) -> Result<LazearComparison> {
    if !result.profitable {
        return Err(Error::HypothesisUnmet(
            "the school is not profitable".into(),
        ));
    }
    let classes = result.classes();
    let alt_profit = evaluate_profit(inst, &result.best)?;
    let lazear_profit = evaluate_lazear(inst, classes)?;
    let reduced = inst.reduced();
    let neg_a = -reduced.a;
    let reduced_optimum = reduced.best_class_count(inst.students());
    let hypothesis_met = classes == 1 || classes as f64 > neg_a;
    let equality_expected = inst.p() == 1.0 || inst.students() % classes == 0;
    let gap = lazear_profit - alt_profit;
    let tol = LAZEAR_EQUALITY_TOL * inst.students() as f64 * inst.unit_value();
    let holds = hypothesis_met.then(|| {
        if equality_expected {
            gap.abs() <= tol
        } else {
            gap > tol
        }
    });
    Ok(LazearComparison {
        classes,
        alt_profit,
        lazear_profit,
        gap,
        reduced_optimum,
        neg_a,
        hypothesis_met,
        equality_expected,
        holds,
    })
}
