//! Schools with several student types, each with its own probability of
//! not disrupting.
//!
//! An allocation is an `s x m` matrix `n_{i,j}`: row `i` counts type `i`,
//! column `j` is a class. Class `j` contributes
//! `V N_j prod_i p_i^{n_{i,j}}` with `N_j` its size, and each class costs `W`.

pub mod structure;

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{check_probability, Instance};

pub use structure::{
    cycle_break_improve, improve_to_forest, segregated_blocks_check, singleton_bound_check,
    verify_structure, BipartiteStructure, SegregatedBlock, SingletonReport, StructureReport,
};

pub const DEFAULT_MULTITYPE_CAP: usize = 12;
pub const MAX_TYPES: usize = 4;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultiTypeInstance {
    probs: Vec<f64>,
    counts: Vec<usize>,
    teacher_cost: f64,
    unit_value: f64,
}

impl MultiTypeInstance {
    pub fn new(probs: Vec<f64>, counts: Vec<usize>, teacher_cost: f64) -> Result<Self> {
        Self::with_value(probs, counts, teacher_cost, 1.0)
    }

    pub fn with_value(
        probs: Vec<f64>,
        counts: Vec<usize>,
        teacher_cost: f64,
        unit_value: f64,
    ) -> Result<Self> {
        if probs.is_empty() || probs.len() != counts.len() {
            return Err(Error::invalid(format!(
                "need one count per type, got {} probabilities and {} counts",
                probs.len(),
                counts.len()
            )));
        }
        for &p in &probs {
            check_probability(p)?;
        }
        if counts.iter().any(|&a| a == 0) {
            return Err(Error::invalid("every type needs at least one student"));
        }
        if !(teacher_cost > 0.0 && teacher_cost.is_finite()) {
            return Err(Error::invalid(format!(
                "W must be positive, got {teacher_cost}"
            )));
        }
        if !(unit_value > 0.0 && unit_value.is_finite()) {
            return Err(Error::invalid(format!(
                "V must be positive, got {unit_value}"
            )));
        }
        Ok(Self {
            probs,
            counts,
            teacher_cost,
            unit_value,
        })
    }

    /// The single-type school as a one-row instance.
    pub fn from_single(inst: &Instance) -> Self {
        Self {
            probs: vec![inst.p()],
            counts: vec![inst.students()],
            teacher_cost: inst.teacher_cost(),
            unit_value: inst.unit_value(),
        }
    }

    pub fn types(&self) -> usize {
        self.probs.len()
    }

    pub fn students(&self) -> usize {
        self.counts.iter().sum()
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn teacher_cost(&self) -> f64 {
        self.teacher_cost
    }

    pub fn unit_value(&self) -> f64 {
        self.unit_value
    }
}

/// Class composition, one count per type.
pub type Column = Vec<usize>;

fn column_order(a: &Column, b: &Column) -> Ordering {
    let sa: usize = a.iter().sum();
    let sb: usize = b.iter().sum();
    sa.cmp(&sb).then_with(|| a.cmp(b))
}

/// Allocation with columns kept in canonical order: by class size, then
/// by composition.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AllocationMatrix {
    types: usize,
    columns: Vec<Column>,
}

impl AllocationMatrix {
    pub fn from_columns(types: usize, mut columns: Vec<Column>) -> Result<Self> {
        if types == 0 {
            return Err(Error::invalid("allocation needs at least one type"));
        }
        if columns.is_empty() {
            return Err(Error::invalid("allocation needs at least one class"));
        }
        for c in &columns {
            if c.len() != types {
                return Err(Error::invalid(format!(
                    "class {c:?} does not have {types} entries"
                )));
            }
            if c.iter().all(|&n| n == 0) {
                return Err(Error::invalid("empty class"));
            }
        }
        columns.sort_by(column_order);
        Ok(Self { types, columns })
    }

    /// One row per type, one entry per class.
    pub fn from_rows(rows: &[Vec<usize>]) -> Result<Self> {
        let Some(first) = rows.first() else {
            return Err(Error::invalid("allocation needs at least one type"));
        };
        if rows.iter().any(|r| r.len() != first.len()) {
            return Err(Error::invalid("rows have different lengths"));
        }
        let columns = (0..first.len())
            .map(|j| rows.iter().map(|r| r[j]).collect())
            .collect();
        Self::from_columns(rows.len(), columns)
    }

    pub fn types(&self) -> usize {
        self.types
    }

    pub fn classes(&self) -> usize {
        self.columns.len()
    }

    pub fn columns(&self) -> &[Column] {
        &self.columns
    }

    pub fn entry(&self, i: usize, j: usize) -> usize {
        self.columns[j][i]
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        (0..self.types)
            .map(|i| self.columns.iter().map(|c| c[i]).collect())
            .collect()
    }

    pub fn row_sums(&self) -> Vec<usize> {
        (0..self.types)
            .map(|i| self.columns.iter().map(|c| c[i]).sum())
            .collect()
    }

    pub fn class_sizes(&self) -> Vec<usize> {
        self.columns.iter().map(|c| c.iter().sum()).collect()
    }

    /// Indices of classes holding at least two types.
    pub fn mixed_classes(&self) -> Vec<usize> {
        (0..self.columns.len())
            .filter(|&j| self.columns[j].iter().filter(|&&n| n > 0).count() >= 2)
            .collect()
    }

    pub fn singleton_classes(&self) -> usize {
        self.class_sizes().iter().filter(|&&n| n == 1).count()
    }

    pub fn check_feasible(&self, inst: &MultiTypeInstance) -> Result<()> {
        if self.types != inst.types() {
            return Err(Error::invalid(format!(
                "allocation has {} types, instance {}",
                self.types,
                inst.types()
            )));
        }
        if self.row_sums() != inst.counts() {
            return Err(Error::invalid(format!(
                "row sums {:?} differ from type counts {:?}",
                self.row_sums(),
                inst.counts()
            )));
        }
        Ok(())
    }

    fn tie_key(&self) -> (usize, usize) {
        (self.classes(), self.mixed_classes().len())
    }

    /// Fewer classes, then fewer mixed classes, then canonical columns.
    pub fn tie_order(&self, other: &Self) -> Ordering {
        self.tie_key().cmp(&other.tie_key()).then_with(|| {
            for (a, b) in self.columns.iter().zip(&other.columns) {
                match column_order(a, b) {
                    Ordering::Equal => continue,
                    o => return o,
                }
            }
            Ordering::Equal
        })
    }
}

/// Rows separated by `;`, entries by `,`, e.g. `0,2,1;2,0,1`.
impl fmt::Display for AllocationMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .rows()
            .iter()
            .map(|r| {
                r.iter()
                    .map(|n| n.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            })
            .collect();
        write!(f, "{}", rows.join(";"))
    }
}

impl FromStr for AllocationMatrix {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let rows = s
            .split(';')
            .map(|row| {
                row.split(',')
                    .map(|x| {
                        x.trim()
                            .parse::<usize>()
                            .map_err(|_| Error::Parse(format!("bad entry {x:?}")))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(&rows)
    }
}

/// `N_j prod_i p_i^{n_{i,j}}`; with one type this is bit-identical to the
/// single-type class output.
fn column_output(probs: &[f64], column: &[usize]) -> f64 {
    let size: usize = column.iter().sum();
    let mut product = 1.0;
    for (&p, &n) in probs.iter().zip(column) {
        if n > 0 {
            product *= p.powi(n as i32);
        }
    }
    size as f64 * product
}

pub(crate) fn objective_unchecked(inst: &MultiTypeInstance, alloc: &AllocationMatrix) -> f64 {
    let output: f64 = alloc
        .columns
        .iter()
        .map(|c| column_output(&inst.probs, c))
        .sum();
    inst.unit_value * output - alloc.classes() as f64 * inst.teacher_cost
}

pub fn evaluate_multitype(inst: &MultiTypeInstance, alloc: &AllocationMatrix) -> Result<f64> {
    alloc.check_feasible(inst)?;
    Ok(objective_unchecked(inst, alloc))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultiTypeResult {
    pub best: AllocationMatrix,
    pub profit: f64,
}

pub fn solve_multitype_bruteforce(inst: &MultiTypeInstance) -> Result<MultiTypeResult> {
    solve_multitype_bruteforce_with_cap(inst, DEFAULT_MULTITYPE_CAP)
}

/// Every multiset of non-empty columns whose rows sum to the type counts.
pub fn solve_multitype_bruteforce_with_cap(
    inst: &MultiTypeInstance,
    cap: usize,
) -> Result<MultiTypeResult> {
    if inst.students() > cap {
        return Err(Error::Capacity {
            what: "Z",
            value: inst.students(),
            cap,
        });
    }
    if inst.types() > MAX_TYPES {
        return Err(Error::Capacity {
            what: "s",
            value: inst.types(),
            cap: MAX_TYPES,
        });
    }
    let mut candidates: Vec<Column> = vec![Vec::new()];
    for &a in inst.counts() {
        candidates = candidates
            .into_iter()
            .flat_map(|prefix| {
                (0..=a).map(move |n| {
                    let mut c = prefix.clone();
                    c.push(n);
                    c
                })
            })
            .collect();
    }
    candidates.retain(|c| c.iter().any(|&n| n > 0));
    candidates.sort_by(column_order);
    let sizes: Vec<usize> = candidates.iter().map(|c| c.iter().sum()).collect();
    let outputs: Vec<f64> = candidates
        .iter()
        .map(|c| column_output(inst.probs(), c))
        .collect();

    let mut search = Search {
        inst,
        candidates: &candidates,
        sizes: &sizes,
        outputs: &outputs,
        chosen: Vec::new(),
        best: None,
    };
    let mut remaining = inst.counts().to_vec();
    search.descend(0, &mut remaining, inst.students(), 0.0);
    let (best, profit) = search.best.expect("singleton classes are always feasible");
    Ok(MultiTypeResult { best, profit })
}

struct Search<'a> {
    inst: &'a MultiTypeInstance,
    candidates: &'a [Column],
    sizes: &'a [usize],
    outputs: &'a [f64],
    chosen: Vec<usize>,
    best: Option<(AllocationMatrix, f64)>,
}

impl Search<'_> {
    fn descend(&mut self, start: usize, remaining: &mut [usize], left: usize, output: f64) {
        if left == 0 {
            self.offer(output);
            return;
        }
        for idx in start..self.candidates.len() {
            if self.sizes[idx] > left {
                break;
            }
            let col = &self.candidates[idx];
            if col.iter().zip(remaining.iter()).any(|(&n, &r)| n > r) {
                continue;
            }
            remaining.iter_mut().zip(col).for_each(|(r, &n)| *r -= n);
            self.chosen.push(idx);
            self.descend(
                idx,
                remaining,
                left - self.sizes[idx],
                output + self.outputs[idx],
            );
            self.chosen.pop();
            remaining.iter_mut().zip(col).for_each(|(r, &n)| *r += n);
        }
    }

    fn offer(&mut self, output: f64) {
        let profit =
            self.inst.unit_value * output - self.chosen.len() as f64 * self.inst.teacher_cost;
        let better = match &self.best {
            None => true,
            Some((_, b)) if profit > *b => true,
            Some((_, b)) if profit < *b => false,
            Some((incumbent, _)) => self.matrix().tie_order(incumbent) == Ordering::Less,
        };
        if better {
            self.best = Some((self.matrix(), profit));
        }
    }

    fn matrix(&self) -> AllocationMatrix {
        AllocationMatrix {
            types: self.inst.types(),
            columns: self
                .chosen
                .iter()
                .map(|&i| self.candidates[i].clone())
                .collect(),
        }
    }
}
