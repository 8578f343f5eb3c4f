//! Ordering of the crossing roots `p_{i,j}` of the marginal family.
//!
//! Checked claims, for indices `i, j, k` of the marginal family:
//!
//! - if `i > k + 1` then `p_{i,k} <= p_{k,k+1}`;
//! - if `i < k` then `p_{i,k+1} >= p_{k,k+1}`;
//! - if `k >= j` then `p_{i,k} <= p_{i,j}`;
//! - if `f_i != f_2` then `p_{2,i} <= p_{2,1}`, index 1 standing for `V(Q_1)`.
//!
//! Findings are reported, never asserted.

use std::collections::BTreeMap;
use std::io::Write;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::format::sig12;
use crate::polynomials::roots::{crossing_root, Crossing, CrossingRoot};
use crate::solver::max_paired_classes;

pub const MAX_SCAN_STUDENTS: usize = 200;
/// A claimed `lhs <= rhs` fails when `rhs - lhs` falls below `-COMPARISON_TOLERANCE`.
pub const COMPARISON_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Claim {
    BelowNeighbour,
    AboveNeighbour,
    MonotoneInIndex,
    SecondVsFirst,
}

impl Claim {
    pub fn name(self) -> &'static str {
        match self {
            Claim::BelowNeighbour => "below-neighbour",
            Claim::AboveNeighbour => "above-neighbour",
            Claim::MonotoneInIndex => "monotone-in-index",
            Claim::SecondVsFirst => "second-vs-first",
        }
    }
}

/// A claimed inequality `p_lhs <= p_rhs`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Comparison {
    pub students: usize,
    pub claim: Claim,
    pub lhs: (usize, usize),
    pub rhs: (usize, usize),
    /// `p_rhs - p_lhs`.
    pub margin: f64,
    /// Both roots came from a single + to - bracket.
    pub certified: bool,
}

impl Comparison {
    pub fn violated(&self) -> bool {
        self.margin < -COMPARISON_TOLERANCE
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RootStatus {
    Ok,
    Violation,
    EqualFunctions,
    Uncertified,
}

impl RootStatus {
    pub fn name(self) -> &'static str {
        match self {
            RootStatus::Ok => "ok",
            RootStatus::Violation => "violation",
            RootStatus::EqualFunctions => "equal-functions",
            RootStatus::Uncertified => "uncertified",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootLine {
    pub students: usize,
    pub i: usize,
    pub j: usize,
    pub p: Option<f64>,
    /// Smallest margin over the comparisons this root takes part in.
    pub margin: Option<f64>,
    pub status: RootStatus,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConjectureReport {
    pub lines: Vec<RootLine>,
    pub comparisons: Vec<Comparison>,
}

impl ConjectureReport {
    pub fn violations(&self) -> Vec<&Comparison> {
        self.comparisons.iter().filter(|c| c.violated()).collect()
    }

    pub fn violation_free(&self) -> bool {
        self.comparisons.iter().all(|c| !c.violated())
    }

    /// Every root that exists was isolated from a single clean bracket.
    pub fn all_certified(&self) -> bool {
        self.lines
            .iter()
            .all(|l| l.status != RootStatus::Uncertified)
    }

    pub fn status(&self) -> &'static str {
        if self.violation_free() {
            "VIOLATION-FREE"
        } else {
            "VIOLATIONS-FOUND"
        }
    }

    /// `Z,i,j,p_ij,margin,status` lines under a header, then the overall status.
    pub fn write<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "Z,i,j,p_ij,margin,status")?;
        for l in &self.lines {
            writeln!(
                out,
                "{},{},{},{},{},{}",
                l.students,
                l.i,
                l.j,
                l.p.map(sig12).unwrap_or_default(),
                l.margin.map(sig12).unwrap_or_default(),
                l.status.name()
            )?;
        }
        for c in self.violations() {
            writeln!(
                out,
                "# violation Z={} {}: p_{},{} = {} exceeds p_{},{} by {}",
                c.students,
                c.claim.name(),
                c.lhs.0,
                c.lhs.1,
                sig12(c.margin.abs()),
                c.rhs.0,
                c.rhs.1,
                sig12(-c.margin)
            )?;
        }
        writeln!(out, "# status {}", self.status())?;
        Ok(())
    }
}

fn key(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}

fn scan_one(z: usize) -> Result<(Vec<RootLine>, Vec<Comparison>)> {
    let top = max_paired_classes(z) + 1;
    let pairs: Vec<(usize, usize)> = (1..=top)
        .flat_map(|i| (i + 1..=top).map(move |j| (i, j)))
        .collect();
    let found = pairs
        .par_iter()
        .map(|&(i, j)| crossing_root(z, i, j).map(|c| ((i, j), c)))
        .collect::<Result<Vec<_>>>()?;
    let roots: BTreeMap<(usize, usize), Crossing> = found.into_iter().collect();
    let root = |a: usize, b: usize| -> Option<CrossingRoot> {
        roots.get(&key(a, b)).and_then(|c| c.root().copied())
    };

    let mut comparisons = Vec::new();
    let mut compare = |claim: Claim, lhs: (usize, usize), rhs: (usize, usize)| {
        if let (Some(l), Some(r)) = (root(lhs.0, lhs.1), root(rhs.0, rhs.1)) {
            comparisons.push(Comparison {
                students: z,
                claim,
                lhs: key(lhs.0, lhs.1),
                rhs: key(rhs.0, rhs.1),
                margin: r.p - l.p,
                certified: l.certified && r.certified,
            });
        }
    };
    for k in 2..top {
        for i in k + 2..=top {
            compare(Claim::BelowNeighbour, (i, k), (k, k + 1));
        }
        for i in 2..k {
            compare(Claim::AboveNeighbour, (k, k + 1), (i, k + 1));
        }
    }
    for i in 2..=top {
        for j in 2..=top {
            for k in j + 1..=top {
                if i != j && i != k {
                    compare(Claim::MonotoneInIndex, (i, k), (i, j));
                }
            }
        }
    }
    for i in 3..=top {
        compare(Claim::SecondVsFirst, (2, i), (2, 1));
    }

    let lines = pairs
        .iter()
        .map(|&(i, j)| {
            let (p, status) = match roots[&(i, j)] {
                Crossing::EqualFunctions => (None, RootStatus::EqualFunctions),
                Crossing::Root(r) => (
                    Some(r.p),
                    if r.certified {
                        RootStatus::Ok
                    } else {
                        RootStatus::Uncertified
                    },
                ),
            };
            let involved = comparisons
                .iter()
                .filter(|c| c.lhs == (i, j) || c.rhs == (i, j));
            let margin = involved
                .clone()
                .map(|c| c.margin)
                .fold(None, |m: Option<f64>, x| Some(m.map_or(x, |m| m.min(x))));
            let status = if status == RootStatus::Ok && involved.clone().any(Comparison::violated) {
                RootStatus::Violation
            } else {
                status
            };
            RootLine {
                students: z,
                i,
                j,
                p,
                margin,
                status,
            }
        })
        .collect();
    Ok((lines, comparisons))
}

/// Isolates every crossing root for each school size and checks the
/// ordering claims listed in the module docs.
pub fn conjecture_a_scan(students: impl IntoIterator<Item = usize>) -> Result<ConjectureReport> {
    let mut report = ConjectureReport {
        lines: Vec::new(),
        comparisons: Vec::new(),
    };
    let students: Vec<usize> = students.into_iter().collect();
    if let Some(&z) = students
        .iter()
        .find(|z| !(2..=MAX_SCAN_STUDENTS).contains(z))
    {
        return Err(Error::Capacity {
            what: "conjecture scan school size",
            value: z,
            cap: MAX_SCAN_STUDENTS,
        });
    }
    for z in students {
        let (lines, comparisons) = scan_one(z)?;
        report.lines.extend(lines);
        report.comparisons.extend(comparisons);
    }
    Ok(report)
}
