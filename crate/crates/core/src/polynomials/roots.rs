//! Sign scans and bisection on `(0, 1)`.
//!
//! Every root reported here comes from a bracket whose endpoint values have
//! opposite signs; bisection then runs until the bracket cannot shrink in
//! double precision, which is well inside the 1e-12 tolerance on `p`.

use crate::error::{Error, Result};
use crate::solver::balanced::max_paired_classes;

use super::families::{balanced_value, build_f_k, marginal};
use super::sparse::SparsePolynomial;

/// Root tolerance on `p`.
pub const ROOT_TOLERANCE: f64 = 1e-12;

/// Sample count of the dense sign scan on `(0, 1)`.
pub const DEFAULT_SCAN_POINTS: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IsolatedRoot {
    pub value: f64,
    /// `|P(value)|`.
    pub residual: f64,
    /// The endpoint values of the bracket had opposite signs.
    pub certified: bool,
}

pub fn isolate_root(poly: &SparsePolynomial, lo: f64, hi: f64) -> Result<IsolatedRoot> {
    if !(lo < hi) {
        return Err(Error::invalid(format!("empty interval [{lo}, {hi}]")));
    }
    let (mut lo, mut hi) = (lo, hi);
    let mut f_lo = poly.eval(lo);
    let f_hi = poly.eval(hi);
    if f_lo == 0.0 {
        return Ok(IsolatedRoot {
            value: lo,
            residual: 0.0,
            certified: true,
        });
    }
    if f_hi == 0.0 {
        return Ok(IsolatedRoot {
            value: hi,
            residual: 0.0,
            certified: true,
        });
    }
    if (f_lo > 0.0) == (f_hi > 0.0) {
        return Err(Error::RootNotBracketed { lo, hi });
    }
    let mut best = if f_lo.abs() < f_hi.abs() {
        (lo, f_lo)
    } else {
        (hi, f_hi)
    };
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = poly.eval(mid);
        if f_mid.abs() < best.1.abs() {
            best = (mid, f_mid);
        }
        if f_mid == 0.0 {
            break;
        }
        if (f_mid > 0.0) == (f_lo > 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Ok(IsolatedRoot {
        value: best.0,
        residual: best.1.abs(),
        certified: true,
    })
}

/// A sign change seen by the scan: `poly` has sign `left_positive` at `lo`
/// and the opposite sign at `hi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket {
    pub lo: f64,
    pub hi: f64,
    pub left_positive: bool,
}

/// Sample points strictly inside `(0, 1)`: a uniform grid plus a short
/// geometric tail towards 1, where most crossings of large schools sit.
fn unit_grid(points: usize) -> impl Iterator<Item = f64> {
    let n = points.max(2);
    (1..n).map(move |i| i as f64 / n as f64).chain(
        [1e-5, 1e-6]
            .into_iter()
            .filter(move |&t| t < 1.0 / n as f64)
            .map(|t| 1.0 - t),
    )
}

/// Sign changes of `poly` between consecutive nonzero samples in `(0, 1)`.
pub fn scan_unit_interval(poly: &SparsePolynomial, points: usize) -> Vec<Bracket> {
    let mut out = Vec::new();
    let mut last: Option<(f64, bool)> = None;
    for x in unit_grid(points) {
        let v = poly.eval(x);
        if v == 0.0 || !v.is_finite() {
            continue;
        }
        let positive = v > 0.0;
        if let Some((lx, lp)) = last {
            if lp != positive {
                out.push(Bracket {
                    lo: lx,
                    hi: x,
                    left_positive: lp,
                });
            }
        }
        last = Some((x, positive));
    }
    out
}

/// Odd-multiplicity roots in `(0, 1)` found by scan and bisection.
pub fn unit_interval_roots(poly: &SparsePolynomial, points: usize) -> Result<Vec<IsolatedRoot>> {
    scan_unit_interval(poly, points)
        .into_iter()
        .map(|b| isolate_root(poly, b.lo, b.hi))
        .collect()
}

/// Positive roots located numerically, for comparison with Descartes' bound.
#[derive(Debug, Clone, PartialEq)]
pub struct PositiveRoots {
    pub below_one: Vec<f64>,
    /// Exact multiplicity of the root at 1.
    pub at_one: usize,
    pub above_one: Vec<f64>,
}

impl PositiveRoots {
    pub fn count(&self) -> usize {
        self.below_one.len() + self.at_one + self.above_one.len()
    }
}

/// Scans `(0, 1)` directly and `(1, inf)` through the reversed polynomial;
/// rescans once at ten times the density if fewer roots than sign changes
/// turned up.
pub fn positive_roots(poly: &SparsePolynomial, points: usize) -> Result<PositiveRoots> {
    let bound = poly.sign_changes()?;
    let reversed = poly.reversed();
    let locate = |points: usize| -> Result<PositiveRoots> {
        Ok(PositiveRoots {
            below_one: unit_interval_roots(poly, points)?
                .into_iter()
                .map(|r| r.value)
                .collect(),
            at_one: poly.multiplicity_at_one(),
            above_one: unit_interval_roots(&reversed, points)?
                .into_iter()
                .map(|r| 1.0 / r.value)
                .collect(),
        })
    };
    let found = locate(points)?;
    if found.count() < bound {
        return locate(points * 10);
    }
    Ok(found)
}

/// Crossing point of two members of the marginal family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossingRoot {
    pub i: usize,
    pub j: usize,
    pub p: f64,
    pub residual: f64,
    /// Exactly one sign change of `f_j - f_i` was seen on the scan, from
    /// positive to negative, and the bisection bracket kept that sign pair.
    pub certified: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Crossing {
    Root(CrossingRoot),
    /// `f_i` and `f_j` are the same polynomial.
    EqualFunctions,
}

impl Crossing {
    pub fn root(&self) -> Option<&CrossingRoot> {
        match self {
            Crossing::Root(r) => Some(r),
            Crossing::EqualFunctions => None,
        }
    }
}

/// The crossing of `f_i` and `f_j` in `(0, 1)` for `1 <= i < j <= M_o + 1`,
/// where index 1 stands for `V(Q_1, .)`.
pub fn crossing_root(students: usize, i: usize, j: usize) -> Result<Crossing> {
    crossing_root_with(students, i, j, DEFAULT_SCAN_POINTS)
}

pub fn crossing_root_with(students: usize, i: usize, j: usize, points: usize) -> Result<Crossing> {
    if i == 0 || i >= j {
        return Err(Error::invalid(format!(
            "crossing needs 1 <= i < j, got ({i}, {j})"
        )));
    }
    let lower = marginal(students, i)?;
    let upper = marginal(students, j)?;
    if lower == upper {
        return Ok(Crossing::EqualFunctions);
    }
    let diff = &upper - &lower;
    crossing_of(&diff, points).map(|(p, residual, certified)| {
        Crossing::Root(CrossingRoot {
            i,
            j,
            p,
            residual,
            certified,
        })
    })
}

/// Root of a difference that should be positive near 0 and negative near 1.
fn crossing_of(diff: &SparsePolynomial, points: usize) -> Result<(f64, f64, bool)> {
    let brackets = scan_unit_interval(diff, points);
    let Some(b) = brackets.iter().find(|b| b.left_positive) else {
        return Err(Error::RootNotBracketed { lo: 0.0, hi: 1.0 });
    };
    let root = isolate_root(diff, b.lo, b.hi)?;
    Ok((
        root.value,
        root.residual,
        root.certified && brackets.len() == 1,
    ))
}

/// Maximum of `f_k` on `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeakPoint {
    pub k: usize,
    /// Where `f_k'` changes sign from + to -.
    pub s: f64,
    /// `f_k(s)`.
    pub value: f64,
    /// `(s_{k+1}, f_{k+1}(s_{k+1}))` when `f_{k+1}` is defined.
    pub next: Option<(f64, f64)>,
}

pub fn peak_point(students: usize, k: usize) -> Result<PeakPoint> {
    let (s, value) = peak_of(students, k)?;
    let next_k = k + 1;
    let next = if next_k <= max_paired_classes(students) + 1 && next_k <= students {
        Some(peak_of(students, next_k)?)
    } else {
        None
    };
    Ok(PeakPoint { k, s, value, next })
}

fn peak_of(students: usize, k: usize) -> Result<(f64, f64)> {
    let f = build_f_k(students, k)?;
    let (s, _, _) = crossing_of(&f.derivative(), DEFAULT_SCAN_POINTS)?;
    Ok((s, f.eval(s)))
}

/// Points where `W = V(Q_k, p) / k` meets `W = f_k(p)`, i.e. roots of
/// `(k - 1) V(Q_k, .) - k V(Q_{k-1}, .)` in `(0, 1)`.
pub fn junction_points(students: usize, k: usize) -> Result<Vec<f64>> {
    if k < 2 || k > students {
        return Err(Error::invalid(format!(
            "junction needs 2 <= k <= Z, got {k}"
        )));
    }
    let poly = &(&balanced_value(students, k)? * (k as i64 - 1))
        - &(&balanced_value(students, k - 1)? * k as i64);
    Ok(unit_interval_roots(&poly, DEFAULT_SCAN_POINTS)?
        .into_iter()
        .map(|r| r.value)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polynomials::families::c_polynomial;

    #[test]
    fn c_by_bisection() {
        let r = isolate_root(&c_polynomial(), 0.0, 1.0).unwrap();
        assert!((r.value - 0.52922).abs() < 5e-5);
        assert!(r.certified);
    }

    #[test]
    fn quarter_square_root() {
        let poly = SparsePolynomial::from_terms([(0, -1), (2, 4)]);
        let r = isolate_root(&poly, 0.0, 1.0).unwrap();
        assert!((r.value - 0.5).abs() <= ROOT_TOLERANCE);
    }

    #[test]
    fn unbracketed_interval_is_an_error() {
        let poly = SparsePolynomial::from_terms([(0, 1), (2, 4)]);
        assert_eq!(
            isolate_root(&poly, 0.0, 1.0),
            Err(Error::RootNotBracketed { lo: 0.0, hi: 1.0 })
        );
        assert!(isolate_root(&poly, 1.0, 0.0).is_err());
    }

    #[test]
    fn peak_of_two_term_marginal() {
        // f_3 = 6p^2 - 6p^3 for Z = 6, maximised at p = 2/3
        let peak = peak_point(6, 3).unwrap();
        assert!((peak.s - 2.0 / 3.0).abs() < 1e-12);
        assert!((peak.value - (6.0 * 4.0 / 9.0 - 6.0 * 8.0 / 27.0)).abs() < 1e-12);
        assert!(peak.next.is_some());
        assert!(peak_point(6, 4).unwrap().next.is_none());
    }

    #[test]
    fn peak_dominates_dense_grid() {
        for z in [5, 12, 23, 40] {
            for k in 2..=max_paired_classes(z) + 1 {
                let f = build_f_k(z, k).unwrap();
                let peak = peak_point(z, k).unwrap();
                for i in 0..=2000 {
                    let p = i as f64 / 2000.0;
                    assert!(f.eval(p) <= peak.value + 1e-12, "Z={z} k={k} p={p}");
                }
            }
        }
    }

    #[test]
    fn equal_marginals_are_detected_structurally() {
        // Z = 30: q_11 = q_12 = q_13 = 2
        assert_eq!(crossing_root(30, 12, 13).unwrap(), Crossing::EqualFunctions);
        // k = 11 = 30/3 + 1 with q_10 = 3, q_11 = q_12 = 2
        assert_eq!(crossing_root(30, 11, 12).unwrap(), Crossing::EqualFunctions);
        assert!(crossing_root(30, 10, 11).unwrap().root().is_some());
    }

    #[test]
    fn five_students_two_three_before_two_one() {
        let p23 = *crossing_root(5, 2, 3).unwrap().root().unwrap();
        let p12 = *crossing_root(5, 1, 2).unwrap().root().unwrap();
        assert!(p23.certified && p12.certified);
        assert!(p23.p < p12.p);
    }

    #[test]
    fn twelve_students_two_three_by_dense_sampling() {
        let diff = &build_f_k(12, 3).unwrap() - &build_f_k(12, 2).unwrap();
        // independent locate: finest sign change on a 1e6 grid
        let mut last = diff.eval(1e-6) > 0.0;
        let mut located = None;
        for i in 2..1_000_000 {
            let p = i as f64 * 1e-6;
            let pos = diff.eval(p) > 0.0;
            if pos != last {
                located = Some(p);
                break;
            }
            last = pos;
        }
        let located = located.unwrap();
        let r = *crossing_root(12, 2, 3).unwrap().root().unwrap();
        assert!(r.certified);
        assert!((r.p - located).abs() <= 1e-6, "{} vs {located}", r.p);
        assert!(r.residual < 1e-10);
    }

    #[test]
    fn crossing_argument_checks() {
        assert!(crossing_root(10, 3, 3).is_err());
        assert!(crossing_root(10, 0, 3).is_err());
        assert!(crossing_root(10, 2, 7).is_err());
    }

    #[test]
    fn junction_identity_at_meeting_points() {
        for z in [5, 8, 13, 24] {
            for k in 2..=max_paired_classes(z) {
                let hi = balanced_value(z, k).unwrap();
                let lo = balanced_value(z, k - 1).unwrap();
                for p in junction_points(z, k).unwrap() {
                    let a = lo.eval(p) / (k - 1) as f64;
                    let b = hi.eval(p) / k as f64;
                    assert!((a - b).abs() < 1e-10, "Z={z} k={k} p={p}");
                }
            }
        }
    }

    #[test]
    fn positive_roots_of_known_product() {
        // (p - 1/2)(p - 2)(p - 1) scaled: 2p^3 - 7p^2 + 7p - 2
        let poly = SparsePolynomial::from_terms([(0, -2), (1, 7), (2, -7), (3, 2)]);
        let roots = positive_roots(&poly, 1000).unwrap();
        assert_eq!(roots.at_one, 1);
        assert_eq!(roots.below_one.len(), 1);
        assert_eq!(roots.above_one.len(), 1);
        assert!((roots.below_one[0] - 0.5).abs() < 1e-12);
        assert!((roots.above_one[0] - 2.0).abs() < 1e-9);
    }
}
