//! The polynomial families compared when class counts change: the marginal
//! value `f_k`, the two/three/one-class comparison `f`, and its degenerate
//! companion `g`.

use crate::error::{Error, Result};
use crate::solver::balanced::{max_paired_classes, BalancedVector};

use super::roots::isolate_root;
use super::sparse::SparsePolynomial;

/// `V(Q_k, p)` for the balanced `k`-class vector.
pub fn balanced_value(students: usize, k: usize) -> Result<SparsePolynomial> {
    Ok(SparsePolynomial::class_value(
        &BalancedVector::new(students, k)?.sizes(),
    ))
}

/// Marginal value of the `k`-th class: `f_k = V(Q_k, .) - V(Q_{k-1}, .)` for
/// `2 <= k <= M_o + 1`.
pub fn build_f_k(students: usize, k: usize) -> Result<SparsePolynomial> {
    let upper = max_paired_classes(students) + 1;
    if k < 2 || k > upper || k > students {
        return Err(Error::invalid(format!(
            "f_k needs 2 <= k <= {} for Z = {students}, got k = {k}",
            upper.min(students)
        )));
    }
    Ok(&balanced_value(students, k)? - &balanced_value(students, k - 1)?)
}

/// `f_k` for `k >= 2` and `V(Q_1, .)` for `k = 1`; crossing points between
/// any two members of this family bound the optimal-class-count regions.
pub fn marginal(students: usize, k: usize) -> Result<SparsePolynomial> {
    if k == 1 {
        balanced_value(students, 1)
    } else {
        build_f_k(students, k)
    }
}

/// Three nearly equal parts of `Z >= 3`, largest first.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TripartiteSplit {
    pub students: usize,
    pub beta: [usize; 3],
    pub delta: [i64; 3],
    pub omega: f64,
}

impl TripartiteSplit {
    pub fn new(students: usize) -> Result<Self> {
        if students < 3 {
            return Err(Error::invalid(format!(
                "three-way split needs Z >= 3, got {students}"
            )));
        }
        let z = students;
        let beta = match z % 3 {
            0 => [z / 3, z / 3, z / 3],
            2 => [(z + 1) / 3, (z + 1) / 3, (z - 2) / 3],
            _ => [(z + 2) / 3, (z - 1) / 3, (z - 1) / 3],
        };
        let delta = beta.map(|b| z as i64 - 3 * b as i64);
        Ok(Self {
            students,
            beta,
            delta,
            omega: 1.0 / z as f64,
        })
    }

    pub fn sizes(&self) -> [usize; 3] {
        self.beta
    }
}

fn check_pair(students: usize, k: usize) -> Result<usize> {
    if students < 3 {
        return Err(Error::invalid(format!("needs Z >= 3, got {students}")));
    }
    if k == 0 || 2 * k > students {
        return Err(Error::invalid(format!(
            "smaller class k must be in 1..={}, got {k}",
            students / 2
        )));
    }
    Ok(students - k)
}

/// `f = 2 V((k, l), .) - V(Q_3, .) - V((Z), .)` with `l = Z - k`.
///
/// Positive exactly where a two-class school `(k, l)` can beat both the
/// three-class balanced school and a single class at the same `W`.
pub fn build_two_class_test(students: usize, k: usize) -> Result<SparsePolynomial> {
    let l = check_pair(students, k)?;
    let split = TripartiteSplit::new(students)?;
    let pair = SparsePolynomial::class_value(&[k, l]);
    Ok(
        &(&(&pair * 2) - &SparsePolynomial::class_value(&split.sizes()))
            - &SparsePolynomial::class_value(&[students]),
    )
}

/// `g = 2 V((k, l), .) - V((k, k, l - k), .) - V((Z), .)
///    = -(l - k) p^{l - k} + 2 l p^l - Z p^Z`, defined for `k < beta_3`.
pub fn build_split_test(students: usize, k: usize) -> Result<SparsePolynomial> {
    let l = check_pair(students, k)?;
    let split = TripartiteSplit::new(students)?;
    if k >= split.beta[2] {
        return Err(Error::invalid(format!(
            "g needs k < beta_3 = {} for Z = {students}, got k = {k}",
            split.beta[2]
        )));
    }
    let pair = SparsePolynomial::class_value(&[k, l]);
    Ok(
        &(&(&pair * 2) - &SparsePolynomial::class_value(&[k, k, l - k]))
            - &SparsePolynomial::class_value(&[students]),
    )
}

/// `100 (2x - x^4 - 0.98)`.
pub fn c_polynomial() -> SparsePolynomial {
    SparsePolynomial::from_terms([(0, -98), (1, 200), (4, -100)])
}

/// Numerical constants of the two-class analysis for a given `Z`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Constants {
    /// Root of `2x = x^4 + 0.98` in `(0, 1)`.
    pub c: f64,
    /// `c^{6/Z}`.
    pub p1: f64,
    /// Smaller root of `f'(1)` viewed as a quadratic in `k`.
    pub k_o: f64,
}

impl Constants {
    pub fn new(students: usize) -> Result<Self> {
        if students == 0 {
            return Err(Error::invalid("Z must be positive"));
        }
        let c = isolate_root(&c_polynomial(), 0.0, 1.0)?.value;
        let z = students as f64;
        let k_o = if students % 3 == 0 {
            z * (3.0 - 3f64.sqrt()) / 6.0
        } else {
            z / 2.0 - (3.0 * (z * z + 2.0)).sqrt() / 6.0
        };
        Ok(Self {
            c,
            p1: c.powf(6.0 / z),
            k_o,
        })
    }
}
