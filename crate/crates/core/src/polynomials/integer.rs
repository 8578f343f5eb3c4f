//! Exact integer facts about balanced vectors: floor ordering, the
//! second difference of the square sums `S(k)`, and when consecutive
//! marginal polynomials coincide.

use crate::error::{Error, Result};
use crate::solver::balanced::BalancedVector;

/// `S(k) = (k - r_k) q_k^2 + r_k (q_k + 1)^2`, which is also `V'(Q_k, 1)`.
pub fn square_sum(students: usize, k: usize) -> Result<i64> {
    Ok(BalancedVector::new(students, k)?.square_sum())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SecondDifference {
    pub k: usize,
    pub prev: i64,
    pub current: i64,
    pub next: i64,
    /// `S(k - 1) + S(k + 1) == 2 S(k)`.
    pub equal: bool,
}

impl SecondDifference {
    pub fn value(&self) -> i64 {
        self.prev + self.next - 2 * self.current
    }
}

/// `(S(k - 1), S(k), S(k + 1))` for `2 <= k <= Z - 1`.
pub fn second_difference_s(students: usize, k: usize) -> Result<SecondDifference> {
    if k < 2 || k + 1 > students {
        return Err(Error::invalid(format!(
            "second difference needs 2 <= k <= Z - 1 (Z = {students}), got {k}"
        )));
    }
    let prev = square_sum(students, k - 1)?;
    let current = square_sum(students, k)?;
    let next = square_sum(students, k + 1)?;
    Ok(SecondDifference {
        k,
        prev,
        current,
        next,
        equal: prev + next == 2 * current,
    })
}

/// Which of the two equality patterns for the second difference applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FlatCase {
    /// `q_{k-1} = q_k = q_{k+1}`.
    SameFloor,
    /// `k = Z/d + 1` with `d | Z`, `d >= 2`, `Z >= 2d(d - 1)`,
    /// `q_{k+1} = q_k = d - 1` and `q_{k-1} = d`.
    DivisorStep { d: usize },
}

/// Structural conditions under which `S(k-1) + S(k+1) = 2 S(k)`.
pub fn flat_case(students: usize, k: usize) -> Result<Option<FlatCase>> {
    if k < 2 || k + 1 > students {
        return Err(Error::invalid(format!("needs 2 <= k <= Z - 1, got {k}")));
    }
    let z = students;
    let q = |j: usize| z / j;
    if q(k - 1) == q(k) && q(k) == q(k + 1) {
        return Ok(Some(FlatCase::SameFloor));
    }
    if z % (k - 1) == 0 {
        let d = z / (k - 1);
        if d >= 2 && z >= 2 * d * (d - 1) && q(k + 1) == d - 1 && q(k) == d - 1 && q(k - 1) == d {
            return Ok(Some(FlatCase::DivisorStep { d }));
        }
    }
    Ok(None)
}

/// `f_k'(1) = S(k) - S(k - 1)`.
pub fn marginal_slope_at_one(students: usize, k: usize) -> Result<i64> {
    if k < 2 {
        return Err(Error::invalid("slope needs k >= 2"));
    }
    Ok(square_sum(students, k)? - square_sum(students, k - 1)?)
}
