use crate::error::{Error, Result};
use crate::model::ClassSizeVector;

/// The nearly-equal `k`-class vector for `Z` students: `k - r` classes of
/// `q = floor(Z / k)` and `r = Z - k q` classes of `q + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BalancedVector {
    pub students: usize,
    pub k: usize,
    pub q: usize,
    pub r: usize,
}

impl BalancedVector {
    pub fn new(students: usize, k: usize) -> Result<Self> {
        if k == 0 || k > students {
            return Err(Error::invalid(format!(
                "class count must be in 1..={students}, got {k}"
            )));
        }
        Ok(Self {
            students,
            k,
            q: students / k,
            r: students % k,
        })
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut v = vec![self.q; self.k - self.r];
        v.extend(std::iter::repeat(self.q + 1).take(self.r));
        v
    }

    pub fn to_vector(&self) -> ClassSizeVector {
        ClassSizeVector::from_sorted(self.sizes())
    }

    /// Sum of squared class sizes, `(k - r) q^2 + r (q + 1)^2`.
    pub fn square_sum(&self) -> i64 {
        let (k, q, r) = (self.k as i64, self.q as i64, self.r as i64);
        (k - r) * q * q + r * (q + 1) * (q + 1)
    }
}

/// Largest class count an optimal profitable school can use short of one
/// class per student: `Z / 2` for even `Z`, `(Z + 1) / 2` for odd `Z`.
pub fn max_paired_classes(students: usize) -> usize {
    students.div_ceil(2)
}
