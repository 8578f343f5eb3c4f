use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Univariate polynomial with exact integer coefficients, stored as
/// `(exponent, coefficient)` pairs with strictly increasing exponents and no
/// zero coefficients.
///
/// Polynomials with rational coefficients are represented by an integer
/// multiple; roots and sign patterns are unchanged.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct SparsePolynomial {
    terms: Vec<(u32, i64)>,
}

impl SparsePolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    /// Combines like terms and drops zero coefficients.
    pub fn from_terms<I: IntoIterator<Item = (u32, i64)>>(terms: I) -> Self {
        let mut map = BTreeMap::new();
        for (e, c) in terms {
            *map.entry(e).or_insert(0i64) += c;
        }
        Self {
            terms: map.into_iter().filter(|&(_, c)| c != 0).collect(),
        }
    }

    /// `V(N, p) = sum n p^n` for a list of class sizes.
    pub fn class_value(sizes: &[usize]) -> Self {
        Self::from_terms(sizes.iter().map(|&n| (n as u32, n as i64)))
    }

    pub fn terms(&self) -> &[(u32, i64)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.last().map(|&(e, _)| e)
    }

    pub fn lowest_term(&self) -> Option<(u32, i64)> {
        self.terms.first().copied()
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.terms
            .iter()
            .map(|&(e, c)| c as f64 * x.powi(e as i32))
            .sum()
    }

    /// Exact value at `x = 1`.
    pub fn value_at_one(&self) -> i64 {
        self.terms.iter().map(|&(_, c)| c).sum()
    }

    pub fn derivative(&self) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .filter(|&&(e, _)| e > 0)
                .map(|&(e, c)| (e - 1, c * e as i64))
                .collect(),
        }
    }

    /// Exact `P'(1)`.
    pub fn derivative_at_one(&self) -> i64 {
        self.terms.iter().map(|&(e, c)| c * e as i64).sum()
    }

    /// Multiplicity of `x = 1` as a root, from exact derivatives.
    pub fn multiplicity_at_one(&self) -> usize {
        let mut current = self.clone();
        let mut mult = 0;
        while !current.is_zero() && current.value_at_one() == 0 {
            mult += 1;
            current = current.derivative();
        }
        mult
    }

    /// Sign alternations in the coefficient sequence ordered by exponent.
    pub fn sign_changes(&self) -> Result<usize> {
        if self.is_zero() {
            return Err(Error::invalid("sign changes of the zero polynomial"));
        }
        Ok(self
            .terms
            .windows(2)
            .filter(|w| (w[0].1 > 0) != (w[1].1 > 0))
            .count())
    }

    /// `x^deg P(1/x)`: positive roots above 1 map to roots in `(0, 1)`.
    pub fn reversed(&self) -> Self {
        let deg = self.degree().unwrap_or(0);
        Self::from_terms(self.terms.iter().map(|&(e, c)| (deg - e, c)))
    }

    pub fn scale(&self, factor: i64) -> Self {
        Self::from_terms(self.terms.iter().map(|&(e, c)| (e, c * factor)))
    }
}

impl Add for &SparsePolynomial {
    type Output = SparsePolynomial;

    fn add(self, rhs: Self) -> SparsePolynomial {
        SparsePolynomial::from_terms(self.terms.iter().chain(rhs.terms.iter()).copied())
    }
}

impl Neg for &SparsePolynomial {
    type Output = SparsePolynomial;

    fn neg(self) -> SparsePolynomial {
        SparsePolynomial {
            terms: self.terms.iter().map(|&(e, c)| (e, -c)).collect(),
        }
    }
}

impl Sub for &SparsePolynomial {
    type Output = SparsePolynomial;

    fn sub(self, rhs: Self) -> SparsePolynomial {
        SparsePolynomial::from_terms(
            self.terms
                .iter()
                .copied()
                .chain(rhs.terms.iter().map(|&(e, c)| (e, -c))),
        )
    }
}

impl Mul<i64> for &SparsePolynomial {
    type Output = SparsePolynomial;

    fn mul(self, rhs: i64) -> SparsePolynomial {
        self.scale(rhs)
    }
}

impl fmt::Display for SparsePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, &(e, c)) in self.terms.iter().enumerate() {
            let sign = if c < 0 {
                "-"
            } else if i > 0 {
                "+"
            } else {
                ""
            };
            if i > 0 {
                f.write_str(" ")?;
            }
            let mag = c.unsigned_abs();
            match e {
                0 => write!(f, "{sign}{mag}")?,
                1 => write!(f, "{sign}{mag}p")?,
                _ => write!(f, "{sign}{mag}p^{e}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn combines_and_drops_zeros() {
        let p = SparsePolynomial::from_terms([(3, 2), (1, 5), (3, -2), (0, 0)]);
        assert_eq!(p.terms(), &[(1, 5)]);
        assert!(SparsePolynomial::from_terms([(2, 1), (2, -1)]).is_zero());
    }

    #[test]
    fn sign_changes_of_marginal_polynomial() {
        let p = SparsePolynomial::from_terms([(3, 3), (4, 4), (7, -7)]);
        assert_eq!(p.sign_changes().unwrap(), 1);
        assert!(SparsePolynomial::zero().sign_changes().is_err());
    }

    #[test]
    fn exact_derivatives_at_one() {
        // 3p^3 + 4p^4 - 7p^7: value 0, derivative 9 + 16 - 49
        let p = SparsePolynomial::from_terms([(3, 3), (4, 4), (7, -7)]);
        assert_eq!(p.value_at_one(), 0);
        assert_eq!(p.derivative_at_one(), -24);
        assert_eq!(p.multiplicity_at_one(), 1);
        // (p - 1)^2 = p^2 - 2p + 1
        let sq = SparsePolynomial::from_terms([(0, 1), (1, -2), (2, 1)]);
        assert_eq!(sq.multiplicity_at_one(), 2);
    }

    #[test]
    fn display_is_readable() {
        let p = SparsePolynomial::from_terms([(3, 3), (4, 4), (7, -7)]);
        assert_eq!(p.to_string(), "3p^3 +4p^4 -7p^7");
    }

    proptest! {
        #[test]
        fn arithmetic_matches_pointwise(
            a in proptest::collection::vec((0u32..12, -20i64..20), 0..6),
            b in proptest::collection::vec((0u32..12, -20i64..20), 0..6),
            x in 0.0f64..1.0,
        ) {
            let pa = SparsePolynomial::from_terms(a);
            let pb = SparsePolynomial::from_terms(b);
            let sum = &pa + &pb;
            let diff = &pa - &pb;
            let scale = 1.0 + pa.eval(x).abs() + pb.eval(x).abs();
            prop_assert!((sum.eval(x) - (pa.eval(x) + pb.eval(x))).abs() <= 1e-12 * scale);
            prop_assert!((diff.eval(x) - (pa.eval(x) - pb.eval(x))).abs() <= 1e-12 * scale);
            prop_assert_eq!(&(&diff + &pb), &pa);
            prop_assert!(pa.terms().windows(2).all(|w| w[0].0 < w[1].0));
            prop_assert!(pa.terms().iter().all(|&(_, c)| c != 0));
        }
    }
}
