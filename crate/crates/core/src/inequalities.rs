//! Scalar inequalities behind the near-equality results, plus a randomized
//! probe for the threshold `A(m)` of `sum e^{x_i} (1 + a x_i) <= m`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `e^x (1 + a x) + e^{-x} (1 - a x)`; at most 2 whenever `a <= -1/2`.
pub fn pair_exponential_sum(a: f64, x: f64) -> f64 {
    x.exp() * (1.0 + a * x) + (-x).exp() * (1.0 - a * x)
}

/// `lambda q^lambda + (1 - lambda) q^{1 - lambda}`: output of a two-class
/// split with class shares `lambda`, `1 - lambda`, scaled by `1 / Z`.
pub fn split_value(q: f64, lambda: f64) -> f64 {
    lambda * q.powf(lambda) + (1.0 - lambda) * q.powf(1.0 - lambda)
}

/// `d^w (1 + w) + d^{-w} (1 - w)`.
pub fn tilted_power_sum(d: f64, w: f64) -> f64 {
    d.powf(w) * (1.0 + w) + d.powf(-w) * (1.0 - w)
}

/// Returns `(mean of the swapped products, original product)` for
/// `p^{u-1} q^{v+1}`, `p^{u+1} q^{v-1}` against `p^u q^v`.
pub fn swap_mean(p: f64, q: f64, u: i32, v: i32) -> (f64, f64) {
    let swapped = 0.5 * (p.powi(u - 1) * q.powi(v + 1) + p.powi(u + 1) * q.powi(v - 1));
    (swapped, p.powi(u) * q.powi(v))
}

/// `sum e^{x_i} (1 + a x_i)`.
pub fn exponential_sum(a: f64, xs: &[f64]) -> f64 {
    xs.iter().map(|&x| x.exp() * (1.0 + a * x)).sum()
}

/// A margin above this counts as a violation of `sum <= m`.
pub const PROBE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct ProbeReport {
    pub m: usize,
    pub a: f64,
    pub trials: usize,
    /// Largest `sum - m` seen over non-trivial feasible points.
    pub worst_margin: f64,
    pub witness: Vec<f64>,
    pub violation_found: bool,
}

/// Searches for `x` with `sum x_i = 0`, `x_i <= -1/a` and
/// `sum e^{x_i}(1 + a x_i) > m`.
///
/// Two families are tried: the symmetric `(x, -x, 0, ..., 0)` line on a
/// log-spaced grid, and `trials` random zero-sum points at mixed scales. A
/// clean report is evidence, not a certificate.
pub fn probe_threshold(m: usize, a: f64, trials: usize, seed: u64) -> crate::Result<ProbeReport> {
    if m < 2 {
        return Err(crate::Error::invalid("probe needs m >= 2"));
    }
    if !(a > -1.0 && a < 0.0) {
        return Err(crate::Error::invalid(format!(
            "a must lie in (-1, 0), got {a}"
        )));
    }
    let bound = -1.0 / a;
    let mut report = ProbeReport {
        m,
        a,
        trials,
        worst_margin: f64::NEG_INFINITY,
        witness: Vec::new(),
        violation_found: false,
    };
    let consider = |xs: &[f64], report: &mut ProbeReport| {
        if xs.iter().all(|&x| x == 0.0) || xs.iter().any(|&x| x > bound) {
            return;
        }
        let margin = exponential_sum(a, xs) - m as f64;
        if margin > report.worst_margin {
            report.worst_margin = margin;
            report.witness = xs.to_vec();
        }
    };

    let mut xs = vec![0.0; m];
    for step in 0..=4000 {
        // x from 1e-4 up to the feasibility bound
        let x = 1e-4 * (bound / 1e-4).powf(step as f64 / 4000.0);
        xs[0] = x;
        xs[1] = -x;
        consider(&xs, &mut report);
        xs[0] = -x;
        xs[1] = x;
        consider(&xs, &mut report);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let scales = [1e-3, 1e-2, 0.1, 0.5, 1.0, 3.0];
    for _ in 0..trials {
        let scale = scales[rng.gen_range(0..scales.len())];
        let mut point: Vec<f64> = (0..m)
            .map(|_| scale * (rng.gen::<f64>() * 2.0 - 1.0))
            .collect();
        let mean = point.iter().sum::<f64>() / m as f64;
        point.iter_mut().for_each(|x| *x -= mean);
        let max = point.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        if max > bound {
            let shrink = bound / max;
            point.iter_mut().for_each(|x| *x *= shrink);
        }
        consider(&point, &mut report);
    }
    report.violation_found = report.worst_margin > PROBE_TOLERANCE;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pair_sum_is_two_at_origin() {
        for a in [-0.9, -0.5, -0.1] {
            assert_eq!(pair_exponential_sum(a, 0.0), 2.0);
        }
    }

    #[test]
    fn pair_sum_exceeds_two_near_origin_above_half() {
        // second-order term is (1 + 2a) x^2
        let a = -0.25;
        let x = 0.1;
        assert!(pair_exponential_sum(a, x) > 2.0);
        assert!(pair_exponential_sum(-0.75, x) < 2.0);
    }

    #[test]
    fn split_value_peaks_at_half() {
        let q = 0.3;
        assert!((split_value(q, 0.5) - q.sqrt()).abs() < 1e-15);
        assert!(split_value(q, 0.3) < q.sqrt());
    }

    #[test]
    fn swap_mean_beats_product() {
        let (swapped, original) = swap_mean(0.8, 0.5, 2, 1);
        assert!(swapped > original);
    }

    #[test]
    fn probe_detects_two_class_threshold() {
        let above = probe_threshold(2, -0.4, 2000, 7).unwrap();
        assert!(above.violation_found, "{above:?}");
        let below = probe_threshold(2, -0.6, 2000, 7).unwrap();
        assert!(!below.violation_found, "{below:?}");
    }

    #[test]
    fn probe_rejects_bad_arguments() {
        assert!(probe_threshold(1, -0.5, 10, 0).is_err());
        assert!(probe_threshold(2, -1.0, 10, 0).is_err());
        assert!(probe_threshold(2, 0.0, 10, 0).is_err());
    }

    #[test]
    fn probe_is_deterministic_per_seed() {
        let a = probe_threshold(3, -0.7, 500, 11).unwrap();
        let b = probe_threshold(3, -0.7, 500, 11).unwrap();
        assert_eq!(a, b);
    }
}
