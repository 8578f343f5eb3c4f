//! Scalar inequalities on fixed grids, at absolute tolerance 1e-12.

use super::SuiteReport;
use crate::inequalities::{
    pair_exponential_sum, probe_threshold, split_value, swap_mean, tilted_power_sum,
};

pub const TOLERANCE: f64 = 1e-12;

/// Random points per probe run.
pub const PROBE_TRIALS: usize = 20_000;

fn unit_steps(n: usize) -> impl Iterator<Item = f64> {
    (0..=n).map(move |i| i as f64 / n as f64)
}

/// `e^x(1+ax) + e^{-x}(1-ax) <= 2` for `a <= -1/2`, strict away from 0.
pub fn pair_sum_bound() -> SuiteReport {
    let mut r = SuiteReport::new("pair exponential sum at most 2");
    for a in [-0.5, -0.55, -0.6, -0.75, -0.9, -1.0] {
        for i in -1000..=1000 {
            let x = i as f64 / 100.0;
            let v = pair_exponential_sum(a, x);
            r.check(v <= 2.0 + TOLERANCE, || format!("a={a} x={x}: {v}"));
            if i != 0 && x.abs() >= 0.1 {
                r.check(v < 2.0, || format!("a={a} x={x}: equality away from 0"));
            }
        }
    }
    r
}

/// For `-1/2 < a < 0` the pair sum exceeds 2 at some small `x > 0`.
pub fn pair_sum_excess() -> SuiteReport {
    let mut r = SuiteReport::new("pair exponential sum exceeds 2 above a = -1/2");
    for a in [-0.49, -0.4, -0.25, -0.1] {
        let hit = (1..=500)
            .map(|i| i as f64 / 1000.0)
            .find(|&x| pair_exponential_sum(a, x) > 2.0 + TOLERANCE);
        r.check(hit.is_some(), || format!("a={a}: no x in (0, 0.5] above 2"));
    }
    r
}

/// `lambda q^lambda + (1-lambda) q^{1-lambda} <= sqrt(q)` for
/// `q >= e^{-4}`.
pub fn split_bound() -> SuiteReport {
    let mut r = SuiteReport::new("two-class split at most the even split");
    let lo = (-4.0f64).exp();
    for qi in 0..=200 {
        let q = lo + (1.0 - lo) * qi as f64 / 200.0;
        for lambda in unit_steps(100) {
            let v = split_value(q, lambda);
            r.check(v <= q.sqrt() + TOLERANCE, || {
                format!("q={q} lambda={lambda}: {v} > {}", q.sqrt())
            });
            if (lambda - 0.5).abs() >= 0.1 && q <= 0.9 {
                r.check(v < q.sqrt(), || {
                    format!("q={q} lambda={lambda}: equality away from 1/2")
                });
            }
        }
    }
    r
}

/// `d^w(1+w) + d^{-w}(1-w) <= 2` for `e^{-2} <= d < 1`, `0 <= w <= 1`.
pub fn tilted_bound() -> SuiteReport {
    let mut r = SuiteReport::new("tilted power sum at most 2");
    let lo = (-2.0f64).exp();
    for di in 0..200 {
        let d = lo + (1.0 - lo) * di as f64 / 200.0;
        for w in unit_steps(100) {
            let v = tilted_power_sum(d, w);
            r.check(v <= 2.0 + TOLERANCE, || format!("d={d} w={w}: {v}"));
        }
    }
    r
}

/// Moving one student each way between two types sharing a class beats
/// the product: `(p^{u-1} q^{v+1} + p^{u+1} q^{v-1}) / 2 > p^u q^v`.
pub fn swap_strict() -> SuiteReport {
    let mut r = SuiteReport::new("swap mean strictly above the product");
    let grid: Vec<f64> = (1..=19).map(|i| i as f64 / 20.0).chain([0.99]).collect();
    for &p in &grid {
        for &q in &grid {
            if p == q {
                continue;
            }
            for u in 1..=8 {
                for v in 1..=8 {
                    let (mean, product) = swap_mean(p, q, u, v);
                    r.check(mean > product, || {
                        format!("p={p} q={q} u={u} v={v}: {mean} vs {product}")
                    });
                }
            }
        }
    }
    r
}

/// The probe finds a two-term violation at `a = -0.4` and none at
/// `a = -0.6`, nor for three terms at `a = -0.99`.
pub fn threshold_probe(seed: u64) -> SuiteReport {
    let mut r = SuiteReport::new("threshold probe");
    for (m, a, expect) in [(2, -0.4, true), (2, -0.6, false), (3, -0.99, false)] {
        match probe_threshold(m, a, PROBE_TRIALS, seed) {
            Ok(p) => r.check(p.violation_found == expect, || {
                format!(
                    "m={m} a={a}: violation {} (worst margin {})",
                    p.violation_found, p.worst_margin
                )
            }),
            Err(e) => r.check(false, || format!("m={m} a={a}: {e}")),
        }
    }
    r
}

pub fn all(seed: u64) -> SuiteReport {
    let mut r = SuiteReport::new("scalar inequalities");
    for part in [
        pair_sum_bound(),
        pair_sum_excess(),
        split_bound(),
        tilted_bound(),
        swap_strict(),
        threshold_probe(seed),
    ] {
        if !part.passed() {
            r.note(format!("failed: {}", part.name));
        }
        r.merge(part);
    }
    r
}
