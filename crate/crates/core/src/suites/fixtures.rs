//! Worked examples quoted with numbers.

use super::SuiteReport;
use crate::multitype::{solve_multitype_bruteforce, AllocationMatrix, MultiTypeInstance};
use crate::regions::gamma_counterexample;
use crate::solver::{fixed_class_count_best, solve_balanced, solve_bruteforce};
use crate::{evaluate_output, evaluate_profit, ClassSizeVector, Instance};

pub fn worked_examples() -> SuiteReport {
    let mut r = SuiteReport::new("worked examples");

    // an unprofitable class inside a profitable school
    let inst = Instance::new(5, 0.77, 1.2).expect("valid");
    let opt = solve_bruteforce(&inst).expect("small");
    r.check(opt.best.sizes() == [2, 3], || {
        format!("Z=5 p=.77 W=1.2 optimum {}", opt.best)
    });
    let small = 2.0 * 0.77f64.powi(2) - 1.2;
    let large = 3.0 * 0.77f64.powi(3) - 1.2;
    r.check((small + 0.0142).abs() <= 1e-4, || {
        format!("2p^2 - W = {small}")
    });
    r.check((large - 0.169599).abs() <= 1e-4, || {
        format!("3p^3 - W = {large}")
    });
    r.check((opt.profit - 0.155399).abs() <= 1e-6, || {
        format!("profit {}", opt.profit)
    });
    r.check(solve_balanced(&inst) == opt, || {
        "balanced solver disagrees at Z=5 p=.77".into()
    });

    match gamma_counterexample() {
        Ok(g) => {
            r.check(g.before.optimal_m == 2 && g.before.profitable, || {
                format!("p=.60: {:?}", g.before)
            });
            r.check(g.after.optimal_m == 3 && g.after.profitable, || {
                format!("p=.62: {:?}", g.after)
            });
            let low =
                solve_bruteforce(&Instance::new(5, 0.60, 0.673).expect("valid")).expect("small");
            let high =
                solve_bruteforce(&Instance::new(5, 0.62, 0.673).expect("valid")).expect("small");
            r.check(low.best.sizes() == [2, 3], || {
                format!("p=.60 vector {}", low.best)
            });
            r.check(high.best.sizes() == [1, 2, 2], || {
                format!("p=.62 vector {}", high.best)
            });
        }
        Err(e) => r.check(false, || format!("gamma example: {e}")),
    }

    let hundred = Instance::new(100, 0.95, 1.0).expect("valid");
    match fixed_class_count_best(&hundred, 2) {
        Ok(best) => {
            r.check(best.sizes() == [23, 77], || {
                format!("two-class optimum {best}")
            });
            let out = evaluate_output(&best, 0.95).unwrap_or(f64::NAN);
            let even = ClassSizeVector::new(vec![50, 50]).expect("valid");
            let out_even = evaluate_output(&even, 0.95).unwrap_or(f64::NAN);
            r.check((out - 8.55).abs() <= 0.01, || {
                format!("(23,77) output {out}")
            });
            r.check((out_even - 7.69).abs() <= 0.01, || {
                format!("(50,50) output {out_even}")
            });
            let p_best = evaluate_profit(&hundred, &best).unwrap_or(f64::NAN);
            let p_even = evaluate_profit(&hundred, &even).unwrap_or(f64::NAN);
            r.check(p_best > p_even, || "(50,50) should be worse".into());
        }
        Err(e) => r.check(false, || format!("two-class scan: {e}")),
    }

    let multi = MultiTypeInstance::new(vec![0.8, 0.5], vec![3, 3], 0.51).expect("valid");
    match solve_multitype_bruteforce(&multi) {
        Ok(best) => {
            r.check((best.profit - 1.05).abs() <= 0.005, || {
                format!("mixed profit {}", best.profit)
            });
            r.check(best.best.mixed_classes().len() == 1, || {
                format!("mixed classes in {}", best.best)
            });
            r.check(best.best.class_sizes() == [2, 2, 2], || {
                format!("class sizes of {}", best.best)
            });
            let quoted =
                AllocationMatrix::from_rows(&[vec![0, 2, 1], vec![2, 0, 1]]).expect("valid");
            let v = crate::multitype::evaluate_multitype(&multi, &quoted).unwrap_or(f64::NAN);
            r.check((v - best.profit).abs() <= 1e-12, || {
                format!("quoted allocation scores {v}")
            });
        }
        Err(e) => r.check(false, || format!("mixed example: {e}")),
    }
    r
}
