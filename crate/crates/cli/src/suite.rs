//! The invariant suite run by `orderflow verify`.

use std::collections::HashSet;
use std::path::PathBuf;

use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use serde::Serialize;

use orderflow_core::ergodic::{derive_rng, random_order_with};
use orderflow_core::exact::{moment_curve_orientation, vandermonde_sign};
use orderflow_core::order::is_circular_realizable_bounded;
use orderflow_core::*;

type Check = std::result::Result<(), String>;

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub params: String,
    pub passed: bool,
    pub detail: String,
}

impl CheckResult {
    fn new(name: &str, params: String, outcome: Check) -> Self {
        let (passed, detail) = match outcome {
            Ok(()) => (true, String::new()),
            Err(d) => (false, d),
        };
        Self { name: name.to_string(), params, passed, detail }
    }

    pub fn line(&self) -> String {
        let status = if self.passed { "PASS" } else { "FAIL" };
        if self.detail.is_empty() {
            format!("{status} {} ({})", self.name, self.params)
        } else {
            format!("{status} {} ({}): {}", self.name, self.params, self.detail)
        }
    }
}

#[derive(Debug, Clone)]
pub struct SuiteParams {
    pub max_window: usize,
    pub seed: u64,
    pub random_cases: usize,
    pub fixtures: Vec<PathBuf>,
}

fn ensure(cond: bool, detail: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(detail())
    }
}

pub fn run_suite(p: &SuiteParams) -> Vec<CheckResult> {
    let max = p.max_window;
    let mut out = vec![
        CheckResult::new("bijection", format!("|W| <= {max}"), check_bijection(max)),
        CheckResult::new("action-laws", format!("cases={} |W| <= {max} k in 2..=3", p.random_cases), check_action(p)),
        CheckResult::new("sign-code-alternation", format!("|W| <= {max} k in 2..={}", max.min(4)), check_alternation(max)),
        CheckResult::new("code-equivariance", format!("cases={} |W| <= {max}", p.random_cases), check_equivariance(p)),
        CheckResult::new("circular-count", format!("n in 3..={}", max.min(5)), check_circular_count(max)),
        CheckResult::new("reversal-involution", format!("|W| <= {max}"), check_reversal(max)),
        CheckResult::new("moment-curve-sign", format!("cases={} k in 2..=5", p.random_cases), check_moment_curve(p)),
        CheckResult::new("cylinder-mass", format!("|W| <= {}", max.min(6)), check_cylinder_mass(max)),
    ];
    for path in &p.fixtures {
        out.push(CheckResult::new("fixture", path.display().to_string(), check_fixture(path)));
    }
    out
}

fn check_bijection(max: usize) -> Check {
    for n in 2..=max {
        for o in LinearOrder::all(&Window::range(0, n)) {
            let c = lin_order_to_config2(&o).map_err(|e| e.to_string())?;
            ensure(config2_is_linear_order(&c) == Ok(true), || format!("image of {o} is not a linear order"))?;
            ensure(config2_to_order(&c).as_ref() == Ok(&o), || format!("round trip of {o} failed"))?;
        }
    }
    Ok(())
}

fn random_perm(rng: &mut impl Rng, w: &Window) -> FinPerm {
    let mut points = w.elements().to_vec();
    points.push(w.max().unwrap_or(0) + 1 + rng.gen_range(0..3));
    let mut shuffled = points.clone();
    for i in (1..shuffled.len()).rev() {
        shuffled.swap(i, rng.gen_range(0..=i));
    }
    FinPerm::from_pairs(points.into_iter().zip(shuffled)).expect("shuffle is a bijection")
}

fn check_action(p: &SuiteParams) -> Check {
    let mut rng = derive_rng(p.seed, "verify-action", 0);
    for case in 0..p.random_cases {
        let n = rng.gen_range(0..=p.max_window);
        let k = rng.gen_range(2..=3);
        let w = Window::range(rng.gen_range(-5..5), n);
        let c = KConfig::from_fn(k, w.clone(), |_| Sign::from_bool(rng.gen())).map_err(|e| e.to_string())?;
        let (a, b) = (random_perm(&mut rng, &w), random_perm(&mut rng, &w));
        let composed = apply_perm(&a.compose(&b), &c).map_err(|e| e.to_string())?;
        let stepwise = apply_perm(&b, &c).and_then(|x| apply_perm(&a, &x)).map_err(|e| e.to_string())?;
        ensure(composed == stepwise, || format!("composition law fails in case {case}"))?;
        ensure(apply_perm(&FinPerm::identity(), &c).as_ref() == Ok(&c), || format!("identity moves case {case}"))?;
    }
    Ok(())
}

fn check_alternation(max: usize) -> Check {
    for k in 2..=4.min(max) {
        let code = sign_code(k).map_err(|e| e.to_string())?;
        for n in k..=max {
            for o in LinearOrder::all(&Window::range(0, n)) {
                let c = apply_code(&code, &o).map_err(|e| e.to_string())?;
                ensure(is_alternating(&c), || format!("sign-{k} image of {o} is not alternating"))?;
            }
        }
    }
    Ok(())
}

fn check_equivariance(p: &SuiteParams) -> Check {
    let mut rng = derive_rng(p.seed, "verify-equivar", 0);
    let max = p.max_window.max(2);
    for case in 0..p.random_cases {
        let k = rng.gen_range(2..=4.min(max));
        let n = rng.gen_range(k..=max);
        let o = random_order_with(&Window::range(rng.gen_range(-5..5), n), &mut rng);
        let a = random_perm(&mut rng, o.window());
        let code = sign_code(k).map_err(|e| e.to_string())?;
        let lhs = apply_code(&code, &o.relabel(&a)).map_err(|e| e.to_string())?;
        let rhs = apply_code(&code, &o).and_then(|c| apply_perm(&a, &c)).map_err(|e| e.to_string())?;
        ensure(lhs == rhs, || format!("sign-{k} code not equivariant in case {case}"))?;
    }
    Ok(())
}

fn check_circular_count(max: usize) -> Check {
    for n in 3..=max.min(5) {
        let images: HashSet<KConfig> = LinearOrder::all(&Window::range(0, n))
            .map(|o| circular_code(&o))
            .collect::<Result<_>>()
            .map_err(|e| e.to_string())?;
        let expected: usize = (1..n).product();
        ensure(images.len() == expected, || format!("n={n}: {} circular orders, expected {expected}", images.len()))?;
        for c in &images {
            ensure(is_circular_realizable(c) == Ok(true), || format!("n={n}: circular code not realizable"))?;
        }
    }
    Ok(())
}

fn check_reversal(max: usize) -> Check {
    for n in 2..=max {
        for o in LinearOrder::all(&Window::range(0, n)) {
            let r = reverse(&o);
            ensure(r != o && reverse(&r) == o, || format!("reversal of {o} is not a fixed-point-free involution"))?;
            let negated = lin_order_to_config2(&o).map(|c| c.negated());
            ensure(lin_order_to_config2(&r) == negated, || format!("reversal of {o} does not negate its config"))?;
        }
    }
    Ok(())
}

fn check_moment_curve(p: &SuiteParams) -> Check {
    let mut rng = derive_rng(p.seed, "verify-moment", 0);
    for k in 2..=5 {
        for _ in 0..p.random_cases {
            let mut pts: Vec<BigRational> = Vec::new();
            while pts.len() < k {
                let q = BigRational::new(rng.gen_range(-40i64..=40).into(), rng.gen_range(1i64..=9).into());
                if !pts.contains(&q) {
                    pts.push(q);
                }
            }
            let sign = moment_curve_orientation(&pts).map_err(|e| e.to_string())?;
            ensure(sign == vandermonde_sign(&pts), || format!("k={k}: determinant sign disagrees with sorting sign"))?;
        }
    }
    Ok(())
}

fn check_cylinder_mass(max: usize) -> Check {
    for n in 1..=max.min(6) {
        let total = LinearOrder::all(&Window::range(0, n)).fold(BigRational::zero(), |acc, o| acc + cylinder_measure(&o));
        ensure(total.is_one(), || format!("n={n}: total mass {total}"))?;
    }
    Ok(())
}

/// k=2 fixtures must be linear orders, k=3 fixtures circular orders, and
/// anything else alternating.
fn check_fixture(path: &PathBuf) -> Check {
    let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read: {e}"))?;
    let c: KConfig = text.parse().map_err(|e: Error| e.to_string())?;
    match c.k() {
        2 => ensure(config2_is_linear_order(&c) == Ok(true), || "not a linear-order configuration".to_string()),
        3 => {
            ensure(is_alternating(&c), || "not alternating".to_string())?;
            match is_circular_realizable_bounded(&c, 8) {
                Ok(true) => Ok(()),
                Ok(false) => Err("not realizable by a circular order".to_string()),
                Err(e) => Err(e.to_string()),
            }
        }
        k => ensure(is_alternating(&c), || format!("k={k} configuration is not alternating")),
    }
}
