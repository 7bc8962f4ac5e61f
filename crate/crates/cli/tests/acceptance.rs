//! Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails.

use std::collections::{HashMap, HashSet};
use std::process::Command;
use std::time::{Duration, Instant};

use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use orderflow_core::ergodic::{derive_rng, random_order_with};
use orderflow_core::*;

type Check = std::result::Result<String, String>;

fn ensure(cond: bool, detail: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(detail())
    }
}

fn within(start: Instant, limit: Duration) -> std::result::Result<String, String> {
    let took = start.elapsed();
    ensure(took < limit, || format!("took {took:?}, limit {limit:?}"))?;
    Ok(format!("{:.3}s", took.as_secs_f64()))
}

fn s<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

/// Shuffles the window plus a few outside points.
fn random_perm(rng: &mut ChaCha8Rng, w: &Window) -> FinPerm {
    let mut points = w.elements().to_vec();
    let top = w.max().unwrap_or(0);
    points.extend([top + 1, top + 2 + rng.gen_range(0..3)]);
    let mut shuffled = points.clone();
    for i in (1..shuffled.len()).rev() {
        shuffled.swap(i, rng.gen_range(0..=i));
    }
    FinPerm::from_pairs(points.into_iter().zip(shuffled)).unwrap()
}

fn bijection() -> Check {
    let start = Instant::now();
    let mut count = 0;
    for n in 2..=5 {
        for o in LinearOrder::all(&Window::range(0, n)) {
            let c = lin_order_to_config2(&o).map_err(s)?;
            ensure(config2_is_linear_order(&c) == Ok(true), || format!("image of {o} rejected"))?;
            ensure(config2_to_order(&c).as_ref() == Ok(&o), || format!("round trip of {o}"))?;
            count += 1;
        }
    }
    Ok(format!("{count} orders, {}", within(start, Duration::from_secs(1))?))
}

fn action_laws() -> Check {
    let start = Instant::now();
    let mut rng = derive_rng(1, "acceptance-action", 0);
    for case in 0..500 {
        let k = rng.gen_range(2..=3);
        let n = rng.gen_range(0..=7);
        let w = Window::range(rng.gen_range(-4..4), n);
        let c = KConfig::from_fn(k, w.clone(), |_| Sign::from_bool(rng.gen())).map_err(s)?;
        let (a, b) = (random_perm(&mut rng, &w), random_perm(&mut rng, &w));
        let once = apply_perm(&a.compose(&b), &c).map_err(s)?;
        let twice = apply_perm(&a, &apply_perm(&b, &c).map_err(s)?).map_err(s)?;
        ensure(once == twice, || format!("composition law, case {case}"))?;
        ensure(apply_perm(&FinPerm::identity(), &c).map_err(s)? == c, || format!("identity law, case {case}"))?;
    }
    Ok(format!("500 cases, {}", within(start, Duration::from_secs(5))?))
}

fn sign_alternation() -> Check {
    let mut rng = derive_rng(1, "acceptance-alternation", 0);
    let mut checked = 0;
    for k in 2..=4 {
        let code = sign_code(k).map_err(s)?;
        let mut orders: Vec<LinearOrder> = (k..=5).flat_map(|n| LinearOrder::all(&Window::range(0, n)).collect::<Vec<_>>()).collect();
        orders.extend((0..200).map(|_| random_order_with(&Window::range(0, 6), &mut rng)));
        for o in &orders {
            let c = apply_code(&code, o).map_err(s)?;
            ensure(is_alternating(&c), || format!("sign-{k} image of {o}"))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} images"))
}

fn moment_curve() -> Check {
    let mut rng = derive_rng(1, "acceptance-moment", 0);
    for k in 2..=5 {
        for _ in 0..1000 {
            let mut pts: Vec<BigRational> = Vec::new();
            while pts.len() < k {
                let q = BigRational::new(rng.gen_range(-1000i64..=1000).into(), rng.gen_range(1i64..=50).into());
                if !pts.contains(&q) {
                    pts.push(q);
                }
            }
            let expected = OrderType::sorting(&pts).sign();
            ensure(moment_curve_orientation(&pts).map_err(s)? == expected, || format!("k={k} points {pts:?}"))?;
            pts.sort();
            ensure(moment_curve_orientation(&pts).map_err(s)? == Sign::Plus, || format!("k={k} increasing {pts:?}"))?;
        }
    }
    Ok("4000 tuples".to_string())
}

fn circular_count() -> Check {
    let mut counts = Vec::new();
    for (n, expected) in [(3, 2), (4, 6), (5, 24)] {
        let images: HashSet<KConfig> =
            LinearOrder::all(&Window::range(0, n)).map(|o| circular_code(&o)).collect::<Result<_>>().map_err(s)?;
        ensure(images.len() == expected, || format!("n={n}: {} images", images.len()))?;
        for c in &images {
            ensure(is_circular_realizable(c) == Ok(true), || format!("n={n}: image not realizable"))?;
        }
        counts.push(images.len().to_string());
    }
    Ok(format!("counts {}", counts.join(",")))
}

fn equivariance() -> Check {
    let mut rng = derive_rng(1, "acceptance-equivariance", 0);
    let sign = |k: usize| move |o: &LinearOrder| sign_code(k).and_then(|code| apply_code(&code, o));
    let codes: [(&str, usize, &dyn Fn(&LinearOrder) -> Result<KConfig>); 4] =
        [("sign-2", 2, &sign(2)), ("sign-3", 3, &sign(3)), ("sign-4", 4, &sign(4)), ("circular", 3, &circular_code)];
    for (name, k, code) in codes {
        for case in 0..500 {
            let n = rng.gen_range(k..=7);
            let o = random_order_with(&Window::range(rng.gen_range(-4..4), n), &mut rng);
            let a = random_perm(&mut rng, o.window());
            let lhs = code(&o.relabel(&a)).map_err(s)?;
            let rhs = apply_perm(&a, &code(&o).map_err(s)?).map_err(s)?;
            ensure(lhs == rhs, || format!("{name}, case {case}"))?;
        }
    }
    Ok("4 codes x 500 cases".to_string())
}

fn minimality() -> Check {
    let w = Window::range(0, 4);
    let ground = Window::range(0, 20);
    let mut ok = 0;
    for i in 0..5 {
        let source = random_linear_order(&ground, 100 + i);
        for target in LinearOrder::all(&w) {
            let wit = minimality_witness(&source, &target).map_err(s)?;
            ensure(wit.verify_minimality(&source, &target) == Ok(true), || format!("source {i}, target {target}"))?;
            ok += 1;
        }
    }
    ensure(ok == 120, || format!("{ok}/120"))?;
    Ok("120/120 verified".to_string())
}

fn proximality() -> Check {
    let ground = Window::range(0, 256);
    let w = Window::range(0, 4);
    for i in 0..100 {
        let o1 = random_linear_order(&ground, 2 * i);
        let o2 = random_linear_order(&ground, 2 * i + 1);
        let wit = proximality_witness(&o1, &o2, &w).map_err(s)?;
        ensure(wit.verify_proximality(&o1, &o2) == Ok(true), || format!("pair {i}"))?;
    }
    for n in 2..=5 {
        let mut fibres: HashMap<LinearOrder, usize> = HashMap::new();
        for o in LinearOrder::all(&Window::range(0, n)) {
            let r = reverse(&o);
            ensure(r != o && reverse(&r) == o, || format!("reversal of {o}"))?;
            *fibres.entry(reversal_class_rep(&o).map_err(s)?).or_default() += 1;
        }
        ensure(fibres.values().all(|&c| c == 2), || format!("n={n}: a reversal class is not a pair"))?;
    }
    Ok("100/100 verified, reversal classes are pairs".to_string())
}

fn ergodicity() -> Check {
    let start = Instant::now();
    let trials = 100_000;
    let w = Window::range(0, 3);
    let ground = Window::range(0, 40);
    let mut worst: f64 = 0.0;
    for i in 0..5 {
        let source = random_linear_order(&ground, 500 + i);
        let counts = pattern_counts(&source, &w, trials, 42).map_err(s)?;
        let stats = counts.stats();
        let probe = &stats[i as usize];
        ensure(orbit_average(&source, &probe.pattern, trials, 42).map_err(s)? == *probe, || {
            format!("source {i}: orbit_average disagrees with the shared tally")
        })?;
        let mut hits = 0;
        for stat in stats {
            let pattern = &stat.pattern;
            ensure(stat.exact == BigRational::new(1.into(), 6.into()), || "exact measure".to_string())?;
            ensure(stat.within_three_sigma(), || format!("source {i} pattern {pattern}: {}", stat.empirical()))?;
            worst = worst.max((stat.empirical() - 1.0 / 6.0).abs());
            hits += stat.hits;
        }
        let total = BigRational::new(hits.into(), trials.into());
        ensure(total.is_one(), || format!("source {i}: frequencies sum to {total}"))?;
    }
    for n in 1..=6 {
        let mass = LinearOrder::all(&Window::range(0, n)).fold(BigRational::zero(), |acc, o| acc + cylinder_measure(&o));
        ensure(mass.is_one(), || format!("n={n}: cylinder mass {mass}"))?;
    }
    Ok(format!("max deviation {worst:.5}, {}", within(start, Duration::from_secs(60))?))
}

fn run_cli(args: &[&str], workers: &str, out: Option<&std::path::Path>) -> std::result::Result<Vec<u8>, String> {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_orderflow"));
    cmd.args(["--workers", workers]).args(args);
    if let Some(p) = out {
        cmd.arg("--out").arg(p);
    }
    let o = cmd.output().map_err(s)?;
    ensure(o.status.success(), || format!("{args:?} exited with {}", o.status))?;
    match out {
        Some(p) => std::fs::read(p).map_err(s),
        None => Ok(o.stdout),
    }
}

fn reproducibility() -> Check {
    let dir = tempfile::tempdir().map_err(s)?;
    let order = dir.path().join("order.txt");
    std::fs::write(&order, "4 0 3 1 2\n").map_err(s)?;
    let order = order.to_str().unwrap().to_string();
    let runs: Vec<Vec<&str>> = vec![
        vec!["--seed", "9", "verify", "--max-window", "4", "--cases", "50"],
        vec!["--seed", "9", "--format", "json", "frequencies", "--window", "3", "--ground", "30", "--trials", "50000"],
        vec!["--seed", "9", "--format", "csv", "frequencies", "--window", "4", "--ground", "30", "--trials", "20000", "--source", "random"],
        vec!["--seed", "9", "witness", "--kind", "minimality", "--ground", "20", "--window", "4"],
        vec!["--seed", "9", "--format", "json", "witness", "--kind", "proximality", "--ground", "256", "--window", "4"],
        vec!["--seed", "9", "factor", "--code", "circular", "--order-file", &order],
    ];
    for (i, args) in runs.iter().enumerate() {
        let a = run_cli(args, "1", None)?;
        let b = run_cli(args, "4", None)?;
        let file = dir.path().join(format!("out{i}"));
        let c = run_cli(args, "2", Some(&file))?;
        ensure(!a.is_empty() && a == b && a == c, || format!("output differs for {args:?}"))?;
    }
    Ok(format!("{} subcommand runs byte-identical across worker counts", runs.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Check); 10] = [
        ("bijection round trip", bijection),
        ("action laws", action_laws),
        ("sign codes alternate", sign_alternation),
        ("moment curve orientation", moment_curve),
        ("circular code count", circular_count),
        ("code equivariance", equivariance),
        ("minimality witnesses", minimality),
        ("proximality witnesses", proximality),
        ("unique ergodicity", ergodicity),
        ("run reproducibility", reproducibility),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail}", i + 1);
            }
        }
    }
    println!("{}/{} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
