//! End-to-end acceptance criteria. Prints one line per criterion and fails
//! if any criterion fails.

use std::time::{Duration, Instant};

use mhtgame::game::WelfareSpec;
use mhtgame::linalg::Matrix;
use mhtgame::outcomes::{aggregation_equivalence, SyntheticTrial};
use mhtgame::protocols::{
    make_group_max_rule, make_min_statistic_rule, make_separate_ttests, pstar_polynomial, separate_size, solve_pstar,
    solve_pstar_bisection, variance_min_weights, CostFunction, PublicationRule, RecommendationRule, RuleKind,
};
use mhtgame::stats::{norm_quantile, rejection_probs, GaussianModel, McConfig, Method};
use mhtgame::verify::{
    check_maximin, error_rates, local_power, separate_vs_index_demo, GameSpec, Mode, NullRegion, ParameterSpace,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check, Duration);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn thresholds(rule: &RecommendationRule<f64>) -> Vec<f64> {
    match rule.kind() {
        RuleKind::SeparateThresholds { thresholds, .. } => thresholds.clone(),
        other => panic!("expected separate thresholds, got {other:?}"),
    }
}

fn linear_spec(rule: RecommendationRule<f64>, c: f64) -> GameSpec<f64> {
    GameSpec::new(
        rule,
        WelfareSpec::Additive,
        PublicationRule::Linear,
        CostFunction::fixed(c),
    )
    .unwrap()
}

fn bonferroni_regime() -> Check {
    let cost = CostFunction::fixed(0.1);
    for j in [1, 2, 5, 10, 20] {
        let size = separate_size(j, &cost).map_err(|e| e.to_string())?;
        ensure(size == 0.1 / j as f64, || format!("J={j}: size {size:e}"))?;
        let rule = make_separate_ttests(j, &cost, &vec![1.0; j]).map_err(|e| e.to_string())?;
        let z = -norm_quantile(0.1 / j as f64).unwrap();
        for t in thresholds(&rule) {
            ensure((t - z).abs() <= 1e-9, || format!("J={j}: t={t} vs {z}"))?;
        }
    }
    Ok("size 0.1/J and critical values for J in {1,2,5,10,20}".into())
}

fn no_adjustment_regime() -> Check {
    let cost = CostFunction::linear(0.05);
    for j in 1..=50 {
        let size = separate_size(j, &cost).map_err(|e| e.to_string())?;
        ensure(size == 0.05, || format!("J={j}: size {size:e}"))?;
    }
    Ok("size 0.05 exactly for J = 1..50".into())
}

fn pstar_equation() -> Check {
    let mut worst_closed = 0.0_f64;
    for j in 1..=50 {
        for ratio in [0.01, 0.1, 0.5] {
            let closed = (1.0_f64 + ratio).powf(1.0 / j as f64) - 1.0;
            for p in [solve_pstar(j, 1, ratio), solve_pstar_bisection(j, 1, ratio)] {
                let p = p.map_err(|e| e.to_string())?;
                worst_closed = worst_closed.max((p - closed).abs());
            }
        }
    }
    ensure(worst_closed <= 1e-10, || {
        format!("kappa=1 closed form off by {worst_closed:e}")
    })?;
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst_residual = 0.0_f64;
    for _ in 0..200 {
        let j = rng.random_range(1..=50);
        let kappa = rng.random_range(1..=j);
        let ratio: f64 = rng.random_range(0.001..0.99);
        let p = solve_pstar(j, kappa, ratio).map_err(|e| e.to_string())?;
        worst_residual = worst_residual.max((pstar_polynomial(j, kappa, p) - ratio).abs());
    }
    ensure(worst_residual <= 1e-12, || {
        format!("largest residual {worst_residual:e}")
    })?;
    Ok(format!(
        "closed form within {worst_closed:.1e}, largest residual {worst_residual:.1e}"
    ))
}

fn pstar_rate() -> Check {
    let js = [10usize, 100, 1000];
    let jp: Vec<f64> = js.iter().map(|&j| j as f64 * solve_pstar(j, 1, 0.1).unwrap()).collect();
    let j2p: Vec<f64> = js
        .iter()
        .map(|&j| {
            let jf = j as f64;
            jf * jf * solve_pstar(j, 1, 0.1 / jf).unwrap()
        })
        .collect();
    for seq in [&jp, &j2p] {
        for w in seq.windows(2) {
            let change = (w[1] / w[0] - 1.0).abs();
            ensure(change < 0.05, || format!("sequence {seq:?} changes by {change}"))?;
        }
    }
    Ok(format!("J p* = {jp:.6?}, J^2 p* = {j2p:.6?}"))
}

fn maximin_verification() -> Check {
    let mut notes = Vec::new();
    for j in [2, 3] {
        let space = ParameterSpace::unit_box(j, NullRegion::AllNegative).unwrap();
        let rule = make_separate_ttests(j, &CostFunction::fixed(0.1), &vec![1.0; j]).unwrap();
        let good = check_maximin(
            &linear_spec(rule.clone(), 0.1),
            &space,
            1e-9,
            Mode::Strong,
            &Method::Exact,
        )
        .map_err(|e| e.to_string())?;
        ensure(good.passed, || {
            format!("J={j}: optimal rule failed: {:?}", good.worst_null_beta)
        })?;
        let bad = check_maximin(
            &linear_spec(rule.shifted(-0.25), 0.1),
            &space,
            1e-9,
            Mode::Strong,
            &Method::Exact,
        )
        .map_err(|e| e.to_string())?;
        let w = bad.worst_null_beta.clone().ok_or("no null points")?;
        ensure(
            !bad.passed && bad.null_violations > 0 && w.theta.iter().all(|t| *t < 0.0),
            || format!("J={j}: lowered thresholds not caught"),
        )?;
        notes.push(format!("J={j} witness {:?} beta {:.3e}", w.theta, w.value));
    }
    Ok(notes.join("; "))
}

fn local_power_sweep() -> Check {
    let space = ParameterSpace::unit_box(2, NullRegion::AllNegative).unwrap();
    let spec = linear_spec(
        make_separate_ttests(2, &CostFunction::fixed(0.1), &[1.0; 2]).unwrap(),
        0.1,
    );
    let mut values = Vec::new();
    for eps in [0.1, 0.05, 0.01] {
        values.push(
            local_power(&spec, eps, &space, &Method::Exact)
                .map_err(|e| e.to_string())?
                .value,
        );
    }
    let last = values[2];
    ensure((last - 0.05).abs() <= 0.01, || format!("eps=0.01 gives {last}"))?;
    ensure(values.windows(2).all(|w| w[1] < w[0]), || {
        format!("not monotone: {values:?}")
    })?;
    Ok(format!("inf v/eps over eps = 0.1, 0.05, 0.01: {values:.6?}"))
}

fn group_weak_fwer() -> Check {
    let rule = make_group_max_rule(2, 1, &CostFunction::fixed(0.1_f64), 1.0).unwrap();
    let model = GaussianModel::standard(vec![0.0; 3]).unwrap();
    let mc = Method::MonteCarlo(McConfig::new(1_000_000, 7));
    let r = error_rates(&rule, &model, None, &mc).map_err(|e| e.to_string())?;
    let any = r.weak_fwer;
    ensure((any.value - 0.1).abs() <= 4.0 * any.std_error, || {
        format!("P(any) = {} +- {}", any.value, any.std_error)
    })?;
    let p = rejection_probs(&rule, &model, &mc).map_err(|e| e.to_string())?;
    for (v, se) in p.probs.iter().zip(&p.std_errors) {
        ensure((v - 0.1 / 3.0).abs() <= 4.0 * se, || {
            format!("group probability {v} +- {se}")
        })?;
    }
    Ok(format!(
        "P(any) = {:.5} (SE {:.1e}), groups {:.5?}",
        any.value, any.std_error, p.probs
    ))
}

fn min_rule_joint_size() -> Check {
    let mut notes = Vec::new();
    for (g, joint) in [(2usize, 0.09), (3, 0.027)] {
        let rule = make_min_statistic_rule(g, 0.3_f64).unwrap();
        let model = GaussianModel::standard(vec![0.0; g]).unwrap();
        let exact = rejection_probs(&rule, &model, &Method::Exact)
            .map_err(|e| e.to_string())?
            .probs[0];
        ensure((exact - joint).abs() <= 1e-15, || format!("G={g}: exact {exact}"))?;
        let mc = rejection_probs(&rule, &model, &Method::MonteCarlo(McConfig::new(1_000_000, g as u64)))
            .map_err(|e| e.to_string())?;
        let (v, se) = (mc.probs[0], mc.std_errors[0]);
        ensure((v - joint).abs() <= 4.0 * se, || format!("G={g}: MC {v} +- {se}"))?;
        notes.push(format!("G={g}: exact {exact}, MC {v:.5}"));
    }
    Ok(notes.join("; "))
}

fn dominance_demo() -> Check {
    let d = separate_vs_index_demo(10.0, 1.0, &CostFunction::fixed(0.05)).map_err(|e| e.to_string())?;
    ensure(d.conjunction_power < 1e-6 && d.index_power > 0.15, || format!("{d:?}"))?;
    Ok(format!(
        "conjunction {:.3e}, index {:.6}",
        d.conjunction_power, d.index_power
    ))
}

fn aggregation_equivalence_trials() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut worst = 0.0_f64;
    for i in 0..100 {
        let g = rng.random_range(1..=6);
        let n = rng.random_range(4..=500);
        let theta: Vec<f64> = (0..g).map(|_| rng.random_range(-1.0..1.0)).collect();
        let raw: Vec<f64> = (0..g).map(|_| rng.random_range(0.01..1.0)).collect();
        let total: f64 = raw.iter().sum();
        let w: Vec<f64> = raw.iter().map(|v| v / total).collect();
        let cov = Matrix::from_diag(&vec![rng.random_range(0.5..4.0); g]);
        let trial = SyntheticTrial::generate(n, rng.random_range(1..n), &theta, &cov, i).map_err(|e| e.to_string())?;
        worst = worst.max(aggregation_equivalence(&trial, &w).map_err(|e| e.to_string())?);
    }
    ensure(worst <= 1e-10, || format!("discrepancy {worst:e}"))?;
    Ok(format!("max discrepancy {worst:.2e} over 100 trials"))
}

fn random_spd(rng: &mut ChaCha8Rng, n: usize) -> Matrix<f64> {
    let a: Vec<f64> = (0..n * n).map(|_| rng.random_range(-1.0..1.0)).collect();
    let mut m = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            m[(i, j)] = (0..n).map(|k| a[i * n + k] * a[j * n + k]).sum::<f64>() + if i == j { 0.1 } else { 0.0 };
        }
    }
    m
}

fn variance_min_weights_search() -> Check {
    let w = variance_min_weights(&Matrix::from_diag(&[1.0, 4.0])).map_err(|e| e.to_string())?;
    ensure(w == vec![0.8, 0.2], || format!("diag(1,4) gives {w:?}"))?;
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut closest = f64::INFINITY;
    for _ in 0..20 {
        let n = rng.random_range(2..=5);
        let cov = random_spd(&mut rng, n);
        let best = variance_min_weights(&cov).map_err(|e| e.to_string())?;
        let v_best = cov.quad_form(&best);
        for k in 0..1000 {
            // half the candidates are perturbations of the optimum
            let raw: Vec<f64> = if k % 2 == 0 {
                (0..n).map(|_| rng.random_range(-1.0..2.0)).collect()
            } else {
                best.iter().map(|b| b + rng.random_range(-0.05..0.05)).collect()
            };
            let total: f64 = raw.iter().sum();
            if total.abs() < 1e-3 {
                continue;
            }
            let cand: Vec<f64> = raw.iter().map(|v| v / total).collect();
            let v = cov.quad_form(&cand);
            // relative slack for rounding in the two quadratic forms
            ensure(v >= v_best * (1.0 - 1e-12), || {
                format!("candidate {cand:?} has variance {v} < {v_best}")
            })?;
            closest = closest.min(v / v_best - 1.0);
        }
    }
    Ok(format!("closest random candidate is {closest:.2e} above the minimum"))
}

fn figure3_numbers() -> Check {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let args = [
        "mhtgame",
        "figure3",
        "--J-range",
        "1..15",
        "--kappa-list",
        "1,2,3",
        "--cost",
        "fixed:0.1,linear:0.1",
    ];
    let code = mhtgame_cli::run(args, &mut out, &mut err);
    ensure(code == 0, || String::from_utf8_lossy(&err).into_owned())?;
    let text = String::from_utf8(out).unwrap();
    let mut lines = text.lines();
    ensure(lines.next().is_some_and(|l| l.starts_with("# config: ")), || {
        "missing config header".into()
    })?;
    ensure(lines.next() == Some("rule,cost_scheme,kappa,j,cost,gamma,size"), || {
        "unexpected columns".into()
    })?;
    let mut pstar = std::collections::BTreeMap::new();
    let mut linear_rows = 0;
    for line in lines {
        let f: Vec<&str> = line.split(',').collect();
        let j: usize = f[3].parse().unwrap();
        let size: f64 = f[6].parse().unwrap();
        match (f[0], f[1]) {
            ("linear", "fixed:0.1") => {
                ensure(size == 0.1 / j as f64, || format!("linear fixed J={j}: {size:e}"))?;
                linear_rows += 1;
            }
            ("linear", _) => ensure(size == 0.1, || format!("linear proportional J={j}: {size:e}"))?,
            (_, scheme) => {
                pstar.insert((scheme.to_string(), f[2].parse::<usize>().unwrap(), j), size);
            }
        }
    }
    ensure(linear_rows == 15, || format!("{linear_rows} linear fixed-cost rows"))?;
    for scheme in ["fixed:0.1", "linear:0.1"] {
        for j in 1..=15 {
            for kappa in 1..=3usize.min(j) {
                let p = pstar[&(scheme.to_string(), kappa, j)];
                if kappa > 1 {
                    let lower = pstar[&(scheme.to_string(), kappa - 1, j)];
                    ensure(p > lower, || format!("{scheme} J={j}: p* not increasing in kappa"))?;
                }
                if j > kappa {
                    let before = pstar[&(scheme.to_string(), kappa, j - 1)];
                    ensure(p < before, || {
                        format!("{scheme} kappa={kappa}: p* not decreasing at J={j}")
                    })?;
                }
            }
        }
    }
    Ok(format!("{} threshold rows, monotone in kappa and J", pstar.len()))
}

fn average_size_remark() -> Check {
    let model = GaussianModel::standard(vec![0.0; 3]).unwrap();
    let mc = Method::MonteCarlo(McConfig::new(1_000_000, 13));
    let bonf = make_separate_ttests(3, &CostFunction::fixed(0.15_f64), &[1.0; 3]).unwrap();
    let exact = error_rates(&bonf, &model, None, &Method::Exact)
        .map_err(|e| e.to_string())?
        .avg_size;
    ensure((exact.value - 0.15).abs() <= 1e-10, || {
        format!("Bonferroni exact {}", exact.value)
    })?;
    let sim = error_rates(&bonf, &model, None, &mc)
        .map_err(|e| e.to_string())?
        .avg_size;
    ensure((sim.value - 0.15).abs() <= 4.0 * sim.std_error, || {
        format!("Bonferroni MC {sim:?}")
    })?;
    let holm = RecommendationRule::holm(0.15_f64, vec![1.0; 3]).unwrap();
    let h = error_rates(&holm, &model, None, &mc)
        .map_err(|e| e.to_string())?
        .avg_size;
    ensure((h.value - 0.15).abs() > 4.0 * h.std_error, || {
        format!("Holm indistinguishable: {h:?}")
    })?;
    Ok(format!(
        "Bonferroni {:.6} (MC {:.5}), Holm {:.5} +- {:.1e}",
        exact.value, sim.value, h.value, h.std_error
    ))
}

fn main() {
    let criteria: [Criterion; 13] = [
        ("bonferroni regime", bonferroni_regime, Duration::from_secs(1)),
        ("no-adjustment regime", no_adjustment_regime, Duration::from_secs(1)),
        ("p* equation", pstar_equation, Duration::from_secs(5)),
        ("p* rate", pstar_rate, Duration::from_secs(10)),
        ("maximin verification", maximin_verification, Duration::from_secs(30)),
        ("local power", local_power_sweep, Duration::from_secs(10)),
        ("group weak FWER", group_weak_fwer, Duration::from_secs(20)),
        ("min-statistic joint size", min_rule_joint_size, Duration::from_secs(60)),
        ("separate vs index", dominance_demo, Duration::from_secs(1)),
        (
            "aggregation equivalence",
            aggregation_equivalence_trials,
            Duration::from_secs(60),
        ),
        (
            "variance-min weights",
            variance_min_weights_search,
            Duration::from_secs(60),
        ),
        ("optimal size table", figure3_numbers, Duration::from_secs(60)),
        ("average size", average_size_remark, Duration::from_secs(60)),
    ];
    let mut failed = 0;
    for (i, (name, check, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let outcome = match result {
            Ok(detail) if elapsed <= *budget => Ok(detail),
            Ok(detail) => Err(format!("{detail}; took {elapsed:.2?}, budget {budget:?}")),
            Err(e) => Err(e),
        };
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name} ({elapsed:.2?}): {detail}", i + 1),
            Err(e) => {
                failed += 1;
                println!("FAIL {:>2} {name} ({elapsed:.2?}): {e}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
