use mhtgame::game::WelfareSpec;
use mhtgame::protocols::{
    make_group_max_rule, make_separate_ttests, CostFunction, PublicationRule, RecommendationRule,
};
use mhtgame::stats::{critical_value, norm_sf, Method};
use mhtgame::verify::{
    brute_force_optimal_threshold, check_maximin, local_power, BruteForceConfig, GameSpec, Mode, NullRegion,
    ParameterSpace, ThresholdSearch,
};

fn linear(rule: RecommendationRule<f64>, c: f64) -> GameSpec<f64> {
    GameSpec::new(
        rule,
        WelfareSpec::Additive,
        PublicationRule::Linear,
        CostFunction::fixed(c),
    )
    .unwrap()
}

#[test]
fn optimal_rule_is_maximin_for_two_and_three_tests() {
    for j in [2, 3] {
        let space = ParameterSpace::unit_box(j, NullRegion::AllNegative).unwrap();
        let rule = make_separate_ttests(j, &CostFunction::fixed(0.1), &vec![1.0; j]).unwrap();
        let r = check_maximin(&linear(rule.clone(), 0.1), &space, 1e-9, Mode::Strong, &Method::Exact).unwrap();
        assert!(r.passed, "J = {j}");
        assert_eq!(r.grid.total_points, 23usize.pow(j as u32));
        let bad = check_maximin(
            &linear(rule.shifted(-0.25), 0.1),
            &space,
            1e-9,
            Mode::Strong,
            &Method::Exact,
        )
        .unwrap();
        assert!(!bad.passed);
        let w = bad.worst_null_beta.unwrap();
        assert!(w.theta.iter().all(|t| *t < 0.0) && w.value > 1e-9);
    }
}

#[test]
fn liberal_rule_witness_sits_at_the_shell() {
    let space = ParameterSpace::unit_box(2, NullRegion::AllNegative).unwrap();
    let rule = make_separate_ttests(2, &CostFunction::fixed(0.1), &[1.0; 2])
        .unwrap()
        .shifted(-0.5);
    let r = check_maximin(&linear(rule, 0.1), &space, 1e-9, Mode::Strong, &Method::Exact).unwrap();
    let w = r.worst_null_beta.unwrap();
    assert_eq!(w.theta, vec![-1e-3, -1e-3]);
    let t = critical_value(0.05).unwrap() - 0.5;
    assert!((w.value - (2.0 * norm_sf(t + 1e-3) - 0.1)).abs() < 1e-14);
}

#[test]
fn local_power_approaches_average_size() {
    let space = ParameterSpace::unit_box(2, NullRegion::AllNegative).unwrap();
    let spec = linear(
        make_separate_ttests(2, &CostFunction::fixed(0.1), &[1.0; 2]).unwrap(),
        0.1,
    );
    let oracle = [
        (0.1, 0.061_190_836_213_344_3),
        (0.05, 0.055_372_485_826_703_72),
        (0.01, 0.051_039_867_851_090_52),
    ];
    let mut last = f64::INFINITY;
    for (eps, v) in oracle {
        let lp = local_power(&spec, eps, &space, &Method::Exact).unwrap();
        assert!((lp.value - v).abs() < 1e-12, "eps = {eps}: {}", lp.value);
        assert!(lp.value < last);
        last = lp.value;
    }
}

#[test]
fn group_rule_is_weakly_maximin() {
    let cost = CostFunction::fixed(0.1);
    let rule = make_group_max_rule(2, 1, &cost, 1.0).unwrap();
    let welfare = WelfareSpec::General { treatments: 2 };
    let spec = GameSpec::new(rule, welfare, PublicationRule::threshold(1, 1.0).unwrap(), cost).unwrap();
    let space = ParameterSpace::new(vec![(-1.0, 1.0); 3], 11, NullRegion::CombinationNull).unwrap();
    let r = check_maximin(&spec, &space, 1e-9, Mode::Weak, &Method::Exact).unwrap();
    assert!(r.passed, "{r:?}");
}

#[test]
fn brute_force_single_and_pair() {
    let run = |j: usize, c: f64, lo: f64, hi: f64| {
        let space = ParameterSpace::unit_box(j, NullRegion::AllNegative).unwrap();
        let cfg = BruteForceConfig::range(lo, hi, 0.005, ThresholdSearch::Symmetric).unwrap();
        brute_force_optimal_threshold(
            j,
            &WelfareSpec::Additive,
            &PublicationRule::Linear,
            &CostFunction::fixed(c),
            &space,
            &cfg,
            &Method::Exact,
        )
        .unwrap()
    };
    let one = run(1, 0.05, 1.5, 2.0);
    assert!((one.best.thresholds[0] - critical_value(0.05).unwrap()).abs() <= 0.005);
    let two = run(2, 0.1, 1.5, 2.5);
    assert!((two.best.thresholds[0] - critical_value(0.05).unwrap()).abs() <= 0.005);
    assert!(two.feasible < two.evaluated);
}

#[test]
fn reserved_component_rules_cross() {
    let t = critical_value(0.1).unwrap();
    let s = critical_value(0.05).unwrap();
    let space = ParameterSpace::unit_box(2, NullRegion::AllNegative).unwrap();
    let cfg = BruteForceConfig::new(vec![t, s, f64::INFINITY], ThresholdSearch::Product);
    let r = brute_force_optimal_threshold(
        2,
        &WelfareSpec::Additive,
        &PublicationRule::Linear,
        &CostFunction::fixed(0.1),
        &space,
        &cfg,
        &Method::Exact,
    )
    .unwrap();
    let c = r.crossing.expect("two maximin rules with crossing welfare");
    assert!(c.first_better_at.1 > c.first_better_at.2);
    assert!(c.second_better_at.1 > c.second_better_at.2);
    let reserved = [vec![t, f64::INFINITY], vec![f64::INFINITY, t]];
    assert!(reserved.contains(&c.first) || reserved.contains(&c.second));
}

#[test]
fn strong_pass_implies_weak_pass() {
    let space = ParameterSpace::new(vec![(-1.0, 1.0); 2], 9, NullRegion::AllNegative).unwrap();
    let base = make_separate_ttests(2, &CostFunction::fixed(0.1), &[1.0; 2]).unwrap();
    for k in -10..=10 {
        let spec = linear(base.shifted(0.05 * k as f64), 0.1);
        let strong = check_maximin(&spec, &space, 1e-9, Mode::Strong, &Method::Exact).unwrap();
        let weak = check_maximin(&spec, &space, 1e-9, Mode::Weak, &Method::Exact).unwrap();
        assert!(!strong.passed || weak.passed, "shift {k}");
    }
}
