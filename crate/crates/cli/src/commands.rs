use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::json;

use mhtgame::game::{best_subset, WelfareSpec};
use mhtgame::linalg::Matrix;
use mhtgame::protocols::{
    factor_index_weights, make_endogenous_family, make_index_rule, make_separate_ttests, make_threshold_pub_ttests,
    separate_size, solve_pstar, variance_min_weights, CostFunction, PublicationRule, RecommendationRule,
};
use mhtgame::stats::{critical_value, McConfig, Method};
use mhtgame::verify::{check_maximin, local_power, GameSpec, Mode, NullRegion, ParameterSpace};

use crate::output::{write_json, Cell, Format, Table};
use crate::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PubKind {
    Linear,
    Threshold,
    Malevolent,
}

#[derive(Debug, Clone, Args, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct PubArgs {
    /// Publication rule.
    #[arg(long = "pub", value_enum, default_value_t = PubKind::Linear)]
    #[serde(rename = "pub")]
    pub publication: PubKind,
    /// Discoveries needed for publication (threshold rule).
    #[arg(long)]
    pub kappa: Option<usize>,
    /// Reward for publication (threshold rule).
    #[arg(long)]
    pub gamma: Option<f64>,
}

#[derive(Debug, Clone, Args, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct CostArgs {
    /// Fixed research cost c_f.
    #[arg(long, allow_negative_numbers = true)]
    pub cost_fixed: Option<f64>,
    /// Variable cost per hypothesis, c_v(J) = slope * J.
    #[arg(long, allow_negative_numbers = true)]
    pub cost_variable: Option<f64>,
}

#[derive(Debug, Clone, Args, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct McArgs {
    /// Monte Carlo draws where no closed form exists.
    #[arg(long, default_value_t = 100_000)]
    pub mc_draws: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Refuse to simulate.
    #[arg(long)]
    pub exact: bool,
}

impl McArgs {
    fn method(&self) -> Method {
        if self.exact {
            Method::Exact
        } else {
            Method::Auto(McConfig::new(self.mc_draws, self.seed))
        }
    }
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Invalid(msg.into())
}

fn parse_err(msg: impl Into<String>) -> CliError {
    CliError::Parse(msg.into())
}

impl CostArgs {
    fn resolve(&self, rule: Option<&RecommendationRule<f64>>) -> CliResult<CostFunction<f64>> {
        if self.cost_fixed.is_some() || self.cost_variable.is_some() {
            return Ok(CostFunction::affine(
                self.cost_fixed.unwrap_or(0.0),
                self.cost_variable.unwrap_or(0.0),
            ));
        }
        rule.and_then(|r| r.meta().cost)
            .map(CostFunction::fixed)
            .ok_or_else(|| invalid("no cost given and the rule file records none"))
    }
}

impl PubArgs {
    fn resolve(&self, rule: Option<&RecommendationRule<f64>>) -> CliResult<PublicationRule<f64>> {
        Ok(match self.publication {
            PubKind::Linear => PublicationRule::Linear,
            PubKind::Malevolent => PublicationRule::Malevolent,
            PubKind::Threshold => {
                let meta = rule.map(|r| r.meta());
                let kappa = self
                    .kappa
                    .or(meta.and_then(|m| m.kappa))
                    .ok_or_else(|| invalid("--pub threshold needs --kappa"))?;
                let gamma = self
                    .gamma
                    .or(meta.and_then(|m| m.gamma))
                    .ok_or_else(|| invalid("--pub threshold needs --gamma"))?;
                PublicationRule::threshold(kappa, gamma)?
            }
        })
    }
}

fn read_json<V: DeserializeOwned>(path: &Path) -> CliResult<V> {
    let text = std::fs::read_to_string(path).map_err(|e| parse_err(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| parse_err(format!("{}: {e}", path.display())))
}

fn read_matrix(path: &Path) -> CliResult<Matrix<f64>> {
    read_json(path)
}

fn parse_welfare(s: &str) -> CliResult<WelfareSpec<f64>> {
    match s.split_once(':') {
        None if s == "additive" => Ok(WelfareSpec::Additive),
        Some(("general", n)) => {
            let treatments = n
                .parse()
                .map_err(|_| parse_err(format!("bad treatment count in {s:?}")))?;
            Ok(WelfareSpec::General { treatments })
        }
        Some(("outcomes", path)) => Ok(WelfareSpec::outcomes(read_matrix(Path::new(path))?)?),
        _ => Err(parse_err(format!(
            "welfare must be additive, general:<J> or outcomes:<file>, got {s:?}"
        ))),
    }
}

fn default_null(w: &WelfareSpec<f64>) -> NullRegion {
    match w {
        WelfareSpec::Additive => NullRegion::AllNegative,
        WelfareSpec::General { .. } => NullRegion::CombinationNull,
        WelfareSpec::OutcomesPolicyMakers { .. } => NullRegion::AnyNegative,
    }
}

fn parse_null(s: &str) -> CliResult<NullRegion> {
    serde_json::from_value(json!(s)).map_err(|_| parse_err(format!("unknown null region {s:?}")))
}

/// `unit`, `box:LO:HI[:N]` or `diagonal:LO:HI[:N]`.
fn parse_space(s: &str, dim: usize, null: NullRegion) -> CliResult<ParameterSpace<f64>> {
    let parts: Vec<&str> = s.split(':').collect();
    let num = |i: usize| -> CliResult<f64> {
        parts[i]
            .parse()
            .map_err(|_| parse_err(format!("bad number {:?} in space {s:?}", parts[i])))
    };
    let points = |i: usize| -> CliResult<usize> {
        parts.get(i).map_or(Ok(21), |p| {
            p.parse()
                .map_err(|_| parse_err(format!("bad grid size {p:?} in space {s:?}")))
        })
    };
    match parts.as_slice() {
        ["unit"] => Ok(ParameterSpace::new(vec![(-1.0, 1.0); dim], 21, null)?),
        ["box", _, _] | ["box", _, _, _] => Ok(ParameterSpace::new(vec![(num(1)?, num(2)?); dim], points(3)?, null)?),
        ["diagonal", _, _] | ["diagonal", _, _, _] => Ok(ParameterSpace::diagonal(
            (num(1)?, num(2)?),
            points(3)?,
            vec![1.0; dim],
            null,
        )?),
        _ => Err(parse_err(format!(
            "space must be unit, box:LO:HI[:N] or diagonal:LO:HI[:N], got {s:?}"
        ))),
    }
}

fn spec_for(
    rule: RecommendationRule<f64>,
    welfare: WelfareSpec<f64>,
    publication: PublicationRule<f64>,
    cost: CostFunction<f64>,
    cov_file: Option<&Path>,
) -> CliResult<GameSpec<f64>> {
    Ok(match cov_file {
        Some(p) => GameSpec::with_cov(rule, welfare, publication, cost, read_matrix(p)?)?,
        None => GameSpec::new(rule, welfare, publication, cost)?,
    })
}

#[derive(Debug, Clone, Args, Serialize)]
#[serde(rename_all = "kebab-case")]
#[command(args_override_self = true)]
pub struct CritvalArgs {
    /// Number of hypotheses.
    #[arg(long = "J")]
    #[serde(rename = "J")]
    pub j: usize,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub cost_fixed: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub cost_variable: f64,
    #[command(flatten)]
    #[serde(flatten)]
    pub publication: PubArgs,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Also write the calibrated rule (unit variances) to this file.
    #[arg(long)]
    pub rule_out: Option<PathBuf>,
}

pub(crate) fn critval(a: &CritvalArgs, out: &mut dyn Write) -> CliResult<bool> {
    let cost = CostFunction::affine(a.cost_fixed, a.cost_variable);
    let publication = a.publication.resolve(None)?;
    let c = cost.eval(a.j)?;
    let (regime, size, kappa, gamma) = match publication {
        PublicationRule::Linear => {
            let regime = serde_json::to_value(cost.regime()).expect("regime serializes");
            (
                regime.as_str().unwrap_or_default().to_string(),
                separate_size(a.j, &cost)?,
                None,
                None,
            )
        }
        PublicationRule::Threshold { kappa, gamma } => (
            "p_star".to_string(),
            solve_pstar(a.j, kappa, c / gamma)?,
            Some(kappa),
            Some(gamma),
        ),
        PublicationRule::Malevolent => return Err(invalid("critval supports the linear and threshold rules")),
    };
    let t = if size >= 1.0 {
        f64::NEG_INFINITY
    } else {
        critical_value(size)?
    };
    let table = Table {
        columns: vec!["j", "pub", "kappa", "gamma", "cost", "regime", "size", "critical_value"],
        rows: vec![vec![
            Cell::Int(a.j),
            Cell::Text(format!("{:?}", a.publication.publication).to_lowercase()),
            kappa.map_or(Cell::Empty, Cell::Int),
            gamma.map_or(Cell::Empty, Cell::Num),
            Cell::Num(c),
            Cell::Text(regime),
            Cell::Num(size),
            Cell::Num(t),
        ]],
    };
    if let Some(path) = &a.rule_out {
        let variances = vec![1.0; a.j];
        let rule = match publication {
            PublicationRule::Threshold { kappa, gamma } => {
                make_threshold_pub_ttests(a.j, kappa, &cost, gamma, &variances)?
            }
            _ => make_separate_ttests(a.j, &cost, &variances)?,
        };
        let text = serde_json::to_string_pretty(&rule).expect("rules serialize");
        std::fs::write(path, text + "\n").map_err(|e| invalid(format!("{}: {e}", path.display())))?;
    }
    table.write(a.format, "critval", a, out)?;
    Ok(true)
}

#[derive(Debug, Clone, Args, Serialize)]
#[serde(rename_all = "kebab-case")]
#[command(args_override_self = true)]
pub struct Figure3Args {
    /// Inclusive range of J, as `LO..HI`.
    #[arg(long = "J-range", default_value = "1..15")]
    #[serde(rename = "J-range")]
    pub j_range: String,
    #[arg(long, value_delimiter = ',', default_value = "1,2,3")]
    pub kappa_list: Vec<usize>,
    /// Cost schemes `fixed:C` (C(J) = C) or `linear:C` (C(J) = C J).
    #[arg(long, value_delimiter = ',', default_value = "fixed:0.1,linear:0.1")]
    pub cost: Vec<String>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

fn parse_range(s: &str) -> CliResult<(usize, usize)> {
    let (lo, hi) = s
        .split_once("..")
        .ok_or_else(|| parse_err(format!("J range must look like 1..15, got {s:?}")))?;
    let p = |v: &str| {
        v.trim()
            .parse::<usize>()
            .map_err(|_| parse_err(format!("bad J range {s:?}")))
    };
    let (lo, hi) = (p(lo)?, p(hi)?);
    if lo == 0 || hi < lo {
        return Err(invalid(format!("J range {s:?} must satisfy 1 ≤ lo ≤ hi")));
    }
    Ok((lo, hi))
}

fn parse_cost_scheme(s: &str) -> CliResult<CostFunction<f64>> {
    let bad = || parse_err(format!("cost scheme must be fixed:C or linear:C, got {s:?}"));
    let (kind, v) = s.split_once(':').ok_or_else(bad)?;
    let v: f64 = v.parse().map_err(|_| bad())?;
    match kind {
        "fixed" => Ok(CostFunction::fixed(v)),
        "linear" => Ok(CostFunction::linear(v)),
        _ => Err(bad()),
    }
}

pub(crate) fn figure3(a: &Figure3Args, out: &mut dyn Write) -> CliResult<bool> {
    let (lo, hi) = parse_range(&a.j_range)?;
    if a.kappa_list.contains(&0) {
        return Err(invalid("kappa must be at least 1"));
    }
    let mut rows = Vec::new();
    for scheme in &a.cost {
        let cost = parse_cost_scheme(scheme)?;
        for j in lo..=hi {
            let c = cost.eval(j)?;
            let gamma = j as f64;
            rows.push(vec![
                Cell::Text("linear".into()),
                Cell::Text(scheme.clone()),
                Cell::Empty,
                Cell::Int(j),
                Cell::Num(c),
                Cell::Empty,
                Cell::Num(separate_size(j, &cost)?),
            ]);
            for &kappa in a.kappa_list.iter().filter(|k| **k <= j) {
                rows.push(vec![
                    Cell::Text("threshold".into()),
                    Cell::Text(scheme.clone()),
                    Cell::Int(kappa),
                    Cell::Int(j),
                    Cell::Num(c),
                    Cell::Num(gamma),
                    Cell::Num(solve_pstar(j, kappa, c / gamma)?),
                ]);
            }
        }
    }
    let table = Table {
        columns: vec!["rule", "cost_scheme", "kappa", "j", "cost", "gamma", "size"],
        rows,
    };
    table.write(a.format, "figure3", a, out)?;
    Ok(true)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeArg {
    Strong,
    Weak,
}

#[derive(Debug, Clone, Args, Serialize)]
#[serde(rename_all = "kebab-case")]
#[command(args_override_self = true)]
pub struct VerifyArgs {
    /// Rule document (JSON).
    #[arg(long)]
    pub rule_file: PathBuf,
    /// `additive`, `general:<J>` or `outcomes:<weights.json>`.
    #[arg(long, default_value = "additive")]
    pub welfare: String,
    #[command(flatten)]
    #[serde(flatten)]
    pub publication: PubArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub cost: CostArgs,
    /// `unit`, `box:LO:HI[:N]` or `diagonal:LO:HI[:N]`.
    #[arg(long, default_value = "unit")]
    pub space: String,
    /// Override the null region implied by the welfare:
    /// all_negative, any_negative or combination_null.
    #[arg(long)]
    pub null: Option<String>,
    #[arg(long, value_enum, default_value_t = ModeArg::Strong)]
    pub mode: ModeArg,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    /// Alternative distance for local power.
    #[arg(long, default_value_t = 0.01)]
    pub epsilon: f64,
    /// Covariance of the statistics (JSON rows); defaults to the rule's variances.
    #[arg(long)]
    pub cov_file: Option<PathBuf>,
    #[command(flatten)]
    #[serde(flatten)]
    pub mc: McArgs,
}

pub(crate) fn verify(a: &VerifyArgs, out: &mut dyn Write) -> CliResult<bool> {
    let rule: RecommendationRule<f64> = read_json(&a.rule_file)?;
    let welfare = parse_welfare(&a.welfare)?;
    let null = match &a.null {
        Some(s) => parse_null(s)?,
        None => default_null(&welfare),
    };
    let publication = a.publication.resolve(Some(&rule))?;
    let cost = a.cost.resolve(Some(&rule))?;
    let space = parse_space(&a.space, rule.input_dim(), null)?;
    let spec = spec_for(rule, welfare, publication, cost, a.cov_file.as_deref())?;
    let method = a.mc.method();
    let mode = match a.mode {
        ModeArg::Strong => Mode::Strong,
        ModeArg::Weak => Mode::Weak,
    };
    let report = check_maximin(&spec, &space, a.tol, mode, &method)?;
    let power = local_power(&spec, a.epsilon, &space, &method)?;
    let result = json!({ "report": report, "local_power": power });
    write_json("verify", a, result, out)?;
    Ok(report.passed)
}

#[derive(Debug, Clone, Args, Serialize)]
#[serde(rename_all = "kebab-case")]
#[command(args_override_self = true)]
pub struct SimulateArgs {
    /// Parameter value, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    pub theta: Vec<f64>,
    #[arg(long, required_unless_present = "endogenous")]
    pub rule_file: Option<PathBuf>,
    #[command(flatten)]
    #[serde(flatten)]
    pub publication: PubArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub cost: CostArgs,
    #[arg(long, default_value = "additive")]
    pub welfare: String,
    #[arg(long)]
    pub cov_file: Option<PathBuf>,
    /// Let the researcher choose which hypotheses to test.
    #[arg(long)]
    pub endogenous: bool,
    /// Variances of the candidate estimates in endogenous mode.
    #[arg(long, value_delimiter = ',')]
    pub variances: Option<Vec<f64>>,
    #[command(flatten)]
    #[serde(flatten)]
    pub mc: McArgs,
}

pub(crate) fn simulate(a: &SimulateArgs, out: &mut dyn Write) -> CliResult<bool> {
    let method = a.mc.method();
    if a.endogenous {
        if a.publication.publication != PubKind::Linear || a.welfare != "additive" {
            return Err(invalid(
                "endogenous selection is defined for linear publication and additive welfare",
            ));
        }
        let j = a.theta.len();
        let variances = a.variances.clone().unwrap_or_else(|| vec![1.0; j]);
        let family = make_endogenous_family(j, &a.cost.resolve(None)?, &variances)?;
        let choice = best_subset(&a.theta, &family, &method)?;
        write_json("simulate", a, json!(choice), out)?;
        return Ok(true);
    }
    let path = a.rule_file.as_deref().expect("clap enforces --rule-file");
    let rule: RecommendationRule<f64> = read_json(path)?;
    let welfare = parse_welfare(&a.welfare)?;
    let publication = a.publication.resolve(Some(&rule))?;
    let cost = a.cost.resolve(Some(&rule))?;
    let spec = spec_for(rule, welfare, publication, cost, a.cov_file.as_deref())?;
    let outcome = spec.play_at(a.theta.clone(), &method)?;
    write_json("simulate", a, json!(outcome), out)?;
    Ok(true)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum IndexMode {
    /// Welfare weights given by --weights.
    Welfare,
    /// Variance-minimizing weights.
    Variance,
    /// One-factor weights from --loadings.
    Factor,
}

#[derive(Debug, Clone, Args, Serialize)]
#[serde(rename_all = "kebab-case")]
#[command(args_override_self = true)]
pub struct IndexArgs {
    /// Covariance matrix of the statistics (JSON rows).
    #[arg(long)]
    pub sigma_file: PathBuf,
    #[arg(long, value_enum)]
    pub mode: IndexMode,
    #[arg(long, value_delimiter = ',')]
    pub weights: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    pub loadings: Option<Vec<f64>>,
    /// Size of the index test (the research cost).
    #[arg(long)]
    pub cost: f64,
}

pub(crate) fn index(a: &IndexArgs, out: &mut dyn Write) -> CliResult<bool> {
    let sigma = read_matrix(&a.sigma_file)?;
    sigma.cholesky()?;
    let mut extra = json!({});
    let weights = match a.mode {
        IndexMode::Welfare => a
            .weights
            .clone()
            .ok_or_else(|| invalid("--mode welfare needs --weights"))?,
        IndexMode::Variance => variance_min_weights(&sigma)?,
        IndexMode::Factor => {
            let loadings = a
                .loadings
                .as_ref()
                .ok_or_else(|| invalid("--mode factor needs --loadings"))?;
            let f = factor_index_weights(loadings, &sigma)?;
            extra = json!({
                "coefficients": f.coefficients,
                "mean_per_theta": f.mean_per_theta,
            });
            f.weights
        }
    };
    let rule = make_index_rule(&weights, &sigma, a.cost)?;
    let variance = sigma.quad_form(&weights);
    let mut result = json!({
        "mode": a.mode,
        "weights": weights,
        "size": a.cost,
        "critical_value": critical_value(a.cost)?,
        "index_variance": variance,
        "index_sd": variance.sqrt(),
        "rule": rule,
    });
    if let (Some(r), Some(e)) = (result.as_object_mut(), extra.as_object()) {
        r.extend(e.clone());
    }
    write_json("index", a, result, out)?;
    Ok(true)
}
