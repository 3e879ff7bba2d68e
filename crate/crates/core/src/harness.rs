//! JSON-configured experiment runs: solve, compare, verify.

use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::data::{
    read_libsvm, synth_classification, synth_points, synth_regression, LabeledDataset, Orientation, SyntheticSpec,
};
use crate::error::{Error, Result};
use crate::geometry::{ConstraintSpec, GroupLayout, RegularizerSpec};
use crate::linalg::ColumnMatrix;
use crate::objectives::Objective;
use crate::oracle::{check_safety, solve_reference, SafetyRecord};
use crate::problem::Problem;
use crate::screening::{default_rules, Rule};
use crate::solvers::{barycentric_monitor, dynamic_screening, solve, stepper_for, Algorithm, SolveResult, SolverConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

/// Slack used by `solver.debug_loosen`, a negative control that makes every
/// rule fire too eagerly.
pub const LOOSEN_SLACK: f64 = -0.1;

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Config(_) | Error::Parse { .. } | Error::Io(_) => EXIT_CONFIG,
        _ => EXIT_NUMERIC,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    SimplexLs,
    L1Ls,
    ElasticBallLs,
    BoxSvmHinge,
    SqHingeSvm,
    Meb,
    Lasso,
    ElasticNet,
    GroupLasso,
    LogisticL1,
}

impl Kind {
    pub const ALL: [Kind; 10] = [
        Kind::SimplexLs,
        Kind::L1Ls,
        Kind::ElasticBallLs,
        Kind::BoxSvmHinge,
        Kind::SqHingeSvm,
        Kind::Meb,
        Kind::Lasso,
        Kind::ElasticNet,
        Kind::GroupLasso,
        Kind::LogisticL1,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Kind::SimplexLs => "simplex_ls",
            Kind::L1Ls => "l1_ls",
            Kind::ElasticBallLs => "elastic_ball_ls",
            Kind::BoxSvmHinge => "box_svm_hinge",
            Kind::SqHingeSvm => "sq_hinge_svm",
            Kind::Meb => "meb",
            Kind::Lasso => "lasso",
            Kind::ElasticNet => "elastic_net",
            Kind::GroupLasso => "group_lasso",
            Kind::LogisticL1 => "logistic_l1",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.as_str() == s)
    }

    fn summary(self) -> &'static str {
        match self {
            Kind::SimplexLs => "½‖Ax − b‖² over the unit simplex",
            Kind::L1Ls => "½‖Ax − b‖² over the L1 ball of `radius`",
            Kind::ElasticBallLs => "½‖Ax − b‖² over α‖x‖₁ + (1−α)/2‖x‖² ≤ `radius`",
            Kind::BoxSvmHinge => "hinge-loss SVM dual, ½‖Ax‖² − 1ᵀx over [0, C]ⁿ",
            Kind::SqHingeSvm => "squared-hinge SVM dual, ½‖Ãx‖² over the simplex with ãᵢ = (yᵢaᵢ, eᵢ/√C)",
            Kind::Meb => "minimum enclosing ball dual, ‖Ax‖² − Σ‖aᵢ‖²xᵢ over the simplex",
            Kind::Lasso => "½‖Ax − b‖² + λ‖x‖₁",
            Kind::ElasticNet => "½‖Ax − b‖² + λ₁‖x‖₁ + λ₂‖x‖²",
            Kind::GroupLasso => "½‖Ax − b‖² + Σ_g ρ_g‖x_g‖",
            Kind::LogisticL1 => "Σ log(1 + exp(−yᵢaᵢᵀx)) + λ‖x‖₁",
        }
    }

    fn required(self) -> &'static [&'static str] {
        match self {
            Kind::SimplexLs | Kind::Meb => &[],
            Kind::L1Ls => &["radius"],
            Kind::ElasticBallLs => &["alpha", "radius"],
            Kind::BoxSvmHinge | Kind::SqHingeSvm => &["c"],
            Kind::Lasso | Kind::LogisticL1 => &["lambda"],
            Kind::ElasticNet => &["lambda1", "lambda2"],
            Kind::GroupLasso => &["groups"],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemBlock {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda1: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda2: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub groups: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group_weights: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SyntheticBlock {
    pub d: usize,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub support: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub noise_sigma: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct DataBlock {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub synthetic: Option<SyntheticBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected_dim: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct SolverBlock {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub algorithm: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_iter: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gap_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub screening_enabled: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub screening_period: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub safety_slack: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub debug_loosen: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct OutputBlock {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub problem: ProblemBlock,
    pub data: DataBlock,
    #[serde(default, skip_serializing_if = "is_default")]
    pub solver: SolverBlock,
    #[serde(default, skip_serializing_if = "is_default")]
    pub output: OutputBlock,
}

fn is_default<T: Default + PartialEq>(v: &T) -> bool {
    *v == T::default()
}

fn config_err(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let cfg: RunConfig = serde_json::from_str(text).map_err(|e| config_err(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| config_err(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn kind(&self) -> Result<Kind> {
        Kind::parse(&self.problem.kind)
            .ok_or_else(|| config_err(format!("unknown problem.kind \"{}\"", self.problem.kind)))
    }

    pub fn validate(&self) -> Result<()> {
        let kind = self.kind()?;
        let p = &self.problem;
        let present = |key: &str| match key {
            "lambda" => p.lambda.is_some(),
            "lambda1" => p.lambda1.is_some(),
            "lambda2" => p.lambda2.is_some(),
            "alpha" => p.alpha.is_some(),
            "c" => p.c.is_some(),
            "radius" => p.radius.is_some(),
            "groups" => p.groups.is_some(),
            _ => false,
        };
        for key in kind.required() {
            if !present(key) {
                return Err(config_err(format!("problem.{key} is required for kind {}", kind.as_str())));
            }
        }
        let positive = [
            ("lambda", p.lambda),
            ("lambda1", p.lambda1),
            ("alpha", p.alpha),
            ("c", p.c),
            ("radius", p.radius),
        ];
        for (key, v) in positive {
            if let Some(v) = v {
                if !(v > 0.0 && v.is_finite()) {
                    return Err(config_err(format!("problem.{key} must be positive")));
                }
            }
        }
        if let Some(l2) = p.lambda2 {
            if !(l2 >= 0.0 && l2.is_finite()) {
                return Err(config_err("problem.lambda2 must be non-negative"));
            }
        }
        if let Some(a) = p.alpha {
            if a > 1.0 {
                return Err(config_err("problem.alpha must lie in (0, 1]"));
            }
        }
        if kind == Kind::GroupLasso && p.lambda.is_none() && p.group_weights.is_none() {
            return Err(config_err("problem.lambda or problem.group_weights is required for kind group_lasso"));
        }
        match (&self.data.synthetic, &self.data.path) {
            (Some(_), Some(_)) => return Err(config_err("data: give either data.synthetic or data.path, not both")),
            (None, None) => return Err(config_err("data: one of data.synthetic or data.path is required")),
            _ => {}
        }
        if let Some(s) = &self.data.synthetic {
            self.synthetic_spec(s).validate().map_err(|e| config_err(format!("data.synthetic: {e}")))?;
        }
        if let Some(a) = &self.solver.algorithm {
            if Algorithm::parse(a).is_none() {
                return Err(config_err(format!("unknown solver.algorithm \"{a}\"")));
            }
        }
        if let Some(s) = self.solver.safety_slack {
            if !(s >= 0.0 && s.is_finite()) {
                return Err(config_err("solver.safety_slack must be non-negative"));
            }
        }
        if let Some(t) = self.solver.gap_tol {
            if !(t > 0.0) {
                return Err(config_err("solver.gap_tol must be positive"));
            }
        }
        if self.solver.screening_period == Some(0) {
            return Err(config_err("solver.screening_period must be at least 1"));
        }
        Ok(())
    }

    fn synthetic_spec(&self, s: &SyntheticBlock) -> SyntheticSpec {
        SyntheticSpec {
            d: s.d,
            n: s.n,
            support: s.support.unwrap_or(s.n.div_ceil(10)),
            noise_sigma: s.noise_sigma.unwrap_or(0.0),
            seed: s.seed.unwrap_or(0),
        }
    }

    /// Replaces both the solver seed and the synthetic data seed.
    pub fn override_seed(&mut self, seed: u64) {
        self.solver.seed = Some(seed);
        if let Some(s) = &mut self.data.synthetic {
            s.seed = Some(seed);
        }
    }

    pub fn disable_screening(&mut self) {
        self.solver.screening_enabled = Some(false);
    }

    pub fn solver_config(&self, problem: &Problem) -> SolverConfig {
        let s = &self.solver;
        let d = SolverConfig::default();
        let slack = if s.debug_loosen == Some(true) {
            LOOSEN_SLACK
        } else {
            s.safety_slack.unwrap_or(d.safety_slack)
        };
        SolverConfig {
            algorithm: s
                .algorithm
                .as_deref()
                .and_then(Algorithm::parse)
                .unwrap_or_else(|| Algorithm::default_for(problem)),
            max_iter: s.max_iter.unwrap_or(d.max_iter),
            gap_tol: s.gap_tol.unwrap_or(d.gap_tol),
            screening_enabled: s.screening_enabled.unwrap_or(d.screening_enabled),
            screening_period: s.screening_period.unwrap_or(d.screening_period),
            safety_slack: slack,
            seed: s.seed.unwrap_or(d.seed),
        }
    }

    fn dataset(&self, kind: Kind) -> Result<LabeledDataset> {
        if let Some(path) = &self.data.path {
            return read_libsvm(Path::new(path), self.data.expected_dim);
        }
        let spec = self.synthetic_spec(self.data.synthetic.as_ref().expect("validated"));
        match kind {
            Kind::BoxSvmHinge | Kind::SqHingeSvm | Kind::LogisticL1 => synth_classification(&spec),
            Kind::Meb => Ok(LabeledDataset {
                matrix: synth_points(spec.d, spec.n, spec.seed)?,
                targets: vec![0.0; spec.n],
                orientation: Orientation::SamplesAsColumns,
            }),
            _ => Ok(synth_regression(&spec)?.0),
        }
    }

    /// Problem described by the problem and data blocks.
    pub fn build_problem(&self) -> Result<Problem> {
        let kind = self.kind()?;
        let data = self.dataset(kind)?;
        let p = &self.problem;
        let get = |v: Option<f64>| v.expect("validated");
        let regression = |data: &LabeledDataset| -> Result<(ColumnMatrix, Objective)> {
            if data.orientation != Orientation::SamplesAsRows {
                return Err(config_err("regression kinds need samples as rows"));
            }
            Ok((
                data.matrix.clone(),
                Objective::SquaredError {
                    b: data.targets.clone(),
                },
            ))
        };
        match kind {
            Kind::SimplexLs => {
                let (a, f) = regression(&data)?;
                Problem::constrained(a, f, ConstraintSpec::Simplex)
            }
            Kind::L1Ls => {
                let (a, f) = regression(&data)?;
                Problem::constrained(a, f, ConstraintSpec::L1Ball { radius: get(p.radius) })
            }
            Kind::ElasticBallLs => {
                let (a, f) = regression(&data)?;
                let set = ConstraintSpec::ElasticNetBall {
                    alpha: get(p.alpha),
                    scale: get(p.radius),
                };
                Problem::constrained(a, f, set)
            }
            Kind::BoxSvmHinge => {
                let a = data.label_folded_columns()?;
                let n = a.n_cols();
                Problem::constrained(a, Objective::PureQuadratic, ConstraintSpec::Box { upper: get(p.c) })?
                    .with_linear(vec![-1.0; n])
            }
            Kind::SqHingeSvm => {
                let folded = data.label_folded_columns()?;
                let a = augment_identity(&folded, 1.0 / get(p.c).sqrt())?;
                Problem::constrained(a, Objective::PureQuadratic, ConstraintSpec::Simplex)
            }
            Kind::Meb => {
                let points = match data.orientation {
                    Orientation::SamplesAsColumns => data.matrix,
                    Orientation::SamplesAsRows => {
                        let dim = data.matrix.n_cols();
                        let cols: Vec<Vec<f64>> = data
                            .sample_rows()
                            .iter()
                            .map(|row| {
                                let mut c = vec![0.0; dim];
                                row.iter().for_each(|&(i, v)| c[i] = v);
                                c
                            })
                            .collect();
                        ColumnMatrix::from_columns(&cols)?
                    }
                };
                let q: Vec<f64> = points.col_norms().iter().map(|v| -v * v).collect();
                Problem::constrained(points, Objective::MebQuadratic, ConstraintSpec::Simplex)?.with_linear(q)
            }
            Kind::Lasso => {
                let (a, f) = regression(&data)?;
                Problem::penalized(a, f, RegularizerSpec::L1 { lambda: get(p.lambda) })
            }
            Kind::ElasticNet => {
                let (a, f) = regression(&data)?;
                let reg = RegularizerSpec::ElasticNet {
                    l1: get(p.lambda1),
                    l2: get(p.lambda2),
                };
                Problem::penalized(a, f, reg)
            }
            Kind::GroupLasso => {
                let (a, f) = regression(&data)?;
                let lengths = p.groups.clone().expect("validated");
                let layout = GroupLayout::from_lengths(&lengths).map_err(|e| config_err(format!("problem.groups: {e}")))?;
                if layout.n_cols() != a.n_cols() {
                    return Err(config_err(format!(
                        "problem.groups covers {} columns but the data has {}",
                        layout.n_cols(),
                        a.n_cols()
                    )));
                }
                let weights = match &p.group_weights {
                    Some(w) => w.clone(),
                    None => lengths.iter().map(|&l| get(p.lambda) * (l as f64).sqrt()).collect(),
                };
                Problem::penalized(a, f, RegularizerSpec::Group { layout, weights })
            }
            Kind::LogisticL1 => {
                let a = data.label_folded_rows()?;
                Problem::penalized(a, Objective::Logistic, RegularizerSpec::L1 { lambda: get(p.lambda) })
            }
        }
    }
}

/// `[A; s·I]`
fn augment_identity(a: &ColumnMatrix, s: f64) -> Result<ColumnMatrix> {
    let (d, n) = (a.n_rows(), a.n_cols());
    let cols: Vec<Vec<f64>> = (0..n)
        .map(|j| {
            let mut c = a.column(j).to_dense(d);
            c.resize(d + n, 0.0);
            c[d + j] = s;
            c
        })
        .collect();
    ColumnMatrix::from_columns(&cols)
}

fn write_file(path: &str, contents: &str) -> Result<()> {
    if let Some(parent) = Path::new(path).parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    std::fs::write(path, contents)?;
    Ok(())
}

fn summary_line(res: &SolveResult) -> String {
    format!(
        "final_gap={:e} iterations={} elapsed_ms={:.3} active={}/{} primal={:.12e} converged={}",
        res.gap,
        res.iterations,
        res.elapsed_ms,
        res.mask.n_active(),
        res.mask.len(),
        res.primal_value,
        res.converged
    )
}

/// Solves the configured problem, writes the trace and screening report, and
/// prints a one-line summary.
pub fn cmd_solve(cfg: &RunConfig, out: &mut dyn Write) -> Result<i32> {
    let problem = cfg.build_problem()?;
    let scfg = cfg.solver_config(&problem);
    let res = solve(&problem, &scfg)?;
    if let Some(path) = &cfg.output.trace {
        write_file(path, &res.trace.to_csv())?;
    }
    if let Some(path) = &cfg.output.report {
        write_file(path, &crate::screening::reports_csv(&res.reports()))?;
    }
    writeln!(out, "{}", summary_line(&res))?;
    Ok(EXIT_OK)
}

#[derive(Debug, Clone, PartialEq)]
pub struct TimingRow {
    pub variant: &'static str,
    pub screening: bool,
    pub elapsed_ms: f64,
    pub iterations: u64,
    pub final_gap: f64,
    pub n_active: usize,
}

pub fn timing_csv(rows: &[TimingRow]) -> String {
    let mut s = String::from("variant,screening,elapsed_ms,iterations,final_gap,n_active\n");
    for r in rows {
        let _ = writeln!(
            s,
            "{},{},{:.3},{},{:e},{}",
            r.variant,
            if r.screening { "on" } else { "off" },
            r.elapsed_ms,
            r.iterations,
            r.final_gap,
            r.n_active
        );
    }
    s
}

pub fn timing_table(rows: &[TimingRow]) -> String {
    let mut s = format!(
        "{:<10} {:>9} {:>12} {:>10} {:>12} {:>8}\n",
        "variant", "screening", "elapsed_ms", "iterations", "final_gap", "n_active"
    );
    for r in rows {
        let _ = writeln!(
            s,
            "{:<10} {:>9} {:>12.3} {:>10} {:>12.3e} {:>8}",
            r.variant,
            if r.screening { "on" } else { "off" },
            r.elapsed_ms,
            r.iterations,
            r.final_gap,
            r.n_active
        );
    }
    s
}

/// Runs an `l1_ls` problem in both parameterizations: a single barycentric
/// trajectory monitored by both rules, then four timed solves.
pub fn cmd_compare(cfg: &RunConfig, out: &mut dyn Write) -> Result<i32> {
    if cfg.kind()? != Kind::L1Ls {
        return Err(config_err("compare needs problem.kind \"l1_ls\""));
    }
    let l1 = cfg.build_problem()?;
    let r = cfg.problem.radius.expect("validated");
    let b = match &l1.objective {
        Objective::SquaredError { b } => b.clone(),
        _ => unreachable!("l1_ls uses squared error"),
    };
    let tri = Problem::constrained(l1.matrix.scaled(r).hstack_neg(), l1.objective.clone(), ConstraintSpec::Simplex)?;
    let base = SolverConfig {
        algorithm: Algorithm::PairwiseFrankWolfe,
        ..cfg.solver_config(&l1)
    };
    let monitor = barycentric_monitor(&l1.matrix, &b, r, &base)?;
    if let Some(path) = &cfg.output.trace {
        write_file(path, &monitor.to_csv())?;
    }
    let mut timing = Vec::new();
    for (variant, problem) in [("l1", &l1), ("simplex", &tri)] {
        for screening in [true, false] {
            let scfg = SolverConfig {
                screening_enabled: screening && base.screening_enabled,
                ..base.clone()
            };
            let start = Instant::now();
            let res = solve(problem, &scfg)?;
            timing.push(TimingRow {
                variant,
                screening: scfg.screening_enabled,
                elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
                iterations: res.iterations,
                final_gap: res.gap,
                n_active: res.mask.n_active(),
            });
        }
    }
    if let Some(path) = &cfg.output.timing {
        write_file(path, &timing_csv(&timing))?;
    }
    let fire = |v: Option<u64>| v.map_or_else(|| "never".to_string(), |i| i.to_string());
    writeln!(
        out,
        "first_fire_l1={} first_fire_simplex={} contradictions={}",
        fire(monitor.first_fire_l1),
        fire(monitor.first_fire_simplex),
        monitor.contradictions.len()
    )?;
    if let Some(last) = monitor.rows.last() {
        writeln!(
            out,
            "final iter={} gap={:e} active_frac_l1={} active_frac_simplex={}",
            last.iter, last.gap, last.active_frac_l1, last.active_frac_simplex
        )?;
    }
    write!(out, "{}", timing_table(&timing))?;
    Ok(EXIT_OK)
}

/// Outcome of auditing one solve against a reference solution.
#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub records: Vec<SafetyRecord>,
    pub violations: Vec<crate::oracle::Violation>,
    pub reference_gap: f64,
    pub rule_evaluations: usize,
}

/// Audits every screening decision of a solve against `solve_reference`.
pub fn verify_problem(problem: &Problem, scfg: &SolverConfig) -> Result<VerifyReport> {
    verify_rules(problem, &default_rules(problem), scfg)
}

/// As [`verify_problem`] with an explicit rule list.
pub fn verify_rules(problem: &Problem, rules: &[Rule], scfg: &SolverConfig) -> Result<VerifyReport> {
    let mut stepper = stepper_for(problem, scfg)?;
    let res = dynamic_screening(problem, stepper.as_mut(), rules, scfg)?;
    let reference = solve_reference(problem)?;
    let records = safety_records(&res);
    let upper = res.mask.upper_value();
    let violations = check_safety(&records, &reference.x, upper);
    Ok(VerifyReport {
        records,
        violations,
        reference_gap: reference.gap,
        rule_evaluations: res.rule_evaluations,
    })
}

pub fn safety_records(res: &SolveResult) -> Vec<SafetyRecord> {
    res.events
        .iter()
        .flat_map(|e| {
            e.report.newly_fixed.iter().map(move |f| SafetyRecord {
                iter: e.iter,
                index: f.index,
                status: f.status,
                rule: e.report.rule.as_str().to_string(),
            })
        })
        .collect()
}

/// Exit 0 iff no screening decision contradicts the reference solution.
pub fn cmd_verify(cfg: &RunConfig, out: &mut dyn Write) -> Result<i32> {
    if cfg.data.synthetic.is_none() {
        return Err(config_err("verify needs data.synthetic"));
    }
    let problem = cfg.build_problem()?;
    let report = verify_problem(&problem, &cfg.solver_config(&problem))?;
    writeln!(
        out,
        "fixed={} evaluations={} reference_gap={:e} violations={}",
        report.records.len(),
        report.rule_evaluations,
        report.reference_gap,
        report.violations.len()
    )?;
    for v in &report.violations {
        writeln!(
            out,
            "violation iter={} index={} rule={} status={} reference={:e}",
            v.record.iter,
            v.record.index,
            v.record.rule,
            v.record.status.as_str(),
            v.reference_value
        )?;
    }
    Ok(if report.violations.is_empty() { EXIT_OK } else { EXIT_VERIFY })
}

/// Markdown reference for every configuration key.
pub fn config_reference() -> String {
    let mut s = String::from("# Configuration reference\n\n");
    s.push_str("A run is described by one JSON object with four blocks. Unknown keys are rejected.\n\n");
    s.push_str("## problem\n\n| key | type | meaning |\n|---|---|---|\n");
    let keys = [
        ("kind", "string", "problem family, see below (required)"),
        ("lambda", "number > 0", "L1 weight for `lasso` and `logistic_l1`; group weight scale for `group_lasso`"),
        ("lambda1", "number > 0", "L1 weight for `elastic_net`"),
        ("lambda2", "number ≥ 0", "squared-L2 weight for `elastic_net`"),
        ("alpha", "number in (0, 1]", "L1 share of the elastic-net ball"),
        ("c", "number > 0", "SVM regularization C"),
        ("radius", "number > 0", "L1 ball radius, or elastic-net ball level"),
        ("groups", "array of integers", "consecutive group lengths for `group_lasso`, summing to n"),
        ("group_weights", "array of numbers", "per-group weights; default `lambda·√|g|`"),
    ];
    for (k, t, m) in keys {
        let _ = writeln!(s, "| `{k}` | {t} | {m} |");
    }
    s.push_str("\n### kinds\n\n| kind | problem | required keys |\n|---|---|---|\n");
    for k in Kind::ALL {
        let req: Vec<String> = k.required().iter().map(|r| format!("`{r}`")).collect();
        let req = if k == Kind::GroupLasso {
            "`groups`, and `lambda` or `group_weights`".to_string()
        } else if req.is_empty() {
            "none".to_string()
        } else {
            req.join(", ")
        };
        let _ = writeln!(s, "| `{}` | {} | {} |", k.as_str(), k.summary(), req);
    }
    s.push_str("\n## data\n\nExactly one of `synthetic` or `path`.\n\n| key | type | meaning |\n|---|---|---|\n");
    let keys = [
        ("synthetic.d", "integer", "rows (samples, or point dimension for `meb`)"),
        ("synthetic.n", "integer", "columns (features, or points for `meb`)"),
        ("synthetic.support", "integer", "nonzeros of the planted ±1 vector; default ⌈n/10⌉"),
        ("synthetic.noise_sigma", "number ≥ 0", "Gaussian noise added to the targets; default 0"),
        ("synthetic.seed", "integer", "generator seed; default 0"),
        ("path", "string", "libsvm text file"),
        ("expected_dim", "integer", "feature count for `path` when the file does not reach it"),
    ];
    for (k, t, m) in keys {
        let _ = writeln!(s, "| `{k}` | {t} | {m} |");
    }
    s.push_str(
        "\nSynthetic designs are d × n standard normal matrices. Regression kinds use them directly with \
         `b = Ax* + noise`. Classification kinds take labels from the sign of a noisy score: `box_svm_hinge` \
         and `sq_hinge_svm` then use the d samples as dual variables, `logistic_l1` uses them as rows. \
         `meb` draws n Gaussian points in d dimensions.\n",
    );
    s.push_str("\n## solver\n\n| key | type | default | meaning |\n|---|---|---|---|\n");
    let keys = [
        ("algorithm", "string", "by kind", "`pairwise_frank_wolfe`, `proximal_gradient` or `coordinate_descent_box`"),
        ("max_iter", "integer", "100000", "iteration budget"),
        ("gap_tol", "number > 0", "1e-7", "stop once the duality gap is at most this"),
        ("screening_enabled", "bool", "true", "run the screening rules"),
        ("screening_period", "integer ≥ 1", "10", "iterations between screening passes"),
        ("safety_slack", "number ≥ 0", "0", "a rule fires only when its margin exceeds this"),
        ("seed", "integer", "0", "solver seed (power iteration start)"),
        ("debug_loosen", "bool", "false", "test hook: shifts every rule threshold by −0.1 so it fires unsafely"),
    ];
    for (k, t, d, m) in keys {
        let _ = writeln!(s, "| `{k}` | {t} | {d} | {m} |");
    }
    s.push_str("\n## output\n\n| key | meaning |\n|---|---|\n");
    s.push_str("| `trace` | trace CSV path (`solve`: per-iteration trace; `compare`: merged two-rule trace) |\n");
    s.push_str("| `report` | screening decisions CSV path (`solve`) |\n");
    s.push_str("| `timing` | timing table CSV path (`compare`) |\n");
    s.push_str("\n## command line overrides\n\n`--seed N` sets both `solver.seed` and `data.synthetic.seed`. `--no-screening` sets `solver.screening_enabled` to false.\n");
    s.push_str("\n## exit codes\n\n| code | meaning |\n|---|---|\n| 0 | success |\n| 1 | `verify` found a violation |\n| 2 | configuration or input error |\n| 3 | numerical error |\n");
    s
}
