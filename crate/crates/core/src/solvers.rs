//! Iterative solvers and the dynamic screening loop around them.

use std::fmt::Write as _;
use std::time::Instant;

use crate::error::{Error, Result};
use crate::gaps::{certify, duality_gap, stopping_gap, wolfe_gap, Iterate};
use crate::geometry::ConstraintSpec;
use crate::linalg::{dot, norm_sq, ColumnMatrix};
use crate::objectives::Objective;
use crate::problem::{Penalty, Problem};
use crate::screening::{apply_mask, default_rules, Fixed, MaskedView, Rule, RuleReport, ScreenMask, Status};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    PairwiseFrankWolfe,
    ProximalGradient,
    CoordinateDescentBox,
}

impl Algorithm {
    pub fn as_str(self) -> &'static str {
        match self {
            Algorithm::PairwiseFrankWolfe => "pairwise_frank_wolfe",
            Algorithm::ProximalGradient => "proximal_gradient",
            Algorithm::CoordinateDescentBox => "coordinate_descent_box",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        [
            Algorithm::PairwiseFrankWolfe,
            Algorithm::ProximalGradient,
            Algorithm::CoordinateDescentBox,
        ]
        .into_iter()
        .find(|a| a.as_str() == s)
    }

    /// The solver each problem shape gets by default.
    pub fn default_for(problem: &Problem) -> Self {
        match problem.penalty {
            Penalty::Constraint(ConstraintSpec::Box { .. }) => Algorithm::CoordinateDescentBox,
            Penalty::Constraint(_) => Algorithm::PairwiseFrankWolfe,
            Penalty::Regularizer(_) => Algorithm::ProximalGradient,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub algorithm: Algorithm,
    pub max_iter: u64,
    pub gap_tol: f64,
    pub screening_enabled: bool,
    pub screening_period: u64,
    /// Rules fire only when their margin exceeds this value.
    pub safety_slack: f64,
    pub seed: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            algorithm: Algorithm::PairwiseFrankWolfe,
            max_iter: 100_000,
            gap_tol: 1e-7,
            screening_enabled: true,
            screening_period: 10,
            safety_slack: 0.0,
            seed: 0,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.gap_tol > 0.0) {
            return Err(Error::InvalidParameter("gap_tol must be positive".into()));
        }
        if self.screening_period == 0 {
            return Err(Error::InvalidParameter("screening_period must be at least 1".into()));
        }
        if !self.safety_slack.is_finite() {
            return Err(Error::InvalidParameter("safety_slack must be finite".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceRow {
    pub iter: u64,
    pub elapsed_ms: f64,
    pub primal: f64,
    pub gap: f64,
    pub wolfe_gap: Option<f64>,
    pub n_active: usize,
    pub n_fixed_zero: usize,
    pub n_fixed_upper: usize,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SolveTrace {
    pub rows: Vec<TraceRow>,
}

pub const TRACE_HEADER: &str = "iter,elapsed_ms,primal,gap,wolfe_gap,n_active,n_fixed_zero,n_fixed_upper";

impl SolveTrace {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(TRACE_HEADER);
        out.push('\n');
        for r in &self.rows {
            let wolfe = r.wolfe_gap.map(|v| format!("{v:e}")).unwrap_or_default();
            let _ = writeln!(
                out,
                "{},{:.3},{:e},{:e},{},{},{},{}",
                r.iter, r.elapsed_ms, r.primal, r.gap, wolfe, r.n_active, r.n_fixed_zero, r.n_fixed_upper
            );
        }
        out
    }

    pub fn last(&self) -> Option<&TraceRow> {
        self.rows.last()
    }
}

/// One solver iteration at a time, on whatever view the driver hands over.
pub trait Stepper {
    /// Feasible starting point for `problem`.
    fn start(&mut self, problem: &Problem) -> Result<Vec<f64>>;
    /// Next iterate.
    fn step(&mut self, problem: &Problem, it: &Iterate) -> Result<Vec<f64>>;
    /// Carries the state over to a compressed view that keeps the listed
    /// positions of the previous view.
    fn restrict(&mut self, problem: &Problem, keep: &[usize], x: &[f64]) -> Result<Vec<f64>>;
}

pub fn stepper_for(problem: &Problem, cfg: &SolverConfig) -> Result<Box<dyn Stepper>> {
    Ok(match (cfg.algorithm, &problem.penalty) {
        (Algorithm::PairwiseFrankWolfe, Penalty::Constraint(ConstraintSpec::Simplex)) => {
            Box::new(PairwiseFrankWolfe::simplex())
        }
        (Algorithm::PairwiseFrankWolfe, Penalty::Constraint(ConstraintSpec::L1Ball { radius })) => {
            Box::new(PairwiseFrankWolfe::l1_ball(*radius))
        }
        (Algorithm::PairwiseFrankWolfe, Penalty::Constraint(ConstraintSpec::ElasticNetBall { .. })) => {
            Box::new(FrankWolfe)
        }
        (Algorithm::ProximalGradient, Penalty::Regularizer(_)) => Box::new(ProximalGradient::new(cfg.seed)),
        (Algorithm::CoordinateDescentBox, Penalty::Constraint(ConstraintSpec::Box { upper })) => {
            if problem.objective.quadratic_scale().is_none() {
                return Err(Error::InvalidParameter(
                    "coordinate descent needs a quadratic objective".into(),
                ));
            }
            Box::new(CoordinateDescentBox { upper: *upper })
        }
        (alg, _) => {
            return Err(Error::InvalidParameter(format!(
                "{} does not apply to this problem",
                alg.as_str()
            )))
        }
    })
}

/// How the pairwise solver enumerates atoms.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Atoms {
    /// Atom `k` is `e_k`.
    Simplex,
    /// Atom `k < n` is `r·e_k`, atom `n + k` is `−r·e_k`.
    SignedL1 { radius: f64 },
}

/// Pairwise Frank-Wolfe over the simplex or an L1 ball.
#[derive(Debug, Clone)]
pub struct PairwiseFrankWolfe {
    atoms: Atoms,
    weights: Vec<f64>,
    scratch: Vec<f64>,
}

impl PairwiseFrankWolfe {
    pub fn simplex() -> Self {
        Self {
            atoms: Atoms::Simplex,
            weights: Vec::new(),
            scratch: Vec::new(),
        }
    }

    pub fn l1_ball(radius: f64) -> Self {
        Self {
            atoms: Atoms::SignedL1 { radius },
            weights: Vec::new(),
            scratch: Vec::new(),
        }
    }

    fn n_atoms(&self, n: usize) -> usize {
        match self.atoms {
            Atoms::Simplex => n,
            Atoms::SignedL1 { .. } => 2 * n,
        }
    }

    /// Column and sign-with-scale of atom `k`.
    fn atom(&self, n: usize, k: usize) -> (usize, f64) {
        match self.atoms {
            Atoms::Simplex => (k, 1.0),
            Atoms::SignedL1 { radius } => {
                if k < n {
                    (k, radius)
                } else {
                    (k - n, -radius)
                }
            }
        }
    }

    fn point(&self, n: usize) -> Vec<f64> {
        match self.atoms {
            Atoms::Simplex => self.weights.clone(),
            Atoms::SignedL1 { radius } => (0..n)
                .map(|i| radius * (self.weights[i] - self.weights[n + i]))
                .collect(),
        }
    }

    fn armijo(problem: &Problem, it: &Iterate, dir: &[f64], x_dir: &[(usize, f64)], slope: f64, gmax: f64) -> Result<f64> {
        let mut gamma = gmax;
        for _ in 0..60 {
            let y: Vec<f64> = it.y.iter().zip(dir).map(|(a, b)| a + gamma * b).collect();
            let mut lin = 0.0;
            if let Some(q) = &problem.linear {
                lin = x_dir.iter().map(|&(i, v)| gamma * v * q[i]).sum();
            }
            let val = problem.objective.value(&y)? + lin + problem.constant
                + problem.linear.as_ref().map_or(0.0, |q| dot(q, &it.x));
            if val <= it.primal_value + 1e-4 * gamma * slope {
                return Ok(gamma);
            }
            gamma *= 0.5;
        }
        Ok(0.0)
    }
}

impl Stepper for PairwiseFrankWolfe {
    fn start(&mut self, problem: &Problem) -> Result<Vec<f64>> {
        let n = problem.n();
        let m = self.n_atoms(n);
        self.weights = vec![1.0 / m as f64; m];
        let centre = Iterate::new(problem, self.point(n))?;
        let ga: Vec<f64> = (0..m)
            .map(|k| {
                let (i, s) = self.atom(n, k);
                s * centre.grad_x[i]
            })
            .collect();
        let best = argmin(&ga);
        self.weights = vec![0.0; m];
        self.weights[best] = 1.0;
        Ok(self.point(n))
    }

    fn step(&mut self, problem: &Problem, it: &Iterate) -> Result<Vec<f64>> {
        let n = problem.n();
        let m = self.n_atoms(n);
        let ga = |k: usize| {
            let (i, s) = self.atom(n, k);
            s * it.grad_x[i]
        };
        let mut s_best = 0;
        let mut s_val = f64::INFINITY;
        let mut v_best = None;
        let mut v_val = f64::NEG_INFINITY;
        for k in 0..m {
            let g = ga(k);
            if g < s_val {
                s_val = g;
                s_best = k;
            }
            if self.weights[k] > 0.0 && g > v_val {
                v_val = g;
                v_best = Some(k);
            }
        }
        let Some(v_best) = v_best else {
            return Err(Error::Infeasible("no atom carries weight".into()));
        };
        let slope = s_val - v_val;
        if s_best == v_best || slope >= 0.0 {
            return Ok(self.point(n));
        }
        let gmax = self.weights[v_best];
        let (si, ss) = self.atom(n, s_best);
        let (vi, vs) = self.atom(n, v_best);
        self.scratch.clear();
        self.scratch.resize(problem.d(), 0.0);
        problem.matrix.column(si).axpy(ss, &mut self.scratch);
        problem.matrix.column(vi).axpy(-vs, &mut self.scratch);
        let gamma = match problem.objective.quadratic_scale() {
            Some(c) => {
                let curv = c * norm_sq(&self.scratch);
                if curv > 0.0 {
                    (-slope / curv).min(gmax)
                } else {
                    gmax
                }
            }
            None => {
                let x_dir = [(si, ss), (vi, -vs)];
                let x_dir: Vec<(usize, f64)> = match self.atoms {
                    Atoms::Simplex => x_dir.to_vec(),
                    Atoms::SignedL1 { .. } => x_dir.to_vec(),
                };
                Self::armijo(problem, it, &self.scratch, &x_dir, slope, gmax)?
            }
        };
        if gamma >= gmax {
            self.weights[s_best] += gmax;
            self.weights[v_best] = 0.0;
        } else {
            self.weights[s_best] += gamma;
            self.weights[v_best] -= gamma;
        }
        Ok(self.point(n))
    }

    fn restrict(&mut self, problem: &Problem, keep: &[usize], _x: &[f64]) -> Result<Vec<f64>> {
        let old_n = self.weights.len() / if matches!(self.atoms, Atoms::Simplex) { 1 } else { 2 };
        let mut w: Vec<f64> = match self.atoms {
            Atoms::Simplex => keep.iter().map(|&k| self.weights[k]).collect(),
            Atoms::SignedL1 { .. } => keep
                .iter()
                .map(|&k| self.weights[k])
                .chain(keep.iter().map(|&k| self.weights[old_n + k]))
                .collect(),
        };
        let mass: f64 = w.iter().sum();
        if !(mass > 0.0) {
            return self.start(problem);
        }
        w.iter_mut().for_each(|v| *v /= mass);
        self.weights = w;
        Ok(self.point(problem.n()))
    }
}

fn argmin(v: &[f64]) -> usize {
    let mut best = 0;
    for (i, &x) in v.iter().enumerate() {
        if x < v[best] {
            best = i;
        }
    }
    best
}

/// Plain Frank-Wolfe with line search, used on the elastic-net ball.
#[derive(Debug, Clone, Copy, Default)]
pub struct FrankWolfe;

impl Stepper for FrankWolfe {
    fn start(&mut self, problem: &Problem) -> Result<Vec<f64>> {
        Ok(vec![0.0; problem.n()])
    }

    fn step(&mut self, problem: &Problem, it: &Iterate) -> Result<Vec<f64>> {
        let set = problem
            .constraint()
            .ok_or_else(|| Error::InvalidParameter("frank-wolfe needs a constraint".into()))?;
        let lmo = set.lmo(&it.grad_x);
        let mut s = vec![0.0; problem.n()];
        for &(i, v) in &lmo.vertex {
            s[i] = v;
        }
        let d: Vec<f64> = s.iter().zip(&it.x).map(|(a, b)| a - b).collect();
        let slope = dot(&it.grad_x, &d);
        if slope >= 0.0 {
            return Ok(it.x.clone());
        }
        let ad = problem.matrix.mat_vec(&d)?;
        let gamma = match problem.objective.quadratic_scale() {
            Some(c) => {
                let curv = c * norm_sq(&ad);
                if curv > 0.0 {
                    (-slope / curv).min(1.0)
                } else {
                    1.0
                }
            }
            None => {
                let mut gamma = 1.0;
                loop {
                    let trial: Vec<f64> = it.x.iter().zip(&d).map(|(a, b)| a + gamma * b).collect();
                    if problem.primal_value(&trial)? <= it.primal_value + 1e-4 * gamma * slope || gamma < 1e-18 {
                        break;
                    }
                    gamma *= 0.5;
                }
                gamma
            }
        };
        Ok(it.x.iter().zip(&d).map(|(a, b)| a + gamma * b).collect())
    }

    fn restrict(&mut self, _problem: &Problem, keep: &[usize], x: &[f64]) -> Result<Vec<f64>> {
        Ok(keep.iter().map(|&k| x[k]).collect())
    }
}

/// Proximal gradient with step `1/(L·‖A‖²)`.
#[derive(Debug, Clone)]
pub struct ProximalGradient {
    seed: u64,
    step: f64,
}

impl ProximalGradient {
    pub fn new(seed: u64) -> Self {
        Self { seed, step: 0.0 }
    }

    fn refresh_step(&mut self, problem: &Problem) {
        let s = problem.matrix.spectral_norm_sq(self.seed) * 1.05;
        let l = problem.objective.lipschitz() * s;
        self.step = if l > 0.0 { 1.0 / l } else { 1.0 };
    }
}

impl Stepper for ProximalGradient {
    fn start(&mut self, problem: &Problem) -> Result<Vec<f64>> {
        self.refresh_step(problem);
        Ok(vec![0.0; problem.n()])
    }

    fn step(&mut self, problem: &Problem, it: &Iterate) -> Result<Vec<f64>> {
        let reg = problem
            .regularizer()
            .ok_or_else(|| Error::InvalidParameter("proximal gradient needs a penalty".into()))?;
        let v: Vec<f64> = it.x.iter().zip(&it.grad_x).map(|(x, g)| x - self.step * g).collect();
        Ok(reg.prox(&v, self.step))
    }

    fn restrict(&mut self, problem: &Problem, keep: &[usize], x: &[f64]) -> Result<Vec<f64>> {
        self.refresh_step(problem);
        Ok(keep.iter().map(|&k| x[k]).collect())
    }
}

/// Cyclic exact coordinate minimization on `[0, C]ⁿ` for quadratic `f`.
#[derive(Debug, Clone, Copy)]
pub struct CoordinateDescentBox {
    pub upper: f64,
}

impl Stepper for CoordinateDescentBox {
    fn start(&mut self, problem: &Problem) -> Result<Vec<f64>> {
        Ok(vec![0.0; problem.n()])
    }

    fn step(&mut self, problem: &Problem, it: &Iterate) -> Result<Vec<f64>> {
        let c = problem
            .objective
            .quadratic_scale()
            .ok_or_else(|| Error::InvalidParameter("coordinate descent needs a quadratic objective".into()))?;
        let mut x = it.x.clone();
        let mut w = it.w.clone();
        let norms = problem.matrix.col_norms();
        for j in 0..problem.n() {
            let col = problem.matrix.column(j);
            let g = col.dot(&w) + problem.linear_at(j);
            let h = c * norms[j] * norms[j];
            let target = if h > 0.0 {
                x[j] - g / h
            } else if g < 0.0 {
                self.upper
            } else if g > 0.0 {
                0.0
            } else {
                x[j]
            };
            let new = target.clamp(0.0, self.upper);
            let delta = new - x[j];
            if delta != 0.0 {
                col.axpy(c * delta, &mut w);
                x[j] = new;
            }
        }
        Ok(x)
    }

    fn restrict(&mut self, _problem: &Problem, keep: &[usize], x: &[f64]) -> Result<Vec<f64>> {
        Ok(keep.iter().map(|&k| x[k]).collect())
    }
}

/// A screening decision with the iteration it was made at.
#[derive(Debug, Clone, PartialEq)]
pub struct ScreenEvent {
    pub iter: u64,
    pub report: RuleReport,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveResult {
    /// Full-length solution, fixed variables back-filled.
    pub x: Vec<f64>,
    pub primal_value: f64,
    /// Final stopping gap.
    pub gap: f64,
    pub iterations: u64,
    pub converged: bool,
    pub elapsed_ms: f64,
    pub trace: SolveTrace,
    pub mask: ScreenMask,
    /// Reports that fixed at least one variable.
    pub events: Vec<ScreenEvent>,
    /// Number of (rule, checkpoint) evaluations.
    pub rule_evaluations: usize,
}

impl SolveResult {
    pub fn reports(&self) -> Vec<(u64, RuleReport)> {
        self.events.iter().map(|e| (e.iter, e.report.clone())).collect()
    }
}

/// Solves with the default solver and rules for the problem shape.
pub fn solve(problem: &Problem, cfg: &SolverConfig) -> Result<SolveResult> {
    let rules = default_rules(problem);
    let mut stepper = stepper_for(problem, cfg)?;
    dynamic_screening(problem, stepper.as_mut(), &rules, cfg)
}

pub fn pairwise_frank_wolfe(problem: &Problem, cfg: &SolverConfig) -> Result<SolveResult> {
    let cfg = SolverConfig {
        algorithm: Algorithm::PairwiseFrankWolfe,
        ..cfg.clone()
    };
    solve(problem, &cfg)
}

pub fn proximal_gradient(problem: &Problem, cfg: &SolverConfig) -> Result<SolveResult> {
    let cfg = SolverConfig {
        algorithm: Algorithm::ProximalGradient,
        ..cfg.clone()
    };
    solve(problem, &cfg)
}

pub fn coordinate_descent_box(problem: &Problem, cfg: &SolverConfig) -> Result<SolveResult> {
    let cfg = SolverConfig {
        algorithm: Algorithm::CoordinateDescentBox,
        ..cfg.clone()
    };
    solve(problem, &cfg)
}

fn trace_row(
    view: &Problem,
    it: &Iterate,
    mask: &ScreenMask,
    iter: u64,
    start: Instant,
) -> Result<TraceRow> {
    let wolfe = match view.penalty {
        Penalty::Constraint(_) => Some(wolfe_gap(view, it)?),
        Penalty::Regularizer(_) => None,
    };
    Ok(TraceRow {
        iter,
        elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
        primal: it.primal_value,
        gap: duality_gap(view, it)?,
        wolfe_gap: wolfe,
        n_active: mask.n_active(),
        n_fixed_zero: mask.n_fixed_zero(),
        n_fixed_upper: mask.n_fixed_upper(),
    })
}

fn solved_row(problem: &Problem, mask: &ScreenMask, iter: u64, start: Instant) -> Result<(TraceRow, Vec<f64>, f64)> {
    let x = mask.embed(&[]);
    let primal = problem.primal_value(&x)?;
    Ok((
        TraceRow {
            iter,
            elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
            primal,
            gap: 0.0,
            wolfe_gap: problem.constraint().map(|_| 0.0),
            n_active: 0,
            n_fixed_zero: mask.n_fixed_zero(),
            n_fixed_upper: mask.n_fixed_upper(),
        },
        x,
        primal,
    ))
}

/// Runs `stepper`, screening every `screening_period` iterations and at
/// termination, and shrinking the working problem after every new fix.
pub fn dynamic_screening(
    problem: &Problem,
    stepper: &mut dyn Stepper,
    rules: &[Rule],
    cfg: &SolverConfig,
) -> Result<SolveResult> {
    cfg.validate()?;
    for rule in rules {
        rule.check_compatible(problem)?;
    }
    let start = Instant::now();
    let screening = cfg.screening_enabled && !rules.is_empty();
    let mut mask = ScreenMask::for_problem(problem);
    let mut view = problem.clone();
    let mut x = stepper.start(&view)?;
    let mut rows = Vec::new();
    let mut events = Vec::new();
    let mut evaluations = 0;
    let mut iter = 0u64;
    loop {
        let mut it = Iterate::new(&view, x)?;
        let mut gap = stopping_gap(&view, &it)?;
        let finishing = gap <= cfg.gap_tol || iter >= cfg.max_iter;
        let mut screened = false;
        if screening && (iter.is_multiple_of(cfg.screening_period) || finishing) {
            let cert = certify(&view, &it, iter)?;
            let mut fixes: Vec<Fixed> = Vec::new();
            for rule in rules {
                let report = rule.evaluate(&view, &it, &cert, &mask, cfg.safety_slack)?;
                evaluations += 1;
                let mut report = report;
                report
                    .newly_fixed
                    .retain(|f| !fixes.iter().any(|g| g.index == f.index));
                if !report.newly_fixed.is_empty() {
                    fixes.extend(report.newly_fixed.iter().copied());
                    report.tested.clear();
                    events.push(ScreenEvent { iter, report });
                }
            }
            if !fixes.is_empty() {
                screened = true;
                let before = mask.active_to_original().to_vec();
                mask.commit(&fixes, &problem.matrix)?;
                match apply_mask(&mask, problem)? {
                    MaskedView::Solved => {
                        let (row, x, primal) = solved_row(problem, &mask, iter, start)?;
                        rows.push(row);
                        return Ok(SolveResult {
                            x,
                            primal_value: primal,
                            gap: 0.0,
                            iterations: iter,
                            converged: true,
                            elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
                            trace: SolveTrace { rows },
                            mask,
                            events,
                            rule_evaluations: evaluations,
                        });
                    }
                    MaskedView::Active(next) => {
                        let keep: Vec<usize> = before
                            .iter()
                            .enumerate()
                            .filter(|(_, &orig)| mask.status()[orig] == Status::Active)
                            .map(|(pos, _)| pos)
                            .collect();
                        let nx = stepper.restrict(&next, &keep, &it.x)?;
                        view = next;
                        it = Iterate::new(&view, nx)?;
                        gap = stopping_gap(&view, &it)?;
                    }
                }
            }
        }
        let done = gap <= cfg.gap_tol || iter >= cfg.max_iter;
        if screened || iter.is_multiple_of(25) || done {
            rows.push(trace_row(&view, &it, &mask, iter, start)?);
        }
        if done {
            let x = mask.embed(&it.x);
            return Ok(SolveResult {
                x,
                primal_value: it.primal_value,
                gap,
                iterations: iter,
                converged: gap <= cfg.gap_tol,
                elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
                trace: SolveTrace { rows },
                mask,
                events,
                rule_evaluations: evaluations,
            });
        }
        x = stepper.step(&view, &it)?;
        iter += 1;
    }
}

/// One checkpoint of the two-parameterization comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct MonitorRow {
    pub iter: u64,
    /// Wolfe gap in the simplex parameterization.
    pub gap: f64,
    /// Wolfe gap of the pulled-back point on the L1 ball.
    pub gap_l1: f64,
    pub active_frac_l1: f64,
    /// Original variables with at least one sign copy still active.
    pub active_frac_simplex: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonitorTrace {
    pub rows: Vec<MonitorRow>,
    pub first_fire_l1: Option<u64>,
    pub first_fire_simplex: Option<u64>,
    pub l1_mask: ScreenMask,
    pub simplex_mask: ScreenMask,
    /// L1-rule fixes whose two simplex copies were not both fixed at the same checkpoint.
    pub contradictions: Vec<(u64, usize)>,
}

impl MonitorTrace {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("iter,gap,active_frac_l1,active_frac_simplex\n");
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{:e},{},{}",
                r.iter, r.gap, r.active_frac_l1, r.active_frac_simplex
            );
        }
        out
    }
}

/// Solves `min ½‖Ax − b‖²` over the radius-`r` L1 ball in the barycentric
/// simplex parameterization without compressing, and at every screening
/// checkpoint applies both the simplex rule and the L1 rule to the same point.
pub fn barycentric_monitor(a: &ColumnMatrix, b: &[f64], r: f64, cfg: &SolverConfig) -> Result<MonitorTrace> {
    cfg.validate()?;
    let f = Objective::SquaredError { b: b.to_vec() };
    let l1 = Problem::constrained(a.clone(), f.clone(), ConstraintSpec::L1Ball { radius: r })?;
    let tri = Problem::constrained(a.scaled(r).hstack_neg(), f, ConstraintSpec::Simplex)?;
    let n = a.n_cols();
    let mut l1_mask = ScreenMask::for_problem(&l1);
    let mut tri_mask = ScreenMask::for_problem(&tri);
    let mut pfw = PairwiseFrankWolfe::simplex();
    let mut x = pfw.start(&tri)?;
    let mut rows = Vec::new();
    let mut first_l1 = None;
    let mut first_tri = None;
    let mut contradictions = Vec::new();
    let mut iter = 0u64;
    loop {
        let it_tri = Iterate::new(&tri, x)?;
        let gap = wolfe_gap(&tri, &it_tri)?;
        let done = gap <= cfg.gap_tol || iter >= cfg.max_iter;
        if iter.is_multiple_of(cfg.screening_period) || done {
            let x_l1 = crate::data::from_barycentric(&it_tri.x, r)?;
            let it_l1 = Iterate::new(&l1, x_l1)?;
            let gap_l1 = wolfe_gap(&l1, &it_l1)?;
            if cfg.screening_enabled {
                let cert_tri = certify(&tri, &it_tri, iter)?;
                let cert_l1 = certify(&l1, &it_l1, iter)?;
                let rep_tri = Rule::Simplex.evaluate(&tri, &it_tri, &cert_tri, &tri_mask, cfg.safety_slack)?;
                let rep_l1 = Rule::L1Constrained.evaluate(&l1, &it_l1, &cert_l1, &l1_mask, cfg.safety_slack)?;
                if !rep_tri.newly_fixed.is_empty() {
                    first_tri.get_or_insert(iter);
                    tri_mask.commit(&rep_tri.newly_fixed, &tri.matrix)?;
                }
                if !rep_l1.newly_fixed.is_empty() {
                    first_l1.get_or_insert(iter);
                    l1_mask.commit(&rep_l1.newly_fixed, &l1.matrix)?;
                }
                for f in &rep_l1.newly_fixed {
                    let both = tri_mask.status()[f.index] != Status::Active
                        && tri_mask.status()[n + f.index] != Status::Active;
                    if !both {
                        contradictions.push((iter, f.index));
                    }
                }
            }
            rows.push(MonitorRow {
                iter,
                gap,
                gap_l1,
                active_frac_l1: l1_mask.n_active() as f64 / n as f64,
                active_frac_simplex: (0..n)
                    .filter(|&i| {
                        tri_mask.status()[i] == Status::Active || tri_mask.status()[n + i] == Status::Active
                    })
                    .count() as f64
                    / n as f64,
            });
        }
        if done {
            break;
        }
        x = pfw.step(&tri, &it_tri)?;
        iter += 1;
    }
    Ok(MonitorTrace {
        rows,
        first_fire_l1: first_l1,
        first_fire_simplex: first_tri,
        l1_mask,
        simplex_mask: tri_mask,
        contradictions,
    })
}
