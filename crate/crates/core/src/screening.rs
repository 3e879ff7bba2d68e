//! Safe screening rules and the monotone mask they feed.

use std::fmt;

use crate::error::{Error, Result};
use crate::gaps::{GapCertificate, Iterate};
use crate::geometry::{elastic_ball_max_norm, ConstraintSpec, GroupLayout, RegularizerSpec};
use crate::linalg::{dot, norm, norm_sq, ColumnMatrix};
use crate::objectives::Objective;
use crate::problem::{Penalty, Problem};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Status {
    Active,
    FixedZero,
    FixedUpper,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Active => "active",
            Status::FixedZero => "fixed_zero",
            Status::FixedUpper => "fixed_upper",
        }
    }
}

/// Per-variable screening status. Fixed variables never become active again.
#[derive(Debug, Clone, PartialEq)]
pub struct ScreenMask {
    status: Vec<Status>,
    upper: f64,
    active: Vec<usize>,
    fixed_offset: Option<Vec<f64>>,
}

impl ScreenMask {
    /// All-active mask. `upper` is the value taken by `FixedUpper` variables.
    pub fn new(n: usize, upper: f64) -> Self {
        Self {
            status: vec![Status::Active; n],
            upper,
            active: (0..n).collect(),
            fixed_offset: None,
        }
    }

    pub fn for_problem(problem: &Problem) -> Self {
        let upper = match problem.constraint() {
            Some(ConstraintSpec::Box { upper }) => *upper,
            _ => 0.0,
        };
        Self::new(problem.n(), upper)
    }

    pub fn len(&self) -> usize {
        self.status.len()
    }

    pub fn is_empty(&self) -> bool {
        self.status.is_empty()
    }

    pub fn status(&self) -> &[Status] {
        &self.status
    }

    pub fn upper_value(&self) -> f64 {
        self.upper
    }

    /// Compressed index → original index.
    pub fn active_to_original(&self) -> &[usize] {
        &self.active
    }

    pub fn n_active(&self) -> usize {
        self.active.len()
    }

    pub fn n_fixed_zero(&self) -> usize {
        self.status.iter().filter(|&&s| s == Status::FixedZero).count()
    }

    pub fn n_fixed_upper(&self) -> usize {
        self.status.iter().filter(|&&s| s == Status::FixedUpper).count()
    }

    pub fn all_fixed(&self) -> bool {
        self.active.is_empty()
    }

    /// `Σ_{FixedUpper} C·aᵢ`, absent while no variable sits at the bound.
    pub fn fixed_offset(&self) -> Option<&[f64]> {
        self.fixed_offset.as_deref()
    }

    /// Value of variable `i` at the optimum when fixed.
    pub fn fixed_value(&self, i: usize) -> Option<f64> {
        match self.status[i] {
            Status::Active => None,
            Status::FixedZero => Some(0.0),
            Status::FixedUpper => Some(self.upper),
        }
    }

    /// Applies newly fixed statuses. Returns how many variables changed.
    pub fn commit(&mut self, fixed: &[Fixed], full: &ColumnMatrix) -> Result<usize> {
        let mut upper_changed = false;
        for f in fixed {
            if f.index >= self.status.len() {
                return Err(Error::InvalidParameter(format!("index {} out of range", f.index)));
            }
            if f.status == Status::Active {
                return Err(Error::InvalidParameter("cannot commit an active status".into()));
            }
            if self.status[f.index] != Status::Active {
                return Err(Error::InvalidParameter(format!(
                    "variable {} is already {}",
                    f.index,
                    self.status[f.index].as_str()
                )));
            }
            self.status[f.index] = f.status;
            upper_changed |= f.status == Status::FixedUpper;
        }
        if upper_changed {
            let mut offset = vec![0.0; full.n_rows()];
            for (i, s) in self.status.iter().enumerate() {
                if *s == Status::FixedUpper {
                    full.column(i).axpy(self.upper, &mut offset);
                }
            }
            self.fixed_offset = Some(offset);
        }
        self.active = (0..self.status.len())
            .filter(|&i| self.status[i] == Status::Active)
            .collect();
        Ok(fixed.len())
    }

    /// Full-length vector from the compressed variables and the fixed values.
    pub fn embed(&self, x_active: &[f64]) -> Vec<f64> {
        let mut x: Vec<f64> = (0..self.len()).map(|i| self.fixed_value(i).unwrap_or(0.0)).collect();
        for (&orig, &v) in self.active.iter().zip(x_active) {
            x[orig] = v;
        }
        x
    }

    /// Compressed vector of the active entries of a full-length vector.
    pub fn restrict(&self, x_full: &[f64]) -> Vec<f64> {
        self.active.iter().map(|&i| x_full[i]).collect()
    }
}

/// Compressed problem produced by [`apply_mask`].
#[derive(Debug, Clone, PartialEq)]
pub enum MaskedView {
    Active(Problem),
    /// Every variable is fixed; the solution is `mask.embed(&[])`.
    Solved,
}

/// Keeps only the active columns, folding `FixedUpper` columns into the offset.
pub fn apply_mask(mask: &ScreenMask, full: &Problem) -> Result<MaskedView> {
    if mask.len() != full.n() {
        return Err(Error::DimensionMismatch {
            what: "mask",
            expected: full.n(),
            found: mask.len(),
        });
    }
    if mask.all_fixed() {
        return Ok(MaskedView::Solved);
    }
    let keep = mask.active_to_original();
    if keep.len() == full.n() {
        return Ok(MaskedView::Active(full.clone()));
    }
    let matrix = full.matrix.select_columns(keep)?;
    let linear = full.linear.as_ref().map(|q| keep.iter().map(|&i| q[i]).collect());
    let mut offset = full.offset.clone();
    if let Some(fo) = mask.fixed_offset() {
        let o = offset.get_or_insert_with(|| vec![0.0; full.d()]);
        o.iter_mut().zip(fo).for_each(|(a, b)| *a += b);
    }
    let mut constant = full.constant;
    if let Some(q) = &full.linear {
        constant += mask
            .status()
            .iter()
            .zip(q)
            .filter(|(s, _)| **s == Status::FixedUpper)
            .map(|(_, qi)| mask.upper_value() * qi)
            .sum::<f64>();
    }
    let penalty = match &full.penalty {
        Penalty::Constraint(c) => Penalty::Constraint(c.clone()),
        Penalty::Regularizer(RegularizerSpec::Group { layout, weights }) => {
            let mut lengths = Vec::new();
            let mut kept_weights = Vec::new();
            for (g, r) in layout.ranges().iter().enumerate() {
                let alive = r.clone().filter(|&i| mask.status()[i] == Status::Active).count();
                if alive == r.len() {
                    lengths.push(alive);
                    kept_weights.push(weights[g]);
                } else if alive != 0 {
                    return Err(Error::InvalidParameter(format!("group {g} partially screened")));
                }
            }
            Penalty::Regularizer(RegularizerSpec::Group {
                layout: GroupLayout::from_lengths(&lengths)?,
                weights: kept_weights,
            })
        }
        Penalty::Regularizer(r) => Penalty::Regularizer(r.clone()),
    };
    Ok(MaskedView::Active(Problem {
        matrix,
        objective: full.objective.clone(),
        penalty,
        linear,
        offset,
        constant,
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RuleId {
    Simplex,
    L1Constrained,
    ElasticConstrained,
    Box,
    L1Penalized,
    ElasticPenalized,
    Group,
    SqHingeSvm,
    Meb,
    HingeSvm,
}

impl RuleId {
    pub fn as_str(self) -> &'static str {
        match self {
            RuleId::Simplex => "simplex",
            RuleId::L1Constrained => "l1_constrained",
            RuleId::ElasticConstrained => "elastic_constrained",
            RuleId::Box => "box",
            RuleId::L1Penalized => "l1_penalized",
            RuleId::ElasticPenalized => "elastic_penalized",
            RuleId::Group => "group",
            RuleId::SqHingeSvm => "sq_hinge_svm",
            RuleId::Meb => "meb",
            RuleId::HingeSvm => "hinge_svm",
        }
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Multiplier on `(Ax)ᵀw` in the elastic-ball rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ElasticFactor {
    /// `α / (s + (1−α)/2·t²)` with `t` the largest norm inside the ball.
    #[default]
    Certified,
    /// `α / (s + (1−α)/2)`, i.e. `2α/(3−α)` on the unit ball. Assumes `‖x*‖ ≤ 1`.
    Verbatim,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rule {
    Simplex,
    L1Constrained,
    ElasticConstrained(ElasticFactor),
    Box,
    L1Penalized,
    ElasticPenalized,
    Group,
    SqHingeSvm,
    Meb,
    HingeSvm { improved: bool },
}

/// One tested index.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Margin {
    pub index: usize,
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fixed {
    pub index: usize,
    pub status: Status,
    pub lhs: f64,
    pub rhs: f64,
}

const ROUNDING: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct RuleReport {
    pub rule: RuleId,
    /// Original indices, ascending.
    pub newly_fixed: Vec<Fixed>,
    pub tested: Vec<Margin>,
}

impl RuleReport {
    fn new(rule: RuleId) -> Self {
        Self {
            rule,
            newly_fixed: Vec::new(),
            tested: Vec::new(),
        }
    }

    fn test(&mut self, index: usize, lhs: f64, rhs: f64, margin: f64, slack: f64, status: Status) -> bool {
        self.test_scaled(index, lhs, rhs, margin, slack, 0.0, status)
    }

    /// Margins within rounding of `scale`, `|lhs|` or `|rhs|` never fire, so exact ties at the
    /// optimum stay unfixed.
    #[allow(clippy::too_many_arguments)]
    fn test_scaled(&mut self, index: usize, lhs: f64, rhs: f64, margin: f64, slack: f64, scale: f64, status: Status) -> bool {
        self.tested.push(Margin { index, lhs, rhs });
        let guard = ROUNDING * (1.0 + scale + lhs.abs() + rhs.abs());
        if margin > slack + guard {
            self.newly_fixed.push(Fixed {
                index,
                status,
                lhs,
                rhs,
            });
            true
        } else {
            false
        }
    }

    pub fn fixed_indices(&self) -> Vec<usize> {
        self.newly_fixed.iter().map(|f| f.index).collect()
    }
}

/// Screening rows as CSV: `rule_id,iter,index,status,lhs,rhs`.
pub fn reports_csv(reports: &[(u64, RuleReport)]) -> String {
    let mut out = String::from("rule_id,iter,index,status,lhs,rhs\n");
    for (iter, r) in reports {
        for f in &r.newly_fixed {
            out.push_str(&format!(
                "{},{},{},{},{:e},{:e}\n",
                r.rule,
                iter,
                f.index,
                f.status.as_str(),
                f.lhs,
                f.rhs
            ));
        }
    }
    out
}

/// View index → original index, for either a compressed view or the full problem.
fn index_map(problem: &Problem, mask: &ScreenMask) -> Result<Vec<(usize, usize)>> {
    if problem.n() == mask.n_active() {
        Ok(mask.active_to_original().iter().copied().enumerate().collect())
    } else if problem.n() == mask.len() {
        Ok((0..mask.len()).filter(|&i| mask.status()[i] == Status::Active).map(|i| (i, i)).collect())
    } else {
        Err(Error::DimensionMismatch {
            what: "mask against problem",
            expected: mask.n_active(),
            found: problem.n(),
        })
    }
}

fn incompatible(rule: &'static str, reason: impl Into<String>) -> Error {
    Error::IncompatibleRule {
        rule,
        reason: reason.into(),
    }
}

fn need_grad_radius(cert: &GapCertificate) -> Result<f64> {
    cert.grad_radius
        .ok_or(Error::MissingStrongConvexity("certificate has no gradient radius"))
}

impl Rule {
    pub fn id(&self) -> RuleId {
        match self {
            Rule::Simplex => RuleId::Simplex,
            Rule::L1Constrained => RuleId::L1Constrained,
            Rule::ElasticConstrained(_) => RuleId::ElasticConstrained,
            Rule::Box => RuleId::Box,
            Rule::L1Penalized => RuleId::L1Penalized,
            Rule::ElasticPenalized => RuleId::ElasticPenalized,
            Rule::Group => RuleId::Group,
            Rule::SqHingeSvm => RuleId::SqHingeSvm,
            Rule::Meb => RuleId::Meb,
            Rule::HingeSvm { .. } => RuleId::HingeSvm,
        }
    }

    /// Fails when the rule's theorem does not cover this problem.
    pub fn check_compatible(&self, problem: &Problem) -> Result<()> {
        let name = self.id().as_str();
        let needs_mu = || {
            problem
                .objective
                .strong_convexity()
                .map(|_| ())
                .ok_or(Error::MissingStrongConvexity(problem.objective.name()))
        };
        let no_linear = || {
            if problem.linear.is_some() {
                Err(incompatible(name, "linear term not supported"))
            } else {
                Ok(())
            }
        };
        let constraint = problem.constraint();
        let reg = problem.regularizer();
        match self {
            Rule::Simplex => {
                if constraint != Some(&ConstraintSpec::Simplex) {
                    return Err(incompatible(name, "needs the unit simplex"));
                }
                needs_mu()
            }
            Rule::L1Constrained => {
                if !matches!(constraint, Some(ConstraintSpec::L1Ball { .. })) {
                    return Err(incompatible(name, "needs an L1 ball"));
                }
                no_linear()?;
                needs_mu()
            }
            Rule::ElasticConstrained(_) => {
                if !matches!(constraint, Some(ConstraintSpec::ElasticNetBall { .. })) {
                    return Err(incompatible(name, "needs an elastic-net ball"));
                }
                no_linear()?;
                needs_mu()
            }
            Rule::Box => {
                if !matches!(constraint, Some(ConstraintSpec::Box { .. })) {
                    return Err(incompatible(name, "needs a box"));
                }
                Ok(())
            }
            Rule::L1Penalized => match reg {
                Some(RegularizerSpec::L1 { .. }) => Ok(()),
                _ => Err(incompatible(name, "needs an L1 penalty")),
            },
            Rule::ElasticPenalized => match reg {
                Some(RegularizerSpec::ElasticNetUnit { .. }) => Ok(()),
                Some(RegularizerSpec::ElasticNet { .. }) => match problem.objective {
                    Objective::SquaredError { .. } => Ok(()),
                    _ => Err(incompatible(name, "regression form needs squared error")),
                },
                _ => Err(incompatible(name, "needs an elastic-net penalty")),
            },
            Rule::Group => match reg {
                Some(RegularizerSpec::Group { .. }) => Ok(()),
                _ => Err(incompatible(name, "needs a group penalty")),
            },
            Rule::SqHingeSvm => {
                if constraint != Some(&ConstraintSpec::Simplex) || problem.objective != Objective::PureQuadratic {
                    return Err(incompatible(name, "needs ½‖Ax‖² over the simplex"));
                }
                no_linear()
            }
            Rule::Meb => {
                if constraint != Some(&ConstraintSpec::Simplex) || problem.objective != Objective::MebQuadratic {
                    return Err(incompatible(name, "needs ‖Ax‖² over the simplex"));
                }
                let q = problem
                    .linear
                    .as_ref()
                    .ok_or_else(|| incompatible(name, "needs the −‖aᵢ‖² linear term"))?;
                let norms = problem.matrix.col_norms();
                let ok = q
                    .iter()
                    .zip(norms)
                    .all(|(qi, ni)| (qi + ni * ni).abs() <= 1e-12 * (1.0 + ni * ni));
                if ok {
                    Ok(())
                } else {
                    Err(incompatible(name, "linear term is not −‖aᵢ‖²"))
                }
            }
            Rule::HingeSvm { .. } => {
                if !matches!(constraint, Some(ConstraintSpec::Box { .. }))
                    || problem.objective != Objective::PureQuadratic
                {
                    return Err(incompatible(name, "needs ½‖Ax‖² over a box"));
                }
                match &problem.linear {
                    Some(q) if q.iter().all(|&v| v == -1.0) => Ok(()),
                    _ => Err(incompatible(name, "needs the −1ᵀx linear term")),
                }
            }
        }
    }

    /// Evaluates the rule. `problem` is either the compressed view for `mask`
    /// or the full problem; indices in the report are original.
    pub fn evaluate(
        &self,
        problem: &Problem,
        it: &Iterate,
        cert: &GapCertificate,
        mask: &ScreenMask,
        slack: f64,
    ) -> Result<RuleReport> {
        self.check_compatible(problem)?;
        match self {
            Rule::Simplex => screen_simplex(problem, it, cert, mask, slack),
            Rule::L1Constrained => screen_l1_constrained(problem, it, cert, mask, slack),
            Rule::ElasticConstrained(factor) => screen_elastic_constrained(problem, it, cert, mask, *factor, slack),
            Rule::Box => screen_box(problem, it, cert, mask, slack),
            Rule::L1Penalized => screen_l1_penalized(problem, it, cert, mask, slack),
            Rule::ElasticPenalized => screen_elastic_penalized(problem, it, cert, mask, slack),
            Rule::Group => screen_group(problem, it, cert, mask, slack),
            Rule::SqHingeSvm => screen_sq_hinge_svm(problem, it, mask, slack),
            Rule::Meb => screen_meb(problem, it, mask, slack),
            Rule::HingeSvm { improved } => screen_hinge_svm(problem, it, cert, mask, *improved, slack),
        }
    }
}

/// Rules that apply to a problem by default.
pub fn default_rules(problem: &Problem) -> Vec<Rule> {
    let rule = match &problem.penalty {
        Penalty::Constraint(ConstraintSpec::Simplex) => match problem.objective {
            Objective::PureQuadratic if problem.linear.is_none() => Rule::SqHingeSvm,
            Objective::MebQuadratic if Rule::Meb.check_compatible(problem).is_ok() => Rule::Meb,
            _ => Rule::Simplex,
        },
        Penalty::Constraint(ConstraintSpec::L1Ball { .. }) => Rule::L1Constrained,
        Penalty::Constraint(ConstraintSpec::ElasticNetBall { .. }) => {
            Rule::ElasticConstrained(ElasticFactor::Certified)
        }
        Penalty::Constraint(ConstraintSpec::Box { .. }) => {
            if (Rule::HingeSvm { improved: true }).check_compatible(problem).is_ok() {
                Rule::HingeSvm { improved: true }
            } else {
                Rule::Box
            }
        }
        Penalty::Regularizer(RegularizerSpec::L1 { .. }) => Rule::L1Penalized,
        Penalty::Regularizer(RegularizerSpec::Group { .. }) => Rule::Group,
        Penalty::Regularizer(_) => Rule::ElasticPenalized,
    };
    if rule.check_compatible(problem).is_ok() {
        vec![rule]
    } else {
        Vec::new()
    }
}

/// `(aᵢ − Ax)ᵀw + (eᵢ − x)ᵀq > L√(G_W/µ)·‖aᵢ − Ax‖ ⇒ xᵢ* = 0` on the simplex.
pub fn screen_simplex(
    problem: &Problem,
    it: &Iterate,
    cert: &GapCertificate,
    mask: &ScreenMask,
    slack: f64,
) -> Result<RuleReport> {
    let radius = need_grad_radius(cert)?;
    let gx = dot(&it.grad_x, &it.x);
    let ny = norm_sq(&it.y);
    let mut report = RuleReport::new(RuleId::Simplex);
    for (j, orig) in index_map(problem, mask)? {
        let lhs = it.grad_x[j] - gx;
        let rhs = radius * problem.matrix.column(j).dist_sq(&it.y, ny).sqrt();
        report.test(orig, lhs, rhs, lhs - rhs, slack, Status::FixedZero);
    }
    Ok(report)
}

/// `r|aᵢᵀw| + (Ax)ᵀw + (r‖aᵢ‖ + ‖Ax‖)·L√(G_W/µ) < 0 ⇒ xᵢ* = 0` on the radius-`r` ball.
pub fn screen_l1_constrained(
    problem: &Problem,
    it: &Iterate,
    cert: &GapCertificate,
    mask: &ScreenMask,
    slack: f64,
) -> Result<RuleReport> {
    let r = match problem.constraint() {
        Some(ConstraintSpec::L1Ball { radius }) => *radius,
        _ => return Err(incompatible("l1_constrained", "needs an L1 ball")),
    };
    let delta = need_grad_radius(cert)?;
    let yw = dot(&it.y, &it.w);
    let ny = norm(&it.y);
    let norms = problem.matrix.col_norms();
    let mut report = RuleReport::new(RuleId::L1Constrained);
    for (j, orig) in index_map(problem, mask)? {
        let lhs = r * it.grad_x[j].abs() + yw + (r * norms[j] + ny) * delta;
        report.test(orig, lhs, 0.0, -lhs, slack, Status::FixedZero);
    }
    Ok(report)
}

/// Multiplier `κ` for the elastic-ball rule.
pub fn elastic_factor(alpha: f64, scale: f64, factor: ElasticFactor) -> f64 {
    let bound = match factor {
        ElasticFactor::Certified => elastic_ball_max_norm(alpha, scale),
        ElasticFactor::Verbatim => 1.0,
    };
    alpha / (scale + 0.5 * (1.0 - alpha) * bound * bound)
}

/// `|aᵢᵀw| + κ(Ax)ᵀw + (‖aᵢ‖ + κ‖Ax‖)·L√(G_W/µ) < 0 ⇒ xᵢ* = 0` on the elastic-net ball.
pub fn screen_elastic_constrained(
    problem: &Problem,
    it: &Iterate,
    cert: &GapCertificate,
    mask: &ScreenMask,
    factor: ElasticFactor,
    slack: f64,
) -> Result<RuleReport> {
    let (alpha, scale) = match problem.constraint() {
        Some(ConstraintSpec::ElasticNetBall { alpha, scale }) => (*alpha, *scale),
        _ => return Err(incompatible("elastic_constrained", "needs an elastic-net ball")),
    };
    let kappa = elastic_factor(alpha, scale, factor);
    let delta = need_grad_radius(cert)?;
    let yw = dot(&it.y, &it.w);
    let ny = norm(&it.y);
    let norms = problem.matrix.col_norms();
    let mut report = RuleReport::new(RuleId::ElasticConstrained);
    for (j, orig) in index_map(problem, mask)? {
        let lhs = it.grad_x[j].abs() + kappa * yw + (norms[j] + kappa * ny) * delta;
        report.test(orig, lhs, 0.0, -lhs, slack, Status::FixedZero);
    }
    Ok(report)
}

/// `aᵢᵀw + qᵢ ∓ ‖aᵢ‖√(2LG)` compared with 0 on the box `[0, C]ⁿ`.
pub fn screen_box(
    problem: &Problem,
    it: &Iterate,
    cert: &GapCertificate,
    mask: &ScreenMask,
    slack: f64,
) -> Result<RuleReport> {
    let norms = problem.matrix.col_norms();
    let mut report = RuleReport::new(RuleId::Box);
    for (j, orig) in index_map(problem, mask)? {
        let g = it.grad_x[j];
        let r = norms[j] * cert.dual_radius;
        if !report.test(orig, g, r, g - r, slack, Status::FixedZero) {
            report.test(orig, g, -r, -r - g, slack, Status::FixedUpper);
        }
    }
    Ok(report)
}

/// Hinge-loss SVM dual: `aᵢᵀAx − 1 ∓ ‖aᵢ‖√(2G)`, or `√G` when `improved`.
pub fn screen_hinge_svm(
    problem: &Problem,
    it: &Iterate,
    cert: &GapCertificate,
    mask: &ScreenMask,
    improved: bool,
    slack: f64,
) -> Result<RuleReport> {
    let root = if improved {
        cert.duality_gap.sqrt()
    } else {
        (2.0 * cert.duality_gap).sqrt()
    };
    let norms = problem.matrix.col_norms();
    let mut report = RuleReport::new(RuleId::HingeSvm);
    for (j, orig) in index_map(problem, mask)? {
        let g = problem.matrix.col_dot(j, &it.w) - 1.0;
        let r = norms[j] * root;
        if !report.test(orig, g, r, g - r, slack, Status::FixedZero) {
            report.test(orig, g, -r, -r - g, slack, Status::FixedUpper);
        }
    }
    Ok(report)
}

/// `|aᵢᵀw̃| < λ − ‖aᵢ‖√(2LG) ⇒ xᵢ* = 0` with `w̃` the rescaled dual point.
pub fn screen_l1_penalized(
    problem: &Problem,
    it: &Iterate,
    cert: &GapCertificate,
    mask: &ScreenMask,
    slack: f64,
) -> Result<RuleReport> {
    let lambda = match problem.regularizer() {
        Some(RegularizerSpec::L1 { lambda }) => *lambda,
        _ => return Err(incompatible("l1_penalized", "needs an L1 penalty")),
    };
    let norms = problem.matrix.col_norms();
    let mut report = RuleReport::new(RuleId::L1Penalized);
    for (j, orig) in index_map(problem, mask)? {
        let lhs = (cert.dual_scale * it.grad_x[j]).abs();
        let rhs = lambda - norms[j] * cert.dual_radius;
        report.test(orig, lhs, rhs, rhs - lhs, slack, Status::FixedZero);
    }
    Ok(report)
}

/// Elastic-net penalties.
///
/// Unit form: `|aᵢᵀw| < α − ‖aᵢ‖√(2LG)`.
/// Regression form: `|aᵢᵀ(Ax − b) + 2λ₂xᵢ| < λ₁ − √(2(‖aᵢ‖² + 2λ₂)G)`, with the
/// dual point rescaled by `cert.dual_scale`.
pub fn screen_elastic_penalized(
    problem: &Problem,
    it: &Iterate,
    cert: &GapCertificate,
    mask: &ScreenMask,
    slack: f64,
) -> Result<RuleReport> {
    let norms = problem.matrix.col_norms();
    let mut report = RuleReport::new(RuleId::ElasticPenalized);
    match problem.regularizer() {
        Some(RegularizerSpec::ElasticNetUnit { alpha }) => {
            for (j, orig) in index_map(problem, mask)? {
                let lhs = it.grad_x[j].abs();
                let rhs = alpha - norms[j] * cert.dual_radius;
                report.test(orig, lhs, rhs, rhs - lhs, slack, Status::FixedZero);
            }
        }
        Some(RegularizerSpec::ElasticNet { l1, l2 }) => {
            if !matches!(problem.objective, Objective::SquaredError { .. }) {
                return Err(incompatible("elastic_penalized", "regression form needs squared error"));
            }
            let g = cert.duality_gap;
            for (j, orig) in index_map(problem, mask)? {
                let lhs = (cert.dual_scale * (it.grad_x[j] + 2.0 * l2 * it.x[j])).abs();
                let rhs = l1 - (2.0 * (norms[j] * norms[j] + 2.0 * l2) * g).sqrt();
                report.test(orig, lhs, rhs, rhs - lhs, slack, Status::FixedZero);
            }
        }
        _ => return Err(incompatible("elastic_penalized", "needs an elastic-net penalty")),
    }
    Ok(report)
}

/// `‖A_gᵀw̃‖ + ‖A_g‖_F·√(2LG) < weight_g ⇒ x_g* = 0`, whole groups at a time.
pub fn screen_group(
    problem: &Problem,
    it: &Iterate,
    cert: &GapCertificate,
    mask: &ScreenMask,
    slack: f64,
) -> Result<RuleReport> {
    let (layout, weights) = match problem.regularizer() {
        Some(RegularizerSpec::Group { layout, weights }) => (layout, weights),
        _ => return Err(incompatible("group", "needs a group penalty")),
    };
    let map = index_map(problem, mask)?;
    let mut report = RuleReport::new(RuleId::Group);
    for (g, range) in layout.ranges().iter().enumerate() {
        if map.len() == problem.n() || range.clone().all(|j| mask.status()[j] == Status::Active) {
            let block = &it.grad_x[range.clone()];
            let lhs = cert.dual_scale * norm(block) + problem.matrix.group_frobenius(range.clone())? * cert.dual_radius;
            let rhs = weights[g];
            let fires = rhs - lhs > slack;
            for j in range.clone() {
                let orig = if map.len() == problem.n() { map[j].1 } else { j };
                report.test(orig, lhs, rhs, if fires { 1.0 } else { -1.0 }, 0.0, Status::FixedZero);
            }
        }
    }
    Ok(report)
}

/// Squared-hinge SVM on the simplex:
/// `(aᵢ − Ax)ᵀAx > √(maxⱼ (Ax − aⱼ)ᵀAx)·‖aᵢ − Ax‖ ⇒ xᵢ* = 0`.
pub fn screen_sq_hinge_svm(problem: &Problem, it: &Iterate, mask: &ScreenMask, slack: f64) -> Result<RuleReport> {
    let ny = norm_sq(&it.y);
    let map = index_map(problem, mask)?;
    let dots: Vec<f64> = map.iter().map(|&(j, _)| problem.matrix.col_dot(j, &it.y)).collect();
    let worst = dots.iter().fold(f64::INFINITY, |m, &v| m.min(v));
    let root = (ny - worst).max(0.0).sqrt();
    let mut report = RuleReport::new(RuleId::SqHingeSvm);
    for (&(j, orig), &dj) in map.iter().zip(&dots) {
        let lhs = dj - ny;
        let rhs = root * problem.matrix.column(j).dist_sq(&it.y, ny).sqrt();
        let scale = dj.abs().max(ny);
        report.test_scaled(orig, lhs, rhs, lhs - rhs, slack, scale, Status::FixedZero);
    }
    Ok(report)
}

/// Minimum enclosing ball dual with `cᵢ = −‖aᵢ‖²`:
/// `(eᵢ − x)ᵀ(2AᵀAx + c) > 2√(½ maxⱼ (x − eⱼ)ᵀ(2AᵀAx + c))·‖aᵢ − Ax‖ ⇒ xᵢ* = 0`.
pub fn screen_meb(problem: &Problem, it: &Iterate, mask: &ScreenMask, slack: f64) -> Result<RuleReport> {
    let h = &it.grad_x;
    let hx = dot(h, &it.x);
    let map = index_map(problem, mask)?;
    let hmin = map.iter().fold(f64::INFINITY, |m, &(j, _)| m.min(h[j]));
    let root = 2.0 * (0.5 * (hx - hmin).max(0.0)).sqrt();
    let ny = norm_sq(&it.y);
    let mut report = RuleReport::new(RuleId::Meb);
    for (j, orig) in map {
        let lhs = h[j] - hx;
        let rhs = root * problem.matrix.column(j).dist_sq(&it.y, ny).sqrt();
        let scale = h[j].abs().max(hx.abs()).max(ny);
        report.test_scaled(orig, lhs, rhs, lhs - rhs, slack, scale, Status::FixedZero);
    }
    Ok(report)
}
