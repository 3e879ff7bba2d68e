//! High-precision reference solutions and brute-force checks used to audit
//! the screening rules. Nothing here calls into [`crate::screening`].

use crate::error::{Error, Result};
use crate::geometry::{ConstraintSpec, RegularizerSpec};
use crate::linalg::{dot, norm, norm1, norm_inf, norm_sq};
use crate::objectives::Objective;
use crate::problem::{Penalty, Problem};
use crate::screening::Status;

pub const REFERENCE_GAP: f64 = 1e-12;
pub const SAFETY_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceSolution {
    pub x: Vec<f64>,
    pub gap: f64,
    pub method: &'static str,
}

/// Euclidean projection onto the unit simplex by sorting.
pub fn project_simplex(v: &[f64]) -> Vec<f64> {
    let mut u = v.to_vec();
    u.sort_by(|a, b| b.total_cmp(a));
    let mut cum = 0.0;
    let mut theta = 0.0;
    for (k, &uk) in u.iter().enumerate() {
        cum += uk;
        let t = (cum - 1.0) / (k + 1) as f64;
        if uk - t > 0.0 {
            theta = t;
        }
    }
    v.iter().map(|&x| (x - theta).max(0.0)).collect()
}

pub fn project_l1_ball(v: &[f64], r: f64) -> Vec<f64> {
    if norm1(v) <= r {
        return v.to_vec();
    }
    let mags: Vec<f64> = v.iter().map(|x| x.abs() / r).collect();
    let p = project_simplex(&mags);
    v.iter().zip(p).map(|(x, m)| x.signum() * m * r).collect()
}

/// Projection onto `{α‖z‖₁ + (1−α)/2‖z‖² ≤ s}` by bisection on the multiplier.
pub fn project_elastic_ball(v: &[f64], alpha: f64, s: f64) -> Vec<f64> {
    let h = |z: &[f64]| alpha * norm1(z) + 0.5 * (1.0 - alpha) * norm_sq(z);
    if h(v) <= s {
        return v.to_vec();
    }
    let at = |u: f64| -> Vec<f64> {
        v.iter()
            .map(|&t| {
                let m = (t.abs() - u * alpha).max(0.0) / (1.0 + u * (1.0 - alpha));
                t.signum() * m
            })
            .collect()
    };
    let (mut lo, mut hi) = (0.0, 1.0);
    while h(&at(hi)) > s {
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if h(&at(mid)) > s {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    at(hi)
}

fn project(set: &ConstraintSpec, v: &[f64]) -> Vec<f64> {
    match *set {
        ConstraintSpec::Simplex => project_simplex(v),
        ConstraintSpec::L1Ball { radius } => project_l1_ball(v, radius),
        ConstraintSpec::ElasticNetBall { alpha, scale } => project_elastic_ball(v, alpha, scale),
        ConstraintSpec::Box { upper } => v.iter().map(|t| t.clamp(0.0, upper)).collect(),
    }
}

fn soft(v: f64, t: f64) -> f64 {
    v.signum() * (v.abs() - t).max(0.0)
}

fn prox(reg: &RegularizerSpec, v: &[f64], t: f64) -> Vec<f64> {
    match reg {
        RegularizerSpec::L1 { lambda } => v.iter().map(|&x| soft(x, t * lambda)).collect(),
        RegularizerSpec::ElasticNet { l1, l2 } => {
            v.iter().map(|&x| soft(x, t * l1) / (1.0 + 2.0 * t * l2)).collect()
        }
        RegularizerSpec::ElasticNetUnit { alpha } => {
            v.iter().map(|&x| soft(x, t * alpha) / (1.0 + t * (1.0 - alpha))).collect()
        }
        RegularizerSpec::Group { layout, weights } => {
            let mut out = vec![0.0; v.len()];
            for (r, w) in layout.ranges().iter().zip(weights) {
                let nv = norm(&v[r.clone()]);
                if nv > t * w {
                    let f = 1.0 - t * w / nv;
                    for i in r.clone() {
                        out[i] = f * v[i];
                    }
                }
            }
            out
        }
    }
}

fn penalty(reg: &RegularizerSpec, x: &[f64]) -> f64 {
    match reg {
        RegularizerSpec::L1 { lambda } => lambda * norm1(x),
        RegularizerSpec::ElasticNet { l1, l2 } => l1 * norm1(x) + l2 * norm_sq(x),
        RegularizerSpec::ElasticNetUnit { alpha } => alpha * norm1(x) + 0.5 * (1.0 - alpha) * norm_sq(x),
        RegularizerSpec::Group { layout, weights } => layout
            .ranges()
            .iter()
            .zip(weights)
            .map(|(r, w)| w * norm(&x[r.clone()]))
            .sum(),
    }
}

/// Value, `x`-gradient, `∇f` and `y`.
type SmoothEval = (f64, Vec<f64>, Vec<f64>, Vec<f64>);

struct Smooth<'a> {
    p: &'a Problem,
}

impl Smooth<'_> {
    /// Smooth part `f(Ax + o) + qᵀx`, its `x`-gradient, and `∇f`.
    fn eval(&self, x: &[f64]) -> Result<SmoothEval> {
        let mut y = self.p.matrix.mat_vec(x)?;
        if let Some(o) = &self.p.offset {
            y.iter_mut().zip(o).for_each(|(a, b)| *a += b);
        }
        let w = self.p.objective.gradient(&y)?;
        let mut g = self.p.matrix.mat_t_vec(&w)?;
        let mut v = self.p.objective.value(&y)?;
        if let Some(q) = &self.p.linear {
            v += dot(q, x);
            g.iter_mut().zip(q).for_each(|(a, b)| *a += b);
        }
        Ok((v, g, w, y))
    }
}

/// Duality gap of `x`, computed from the optimality structure of each set or
/// penalty directly.
pub fn reference_gap(p: &Problem, x: &[f64]) -> Result<f64> {
    let (_, g, w, y) = Smooth { p }.eval(x)?;
    match &p.penalty {
        Penalty::Constraint(set) => Ok(match *set {
            ConstraintSpec::Simplex => {
                let gmin = g.iter().copied().fold(f64::INFINITY, f64::min);
                x.iter().zip(&g).map(|(xi, gi)| xi * (gi - gmin)).sum()
            }
            ConstraintSpec::L1Ball { radius } => dot(&g, x) + radius * norm_inf(&g),
            ConstraintSpec::Box { upper } => x
                .iter()
                .zip(&g)
                .map(|(&xi, &gi)| if gi >= 0.0 { gi * xi } else { gi * (xi - upper) })
                .sum(),
            ConstraintSpec::ElasticNetBall { alpha, scale } => {
                let neg: Vec<f64> = g.iter().map(|v| -v).collect();
                let z = elastic_maximizer(&neg, alpha, scale);
                dot(&g, x) + dot(&neg, &z)
            }
        }),
        Penalty::Regularizer(reg) => {
            let f = &p.objective;
            let atw = p.matrix.mat_t_vec(&w)?;
            let primal = f.value(&y)? + penalty(reg, x);
            let offset = |s: f64| p.offset.as_ref().map_or(0.0, |o| s * dot(&w, o));
            let tail = |t: f64, level: f64| {
                let e = (t.abs() - level).max(0.0);
                e * e
            };
            let (s, conj_g) = match reg {
                RegularizerSpec::L1 { lambda } => (norm_inf(&atw).max(*lambda).recip() * lambda, 0.0),
                RegularizerSpec::ElasticNet { l1, l2 } if *l2 == 0.0 => {
                    (norm_inf(&atw).max(*l1).recip() * l1, 0.0)
                }
                RegularizerSpec::ElasticNet { l1, l2 } => {
                    (1.0, atw.iter().map(|&t| tail(t, *l1)).sum::<f64>() / (4.0 * l2))
                }
                RegularizerSpec::ElasticNetUnit { alpha } => (
                    1.0,
                    atw.iter().map(|&t| tail(t, *alpha)).sum::<f64>() / (2.0 * (1.0 - alpha)),
                ),
                RegularizerSpec::Group { layout, weights } => {
                    let mut s: f64 = 1.0;
                    for (r, &wt) in layout.ranges().iter().zip(weights) {
                        let nb = norm(&atw[r.clone()]);
                        if nb > wt {
                            s = s.min(wt / nb);
                        }
                    }
                    (s, 0.0)
                }
            };
            let ws: Vec<f64> = w.iter().map(|v| s * v).collect();
            Ok(primal + f.conjugate_value(&ws)? - offset(s) + conj_g)
        }
    }
}

/// Maximizer of `vᵀz` on the elastic ball via bisection on the multiplier.
fn elastic_maximizer(v: &[f64], alpha: f64, s: f64) -> Vec<f64> {
    if norm_inf(v) == 0.0 {
        return vec![0.0; v.len()];
    }
    if alpha >= 1.0 {
        let mut best = 0;
        for i in 0..v.len() {
            if v[i].abs() > v[best].abs() {
                best = i;
            }
        }
        let mut z = vec![0.0; v.len()];
        z[best] = v[best].signum() * s / alpha;
        return z;
    }
    let h = |z: &[f64]| alpha * norm1(z) + 0.5 * (1.0 - alpha) * norm_sq(z);
    // z(p) = sign(v)·[p|v| − α]₊/(1−α), increasing in p.
    let at = |p: f64| -> Vec<f64> {
        v.iter()
            .map(|&t| t.signum() * (p * t.abs() - alpha).max(0.0) / (1.0 - alpha))
            .collect()
    };
    let (mut lo, mut hi) = (0.0, 1.0);
    while h(&at(hi)) < s {
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if h(&at(mid)) < s {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    at(0.5 * (lo + hi))
}

/// Accelerated proximal/projected gradient with backtracking and
/// function-value restarts.
fn fista(p: &Problem, x0: Vec<f64>, tol: f64, max_iter: usize) -> Result<(Vec<f64>, f64)> {
    let smooth = Smooth { p };
    let quad = p.objective.quadratic_scale();
    let mut lip = (p.objective.lipschitz() * p.matrix.spectral_norm_sq(7)).max(1e-12);
    let step = |v: &[f64], t: f64| -> Vec<f64> {
        match &p.penalty {
            Penalty::Constraint(set) => project(set, v),
            Penalty::Regularizer(reg) => prox(reg, v, t),
        }
    };
    let full = |x: &[f64], smooth_val: f64| match &p.penalty {
        Penalty::Constraint(_) => smooth_val,
        Penalty::Regularizer(reg) => smooth_val + penalty(reg, x),
    };
    let mut x = step(&x0, 1.0 / lip);
    let mut z = x.clone();
    let mut theta = 1.0f64;
    let mut fx = full(&x, smooth.eval(&x)?.0);
    let mut best = (x.clone(), f64::INFINITY);
    for k in 0..max_iter {
        let (fz, gz, _, _) = smooth.eval(&z)?;
        let (xn, fxn) = loop {
            let t = 1.0 / lip;
            let v: Vec<f64> = z.iter().zip(&gz).map(|(a, b)| a - t * b).collect();
            let xn = step(&v, t);
            let dx: Vec<f64> = xn.iter().zip(&z).map(|(a, b)| a - b).collect();
            let fxn = smooth.eval(&xn)?.0;
            let ok = match quad {
                // Exact curvature along dx, free of cancellation.
                Some(c) => c * norm_sq(&p.matrix.mat_vec(&dx)?) <= lip * norm_sq(&dx) * (1.0 + 1e-12),
                None => fxn <= fz + dot(&gz, &dx) + 0.5 * lip * norm_sq(&dx) + 1e-13 * (1.0 + fz.abs()),
            };
            if ok {
                break (xn, fxn);
            }
            lip *= 2.0;
        };
        let fn_ = full(&xn, fxn);
        if fn_ > fx && theta > 1.0 {
            theta = 1.0;
            z = x.clone();
            continue;
        }
        let tn = 0.5 * (1.0 + (1.0 + 4.0 * theta * theta).sqrt());
        let beta = (theta - 1.0) / tn;
        z = xn.iter().zip(&x).map(|(a, b)| a + beta * (a - b)).collect();
        theta = tn;
        x = xn;
        fx = fn_;
        if k % 10 == 0 {
            let gap = reference_gap(p, &x)?;
            if gap < best.1 {
                best = (x.clone(), gap);
            }
            if gap <= tol {
                return Ok(best);
            }
        }
    }
    Ok(best)
}

/// Exact cyclic coordinate descent on the box for quadratic `f`.
pub fn box_coordinate_descent(p: &Problem, tol: f64, max_sweeps: usize) -> Result<ReferenceSolution> {
    let upper = match p.constraint() {
        Some(ConstraintSpec::Box { upper }) => *upper,
        _ => return Err(Error::InvalidParameter("box reference needs a box".into())),
    };
    let c = match p.objective {
        Objective::SquaredError { .. } | Objective::PureQuadratic => 1.0,
        Objective::MebQuadratic => 2.0,
        Objective::Logistic => return Err(Error::InvalidParameter("quadratic objective required".into())),
    };
    let n = p.n();
    let mut x = vec![0.0; n];
    let mut y = p.offset.clone().unwrap_or_else(|| vec![0.0; p.d()]);
    let mut gap = f64::INFINITY;
    for sweep in 0..max_sweeps {
        for j in 0..n {
            let w = p.objective.gradient(&y)?;
            let col = p.matrix.column(j);
            let g = col.dot(&w) + p.linear_at(j);
            let h = c * col.norm_sq();
            let new = if h > 0.0 {
                (x[j] - g / h).clamp(0.0, upper)
            } else if g < 0.0 {
                upper
            } else {
                0.0
            };
            col.axpy(new - x[j], &mut y);
            x[j] = new;
        }
        if sweep % 5 == 0 {
            gap = reference_gap(p, &x)?;
            if gap <= tol {
                break;
            }
        }
    }
    if gap > tol {
        return Err(Error::BudgetExhausted { gap, target: tol });
    }
    Ok(ReferenceSolution {
        x,
        gap,
        method: "box_coordinate_descent",
    })
}

/// Cyclic coordinate descent for squared-error L1 or elastic-net penalties.
pub fn lasso_coordinate_descent(p: &Problem, tol: f64, max_sweeps: usize) -> Result<ReferenceSolution> {
    let b = match &p.objective {
        Objective::SquaredError { b } => b,
        _ => return Err(Error::InvalidParameter("squared error required".into())),
    };
    let (l1, l2) = match p.regularizer() {
        Some(RegularizerSpec::L1 { lambda }) => (*lambda, 0.0),
        Some(RegularizerSpec::ElasticNet { l1, l2 }) => (*l1, *l2),
        _ => return Err(Error::InvalidParameter("L1 or elastic-net penalty required".into())),
    };
    let n = p.n();
    let mut x = vec![0.0; n];
    let mut r: Vec<f64> = b.iter().map(|v| -v).collect();
    let mut gap = f64::INFINITY;
    for sweep in 0..max_sweeps {
        for j in 0..n {
            let col = p.matrix.column(j);
            let h = col.norm_sq();
            if h == 0.0 {
                continue;
            }
            let rho = h * x[j] - col.dot(&r);
            let new = soft(rho, l1) / (h + 2.0 * l2);
            col.axpy(new - x[j], &mut r);
            x[j] = new;
        }
        if sweep % 5 == 0 {
            gap = reference_gap(p, &x)?;
            if gap <= tol {
                break;
            }
        }
    }
    if gap > tol {
        return Err(Error::BudgetExhausted { gap, target: tol });
    }
    Ok(ReferenceSolution {
        x,
        gap,
        method: "lasso_coordinate_descent",
    })
}

/// High-precision solution with gap at most [`REFERENCE_GAP`].
pub fn solve_reference(p: &Problem) -> Result<ReferenceSolution> {
    if let (Some(RegularizerSpec::L1 { lambda }), Objective::SquaredError { b }) = (p.regularizer(), &p.objective) {
        if p.offset.is_none() && norm_inf(&p.matrix.mat_t_vec(b)?) <= *lambda {
            return Ok(ReferenceSolution {
                x: vec![0.0; p.n()],
                gap: reference_gap(p, &vec![0.0; p.n()])?,
                method: "closed_form_zero",
            });
        }
    }
    if let Some(ConstraintSpec::Box { .. }) = p.constraint() {
        if p.objective != Objective::Logistic {
            return box_coordinate_descent(p, REFERENCE_GAP, 200_000);
        }
    }
    if p.regularizer().is_some() && matches!(p.objective, Objective::SquaredError { .. }) {
        if let Ok(sol) = lasso_coordinate_descent(p, REFERENCE_GAP, 200_000) {
            return Ok(sol);
        }
    }
    let x0 = match p.constraint() {
        Some(ConstraintSpec::Simplex) => vec![1.0 / p.n() as f64; p.n()],
        _ => vec![0.0; p.n()],
    };
    let (x, gap) = fista(p, x0, REFERENCE_GAP, 2_000_000)?;
    if gap > REFERENCE_GAP {
        return Err(Error::BudgetExhausted {
            gap,
            target: REFERENCE_GAP,
        });
    }
    Ok(ReferenceSolution {
        x,
        gap,
        method: "accelerated_gradient",
    })
}

/// Accelerated gradient reference regardless of problem shape.
pub fn solve_reference_accelerated(p: &Problem, tol: f64) -> Result<ReferenceSolution> {
    let x0 = match p.constraint() {
        Some(ConstraintSpec::Simplex) => vec![1.0 / p.n() as f64; p.n()],
        _ => vec![0.0; p.n()],
    };
    let (x, gap) = fista(p, x0, tol, 2_000_000)?;
    if gap > tol {
        return Err(Error::BudgetExhausted { gap, target: tol });
    }
    Ok(ReferenceSolution {
        x,
        gap,
        method: "accelerated_gradient",
    })
}

/// Smallest disc covering planar points, by checking every pair and triple.
pub fn meb_planar_exact(points: &[[f64; 2]]) -> Result<([f64; 2], f64)> {
    if points.is_empty() {
        return Err(Error::InvalidParameter("no points".into()));
    }
    if points.len() == 1 {
        return Ok((points[0], 0.0));
    }
    let covers = |c: [f64; 2], r: f64| {
        points
            .iter()
            .all(|p| ((p[0] - c[0]).powi(2) + (p[1] - c[1]).powi(2)).sqrt() <= r * (1.0 + 1e-12) + 1e-14)
    };
    let mut best: Option<([f64; 2], f64)> = None;
    let mut consider = |c: [f64; 2], r: f64| {
        if best.is_none_or(|(_, br)| r < br) && covers(c, r) {
            best = Some((c, r));
        }
    };
    let n = points.len();
    for i in 0..n {
        for j in i + 1..n {
            let (p, q) = (points[i], points[j]);
            let c = [(p[0] + q[0]) / 2.0, (p[1] + q[1]) / 2.0];
            let r = 0.5 * ((p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2)).sqrt();
            consider(c, r);
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                if let Some((c, r)) = circumcircle(points[i], points[j], points[k]) {
                    consider(c, r);
                }
            }
        }
    }
    best.ok_or_else(|| Error::InvalidParameter("no covering circle found".into()))
}

pub fn circumcircle(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> Option<([f64; 2], f64)> {
    let d = 2.0 * (a[0] * (b[1] - c[1]) + b[0] * (c[1] - a[1]) + c[0] * (a[1] - b[1]));
    if d.abs() < 1e-14 {
        return None;
    }
    let sa = a[0] * a[0] + a[1] * a[1];
    let sb = b[0] * b[0] + b[1] * b[1];
    let sc = c[0] * c[0] + c[1] * c[1];
    let ux = (sa * (b[1] - c[1]) + sb * (c[1] - a[1]) + sc * (a[1] - b[1])) / d;
    let uy = (sa * (c[0] - b[0]) + sb * (a[0] - c[0]) + sc * (b[0] - a[0])) / d;
    let r = ((a[0] - ux).powi(2) + (a[1] - uy).powi(2)).sqrt();
    Some(([ux, uy], r))
}

/// Grid over which a one-dimensional supremum is taken.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub lo: f64,
    pub hi: f64,
    pub step: f64,
}

/// `max_u v·u − g(u)` over the grid. Errors when the maximum sits on the grid edge.
pub fn brute_force_conjugate(g: impl Fn(f64) -> f64, v: f64, grid: Grid) -> Result<f64> {
    let count = ((grid.hi - grid.lo) / grid.step).round() as usize;
    let mut best = f64::NEG_INFINITY;
    let mut arg = 0;
    for k in 0..=count {
        let u = grid.lo + k as f64 * grid.step;
        let val = v * u - g(u);
        if val > best {
            best = val;
            arg = k;
        }
    }
    if arg == 0 || arg == count {
        return Err(Error::InvalidParameter(format!(
            "maximizer on the grid boundary for v = {v}; widen the grid"
        )));
    }
    Ok(best)
}

/// A fixed variable as recorded during a solve.
#[derive(Debug, Clone, PartialEq)]
pub struct SafetyRecord {
    pub iter: u64,
    pub index: usize,
    pub status: Status,
    pub rule: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub record: SafetyRecord,
    pub reference_value: f64,
}

/// Every record whose fixed value disagrees with `x_ref` by more than [`SAFETY_TOL`].
pub fn check_safety(records: &[SafetyRecord], x_ref: &[f64], upper: f64) -> Vec<Violation> {
    records
        .iter()
        .filter(|r| {
            let v = x_ref[r.index];
            match r.status {
                Status::FixedZero => v.abs() > SAFETY_TOL,
                Status::FixedUpper => (v - upper).abs() > SAFETY_TOL,
                Status::Active => false,
            }
        })
        .map(|r| Violation {
            record: r.clone(),
            reference_value: x_ref[r.index],
        })
        .collect()
}
