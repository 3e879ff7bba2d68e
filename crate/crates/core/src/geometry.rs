//! Constraint sets and penalties: the `g` half of the problem.

use std::ops::Range;

use crate::error::{Error, Result};
use crate::linalg::{norm, norm1, norm_inf, norm_sq};

/// Feasible set `C`, with `g = ι_C`.
#[derive(Debug, Clone, PartialEq)]
pub enum ConstraintSpec {
    Simplex,
    L1Ball { radius: f64 },
    /// `{x : α‖x‖₁ + (1−α)/2·‖x‖² ≤ scale}`
    ElasticNetBall { alpha: f64, scale: f64 },
    /// `[0, upper]ⁿ`
    Box { upper: f64 },
}

/// Penalty `g`.
#[derive(Debug, Clone, PartialEq)]
pub enum RegularizerSpec {
    L1 { lambda: f64 },
    /// `λ₁‖x‖₁ + λ₂‖x‖²`
    ElasticNet { l1: f64, l2: f64 },
    /// `α‖x‖₁ + (1−α)/2·‖x‖²`
    ElasticNetUnit { alpha: f64 },
    /// `Σ_g weight_g·‖x_g‖`
    Group { layout: GroupLayout, weights: Vec<f64> },
}

/// Contiguous partition of the columns into groups.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupLayout {
    ranges: Vec<Range<usize>>,
    lookup: Vec<usize>,
}

impl GroupLayout {
    pub fn from_lengths(lengths: &[usize]) -> Result<Self> {
        if lengths.is_empty() {
            return Err(Error::InvalidParameter("group layout needs at least one group".into()));
        }
        let mut ranges = Vec::with_capacity(lengths.len());
        let mut lookup = Vec::new();
        let mut start = 0;
        for (g, &len) in lengths.iter().enumerate() {
            if len == 0 {
                return Err(Error::EmptyGroup);
            }
            ranges.push(start..start + len);
            lookup.extend(std::iter::repeat_n(g, len));
            start += len;
        }
        Ok(Self { ranges, lookup })
    }

    pub fn singletons(n: usize) -> Result<Self> {
        Self::from_lengths(&vec![1; n])
    }

    pub fn n_groups(&self) -> usize {
        self.ranges.len()
    }

    pub fn n_cols(&self) -> usize {
        self.lookup.len()
    }

    pub fn ranges(&self) -> &[Range<usize>] {
        &self.ranges
    }

    pub fn range(&self, g: usize) -> Range<usize> {
        self.ranges[g].clone()
    }

    pub fn group_of(&self, col: usize) -> usize {
        self.lookup[col]
    }

    pub fn lengths(&self) -> Vec<usize> {
        self.ranges.iter().map(|r| r.len()).collect()
    }
}

/// Result of a linear minimization over `C`.
#[derive(Debug, Clone, PartialEq)]
pub struct LmoResult {
    /// Nonzero entries of the minimizer.
    pub vertex: Vec<(usize, f64)>,
    /// `min_{z∈C} directionᵀz`
    pub value: f64,
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} must be positive, got {v}")))
    }
}

/// Largest `t ≥ 0` with `αt + (1−α)t²/2 ≤ s`.
pub fn elastic_ball_max_norm(alpha: f64, scale: f64) -> f64 {
    if alpha >= 1.0 {
        return scale;
    }
    let b = 1.0 - alpha;
    (-alpha + (alpha * alpha + 2.0 * b * scale).sqrt()) / b
}

pub fn elastic_ball_value(alpha: f64, x: &[f64]) -> f64 {
    alpha * norm1(x) + 0.5 * (1.0 - alpha) * norm_sq(x)
}

impl ConstraintSpec {
    pub fn validate(&self) -> Result<()> {
        match *self {
            ConstraintSpec::Simplex => Ok(()),
            ConstraintSpec::L1Ball { radius } => positive("radius", radius),
            ConstraintSpec::ElasticNetBall { alpha, scale } => {
                positive("scale", scale)?;
                if alpha > 0.0 && alpha <= 1.0 {
                    Ok(())
                } else {
                    Err(Error::InvalidParameter(format!("alpha must be in (0,1], got {alpha}")))
                }
            }
            ConstraintSpec::Box { upper } => positive("upper", upper),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ConstraintSpec::Simplex => "simplex",
            ConstraintSpec::L1Ball { .. } => "l1_ball",
            ConstraintSpec::ElasticNetBall { .. } => "elastic_ball",
            ConstraintSpec::Box { .. } => "box",
        }
    }

    /// Minimizer of `directionᵀz` over `C`. Ties go to the lower index.
    pub fn lmo(&self, direction: &[f64]) -> LmoResult {
        match *self {
            ConstraintSpec::Simplex => {
                let mut best = 0;
                for (i, &d) in direction.iter().enumerate() {
                    if d < direction[best] {
                        best = i;
                    }
                }
                LmoResult {
                    vertex: vec![(best, 1.0)],
                    value: direction.get(best).copied().unwrap_or(0.0),
                }
            }
            ConstraintSpec::L1Ball { radius } => signed_vertex(direction, radius),
            ConstraintSpec::ElasticNetBall { alpha, scale } => {
                if alpha >= 1.0 {
                    return signed_vertex(direction, scale / alpha);
                }
                elastic_lmo(direction, alpha, scale)
            }
            ConstraintSpec::Box { upper } => {
                let vertex: Vec<(usize, f64)> = direction
                    .iter()
                    .enumerate()
                    .filter(|(_, &d)| d < 0.0)
                    .map(|(i, _)| (i, upper))
                    .collect();
                let value = vertex.iter().map(|&(i, u)| u * direction[i]).sum();
                LmoResult { vertex, value }
            }
        }
    }

    /// `σ_C(v) = sup_{z∈C} vᵀz`, computed without the LMO.
    pub fn support_function(&self, v: &[f64]) -> f64 {
        match *self {
            ConstraintSpec::Simplex => v.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            ConstraintSpec::L1Ball { radius } => radius * norm_inf(v),
            ConstraintSpec::Box { upper } => upper * v.iter().map(|t| t.max(0.0)).sum::<f64>(),
            ConstraintSpec::ElasticNetBall { alpha, scale } => {
                if alpha >= 1.0 {
                    return scale / alpha * norm_inf(v);
                }
                elastic_support(v, alpha, scale)
            }
        }
    }

    pub fn membership(&self, x: &[f64]) -> bool {
        match *self {
            ConstraintSpec::Simplex => {
                x.iter().all(|&t| t >= -1e-12) && (x.iter().sum::<f64>() - 1.0).abs() <= 1e-9
            }
            ConstraintSpec::L1Ball { radius } => norm1(x) <= radius * (1.0 + 1e-9),
            ConstraintSpec::ElasticNetBall { alpha, scale } => {
                elastic_ball_value(alpha, x) <= scale * (1.0 + 1e-9)
            }
            ConstraintSpec::Box { upper } => x.iter().all(|&t| t >= -1e-12 && t <= upper + 1e-12),
        }
    }
}

fn signed_vertex(direction: &[f64], radius: f64) -> LmoResult {
    let mut best = 0;
    for (i, d) in direction.iter().enumerate() {
        if d.abs() > direction[best].abs() {
            best = i;
        }
    }
    let d = direction.get(best).copied().unwrap_or(0.0);
    let sign = if d > 0.0 { -1.0 } else { 1.0 };
    LmoResult {
        vertex: vec![(best, sign * radius)],
        value: -radius * d.abs(),
    }
}

/// Closed-form minimizer on the elastic ball for `α < 1`.
///
/// With `p = 1/u` the multiplier, `|zᵢ| = [p|cᵢ| − α]₊/(1−α)` and the
/// constraint on the top-`k` coordinates reads `p²·Σcᵢ² = 2(1−α)s + kα²`.
fn elastic_lmo(c: &[f64], alpha: f64, scale: f64) -> LmoResult {
    let mut order: Vec<usize> = (0..c.len()).collect();
    order.sort_by(|&i, &j| c[j].abs().total_cmp(&c[i].abs()).then(i.cmp(&j)));
    if order.is_empty() || c[order[0]] == 0.0 {
        return LmoResult {
            vertex: Vec::new(),
            value: 0.0,
        };
    }
    let beta = 1.0 - alpha;
    let mut s2 = 0.0;
    let mut p = 0.0;
    for (k, &i) in order.iter().enumerate() {
        s2 += c[i] * c[i];
        p = ((2.0 * beta * scale + (k + 1) as f64 * alpha * alpha) / s2).sqrt();
        let next = order.get(k + 1).map_or(0.0, |&j| c[j].abs());
        if p * next <= alpha {
            break;
        }
    }
    let mut vertex = Vec::new();
    let mut value = 0.0;
    for &i in &order {
        let t = (p * c[i].abs() - alpha).max(0.0) / beta;
        if t == 0.0 {
            continue;
        }
        let z = if c[i] > 0.0 { -t } else { t };
        value += c[i] * z;
        vertex.push((i, z));
    }
    vertex.sort_by_key(|&(i, _)| i);
    LmoResult { vertex, value }
}

/// `min_{u>0} u·s + Σ([|vᵢ| − uα]₊)²/(2u(1−α))` by golden-section search.
fn elastic_support(v: &[f64], alpha: f64, scale: f64) -> f64 {
    let vmax = norm_inf(v);
    if vmax == 0.0 {
        return 0.0;
    }
    let beta = 1.0 - alpha;
    let phi = |u: f64| {
        let tail: f64 = v
            .iter()
            .map(|t| {
                let e = (t.abs() - u * alpha).max(0.0);
                e * e
            })
            .sum();
        u * scale + tail / (2.0 * u * beta)
    };
    let (mut lo, mut hi) = (0.0f64, vmax / alpha);
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut a = hi - g * (hi - lo);
    let mut b = lo + g * (hi - lo);
    let (mut fa, mut fb) = (phi(a), phi(b));
    for _ in 0..200 {
        if fa <= fb {
            hi = b;
            b = a;
            fb = fa;
            a = hi - g * (hi - lo);
            fa = phi(a);
        } else {
            lo = a;
            a = b;
            fa = fb;
            b = lo + g * (hi - lo);
            fb = phi(b);
        }
        if hi - lo <= 1e-15 * hi {
            break;
        }
    }
    fa.min(fb)
}

fn soft(v: f64, t: f64) -> f64 {
    if v > t {
        v - t
    } else if v < -t {
        v + t
    } else {
        0.0
    }
}

impl RegularizerSpec {
    pub fn validate(&self, n: usize) -> Result<()> {
        match self {
            RegularizerSpec::L1 { lambda } => positive("lambda", *lambda),
            RegularizerSpec::ElasticNet { l1, l2 } => {
                positive("lambda1", *l1)?;
                if l2.is_finite() && *l2 >= 0.0 {
                    Ok(())
                } else {
                    Err(Error::InvalidParameter(format!("lambda2 must be ≥ 0, got {l2}")))
                }
            }
            RegularizerSpec::ElasticNetUnit { alpha } => {
                if *alpha > 0.0 && *alpha < 1.0 {
                    Ok(())
                } else {
                    Err(Error::InvalidParameter(format!("alpha must be in (0,1), got {alpha}")))
                }
            }
            RegularizerSpec::Group { layout, weights } => {
                if layout.n_cols() != n {
                    return Err(Error::InvalidParameter(format!(
                        "groups cover {} columns, matrix has {n}",
                        layout.n_cols()
                    )));
                }
                if weights.len() != layout.n_groups() {
                    return Err(Error::DimensionMismatch {
                        what: "group weights",
                        expected: layout.n_groups(),
                        found: weights.len(),
                    });
                }
                weights.iter().try_for_each(|&w| positive("group weight", w))
            }
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            RegularizerSpec::L1 { .. } => "l1",
            RegularizerSpec::ElasticNet { .. } => "elastic_net",
            RegularizerSpec::ElasticNetUnit { .. } => "elastic_net_unit",
            RegularizerSpec::Group { .. } => "group",
        }
    }

    pub fn prox(&self, v: &[f64], step: f64) -> Vec<f64> {
        match self {
            RegularizerSpec::L1 { lambda } => v.iter().map(|&t| soft(t, step * lambda)).collect(),
            RegularizerSpec::ElasticNet { l1, l2 } => {
                let shrink = 1.0 + 2.0 * step * l2;
                v.iter().map(|&t| soft(t, step * l1) / shrink).collect()
            }
            RegularizerSpec::ElasticNetUnit { alpha } => {
                let shrink = 1.0 + step * (1.0 - alpha);
                v.iter().map(|&t| soft(t, step * alpha) / shrink).collect()
            }
            RegularizerSpec::Group { layout, weights } => {
                let mut out = v.to_vec();
                for (r, w) in layout.ranges().iter().zip(weights) {
                    let nv = norm(&v[r.clone()]);
                    let factor = if nv > 0.0 { (1.0 - step * w / nv).max(0.0) } else { 0.0 };
                    out[r.clone()].iter_mut().for_each(|t| *t *= factor);
                }
                out
            }
        }
    }

    pub fn penalty_value(&self, x: &[f64]) -> f64 {
        match self {
            RegularizerSpec::L1 { lambda } => lambda * norm1(x),
            RegularizerSpec::ElasticNet { l1, l2 } => l1 * norm1(x) + l2 * norm_sq(x),
            RegularizerSpec::ElasticNetUnit { alpha } => elastic_ball_value(*alpha, x),
            RegularizerSpec::Group { layout, weights } => layout
                .ranges()
                .iter()
                .zip(weights)
                .map(|(r, w)| w * norm(&x[r.clone()]))
                .sum(),
        }
    }

    /// Largest `s ∈ (0,1]` making `g*(−s·atw)` finite.
    pub fn dual_feasibility_scale(&self, atw: &[f64]) -> f64 {
        let ratio = |bound: f64, size: f64| if size > bound { bound / size } else { 1.0 };
        match self {
            RegularizerSpec::L1 { lambda } => ratio(*lambda, norm_inf(atw)),
            RegularizerSpec::ElasticNet { l1, l2 } if *l2 == 0.0 => ratio(*l1, norm_inf(atw)),
            RegularizerSpec::ElasticNet { .. } | RegularizerSpec::ElasticNetUnit { .. } => 1.0,
            RegularizerSpec::Group { layout, weights } => layout
                .ranges()
                .iter()
                .zip(weights)
                .map(|(r, &w)| ratio(w, norm(&atw[r.clone()])))
                .fold(1.0, f64::min),
        }
    }

    /// `g*(v)`; for norm penalties `v` must already be dual feasible.
    pub fn conjugate_penalty_value(&self, v: &[f64]) -> Result<f64> {
        let ball = |bound: f64, size: f64| {
            if size <= bound * (1.0 + 1e-12) {
                Ok(0.0)
            } else {
                Err(Error::DualInfeasible(format!(
                    "dual norm {size} exceeds {bound}; rescale the dual point"
                )))
            }
        };
        let tail = |t: f64, level: f64| {
            let e = (t.abs() - level).max(0.0);
            e * e
        };
        match self {
            RegularizerSpec::L1 { lambda } => ball(*lambda, norm_inf(v)),
            RegularizerSpec::ElasticNet { l1, l2 } => {
                if *l2 == 0.0 {
                    ball(*l1, norm_inf(v))
                } else {
                    Ok(v.iter().map(|&t| tail(t, *l1)).sum::<f64>() / (4.0 * l2))
                }
            }
            RegularizerSpec::ElasticNetUnit { alpha } => {
                Ok(v.iter().map(|&t| tail(t, *alpha)).sum::<f64>() / (2.0 * (1.0 - alpha)))
            }
            RegularizerSpec::Group { layout, weights } => {
                for (r, &w) in layout.ranges().iter().zip(weights) {
                    ball(w, norm(&v[r.clone()]))?;
                }
                Ok(0.0)
            }
        }
    }
}
