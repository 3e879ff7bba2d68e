//! Gap certificates and the distance bounds derived from them.

use crate::error::{Error, Result};
use crate::geometry::RegularizerSpec;
use crate::linalg::{check_len, dot, norm_inf, norm_sq};
use crate::objectives::Objective;
use crate::problem::{Penalty, Problem};

/// A primal point with its cached image and dual point.
#[derive(Debug, Clone, PartialEq)]
pub struct Iterate {
    pub x: Vec<f64>,
    /// `Ax + offset`
    pub y: Vec<f64>,
    /// `∇f(y)`
    pub w: Vec<f64>,
    /// `Aᵀw + q`
    pub grad_x: Vec<f64>,
    pub primal_value: f64,
}

impl Iterate {
    pub fn new(problem: &Problem, x: Vec<f64>) -> Result<Self> {
        check_len("iterate", problem.n(), x.len())?;
        if !x.iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite("iterate"));
        }
        let y = problem.image(&x)?;
        let w = problem.objective.gradient(&y)?;
        let grad_x = problem.gradient_x(&w)?;
        let primal_value = problem.primal_value_at(&x, &y)?;
        Ok(Self {
            x,
            y,
            w,
            grad_x,
            primal_value,
        })
    }
}

/// Duality gap together with the factor applied to `w` to make it dual feasible.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DualityGap {
    pub gap: f64,
    pub scale: f64,
}

fn clamp_gap(gap: f64, magnitude: f64) -> Result<f64> {
    if gap >= 0.0 {
        Ok(gap)
    } else if gap >= -1e-10 * magnitude.max(1.0) {
        Ok(0.0)
    } else if gap.is_nan() {
        Err(Error::NonFinite("duality gap"))
    } else {
        Err(Error::NegativeGap(gap))
    }
}

/// `f(y) + g(x) + f*(w̃) + g*(−Aᵀw̃)` with `w̃` rescaled for norm penalties.
pub fn duality_gap(problem: &Problem, it: &Iterate) -> Result<f64> {
    duality_gap_parts(problem, it).map(|g| g.gap)
}

pub fn duality_gap_parts(problem: &Problem, it: &Iterate) -> Result<DualityGap> {
    let f = &problem.objective;
    let offset_term = |w: &[f64]| problem.offset.as_ref().map_or(0.0, |o| dot(w, o));
    match &problem.penalty {
        Penalty::Constraint(set) => {
            let neg: Vec<f64> = it.grad_x.iter().map(|v| -v).collect();
            let linear = problem.linear.as_ref().map_or(0.0, |q| dot(q, &it.x));
            let raw = f.value(&it.y)? + f.conjugate_value(&it.w)? - offset_term(&it.w)
                + linear
                + set.support_function(&neg);
            Ok(DualityGap {
                gap: clamp_gap(raw, it.primal_value.abs())?,
                scale: 1.0,
            })
        }
        Penalty::Regularizer(RegularizerSpec::ElasticNet { l1, l2 }) => {
            if let Objective::SquaredError { b } = f {
                return augmented_lasso_gap(problem, it, b, *l1, *l2);
            }
            generic_penalized_gap(problem, it)
        }
        Penalty::Regularizer(_) => generic_penalized_gap(problem, it),
    }
}

fn generic_penalized_gap(problem: &Problem, it: &Iterate) -> Result<DualityGap> {
    let reg = problem.regularizer().expect("penalized problem");
    let atw = problem.matrix.mat_t_vec(&it.w)?;
    let s = reg.dual_feasibility_scale(&atw);
    let w: Vec<f64> = it.w.iter().map(|v| s * v).collect();
    let neg_atw: Vec<f64> = atw.iter().map(|v| -s * v).collect();
    let offset = problem.offset.as_ref().map_or(0.0, |o| dot(&w, o));
    let raw = it.primal_value - problem.constant + problem.objective.conjugate_value(&w)? - offset
        + reg.conjugate_penalty_value(&neg_atw)?;
    Ok(DualityGap {
        gap: clamp_gap(raw, it.primal_value.abs())?,
        scale: s,
    })
}

/// Gap of the equivalent lasso on `[A; √(2λ₂)I]`, `[b; 0]`.
fn augmented_lasso_gap(problem: &Problem, it: &Iterate, b: &[f64], l1: f64, l2: f64) -> Result<DualityGap> {
    let r = &it.w;
    let atr = problem.matrix.mat_t_vec(r)?;
    let corr: Vec<f64> = atr.iter().zip(&it.x).map(|(a, x)| a + 2.0 * l2 * x).collect();
    let top = norm_inf(&corr);
    let s = if top > l1 { l1 / top } else { 1.0 };
    let aug_norm_sq = norm_sq(r) + 2.0 * l2 * norm_sq(&it.x);
    let offset = problem.offset.as_ref().map_or(0.0, |o| dot(r, o));
    let raw = it.primal_value - problem.constant + 0.5 * s * s * aug_norm_sq + s * dot(b, r) - s * offset;
    Ok(DualityGap {
        gap: clamp_gap(raw, it.primal_value.abs())?,
        scale: s,
    })
}

/// `max_{z∈C} (Ax − Az)ᵀw` including the linear term.
pub fn wolfe_gap(problem: &Problem, it: &Iterate) -> Result<f64> {
    let set = problem.constraint().ok_or_else(|| {
        Error::InvalidParameter("wolfe gap needs a constrained problem".into())
    })?;
    if !set.membership(&it.x) {
        return Err(Error::Infeasible(format!("iterate outside the {} set", set.name())));
    }
    let lmo = set.lmo(&it.grad_x);
    let raw = dot(&it.grad_x, &it.x) - lmo.value;
    clamp_gap(raw, it.primal_value.abs())
}

/// The gap the solvers stop on: Wolfe gap when constrained, duality gap otherwise.
pub fn stopping_gap(problem: &Problem, it: &Iterate) -> Result<f64> {
    match problem.penalty {
        Penalty::Constraint(_) => wolfe_gap(problem, it),
        Penalty::Regularizer(_) => duality_gap(problem, it),
    }
}

/// Gap values and the radii they certify at one iterate.
#[derive(Debug, Clone, PartialEq)]
pub struct GapCertificate {
    pub duality_gap: f64,
    pub wolfe_gap: Option<f64>,
    /// Bound on `‖w − w*‖`.
    pub dual_radius: f64,
    /// Bound on `‖Ax − Ax*‖`.
    pub image_radius: Option<f64>,
    /// Bound on `‖∇f(Ax) − ∇f(Ax*)‖`.
    pub grad_radius: Option<f64>,
    /// Factor applied to `w` to reach dual feasibility.
    pub dual_scale: f64,
    pub lipschitz: f64,
    pub strong_convexity: Option<f64>,
    pub at_iterate: u64,
}

pub fn certify(problem: &Problem, it: &Iterate, at_iterate: u64) -> Result<GapCertificate> {
    let (l, mu) = problem.objective.constants();
    let dg = duality_gap_parts(problem, it)?;
    let mut cert = GapCertificate {
        duality_gap: dg.gap,
        wolfe_gap: None,
        dual_radius: (2.0 * l * dg.gap).sqrt(),
        image_radius: None,
        grad_radius: None,
        dual_scale: dg.scale,
        lipschitz: l,
        strong_convexity: mu,
        at_iterate,
    };
    if let Some(set) = problem.constraint() {
        let gw = wolfe_gap(problem, it)?;
        cert.wolfe_gap = Some(gw);
        match mu {
            Some(mu) => {
                cert.image_radius = Some((gw / mu).sqrt());
                cert.grad_radius = Some(l / mu.sqrt() * gw.sqrt());
            }
            None if !matches!(set, crate::geometry::ConstraintSpec::Box { .. }) => {
                return Err(Error::MissingStrongConvexity(problem.objective.name()));
            }
            None => {}
        }
    }
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::ConstraintSpec;
    use crate::linalg::ColumnMatrix;

    fn simplex_problem(b: Vec<f64>) -> Problem {
        let n = b.len();
        Problem::constrained(
            ColumnMatrix::identity(n).unwrap(),
            Objective::SquaredError { b },
            ConstraintSpec::Simplex,
        )
        .unwrap()
    }

    #[test]
    fn wolfe_gap_vertex_example() {
        let p = simplex_problem(vec![1.0, 0.0]);
        let it = Iterate::new(&p, vec![0.0, 1.0]).unwrap();
        assert!((wolfe_gap(&p, &it).unwrap() - 2.0).abs() < 1e-15);
        assert!((duality_gap(&p, &it).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn single_vertex_simplex_has_zero_gap() {
        let p = simplex_problem(vec![3.0]);
        let it = Iterate::new(&p, vec![1.0]).unwrap();
        assert_eq!(wolfe_gap(&p, &it).unwrap(), 0.0);
    }

    #[test]
    fn infeasible_iterate_rejected() {
        let p = simplex_problem(vec![1.0, 0.0]);
        let it = Iterate::new(&p, vec![0.5, 0.1]).unwrap();
        assert!(matches!(wolfe_gap(&p, &it), Err(Error::Infeasible(_))));
    }

    #[test]
    fn lasso_at_zero_with_large_lambda_is_optimal() {
        let a = ColumnMatrix::from_columns(&[vec![1.0, 0.5], vec![-0.3, 2.0]]).unwrap();
        let b = vec![0.4, -0.2];
        let lam = 10.0;
        let p = Problem::penalized(a, Objective::SquaredError { b }, RegularizerSpec::L1 { lambda: lam })
            .unwrap();
        let it = Iterate::new(&p, vec![0.0, 0.0]).unwrap();
        assert!(duality_gap(&p, &it).unwrap().abs() < 1e-15);
    }

    #[test]
    fn certificate_radii() {
        let p = simplex_problem(vec![1.0, 0.0]);
        let it = Iterate::new(&p, vec![0.0, 1.0]).unwrap();
        let c = certify(&p, &it, 0).unwrap();
        assert!((c.image_radius.unwrap() - 2f64.sqrt()).abs() < 1e-15);
        assert!((c.grad_radius.unwrap() - 2f64.sqrt()).abs() < 1e-15);
        assert!((c.dual_radius - 2.0).abs() < 1e-12);

        let opt = Iterate::new(&p, vec![1.0, 0.0]).unwrap();
        let c = certify(&p, &opt, 1).unwrap();
        assert_eq!((c.duality_gap, c.dual_radius), (0.0, 0.0));
        assert_eq!(c.grad_radius, Some(0.0));
    }

    #[test]
    fn logistic_on_simplex_refuses_certificate() {
        let p = Problem::constrained(
            ColumnMatrix::identity(2).unwrap(),
            Objective::Logistic,
            ConstraintSpec::Simplex,
        )
        .unwrap();
        let it = Iterate::new(&p, vec![0.5, 0.5]).unwrap();
        assert!(matches!(certify(&p, &it, 0), Err(Error::MissingStrongConvexity(_))));
    }

    #[test]
    fn elastic_net_gap_reduces_to_lasso() {
        let a = ColumnMatrix::from_columns(&[vec![1.0, 0.5, 0.1], vec![-0.3, 2.0, 1.0]]).unwrap();
        let b = vec![1.4, -0.2, 0.7];
        let lasso = Problem::penalized(
            a.clone(),
            Objective::SquaredError { b: b.clone() },
            RegularizerSpec::L1 { lambda: 0.3 },
        )
        .unwrap();
        let en = Problem::penalized(
            a,
            Objective::SquaredError { b },
            RegularizerSpec::ElasticNet { l1: 0.3, l2: 0.0 },
        )
        .unwrap();
        let x = vec![0.2, -0.1];
        let g1 = duality_gap(&lasso, &Iterate::new(&lasso, x.clone()).unwrap()).unwrap();
        let g2 = duality_gap(&en, &Iterate::new(&en, x).unwrap()).unwrap();
        assert!((g1 - g2).abs() < 1e-14);
    }
}
