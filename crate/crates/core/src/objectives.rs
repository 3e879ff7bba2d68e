//! Smooth losses `f(y)` with `y = Ax`.

use crate::error::{Error, Result};
use crate::linalg::{check_len, dot, norm_sq};

/// A smooth convex loss evaluated at `y = Ax`.
///
/// Linear terms in `x` (the MEB offsets, the `−1ᵀx` of the SVM dual) are not
/// part of `f`; they sit next to the constraint in [`crate::Problem`].
#[derive(Debug, Clone, PartialEq)]
pub enum Objective {
    /// `½‖y − b‖²`
    SquaredError { b: Vec<f64> },
    /// `½‖y‖²`
    PureQuadratic,
    /// `‖y‖²`
    MebQuadratic,
    /// `Σ log(exp(yᵢ) + 1)`
    Logistic,
}

fn check_finite(y: &[f64]) -> Result<()> {
    if y.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite("objective input"))
    }
}

fn softplus(t: f64) -> f64 {
    if t > 0.0 {
        t + (-t).exp().ln_1p()
    } else {
        t.exp().ln_1p()
    }
}

fn sigmoid(t: f64) -> f64 {
    if t >= 0.0 {
        1.0 / (1.0 + (-t).exp())
    } else {
        let e = t.exp();
        e / (1.0 + e)
    }
}

fn xlogx(t: f64) -> f64 {
    if t == 0.0 {
        0.0
    } else {
        t * t.ln()
    }
}

impl Objective {
    pub fn name(&self) -> &'static str {
        match self {
            Objective::SquaredError { .. } => "squared_error",
            Objective::PureQuadratic => "pure_quadratic",
            Objective::MebQuadratic => "meb_quadratic",
            Objective::Logistic => "logistic",
        }
    }

    /// Length `y` must have, when the objective pins it.
    pub fn dim(&self) -> Option<usize> {
        match self {
            Objective::SquaredError { b } => Some(b.len()),
            _ => None,
        }
    }

    fn check(&self, y: &[f64]) -> Result<()> {
        if let Some(d) = self.dim() {
            check_len("objective argument", d, y.len())?;
        }
        check_finite(y)
    }

    pub fn value(&self, y: &[f64]) -> Result<f64> {
        self.check(y)?;
        Ok(match self {
            Objective::SquaredError { b } => {
                0.5 * y.iter().zip(b).map(|(a, c)| (a - c) * (a - c)).sum::<f64>()
            }
            Objective::PureQuadratic => 0.5 * norm_sq(y),
            Objective::MebQuadratic => norm_sq(y),
            Objective::Logistic => y.iter().map(|&t| softplus(t)).sum(),
        })
    }

    /// `w = ∇f(y)`
    pub fn gradient(&self, y: &[f64]) -> Result<Vec<f64>> {
        self.check(y)?;
        Ok(match self {
            Objective::SquaredError { b } => y.iter().zip(b).map(|(a, c)| a - c).collect(),
            Objective::PureQuadratic => y.to_vec(),
            Objective::MebQuadratic => y.iter().map(|v| 2.0 * v).collect(),
            Objective::Logistic => y.iter().map(|&t| sigmoid(t)).collect(),
        })
    }

    /// `f*(w)`
    pub fn conjugate_value(&self, w: &[f64]) -> Result<f64> {
        self.check(w)?;
        Ok(match self {
            Objective::SquaredError { b } => 0.5 * norm_sq(w) + dot(b, w),
            Objective::PureQuadratic => 0.5 * norm_sq(w),
            Objective::MebQuadratic => 0.25 * norm_sq(w),
            Objective::Logistic => {
                let mut s = 0.0;
                for &t in w {
                    if !(0.0..=1.0).contains(&t) {
                        return Err(Error::DualInfeasible(format!(
                            "logistic conjugate needs entries in [0,1], got {t}"
                        )));
                    }
                    s += xlogx(t) + xlogx(1.0 - t);
                }
                s
            }
        })
    }

    /// Smoothness constant `L` of `f` in `y`.
    pub fn lipschitz(&self) -> f64 {
        match self {
            Objective::MebQuadratic => 2.0,
            _ => 1.0,
        }
    }

    /// Strong convexity constant of `f` in `y`, when there is one.
    pub fn strong_convexity(&self) -> Option<f64> {
        match self {
            Objective::SquaredError { .. } | Objective::PureQuadratic => Some(1.0),
            Objective::MebQuadratic => Some(2.0),
            Objective::Logistic => None,
        }
    }

    pub fn constants(&self) -> (f64, Option<f64>) {
        (self.lipschitz(), self.strong_convexity())
    }

    /// Constant Hessian scale `c` when `f` is `c/2‖y‖²` plus affine terms.
    pub fn quadratic_scale(&self) -> Option<f64> {
        match self {
            Objective::SquaredError { .. } | Objective::PureQuadratic => Some(1.0),
            Objective::MebQuadratic => Some(2.0),
            Objective::Logistic => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn values() {
        let sq = Objective::SquaredError { b: vec![1.0, 0.0] };
        assert_eq!(sq.value(&[1.0, 0.0]).unwrap(), 0.0);
        let lg = Objective::Logistic.value(&[0.0; 3]).unwrap();
        assert!((lg - 3.0 * 2f64.ln()).abs() < 1e-15);
        assert_eq!(Objective::PureQuadratic.value(&[3.0, 4.0]).unwrap(), 12.5);
    }

    #[test]
    fn gradients() {
        let sq = Objective::SquaredError { b: vec![1.0, -2.0] };
        assert_eq!(sq.gradient(&[1.0, -2.0]).unwrap(), vec![0.0, 0.0]);
        assert_eq!(Objective::Logistic.gradient(&[0.0]).unwrap(), vec![0.5]);
        assert_eq!(Objective::PureQuadratic.gradient(&[1.5, -2.0]).unwrap(), vec![1.5, -2.0]);
    }

    #[test]
    fn conjugates() {
        let sq = Objective::SquaredError { b: vec![3.0, 1.0] };
        assert_eq!(sq.conjugate_value(&[0.0, 0.0]).unwrap(), 0.0);
        assert_eq!(Objective::PureQuadratic.conjugate_value(&[3.0, 4.0]).unwrap(), 12.5);
        assert_eq!(Objective::Logistic.conjugate_value(&[0.0, 1.0]).unwrap(), 0.0);
        assert!(matches!(
            Objective::Logistic.conjugate_value(&[1.5]),
            Err(Error::DualInfeasible(_))
        ));
    }

    #[test]
    fn constants_table() {
        assert_eq!(Objective::SquaredError { b: vec![0.0] }.constants(), (1.0, Some(1.0)));
        assert_eq!(Objective::MebQuadratic.constants(), (2.0, Some(2.0)));
        assert_eq!(Objective::Logistic.constants(), (1.0, None));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(Objective::Logistic.value(&[f64::NAN]).is_err());
        assert!(Objective::SquaredError { b: vec![0.0; 2] }.value(&[1.0]).is_err());
    }

    #[test]
    fn logistic_extremes_stay_finite() {
        let v = Objective::Logistic.value(&[800.0, -800.0]).unwrap();
        assert!((v - 800.0).abs() < 1e-9);
        let g = Objective::Logistic.gradient(&[800.0, -800.0]).unwrap();
        assert_eq!(g[0], 1.0);
        assert!(g[1] >= 0.0 && g[1] < 1e-300);
    }
}
