use crate::error::{Error, Result};
use crate::geometry::{ConstraintSpec, RegularizerSpec};
use crate::linalg::{check_len, dot, ColumnMatrix};
use crate::objectives::Objective;

#[derive(Debug, Clone, PartialEq)]
pub enum Penalty {
    Constraint(ConstraintSpec),
    Regularizer(RegularizerSpec),
}

/// `min_x f(Ax + offset) + qᵀx + g(x) + constant`.
///
/// `offset` and `constant` are zero for user-built problems; they appear when
/// screening fixes variables at the box upper bound and the problem is
/// compressed.
#[derive(Debug, Clone, PartialEq)]
pub struct Problem {
    pub matrix: ColumnMatrix,
    pub objective: Objective,
    pub penalty: Penalty,
    pub linear: Option<Vec<f64>>,
    pub offset: Option<Vec<f64>>,
    pub constant: f64,
}

impl Problem {
    pub fn constrained(matrix: ColumnMatrix, objective: Objective, set: ConstraintSpec) -> Result<Self> {
        set.validate()?;
        let p = Self {
            matrix,
            objective,
            penalty: Penalty::Constraint(set),
            linear: None,
            offset: None,
            constant: 0.0,
        };
        p.check_objective()?;
        Ok(p)
    }

    pub fn penalized(matrix: ColumnMatrix, objective: Objective, reg: RegularizerSpec) -> Result<Self> {
        reg.validate(matrix.n_cols())?;
        let p = Self {
            matrix,
            objective,
            penalty: Penalty::Regularizer(reg),
            linear: None,
            offset: None,
            constant: 0.0,
        };
        p.check_objective()?;
        Ok(p)
    }

    /// Adds the linear term `qᵀx`.
    pub fn with_linear(mut self, q: Vec<f64>) -> Result<Self> {
        if self.regularizer().is_some() {
            return Err(Error::InvalidParameter(
                "linear terms are only supported with constraints".into(),
            ));
        }
        check_len("linear term", self.n(), q.len())?;
        if !q.iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite("linear term"));
        }
        self.linear = Some(q);
        Ok(self)
    }

    fn check_objective(&self) -> Result<()> {
        if let Some(d) = self.objective.dim() {
            check_len("objective target", self.d(), d)?;
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.matrix.n_cols()
    }

    pub fn d(&self) -> usize {
        self.matrix.n_rows()
    }

    pub fn constraint(&self) -> Option<&ConstraintSpec> {
        match &self.penalty {
            Penalty::Constraint(c) => Some(c),
            Penalty::Regularizer(_) => None,
        }
    }

    pub fn regularizer(&self) -> Option<&RegularizerSpec> {
        match &self.penalty {
            Penalty::Regularizer(r) => Some(r),
            Penalty::Constraint(_) => None,
        }
    }

    pub fn linear_at(&self, i: usize) -> f64 {
        self.linear.as_ref().map_or(0.0, |q| q[i])
    }

    /// `y = Ax + offset`
    pub fn image(&self, x: &[f64]) -> Result<Vec<f64>> {
        let mut y = self.matrix.mat_vec(x)?;
        if let Some(o) = &self.offset {
            y.iter_mut().zip(o).for_each(|(a, b)| *a += b);
        }
        Ok(y)
    }

    /// `Aᵀw + q`
    pub fn gradient_x(&self, w: &[f64]) -> Result<Vec<f64>> {
        let mut g = self.matrix.mat_t_vec(w)?;
        if let Some(q) = &self.linear {
            g.iter_mut().zip(q).for_each(|(a, b)| *a += b);
        }
        Ok(g)
    }

    /// Primal objective given `y = image(x)`. Constraint membership is not checked.
    pub fn primal_value_at(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        let mut v = self.objective.value(y)? + self.constant;
        if let Some(q) = &self.linear {
            v += dot(q, x);
        }
        if let Penalty::Regularizer(r) = &self.penalty {
            v += r.penalty_value(x);
        }
        Ok(v)
    }

    pub fn primal_value(&self, x: &[f64]) -> Result<f64> {
        let y = self.image(x)?;
        self.primal_value_at(x, &y)
    }
}
