//! Safe screening for Frank-Wolfe style and proximal solvers.
//!
//! A problem is `min_x f(Ax) + g(x)` where `g` is either the indicator of a
//! constraint set or a penalty. Rules use the duality gap at the current
//! iterate to prove that coordinates of every optimum are zero (or at the box
//! upper bound), and the solver drops those columns on the fly.
//!
//! ```
//! use safescreen::{solve, Algorithm, ColumnMatrix, Objective, Problem, RegularizerSpec, SolverConfig};
//!
//! let a = ColumnMatrix::from_columns(&[vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 1.0]])?;
//! let p = Problem::penalized(a, Objective::SquaredError { b: vec![1.0, 0.2] }, RegularizerSpec::L1 { lambda: 0.5 })?;
//! let cfg = SolverConfig { algorithm: Algorithm::default_for(&p), ..SolverConfig::default() };
//! let res = solve(&p, &cfg)?;
//! assert!(res.converged);
//! assert!(res.mask.n_active() < 3);
//! # Ok::<(), safescreen::Error>(())
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop, clippy::large_enum_variant)]

pub mod data;
pub mod error;
pub mod gaps;
pub mod geometry;
pub mod harness;
pub mod linalg;
pub mod objectives;
pub mod oracle;
pub mod problem;
pub mod screening;
pub mod solvers;

pub use error::{Error, Result};
pub use gaps::{certify, duality_gap, wolfe_gap, DualityGap, GapCertificate, Iterate};
pub use geometry::{ConstraintSpec, GroupLayout, LmoResult, RegularizerSpec};
pub use linalg::{ColumnMatrix, DenseVector};
pub use objectives::Objective;
pub use problem::{Penalty, Problem};
pub use screening::{apply_mask, ElasticFactor, MaskedView, Rule, RuleId, RuleReport, ScreenMask, Status};
pub use solvers::{solve, Algorithm, SolveResult, SolveTrace, SolverConfig};
