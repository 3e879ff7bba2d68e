//! Fixed problem instances shared by the benchmarks.

use safescreen::data::{synth_regression, SyntheticSpec};
use safescreen::{ColumnMatrix, ConstraintSpec, Objective, Problem, RegularizerSpec};

/// `(A, b)` for the 300×60 regression family with 7 nonzeros.
pub fn desk_data(seed: u64) -> (ColumnMatrix, Vec<f64>) {
    let (data, _) = synth_regression(&SyntheticSpec {
        d: 300,
        n: 60,
        support: 7,
        noise_sigma: 0.0,
        seed,
    })
    .expect("valid spec");
    (data.matrix, data.targets)
}

pub fn l1_ball(seed: u64, radius: f64) -> Problem {
    let (a, b) = desk_data(seed);
    Problem::constrained(a, Objective::SquaredError { b }, ConstraintSpec::L1Ball { radius }).expect("valid problem")
}

/// The same problem on the 2n-simplex over `[rA, −rA]`.
pub fn barycentric(seed: u64, radius: f64) -> Problem {
    let (a, b) = desk_data(seed);
    Problem::constrained(a.scaled(radius).hstack_neg(), Objective::SquaredError { b }, ConstraintSpec::Simplex)
        .expect("valid problem")
}

/// Lasso with `λ = frac·‖Aᵀb‖∞`.
pub fn lasso(seed: u64, frac: f64) -> Problem {
    let (a, b) = desk_data(seed);
    let lmax = a.mat_t_vec(&b).expect("shapes match").iter().fold(0.0f64, |m, v| m.max(v.abs()));
    Problem::penalized(a, Objective::SquaredError { b }, RegularizerSpec::L1 { lambda: frac * lmax }).expect("valid problem")
}
