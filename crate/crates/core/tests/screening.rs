use safescreen::geometry::GroupLayout;
use safescreen::oracle::{box_coordinate_descent, project_l1_ball, solve_reference};
use safescreen::screening::{elastic_factor, Fixed};
use safescreen::*;

fn fixed_set(r: &RuleReport) -> Vec<usize> {
    r.newly_fixed.iter().map(|f| f.index).collect()
}

fn run(rule: Rule, p: &Problem, x: Vec<f64>) -> RuleReport {
    run_slack(rule, p, x, 0.0)
}

fn run_slack(rule: Rule, p: &Problem, x: Vec<f64>, slack: f64) -> RuleReport {
    let it = Iterate::new(p, x).unwrap();
    let cert = certify(p, &it, 0).unwrap();
    rule.evaluate(p, &it, &cert, &ScreenMask::for_problem(p), slack).unwrap()
}

fn cols(c: &[&[f64]]) -> ColumnMatrix {
    ColumnMatrix::from_columns(&c.iter().map(|v| v.to_vec()).collect::<Vec<_>>()).unwrap()
}

fn gaussian(d: usize, n: usize, seed: u64) -> ColumnMatrix {
    safescreen::data::gaussian_matrix(&mut safescreen::data::rng(seed), d, n).unwrap()
}

fn ls(b: &[f64]) -> Objective {
    Objective::SquaredError { b: b.to_vec() }
}

#[test]
fn simplex_rule_fixes_second_coordinate_at_optimum() {
    let p = Problem::constrained(ColumnMatrix::identity(2).unwrap(), ls(&[0.9, -0.5]), ConstraintSpec::Simplex).unwrap();
    let r = run(Rule::Simplex, &p, vec![1.0, 0.0]);
    assert_eq!(fixed_set(&r), vec![1]);
    assert!((r.newly_fixed[0].lhs - 0.4).abs() < 1e-15);
    assert_eq!(r.newly_fixed[0].status, Status::FixedZero);
}

#[test]
fn simplex_rule_silent_at_zero_gradient() {
    let p = Problem::constrained(ColumnMatrix::identity(2).unwrap(), ls(&[0.5, 0.5]), ConstraintSpec::Simplex).unwrap();
    assert!(run(Rule::Simplex, &p, vec![0.5, 0.5]).newly_fixed.is_empty());
}

#[test]
fn simplex_rule_never_fixes_coincident_column() {
    let a = cols(&[&[1.0, 0.0], &[0.0, 1.0], &[0.5, 0.5]]);
    let p = Problem::constrained(a, ls(&[3.0, -1.0]), ConstraintSpec::Simplex).unwrap();
    let r = run(Rule::Simplex, &p, vec![0.0, 0.0, 1.0]);
    assert!(!fixed_set(&r).contains(&2));
}

#[test]
fn l1_rule_at_optimum_fixes_below_max_correlation() {
    let b = [3.0, -2.5, 0.4, 1.0, -0.2, 2.9];
    let r = 2.0;
    let p = Problem::constrained(ColumnMatrix::identity(6).unwrap(), ls(&b), ConstraintSpec::L1Ball { radius: r }).unwrap();
    let x = project_l1_ball(&b, r);
    let theta = b.iter().zip(&x).map(|(bi, xi)| (xi - bi).abs()).fold(0.0, f64::max);
    let expect: Vec<usize> = (0..6).filter(|&i| b[i].abs() < theta).collect();
    let rep = run_slack(Rule::L1Constrained, &p, x, 1e-12);
    assert_eq!(fixed_set(&rep), expect);
}

#[test]
fn l1_rule_vacuous_at_large_gap() {
    let a = gaussian(20, 8, 3);
    let b = a.mat_vec(&[5.0, -5.0, 0.0, 0.0, 1.0, 0.0, 0.0, 2.0]).unwrap();
    let p = Problem::constrained(a, ls(&b), ConstraintSpec::L1Ball { radius: 1.0 }).unwrap();
    assert!(run(Rule::L1Constrained, &p, vec![0.0; 8]).newly_fixed.is_empty());
}

#[test]
fn l1_rule_fixes_zero_column() {
    let a = cols(&[&[0.0, 0.0], &[1.0, 0.0]]);
    let p = Problem::constrained(a, ls(&[2.0, 0.0]), ConstraintSpec::L1Ball { radius: 1.0 }).unwrap();
    assert_eq!(fixed_set(&run(Rule::L1Constrained, &p, vec![0.0, 1.0])), vec![0]);
}

#[test]
fn elastic_rule_at_alpha_one_matches_l1_rule() {
    let a = gaussian(30, 12, 5);
    let b = a.mat_vec(&[1.0, -1.0, 0.5, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]).unwrap();
    let l1 = Problem::constrained(a.clone(), ls(&b), ConstraintSpec::L1Ball { radius: 2.0 }).unwrap();
    let el = Problem::constrained(a, ls(&b), ConstraintSpec::ElasticNetBall { alpha: 1.0, scale: 2.0 }).unwrap();
    let x = solve_reference(&l1).unwrap().x;
    let r1 = run(Rule::L1Constrained, &l1, x.clone());
    assert!(!r1.newly_fixed.is_empty());
    for f in [ElasticFactor::Certified, ElasticFactor::Verbatim] {
        assert_eq!(fixed_set(&run(Rule::ElasticConstrained(f), &el, x.clone())), fixed_set(&r1));
    }
}

#[test]
fn verbatim_elastic_factor_at_unit_scale() {
    for alpha in [0.1, 0.5, 0.9, 1.0] {
        let k = elastic_factor(alpha, 1.0, ElasticFactor::Verbatim);
        assert!((k - 2.0 * alpha / (3.0 - alpha)).abs() < 1e-15);
        assert!(elastic_factor(alpha, 1.0, ElasticFactor::Certified) <= k + 1e-15);
    }
}

#[test]
fn elastic_rule_is_safe_on_random_instance() {
    let a = gaussian(40, 15, 11);
    let mut xs = vec![0.0; 15];
    xs[2] = 1.0;
    xs[7] = -1.0;
    let b = a.mat_vec(&xs).unwrap();
    let p = Problem::constrained(a, ls(&b), ConstraintSpec::ElasticNetBall { alpha: 0.6, scale: 1.0 }).unwrap();
    let reference = solve_reference(&p).unwrap();
    let rep = run(Rule::ElasticConstrained(ElasticFactor::Certified), &p, reference.x.clone());
    assert!(!rep.newly_fixed.is_empty());
    for i in fixed_set(&rep) {
        assert!(reference.x[i].abs() <= 1e-8);
    }
}

#[test]
fn box_rule_ignores_zero_column() {
    let a = cols(&[&[0.0, 0.0], &[1.0, 2.0]]);
    let p = Problem::constrained(a, ls(&[1.0, 1.0]), ConstraintSpec::Box { upper: 1.0 }).unwrap();
    assert!(!fixed_set(&run(Rule::Box, &p, vec![0.5, 0.5])).contains(&0));
}

#[test]
fn box_rule_at_zero_gap_splits_by_gradient_sign() {
    let b = [-0.5, 0.3, 1.7, 0.9, 2.0];
    let x: Vec<f64> = b.iter().map(|v: &f64| v.clamp(0.0, 1.0)).collect();
    let p = Problem::constrained(ColumnMatrix::identity(5).unwrap(), ls(&b), ConstraintSpec::Box { upper: 1.0 }).unwrap();
    let rep = run(Rule::Box, &p, x);
    let st: Vec<(usize, Status)> = rep.newly_fixed.iter().map(|f| (f.index, f.status)).collect();
    assert_eq!(st, vec![(0, Status::FixedZero), (2, Status::FixedUpper), (4, Status::FixedUpper)]);
}

fn svm(a: ColumnMatrix, c: f64) -> Problem {
    let n = a.n_cols();
    Problem::constrained(a, Objective::PureQuadratic, ConstraintSpec::Box { upper: c })
        .unwrap()
        .with_linear(vec![-1.0; n])
        .unwrap()
}

#[test]
fn hinge_rule_plain_is_more_conservative() {
    let p = svm(gaussian(6, 20, 2), 0.5);
    for seed in 0..5u64 {
        let mut rng = safescreen::data::rng(seed);
        let x: Vec<f64> = (0..20).map(|_| rand::Rng::random_range(&mut rng, 0.0..0.5)).collect();
        let loose = fixed_set(&run(Rule::HingeSvm { improved: true }, &p, x.clone()));
        let tight = fixed_set(&run(Rule::HingeSvm { improved: false }, &p, x));
        assert!(tight.iter().all(|i| loose.contains(i)));
    }
}

#[test]
fn hinge_rule_zero_column_goes_to_upper() {
    // With aᵢ = 0 the objective in xᵢ is −xᵢ alone, so xᵢ* = C.
    let a = cols(&[&[0.0, 0.0], &[1.0, 0.5], &[-0.3, 2.0]]);
    let p = svm(a, 1.0);
    let reference = box_coordinate_descent(&p, 1e-12, 10_000).unwrap();
    assert_eq!(reference.x[0], 1.0);
    let rep = run(Rule::HingeSvm { improved: true }, &p, reference.x.clone());
    let f = rep.newly_fixed.iter().find(|f| f.index == 0).unwrap();
    assert_eq!(f.status, Status::FixedUpper);
}

#[test]
fn hinge_rule_matches_reference_on_separable_toy() {
    // Label-folded points: two well separated clusters plus margin violators.
    let pts: [[f64; 2]; 8] = [
        [3.0, 3.0],
        [4.0, 3.5],
        [3.5, 4.0],
        [0.2, 0.1],
        [-3.0, -3.0],
        [-4.0, -3.2],
        [-0.1, -0.3],
        [-3.4, -4.1],
    ];
    let labels = [1.0, 1.0, 1.0, 1.0, -1.0, -1.0, -1.0, -1.0];
    let folded: Vec<Vec<f64>> = pts.iter().zip(labels).map(|(p, y)| vec![y * p[0], y * p[1]]).collect();
    let p = svm(ColumnMatrix::from_columns(&folded).unwrap(), 1.0);
    let reference = box_coordinate_descent(&p, 1e-12, 100_000).unwrap();
    let rep = run_slack(Rule::HingeSvm { improved: true }, &p, reference.x.clone(), 1e-9);
    assert!(!rep.newly_fixed.is_empty());
    for f in &rep.newly_fixed {
        let target = if f.status == Status::FixedZero { 0.0 } else { 1.0 };
        assert!((reference.x[f.index] - target).abs() <= 1e-8);
    }
    assert!(rep.newly_fixed.iter().any(|f| f.status == Status::FixedZero));
    assert!(rep.newly_fixed.iter().any(|f| f.status == Status::FixedUpper));
}

#[test]
fn lasso_rule_at_zero_with_large_lambda() {
    let a = gaussian(15, 10, 8);
    let b: Vec<f64> = (0..15).map(|i| (i as f64 * 0.37).sin()).collect();
    let atb = a.mat_t_vec(&b).unwrap();
    let lambda = atb.iter().fold(0.0f64, |m, v| m.max(v.abs())) * 1.01;
    let p = Problem::penalized(a, ls(&b), RegularizerSpec::L1 { lambda }).unwrap();
    let it = Iterate::new(&p, vec![0.0; 10]).unwrap();
    assert_eq!(certify(&p, &it, 0).unwrap().duality_gap, 0.0);
    let expect: Vec<usize> = (0..10).filter(|&i| atb[i].abs() < lambda).collect();
    assert_eq!(fixed_set(&run(Rule::L1Penalized, &p, vec![0.0; 10])), expect);
}

#[test]
fn lasso_rule_vacuous_when_radius_exceeds_lambda() {
    let a = ColumnMatrix::identity(3).unwrap();
    let p = Problem::penalized(a, ls(&[5.0, 0.1, -4.0]), RegularizerSpec::L1 { lambda: 0.5 }).unwrap();
    let x = vec![-3.0, 2.0, 3.0];
    let it = Iterate::new(&p, x.clone()).unwrap();
    let cert = certify(&p, &it, 0).unwrap();
    assert!(cert.dual_radius >= 0.5);
    assert!(run(Rule::L1Penalized, &p, x).newly_fixed.is_empty());
}

#[test]
fn logistic_lasso_uses_sigmoid_dual_point() {
    let a = gaussian(25, 6, 4);
    let p = Problem::penalized(a, Objective::Logistic, RegularizerSpec::L1 { lambda: 2.0 }).unwrap();
    let x = vec![0.1, 0.0, -0.2, 0.0, 0.0, 0.05];
    let it = Iterate::new(&p, x.clone()).unwrap();
    for (wi, yi) in it.w.iter().zip(&it.y) {
        assert!((wi - yi.exp() / (yi.exp() + 1.0)).abs() < 1e-15);
    }
    let reference = solve_reference(&p).unwrap();
    let rep = run(Rule::L1Penalized, &p, reference.x.clone());
    for i in fixed_set(&rep) {
        assert!(reference.x[i].abs() <= 1e-8);
    }
}

#[test]
fn elastic_penalty_without_l2_matches_lasso_rule() {
    let a = gaussian(30, 12, 6);
    let b = a.mat_vec(&[2.0, 0.0, 0.0, -1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]).unwrap();
    let lasso = Problem::penalized(a.clone(), ls(&b), RegularizerSpec::L1 { lambda: 8.0 }).unwrap();
    let en = Problem::penalized(a, ls(&b), RegularizerSpec::ElasticNet { l1: 8.0, l2: 0.0 }).unwrap();
    for x in [vec![0.0; 12], solve_reference(&lasso).unwrap().x] {
        let r1 = run(Rule::L1Penalized, &lasso, x.clone());
        let r2 = run(Rule::ElasticPenalized, &en, x);
        assert_eq!(fixed_set(&r1), fixed_set(&r2));
    }
}

#[test]
fn unit_elastic_penalty_at_optimum() {
    let alpha = 0.6;
    let b = [1.5, -0.3, 0.59, -2.0, 0.0, 0.61];
    let x: Vec<f64> = b
        .iter()
        .map(|&v: &f64| v.signum() * (v.abs() - alpha).max(0.0) / (2.0 - alpha))
        .collect();
    let p = Problem::penalized(ColumnMatrix::identity(6).unwrap(), ls(&b), RegularizerSpec::ElasticNetUnit { alpha }).unwrap();
    let rep = run_slack(Rule::ElasticPenalized, &p, x, 1e-12);
    let expect: Vec<usize> = (0..6).filter(|&i| b[i].abs() < alpha).collect();
    assert_eq!(fixed_set(&rep), expect);
}

#[test]
fn group_rule_orthonormal_block() {
    // Group 0 spans e₀, e₁; group 1 spans e₂.
    let a = ColumnMatrix::identity(3).unwrap();
    let b = [0.3, 0.4, 2.0];
    let layout = GroupLayout::from_lengths(&[2, 1]).unwrap();
    let reg = RegularizerSpec::Group { layout, weights: vec![0.6, 1.0] };
    let p = Problem::penalized(a, ls(&b), reg).unwrap();
    // Block soft threshold: group 0 vanishes, group 1 shrinks to 1.
    let rep = run_slack(Rule::Group, &p, vec![0.0, 0.0, 1.0], 1e-12);
    assert_eq!(fixed_set(&rep), vec![0, 1]);
}

#[test]
fn singleton_groups_reproduce_lasso_rule() {
    let a = gaussian(20, 8, 12);
    let b = a.mat_vec(&[1.0, 0.0, -2.0, 0.0, 0.0, 0.0, 0.5, 0.0]).unwrap();
    let lambda = 6.0;
    let lasso = Problem::penalized(a.clone(), ls(&b), RegularizerSpec::L1 { lambda }).unwrap();
    let group = Problem::penalized(
        a,
        ls(&b),
        RegularizerSpec::Group {
            layout: GroupLayout::singletons(8).unwrap(),
            weights: vec![lambda; 8],
        },
    )
    .unwrap();
    let x = solve_reference(&lasso).unwrap().x;
    for x in [vec![0.0; 8], x] {
        assert_eq!(
            fixed_set(&run(Rule::L1Penalized, &lasso, x.clone())),
            fixed_set(&run(Rule::Group, &group, x))
        );
    }
}

fn sq_hinge(a: ColumnMatrix) -> Problem {
    Problem::constrained(a, Objective::PureQuadratic, ConstraintSpec::Simplex).unwrap()
}

#[test]
fn sq_hinge_duplicates_agree() {
    let mut c: Vec<Vec<f64>> = (0..6).map(|j| gaussian(4, 6, 9).column(j).to_dense(4)).collect();
    c.push(c[2].clone());
    let p = sq_hinge(ColumnMatrix::from_columns(&c).unwrap());
    let reference = solve_reference(&p).unwrap();
    let mut x = reference.x.clone();
    let share = 0.5 * (x[2] + x[6]);
    x[2] = share;
    x[6] = share;
    let rep = run(Rule::SqHingeSvm, &p, x);
    let f = fixed_set(&rep);
    assert_eq!(f.contains(&2), f.contains(&6));
}

#[test]
fn sq_hinge_at_optimum_fixes_non_support_vectors() {
    let a = cols(&[&[1.0, 1.0], &[1.0, -1.0], &[3.0, 0.5], &[2.0, 2.0]]);
    let p = sq_hinge(a.clone());
    let reference = solve_reference(&p).unwrap();
    let rep = run_slack(Rule::SqHingeSvm, &p, reference.x.clone(), 1e-9);
    let y = a.mat_vec(&reference.x).unwrap();
    let ny: f64 = y.iter().map(|v| v * v).sum();
    for i in fixed_set(&rep) {
        assert!(a.col_dot(i, &y) - ny > 0.0);
        assert!(reference.x[i] <= 1e-8);
    }
    assert_eq!(fixed_set(&rep), vec![2, 3]);
}

#[test]
fn sq_hinge_never_fixes_column_at_image() {
    let a = cols(&[&[1.0, 0.0], &[0.0, 1.0], &[0.5, 0.5]]);
    let p = sq_hinge(a);
    assert!(!fixed_set(&run(Rule::SqHingeSvm, &p, vec![0.5, 0.5, 0.0])).contains(&2));
}

fn meb(points: &[[f64; 2]]) -> Problem {
    let c: Vec<Vec<f64>> = points.iter().map(|p| p.to_vec()).collect();
    let a = ColumnMatrix::from_columns(&c).unwrap();
    let q: Vec<f64> = a.col_norms().iter().map(|v| -v * v).collect();
    Problem::constrained(a, Objective::MebQuadratic, ConstraintSpec::Simplex)
        .unwrap()
        .with_linear(q)
        .unwrap()
}

#[test]
fn meb_screens_middle_point() {
    let p = meb(&[[0.0, 0.0], [2.0, 0.0], [1.0, 0.1]]);
    assert_eq!(fixed_set(&run(Rule::Meb, &p, vec![0.5, 0.5, 0.0])), vec![2]);
    let near = vec![0.4995, 0.4995, 0.001];
    assert_eq!(fixed_set(&run(Rule::Meb, &p, near)), vec![2]);
}

#[test]
fn meb_equilateral_keeps_all_vertices() {
    let h = 3f64.sqrt() / 2.0;
    let p = meb(&[[0.0, 0.0], [1.0, 0.0], [0.5, h]]);
    let third = 1.0 / 3.0;
    assert!(run(Rule::Meb, &p, vec![third, third, third]).newly_fixed.is_empty());
}

#[test]
fn meb_duplicate_points_agree() {
    let p = meb(&[[0.0, 0.0], [2.0, 0.0], [1.0, 0.1], [1.0, 0.1], [1.0, 1.5]]);
    for x in [vec![0.2; 5], vec![0.45, 0.45, 0.0, 0.0, 0.1]] {
        let f = fixed_set(&run(Rule::Meb, &p, x));
        assert_eq!(f.contains(&2), f.contains(&3));
    }
}

#[test]
fn meb_diameter_endpoints_survive_rounding_at_optimum() {
    let ends = [[-2.2424910285683715, 1.5961761914809875], [1.7776449612972982, -1.1842062005365201]];
    let p = meb(&[ends[0], ends[1], [0.1, 0.2], [-0.7, 0.4]]);
    let f = fixed_set(&run(Rule::Meb, &p, vec![0.5, 0.5, 0.0, 0.0]));
    assert_eq!(f, vec![2, 3]);
}

#[test]
fn incompatible_rule_rejected() {
    let p = Problem::penalized(ColumnMatrix::identity(2).unwrap(), ls(&[1.0, 0.0]), RegularizerSpec::L1 { lambda: 1.0 }).unwrap();
    assert!(matches!(Rule::Simplex.check_compatible(&p), Err(Error::IncompatibleRule { .. })));
    let q = Problem::constrained(ColumnMatrix::identity(2).unwrap(), Objective::Logistic, ConstraintSpec::Simplex).unwrap();
    assert!(matches!(Rule::Simplex.check_compatible(&q), Err(Error::MissingStrongConvexity(_))));
}

#[test]
fn empty_mask_is_identity_view() {
    let p = Problem::constrained(gaussian(5, 4, 1), ls(&[1.0; 5]), ConstraintSpec::Simplex).unwrap();
    match apply_mask(&ScreenMask::for_problem(&p), &p).unwrap() {
        MaskedView::Active(v) => assert_eq!(v, p),
        MaskedView::Solved => panic!("nothing was fixed"),
    }
}

fn fix(index: usize, status: Status) -> Fixed {
    Fixed {
        index,
        status,
        lhs: 0.0,
        rhs: 0.0,
    }
}

#[test]
fn box_view_with_upper_fixes_preserves_value() {
    let a = gaussian(8, 6, 21);
    let p = svm(a, 0.7);
    let mut mask = ScreenMask::for_problem(&p);
    mask.commit(&[fix(1, Status::FixedUpper), fix(4, Status::FixedUpper), fix(2, Status::FixedZero)], &p.matrix)
        .unwrap();
    let view = match apply_mask(&mask, &p).unwrap() {
        MaskedView::Active(v) => v,
        MaskedView::Solved => panic!(),
    };
    assert_eq!(view.n(), 3);
    let xa = vec![0.1, 0.5, 0.3];
    let full = mask.embed(&xa);
    assert_eq!(full, vec![0.1, 0.7, 0.0, 0.5, 0.7, 0.3]);
    let pv = view.primal_value(&xa).unwrap();
    let pf = p.primal_value(&full).unwrap();
    assert!((pv - pf).abs() <= 1e-12 * pf.abs().max(1.0));
}

#[test]
fn box_view_gap_matches_full_gap_for_correct_fixes() {
    let p = svm(gaussian(5, 12, 23), 0.4);
    let reference = box_coordinate_descent(&p, 1e-13, 100_000).unwrap();
    let it = Iterate::new(&p, reference.x.clone()).unwrap();
    let fixes: Vec<Fixed> = (0..12)
        .filter_map(|i| {
            let g = it.grad_x[i];
            if reference.x[i] == 0.0 && g > 1e-6 {
                Some(fix(i, Status::FixedZero))
            } else if reference.x[i] == 0.4 && g < -1e-6 {
                Some(fix(i, Status::FixedUpper))
            } else {
                None
            }
        })
        .collect();
    assert!(fixes.iter().any(|f| f.status == Status::FixedUpper));
    let mut mask = ScreenMask::for_problem(&p);
    mask.commit(&fixes, &p.matrix).unwrap();
    let view = match apply_mask(&mask, &p).unwrap() {
        MaskedView::Active(v) => v,
        MaskedView::Solved => panic!(),
    };
    let xa: Vec<f64> = mask.restrict(&reference.x).iter().map(|v| 0.999 * v).collect();
    let full = mask.embed(&xa);
    let gv = duality_gap(&view, &Iterate::new(&view, xa).unwrap()).unwrap();
    let gf = duality_gap(&p, &Iterate::new(&p, full).unwrap()).unwrap();
    assert!(gv > 0.0);
    assert!((gv - gf).abs() <= 1e-10, "{gv} {gf}");
}

#[test]
fn all_fixed_mask_is_solved() {
    let p = Problem::constrained(ColumnMatrix::identity(2).unwrap(), ls(&[1.0, 1.0]), ConstraintSpec::Box { upper: 1.0 }).unwrap();
    let mut mask = ScreenMask::for_problem(&p);
    mask.commit(&[fix(0, Status::FixedUpper), fix(1, Status::FixedZero)], &p.matrix).unwrap();
    assert!(mask.all_fixed());
    assert_eq!(apply_mask(&mask, &p).unwrap(), MaskedView::Solved);
}

#[test]
fn statuses_never_revert() {
    let p = Problem::constrained(ColumnMatrix::identity(3).unwrap(), ls(&[1.0; 3]), ConstraintSpec::Box { upper: 1.0 }).unwrap();
    let mut mask = ScreenMask::for_problem(&p);
    mask.commit(&[fix(0, Status::FixedZero)], &p.matrix).unwrap();
    assert!(mask.commit(&[fix(0, Status::FixedUpper)], &p.matrix).is_err());
    assert_eq!(mask.status()[0], Status::FixedZero);
    assert_eq!(mask.active_to_original(), &[1, 2]);
}

#[test]
fn compressed_and_full_evaluation_agree() {
    let a = gaussian(30, 16, 31);
    let mut xs = vec![0.0; 16];
    xs[0] = 1.0;
    xs[5] = -1.0;
    let b = a.mat_vec(&xs).unwrap();
    let p = Problem::penalized(a, ls(&b), RegularizerSpec::L1 { lambda: 10.0 }).unwrap();
    let x_ref = solve_reference(&p).unwrap().x;
    let zeros: Vec<usize> = (0..16).filter(|&i| x_ref[i] == 0.0).take(4).collect();
    let mut mask = ScreenMask::for_problem(&p);
    let fixes: Vec<Fixed> = zeros.iter().map(|&i| fix(i, Status::FixedZero)).collect();
    mask.commit(&fixes, &p.matrix).unwrap();
    let view = match apply_mask(&mask, &p).unwrap() {
        MaskedView::Active(v) => v,
        MaskedView::Solved => panic!(),
    };
    let mut x_full = x_ref.clone();
    for i in 0..16 {
        x_full[i] = if zeros.contains(&i) { 0.0 } else { x_ref[i] * 0.9 };
    }
    let x_view = mask.restrict(&x_full);
    let it_v = Iterate::new(&view, x_view).unwrap();
    let it_f = Iterate::new(&p, x_full).unwrap();
    let cv = certify(&view, &it_v, 0).unwrap();
    let cf = certify(&p, &it_f, 0).unwrap();
    let rv = Rule::L1Penalized.evaluate(&view, &it_v, &cv, &mask, 0.0).unwrap();
    let rf = Rule::L1Penalized.evaluate(&p, &it_f, &cf, &mask, 0.0).unwrap();
    assert!(!rv.newly_fixed.is_empty());
    assert_eq!(fixed_set(&rv), fixed_set(&rf));
}

#[test]
fn reports_csv_header_and_rows() {
    let p = Problem::constrained(ColumnMatrix::identity(2).unwrap(), ls(&[0.9, -0.5]), ConstraintSpec::Simplex).unwrap();
    let r = run(Rule::Simplex, &p, vec![1.0, 0.0]);
    let csv = safescreen::screening::reports_csv(&[(7, r)]);
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("rule_id,iter,index,status,lhs,rhs"));
    assert!(lines.next().unwrap().starts_with("simplex,7,1,fixed_zero,"));
}
