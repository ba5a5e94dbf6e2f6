use super::*;
use crate::fixtures::{binary_types, zero_sum};
use crate::model::{random_instance, random_symmetric_instance, PayoffRange};
use crate::model::State;
use crate::rational::{int, rat};

fn two_state(sender: [[i64; 2]; 2], receiver: [[i64; 2]; 2]) -> PersuasionInstance {
    let states = (0..2)
        .map(|k| State {
            prob: rat(1, 2),
            sender: sender[k].iter().map(|&v| int(v)).collect(),
            receiver: receiver[k].iter().map(|&v| int(v)).collect(),
        })
        .collect();
    PersuasionInstance::new(2, states).unwrap()
}

#[test]
fn lp_shape_per_model() {
    let inst = zero_sum();
    let zero = build_lp(&inst, PaymentModel::Zero);
    assert_eq!(zero.problem.num_vars, 4);
    assert!(zero.layout.payment(0).is_none());
    assert!(zero.layout.budget_row.is_none());
    let bb = build_lp(&inst, PaymentModel::BudgetBalanced);
    assert_eq!(bb.problem.num_vars, 6);
    assert_eq!(bb.layout.payment(1), Some(5));
    assert!(bb.layout.budget_row.is_some());
    // two persuasion rows, two simplex rows, one budget row
    assert_eq!(bb.problem.constraints.len(), 5);
}

#[test]
fn zero_sum_optima() {
    let inst = zero_sum();
    let expected = [
        (PaymentModel::Zero, rat(1, 2)),
        (PaymentModel::NonNegative, rat(1, 2)),
        (PaymentModel::BudgetBalanced, int(1)),
        (PaymentModel::Arbitrary, rat(3, 2)),
    ];
    for (model, value) in expected {
        let sol = solve_optimal(&inst, model).unwrap();
        assert_eq!(sol.objective, value, "{model}");
        assert!(model.admits(sol.scheme.payments()));
        assert!(verify_argmax_certificate(&inst, &sol.scheme, &sol.dual));
        assert_eq!(lagrangian_upper_bound(&inst, &sol.dual, model), Some(value));
    }
}

#[test]
fn dual_adjusted_payoff_by_hand() {
    let inst = two_state([[0, 0], [0, 0]], [[3, 1], [0, 2]]);
    let dual = SingleDual::from_matrix(vec![vec![int(0), int(2)], vec![rat(1, 2), int(0)]]);
    assert_eq!(dual_adjusted_payoff(&inst, &dual, 0, 0), int(4));
    assert_eq!(dual_adjusted_payoff(&inst, &dual, 0, 1), int(-1));
    assert_eq!(dual_adjusted_payoff(&inst, &dual, 1, 0), int(-4));
    assert_eq!(dual_adjusted_payoff(&inst, &dual, 1, 1), int(1));
    assert_eq!(dual.symmetric_lambda, None);
    assert_eq!(SingleDual::symmetric(3, int(2)).row_sum(1), int(4));
}

#[test]
fn lagrangian_at_zero_is_sender_utility_minus_payments() {
    let inst = binary_types();
    let s = threshold_scheme(&inst, &int(1)).unwrap();
    let l = lagrangian_value(&inst, &s, &SingleDual::zero(2)).unwrap();
    assert_eq!(l, sender_utility(&inst, &s).unwrap());
}

#[test]
fn lagrangian_equals_objective_at_optimum() {
    for seed in 0..20 {
        let inst = random_instance(seed, 2 + (seed as usize % 2), 3, PayoffRange::default()).unwrap();
        for model in [PaymentModel::Zero, PaymentModel::Arbitrary, PaymentModel::BudgetBalanced] {
            let sol = solve_optimal(&inst, model).unwrap();
            assert_eq!(lagrangian_value(&inst, &sol.scheme, &sol.dual).unwrap(), sol.objective);
        }
    }
}

#[test]
fn symmetric_lagrangian_matches_general_form() {
    let inst = random_symmetric_instance(3, 3, 2, PayoffRange::default()).unwrap();
    let s = lambda_scheme(&inst, &rat(1, 3)).unwrap();
    let general = lagrangian_value(&inst, &s, &SingleDual::symmetric(3, rat(1, 3))).unwrap();
    assert_eq!(symmetric_lagrangian_value(&inst, &s, &rat(1, 3)).unwrap(), general);
}

#[test]
fn lambda_scheme_extremes() {
    let inst = two_state([[2, 0], [0, 1]], [[0, 1], [3, 0]]);
    let sender_best = lambda_scheme(&inst, &int(0)).unwrap();
    assert_eq!(sender_best.distribution(), &[vec![int(1), int(0)], vec![int(0), int(1)]][..]);
    let receiver_best = lambda_scheme(&inst, &int(100)).unwrap();
    assert_eq!(receiver_best.distribution(), &[vec![int(0), int(1)], vec![int(1), int(0)]][..]);
    assert!(lambda_scheme(&inst, &int(-1)).is_err());
}

#[test]
fn ties_split_uniformly_and_limits_break_them() {
    // s + 2 lambda r ties at lambda = 1/2 in state 0
    let inst = two_state([[1, 0], [0, 0]], [[0, 1], [0, 0]]);
    assert_eq!(lambda_breakpoints(&inst), vec![rat(1, 2)]);
    let mid = lambda_scheme(&inst, &rat(1, 2)).unwrap();
    assert_eq!(mid.distribution()[0], vec![rat(1, 2), rat(1, 2)]);
    let left = lambda_limit_scheme(&inst, &rat(1, 2), Side::Left).unwrap();
    let right = lambda_limit_scheme(&inst, &rat(1, 2), Side::Right).unwrap();
    assert_eq!(left.distribution()[0], vec![int(1), int(0)]);
    assert_eq!(right.distribution()[0], vec![int(0), int(1)]);
}

#[test]
fn adding_receiver_weight_is_pareto_efficient() {
    // No scheme on the argmax of s + w r is dominated in both utilities by
    // another uniform argmax at a different weight.
    for seed in 0..15 {
        let inst = random_instance(seed, 3, 3, PayoffRange::default()).unwrap();
        let pts: Vec<(Rational, Rational)> = [0, 1, 2, 5]
            .iter()
            .map(|&w| {
                let s = SignalingScheme::without_payments(weighted_argmax_distribution(&inst, &int(w))).unwrap();
                (sender_utility(&inst, &s).unwrap(), crate::model::receiver_utility(&inst, &s).unwrap())
            })
            .collect();
        for (a, b) in pts.iter().zip(pts.iter().skip(1)) {
            assert!(a.0 >= b.0 && a.1 <= b.1);
        }
    }
}

#[test]
fn uniform_ties_can_fail_where_the_mixture_succeeds() {
    let mut seen_mixed = false;
    for seed in 1..=60u64 {
        let (n, m) = (2 + (seed as usize % 2), 2 + (seed as usize / 3) % 2);
        let inst = random_symmetric_instance(seed, n, m, PayoffRange::default()).unwrap();
        let star = find_lambda_star(&inst).unwrap();
        assert!(star.persuasiveness_monotone());
        assert!(star.utility_non_increasing());
        assert_eq!(star.sender_utility, star.lp.objective);
        seen_mixed |= !star.uniform_ties_optimal;
    }
    assert!(seen_mixed);
}

#[test]
fn verify_argmax_certificate_rejects_bad_certificates() {
    let inst = zero_sum();
    let sol = solve_optimal(&inst, PaymentModel::Arbitrary).unwrap();
    assert!(verify_argmax_certificate(&inst, &sol.scheme, &sol.dual));
    let mut negative = sol.dual.clone();
    negative.lambda[0][1] = int(-1);
    assert!(!verify_argmax_certificate(&inst, &sol.scheme, &negative));
    let wrong_argmax = lambda_scheme(&inst, &int(10)).unwrap().with_payments(vec![int(0); 2], PaymentModel::Arbitrary).unwrap();
    assert!(!verify_argmax_certificate(&inst, &wrong_argmax, &sol.dual));
    assert!(!verify_argmax_certificate(&inst, &sol.scheme, &SingleDual::zero(3)));
}

#[test]
fn canonical_schemes_agree_for_two_actions() {
    assert_eq!(canonical_weight(2), int(2));
    assert_eq!(canonical_weight(4), rat(4, 3));
    let inst = binary_types();
    assert_eq!(canonical_two_action_scheme(&inst).unwrap(), canonical_symmetric_scheme(&inst).unwrap());
    let sol = solve_optimal(&inst, PaymentModel::Arbitrary).unwrap();
    assert_eq!(sol.dual.symmetric_lambda, Some(int(1)));
}

#[test]
fn symmetric_routines_reject_asymmetric_instances() {
    let inst = two_state([[5, 0], [0, 0]], [[0, 0], [0, 0]]);
    assert!(matches!(find_lambda_star(&inst), Err(Error::NotSymmetric)));
    assert!(matches!(canonical_symmetric_scheme(&inst), Err(Error::NotSymmetric)));
    assert!(matches!(nonnegative_dichotomy(&inst), Err(Error::NotSymmetric)));
    let three = random_instance(1, 3, 2, PayoffRange::default()).unwrap();
    assert!(matches!(canonical_two_action_scheme(&three), Err(Error::WrongActionCount { .. })));
}

#[test]
fn single_action_lp_is_bounded() {
    let st = State { prob: int(1), sender: vec![int(2)], receiver: vec![int(-1)] };
    let inst = PersuasionInstance::new(1, vec![st]).unwrap();
    for model in [PaymentModel::Zero, PaymentModel::Arbitrary, PaymentModel::BudgetBalanced] {
        assert_eq!(solve_optimal(&inst, model).unwrap().objective, int(2));
    }
}

#[test]
fn dichotomy_branches_on_binary_types() {
    let d = nonnegative_dichotomy(&binary_types()).unwrap();
    assert_eq!(d.no_payment_utility, d.lp.objective.clone().max(d.no_payment_utility.clone()));
    assert!(d.canonical_utility <= d.lp.objective);
    assert_eq!(sender_utility(&binary_types(), &d.scheme).unwrap(), d.lp.objective);
}
