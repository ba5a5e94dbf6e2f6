use super::*;
use crate::fixtures::zero_sum;
use crate::rational::{int, rat};
use crate::single::solve_optimal;

/// Two receivers, one state, `f(S) = |S|`. Receiver 0 gains from joining
/// only when 1 joins too; receiver 1 always loses 2 by joining.
fn coordination() -> MultiAgentInstance {
    let st = MultiState {
        prob: int(1),
        sender: vec![int(0), int(1), int(1), int(2)],
        receivers: vec![vec![int(0), int(-1), int(0), int(1)], vec![int(0), int(0), int(-2), int(-2)]],
    };
    MultiAgentInstance::new(2, vec![st]).unwrap()
}

#[test]
fn marginals() {
    let inst = coordination();
    assert_eq!(marginal(&inst, 0, 0, 0b01).unwrap(), int(-1));
    assert_eq!(marginal(&inst, 0, 0, 0b11).unwrap(), int(1));
    assert_eq!(marginal(&inst, 0, 1, 0b11).unwrap(), int(-2));
    assert_eq!(marginal(&inst, 0, 0, 0b10).unwrap(), int(0));
    assert!(marginal(&inst, 1, 0, 0).is_err());
    assert!(marginal(&inst, 0, 2, 0).is_err());
    assert!(marginal(&inst, 0, 0, 0b100).is_err());
}

#[test]
fn lp_shape() {
    let inst = coordination();
    let zero = build_lp_binary(&inst, PaymentModel::Zero, DEFAULT_COLUMN_LIMIT).unwrap();
    assert_eq!(zero.problem.num_vars, 4);
    assert_eq!(zero.problem.constraints.len(), 5);
    let bb = build_lp_binary(&inst, PaymentModel::BudgetBalanced, DEFAULT_COLUMN_LIMIT).unwrap();
    assert_eq!(bb.problem.num_vars, 8);
    assert_eq!(bb.layout.q_one(1), Some(6));
    assert_eq!(bb.layout.q_zero(1), Some(7));
    assert_eq!(bb.problem.constraints.len(), 6);
    assert!(matches!(build_lp_binary(&inst, PaymentModel::Zero, 3), Err(Error::SizeLimitExceeded { columns: 4, limit: 3 })));
}

#[test]
fn hand_solved_optima() {
    // Worked by hand. Non-negative: value min(Pr{0}, Pr{0,1}) - Pr{1} - ...,
    // best at {0} and {0,1} half each. Budget balanced: {0,1} with weight
    // 3/4 against the empty set. Arbitrary: recommend nobody and charge both.
    let inst = coordination();
    let expected = [
        (PaymentModel::Zero, int(0)),
        (PaymentModel::NonNegative, rat(1, 2)),
        (PaymentModel::BudgetBalanced, rat(3, 2)),
        (PaymentModel::Arbitrary, int(3)),
    ];
    for (model, value) in expected {
        let sol = solve_lp(&inst, model, DEFAULT_COLUMN_LIMIT).unwrap();
        assert_eq!(sol.objective, value, "{model}");
        assert!(sol.scheme.is_feasible(&inst));
    }
}

#[test]
fn budget_balanced_needs_a_mixture() {
    let inst = coordination();
    let bb = solve_budget_balanced(&inst, DEFAULT_COLUMN_LIMIT).unwrap();
    assert_eq!(bb.gamma_star, rat(1, 2));
    assert_eq!(bb.maximizers, vec![vec![0b00, 0b01, 0b11]]);
    assert_eq!(bb.form, AllocationForm::MixedOverMaximizers);
    assert_eq!(bb.objective, rat(3, 2));
    let realized = bb.scheme.realized.as_ref().unwrap();
    assert_eq!(realized.expected_total(), int(0));
    assert!(bb.scheme.allocation[0].keys().all(|s| bb.maximizers[0].contains(s)));
}

#[test]
fn virtual_payoff_endpoints() {
    let inst = coordination();
    for set in 0..4 {
        assert_eq!(virtual_payoff(&inst, 0, set, &int(0)), inst.states()[0].sender[set as usize]);
    }
    let total: Vec<Rational> = (0..4).map(|s| virtual_payoff(&inst, 0, s, &int(1))).collect();
    assert_eq!(total, vec![int(3), int(2), int(-2), int(1)]);
    assert_eq!(virtual_payoff_argmax(&inst, 0, &int(0)), 0b11);
    assert_eq!(virtual_payoff_argmax(&inst, 0, &int(1)), 0b00);
}

#[test]
fn arbitrary_scheme_charges_on_the_zero_branch() {
    let inst = coordination();
    let sol = solve_arbitrary(&inst, DEFAULT_COLUMN_LIMIT, true).unwrap();
    assert_eq!(sol.lp_objective, Some(int(3)));
    assert_eq!(sol.scheme.q_zero, vec![int(-1), int(-2)]);
    let realized = sol.scheme.realized.unwrap();
    assert_eq!(realized.on_zero, vec![int(-1), int(-2)]);
    assert_eq!(realized.on_one, vec![int(0), int(0)]);
    assert_eq!(realized.action_one_prob, vec![int(0), int(0)]);
}

#[test]
fn single_receiver_encoding_matches_single_lp() {
    let single = zero_sum();
    let inst = MultiAgentInstance::from_two_action(&single).unwrap();
    let bb = solve_budget_balanced(&inst, DEFAULT_COLUMN_LIMIT).unwrap();
    assert_eq!(bb.objective, int(1));
    for model in [PaymentModel::Zero, PaymentModel::NonNegative, PaymentModel::BudgetBalanced, PaymentModel::Arbitrary] {
        let multi = solve_lp(&inst, model, DEFAULT_COLUMN_LIMIT).unwrap().objective;
        assert_eq!(multi, solve_optimal(&single, model).unwrap().objective, "{model}");
    }
}

#[test]
fn recover_payments_divides_by_reach() {
    let inst = coordination();
    let mut allocation = MultiAgentScheme::deterministic_allocation(&[0b11]);
    allocation[0].insert(0b00, rat(1, 2));
    allocation[0].insert(0b11, rat(1, 2));
    let scheme = MultiAgentScheme {
        allocation,
        q_one: vec![int(1), int(1)],
        q_zero: vec![int(-1), int(-1)],
        model: PaymentModel::BudgetBalanced,
        realized: None,
    };
    let r = recover_payments(&inst, &scheme).unwrap().realized.unwrap();
    assert_eq!(r.on_one, vec![int(2), int(2)]);
    assert_eq!(r.on_zero, vec![int(-2), int(-2)]);
    assert_eq!(r.expected_total(), scheme.expected_payment_total());
}

#[test]
fn payment_on_unreachable_branch_is_rejected() {
    let inst = coordination();
    let scheme = MultiAgentScheme {
        allocation: MultiAgentScheme::deterministic_allocation(&[0b00]),
        q_one: vec![int(1), int(0)],
        q_zero: vec![int(0), int(0)],
        model: PaymentModel::Arbitrary,
        realized: None,
    };
    assert!(matches!(recover_payments(&inst, &scheme), Err(Error::InconsistentPayments { receiver: 0, action: 1 })));
}

#[test]
fn additive_sender_and_independent_receivers_decompose() {
    // Without externalities each receiver is a separate two-action problem.
    let st = MultiState {
        prob: int(1),
        sender: vec![int(0), int(2), int(1), int(3)],
        receivers: vec![vec![int(0), int(-1), int(0), int(-1)], vec![int(0), int(0), int(-3), int(-3)]],
    };
    let inst = MultiAgentInstance::new(2, vec![st]).unwrap();
    let total = solve_lp(&inst, PaymentModel::Arbitrary, DEFAULT_COLUMN_LIMIT).unwrap().objective;
    // receiver 0: f gain 2, cost 1 -> 1 + charge-free; receiver 1: gain 1, cost 3 -> stay out, charge 3
    assert_eq!(total, int(1) + int(3));
    let zero = solve_lp(&inst, PaymentModel::Zero, DEFAULT_COLUMN_LIMIT).unwrap().objective;
    assert_eq!(zero, int(0));
}

#[test]
fn infeasible_scheme_is_detected() {
    let inst = coordination();
    let bad = MultiAgentScheme::with_optimal_payments(&inst, MultiAgentScheme::deterministic_allocation(&[0b11]), PaymentModel::Arbitrary).unwrap();
    assert!(bad.is_feasible(&inst));
    let mut broken = bad.clone();
    broken.q_one[1] = int(0);
    assert!(!broken.is_feasible(&inst));
    assert!(MultiAgentScheme::with_optimal_payments(&inst, MultiAgentScheme::deterministic_allocation(&[0b11]), PaymentModel::Zero).is_none());
}

#[test]
fn one_receiver_scheme_reads_back_as_two_actions() {
    let single = zero_sum();
    let inst = MultiAgentInstance::from_two_action(&single).unwrap();
    let bb = solve_budget_balanced(&inst, DEFAULT_COLUMN_LIMIT).unwrap();
    let two = bb.scheme.to_two_action().unwrap();
    assert_eq!(crate::model::sender_utility(&single, &two).unwrap(), int(1));
    assert!(crate::model::is_persuasive(&single, &two).unwrap().persuasive);
    assert!(solve_lp(&coordination(), PaymentModel::Zero, 64).unwrap().scheme.to_two_action().is_err());
}
