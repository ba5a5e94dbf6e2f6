//! Property tests over randomly generated instances.

use proptest::prelude::*;

use persuade_core::io::{instance_to_json, parse_instance, Instance};
use persuade_core::lp::{self, Bound, LpProblem, LpStatus, Relation, Sense};
use persuade_core::model::{
    is_persuasive, payment_thresholds, random_distribution, random_instance, random_multi_instance, random_symmetric_instance,
    random_typed_instance, sender_utility, MultiFlags, PayoffRange,
};
use persuade_core::multi::{solve_lp, DEFAULT_COLUMN_LIMIT};
use persuade_core::rational::int;
use persuade_core::reduction::repair_scheme;
use persuade_core::single::{lagrangian_upper_bound, solve_optimal, threshold_scheme};
use persuade_core::{PaymentModel, Rational, SignalingScheme};

const MODELS: [PaymentModel; 4] =
    [PaymentModel::Zero, PaymentModel::NonNegative, PaymentModel::BudgetBalanced, PaymentModel::Arbitrary];

/// Zero <= non-negative, budget balanced <= arbitrary; the middle two are
/// not comparable in general.
fn nested(v: &[Rational]) -> bool {
    v[0] <= v[1] && v[0] <= v[2] && v[1] <= v[3] && v[2] <= v[3]
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn payment_models_are_partially_ordered(seed in any::<u64>(), n in 1usize..=3, k in 1usize..=4) {
        let inst = random_instance(seed, n, k, PayoffRange::default()).unwrap();
        let values: Vec<Rational> = MODELS.iter().map(|&m| solve_optimal(&inst, m).unwrap().objective).collect();
        prop_assert!(nested(&values), "{values:?}");
    }

    #[test]
    fn optimal_dual_closes_the_gap(seed in any::<u64>(), n in 1usize..=3, k in 1usize..=4) {
        let inst = random_instance(seed, n, k, PayoffRange::default()).unwrap();
        for model in MODELS {
            let sol = solve_optimal(&inst, model).unwrap();
            prop_assert_eq!(lagrangian_upper_bound(&inst, &sol.dual, model), Some(sol.objective));
        }
    }

    #[test]
    fn threshold_payments_are_exactly_persuasive(seed in any::<u64>(), n in 2usize..=4, k in 1usize..=4) {
        let inst = random_instance(seed, n, k, PayoffRange::default()).unwrap();
        let dist = random_distribution(seed.wrapping_add(1), k, n).unwrap();
        let t = payment_thresholds(&inst, &dist).unwrap();
        let paid = SignalingScheme::new(dist.clone(), t.clone(), PaymentModel::Arbitrary).unwrap();
        let verdict = is_persuasive(&inst, &paid).unwrap();
        prop_assert!(verdict.persuasive);
        prop_assert_eq!(verdict.worst_violation, int(0));
        let less: Vec<Rational> = t.iter().enumerate().map(|(i, v)| if i == 0 { v - int(1) } else { v.clone() }).collect();
        let short = SignalingScheme::new(dist, less, PaymentModel::Arbitrary).unwrap();
        prop_assert!(!is_persuasive(&inst, &short).unwrap().persuasive);
    }

    #[test]
    fn threshold_schemes_never_beat_the_lp(seed in any::<u64>(), n in 2usize..=3, w in 0i64..=4) {
        let inst = random_symmetric_instance(seed, n, 2, PayoffRange::default()).unwrap();
        let s = threshold_scheme(&inst, &int(w)).unwrap();
        let best = solve_optimal(&inst, PaymentModel::Arbitrary).unwrap().objective;
        prop_assert!(sender_utility(&inst, &s).unwrap() <= best);
    }

    #[test]
    fn multi_models_nest_and_repair_is_feasible(seed in any::<u64>(), n in 1usize..=3, k in 1usize..=3) {
        let flags = MultiFlags { positive_externalities: true, monotone_sender: true, ..MultiFlags::default() };
        let inst = random_multi_instance(seed, n, k, flags).unwrap();
        let values: Vec<Rational> =
            MODELS.iter().map(|&m| solve_lp(&inst, m, DEFAULT_COLUMN_LIMIT).unwrap().objective).collect();
        prop_assert!(nested(&values), "{values:?}");
        let zero = solve_lp(&inst, PaymentModel::Zero, DEFAULT_COLUMN_LIMIT).unwrap();
        let repaired = repair_scheme(&inst, &zero.scheme.allocation).unwrap();
        prop_assert!(repaired.scheme.is_feasible(&inst));
        prop_assert!(repaired.scheme.sender_utility(&inst) >= zero.objective);
    }

    #[test]
    fn json_round_trip(seed in any::<u64>(), which in 0u8..3) {
        let instance = match which {
            0 => Instance::Single(random_instance(seed, 3, 2, PayoffRange::default()).unwrap()),
            1 => Instance::Typed(random_typed_instance(seed, 2, 3, PayoffRange::default(), seed % 2 == 0).unwrap()),
            _ => Instance::Multi(random_multi_instance(seed, 2, 2, MultiFlags::default()).unwrap()),
        };
        let text = instance_to_json(&instance, Some(PaymentModel::BudgetBalanced));
        let back = parse_instance(&text).unwrap();
        prop_assert_eq!(back.instance, instance);
        prop_assert_eq!(back.payment_model, Some(PaymentModel::BudgetBalanced));
    }

    #[test]
    fn simplex_optimum_is_certified_and_dominates_grid_points(
        c in prop::collection::vec(-3i64..=3, 3),
        a in prop::collection::vec(prop::collection::vec(-2i64..=3, 3), 1..=3),
        b in prop::collection::vec(0i64..=4, 3),
    ) {
        let mut p = LpProblem::new(3, Sense::Maximize);
        p.objective = c.iter().map(|&v| int(v)).collect();
        for (row, rhs) in a.iter().zip(&b) {
            p.add_constraint(row.iter().enumerate().map(|(j, &v)| (j, int(v))).collect(), Relation::Le, int(*rhs));
        }
        for j in 0..3 {
            p.set_bounds(j, Bound { lower: Some(int(0)), upper: Some(int(2)) });
        }
        let sol = lp::solve(&p).unwrap();
        prop_assert_eq!(sol.status, LpStatus::Optimal);
        prop_assert!(lp::certify(&p, &sol));
        for x in 0..=2 {
            for y in 0..=2 {
                for z in 0..=2 {
                    let pt = [int(x), int(y), int(z)];
                    let feasible = (0..p.constraints.len()).all(|r| p.row_activity(r, &pt) <= p.constraints[r].rhs);
                    if feasible {
                        prop_assert!(p.objective_at(&pt) <= sol.objective_value);
                    }
                }
            }
        }
    }
}
