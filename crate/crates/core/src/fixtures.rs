//! The two worked two-action examples.

use num_traits::One;

use crate::error::{Error, Result};
use crate::io::Instance;
use crate::model::{payment_thresholds, PaymentModel, PersuasionInstance, SignalingScheme, State, TypeDistribution, TypeEntry, TypedInstance};
use crate::rational::{int, rat, Rational};
use crate::single::{canonical_two_action_scheme, threshold_scheme};

pub const NAMES: [&str; 2] = ["sec4_1", "sec4_2"];

/// Two actions whose (receiver, sender) payoffs are i.i.d. uniform on
/// `{0, 1}^2`.
pub fn binary_types_typed() -> TypedInstance {
    let types = [(0, 0), (0, 1), (1, 0), (1, 1)]
        .iter()
        .map(|&(r, s)| TypeEntry { sender: int(s), receiver: int(r) })
        .collect();
    TypedInstance::new(2, types, TypeDistribution::IidMarginal(vec![rat(1, 4); 4])).expect("valid fixture")
}

pub fn binary_types() -> PersuasionInstance {
    binary_types_typed().expand().expect("valid fixture")
}

/// Uniform over `argmax s + r` with threshold payments.
pub fn binary_types_scheme_a(instance: &PersuasionInstance) -> Result<SignalingScheme> {
    threshold_scheme(instance, &Rational::one())
}

/// Uniform over `argmax s + 2r` with threshold payments.
pub fn binary_types_scheme_b(instance: &PersuasionInstance) -> Result<SignalingScheme> {
    canonical_two_action_scheme(instance)
}

/// Zero-sum game over two equiprobable states with
/// `s(0) = -r(0) = 1 - theta` and `s(1) = -r(1) = 1 + theta`.
pub fn zero_sum() -> PersuasionInstance {
    let states = (0..2)
        .map(|theta| State {
            prob: rat(1, 2),
            sender: vec![int(1 - theta), int(1 + theta)],
            receiver: vec![int(theta - 1), int(-1 - theta)],
        })
        .collect();
    PersuasionInstance::new(2, states).expect("valid fixture")
}

/// Recommends 0 in state 0, and 1 with probability `q` in state 1, paying
/// the thresholds.
pub fn zero_sum_q_scheme(instance: &PersuasionInstance, q: &Rational) -> Result<SignalingScheme> {
    let distribution = vec![vec![int(1), int(0)], vec![Rational::one() - q, q.clone()]];
    let payments = payment_thresholds(instance, &distribution)?;
    SignalingScheme::new(distribution, payments, PaymentModel::Arbitrary)
}

/// Built-in instance by name, in the form written to disk.
pub fn by_name(name: &str) -> Result<Instance> {
    match name {
        "sec4_1" => Ok(Instance::Typed(binary_types_typed())),
        "sec4_2" => Ok(Instance::Single(zero_sum())),
        _ => Err(Error::UnknownExample(name.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{cross_utility, per_recommendation, recommendation_probabilities, sender_utility};

    #[test]
    fn binary_types_scheme_a_conditionals() {
        let inst = binary_types();
        let a = binary_types_scheme_a(&inst).unwrap();
        let x = cross_utility(&inst, a.distribution()).unwrap();
        let pr = recommendation_probabilities(&inst, a.distribution()).unwrap();
        assert_eq!(pr[0], rat(1, 2));
        assert_eq!(x.get(0, 0) / &pr[0], rat(11, 16));
        assert_eq!(x.get(0, 1) / &pr[0], rat(5, 16));
        let per = per_recommendation(&inst, a.distribution(), a.payments()).unwrap();
        assert_eq!(per, vec![rat(-6, 16), rat(-6, 16)]);
        assert_eq!(sender_utility(&inst, &a).unwrap(), rat(17, 16));
    }

    #[test]
    fn binary_types_scheme_b_values() {
        let inst = binary_types();
        let b = binary_types_scheme_b(&inst).unwrap();
        let per = per_recommendation(&inst, b.distribution(), b.payments()).unwrap();
        assert_eq!(per, vec![rat(-1, 2), rat(-1, 2)]);
        assert_eq!(sender_utility(&inst, &b).unwrap(), rat(9, 8));
    }

    #[test]
    fn binary_types_scheme_b_needs_no_payment() {
        // Thresholds are negative, so dropping the payments keeps the scheme
        // persuasive with slack 1/4 in expected form.
        let inst = binary_types();
        let b = binary_types_scheme_b(&inst).unwrap();
        let unpaid = b.with_payments(vec![int(0), int(0)], PaymentModel::Zero).unwrap();
        let verdict = crate::model::is_persuasive(&inst, &unpaid).unwrap();
        assert!(verdict.persuasive);
        assert_eq!(verdict.worst_violation, rat(-1, 4));
    }

    #[test]
    fn zero_sum_q_family() {
        let inst = zero_sum();
        for q in [int(0), rat(1, 4), rat(1, 2), int(1)] {
            let s = zero_sum_q_scheme(&inst, &q).unwrap();
            assert_eq!(sender_utility(&inst, &s).unwrap(), rat(3, 2) - &q);
        }
        let half = zero_sum_q_scheme(&inst, &rat(1, 2)).unwrap();
        assert!(PaymentModel::BudgetBalanced.admits(half.payments()));
    }

    #[test]
    fn unknown_name() {
        assert!(matches!(by_name("sec9"), Err(Error::UnknownExample(_))));
    }
}
