//! Single-receiver instances, signaling schemes and payment models.

mod generate;
mod payoffs;
mod typed;

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result, ValidationErrors, ValidationIssue};
use crate::rational::{sum, Rational};

pub use generate::{
    random_distribution, random_instance, random_multi_instance, random_payments,
    random_symmetric_instance, random_typed_instance, MultiFlags, PayoffRange,
};
pub use payoffs::{
    cross_utility, is_persuasive, nonnegative_thresholds, payment_thresholds,
    per_recommendation, receiver_utility, recommendation_probabilities, sender_utility,
    CrossUtilityMatrix, Persuasiveness,
};
pub use typed::{TypeDistribution, TypeEntry, TypedInstance};

/// Constraint set on expected payments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PaymentModel {
    Zero,
    NonNegative,
    BudgetBalanced,
    Arbitrary,
}

impl PaymentModel {
    pub const ALL: [PaymentModel; 4] = [
        PaymentModel::Zero,
        PaymentModel::NonNegative,
        PaymentModel::BudgetBalanced,
        PaymentModel::Arbitrary,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PaymentModel::Zero => "zero",
            PaymentModel::NonNegative => "nonnegative",
            PaymentModel::BudgetBalanced => "budget_balanced",
            PaymentModel::Arbitrary => "arbitrary",
        }
    }

    pub fn parse(text: &str) -> Option<Self> {
        match text.to_ascii_lowercase().replace('-', "_").as_str() {
            "zero" | "none" => Some(PaymentModel::Zero),
            "nonnegative" | "non_negative" => Some(PaymentModel::NonNegative),
            "budget_balanced" | "budgetbalanced" => Some(PaymentModel::BudgetBalanced),
            "arbitrary" | "general" => Some(PaymentModel::Arbitrary),
            _ => None,
        }
    }

    /// Checks `payments` against the model's polytope, exactly.
    pub fn admits(self, payments: &[Rational]) -> bool {
        match self {
            PaymentModel::Zero => payments.iter().all(Zero::is_zero),
            PaymentModel::NonNegative => payments.iter().all(|p| !p.is_negative()),
            PaymentModel::BudgetBalanced => sum(payments).is_zero(),
            PaymentModel::Arbitrary => true,
        }
    }
}

impl fmt::Display for PaymentModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One state of nature: its prior probability and per-action payoffs.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct State {
    pub prob: Rational,
    pub sender: Vec<Rational>,
    pub receiver: Vec<Rational>,
}

/// Finite-state single-receiver persuasion instance with `num_actions`
/// actions. Constructed only through [`PersuasionInstance::new`], so every
/// value satisfies its invariants.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PersuasionInstance {
    num_actions: usize,
    states: Vec<State>,
}

pub(crate) fn check_distribution(location: &str, probs: &[&Rational], issues: &mut Vec<ValidationIssue>) {
    for (k, p) in probs.iter().enumerate() {
        if p.is_negative() {
            issues.push(ValidationIssue::NegativeProbability {
                location: format!("{location}[{k}]"),
                value: (*p).clone(),
            });
        }
    }
    let total = sum(probs.iter().copied());
    if !total.is_one() {
        issues.push(ValidationIssue::ProbabilityNotNormalized { location: location.to_string(), sum: total });
    }
}

impl PersuasionInstance {
    pub fn new(num_actions: usize, states: Vec<State>) -> Result<Self> {
        let instance = PersuasionInstance { num_actions, states };
        instance.validate().into_result()?;
        Ok(instance)
    }

    /// Lists every violated invariant (empty when valid).
    pub fn validate(&self) -> ValidationErrors {
        let mut issues = Vec::new();
        if self.num_actions == 0 {
            issues.push(ValidationIssue::Empty { location: "actions".into() });
        }
        if self.states.is_empty() {
            issues.push(ValidationIssue::Empty { location: "states".into() });
        }
        for (k, st) in self.states.iter().enumerate() {
            for (name, v) in [("sender", &st.sender), ("receiver", &st.receiver)] {
                if v.len() != self.num_actions {
                    issues.push(ValidationIssue::DimensionMismatch {
                        location: format!("states[{k}].{name}"),
                        expected: self.num_actions,
                        found: v.len(),
                    });
                }
            }
        }
        if !self.states.is_empty() {
            let probs: Vec<&Rational> = self.states.iter().map(|s| &s.prob).collect();
            check_distribution("states.prob", &probs, &mut issues);
        }
        ValidationErrors(issues)
    }

    pub fn num_actions(&self) -> usize {
        self.num_actions
    }

    pub fn states(&self) -> &[State] {
        &self.states
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    /// Expected payoffs `(E[s(i)], E[r(i)])` of each action under the prior.
    pub fn expected_payoffs(&self) -> (Vec<Rational>, Vec<Rational>) {
        let n = self.num_actions;
        let mut s = vec![Rational::zero(); n];
        let mut r = vec![Rational::zero(); n];
        for st in &self.states {
            for i in 0..n {
                s[i] += &st.prob * &st.sender[i];
                r[i] += &st.prob * &st.receiver[i];
            }
        }
        (s, r)
    }

    /// Merges duplicate states and drops zero-probability ones.
    fn state_measure(&self, perm: Option<&[usize]>) -> BTreeMap<(Vec<Rational>, Vec<Rational>), Rational> {
        let mut measure = BTreeMap::new();
        for st in self.states.iter().filter(|s| !s.prob.is_zero()) {
            let key = match perm {
                None => (st.sender.clone(), st.receiver.clone()),
                Some(p) => (
                    p.iter().map(|&a| st.sender[a].clone()).collect(),
                    p.iter().map(|&a| st.receiver[a].clone()).collect(),
                ),
            };
            *measure.entry(key).or_insert_with(Rational::zero) += &st.prob;
        }
        measure
    }

    /// True iff permuting action labels maps the prior onto itself. Checked on
    /// the transpositions `(0 k)`, which generate every permutation.
    pub fn is_symmetric(&self) -> bool {
        let base = self.state_measure(None);
        (1..self.num_actions).all(|k| {
            let mut perm: Vec<usize> = (0..self.num_actions).collect();
            perm.swap(0, k);
            self.state_measure(Some(&perm)) == base
        })
    }

    pub fn require_symmetric(&self) -> Result<()> {
        if self.is_symmetric() {
            Ok(())
        } else {
            Err(Error::NotSymmetric)
        }
    }
}

/// A direct signaling scheme: per-state recommendation distributions plus
/// expected payments `P(i)` for following each recommendation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignalingScheme {
    distribution: Vec<Vec<Rational>>,
    payments: Vec<Rational>,
    model: PaymentModel,
}

impl SignalingScheme {
    pub fn new(distribution: Vec<Vec<Rational>>, payments: Vec<Rational>, model: PaymentModel) -> Result<Self> {
        let scheme = SignalingScheme { distribution, payments, model };
        scheme.validate().into_result()?;
        Ok(scheme)
    }

    /// A scheme with no payments under the `Zero` model.
    pub fn without_payments(distribution: Vec<Vec<Rational>>) -> Result<Self> {
        let n = distribution.first().map_or(0, Vec::len);
        SignalingScheme::new(distribution, vec![Rational::zero(); n], PaymentModel::Zero)
    }

    pub fn validate(&self) -> ValidationErrors {
        let mut issues = Vec::new();
        let n = self.payments.len();
        for (k, row) in self.distribution.iter().enumerate() {
            let location = format!("scheme[{k}]");
            if row.len() != n {
                issues.push(ValidationIssue::DimensionMismatch { location: location.clone(), expected: n, found: row.len() });
            }
            let probs: Vec<&Rational> = row.iter().collect();
            check_distribution(&location, &probs, &mut issues);
        }
        if !self.model.admits(&self.payments) {
            issues.push(ValidationIssue::PaymentModel {
                location: "payments".into(),
                detail: format!("payments violate the {} model", self.model),
            });
        }
        ValidationErrors(issues)
    }

    /// Checks that the scheme's shape matches `instance`.
    pub fn check_against(&self, instance: &PersuasionInstance) -> Result<()> {
        let mut issues = Vec::new();
        if self.distribution.len() != instance.num_states() {
            issues.push(ValidationIssue::DimensionMismatch {
                location: "scheme".into(),
                expected: instance.num_states(),
                found: self.distribution.len(),
            });
        }
        if self.payments.len() != instance.num_actions() {
            issues.push(ValidationIssue::DimensionMismatch {
                location: "payments".into(),
                expected: instance.num_actions(),
                found: self.payments.len(),
            });
        }
        ValidationErrors(issues).into_result()
    }

    pub fn distribution(&self) -> &[Vec<Rational>] {
        &self.distribution
    }

    pub fn payments(&self) -> &[Rational] {
        &self.payments
    }

    pub fn model(&self) -> PaymentModel {
        self.model
    }

    pub fn num_actions(&self) -> usize {
        self.payments.len()
    }

    /// Same distribution with different payments.
    pub fn with_payments(&self, payments: Vec<Rational>, model: PaymentModel) -> Result<Self> {
        SignalingScheme::new(self.distribution.clone(), payments, model)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn state(prob: Rational, s: &[i64], r: &[i64]) -> State {
        State {
            prob,
            sender: s.iter().map(|&v| int(v)).collect(),
            receiver: r.iter().map(|&v| int(v)).collect(),
        }
    }

    #[test]
    fn validates_normalized_prior() {
        let ok = PersuasionInstance::new(2, vec![state(rat(1, 2), &[1, 0], &[0, 1]), state(rat(1, 2), &[0, 1], &[1, 0])]);
        assert!(ok.is_ok());
    }

    #[test]
    fn rejects_unnormalized_prior() {
        let err = PersuasionInstance::new(2, vec![state(rat(1, 2), &[1, 0], &[0, 1]), state(rat(1, 3), &[0, 1], &[1, 0])])
            .unwrap_err();
        let Error::Validation(v) = err else { panic!() };
        assert!(matches!(
            v.issues(),
            [ValidationIssue::ProbabilityNotNormalized { sum, .. }] if *sum == rat(5, 6)
        ));
    }

    #[test]
    fn rejects_wrong_payoff_length() {
        let err = PersuasionInstance::new(2, vec![state(int(1), &[1, 0, 2], &[0, 1])]).unwrap_err();
        let Error::Validation(v) = err else { panic!() };
        assert!(matches!(v.issues(), [ValidationIssue::DimensionMismatch { expected: 2, found: 3, .. }]));
    }

    #[test]
    fn reports_every_issue() {
        let inst = PersuasionInstance {
            num_actions: 2,
            states: vec![state(rat(-1, 2), &[1], &[0, 1]), state(rat(1, 2), &[0, 1], &[1])],
        };
        assert_eq!(inst.validate().issues().len(), 4);
    }

    #[test]
    fn symmetry_detection() {
        let sym = PersuasionInstance::new(
            2,
            vec![state(rat(1, 2), &[1, 0], &[0, 1]), state(rat(1, 2), &[0, 1], &[1, 0])],
        )
        .unwrap();
        assert!(sym.is_symmetric());
        let asym = PersuasionInstance::new(
            2,
            vec![state(rat(1, 3), &[1, 0], &[0, 1]), state(rat(2, 3), &[0, 1], &[1, 0])],
        )
        .unwrap();
        assert!(!asym.is_symmetric());
    }

    #[test]
    fn payment_models() {
        let p = vec![rat(-1, 2), rat(1, 2)];
        assert!(PaymentModel::BudgetBalanced.admits(&p));
        assert!(!PaymentModel::NonNegative.admits(&p));
        assert!(PaymentModel::Arbitrary.admits(&p));
        assert!(!PaymentModel::Zero.admits(&p));
        assert!(SignalingScheme::new(vec![vec![int(1), int(0)]], p, PaymentModel::NonNegative).is_err());
        for m in PaymentModel::ALL {
            assert_eq!(PaymentModel::parse(m.name()), Some(m));
        }
    }
}
