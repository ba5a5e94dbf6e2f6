//! Receiver cross utilities, the payment identity and expected utilities.

use num_traits::{Signed, Zero};

use super::{PersuasionInstance, SignalingScheme};
use crate::error::{Result, ValidationErrors, ValidationIssue};
use crate::rational::Rational;

/// `X(i, j) = sum_theta mu_theta phi_theta(i) r_theta(j)`: the receiver's
/// expected utility from action `j`, weighted by how often `i` is recommended.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossUtilityMatrix {
    entries: Vec<Vec<Rational>>,
}

impl CrossUtilityMatrix {
    pub fn get(&self, recommended: usize, taken: usize) -> &Rational {
        &self.entries[recommended][taken]
    }

    pub fn entries(&self) -> &[Vec<Rational>] {
        &self.entries
    }

    pub fn size(&self) -> usize {
        self.entries.len()
    }
}

fn check_shape(instance: &PersuasionInstance, distribution: &[Vec<Rational>]) -> Result<()> {
    let n = instance.num_actions();
    let mut issues = Vec::new();
    if distribution.len() != instance.num_states() {
        issues.push(ValidationIssue::DimensionMismatch {
            location: "scheme".into(),
            expected: instance.num_states(),
            found: distribution.len(),
        });
    }
    for (k, row) in distribution.iter().enumerate() {
        if row.len() != n {
            issues.push(ValidationIssue::DimensionMismatch { location: format!("scheme[{k}]"), expected: n, found: row.len() });
        }
    }
    ValidationErrors(issues).into_result()
}

pub fn cross_utility(instance: &PersuasionInstance, distribution: &[Vec<Rational>]) -> Result<CrossUtilityMatrix> {
    check_shape(instance, distribution)?;
    let n = instance.num_actions();
    let mut entries = vec![vec![Rational::zero(); n]; n];
    for (st, phi) in instance.states().iter().zip(distribution) {
        if st.prob.is_zero() {
            continue;
        }
        for (i, row) in entries.iter_mut().enumerate() {
            if phi[i].is_zero() {
                continue;
            }
            let weight = &st.prob * &phi[i];
            for (j, x) in row.iter_mut().enumerate() {
                *x += &weight * &st.receiver[j];
            }
        }
    }
    Ok(CrossUtilityMatrix { entries })
}

/// `Pr[i recommended] = sum_theta mu_theta phi_theta(i)`.
pub fn recommendation_probabilities(instance: &PersuasionInstance, distribution: &[Vec<Rational>]) -> Result<Vec<Rational>> {
    check_shape(instance, distribution)?;
    let mut probs = vec![Rational::zero(); instance.num_actions()];
    for (st, phi) in instance.states().iter().zip(distribution) {
        for (p, f) in probs.iter_mut().zip(phi) {
            *p += &st.prob * f;
        }
    }
    Ok(probs)
}

/// Payment thresholds `T_i = max_{j != i} X(i,j) - X(i,i)` in expected
/// (probability-weighted) form: `(phi, P)` is persuasive iff `P(i) >= T_i`.
/// With a single action the max is empty and `T = [0]`.
pub fn payment_thresholds(instance: &PersuasionInstance, distribution: &[Vec<Rational>]) -> Result<Vec<Rational>> {
    let x = cross_utility(instance, distribution)?;
    Ok(thresholds_from(&x))
}

fn thresholds_from(x: &CrossUtilityMatrix) -> Vec<Rational> {
    let n = x.size();
    (0..n)
        .map(|i| {
            (0..n)
                .filter(|&j| j != i)
                .map(|j| x.get(i, j) - x.get(i, i))
                .max()
                .unwrap_or_else(Rational::zero)
        })
        .collect()
}

/// `max{0, T_i}`, the cheapest non-negative payments making the scheme persuasive.
pub fn nonnegative_thresholds(instance: &PersuasionInstance, distribution: &[Vec<Rational>]) -> Result<Vec<Rational>> {
    Ok(payment_thresholds(instance, distribution)?
        .into_iter()
        .map(|t| if t.is_negative() { Rational::zero() } else { t })
        .collect())
}

/// Divides expected amounts by recommendation probabilities, giving the
/// amount paid per recommendation; `0` where a recommendation never occurs.
pub fn per_recommendation(
    instance: &PersuasionInstance,
    distribution: &[Vec<Rational>],
    expected: &[Rational],
) -> Result<Vec<Rational>> {
    let probs = recommendation_probabilities(instance, distribution)?;
    Ok(expected
        .iter()
        .zip(&probs)
        .map(|(v, p)| if p.is_zero() { Rational::zero() } else { v / p })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Persuasiveness {
    pub persuasive: bool,
    /// `max_{i, j != i} X(i,j) - X(i,i) - P(i)`; persuasive iff `<= 0`.
    pub worst_violation: Rational,
}

pub fn is_persuasive(instance: &PersuasionInstance, scheme: &SignalingScheme) -> Result<Persuasiveness> {
    scheme.check_against(instance)?;
    let x = cross_utility(instance, scheme.distribution())?;
    let n = instance.num_actions();
    let mut worst: Option<Rational> = None;
    for i in 0..n {
        let p = &scheme.payments()[i];
        let candidates: Vec<Rational> = if n == 1 {
            // Single action: the only requirement left is T = 0.
            vec![-p.clone()]
        } else {
            (0..n).filter(|&j| j != i).map(|j| x.get(i, j) - x.get(i, i) - p).collect()
        };
        for v in candidates {
            if worst.as_ref().is_none_or(|w| v > *w) {
                worst = Some(v);
            }
        }
    }
    let worst_violation = worst.unwrap_or_else(Rational::zero);
    Ok(Persuasiveness { persuasive: !worst_violation.is_positive(), worst_violation })
}

/// `sum mu phi s - sum P`, assuming recommendations are followed.
pub fn sender_utility(instance: &PersuasionInstance, scheme: &SignalingScheme) -> Result<Rational> {
    scheme.check_against(instance)?;
    let mut total = Rational::zero();
    for (st, phi) in instance.states().iter().zip(scheme.distribution()) {
        for (f, s) in phi.iter().zip(&st.sender) {
            if !f.is_zero() {
                total += &st.prob * f * s;
            }
        }
    }
    Ok(scheme.payments().iter().fold(total, |acc, p| acc - p))
}

/// `sum mu phi r + sum P`, assuming recommendations are followed.
pub fn receiver_utility(instance: &PersuasionInstance, scheme: &SignalingScheme) -> Result<Rational> {
    scheme.check_against(instance)?;
    let mut total = Rational::zero();
    for (st, phi) in instance.states().iter().zip(scheme.distribution()) {
        for (f, r) in phi.iter().zip(&st.receiver) {
            if !f.is_zero() {
                total += &st.prob * f * r;
            }
        }
    }
    Ok(scheme.payments().iter().fold(total, |acc, p| acc + p))
}
