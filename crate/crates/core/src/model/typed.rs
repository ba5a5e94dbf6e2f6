use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::{check_distribution, PersuasionInstance, State};
use crate::error::{Result, ValidationErrors, ValidationIssue};
use crate::rational::Rational;

/// Payoffs of an action of a given type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeEntry {
    pub sender: Rational,
    pub receiver: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TypeDistribution {
    /// Each action draws its type independently from this marginal.
    IidMarginal(Vec<Rational>),
    /// Explicit joint distribution over type profiles.
    Joint(Vec<(Vec<usize>, Rational)>),
}

/// Instance where each action's payoffs depend only on its own type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypedInstance {
    num_actions: usize,
    types: Vec<TypeEntry>,
    distribution: TypeDistribution,
}

impl TypedInstance {
    pub fn new(num_actions: usize, types: Vec<TypeEntry>, distribution: TypeDistribution) -> Result<Self> {
        let t = TypedInstance { num_actions, types, distribution };
        t.validate().into_result()?;
        Ok(t)
    }

    pub fn validate(&self) -> ValidationErrors {
        let mut issues = Vec::new();
        let m = self.types.len();
        if self.num_actions == 0 {
            issues.push(ValidationIssue::Empty { location: "actions".into() });
        }
        if m == 0 {
            issues.push(ValidationIssue::Empty { location: "types".into() });
        }
        match &self.distribution {
            TypeDistribution::IidMarginal(marginal) => {
                if marginal.len() != m {
                    issues.push(ValidationIssue::DimensionMismatch {
                        location: "distribution.iid_marginal".into(),
                        expected: m,
                        found: marginal.len(),
                    });
                }
                let probs: Vec<&Rational> = marginal.iter().collect();
                check_distribution("distribution.iid_marginal", &probs, &mut issues);
            }
            TypeDistribution::Joint(entries) => {
                if entries.is_empty() {
                    issues.push(ValidationIssue::Empty { location: "distribution.joint".into() });
                }
                for (k, (profile, _)) in entries.iter().enumerate() {
                    if profile.len() != self.num_actions {
                        issues.push(ValidationIssue::DimensionMismatch {
                            location: format!("distribution.joint[{k}].profile"),
                            expected: self.num_actions,
                            found: profile.len(),
                        });
                    }
                    for &t in profile.iter().filter(|&&t| t >= m) {
                        issues.push(ValidationIssue::IndexOutOfRange {
                            location: format!("distribution.joint[{k}].profile"),
                            index: t,
                            limit: m,
                        });
                    }
                }
                if !entries.is_empty() {
                    let probs: Vec<&Rational> = entries.iter().map(|(_, p)| p).collect();
                    check_distribution("distribution.joint", &probs, &mut issues);
                }
            }
        }
        ValidationErrors(issues)
    }

    pub fn num_actions(&self) -> usize {
        self.num_actions
    }

    pub fn types(&self) -> &[TypeEntry] {
        &self.types
    }

    pub fn distribution(&self) -> &TypeDistribution {
        &self.distribution
    }

    /// Type profiles with their probabilities, in the order states are
    /// produced by [`TypedInstance::expand`].
    pub fn profiles(&self) -> Vec<(Vec<usize>, Rational)> {
        match &self.distribution {
            TypeDistribution::Joint(entries) => entries.clone(),
            TypeDistribution::IidMarginal(marginal) => {
                let (n, m) = (self.num_actions, self.types.len());
                let count = m.pow(n as u32);
                (0..count)
                    .map(|code| {
                        // Action 0 is the most significant digit.
                        let mut profile = vec![0; n];
                        let mut rest = code;
                        for slot in profile.iter_mut().rev() {
                            *slot = rest % m;
                            rest /= m;
                        }
                        let prob = profile.iter().fold(Rational::one(), |acc, &t| acc * &marginal[t]);
                        (profile, prob)
                    })
                    .collect()
            }
        }
    }

    /// Explicit instance with one state per type profile.
    pub fn expand(&self) -> Result<PersuasionInstance> {
        self.validate().into_result()?;
        let states = self
            .profiles()
            .into_iter()
            .map(|(profile, prob)| State {
                prob,
                sender: profile.iter().map(|&t| self.types[t].sender.clone()).collect(),
                receiver: profile.iter().map(|&t| self.types[t].receiver.clone()).collect(),
            })
            .collect();
        PersuasionInstance::new(self.num_actions, states)
    }

    /// i.i.d. instances are symmetric; a joint is symmetric when every
    /// permutation of a profile carries the same probability.
    pub fn is_symmetric(&self) -> bool {
        match &self.distribution {
            TypeDistribution::IidMarginal(_) => true,
            TypeDistribution::Joint(entries) => {
                let mut measure: BTreeMap<Vec<usize>, Rational> = BTreeMap::new();
                for (profile, p) in entries {
                    *measure.entry(profile.clone()).or_insert_with(Rational::zero) += p;
                }
                measure.retain(|_, p| !p.is_zero());
                (1..self.num_actions).all(|k| {
                    let mut swapped = BTreeMap::new();
                    for (profile, p) in &measure {
                        let mut q = profile.clone();
                        q.swap(0, k);
                        swapped.insert(q, p.clone());
                    }
                    swapped == measure
                })
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat, sum};

    fn binary_types() -> Vec<TypeEntry> {
        // (receiver, sender) in {0,1}^2
        [(0, 0), (0, 1), (1, 0), (1, 1)]
            .iter()
            .map(|&(r, s)| TypeEntry { sender: int(s), receiver: int(r) })
            .collect()
    }

    #[test]
    fn iid_uniform_over_four_types_gives_sixteen_states() {
        let t = TypedInstance::new(2, binary_types(), TypeDistribution::IidMarginal(vec![rat(1, 4); 4])).unwrap();
        let inst = t.expand().unwrap();
        assert_eq!(inst.num_states(), 16);
        assert!(inst.states().iter().all(|s| s.prob == rat(1, 16)));
        assert!(inst.is_symmetric());
    }

    #[test]
    fn single_action_keeps_marginal() {
        let types = vec![TypeEntry { sender: int(3), receiver: int(-1) }, TypeEntry { sender: int(0), receiver: int(2) }];
        let t = TypedInstance::new(1, types, TypeDistribution::IidMarginal(vec![rat(1, 3), rat(2, 3)])).unwrap();
        let inst = t.expand().unwrap();
        let probs: Vec<Rational> = inst.states().iter().map(|s| s.prob.clone()).collect();
        assert_eq!(probs, vec![rat(1, 3), rat(2, 3)]);
        assert_eq!(inst.states()[0].sender, vec![int(3)]);
    }

    #[test]
    fn product_measure() {
        let types = vec![TypeEntry { sender: int(0), receiver: int(0) }, TypeEntry { sender: int(1), receiver: int(1) }];
        let t = TypedInstance::new(2, types, TypeDistribution::IidMarginal(vec![rat(1, 3), rat(2, 3)])).unwrap();
        let inst = t.expand().unwrap();
        let probs: Vec<Rational> = inst.states().iter().map(|s| s.prob.clone()).collect();
        assert_eq!(probs, vec![rat(1, 9), rat(2, 9), rat(2, 9), rat(4, 9)]);
        assert_eq!(sum(&probs), int(1));
    }

    #[test]
    fn joint_symmetry_and_validation() {
        let types = binary_types();
        let sym = TypeDistribution::Joint(vec![(vec![0, 1], rat(1, 4)), (vec![1, 0], rat(1, 4)), (vec![3, 3], rat(1, 2))]);
        assert!(TypedInstance::new(2, types.clone(), sym).unwrap().is_symmetric());
        let asym = TypeDistribution::Joint(vec![(vec![0, 1], rat(1, 2)), (vec![1, 0], rat(1, 2) - rat(1, 8)), (vec![2, 2], rat(1, 8))]);
        assert!(!TypedInstance::new(2, types.clone(), asym).unwrap().is_symmetric());
        let bad = TypeDistribution::Joint(vec![(vec![0, 7], int(1))]);
        assert!(TypedInstance::new(2, types, bad).is_err());
    }
}
