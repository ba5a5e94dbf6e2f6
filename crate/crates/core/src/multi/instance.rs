use num_traits::Zero;

use crate::error::{Error, Result, ValidationErrors, ValidationIssue};
use crate::model::{check_distribution, PersuasionInstance};
use crate::rational::Rational;

/// Default cap on `2^N * |states|` allocation columns.
pub const DEFAULT_COLUMN_LIMIT: usize = 4096;

/// One state: prior probability, the sender's set function `f(S)` and each
/// receiver's set function `u_i(S)`, all indexed by subset bitmask (receiver
/// 0 is the least significant bit).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiState {
    pub prob: Rational,
    pub sender: Vec<Rational>,
    pub receivers: Vec<Vec<Rational>>,
}

/// Binary-action persuasion with `N` receivers and externalities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiAgentInstance {
    num_receivers: usize,
    states: Vec<MultiState>,
}

#[inline]
pub(crate) fn contains(set: u32, i: usize) -> bool {
    set & (1 << i) != 0
}

impl MultiAgentInstance {
    pub fn new(num_receivers: usize, states: Vec<MultiState>) -> Result<Self> {
        let instance = MultiAgentInstance { num_receivers, states };
        instance.validate().into_result()?;
        Ok(instance)
    }

    pub fn validate(&self) -> ValidationErrors {
        let mut issues = Vec::new();
        if self.num_receivers == 0 || self.num_receivers > 20 {
            issues.push(ValidationIssue::IndexOutOfRange {
                location: "receivers".into(),
                index: self.num_receivers,
                limit: 21,
            });
            return ValidationErrors(issues);
        }
        if self.states.is_empty() {
            issues.push(ValidationIssue::Empty { location: "states".into() });
        }
        let width = 1usize << self.num_receivers;
        for (k, st) in self.states.iter().enumerate() {
            if st.sender.len() != width {
                issues.push(ValidationIssue::DimensionMismatch {
                    location: format!("states[{k}].sender"),
                    expected: width,
                    found: st.sender.len(),
                });
            }
            if st.receivers.len() != self.num_receivers {
                issues.push(ValidationIssue::DimensionMismatch {
                    location: format!("states[{k}].receivers"),
                    expected: self.num_receivers,
                    found: st.receivers.len(),
                });
            }
            for (i, u) in st.receivers.iter().enumerate() {
                if u.len() != width {
                    issues.push(ValidationIssue::DimensionMismatch {
                        location: format!("states[{k}].receivers[{i}]"),
                        expected: width,
                        found: u.len(),
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

    pub fn num_receivers(&self) -> usize {
        self.num_receivers
    }

    pub fn num_subsets(&self) -> usize {
        1 << self.num_receivers
    }

    pub fn states(&self) -> &[MultiState] {
        &self.states
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    /// Allocation columns in the explicit LP: `2^N * |states|`.
    pub fn column_count(&self) -> usize {
        self.num_subsets() * self.states.len()
    }

    pub fn check_size(&self, limit: usize) -> Result<()> {
        let columns = self.column_count();
        if columns > limit {
            Err(Error::SizeLimitExceeded { columns, limit })
        } else {
            Ok(())
        }
    }

    /// `g_i(S) = u_i(S) - u_i(S \ {i})`, zero when `i` is not in `S`.
    /// Indices are assumed valid.
    pub fn g(&self, state: usize, receiver: usize, set: u32) -> Rational {
        if !contains(set, receiver) {
            return Rational::zero();
        }
        let u = &self.states[state].receivers[receiver];
        &u[set as usize] - &u[(set & !(1 << receiver)) as usize]
    }

    /// Checks that every sender set function is non-decreasing under
    /// inclusion; returns the first `(state, S, S + i)` with `f(S) > f(S + i)`.
    pub fn sender_monotonicity_violation(&self) -> Option<(usize, u32, u32)> {
        for (k, st) in self.states.iter().enumerate() {
            for set in 0..self.num_subsets() as u32 {
                for i in (0..self.num_receivers).filter(|&i| !contains(set, i)) {
                    let bigger = set | (1 << i);
                    if st.sender[set as usize] > st.sender[bigger as usize] {
                        return Some((k, set, bigger));
                    }
                }
            }
        }
        None
    }

    pub fn require_monotone_sender(&self) -> Result<()> {
        match self.sender_monotonicity_violation() {
            None => Ok(()),
            Some((state, subset, superset)) => Err(Error::NonMonotoneSender { state, subset, superset }),
        }
    }

    /// Encodes a two-action single-receiver instance with `N = 1`: action 1
    /// becomes "receiver 0 takes action 1".
    pub fn from_two_action(instance: &PersuasionInstance) -> Result<Self> {
        if instance.num_actions() != 2 {
            return Err(Error::WrongActionCount { expected: 2, found: instance.num_actions() });
        }
        let states = instance
            .states()
            .iter()
            .map(|st| MultiState {
                prob: st.prob.clone(),
                sender: st.sender.clone(),
                receivers: vec![st.receiver.clone()],
            })
            .collect();
        MultiAgentInstance::new(1, states)
    }
}

/// Marginal utility `g_i(S)` with index checking.
pub fn marginal(instance: &MultiAgentInstance, state: usize, receiver: usize, set: u32) -> Result<Rational> {
    if state >= instance.num_states() {
        return Err(Error::InvalidParameter(format!("state {state} out of range")));
    }
    if receiver >= instance.num_receivers() {
        return Err(Error::InvalidParameter(format!("receiver {receiver} out of range")));
    }
    if set as usize >= instance.num_subsets() {
        return Err(Error::InvalidParameter(format!("set {set:#b} out of range")));
    }
    Ok(instance.g(state, receiver, set))
}
