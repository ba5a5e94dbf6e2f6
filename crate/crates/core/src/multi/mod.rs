//! Multi-receiver binary-action persuasion with externalities.
//!
//! Schemes are distributions over the set `S` of receivers told to take
//! action 1. Payments are linearized as expected transfers `Q_i(1)`, `Q_i(0)`
//! from the sender to receiver `i` when it is told 1 (resp. 0) and complies.

mod instance;

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lp::{self, Bound, LpProblem, LpSolution, Relation, Sense};
use crate::model::{PaymentModel, SignalingScheme};
use crate::rational::{sum, Rational};

pub use instance::{marginal, MultiAgentInstance, MultiState, DEFAULT_COLUMN_LIMIT};
pub(crate) use instance::contains;

/// Sparse per-state distribution over recommended sets.
pub type SetDistribution = BTreeMap<u32, Rational>;

/// Per-recommendation payments realizing expected payments `Q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RealizedPayments {
    /// `x_i = Pr[i is told to take action 1]`.
    pub action_one_prob: Vec<Rational>,
    /// Paid to `i` whenever it is told 1 and complies.
    pub on_one: Vec<Rational>,
    /// Paid to `i` whenever it is told 0 and complies.
    pub on_zero: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiAgentScheme {
    pub allocation: Vec<SetDistribution>,
    pub q_one: Vec<Rational>,
    pub q_zero: Vec<Rational>,
    pub model: PaymentModel,
    pub realized: Option<RealizedPayments>,
}

/// Partial-Lagrangian multipliers of LP-Binary: `alpha` on the action-1
/// constraints, `beta` on the action-0 constraints, the common value `gamma`
/// when payments force `alpha = beta`, and the per-state simplex prices `y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiDual {
    pub alpha: Vec<Rational>,
    pub beta: Vec<Rational>,
    pub gamma: Option<Rational>,
    pub y: Vec<Rational>,
}

/// Variable and row indices of an LP built by [`build_lp_binary`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryLayout {
    pub num_receivers: usize,
    pub num_states: usize,
    /// Index of `Q_i(1)`, `Q_i(0)` pairs; `None` under the zero model.
    pub payment_base: Option<usize>,
    pub action_one_rows: Vec<usize>,
    /// Empty when the action-0 constraints were dropped.
    pub action_zero_rows: Vec<usize>,
    pub simplex_rows: Vec<usize>,
    pub budget_row: Option<usize>,
}

impl BinaryLayout {
    pub fn phi(&self, state: usize, set: u32) -> usize {
        (state << self.num_receivers) + set as usize
    }

    pub fn q_one(&self, receiver: usize) -> Option<usize> {
        self.payment_base.map(|b| b + 2 * receiver)
    }

    pub fn q_zero(&self, receiver: usize) -> Option<usize> {
        self.payment_base.map(|b| b + 2 * receiver + 1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryLp {
    pub problem: LpProblem,
    pub layout: BinaryLayout,
}

pub(crate) fn build_binary(
    instance: &MultiAgentInstance,
    model: PaymentModel,
    limit: usize,
    with_action_zero_rows: bool,
) -> Result<BinaryLp> {
    instance.check_size(limit)?;
    let n = instance.num_receivers();
    let width = instance.num_subsets();
    let num_states = instance.num_states();
    let num_phi = width * num_states;
    let payment_base = (model != PaymentModel::Zero).then_some(num_phi);
    let num_vars = num_phi + if payment_base.is_some() { 2 * n } else { 0 };

    let mut p = LpProblem::new(num_vars, Sense::Maximize);
    let layout_stub = BinaryLayout {
        num_receivers: n,
        num_states,
        payment_base,
        action_one_rows: Vec::new(),
        action_zero_rows: Vec::new(),
        simplex_rows: Vec::new(),
        budget_row: None,
    };
    for (k, st) in instance.states().iter().enumerate() {
        for set in 0..width as u32 {
            p.objective[layout_stub.phi(k, set)] = &st.prob * &st.sender[set as usize];
        }
    }
    let one = Rational::one();
    for i in 0..n {
        if let (Some(q1), Some(q0)) = (layout_stub.q_one(i), layout_stub.q_zero(i)) {
            p.objective[q1] = -one.clone();
            p.objective[q0] = -one.clone();
            let bound = if model == PaymentModel::NonNegative { Bound::non_negative() } else { Bound::free() };
            p.set_bounds(q1, bound.clone());
            p.set_bounds(q0, bound);
        }
    }

    let mut action_one_rows = Vec::with_capacity(n);
    for i in 0..n {
        let mut row = Vec::new();
        for (k, st) in instance.states().iter().enumerate() {
            for set in (0..width as u32).filter(|&s| contains(s, i)) {
                row.push((layout_stub.phi(k, set), &st.prob * instance.g(k, i, set)));
            }
        }
        if let Some(q1) = layout_stub.q_one(i) {
            row.push((q1, one.clone()));
        }
        action_one_rows.push(p.add_constraint(row, Relation::Ge, Rational::zero()));
    }
    let mut action_zero_rows = Vec::new();
    if with_action_zero_rows {
        for i in 0..n {
            let mut row = Vec::new();
            for (k, st) in instance.states().iter().enumerate() {
                for set in (0..width as u32).filter(|&s| !contains(s, i)) {
                    row.push((layout_stub.phi(k, set), &st.prob * instance.g(k, i, set | (1 << i))));
                }
            }
            if let Some(q0) = layout_stub.q_zero(i) {
                row.push((q0, -one.clone()));
            }
            action_zero_rows.push(p.add_constraint(row, Relation::Le, Rational::zero()));
        }
    }
    let simplex_rows = (0..num_states)
        .map(|k| {
            let row = (0..width as u32).map(|set| (layout_stub.phi(k, set), one.clone())).collect();
            p.add_constraint(row, Relation::Eq, one.clone())
        })
        .collect();
    let budget_row = (model == PaymentModel::BudgetBalanced).then(|| {
        let row = (0..n)
            .flat_map(|i| [layout_stub.q_one(i), layout_stub.q_zero(i)])
            .flatten()
            .map(|j| (j, one.clone()))
            .collect();
        p.add_constraint(row, Relation::Eq, Rational::zero())
    });

    let layout = BinaryLayout { action_one_rows, action_zero_rows, simplex_rows, budget_row, ..layout_stub };
    Ok(BinaryLp { problem: p, layout })
}

/// LP-Binary with sender objective `sum mu phi f - sum_i (Q_i(1) + Q_i(0))`,
/// both families of persuasiveness constraints, per-state simplex rows and
/// the payment model's constraints on `Q`.
pub fn build_lp_binary(instance: &MultiAgentInstance, model: PaymentModel, limit: usize) -> Result<BinaryLp> {
    build_binary(instance, model, limit, true)
}

/// `f(S) + gamma * (sum_{i in S} g_i(S) - sum_{i not in S} g_i(S + i))`.
pub fn virtual_payoff(instance: &MultiAgentInstance, state: usize, set: u32, gamma: &Rational) -> Rational {
    let st = &instance.states()[state];
    let mut value = st.sender[set as usize].clone();
    if gamma.is_zero() {
        return value;
    }
    let mut surplus = Rational::zero();
    for i in 0..instance.num_receivers() {
        if contains(set, i) {
            surplus += instance.g(state, i, set);
        } else {
            surplus -= instance.g(state, i, set | (1 << i));
        }
    }
    value += gamma * surplus;
    value
}

/// Every set maximizing the total virtual payoff in `state`, ascending.
pub fn virtual_payoff_maximizers(instance: &MultiAgentInstance, state: usize, gamma: &Rational) -> Vec<u32> {
    let values: Vec<Rational> =
        (0..instance.num_subsets() as u32).map(|s| virtual_payoff(instance, state, s, gamma)).collect();
    let best = values.iter().max().cloned().unwrap_or_else(Rational::zero);
    (0..values.len() as u32).filter(|&s| values[s as usize] == best).collect()
}

/// Smallest-bitmask maximizer of the total virtual payoff.
pub fn virtual_payoff_argmax(instance: &MultiAgentInstance, state: usize, gamma: &Rational) -> u32 {
    virtual_payoff_maximizers(instance, state, gamma)[0]
}

/// Aggregate persuasiveness terms of an allocation:
/// `A_i = sum mu sum_{S ni i} phi(S) g_i(S)` (action-1 side) and
/// `B_i = sum mu sum_{S not ni i} phi(S) g_i(S + i)` (action-0 side).
/// Without payments the allocation is persuasive iff `A_i >= 0 >= B_i`.
pub fn persuasion_terms(instance: &MultiAgentInstance, allocation: &[SetDistribution]) -> (Vec<Rational>, Vec<Rational>) {
    let n = instance.num_receivers();
    let mut a = vec![Rational::zero(); n];
    let mut b = vec![Rational::zero(); n];
    for (k, (st, dist)) in instance.states().iter().zip(allocation).enumerate() {
        if st.prob.is_zero() {
            continue;
        }
        for (&set, w) in dist {
            let weight = &st.prob * w;
            for i in 0..n {
                if contains(set, i) {
                    a[i] += &weight * instance.g(k, i, set);
                } else {
                    b[i] += &weight * instance.g(k, i, set | (1 << i));
                }
            }
        }
    }
    (a, b)
}

/// `x_i = Pr[i in S]` under the allocation.
pub fn action_one_probabilities(instance: &MultiAgentInstance, allocation: &[SetDistribution]) -> Vec<Rational> {
    let mut x = vec![Rational::zero(); instance.num_receivers()];
    for (st, dist) in instance.states().iter().zip(allocation) {
        for (&set, w) in dist {
            for (i, xi) in x.iter_mut().enumerate() {
                if contains(set, i) {
                    *xi += &st.prob * w;
                }
            }
        }
    }
    x
}

/// Cheapest expected payments `(Q(1), Q(0))` making `allocation` persuasive
/// under `model`, or `None` if no admissible payments exist. Under budget
/// balance any surplus is handed to receiver 0 on a branch it actually
/// reaches, keeping payments off zero-probability branches.
pub fn optimal_expected_payments(
    instance: &MultiAgentInstance,
    allocation: &[SetDistribution],
    model: PaymentModel,
) -> Option<(Vec<Rational>, Vec<Rational>)> {
    let (a, b) = persuasion_terms(instance, allocation);
    let mut q1: Vec<Rational> = a.iter().map(|v| -v.clone()).collect();
    let mut q0 = b;
    let zero = Rational::zero();
    match model {
        PaymentModel::Zero => {
            if q1.iter().chain(&q0).any(Signed::is_positive) {
                return None;
            }
            q1.iter_mut().chain(q0.iter_mut()).for_each(|q| *q = zero.clone());
        }
        PaymentModel::NonNegative => {
            q1.iter_mut().chain(q0.iter_mut()).filter(|q| q.is_negative()).for_each(|q| *q = zero.clone());
        }
        PaymentModel::Arbitrary => {}
        PaymentModel::BudgetBalanced => {
            let surplus = -(sum(&q1) + sum(&q0));
            if surplus.is_negative() {
                return None;
            }
            if !surplus.is_zero() {
                let x0 = &action_one_probabilities(instance, allocation)[0];
                if x0.is_positive() {
                    q1[0] += surplus;
                } else {
                    q0[0] += surplus;
                }
            }
        }
    }
    Some((q1, q0))
}

impl MultiAgentScheme {
    /// Pairs an allocation with its cheapest admissible payments.
    pub fn with_optimal_payments(
        instance: &MultiAgentInstance,
        allocation: Vec<SetDistribution>,
        model: PaymentModel,
    ) -> Option<Self> {
        let (q_one, q_zero) = optimal_expected_payments(instance, &allocation, model)?;
        Some(MultiAgentScheme { allocation, q_one, q_zero, model, realized: None })
    }

    /// Deterministic allocation recommending `sets[k]` in state `k`.
    pub fn deterministic_allocation(sets: &[u32]) -> Vec<SetDistribution> {
        sets.iter().map(|&s| BTreeMap::from([(s, Rational::one())])).collect()
    }

    pub fn expected_payment_total(&self) -> Rational {
        sum(&self.q_one) + sum(&self.q_zero)
    }

    /// Exact check of the allocation simplex, the payment model and both
    /// families of persuasiveness constraints.
    pub fn is_feasible(&self, instance: &MultiAgentInstance) -> bool {
        if self.allocation.len() != instance.num_states() {
            return false;
        }
        let width = instance.num_subsets() as u32;
        for dist in &self.allocation {
            if dist.keys().any(|&s| s >= width) || dist.values().any(Signed::is_negative) {
                return false;
            }
            if !sum(dist.values()).is_one() {
                return false;
            }
        }
        let payments: Vec<Rational> = self.q_one.iter().chain(&self.q_zero).cloned().collect();
        if payments.len() != 2 * instance.num_receivers() || !self.model.admits(&payments) {
            return false;
        }
        let (a, b) = persuasion_terms(instance, &self.allocation);
        (0..instance.num_receivers())
            .all(|i| !(&a[i] + &self.q_one[i]).is_negative() && !(&b[i] - &self.q_zero[i]).is_positive())
    }

    /// `sum mu phi f - sum (Q(1) + Q(0))`.
    pub fn sender_utility(&self, instance: &MultiAgentInstance) -> Rational {
        let mut total = Rational::zero();
        for (st, dist) in instance.states().iter().zip(&self.allocation) {
            for (&set, w) in dist {
                total += &st.prob * w * &st.sender[set as usize];
            }
        }
        total - self.expected_payment_total()
    }
}

/// Optimal scheme of an explicit LP-Binary solve.
#[derive(Debug, Clone)]
pub struct MultiSolution {
    pub scheme: MultiAgentScheme,
    pub dual: MultiDual,
    pub objective: Rational,
    pub problem: LpProblem,
    pub lp: LpSolution,
}

fn read_allocation(lp: &BinaryLp, primal: &[Rational], width: usize) -> Vec<SetDistribution> {
    (0..lp.layout.num_states)
        .map(|k| {
            (0..width as u32)
                .filter_map(|s| {
                    let v = &primal[lp.layout.phi(k, s)];
                    (!v.is_zero()).then(|| (s, v.clone()))
                })
                .collect()
        })
        .collect()
}

fn read_dual(lp: &BinaryLp, sol: &LpSolution, model: PaymentModel) -> MultiDual {
    let alpha: Vec<Rational> = lp.layout.action_one_rows.iter().map(|&r| -sol.dual[r].clone()).collect();
    let beta: Vec<Rational> = lp.layout.action_zero_rows.iter().map(|&r| sol.dual[r].clone()).collect();
    let y = lp.layout.simplex_rows.iter().map(|&r| sol.dual[r].clone()).collect();
    let gamma = match model {
        // The free Q variables pin alpha_i = beta_i = 1 + (budget row price).
        PaymentModel::BudgetBalanced => lp.layout.budget_row.map(|r| Rational::one() + &sol.dual[r]),
        PaymentModel::Arbitrary => Some(Rational::one()),
        _ => None,
    };
    MultiDual { alpha, beta, gamma, y }
}

fn solve_binary(instance: &MultiAgentInstance, lp: &BinaryLp, model: PaymentModel) -> Result<MultiSolution> {
    let sol = lp::solve_certified(&lp.problem)?;
    if !sol.is_optimal() {
        return Err(Error::Internal(format!("LP-Binary ({model}) reported {}", sol.status)));
    }
    let allocation = read_allocation(lp, &sol.primal, instance.num_subsets());
    // Re-derive payments from the allocation so none sit on unreachable
    // branches; the LP's own Q may differ when it is not unique.
    let scheme = MultiAgentScheme::with_optimal_payments(instance, allocation, model)
        .ok_or_else(|| Error::Internal("LP allocation admits no payments".into()))?;
    let objective = sol.objective_value.clone();
    let achieved = scheme.sender_utility(instance);
    if achieved != objective {
        return Err(Error::CharacterizationMismatch {
            context: format!("payment re-derivation ({model})"),
            lp: objective,
            found: achieved,
        });
    }
    let dual = read_dual(lp, &sol, model);
    Ok(MultiSolution { scheme, dual, objective, problem: lp.problem.clone(), lp: sol })
}

/// Solves LP-Binary directly under any payment model.
pub fn solve_lp(instance: &MultiAgentInstance, model: PaymentModel, limit: usize) -> Result<MultiSolution> {
    let lp = build_lp_binary(instance, model, limit)?;
    solve_binary(instance, &lp, model)
}

/// How the budget-balanced allocation was assembled.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AllocationForm {
    /// One virtual-payoff maximizer per state (smallest bitmask).
    Deterministic,
    /// A mixture over tied virtual-payoff maximizers.
    MixedOverMaximizers,
}

#[derive(Debug, Clone)]
pub struct BudgetBalancedSolution {
    pub scheme: MultiAgentScheme,
    pub dual: MultiDual,
    pub gamma_star: Rational,
    pub objective: Rational,
    pub form: AllocationForm,
    /// Maximizers of the total virtual payoff at `gamma_star`, per state.
    pub maximizers: Vec<Vec<u32>>,
}

/// Optimal budget-balanced scheme through the virtual-payoff
/// characterization.
///
/// `gamma*` is read off the LP's optimal dual. Each state then recommends a
/// maximizer of `f(S) + gamma* (sum_{i in S} g_i(S) - sum_{i not in S}
/// g_i(S + i))`. The smallest-bitmask choice is tried first; when it cannot
/// be made budget balanced, the mixture over tied maximizers is re-optimized.
/// Either way the result must reach the LP optimum and carry realized
/// payments.
pub fn solve_budget_balanced(instance: &MultiAgentInstance, limit: usize) -> Result<BudgetBalancedSolution> {
    let model = PaymentModel::BudgetBalanced;
    let lp = build_lp_binary(instance, model, limit)?;
    let full = solve_binary(instance, &lp, model)?;
    let gamma_star = full.dual.gamma.clone().ok_or_else(|| Error::Internal("missing budget row".into()))?;
    if full.dual.alpha.iter().chain(&full.dual.beta).any(|v| *v != gamma_star) || gamma_star.is_negative() {
        return Err(Error::Internal(format!("dual does not satisfy alpha = beta = gamma* = {gamma_star}")));
    }

    let maximizers: Vec<Vec<u32>> =
        (0..instance.num_states()).map(|k| virtual_payoff_maximizers(instance, k, &gamma_star)).collect();
    let picks: Vec<u32> = maximizers.iter().map(|m| m[0]).collect();
    let deterministic = MultiAgentScheme::deterministic_allocation(&picks);

    let (scheme, form) = match MultiAgentScheme::with_optimal_payments(instance, deterministic, model) {
        Some(s) if s.sender_utility(instance) == full.objective => (s, AllocationForm::Deterministic),
        _ => {
            let mut restricted = lp.clone();
            for (k, sets) in maximizers.iter().enumerate() {
                for set in (0..instance.num_subsets() as u32).filter(|s| !sets.contains(s)) {
                    let zero = Some(Rational::zero());
                    restricted.problem.set_bounds(lp.layout.phi(k, set), Bound { lower: zero.clone(), upper: zero });
                }
            }
            let mixed = solve_binary(instance, &restricted, model)?;
            (mixed.scheme, AllocationForm::MixedOverMaximizers)
        }
    };
    let found = scheme.sender_utility(instance);
    if found != full.objective || !scheme.is_feasible(instance) {
        return Err(Error::CharacterizationMismatch {
            context: "budget-balanced virtual payoff".into(),
            lp: full.objective,
            found,
        });
    }
    let scheme = recover_payments(instance, &scheme)?;
    Ok(BudgetBalancedSolution { scheme, dual: full.dual, gamma_star, objective: full.objective, form, maximizers })
}

#[derive(Debug, Clone)]
pub struct ArbitrarySolution {
    pub scheme: MultiAgentScheme,
    pub objective: Rational,
    /// Optimum of the explicit LP, when it was checked.
    pub lp_objective: Option<Rational>,
}

/// Total-payoff maximizer (`gamma = 1`) with the cheapest payments, built
/// without an LP.
pub fn arbitrary_payment_scheme(instance: &MultiAgentInstance) -> Result<MultiAgentScheme> {
    let gamma = Rational::one();
    let picks: Vec<u32> = (0..instance.num_states()).map(|k| virtual_payoff_argmax(instance, k, &gamma)).collect();
    let allocation = MultiAgentScheme::deterministic_allocation(&picks);
    let scheme = MultiAgentScheme::with_optimal_payments(instance, allocation, PaymentModel::Arbitrary)
        .ok_or_else(|| Error::Internal("arbitrary payments are always admissible".into()))?;
    recover_payments(instance, &scheme)
}

/// [`arbitrary_payment_scheme`], cross-checked against the explicit LP when
/// `verify` is set.
pub fn solve_arbitrary(instance: &MultiAgentInstance, limit: usize, verify: bool) -> Result<ArbitrarySolution> {
    instance.check_size(limit)?;
    let scheme = arbitrary_payment_scheme(instance)?;
    let objective = scheme.sender_utility(instance);
    let lp_objective = if verify {
        let lp = solve_lp(instance, PaymentModel::Arbitrary, limit)?;
        if lp.objective != objective {
            return Err(Error::CharacterizationMismatch {
                context: "total payoff maximizer".into(),
                lp: lp.objective,
                found: objective,
            });
        }
        Some(lp.objective)
    } else {
        None
    };
    Ok(ArbitrarySolution { scheme, objective, lp_objective })
}

impl MultiAgentScheme {
    /// Reads a one-receiver scheme as a two-action scheme: `{0}` is action 1,
    /// `Q(1)` and `Q(0)` become `P(1)` and `P(0)`.
    pub fn to_two_action(&self) -> Result<SignalingScheme> {
        if self.q_one.len() != 1 || self.allocation.iter().any(|d| d.keys().any(|&s| s > 1)) {
            return Err(Error::InvalidParameter("not a one-receiver scheme".into()));
        }
        let distribution = self
            .allocation
            .iter()
            .map(|d| (0..2u32).map(|s| d.get(&s).cloned().unwrap_or_else(Rational::zero)).collect())
            .collect();
        SignalingScheme::new(distribution, vec![self.q_zero[0].clone(), self.q_one[0].clone()], self.model)
    }
}

/// Turns expected payments into per-recommendation payments:
/// `p_i(1) = Q_i(1) / x_i`, `p_i(0) = Q_i(0) / (1 - x_i)`, with `0` on a
/// branch that never occurs (where `Q` must then vanish).
pub fn recover_payments(instance: &MultiAgentInstance, scheme: &MultiAgentScheme) -> Result<MultiAgentScheme> {
    let x = action_one_probabilities(instance, &scheme.allocation);
    let mut on_one = Vec::with_capacity(x.len());
    let mut on_zero = Vec::with_capacity(x.len());
    for (i, xi) in x.iter().enumerate() {
        let reach_zero = Rational::one() - xi;
        for (reach, q, out, action) in [(xi, &scheme.q_one[i], &mut on_one, 1u8), (&reach_zero, &scheme.q_zero[i], &mut on_zero, 0u8)] {
            if reach.is_zero() {
                if !q.is_zero() {
                    return Err(Error::InconsistentPayments { receiver: i, action });
                }
                out.push(Rational::zero());
            } else {
                out.push(q / reach);
            }
        }
    }
    let mut out = scheme.clone();
    out.realized = Some(RealizedPayments { action_one_prob: x, on_one, on_zero });
    Ok(out)
}

impl RealizedPayments {
    /// Total expected transfer `sum_i x_i p_i(1) + (1 - x_i) p_i(0)`.
    pub fn expected_total(&self) -> Rational {
        self.action_one_prob
            .iter()
            .zip(self.on_one.iter().zip(&self.on_zero))
            .fold(Rational::zero(), |acc, (x, (p1, p0))| acc + x * p1 + (Rational::one() - x) * p0)
    }
}

#[cfg(test)]
mod tests;
