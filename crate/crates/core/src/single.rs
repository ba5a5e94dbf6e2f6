//! Single-receiver persuasion: the explicit LP under each payment model,
//! its Lagrangian, and the closed-form optimal schemes.

use std::cmp::Ordering;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lp::{self, Bound, LpProblem, LpSolution, Relation, Sense};
use crate::model::{
    cross_utility, is_persuasive, nonnegative_thresholds, payment_thresholds, sender_utility, PaymentModel,
    PersuasionInstance, SignalingScheme,
};
use crate::rational::{sum, Rational};

/// Multipliers of the persuasiveness constraints: `lambda[i][j]` prices
/// "follow `i` rather than deviate to `j`". The diagonal is zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SingleDual {
    pub lambda: Vec<Vec<Rational>>,
    /// Common off-diagonal value, when every `lambda(i, j)` agrees.
    pub symmetric_lambda: Option<Rational>,
}

impl SingleDual {
    pub fn zero(num_actions: usize) -> Self {
        SingleDual { lambda: vec![vec![Rational::zero(); num_actions]; num_actions], symmetric_lambda: Some(Rational::zero()) }
    }

    /// `lambda(i, j) = value` for every `i != j`.
    pub fn symmetric(num_actions: usize, value: Rational) -> Self {
        let lambda = (0..num_actions)
            .map(|i| (0..num_actions).map(|j| if i == j { Rational::zero() } else { value.clone() }).collect())
            .collect();
        SingleDual { lambda, symmetric_lambda: Some(value) }
    }

    pub fn from_matrix(lambda: Vec<Vec<Rational>>) -> Self {
        let n = lambda.len();
        let mut off = (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)));
        let symmetric_lambda = match off.next() {
            None => None,
            Some((i, j)) => {
                let v = &lambda[i][j];
                off.all(|(a, b)| lambda[a][b] == *v).then(|| v.clone())
            }
        };
        SingleDual { lambda, symmetric_lambda }
    }

    /// `sum_{j != i} lambda(i, j)`.
    pub fn row_sum(&self, i: usize) -> Rational {
        self.lambda[i].iter().enumerate().filter(|&(j, _)| j != i).fold(Rational::zero(), |acc, (_, v)| acc + v)
    }
}

/// Variable and row indices of an LP built by [`build_lp`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SingleLayout {
    pub num_actions: usize,
    pub num_states: usize,
    /// Index of `P(0)`; `None` under the zero model.
    pub payment_base: Option<usize>,
    /// `persuasion_rows[i][j]` for `j != i`.
    pub persuasion_rows: Vec<Vec<Option<usize>>>,
    pub simplex_rows: Vec<usize>,
    pub budget_row: Option<usize>,
}

impl SingleLayout {
    pub fn phi(&self, state: usize, action: usize) -> usize {
        state * self.num_actions + action
    }

    pub fn payment(&self, action: usize) -> Option<usize> {
        self.payment_base.map(|b| b + action)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SingleLp {
    pub problem: LpProblem,
    pub layout: SingleLayout,
}

/// Variables `phi_theta(i)` (state-major) followed by `P(i)`; objective
/// `sum mu phi s - sum P`; rows `P(i) + sum mu phi(i) (r(i) - r(j)) >= 0`,
/// one simplex row per state, and the budget row `sum P = 0` when needed.
/// A single action has no persuasiveness rows, so `P >= 0` is imposed there
/// to keep the LP bounded.
pub fn build_lp(instance: &PersuasionInstance, model: PaymentModel) -> SingleLp {
    let n = instance.num_actions();
    let num_states = instance.num_states();
    let num_phi = n * num_states;
    let payment_base = (model != PaymentModel::Zero).then_some(num_phi);
    let num_vars = num_phi + if payment_base.is_some() { n } else { 0 };
    let mut p = LpProblem::new(num_vars, Sense::Maximize);
    let mut layout = SingleLayout {
        num_actions: n,
        num_states,
        payment_base,
        persuasion_rows: vec![vec![None; n]; n],
        simplex_rows: Vec::with_capacity(num_states),
        budget_row: None,
    };
    for (k, st) in instance.states().iter().enumerate() {
        for i in 0..n {
            p.objective[layout.phi(k, i)] = &st.prob * &st.sender[i];
        }
    }
    for i in 0..n {
        if let Some(v) = layout.payment(i) {
            p.objective[v] = -Rational::one();
            let bound = match model {
                PaymentModel::NonNegative => Bound::non_negative(),
                _ if n == 1 => Bound::non_negative(),
                _ => Bound::free(),
            };
            p.set_bounds(v, bound);
        }
    }
    for i in 0..n {
        for j in (0..n).filter(|&j| j != i) {
            let mut row: Vec<(usize, Rational)> = instance
                .states()
                .iter()
                .enumerate()
                .map(|(k, st)| (layout.phi(k, i), &st.prob * (&st.receiver[i] - &st.receiver[j])))
                .collect();
            if let Some(v) = layout.payment(i) {
                row.push((v, Rational::one()));
            }
            layout.persuasion_rows[i][j] = Some(p.add_constraint(row, Relation::Ge, Rational::zero()));
        }
    }
    for k in 0..num_states {
        let row = (0..n).map(|i| (layout.phi(k, i), Rational::one())).collect();
        layout.simplex_rows.push(p.add_constraint(row, Relation::Eq, Rational::one()));
    }
    if model == PaymentModel::BudgetBalanced {
        let row = (0..n).filter_map(|i| layout.payment(i)).map(|v| (v, Rational::one())).collect();
        layout.budget_row = Some(p.add_constraint(row, Relation::Eq, Rational::zero()));
    }
    SingleLp { problem: p, layout }
}

#[derive(Debug, Clone)]
pub struct SingleSolution {
    pub scheme: SignalingScheme,
    pub dual: SingleDual,
    pub objective: Rational,
    pub lp: SingleLp,
    pub solution: LpSolution,
}

/// Optimal scheme under `model` from the explicit LP, with its certified
/// dual mapped back to `lambda(i, j)`.
pub fn solve_optimal(instance: &PersuasionInstance, model: PaymentModel) -> Result<SingleSolution> {
    let lp = build_lp(instance, model);
    let solution = lp::solve_certified(&lp.problem)?;
    if !solution.is_optimal() {
        // Recommending the receiver's best action with no payments is always
        // feasible, and payments are bounded below by the thresholds.
        return Err(Error::Internal(format!("persuasion LP ({model}) reported {}", solution.status)));
    }
    let n = instance.num_actions();
    let layout = &lp.layout;
    let distribution = (0..instance.num_states())
        .map(|k| (0..n).map(|i| solution.primal[layout.phi(k, i)].clone()).collect())
        .collect();
    let payments = (0..n)
        .map(|i| layout.payment(i).map_or_else(Rational::zero, |v| solution.primal[v].clone()))
        .collect();
    let scheme = SignalingScheme::new(distribution, payments, model)?;
    let lambda = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| layout.persuasion_rows[i][j].map_or_else(Rational::zero, |r| -solution.dual[r].clone()))
                .collect()
        })
        .collect();
    let dual = SingleDual::from_matrix(lambda);
    let objective = solution.objective_value.clone();
    if !is_persuasive(instance, &scheme)?.persuasive || sender_utility(instance, &scheme)? != objective {
        return Err(Error::Internal("LP optimum does not map back to a persuasive scheme".into()));
    }
    Ok(SingleSolution { scheme, dual, objective, lp, solution })
}

/// `r^lambda_theta(i) = r_theta(i) sum_{j != i} lambda(i,j) - sum_{j != i} lambda(i,j) r_theta(j)`.
pub fn dual_adjusted_payoff(instance: &PersuasionInstance, dual: &SingleDual, state: usize, action: usize) -> Rational {
    let r = &instance.states()[state].receiver;
    let mut value = Rational::zero();
    for (j, l) in dual.lambda[action].iter().enumerate() {
        if j != action && !l.is_zero() {
            value += l * (&r[action] - &r[j]);
        }
    }
    value
}

/// Partial Lagrangian `sum mu phi (s + r^lambda) + sum_i P(i) (sum_{j != i} lambda(i,j) - 1)`.
pub fn lagrangian_value(instance: &PersuasionInstance, scheme: &SignalingScheme, dual: &SingleDual) -> Result<Rational> {
    scheme.check_against(instance)?;
    let mut value = Rational::zero();
    for (k, (st, phi)) in instance.states().iter().zip(scheme.distribution()).enumerate() {
        for (i, f) in phi.iter().enumerate() {
            if !f.is_zero() {
                value += &st.prob * f * (&st.sender[i] + dual_adjusted_payoff(instance, dual, k, i));
            }
        }
    }
    for (i, p) in scheme.payments().iter().enumerate() {
        value += p * (dual.row_sum(i) - Rational::one());
    }
    Ok(value)
}

/// `C = sum_theta mu_theta sum_j r_theta(j)`.
pub fn receiver_payoff_mass(instance: &PersuasionInstance) -> Rational {
    instance.states().iter().fold(Rational::zero(), |acc, st| acc + &st.prob * sum(&st.receiver))
}

/// Lagrangian at `lambda(i,j) = lambda`, written as
/// `sum mu phi (s + n lambda r) - lambda C + sum P ((n-1) lambda - 1)`.
pub fn symmetric_lagrangian_value(instance: &PersuasionInstance, scheme: &SignalingScheme, lambda: &Rational) -> Result<Rational> {
    scheme.check_against(instance)?;
    let n = Rational::from_integer((instance.num_actions() as i64).into());
    let mut value = Rational::zero();
    for (st, phi) in instance.states().iter().zip(scheme.distribution()) {
        for (i, f) in phi.iter().enumerate() {
            if !f.is_zero() {
                value += &st.prob * f * (&st.sender[i] + &n * lambda * &st.receiver[i]);
            }
        }
    }
    value -= lambda * receiver_payoff_mass(instance);
    let coefficient = (&n - Rational::one()) * lambda - Rational::one();
    Ok(value + coefficient * sum(scheme.payments()))
}

/// `max` of the Lagrangian over all schemes and all payments admitted by
/// `model` (with `P >= 0` for a single action, as in [`build_lp`]); `None`
/// when the payment term is unbounded. By weak duality this bounds the
/// utility of every persuasive scheme.
pub fn lagrangian_upper_bound(instance: &PersuasionInstance, dual: &SingleDual, model: PaymentModel) -> Option<Rational> {
    let n = instance.num_actions();
    let coefficients: Vec<Rational> = (0..n).map(|i| dual.row_sum(i) - Rational::one()).collect();
    let bounded = match model {
        PaymentModel::Zero => true,
        _ if n == 1 => !coefficients[0].is_positive(),
        PaymentModel::NonNegative => coefficients.iter().all(|c| !c.is_positive()),
        PaymentModel::BudgetBalanced => coefficients.iter().all(|c| *c == coefficients[0]),
        PaymentModel::Arbitrary => coefficients.iter().all(Zero::is_zero),
    };
    if !bounded {
        return None;
    }
    let mut value = Rational::zero();
    for k in 0..instance.num_states() {
        let st = &instance.states()[k];
        let best = (0..n).map(|i| &st.sender[i] + dual_adjusted_payoff(instance, dual, k, i)).max()?;
        value += &st.prob * best;
    }
    Some(value)
}

/// Dual optimality certificate: in every positive-probability state
/// the scheme only recommends maximizers of `s + r^lambda`, and every
/// positive multiplier sits on a tight persuasiveness constraint.
pub fn verify_argmax_certificate(instance: &PersuasionInstance, scheme: &SignalingScheme, dual: &SingleDual) -> bool {
    if scheme.check_against(instance).is_err() || dual.lambda.len() != instance.num_actions() {
        return false;
    }
    let n = instance.num_actions();
    for (k, (st, phi)) in instance.states().iter().zip(scheme.distribution()).enumerate() {
        if st.prob.is_zero() {
            continue;
        }
        let values: Vec<Rational> = (0..n).map(|i| &st.sender[i] + dual_adjusted_payoff(instance, dual, k, i)).collect();
        let Some(best) = values.iter().max() else { return false };
        if phi.iter().zip(&values).any(|(f, v)| f.is_positive() && v != best) {
            return false;
        }
    }
    let Ok(x) = cross_utility(instance, scheme.distribution()) else { return false };
    for i in 0..n {
        for j in (0..n).filter(|&j| j != i) {
            let l = &dual.lambda[i][j];
            if l.is_negative() {
                return false;
            }
            if l.is_positive() && x.get(i, i) + &scheme.payments()[i] != *x.get(i, j) {
                return false;
            }
        }
    }
    true
}

fn uniform_over(n: usize, chosen: &[usize]) -> Vec<Rational> {
    let share = Rational::new(1.into(), (chosen.len() as i64).into());
    let mut row = vec![Rational::zero(); n];
    for &i in chosen {
        row[i] = share.clone();
    }
    row
}

/// Actions maximizing `key` lexicographically.
fn argmax_by<K: Ord>(n: usize, key: impl Fn(usize) -> K) -> Vec<usize> {
    let keys: Vec<K> = (0..n).map(&key).collect();
    let best = keys.iter().max().expect("at least one action");
    (0..n).filter(|&i| keys[i] == *best).collect()
}

/// Per state, uniform over the maximizers of `s + weight * r`; no payments.
fn weighted_argmax_distribution(instance: &PersuasionInstance, weight: &Rational) -> Vec<Vec<Rational>> {
    let n = instance.num_actions();
    instance
        .states()
        .iter()
        .map(|st| uniform_over(n, &argmax_by(n, |i| &st.sender[i] + weight * &st.receiver[i])))
        .collect()
}

fn scale(instance: &PersuasionInstance) -> Rational {
    Rational::from_integer((instance.num_actions() as i64).into())
}

/// The λ-scaled welfare maximizer: uniform over `argmax s + n lambda r`.
pub fn lambda_scheme(instance: &PersuasionInstance, lambda: &Rational) -> Result<SignalingScheme> {
    if lambda.is_negative() {
        return Err(Error::InvalidParameter("lambda must be non-negative".into()));
    }
    SignalingScheme::without_payments(weighted_argmax_distribution(instance, &(scale(instance) * lambda)))
}

/// Side from which a breakpoint is approached.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Limit of the λ-scaled welfare maximizer as `lambda` approaches from one
/// side: among maximizers at `lambda`, the smallest (left) or largest (right)
/// receiver payoff, uniform over what remains.
pub fn lambda_limit_scheme(instance: &PersuasionInstance, lambda: &Rational, side: Side) -> Result<SignalingScheme> {
    let n = instance.num_actions();
    let w = scale(instance) * lambda;
    let distribution = instance
        .states()
        .iter()
        .map(|st| {
            let chosen = argmax_by(n, |i| {
                let r = match side {
                    Side::Left => -st.receiver[i].clone(),
                    Side::Right => st.receiver[i].clone(),
                };
                (&st.sender[i] + &w * &st.receiver[i], r)
            });
            uniform_over(n, &chosen)
        })
        .collect();
    SignalingScheme::without_payments(distribution)
}

/// Non-negative `lambda` at which two actions swap order in `s + n lambda r`
/// in some positive-probability state, ascending and deduplicated.
pub fn lambda_breakpoints(instance: &PersuasionInstance) -> Vec<Rational> {
    let n = instance.num_actions();
    let nn = scale(instance);
    let mut out = Vec::new();
    for st in instance.states().iter().filter(|s| !s.prob.is_zero()) {
        for i in 0..n {
            for j in (i + 1)..n {
                let dr = &st.receiver[i] - &st.receiver[j];
                if dr.is_zero() {
                    continue;
                }
                let l = (&st.sender[j] - &st.sender[i]) / (&nn * dr);
                if !l.is_negative() {
                    out.push(l);
                }
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

/// `sum_{i != j} (X(i,i) - X(i,j))`; a symmetric scheme on a symmetric
/// instance is persuasive iff this is non-negative.
pub fn aggregate_persuasion_slack(instance: &PersuasionInstance, scheme: &SignalingScheme) -> Result<Rational> {
    let x = cross_utility(instance, scheme.distribution())?;
    let n = x.size();
    let mut d = Rational::zero();
    for i in 0..n {
        for j in (0..n).filter(|&j| j != i) {
            d += x.get(i, i) - x.get(i, j);
        }
    }
    Ok(d)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridPoint {
    pub lambda: Rational,
    pub persuasive: bool,
    pub sender_utility: Rational,
}

#[derive(Debug, Clone)]
pub struct LambdaStar {
    pub lambda: Rational,
    /// Optimal no-payment scheme: `phi^lambda*`, with ties at a breakpoint
    /// resolved by the mixture of one-sided limits that is exactly persuasive.
    pub scheme: SignalingScheme,
    pub sender_utility: Rational,
    /// Whether the uniform-tie scheme at `lambda*` is itself optimal.
    pub uniform_ties_optimal: bool,
    /// `{0}`, breakpoints, midpoints and one point past the last breakpoint.
    pub grid: Vec<GridPoint>,
    /// The zero-payment LP used as the cross-check.
    pub lp: SingleSolution,
}

impl LambdaStar {
    /// Persuasiveness never switches off as `lambda` grows along the grid.
    pub fn persuasiveness_monotone(&self) -> bool {
        self.grid.windows(2).all(|w| !w[0].persuasive || w[1].persuasive)
    }

    pub fn utility_non_increasing(&self) -> bool {
        self.grid.windows(2).all(|w| w[0].sender_utility >= w[1].sender_utility)
    }
}

fn lambda_grid(breakpoints: &[Rational]) -> Vec<Rational> {
    let mut anchors = vec![Rational::zero()];
    anchors.extend(breakpoints.iter().filter(|b| b.is_positive()).cloned());
    let mut grid = anchors.clone();
    let two = Rational::from_integer(2.into());
    grid.extend(anchors.windows(2).map(|w| (&w[0] + &w[1]) / &two));
    grid.push(anchors.last().expect("nonempty") + Rational::one());
    grid.sort();
    grid
}

/// Smallest `lambda >= 0` whose λ-scaled welfare maximizer is persuasive,
/// found by enumerating breakpoints, and the optimal no-payment scheme it
/// induces. Checked against the zero-payment LP.
pub fn find_lambda_star(instance: &PersuasionInstance) -> Result<LambdaStar> {
    instance.require_symmetric()?;
    let anchors = lambda_breakpoints(instance);
    let mut grid = Vec::new();
    for lambda in lambda_grid(&anchors) {
        let scheme = lambda_scheme(instance, &lambda)?;
        let persuasive = is_persuasive(instance, &scheme)?.persuasive;
        grid.push(GridPoint { sender_utility: sender_utility(instance, &scheme)?, lambda, persuasive });
    }
    let first = grid
        .iter()
        .position(|g| g.persuasive)
        .ok_or_else(|| Error::Internal("no persuasive λ-scaled welfare maximizer on the grid".into()))?;
    // Persuasion first holding strictly inside an interval means the switch
    // happens at the interval's left breakpoint.
    let lambda = if first == 0 || anchors.contains(&grid[first].lambda) {
        grid[first].lambda.clone()
    } else {
        grid[first - 1].lambda.clone()
    };
    let uniform = lambda_scheme(instance, &lambda)?;
    let scheme = if lambda.is_zero() && is_persuasive(instance, &uniform)?.persuasive {
        uniform.clone()
    } else {
        tight_mixture(instance, &lambda)?
    };
    let utility = sender_utility(instance, &scheme)?;
    let lp = solve_optimal(instance, PaymentModel::Zero)?;
    if utility != lp.objective || !is_persuasive(instance, &scheme)?.persuasive {
        return Err(Error::CharacterizationMismatch {
            context: "lambda* scheme".into(),
            lp: lp.objective,
            found: utility,
        });
    }
    let uniform_ties_optimal =
        is_persuasive(instance, &uniform)?.persuasive && sender_utility(instance, &uniform)? == lp.objective;
    Ok(LambdaStar { lambda, scheme, sender_utility: utility, uniform_ties_optimal, grid, lp })
}

/// `t phi^{lambda-} + (1 - t) phi^{lambda+}` with `t` chosen so that the
/// aggregate persuasion slack is exactly zero (or the left limit, if it is
/// already persuasive).
fn tight_mixture(instance: &PersuasionInstance, lambda: &Rational) -> Result<SignalingScheme> {
    let left = lambda_limit_scheme(instance, lambda, Side::Left)?;
    let right = lambda_limit_scheme(instance, lambda, Side::Right)?;
    let dl = aggregate_persuasion_slack(instance, &left)?;
    if !dl.is_negative() {
        return Ok(left);
    }
    let dr = aggregate_persuasion_slack(instance, &right)?;
    if dr.is_negative() {
        return Err(Error::Internal("right limit at lambda* is not persuasive".into()));
    }
    let t = &dr / (&dr - &dl);
    let u = Rational::one() - &t;
    let distribution = left
        .distribution()
        .iter()
        .zip(right.distribution())
        .map(|(a, b)| a.iter().zip(b).map(|(x, y)| &t * x + &u * y).collect())
        .collect();
    SignalingScheme::without_payments(distribution)
}

/// Per state uniform over `argmax s + 2 r`, paying the thresholds (possibly
/// negative) as payments under the arbitrary model.
pub fn canonical_two_action_scheme(instance: &PersuasionInstance) -> Result<SignalingScheme> {
    if instance.num_actions() != 2 {
        return Err(Error::WrongActionCount { expected: 2, found: instance.num_actions() });
    }
    threshold_scheme(instance, &Rational::from_integer(2.into()))
}

/// Per state uniform over `argmax s + weight * r`, paying the thresholds
/// under the arbitrary model.
pub fn threshold_scheme(instance: &PersuasionInstance, weight: &Rational) -> Result<SignalingScheme> {
    let distribution = weighted_argmax_distribution(instance, weight);
    let payments = payment_thresholds(instance, &distribution)?;
    SignalingScheme::new(distribution, payments, PaymentModel::Arbitrary)
}

/// `n / (n - 1)`, the receiver weight of the symmetric canonical scheme.
pub fn canonical_weight(num_actions: usize) -> Rational {
    let n = num_actions as i64;
    Rational::new(n.into(), (n - 1).into())
}

/// Per state uniform over `argmax s + n/(n-1) r`, with threshold payments.
pub fn canonical_symmetric_scheme(instance: &PersuasionInstance) -> Result<SignalingScheme> {
    instance.require_symmetric()?;
    if instance.num_actions() < 2 {
        return Err(Error::WrongActionCount { expected: 2, found: instance.num_actions() });
    }
    threshold_scheme(instance, &canonical_weight(instance.num_actions()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    NoPayment,
    CanonicalWithNonNegPayments,
}

impl Branch {
    pub fn name(self) -> &'static str {
        match self {
            Branch::NoPayment => "no_payment",
            Branch::CanonicalWithNonNegPayments => "canonical_nonnegative",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Dichotomy {
    pub scheme: SignalingScheme,
    pub branch: Branch,
    pub no_payment_utility: Rational,
    pub canonical_utility: Rational,
    pub no_payment: LambdaStar,
    /// The non-negative-payment LP used as the cross-check.
    pub lp: SingleSolution,
}

/// Better of the optimal no-payment scheme and the symmetric canonical
/// scheme with the cheapest non-negative payments (ties go to no payment);
/// checked against the non-negative-payment LP.
pub fn nonnegative_dichotomy(instance: &PersuasionInstance) -> Result<Dichotomy> {
    instance.require_symmetric()?;
    let star = find_lambda_star(instance)?;
    let no_payment = star.scheme.with_payments(vec![Rational::zero(); instance.num_actions()], PaymentModel::NonNegative)?;
    let no_payment_utility = star.sender_utility.clone();
    let canonical = if instance.num_actions() >= 2 {
        let distribution = weighted_argmax_distribution(instance, &canonical_weight(instance.num_actions()));
        let payments = nonnegative_thresholds(instance, &distribution)?;
        SignalingScheme::new(distribution, payments, PaymentModel::NonNegative)?
    } else {
        no_payment.clone()
    };
    let canonical_utility = sender_utility(instance, &canonical)?;
    let (scheme, branch) = match canonical_utility.cmp(&no_payment_utility) {
        Ordering::Greater => (canonical, Branch::CanonicalWithNonNegPayments),
        _ => (no_payment, Branch::NoPayment),
    };
    let lp = solve_optimal(instance, PaymentModel::NonNegative)?;
    let found = sender_utility(instance, &scheme)?;
    if found != lp.objective || !is_persuasive(instance, &scheme)?.persuasive {
        return Err(Error::CharacterizationMismatch { context: "non-negative dichotomy".into(), lp: lp.objective, found });
    }
    Ok(Dichotomy { scheme, branch, no_payment_utility, canonical_utility, no_payment: star, lp })
}

#[cfg(test)]
mod tests;
