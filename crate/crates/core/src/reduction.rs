//! Zero-payment multi-receiver persuasion under positive externalities:
//! dropping the action-0 constraints, repairing relaxed solutions, and a
//! constraint-generation solver driven by a set-function oracle.

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, ExternalityWitness, Result};
use crate::lp::{self, Bound, LpProblem, Relation, Sense};
use crate::model::PaymentModel;
use crate::multi::{
    build_binary, contains, persuasion_terms, BinaryLp, MultiAgentInstance, MultiAgentScheme, SetDistribution,
};
use crate::rational::Rational;

/// Looks for `g_i(S) < g_i(S - j)` with `i, j` distinct members of `S`.
pub fn check_positive_externalities(instance: &MultiAgentInstance) -> std::result::Result<(), ExternalityWitness> {
    let n = instance.num_receivers();
    for state in 0..instance.num_states() {
        for subset in 0..instance.num_subsets() as u32 {
            for receiver in (0..n).filter(|&i| contains(subset, i)) {
                let g = instance.g(state, receiver, subset);
                for other in (0..n).filter(|&j| j != receiver && contains(subset, j)) {
                    if g < instance.g(state, receiver, subset & !(1 << other)) {
                        return Err(ExternalityWitness { state, subset, receiver, other });
                    }
                }
            }
        }
    }
    Ok(())
}

fn require_preconditions(instance: &MultiAgentInstance) -> Result<()> {
    check_positive_externalities(instance).map_err(Error::PositiveExternalityViolated)?;
    instance.require_monotone_sender()
}

/// The zero-payment LP without the action-0 constraints.
pub fn drop_star_star(instance: &MultiAgentInstance, limit: usize) -> Result<BinaryLp> {
    require_preconditions(instance)?;
    build_binary(instance, PaymentModel::Zero, limit, false)
}

#[derive(Debug, Clone)]
pub struct Repair {
    pub scheme: MultiAgentScheme,
    pub moves: usize,
}

/// Turns a zero-payment allocation satisfying the action-1 constraints into
/// one satisfying both families. While some receiver `i` would rather take
/// action 1 when told 0, all mass on some `S` (not containing `i`, with
/// `g_i(S + i) > 0`) moves to `S + i`; candidates are scanned by receiver,
/// state, then set. Positive externalities keep the action-1 constraints
/// intact and a monotone sender never loses.
pub fn repair_scheme(instance: &MultiAgentInstance, allocation: &[SetDistribution]) -> Result<Repair> {
    require_preconditions(instance)?;
    if allocation.len() != instance.num_states() {
        return Err(Error::InvalidParameter("allocation does not match the number of states".into()));
    }
    let n = instance.num_receivers();
    let mut phi: Vec<SetDistribution> = allocation.to_vec();
    let support: usize = phi.iter().map(|d| d.values().filter(|w| w.is_positive()).count()).sum();
    // Mass only moves up the subset lattice and never splits.
    let guard = n * support.max(1);
    let mut moves = 0;
    loop {
        let (_, b) = persuasion_terms(instance, &phi);
        let Some(i) = (0..n).find(|&i| b[i].is_positive()) else { break };
        if moves == guard {
            return Err(Error::NonTermination { passes: guard });
        }
        let target = (0..instance.num_states())
            .filter(|&k| instance.states()[k].prob.is_positive())
            .find_map(|k| {
                phi[k]
                    .iter()
                    .find(|(&s, w)| !contains(s, i) && w.is_positive() && instance.g(k, i, s | (1 << i)).is_positive())
                    .map(|(&s, _)| (k, s))
            });
        let (k, s) = target.ok_or_else(|| Error::Internal(format!("receiver {i} violated with nothing to move")))?;
        let mass = phi[k].remove(&s).expect("chosen from support");
        *phi[k].entry(s | (1 << i)).or_insert_with(Rational::zero) += mass;
        moves += 1;
    }
    let scheme = MultiAgentScheme::with_optimal_payments(instance, phi, PaymentModel::Zero)
        .ok_or_else(|| Error::Internal("repaired allocation is not persuasive".into()))?;
    Ok(Repair { scheme, moves })
}

/// Maximizer of `f(S) + sum_i alpha_i g_i(S)` in one state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleAnswer {
    pub set: u32,
    pub value: Rational,
}

/// Separation oracle over the sets of one instance.
pub trait SetFunctionOracle {
    fn maximize(&self, state: usize, alpha: &[Rational]) -> Result<OracleAnswer>;
}

/// `f(S) + sum_i alpha_i g_i(S)`.
pub fn weighted_value(instance: &MultiAgentInstance, state: usize, set: u32, alpha: &[Rational]) -> Rational {
    let mut v = instance.states()[state].sender[set as usize].clone();
    for (i, a) in alpha.iter().enumerate() {
        if contains(set, i) && !a.is_zero() {
            v += a * instance.g(state, i, set);
        }
    }
    v
}

/// Enumerates every subset; ties go to the smallest bitmask.
#[derive(Debug, Clone, Copy)]
pub struct BruteForceOracle<'a> {
    instance: &'a MultiAgentInstance,
}

impl<'a> BruteForceOracle<'a> {
    pub fn new(instance: &'a MultiAgentInstance, limit: usize) -> Result<Self> {
        instance.check_size(limit)?;
        Ok(BruteForceOracle { instance })
    }
}

impl SetFunctionOracle for BruteForceOracle<'_> {
    fn maximize(&self, state: usize, alpha: &[Rational]) -> Result<OracleAnswer> {
        if state >= self.instance.num_states() || alpha.len() != self.instance.num_receivers() {
            return Err(Error::InvalidParameter("oracle query does not match the instance".into()));
        }
        let mut best: Option<OracleAnswer> = None;
        for set in 0..self.instance.num_subsets() as u32 {
            let value = weighted_value(self.instance, state, set, alpha);
            if best.as_ref().is_none_or(|b| value > b.value) {
                best = Some(OracleAnswer { set, value });
            }
        }
        best.ok_or_else(|| Error::Internal("no subsets".into()))
    }
}

#[derive(Debug, Clone)]
pub struct CuttingPlaneSolution {
    /// Repaired zero-payment scheme, feasible for the full LP.
    pub scheme: MultiAgentScheme,
    pub alpha: Vec<Rational>,
    pub y: Vec<Rational>,
    pub objective: Rational,
    /// Value of the restricted primal before repair.
    pub relaxed_objective: Rational,
    pub rounds: usize,
    pub oracle_calls: usize,
    /// Sets whose rows were generated, per state (seeds included).
    pub generated: Vec<BTreeSet<u32>>,
    pub repair_moves: usize,
    /// Every solved restricted LP was independently certified.
    pub lps_certified: usize,
}

impl CuttingPlaneSolution {
    pub fn rows_generated(&self) -> usize {
        self.generated.iter().map(BTreeSet::len).sum()
    }
}

/// Restricted dual `min sum y` over the generated rows
/// `y_theta - mu sum_i alpha_i g_i(S) >= mu f(S)`, with `y` free and
/// `alpha >= 0`.
fn restricted_dual(instance: &MultiAgentInstance, generated: &[BTreeSet<u32>]) -> LpProblem {
    let (k_states, n) = (instance.num_states(), instance.num_receivers());
    let mut p = LpProblem::new(k_states + n, Sense::Minimize);
    for k in 0..k_states {
        p.objective[k] = Rational::one();
        p.set_bounds(k, Bound::free());
    }
    for (k, sets) in generated.iter().enumerate() {
        let st = &instance.states()[k];
        for &s in sets {
            let mut row = vec![(k, Rational::one())];
            row.extend((0..n).filter(|&i| contains(s, i)).map(|i| (k_states + i, -(&st.prob * instance.g(k, i, s)))));
            p.add_constraint(row, Relation::Ge, &st.prob * &st.sender[s as usize]);
        }
    }
    p
}

/// Zero-payment primal restricted to the generated columns, without the
/// action-0 constraints.
fn restricted_primal(instance: &MultiAgentInstance, generated: &[BTreeSet<u32>]) -> (LpProblem, Vec<(usize, u32)>) {
    let columns: Vec<(usize, u32)> =
        generated.iter().enumerate().flat_map(|(k, sets)| sets.iter().map(move |&s| (k, s))).collect();
    let mut p = LpProblem::new(columns.len(), Sense::Maximize);
    for (c, &(k, s)) in columns.iter().enumerate() {
        let st = &instance.states()[k];
        p.objective[c] = &st.prob * &st.sender[s as usize];
    }
    for i in 0..instance.num_receivers() {
        let row = columns
            .iter()
            .enumerate()
            .filter(|(_, (_, s))| contains(*s, i))
            .map(|(c, &(k, s))| (c, &instance.states()[k].prob * instance.g(k, i, s)))
            .collect();
        p.add_constraint(row, Relation::Ge, Rational::zero());
    }
    for k in 0..instance.num_states() {
        let row = columns.iter().enumerate().filter(|(_, (kk, _))| *kk == k).map(|(c, _)| (c, Rational::one())).collect();
        p.add_constraint(row, Relation::Eq, Rational::one());
    }
    (p, columns)
}

/// Optimal zero-payment scheme by constraint generation on the dual of the
/// relaxed LP. Rows start from `S = {}` and `S = [N]` in every state; each
/// round asks the oracle for the most violated row per state. The final dual
/// is checked against every row, so an oracle that misses a violated row is
/// reported as [`Error::OracleUnsound`] instead of yielding a wrong answer.
pub fn cutting_plane_solve(
    instance: &MultiAgentInstance,
    oracle: &dyn SetFunctionOracle,
    limit: usize,
) -> Result<CuttingPlaneSolution> {
    require_preconditions(instance)?;
    instance.check_size(limit)?;
    let (k_states, n) = (instance.num_states(), instance.num_receivers());
    let full = (instance.num_subsets() - 1) as u32;
    let mut generated: Vec<BTreeSet<u32>> = (0..k_states).map(|_| BTreeSet::from([0, full])).collect();
    let max_rounds = instance.column_count() + 2;
    let mut rounds = 0;
    let mut oracle_calls = 0;
    let mut lps_certified = 0;
    let (alpha, y) = loop {
        if rounds == max_rounds {
            return Err(Error::IterationLimit { rounds });
        }
        rounds += 1;
        let dual = restricted_dual(instance, &generated);
        let sol = lp::solve_certified(&dual)?;
        if !sol.is_optimal() {
            return Err(Error::Internal(format!("restricted dual reported {}", sol.status)));
        }
        lps_certified += 1;
        let y: Vec<Rational> = sol.primal[..k_states].to_vec();
        let alpha: Vec<Rational> = sol.primal[k_states..].to_vec();
        let mut added = false;
        for k in 0..k_states {
            oracle_calls += 1;
            let answer = oracle.maximize(k, &alpha)?;
            if answer.set > full || weighted_value(instance, k, answer.set, &alpha) != answer.value {
                return Err(Error::OracleUnsound(format!("state {k}: reported value does not match set {:#b}", answer.set)));
            }
            if &instance.states()[k].prob * &answer.value > y[k] && generated[k].insert(answer.set) {
                added = true;
            }
        }
        if !added {
            break (alpha, y);
        }
    };

    for (k, (st, yk)) in instance.states().iter().zip(&y).enumerate() {
        if let Some(s) = (0..=full).find(|&s| &st.prob * weighted_value(instance, k, s, &alpha) > *yk) {
            return Err(Error::OracleUnsound(format!("final dual violates the row of state {k}, set {s:#b}")));
        }
    }
    if alpha.iter().any(Signed::is_negative) || alpha.len() != n {
        return Err(Error::Internal("restricted dual returned invalid alpha".into()));
    }
    let objective: Rational = y.iter().sum();

    let (primal, columns) = restricted_primal(instance, &generated);
    let sol = lp::solve_certified(&primal)?;
    if !sol.is_optimal() || sol.objective_value != objective {
        return Err(Error::Internal("restricted primal disagrees with the restricted dual".into()));
    }
    lps_certified += 1;
    let mut allocation: Vec<SetDistribution> = vec![SetDistribution::new(); k_states];
    for (c, &(k, s)) in columns.iter().enumerate() {
        if !sol.primal[c].is_zero() {
            allocation[k].insert(s, sol.primal[c].clone());
        }
    }
    let repair = repair_scheme(instance, &allocation)?;
    let achieved = repair.scheme.sender_utility(instance);
    if achieved != objective {
        return Err(Error::CharacterizationMismatch { context: "constraint generation".into(), lp: objective, found: achieved });
    }
    Ok(CuttingPlaneSolution {
        scheme: repair.scheme,
        alpha,
        y,
        objective,
        relaxed_objective: sol.objective_value,
        rounds,
        oracle_calls,
        generated,
        repair_moves: repair.moves,
        lps_certified,
    })
}
