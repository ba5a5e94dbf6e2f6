//! Seeded property campaigns comparing every characterization with the
//! exact LP. Shared by the command-line verifier and the test suites.

use std::fmt;
use std::ops::Range;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::io::Instance;
use crate::lp::{self, LpProblem, LpSolution};
use crate::model::{
    is_persuasive, payment_thresholds, random_distribution, random_instance, random_multi_instance, random_payments,
    random_symmetric_instance, receiver_utility, sender_utility, MultiFlags, PaymentModel, PayoffRange,
    PersuasionInstance, SignalingScheme,
};
use crate::multi::{
    self, persuasion_terms, solve_arbitrary, solve_budget_balanced, solve_lp, AllocationForm, MultiAgentInstance,
    SetDistribution,
};
use crate::rational::{sum, Rational};
use crate::reduction::{
    check_positive_externalities, cutting_plane_solve, drop_star_star, repair_scheme, weighted_value, BruteForceOracle,
    OracleAnswer, SetFunctionOracle,
};
use crate::single::{
    canonical_symmetric_scheme, canonical_two_action_scheme, find_lambda_star, lagrangian_upper_bound, nonnegative_dichotomy,
    solve_optimal, verify_argmax_certificate, Branch, SingleSolution,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Single,
    Multi,
    Reduction,
    All,
}

impl Suite {
    pub fn parse(text: &str) -> Option<Self> {
        match text {
            "single" => Some(Suite::Single),
            "multi" => Some(Suite::Multi),
            "reduction" => Some(Suite::Reduction),
            "all" => Some(Suite::All),
            _ => None,
        }
    }
}

/// Seed range and size caps of a campaign.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Config {
    pub first_seed: u64,
    pub seeds: u64,
    pub max_actions: usize,
    pub max_types: usize,
    pub max_receivers: usize,
    pub max_states: usize,
    pub column_limit: usize,
    pub range: PayoffRange,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            first_seed: 1,
            seeds: 50,
            max_actions: 3,
            max_types: 3,
            max_receivers: 3,
            max_states: 6,
            column_limit: multi::DEFAULT_COLUMN_LIMIT,
            range: PayoffRange::default(),
        }
    }
}

impl Config {
    pub fn with_seeds(self, seeds: u64) -> Self {
        Config { seeds, ..self }
    }

    fn seed_range(&self) -> Range<u64> {
        self.first_seed..self.first_seed + self.seeds
    }
}

/// A failing seed, with the instance that triggered it.
#[derive(Debug, Clone)]
pub struct Failure {
    pub seed: u64,
    pub detail: String,
    pub instance: Option<Instance>,
}

/// Outcome of one property over a seed range.
#[derive(Debug, Clone)]
pub struct PropertyReport {
    pub name: &'static str,
    pub passed: usize,
    pub failures: Vec<Failure>,
    /// Free-form counters (e.g. branch frequencies).
    pub notes: Vec<(String, usize)>,
}

impl PropertyReport {
    fn new(name: &'static str) -> Self {
        PropertyReport { name, passed: 0, failures: Vec::new(), notes: Vec::new() }
    }

    pub fn total(&self) -> usize {
        self.passed + self.failures.len()
    }

    pub fn ok(&self) -> bool {
        self.failures.is_empty() && self.passed > 0
    }

    fn record(&mut self, seed: u64, outcome: std::result::Result<(), String>, instance: impl FnOnce() -> Option<Instance>) {
        match outcome {
            Ok(()) => self.passed += 1,
            Err(detail) => self.failures.push(Failure { seed, detail, instance: instance() }),
        }
    }

    fn note(&mut self, key: &str, by: usize) {
        match self.notes.iter_mut().find(|(k, _)| k == key) {
            Some((_, v)) => *v += by,
            None => self.notes.push((key.to_string(), by)),
        }
    }
}

impl fmt::Display for PropertyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.ok() { "PASS" } else { "FAIL" };
        write!(f, "{status} {:<34} {}/{}", self.name, self.passed, self.total())?;
        for (k, v) in &self.notes {
            write!(f, " {k}={v}")?;
        }
        Ok(())
    }
}

/// Tracks that every LP met along the way carries a valid certificate and
/// that every single-receiver optimum satisfies the pointwise-argmax check.
#[derive(Debug)]
pub struct Hygiene {
    pub report: PropertyReport,
    pub lps_certified: usize,
    pub argmax_checked: usize,
}

impl Default for Hygiene {
    fn default() -> Self {
        Hygiene { report: PropertyReport::new("solver hygiene"), lps_certified: 0, argmax_checked: 0 }
    }
}

impl Hygiene {
    fn certify(&mut self, seed: u64, problem: &LpProblem, solution: &LpSolution) {
        let outcome = lp::certify_detailed(problem, solution).map_err(|e| format!("certificate: {e}"));
        if outcome.is_ok() {
            self.lps_certified += 1;
        }
        self.report.record(seed, outcome, || None);
    }

    fn single(&mut self, seed: u64, instance: &PersuasionInstance, sol: &SingleSolution) {
        self.certify(seed, &sol.lp.problem, &sol.solution);
        let ok = verify_argmax_certificate(instance, &sol.scheme, &sol.dual);
        if ok {
            self.argmax_checked += 1;
        }
        self.report.record(seed, if ok { Ok(()) } else { Err("optimal scheme fails the dual argmax check".into()) }, || {
            Some(Instance::Single(instance.clone()))
        });
    }

    pub fn finish(mut self) -> PropertyReport {
        self.report.note("lps", self.lps_certified);
        self.report.note("argmax", self.argmax_checked);
        self.report
    }
}

fn err(e: impl fmt::Display) -> String {
    e.to_string()
}

fn expect_eq(what: &str, left: &Rational, right: &Rational) -> std::result::Result<(), String> {
    if left == right {
        Ok(())
    } else {
        Err(format!("{what}: {left} != {right}"))
    }
}

fn expect(cond: bool, what: &str) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what.to_string())
    }
}

fn symmetric_sizes(cfg: &Config, seed: u64, max_actions: usize) -> (usize, usize) {
    let n = 2 + (seed as usize) % (max_actions.max(2) - 1);
    // Four actions with three types would give 81 states; keep two types.
    let max_types = if n >= 4 { 2 } else { cfg.max_types.max(2) };
    let m = 2 + (seed as usize / 3) % (max_types - 1);
    (n, m)
}

fn states_for(seed: u64, max_states: usize) -> usize {
    1 + (seed as usize / 2) % max_states.max(1)
}

/// Persuasive iff payments reach the thresholds; payments cancel in welfare.
pub fn payment_identity(cfg: &Config) -> PropertyReport {
    let mut rep = PropertyReport::new("payment identity");
    for seed in cfg.seed_range() {
        let n = 1 + (seed as usize) % cfg.max_actions.max(1);
        let k = states_for(seed, cfg.max_states);
        let mut inst = None;
        let outcome = (|| {
            let instance = random_instance(seed, n, k, cfg.range).map_err(err)?;
            inst = Some(instance.clone());
            let distribution = random_distribution(seed ^ 0x5eed, k, n).map_err(err)?;
            let t = payment_thresholds(&instance, &distribution).map_err(err)?;
            // Half the seeds probe right around the thresholds.
            let noise = random_payments(seed ^ 0xfee, n, PayoffRange { low: -1, high: 1 }).map_err(err)?;
            let payments: Vec<Rational> = if seed % 2 == 0 {
                t.iter().zip(&noise).map(|(a, b)| a + b / Rational::from_integer(8.into())).collect()
            } else {
                random_payments(seed ^ 0xbee, n, cfg.range).map_err(err)?
            };
            let scheme = SignalingScheme::new(distribution.clone(), payments.clone(), PaymentModel::Arbitrary).map_err(err)?;
            let verdict = is_persuasive(&instance, &scheme).map_err(err)?;
            let meets = payments.iter().zip(&t).all(|(p, ti)| p >= ti);
            expect(verdict.persuasive == meets, "persuasiveness disagrees with the thresholds")?;
            if n >= 2 {
                let worst = t.iter().zip(&payments).map(|(ti, p)| ti - p).max().expect("n >= 2");
                expect_eq("worst violation", &verdict.worst_violation, &worst)?;
            }
            let unpaid = SignalingScheme::new(distribution, vec![Rational::zero(); n], PaymentModel::Zero).map_err(err)?;
            let welfare = |s: &SignalingScheme| -> std::result::Result<Rational, String> {
                Ok(sender_utility(&instance, s).map_err(err)? + receiver_utility(&instance, s).map_err(err)?)
            };
            expect_eq("welfare with and without payments", &welfare(&scheme)?, &welfare(&unpaid)?)
        })();
        rep.record(seed, outcome, || inst.map(Instance::Single));
    }
    rep
}

/// The λ* scheme matches the zero-payment LP; persuasiveness is monotone
/// and sender utility non-increasing along the λ grid.
pub fn lambda_star(cfg: &Config, hygiene: &mut Hygiene) -> PropertyReport {
    let mut rep = PropertyReport::new("lambda* = zero-payment optimum");
    for seed in cfg.seed_range() {
        let (n, m) = symmetric_sizes(cfg, seed, cfg.max_actions.min(3));
        let mut inst = None;
        let outcome = (|| {
            let instance = random_symmetric_instance(seed, n, m, cfg.range).map_err(err)?;
            inst = Some(instance.clone());
            let star = find_lambda_star(&instance).map_err(err)?;
            hygiene.single(seed, &instance, &star.lp);
            expect_eq("lambda* utility", &star.sender_utility, &star.lp.objective)?;
            expect(star.persuasiveness_monotone(), "persuasiveness not monotone on the grid")?;
            expect(star.utility_non_increasing(), "sender utility increases along the grid")?;
            Ok(star.uniform_ties_optimal)
        })();
        match outcome {
            Ok(uniform) => {
                rep.record(seed, Ok(()), || None);
                rep.note(if uniform { "uniform_ties" } else { "mixed_ties" }, 1);
            }
            Err(e) => rep.record(seed, Err(e), || inst.map(Instance::Single)),
        }
    }
    rep
}

/// `argmax s + 2r` with threshold payments attains the arbitrary-payment LP.
pub fn two_action_canonical(cfg: &Config, hygiene: &mut Hygiene) -> PropertyReport {
    let mut rep = PropertyReport::new("two-action canonical = LP");
    for seed in cfg.seed_range() {
        let k = states_for(seed, cfg.max_states);
        let mut inst = None;
        let outcome = (|| {
            let instance = random_instance(seed, 2, k, cfg.range).map_err(err)?;
            inst = Some(instance.clone());
            let scheme = canonical_two_action_scheme(&instance).map_err(err)?;
            expect(is_persuasive(&instance, &scheme).map_err(err)?.persuasive, "canonical scheme not persuasive")?;
            let lp = solve_optimal(&instance, PaymentModel::Arbitrary).map_err(err)?;
            hygiene.single(seed, &instance, &lp);
            let arbitrary_row_sums = (0..2).all(|i| lp.dual.row_sum(i) == Rational::from_integer(1.into()));
            expect(arbitrary_row_sums, "arbitrary-payment dual rows do not sum to one")?;
            expect_eq("canonical utility", &sender_utility(&instance, &scheme).map_err(err)?, &lp.objective)
        })();
        rep.record(seed, outcome, || inst.map(Instance::Single));
    }
    rep
}

/// `argmax s + n/(n-1) r` with threshold payments attains the
/// arbitrary-payment LP on symmetric instances.
pub fn symmetric_canonical(cfg: &Config, hygiene: &mut Hygiene) -> PropertyReport {
    let mut rep = PropertyReport::new("symmetric canonical = LP");
    for seed in cfg.seed_range() {
        let (n, m) = symmetric_sizes(cfg, seed, cfg.max_actions);
        let mut inst = None;
        let outcome = (|| {
            let instance = random_symmetric_instance(seed, n, m, cfg.range).map_err(err)?;
            inst = Some(instance.clone());
            let scheme = canonical_symmetric_scheme(&instance).map_err(err)?;
            expect(is_persuasive(&instance, &scheme).map_err(err)?.persuasive, "canonical scheme not persuasive")?;
            let lp = solve_optimal(&instance, PaymentModel::Arbitrary).map_err(err)?;
            hygiene.single(seed, &instance, &lp);
            expect_eq("canonical utility", &sender_utility(&instance, &scheme).map_err(err)?, &lp.objective)
        })();
        rep.record(seed, outcome, || inst.map(Instance::Single));
    }
    rep
}

/// The better of the no-payment optimum and the canonical scheme with
/// non-negative payments attains the non-negative-payment LP.
pub fn dichotomy(cfg: &Config, hygiene: &mut Hygiene) -> PropertyReport {
    let mut rep = PropertyReport::new("non-negative dichotomy = LP");
    for seed in cfg.seed_range() {
        let (n, m) = symmetric_sizes(cfg, seed, cfg.max_actions.min(3));
        let mut inst = None;
        let outcome = (|| {
            let instance = random_symmetric_instance(seed, n, m, cfg.range).map_err(err)?;
            inst = Some(instance.clone());
            let d = nonnegative_dichotomy(&instance).map_err(err)?;
            hygiene.single(seed, &instance, &d.lp);
            hygiene.single(seed, &instance, &d.no_payment.lp);
            let best = d.no_payment_utility.clone().max(d.canonical_utility.clone());
            expect_eq("max of both branches", &best, &d.lp.objective)?;
            let consistent = match d.branch {
                Branch::NoPayment => d.scheme.payments().iter().all(Zero::is_zero) && d.no_payment_utility >= d.canonical_utility,
                Branch::CanonicalWithNonNegPayments => {
                    d.canonical_utility > d.no_payment_utility && d.scheme.payments().iter().any(Signed::is_positive)
                }
            };
            expect(consistent, "branch label inconsistent with the chosen scheme")?;
            Ok(d.branch)
        })();
        match outcome {
            Ok(branch) => {
                rep.record(seed, Ok(()), || None);
                rep.note(branch.name(), 1);
            }
            Err(e) => rep.record(seed, Err(e), || inst.map(Instance::Single)),
        }
    }
    rep
}

/// At any optimal dual the Lagrangian's maximum equals the LP optimum and
/// bounds random persuasive schemes.
pub fn weak_duality(cfg: &Config, hygiene: &mut Hygiene) -> PropertyReport {
    let mut rep = PropertyReport::new("Lagrangian bound");
    for seed in cfg.seed_range() {
        let n = 1 + (seed as usize) % cfg.max_actions.max(1);
        let model = PaymentModel::ALL[(seed as usize / 2) % 4];
        let k = states_for(seed, cfg.max_states);
        let mut inst = None;
        let outcome = (|| {
            let instance = random_instance(seed, n, k, cfg.range).map_err(err)?;
            inst = Some(instance.clone());
            let lp = solve_optimal(&instance, model).map_err(err)?;
            hygiene.single(seed, &instance, &lp);
            let bound = lagrangian_upper_bound(&instance, &lp.dual, model).ok_or("optimal dual gives an unbounded Lagrangian")?;
            expect_eq("Lagrangian maximum at the optimal dual", &bound, &lp.objective)?;
            let distribution = random_distribution(seed ^ 0xd00d, k, n).map_err(err)?;
            let t = payment_thresholds(&instance, &distribution).map_err(err)?;
            let payments = cheapest_payments(&t, model);
            if let Some(payments) = payments {
                let scheme = SignalingScheme::new(distribution, payments, model).map_err(err)?;
                expect(sender_utility(&instance, &scheme).map_err(err)? <= bound, "a persuasive scheme beats the bound")?;
            }
            Ok(())
        })();
        rep.record(seed, outcome, || inst.map(Instance::Single));
    }
    rep
}

fn cheapest_payments(t: &[Rational], model: PaymentModel) -> Option<Vec<Rational>> {
    let n = t.len();
    let clamp = |v: &Rational| if v.is_negative() { Rational::zero() } else { v.clone() };
    match model {
        PaymentModel::Zero => t.iter().all(|v| !v.is_positive()).then(|| vec![Rational::zero(); n]),
        PaymentModel::NonNegative => Some(t.iter().map(clamp).collect()),
        PaymentModel::Arbitrary if n == 1 => Some(t.iter().map(clamp).collect()),
        PaymentModel::Arbitrary => Some(t.to_vec()),
        PaymentModel::BudgetBalanced => {
            let surplus = -sum(t);
            if surplus.is_negative() {
                return None;
            }
            let mut p = t.to_vec();
            p[0] += surplus;
            Some(p)
        }
    }
}

fn multi_instance(cfg: &Config, seed: u64, flags: MultiFlags, max_states: usize) -> Result<MultiAgentInstance> {
    let n = 2 + (seed as usize) % (cfg.max_receivers.max(2) - 1);
    random_multi_instance(seed, n, states_for(seed, max_states), flags)
}

/// Virtual-payoff schemes attain the budget-balanced and arbitrary LPs,
/// the optima nest, and recovered payments balance exactly.
pub fn multi_characterizations(cfg: &Config, hygiene: &mut Hygiene) -> PropertyReport {
    let mut rep = PropertyReport::new("virtual payoff = LP (multi)");
    let flags = MultiFlags { range: cfg.range, ..MultiFlags::default() };
    for seed in cfg.seed_range() {
        let mut inst = None;
        let outcome = (|| {
            let instance = multi_instance(cfg, seed, flags, cfg.max_states).map_err(err)?;
            inst = Some(instance.clone());
            let limit = cfg.column_limit;
            let mut optimum = |model| -> std::result::Result<Rational, String> {
                let s = solve_lp(&instance, model, limit).map_err(err)?;
                hygiene.certify(seed, &s.problem, &s.lp);
                expect(s.scheme.is_feasible(&instance), "LP scheme infeasible")?;
                Ok(s.objective)
            };
            let zero = optimum(PaymentModel::Zero)?;
            let nonneg = optimum(PaymentModel::NonNegative)?;
            let bb = optimum(PaymentModel::BudgetBalanced)?;
            let arb = optimum(PaymentModel::Arbitrary)?;
            expect(zero <= nonneg && zero <= bb && bb <= arb && nonneg <= arb, "optima do not nest")?;

            let virt = solve_budget_balanced(&instance, limit).map_err(err)?;
            expect_eq("budget-balanced virtual payoff", &virt.objective, &bb)?;
            expect(virt.scheme.is_feasible(&instance), "virtual-payoff scheme infeasible")?;
            let realized = virt.scheme.realized.as_ref().ok_or("no realized payments")?;
            expect_eq("realized budget", &realized.expected_total(), &Rational::zero())?;
            expect_eq("realized vs expected payments", &realized.expected_total(), &virt.scheme.expected_payment_total())?;

            let total = solve_arbitrary(&instance, limit, false).map_err(err)?;
            expect_eq("total-payoff maximizer", &total.objective, &arb)?;
            expect(total.scheme.is_feasible(&instance), "total-payoff scheme infeasible")?;
            Ok(virt.form)
        })();
        match outcome {
            Ok(form) => {
                rep.record(seed, Ok(()), || None);
                rep.note(if form == AllocationForm::Deterministic { "deterministic" } else { "mixed" }, 1);
            }
            Err(e) => rep.record(seed, Err(e), || inst.map(Instance::Multi)),
        }
    }
    rep
}

/// The one-receiver encoding of a two-action instance has the same optimum
/// as the single-receiver LP under every payment model.
pub fn one_receiver_consistency(cfg: &Config, hygiene: &mut Hygiene) -> PropertyReport {
    let mut rep = PropertyReport::new("one receiver = two actions");
    for seed in cfg.seed_range() {
        let model = PaymentModel::ALL[(seed as usize) % 4];
        let mut inst = None;
        let outcome = (|| {
            let instance = random_instance(seed, 2, states_for(seed, cfg.max_states), cfg.range).map_err(err)?;
            inst = Some(instance.clone());
            let single = solve_optimal(&instance, model).map_err(err)?;
            hygiene.single(seed, &instance, &single);
            let encoded = MultiAgentInstance::from_two_action(&instance).map_err(err)?;
            let m = solve_lp(&encoded, model, cfg.column_limit).map_err(err)?;
            hygiene.certify(seed, &m.problem, &m.lp);
            expect_eq("N = 1 optimum", &m.objective, &single.objective)?;
            if model == PaymentModel::Arbitrary {
                let canonical = canonical_two_action_scheme(&instance).map_err(err)?;
                let total = solve_arbitrary(&encoded, cfg.column_limit, false).map_err(err)?;
                expect_eq("gamma = 1 vs s + 2r", &total.objective, &sender_utility(&instance, &canonical).map_err(err)?)?;
            }
            Ok(())
        })();
        rep.record(seed, outcome, || inst.map(Instance::Single));
    }
    rep
}

fn read_allocation(instance: &MultiAgentInstance, phi: impl Fn(usize, u32) -> Rational) -> Vec<SetDistribution> {
    (0..instance.num_states())
        .map(|k| {
            (0..instance.num_subsets() as u32)
                .filter_map(|s| {
                    let v = phi(k, s);
                    (!v.is_zero()).then_some((s, v))
                })
                .collect()
        })
        .collect()
}

/// Dropping the action-0 constraints loses nothing, repair restores them,
/// and constraint generation with the brute-force oracle reaches the full
/// optimum with a dual valid on every row; a runner-up oracle is either
/// caught as unsound or still lands on the optimum.
pub fn reduction(cfg: &Config, hygiene: &mut Hygiene) -> PropertyReport {
    let mut rep = PropertyReport::new("constraint dropping + generation");
    let flags = MultiFlags { positive_externalities: true, monotone_sender: true, range: cfg.range };
    let mut rows = 0;
    let mut bound = 0;
    let mut unsound = 0;
    for seed in cfg.seed_range() {
        let mut inst = None;
        let outcome = (|| {
            let instance = multi_instance(cfg, seed, flags, cfg.max_states.min(4)).map_err(err)?;
            inst = Some(instance.clone());
            expect(check_positive_externalities(&instance).is_ok(), "generator broke positive externalities")?;
            let limit = cfg.column_limit;
            let full = solve_lp(&instance, PaymentModel::Zero, limit).map_err(err)?;
            hygiene.certify(seed, &full.problem, &full.lp);

            let dropped = drop_star_star(&instance, limit).map_err(err)?;
            let sol = lp::solve_certified(&dropped.problem).map_err(err)?;
            hygiene.certify(seed, &dropped.problem, &sol);
            expect_eq("dropped optimum", &sol.objective_value, &full.objective)?;

            let relaxed = read_allocation(&instance, |k, s| sol.primal[dropped.layout.phi(k, s)].clone());
            let repaired = repair_scheme(&instance, &relaxed).map_err(err)?;
            expect(repaired.scheme.is_feasible(&instance), "repaired scheme infeasible for the full LP")?;
            let (a, b) = persuasion_terms(&instance, &repaired.scheme.allocation);
            expect(a.iter().all(|v| !v.is_negative()) && b.iter().all(|v| !v.is_positive()), "repaired rows violated")?;
            expect_eq("repaired utility", &repaired.scheme.sender_utility(&instance), &full.objective)?;

            let oracle = BruteForceOracle::new(&instance, limit).map_err(err)?;
            let cp = cutting_plane_solve(&instance, &oracle, limit).map_err(err)?;
            expect_eq("constraint generation", &cp.objective, &full.objective)?;
            expect(cp.scheme.is_feasible(&instance), "generated scheme infeasible")?;
            for k in 0..instance.num_states() {
                let mu = &instance.states()[k].prob;
                for s in 0..instance.num_subsets() as u32 {
                    expect(mu * weighted_value(&instance, k, s, &cp.alpha) <= cp.y[k], "final dual violates a row")?;
                }
            }
            expect(cp.alpha.iter().all(|a| !a.is_negative()), "negative alpha")?;
            expect(cp.rows_generated() <= instance.column_count(), "more rows than sets")?;
            expect(cp.oracle_calls <= cp.rounds * instance.num_states(), "oracle calls exceed rounds x states")?;
            match cutting_plane_solve(&instance, &RunnerUp(&instance), limit) {
                Ok(wrong) => expect_eq("runner-up oracle result", &wrong.objective, &full.objective)?,
                Err(Error::OracleUnsound(_)) => unsound += 1,
                Err(e) => return Err(err(e)),
            }
            Ok((cp.rows_generated(), instance.column_count()))
        })();
        match outcome {
            Ok((r, b)) => {
                rows += r;
                bound += b;
                rep.record(seed, Ok(()), || None);
            }
            Err(e) => rep.record(seed, Err(e), || inst.map(Instance::Multi)),
        }
    }
    rep.note("rows", rows);
    rep.note("row_bound", bound);
    rep.note("unsound_oracle_caught", unsound);
    rep
}

/// Deliberately faulty oracle: answers with the second-best set.
struct RunnerUp<'a>(&'a MultiAgentInstance);

impl SetFunctionOracle for RunnerUp<'_> {
    fn maximize(&self, state: usize, alpha: &[Rational]) -> Result<OracleAnswer> {
        let mut all: Vec<OracleAnswer> = (0..self.0.num_subsets() as u32)
            .map(|set| OracleAnswer { set, value: weighted_value(self.0, state, set, alpha) })
            .collect();
        all.sort_by(|a, b| b.value.cmp(&a.value));
        Ok(all.swap_remove(1))
    }
}

/// Runs a suite; the hygiene report comes last.
pub fn run(suite: Suite, cfg: &Config) -> Vec<PropertyReport> {
    let mut hygiene = Hygiene::default();
    let mut out = Vec::new();
    if matches!(suite, Suite::Single | Suite::All) {
        out.push(payment_identity(cfg));
        out.push(lambda_star(cfg, &mut hygiene));
        out.push(two_action_canonical(cfg, &mut hygiene));
        out.push(symmetric_canonical(cfg, &mut hygiene));
        out.push(dichotomy(cfg, &mut hygiene));
        out.push(weak_duality(cfg, &mut hygiene));
    }
    if matches!(suite, Suite::Multi | Suite::All) {
        out.push(multi_characterizations(cfg, &mut hygiene));
        out.push(one_receiver_consistency(cfg, &mut hygiene));
    }
    if matches!(suite, Suite::Reduction | Suite::All) {
        out.push(reduction(cfg, &mut hygiene));
    }
    out.push(hygiene.finish());
    out
}
