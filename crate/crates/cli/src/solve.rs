//! Solver dispatch for `persuade solve`.

use std::time::Instant;

use persuade_core::io::Instance;
use persuade_core::multi::{self, solve_arbitrary, solve_budget_balanced};
use persuade_core::reduction::{cutting_plane_solve, BruteForceOracle};
use persuade_core::single::{
    canonical_symmetric_scheme, canonical_two_action_scheme, find_lambda_star, nonnegative_dichotomy, solve_optimal,
};
use persuade_core::rational::{int, rat};
use persuade_core::{Error, MultiAgentInstance, PaymentModel, PersuasionInstance, Rational, SingleDual};

use crate::error::CliError;
use crate::report::{DualSummary, RunReport, Solved};

type Result<T> = std::result::Result<T, CliError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Method {
    Lp,
    Fast,
    CuttingPlane,
}

impl Method {
    fn name(self) -> &'static str {
        match self {
            Method::Lp => "lp",
            Method::Fast => "fast",
            Method::CuttingPlane => "cutting-plane",
        }
    }
}

pub struct Request {
    pub model: PaymentModel,
    pub method: Method,
    pub verify: bool,
    pub column_limit: usize,
}

fn not_applicable(detail: &str) -> CliError {
    CliError::NotApplicable(detail.to_string())
}

fn summary(instance: &Instance) -> String {
    match instance {
        Instance::Single(i) => format!("single receiver, {} actions, {} states", i.num_actions(), i.num_states()),
        Instance::Typed(t) => format!(
            "single receiver, {} actions, {} types per action (expanded to explicit states)",
            t.num_actions(),
            t.types().len()
        ),
        Instance::Multi(m) => format!("{} receivers, {} states", m.num_receivers(), m.num_states()),
    }
}

pub fn run(instance: &Instance, req: &Request) -> Result<RunReport> {
    let start = Instant::now();
    let summary = summary(instance);
    let (objective, solved, dual, lp) = match instance {
        Instance::Multi(m) => solve_multi(m, req)?,
        other => {
            let single = other.single()?.expect("single-receiver instance");
            solve_single(&single, req)?
        }
    };
    if let Some(lp) = &lp {
        if *lp != objective {
            let context = format!("{} method", req.method.name());
            return Err(Error::CharacterizationMismatch { context, lp: lp.clone(), found: objective }.into());
        }
    }
    let mut report = RunReport::new(summary, req.model, req.method.name(), objective, solved, dual, lp.as_ref());
    report.wall_time = start.elapsed();
    Ok(report)
}

type Outcome = (Rational, Solved, DualSummary, Option<Rational>);

fn solve_single(instance: &PersuasionInstance, req: &Request) -> Result<Outcome> {
    let model = req.model;
    let wrap = |scheme| Solved::Single { instance: instance.clone(), scheme };
    if req.method == Method::CuttingPlane {
        return Err(not_applicable("cutting-plane needs a multi-receiver instance"));
    }
    if req.method == Method::Lp {
        let sol = solve_optimal(instance, model)?;
        return Ok((sol.objective, wrap(sol.scheme), DualSummary::LambdaMatrix(sol.dual), None));
    }
    let (scheme, dual) = match model {
        PaymentModel::Zero => {
            let star = find_lambda_star(instance)?;
            (star.scheme, DualSummary::LambdaStar(star.lambda))
        }
        PaymentModel::NonNegative => {
            let d = nonnegative_dichotomy(instance)?;
            (d.scheme, DualSummary::LambdaStar(d.no_payment.lambda))
        }
        PaymentModel::Arbitrary => {
            let scheme = if instance.num_actions() == 2 {
                canonical_two_action_scheme(instance)?
            } else {
                canonical_symmetric_scheme(instance)?
            };
            let n = instance.num_actions();
            (scheme, DualSummary::LambdaMatrix(SingleDual::symmetric(n, rat(1, n as i64 - 1))))
        }
        PaymentModel::BudgetBalanced => {
            if instance.num_actions() != 2 {
                return Err(Error::WrongActionCount { expected: 2, found: instance.num_actions() }.into());
            }
            let encoded = MultiAgentInstance::from_two_action(instance)?;
            let bb = solve_budget_balanced(&encoded, req.column_limit)?;
            (bb.scheme.to_two_action()?, DualSummary::Gamma(bb.gamma_star))
        }
    };
    let objective = persuade_core::model::sender_utility(instance, &scheme)?;
    let lp = if req.verify { Some(solve_optimal(instance, model)?.objective) } else { None };
    Ok((objective, wrap(scheme), dual, lp))
}

fn solve_multi(instance: &MultiAgentInstance, req: &Request) -> Result<Outcome> {
    let model = req.model;
    let limit = req.column_limit;
    instance.check_size(limit)?;
    let wrap = |scheme| Solved::Multi { instance: instance.clone(), scheme };
    let lp_check = || -> Result<Option<Rational>> {
        Ok(if req.verify { Some(multi::solve_lp(instance, model, limit)?.objective) } else { None })
    };
    match (req.method, model) {
        (Method::Lp, _) => {
            let sol = multi::solve_lp(instance, model, limit)?;
            let dual = match &sol.dual.gamma {
                Some(g) => DualSummary::Gamma(g.clone()),
                None => DualSummary::Alpha(sol.dual.alpha.clone()),
            };
            Ok((sol.objective, wrap(sol.scheme), dual, None))
        }
        (Method::Fast, PaymentModel::BudgetBalanced) => {
            let bb = solve_budget_balanced(instance, limit)?;
            Ok((bb.objective, wrap(bb.scheme), DualSummary::Gamma(bb.gamma_star), lp_check()?))
        }
        (Method::Fast, PaymentModel::Arbitrary) => {
            let sol = solve_arbitrary(instance, limit, false)?;
            Ok((sol.objective, wrap(sol.scheme), DualSummary::Gamma(int(1)), lp_check()?))
        }
        (Method::Fast, _) => Err(not_applicable(
            "fast multi-receiver solves cover budget_balanced and arbitrary; use lp or cutting-plane",
        )),
        (Method::CuttingPlane, PaymentModel::Zero) => {
            let oracle = BruteForceOracle::new(instance, limit)?;
            let cp = cutting_plane_solve(instance, &oracle, limit)?;
            Ok((cp.objective, wrap(cp.scheme), DualSummary::Alpha(cp.alpha), lp_check()?))
        }
        (Method::CuttingPlane, _) => Err(not_applicable("cutting-plane solves the zero-payment model only")),
    }
}
