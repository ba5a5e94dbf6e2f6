//! Human-readable run report. Every flag is recomputed from the returned
//! scheme and the instance.

use std::fmt;
use std::time::Duration;

use persuade_core::io::{multi_scheme_doc, single_scheme_doc, SchemeDoc};
use persuade_core::model::{is_persuasive, per_recommendation, sender_utility};
use persuade_core::rational::{format_decimal, format_rational, int, sum, to_f64};
use persuade_core::{MultiAgentInstance, MultiAgentScheme, PaymentModel, PersuasionInstance, Rational, SignalingScheme, SingleDual};

/// Entries below this probability are hidden from the scheme summary.
const DISPLAY_THRESHOLD: f64 = 1e-3;
const MAX_STATES_SHOWN: usize = 24;

#[derive(Debug, Clone)]
pub enum DualSummary {
    LambdaStar(Rational),
    LambdaMatrix(SingleDual),
    Gamma(Rational),
    Alpha(Vec<Rational>),
}

#[derive(Debug, Clone)]
pub enum Solved {
    Single { instance: PersuasionInstance, scheme: SignalingScheme },
    Multi { instance: MultiAgentInstance, scheme: MultiAgentScheme },
}

#[derive(Debug, Clone, Default)]
pub struct Flags {
    pub persuasive: bool,
    pub admissible: bool,
    pub budget_balanced: bool,
    pub objective_reproduced: bool,
    /// `None` when the cross-check was skipped or the method is the LP.
    pub fast_matches_lp: Option<bool>,
}

#[derive(Debug, Clone)]
pub struct RunReport {
    pub summary: String,
    pub model: PaymentModel,
    pub method: String,
    pub objective: Rational,
    pub solved: Solved,
    pub dual: DualSummary,
    pub flags: Flags,
    pub notes: Vec<String>,
    pub wall_time: Duration,
}

impl Solved {
    /// Sender utility recomputed from the scheme.
    pub fn utility(&self) -> Rational {
        match self {
            Solved::Single { instance, scheme } => sender_utility(instance, scheme).unwrap_or_else(|_| int(0)),
            Solved::Multi { instance, scheme } => scheme.sender_utility(instance),
        }
    }

    pub fn scheme_doc(&self, dual: &DualSummary) -> SchemeDoc {
        let utility = self.utility();
        match self {
            Solved::Single { instance, scheme } => {
                let per = per_recommendation(instance, scheme.distribution(), scheme.payments()).ok();
                let d = match dual {
                    DualSummary::LambdaMatrix(d) => Some(d.clone()),
                    DualSummary::LambdaStar(l) => Some(SingleDual::symmetric(instance.num_actions(), l.clone())),
                    _ => None,
                };
                single_scheme_doc(scheme, per.as_deref(), &utility, d.as_ref())
            }
            Solved::Multi { scheme, .. } => {
                let gamma = match dual {
                    DualSummary::Gamma(g) => Some(g),
                    _ => None,
                };
                multi_scheme_doc(scheme, gamma, &utility)
            }
        }
    }

    fn flags(&self, objective: &Rational) -> Flags {
        match self {
            Solved::Single { instance, scheme } => Flags {
                persuasive: is_persuasive(instance, scheme).map(|v| v.persuasive).unwrap_or(false),
                admissible: scheme.model().admits(scheme.payments()),
                budget_balanced: sum(scheme.payments()) == int(0),
                objective_reproduced: sender_utility(instance, scheme).ok().as_ref() == Some(objective),
                fast_matches_lp: None,
            },
            Solved::Multi { instance, scheme } => {
                let realized_ok = scheme.realized.as_ref().is_none_or(|r| r.expected_total() == scheme.expected_payment_total());
                let payments: Vec<Rational> = scheme.q_one.iter().chain(&scheme.q_zero).cloned().collect();
                Flags {
                    persuasive: scheme.is_feasible(instance),
                    admissible: scheme.model.admits(&payments) && realized_ok,
                    budget_balanced: scheme.expected_payment_total() == int(0) && realized_ok,
                    objective_reproduced: scheme.sender_utility(instance) == *objective,
                    fast_matches_lp: None,
                }
            }
        }
    }
}

impl RunReport {
    /// Builds the report, deriving every flag from `solved`. `lp_objective`
    /// is the independently solved LP optimum, when a cross-check ran. The
    /// caller fills in the wall time.
    pub fn new(
        summary: String,
        model: PaymentModel,
        method: &str,
        objective: Rational,
        solved: Solved,
        dual: DualSummary,
        lp_objective: Option<&Rational>,
    ) -> Self {
        let mut flags = solved.flags(&objective);
        flags.fast_matches_lp = lp_objective.map(|lp| *lp == solved.utility());
        RunReport { summary, model, method: method.to_string(), objective, solved, dual, flags, notes: Vec::new(), wall_time: Duration::ZERO }
    }

    /// Whether every computed flag holds.
    pub fn all_ok(&self) -> bool {
        let f = &self.flags;
        let bb = self.model != PaymentModel::BudgetBalanced || f.budget_balanced;
        f.persuasive && f.admissible && f.objective_reproduced && bb && f.fast_matches_lp != Some(false)
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn shown(p: &Rational) -> bool {
    to_f64(p) >= DISPLAY_THRESHOLD
}

fn write_states<T>(
    f: &mut fmt::Formatter<'_>,
    rows: impl Iterator<Item = (Rational, T)>,
    mut line: impl FnMut(&T) -> String,
) -> fmt::Result {
    let rows: Vec<(Rational, T)> = rows.collect();
    for (k, (mu, row)) in rows.iter().enumerate().take(MAX_STATES_SHOWN) {
        writeln!(f, "    state {k:>3} (mu {}): {}", format_rational(mu), line(row))?;
    }
    if rows.len() > MAX_STATES_SHOWN {
        writeln!(f, "    ... {} more states", rows.len() - MAX_STATES_SHOWN)?;
    }
    Ok(())
}

fn set_name(set: u32, n: usize) -> String {
    let members: Vec<String> = (0..n).filter(|i| set & (1 << i) != 0).map(|i| i.to_string()).collect();
    format!("{{{}}}", members.join(","))
}

fn join(values: &[Rational]) -> String {
    values.iter().map(format_rational).collect::<Vec<_>>().join(", ")
}

impl fmt::Display for RunReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "instance   {}", self.summary)?;
        writeln!(f, "model      {}", self.model)?;
        writeln!(f, "method     {}", self.method)?;
        writeln!(f, "objective  {} (~{})", format_rational(&self.objective), format_decimal(&self.objective))?;
        writeln!(f, "scheme")?;
        match &self.solved {
            Solved::Single { instance, scheme } => {
                let rows = instance.states().iter().map(|st| st.prob.clone()).zip(scheme.distribution().iter());
                write_states(f, rows, |row| {
                    row.iter()
                        .enumerate()
                        .filter(|(_, p)| shown(p))
                        .map(|(i, p)| format!("a{i} {}", format_rational(p)))
                        .collect::<Vec<_>>()
                        .join(", ")
                })?;
                writeln!(f, "  expected payments  [{}]", join(scheme.payments()))?;
            }
            Solved::Multi { instance, scheme } => {
                let n = instance.num_receivers();
                let rows = instance.states().iter().map(|st| st.prob.clone()).zip(scheme.allocation.iter());
                write_states(f, rows, |dist| {
                    dist.iter()
                        .filter(|(_, p)| shown(p))
                        .map(|(&s, p)| format!("{} {}", set_name(s, n), format_rational(p)))
                        .collect::<Vec<_>>()
                        .join(", ")
                })?;
                writeln!(f, "  Q(1) [{}]  Q(0) [{}]", join(&scheme.q_one), join(&scheme.q_zero))?;
                if let Some(r) = &scheme.realized {
                    writeln!(f, "  paid on 1 [{}]  paid on 0 [{}]", join(&r.on_one), join(&r.on_zero))?;
                }
            }
        }
        match &self.dual {
            DualSummary::LambdaStar(l) => writeln!(f, "dual       lambda* = {}", format_rational(l))?,
            DualSummary::Gamma(g) => writeln!(f, "dual       gamma* = {}", format_rational(g))?,
            DualSummary::Alpha(a) => writeln!(f, "dual       alpha = [{}]", join(a))?,
            DualSummary::LambdaMatrix(d) => match &d.symmetric_lambda {
                Some(l) => writeln!(f, "dual       lambda(i,j) = {} for all i != j", format_rational(l))?,
                None => {
                    writeln!(f, "dual       lambda")?;
                    for row in &d.lambda {
                        writeln!(f, "             [{}]", join(row))?;
                    }
                }
            },
        }
        let fl = &self.flags;
        writeln!(f, "checks")?;
        writeln!(f, "  persuasive            {}", yes_no(fl.persuasive))?;
        writeln!(f, "  payments admissible   {}", yes_no(fl.admissible))?;
        writeln!(f, "  budget balanced       {}", yes_no(fl.budget_balanced))?;
        writeln!(f, "  objective recomputed  {}", yes_no(fl.objective_reproduced))?;
        match fl.fast_matches_lp {
            Some(b) => writeln!(f, "  matches LP            {}", yes_no(b))?,
            None => writeln!(f, "  matches LP            not checked")?,
        }
        writeln!(f, "status     {}", if self.all_ok() { "ok" } else { "FAILED" })?;
        for note in &self.notes {
            writeln!(f, "note       {note}")?;
        }
        write!(f, "wall time  {:.3}s", self.wall_time.as_secs_f64())
    }
}
