//! JSON documents for instances and schemes. Numbers travel as strings
//! (`"p/q"` or decimals) so that values stay exact.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, ValidationErrors, ValidationIssue};
use crate::model::{PaymentModel, PersuasionInstance, SignalingScheme, State, TypeDistribution, TypeEntry, TypedInstance};
use crate::multi::{MultiAgentInstance, MultiAgentScheme, MultiState, RealizedPayments, SetDistribution};
use crate::rational::{format_decimal, format_rational, parse_rational, Rational};
use crate::single::SingleDual;

/// A number as written in a document: a string, or a plain JSON integer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Num {
    Text(String),
    Int(i64),
}

impl From<&Rational> for Num {
    fn from(value: &Rational) -> Self {
        Num::Text(format_rational(value))
    }
}

fn nums(values: &[Rational]) -> Vec<Num> {
    values.iter().map(Num::from).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateDoc {
    pub prob: Num,
    pub sender: Vec<Num>,
    pub receiver: Vec<Num>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TypeDoc {
    pub sender: Num,
    pub receiver: Num,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JointEntryDoc {
    pub profile: Vec<usize>,
    pub prob: Num,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DistributionDoc {
    IidMarginal(Vec<Num>),
    Joint(Vec<JointEntryDoc>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultiStateDoc {
    pub prob: Num,
    pub sender: Vec<Num>,
    pub receivers: Vec<Vec<Num>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InstanceDoc {
    Single {
        actions: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        payment_model: Option<String>,
        states: Vec<StateDoc>,
    },
    SingleTyped {
        actions: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        payment_model: Option<String>,
        types: Vec<TypeDoc>,
        distribution: DistributionDoc,
    },
    Multi {
        receivers: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        payment_model: Option<String>,
        states: Vec<MultiStateDoc>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Instance {
    Single(PersuasionInstance),
    Typed(TypedInstance),
    Multi(MultiAgentInstance),
}

impl Instance {
    /// Explicit single-receiver form (typed instances are expanded).
    pub fn single(&self) -> Result<Option<PersuasionInstance>> {
        match self {
            Instance::Single(i) => Ok(Some(i.clone())),
            Instance::Typed(t) => Ok(Some(t.expand()?)),
            Instance::Multi(_) => Ok(None),
        }
    }
}

/// An instance together with the payment model named in its document.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceFile {
    pub instance: Instance,
    pub payment_model: Option<PaymentModel>,
}

/// Collects malformed-number issues instead of stopping at the first one.
struct Reader {
    issues: Vec<ValidationIssue>,
}

impl Reader {
    fn num(&mut self, location: impl FnOnce() -> String, value: &Num) -> Rational {
        match value {
            Num::Int(v) => Rational::from_integer((*v).into()),
            Num::Text(text) => parse_rational(text).unwrap_or_else(|_| {
                self.issues.push(ValidationIssue::MalformedRational { location: location(), text: text.clone() });
                Rational::from_integer(0.into())
            }),
        }
    }

    fn vec(&mut self, location: &str, values: &[Num]) -> Vec<Rational> {
        values.iter().enumerate().map(|(k, v)| self.num(|| format!("{location}[{k}]"), v)).collect()
    }

    fn model(&mut self, text: &Option<String>) -> Option<PaymentModel> {
        let text = text.as_ref()?;
        let model = PaymentModel::parse(text);
        if model.is_none() {
            self.issues.push(ValidationIssue::PaymentModel {
                location: "payment_model".into(),
                detail: format!("unknown payment model {text:?}"),
            });
        }
        model
    }

    fn finish(self) -> Result<()> {
        if self.issues.is_empty() {
            Ok(())
        } else {
            Err(Error::Validation(ValidationErrors(self.issues)))
        }
    }
}

pub fn parse_instance(text: &str) -> Result<InstanceFile> {
    let doc: InstanceDoc = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    instance_from_doc(&doc)
}

pub fn instance_from_doc(doc: &InstanceDoc) -> Result<InstanceFile> {
    let mut r = Reader { issues: Vec::new() };
    match doc {
        InstanceDoc::Single { actions, payment_model, states } => {
            let model = r.model(payment_model);
            let states = states
                .iter()
                .enumerate()
                .map(|(k, st)| State {
                    prob: r.num(|| format!("states[{k}].prob"), &st.prob),
                    sender: r.vec(&format!("states[{k}].sender"), &st.sender),
                    receiver: r.vec(&format!("states[{k}].receiver"), &st.receiver),
                })
                .collect();
            r.finish()?;
            Ok(InstanceFile { instance: Instance::Single(PersuasionInstance::new(*actions, states)?), payment_model: model })
        }
        InstanceDoc::SingleTyped { actions, payment_model, types, distribution } => {
            let model = r.model(payment_model);
            let types = types
                .iter()
                .enumerate()
                .map(|(k, t)| TypeEntry {
                    sender: r.num(|| format!("types[{k}].sender"), &t.sender),
                    receiver: r.num(|| format!("types[{k}].receiver"), &t.receiver),
                })
                .collect();
            let distribution = match distribution {
                DistributionDoc::IidMarginal(m) => TypeDistribution::IidMarginal(r.vec("distribution.iid_marginal", m)),
                DistributionDoc::Joint(entries) => TypeDistribution::Joint(
                    entries
                        .iter()
                        .enumerate()
                        .map(|(k, e)| (e.profile.clone(), r.num(|| format!("distribution.joint[{k}].prob"), &e.prob)))
                        .collect(),
                ),
            };
            r.finish()?;
            let typed = TypedInstance::new(*actions, types, distribution)?;
            Ok(InstanceFile { instance: Instance::Typed(typed), payment_model: model })
        }
        InstanceDoc::Multi { receivers, payment_model, states } => {
            let model = r.model(payment_model);
            let states = states
                .iter()
                .enumerate()
                .map(|(k, st)| MultiState {
                    prob: r.num(|| format!("states[{k}].prob"), &st.prob),
                    sender: r.vec(&format!("states[{k}].sender"), &st.sender),
                    receivers: st
                        .receivers
                        .iter()
                        .enumerate()
                        .map(|(i, u)| r.vec(&format!("states[{k}].receivers[{i}]"), u))
                        .collect(),
                })
                .collect();
            r.finish()?;
            Ok(InstanceFile { instance: Instance::Multi(MultiAgentInstance::new(*receivers, states)?), payment_model: model })
        }
    }
}

pub fn instance_to_doc(instance: &Instance, model: Option<PaymentModel>) -> InstanceDoc {
    let payment_model = model.map(|m| m.name().to_string());
    match instance {
        Instance::Single(inst) => InstanceDoc::Single {
            actions: inst.num_actions(),
            payment_model,
            states: inst
                .states()
                .iter()
                .map(|st| StateDoc { prob: (&st.prob).into(), sender: nums(&st.sender), receiver: nums(&st.receiver) })
                .collect(),
        },
        Instance::Typed(t) => InstanceDoc::SingleTyped {
            actions: t.num_actions(),
            payment_model,
            types: t.types().iter().map(|e| TypeDoc { sender: (&e.sender).into(), receiver: (&e.receiver).into() }).collect(),
            distribution: match t.distribution() {
                TypeDistribution::IidMarginal(m) => DistributionDoc::IidMarginal(nums(m)),
                TypeDistribution::Joint(entries) => DistributionDoc::Joint(
                    entries.iter().map(|(p, q)| JointEntryDoc { profile: p.clone(), prob: q.into() }).collect(),
                ),
            },
        },
        Instance::Multi(inst) => InstanceDoc::Multi {
            receivers: inst.num_receivers(),
            payment_model,
            states: inst
                .states()
                .iter()
                .map(|st| MultiStateDoc {
                    prob: (&st.prob).into(),
                    sender: nums(&st.sender),
                    receivers: st.receivers.iter().map(|u| nums(u)).collect(),
                })
                .collect(),
        },
    }
}

pub fn instance_to_json(instance: &Instance, model: Option<PaymentModel>) -> String {
    serde_json::to_string_pretty(&instance_to_doc(instance, model)).expect("documents always serialize")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SingleDualDoc {
    pub lambda: Vec<Vec<Num>>,
    pub symmetric_lambda: Option<Num>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SetProbDoc {
    pub set: u32,
    pub prob: Num,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RealizedDoc {
    pub action_one_prob: Vec<Num>,
    pub on_one: Vec<Num>,
    pub on_zero: Vec<Num>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SchemeDoc {
    Single {
        payment_model: String,
        per_state: Vec<Vec<Num>>,
        expected_payments: Vec<Num>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        per_recommendation_payments: Option<Vec<Num>>,
        sender_utility: Num,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        sender_utility_decimal: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        dual: Option<SingleDualDoc>,
    },
    Multi {
        payment_model: String,
        per_state: Vec<Vec<SetProbDoc>>,
        q1: Vec<Num>,
        q0: Vec<Num>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        gamma_star: Option<Num>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        payments: Option<RealizedDoc>,
        sender_utility: Num,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        sender_utility_decimal: Option<String>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Scheme {
    Single { scheme: SignalingScheme, dual: Option<SingleDual>, sender_utility: Rational },
    Multi { scheme: MultiAgentScheme, gamma_star: Option<Rational>, sender_utility: Rational },
}

pub fn single_scheme_doc(
    scheme: &SignalingScheme,
    per_recommendation: Option<&[Rational]>,
    sender_utility: &Rational,
    dual: Option<&SingleDual>,
) -> SchemeDoc {
    SchemeDoc::Single {
        payment_model: scheme.model().name().into(),
        per_state: scheme.distribution().iter().map(|row| nums(row)).collect(),
        expected_payments: nums(scheme.payments()),
        per_recommendation_payments: per_recommendation.map(nums),
        sender_utility: sender_utility.into(),
        sender_utility_decimal: Some(format_decimal(sender_utility)),
        dual: dual.map(|d| SingleDualDoc {
            lambda: d.lambda.iter().map(|row| nums(row)).collect(),
            symmetric_lambda: d.symmetric_lambda.as_ref().map(Num::from),
        }),
    }
}

pub fn multi_scheme_doc(scheme: &MultiAgentScheme, gamma_star: Option<&Rational>, sender_utility: &Rational) -> SchemeDoc {
    SchemeDoc::Multi {
        payment_model: scheme.model.name().into(),
        per_state: scheme
            .allocation
            .iter()
            .map(|d| d.iter().map(|(&set, p)| SetProbDoc { set, prob: p.into() }).collect())
            .collect(),
        q1: nums(&scheme.q_one),
        q0: nums(&scheme.q_zero),
        gamma_star: gamma_star.map(Num::from),
        payments: scheme.realized.as_ref().map(|r| RealizedDoc {
            action_one_prob: nums(&r.action_one_prob),
            on_one: nums(&r.on_one),
            on_zero: nums(&r.on_zero),
        }),
        sender_utility: sender_utility.into(),
        sender_utility_decimal: Some(format_decimal(sender_utility)),
    }
}

pub fn scheme_to_json(doc: &SchemeDoc) -> String {
    serde_json::to_string_pretty(doc).expect("documents always serialize")
}

fn payment_model(r: &mut Reader, name: &str) -> PaymentModel {
    r.model(&Some(name.to_string())).unwrap_or(PaymentModel::Arbitrary)
}

pub fn parse_scheme(text: &str) -> Result<Scheme> {
    let doc: SchemeDoc = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    scheme_from_doc(&doc)
}

pub fn scheme_from_doc(doc: &SchemeDoc) -> Result<Scheme> {
    let mut r = Reader { issues: Vec::new() };
    match doc {
        SchemeDoc::Single { payment_model: m, per_state, expected_payments, sender_utility, dual, .. } => {
            let model = payment_model(&mut r, m);
            let distribution: Vec<Vec<Rational>> =
                per_state.iter().enumerate().map(|(k, row)| r.vec(&format!("per_state[{k}]"), row)).collect();
            let payments = r.vec("expected_payments", expected_payments);
            let utility = r.num(|| "sender_utility".into(), sender_utility);
            let dual = dual.as_ref().map(|d| {
                SingleDual::from_matrix(
                    d.lambda.iter().enumerate().map(|(i, row)| r.vec(&format!("dual.lambda[{i}]"), row)).collect(),
                )
            });
            r.finish()?;
            let scheme = SignalingScheme::new(distribution, payments, model)?;
            Ok(Scheme::Single { scheme, dual, sender_utility: utility })
        }
        SchemeDoc::Multi { payment_model: m, per_state, q1, q0, gamma_star, payments, sender_utility, .. } => {
            let model = payment_model(&mut r, m);
            let allocation: Vec<SetDistribution> = per_state
                .iter()
                .enumerate()
                .map(|(k, entries)| {
                    entries
                        .iter()
                        .enumerate()
                        .map(|(e, sp)| (sp.set, r.num(|| format!("per_state[{k}][{e}].prob"), &sp.prob)))
                        .collect()
                })
                .collect();
            let q_one = r.vec("q1", q1);
            let q_zero = r.vec("q0", q0);
            let gamma_star = gamma_star.as_ref().map(|g| r.num(|| "gamma_star".into(), g));
            let realized = payments.as_ref().map(|p| RealizedPayments {
                action_one_prob: r.vec("payments.action_one_prob", &p.action_one_prob),
                on_one: r.vec("payments.on_one", &p.on_one),
                on_zero: r.vec("payments.on_zero", &p.on_zero),
            });
            let utility = r.num(|| "sender_utility".into(), sender_utility);
            r.finish()?;
            let scheme = MultiAgentScheme { allocation, q_one, q_zero, model, realized };
            Ok(Scheme::Multi { scheme, gamma_star, sender_utility: utility })
        }
    }
}
