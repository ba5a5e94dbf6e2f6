//! Exact optimal Bayesian persuasion with payments.
//!
//! Every quantity is an exact rational. Optimal schemes come from an exact
//! simplex solver that also returns a dual certificate; the closed-form
//! characterizations (λ-scaled welfare maximizers, canonical schemes,
//! virtual-payoff maximizers, constraint generation) are checked against it.

// Error payloads carry exact rationals; they are only built on failure.
#![allow(clippy::result_large_err)]

pub mod campaign;
pub mod error;
pub mod fixtures;
pub mod io;
pub mod lp;
pub mod model;
pub mod multi;
pub mod rational;
pub mod reduction;
pub mod single;

pub use error::{Error, ExternalityWitness, Result, ValidationErrors, ValidationIssue};
pub use lp::{LpProblem, LpSolution, LpStatus};
pub use model::{PaymentModel, PersuasionInstance, SignalingScheme, State, TypedInstance};
pub use multi::{MultiAgentInstance, MultiAgentScheme, MultiDual, MultiState};
pub use rational::Rational;
pub use single::SingleDual;
