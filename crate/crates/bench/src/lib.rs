//! Fixed benchmark inputs, shared by `benches/solvers.rs`.

use persuade_core::model::{random_instance, random_multi_instance, random_symmetric_instance, MultiFlags, PayoffRange};
use persuade_core::{MultiAgentInstance, PersuasionInstance};

pub const SEED: u64 = 7;

pub fn single(actions: usize, states: usize) -> PersuasionInstance {
    random_instance(SEED, actions, states, PayoffRange::default()).expect("benchmark instance")
}

pub fn symmetric(actions: usize, types: usize) -> PersuasionInstance {
    random_symmetric_instance(SEED, actions, types, PayoffRange::default()).expect("benchmark instance")
}

/// Positive externalities and a monotone sender, so every multi-receiver
/// method applies.
pub fn multi(receivers: usize, states: usize) -> MultiAgentInstance {
    let flags = MultiFlags { positive_externalities: true, monotone_sender: true, ..MultiFlags::default() };
    random_multi_instance(SEED, receivers, states, flags).expect("benchmark instance")
}
