//! Seeded random instances for property campaigns. Payoffs are small
//! integers so that ties, and hence degenerate cases, actually occur.

use std::collections::BTreeSet;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{PersuasionInstance, State, TypeDistribution, TypeEntry, TypedInstance};
use crate::error::{Error, Result};
use crate::multi::{MultiAgentInstance, MultiState};
use crate::rational::{int, Rational};

/// Inclusive integer range for generated payoffs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PayoffRange {
    pub low: i64,
    pub high: i64,
}

impl Default for PayoffRange {
    fn default() -> Self {
        PayoffRange { low: -3, high: 3 }
    }
}

impl PayoffRange {
    fn check(self) -> Result<()> {
        if self.low > self.high {
            return Err(Error::InvalidParameter(format!("empty payoff range [{}, {}]", self.low, self.high)));
        }
        Ok(())
    }

    fn draw(self, rng: &mut ChaCha8Rng) -> Rational {
        int(rng.random_range(self.low..=self.high))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct MultiFlags {
    pub positive_externalities: bool,
    pub monotone_sender: bool,
    pub range: PayoffRange,
}

fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Probability vector from integer weights in `1..=4`.
fn random_prior(rng: &mut ChaCha8Rng, len: usize) -> Vec<Rational> {
    let weights: Vec<i64> = (0..len).map(|_| rng.random_range(1..=4)).collect();
    let total: i64 = weights.iter().sum();
    weights.into_iter().map(|w| Rational::new(w.into(), total.into())).collect()
}

/// Probability vector with some exact zeros and point masses.
fn random_simplex_point(rng: &mut ChaCha8Rng, len: usize) -> Vec<Rational> {
    match rng.random_range(0..4) {
        0 => {
            let mut v = vec![Rational::zero(); len];
            v[rng.random_range(0..len)] = Rational::one();
            v
        }
        _ => {
            let weights: Vec<i64> = (0..len).map(|_| rng.random_range(0..=3)).collect();
            let total: i64 = weights.iter().sum();
            if total == 0 {
                return vec![Rational::new(1.into(), (len as i64).into()); len];
            }
            weights.into_iter().map(|w| Rational::new(w.into(), total.into())).collect()
        }
    }
}

fn check_positive(name: &str, value: usize) -> Result<()> {
    if value == 0 {
        return Err(Error::InvalidParameter(format!("{name} must be positive")));
    }
    Ok(())
}

pub fn random_instance(seed: u64, num_actions: usize, num_states: usize, range: PayoffRange) -> Result<PersuasionInstance> {
    check_positive("actions", num_actions)?;
    check_positive("states", num_states)?;
    range.check()?;
    let mut rng = rng_for(seed);
    let prior = random_prior(&mut rng, num_states);
    let states = prior
        .into_iter()
        .map(|prob| State {
            prob,
            sender: (0..num_actions).map(|_| range.draw(&mut rng)).collect(),
            receiver: (0..num_actions).map(|_| range.draw(&mut rng)).collect(),
        })
        .collect();
    PersuasionInstance::new(num_actions, states)
}

/// Random per-state recommendation distributions.
pub fn random_distribution(seed: u64, num_states: usize, num_actions: usize) -> Result<Vec<Vec<Rational>>> {
    check_positive("actions", num_actions)?;
    let mut rng = rng_for(seed);
    Ok((0..num_states).map(|_| random_simplex_point(&mut rng, num_actions)).collect())
}

/// Random payments: quarters in `[4 low, 4 high] / 4`.
pub fn random_payments(seed: u64, num_actions: usize, range: PayoffRange) -> Result<Vec<Rational>> {
    range.check()?;
    let mut rng = rng_for(seed);
    Ok((0..num_actions)
        .map(|_| Rational::new(rng.random_range(4 * range.low..=4 * range.high).into(), 4.into()))
        .collect())
}

fn distinct_permutations(profile: &[usize]) -> BTreeSet<Vec<usize>> {
    fn walk(rest: &mut Vec<usize>, prefix: &mut Vec<usize>, out: &mut BTreeSet<Vec<usize>>) {
        if rest.is_empty() {
            out.insert(prefix.clone());
            return;
        }
        for k in 0..rest.len() {
            let t = rest.remove(k);
            prefix.push(t);
            walk(rest, prefix, out);
            prefix.pop();
            rest.insert(k, t);
        }
    }
    let mut out = BTreeSet::new();
    walk(&mut profile.to_vec(), &mut Vec::new(), &mut out);
    out
}

/// Random typed instance. With `symmetric_joint` the distribution is an
/// explicit joint spreading each sampled profile's mass equally over its
/// permutations; otherwise it is an i.i.d. marginal.
pub fn random_typed_instance(
    seed: u64,
    num_actions: usize,
    num_types: usize,
    range: PayoffRange,
    symmetric_joint: bool,
) -> Result<TypedInstance> {
    check_positive("actions", num_actions)?;
    check_positive("types", num_types)?;
    range.check()?;
    let mut rng = rng_for(seed);
    let types = (0..num_types)
        .map(|_| TypeEntry { sender: range.draw(&mut rng), receiver: range.draw(&mut rng) })
        .collect();
    let distribution = if symmetric_joint {
        let draws = rng.random_range(1..=3);
        let mut bases = BTreeSet::new();
        for _ in 0..draws {
            let mut profile: Vec<usize> = (0..num_actions).map(|_| rng.random_range(0..num_types)).collect();
            profile.sort_unstable();
            bases.insert(profile);
        }
        let weights = random_prior(&mut rng, bases.len());
        let mut joint = Vec::new();
        for (base, w) in bases.iter().zip(weights) {
            let perms = distinct_permutations(base);
            let share = w / Rational::from_integer((perms.len() as i64).into());
            joint.extend(perms.into_iter().map(|p| (p, share.clone())));
        }
        TypeDistribution::Joint(joint)
    } else {
        TypeDistribution::IidMarginal(random_prior(&mut rng, num_types))
    };
    TypedInstance::new(num_actions, types, distribution)
}

/// Expanded random symmetric instance; even seeds use an i.i.d. marginal,
/// odd seeds a symmetric joint.
pub fn random_symmetric_instance(seed: u64, num_actions: usize, num_types: usize, range: PayoffRange) -> Result<PersuasionInstance> {
    random_typed_instance(seed, num_actions, num_types, range, seed % 2 == 1)?.expand()
}

/// Random multi-receiver instance. Positive externalities are built in as
/// `u_i(S) = a_i(S - i) + [i in S] m_i(S - i)` with `m_i` non-decreasing;
/// a monotone sender function is a base value plus non-negative singleton
/// and pair bonuses.
pub fn random_multi_instance(seed: u64, num_receivers: usize, num_states: usize, flags: MultiFlags) -> Result<MultiAgentInstance> {
    check_positive("receivers", num_receivers)?;
    check_positive("states", num_states)?;
    if num_receivers > 12 {
        return Err(Error::InvalidParameter("at most 12 receivers are generated".into()));
    }
    let range = flags.range;
    range.check()?;
    let mut rng = rng_for(seed);
    let width = 1usize << num_receivers;
    let nonneg = PayoffRange { low: 0, high: range.high.max(1) };
    let prior = random_prior(&mut rng, num_states);
    let mut states = Vec::with_capacity(num_states);
    for prob in prior {
        let sender = if flags.monotone_sender {
            let base = range.draw(&mut rng);
            let single: Vec<Rational> = (0..num_receivers).map(|_| nonneg.draw(&mut rng)).collect();
            let pair: Vec<Vec<Rational>> =
                (0..num_receivers).map(|_| (0..num_receivers).map(|_| pair_bonus(&mut rng)).collect()).collect();
            (0..width as u32).map(|s| modular_plus_pairs(s, &base, &single, &pair, num_receivers)).collect()
        } else {
            (0..width).map(|_| range.draw(&mut rng)).collect()
        };
        let receivers = (0..num_receivers)
            .map(|i| {
                if flags.positive_externalities {
                    let outside: Vec<Rational> = (0..width).map(|_| range.draw(&mut rng)).collect();
                    let constant = range.draw(&mut rng);
                    let single: Vec<Rational> = (0..num_receivers).map(|_| nonneg.draw(&mut rng)).collect();
                    let pair: Vec<Vec<Rational>> = (0..num_receivers)
                        .map(|_| (0..num_receivers).map(|_| pair_bonus(&mut rng)).collect())
                        .collect();
                    (0..width as u32)
                        .map(|s| {
                            let others = s & !(1 << i);
                            let mut v = outside[others as usize].clone();
                            if s != others {
                                v += modular_plus_pairs(others, &constant, &single, &pair, num_receivers);
                            }
                            v
                        })
                        .collect()
                } else {
                    (0..width).map(|_| range.draw(&mut rng)).collect()
                }
            })
            .collect();
        states.push(MultiState { prob, sender, receivers });
    }
    MultiAgentInstance::new(num_receivers, states)
}

fn pair_bonus(rng: &mut ChaCha8Rng) -> Rational {
    if rng.random_range(0..3) == 0 {
        int(rng.random_range(1..=2))
    } else {
        Rational::zero()
    }
}

/// `base + sum_{j in S} single_j + sum_{j < k in S} pair_jk`.
fn modular_plus_pairs(set: u32, base: &Rational, single: &[Rational], pair: &[Vec<Rational>], n: usize) -> Rational {
    let mut v = base.clone();
    for j in (0..n).filter(|&j| set & (1 << j) != 0) {
        v += &single[j];
        for k in (j + 1..n).filter(|&k| set & (1 << k) != 0) {
            v += &pair[j][k];
        }
    }
    v
}
