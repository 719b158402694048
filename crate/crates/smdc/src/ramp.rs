//! `(c, k, n)` ramp secret sharing on top of the MDS generators: any `c` or
//! fewer shares reveal nothing about the message, any `k` shares recover it.
//! With `k = c + 1` this is plain threshold secret sharing.

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::mds::{combinations, MdsError, MdsGenerator, MdsParams, MdsVariant};

/// A ramp sharing scheme is an MDS generator with the message in the `U`
/// slots and the secrecy keys in the `Z` slots.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RampScheme {
    generator: MdsGenerator,
}

impl RampScheme {
    /// Seeded scheme. Variant B is the default building block: its keys stay
    /// hidden from small share sets, which the joint coding layers rely on.
    pub fn new(params: MdsParams, seed: u64) -> Result<Self, MdsError> {
        Self::with_variant(params, MdsVariant::B, seed)
    }

    pub fn with_variant(
        params: MdsParams,
        variant: MdsVariant,
        seed: u64,
    ) -> Result<Self, MdsError> {
        Ok(RampScheme {
            generator: MdsGenerator::generate(params, variant, seed)?,
        })
    }

    pub fn from_generator(generator: MdsGenerator) -> Self {
        RampScheme { generator }
    }

    pub fn params(&self) -> &MdsParams {
        self.generator.params()
    }

    pub fn generator(&self) -> &MdsGenerator {
        &self.generator
    }

    /// Split a message into `n` single-symbol shares.
    pub fn share(&self, message: &[u64], keys: &[u64]) -> Result<Vec<u64>, MdsError> {
        self.generator.encode(message, keys)
    }

    /// Recover the message from any `k` shares; the keys are discarded.
    pub fn reconstruct(&self, positions: &[usize], shares: &[u64]) -> Result<Vec<u64>, MdsError> {
        Ok(self.generator.decode(positions, shares)?.0)
    }
}

/// Membership test for the scheme's optimal rate region: every
/// `(k - c)`-subset of encoders must carry at least `H(M)` in total.
pub fn ramp_region_check(
    rates: &[BigRational],
    message_entropy: &BigRational,
    params: &MdsParams,
) -> bool {
    if rates.len() != params.n
        || rates
            .iter()
            .any(|r| r < &BigRational::from_integer(0.into()))
    {
        return false;
    }
    let want = params.k - params.c;
    combinations(params.n, want).into_iter().all(|subset| {
        let total: BigRational = subset.iter().map(|&i| rates[i].clone()).sum();
        total >= *message_entropy
    })
}
