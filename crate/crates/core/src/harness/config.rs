use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Predicate an emitted instance must satisfy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Requirement {
    FaithfulU,
    Coherent,
    ConcreteMonos,
    /// Faithful, coherent, concrete monos, iso-full and replete over the
    /// element pool.
    AecProxy,
    /// Transportable over the element pool.
    Transportable,
}

impl fmt::Display for Requirement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Requirement::FaithfulU => "faithful-u",
            Requirement::Coherent => "coherent",
            Requirement::ConcreteMonos => "concrete-monos",
            Requirement::AecProxy => "aec-proxy",
            Requirement::Transportable => "transportable",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorConfig {
    pub seed: u64,
    pub max_objects: usize,
    pub max_carrier: usize,
    /// Largest hom-set.
    pub max_hom: usize,
    /// Largest total number of morphisms, identities included.
    pub max_morphisms: usize,
    pub required: Vec<Requirement>,
    /// Candidates rejected in a row before generation gives up.
    pub max_rejections: usize,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        GeneratorConfig {
            seed: 0,
            max_objects: 4,
            max_carrier: 3,
            max_hom: 16,
            max_morphisms: 16,
            required: Vec::new(),
            max_rejections: 400,
        }
    }
}

impl GeneratorConfig {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn requiring(mut self, reqs: &[Requirement]) -> Self {
        self.required = reqs.to_vec();
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_objects == 0
            || self.max_carrier == 0
            || self.max_hom == 0
            || self.max_morphisms == 0
            || self.max_rejections == 0
        {
            return Err(Error::Precondition("generator bounds must be positive".into()));
        }
        Ok(())
    }

    pub fn requires(&self, r: Requirement) -> bool {
        self.required.contains(&r)
    }

    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }
}

/// Generation stopped because too many candidates were rejected.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{rejected} consecutive candidates rejected (last failing requirement: {requirement})")]
pub struct GenError {
    pub rejected: usize,
    pub requirement: String,
}

/// Seed of instance `index` in a run seeded with `seed`. SplitMix64 over the
/// pair, so neighbouring indices get unrelated streams.
pub fn instance_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed
        .wrapping_mul(0x9E37_79B9_7F4A_7C15)
        .wrapping_add(index.wrapping_add(1).wrapping_mul(0xBF58_476D_1CE4_E5B9));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_bound_is_rejected() {
        let cfg = GeneratorConfig {
            max_carrier: 0,
            ..Default::default()
        };
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn instance_seeds_differ() {
        let s: std::collections::BTreeSet<u64> = (0..1000).map(|i| instance_seed(7, i)).collect();
        assert_eq!(s.len(), 1000);
        assert_ne!(instance_seed(7, 0), instance_seed(8, 0));
    }
}
