//! I.i.d. effective Z-flip noise on eligible primal qubits and syndrome extraction.

use crate::error::{Error, Result};
use crate::region::SimplifiedRegion;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Z errors before measurement and X-measurement flips, combined into one flip rate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErrorModel {
    pub p_z: f64,
    pub p_mx: f64,
}

impl ErrorModel {
    pub fn new(p_z: f64, p_mx: f64) -> Result<Self> {
        for (name, p) in [("p_z", p_z), ("p_mx", p_mx)] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidInput(format!("{name} = {p} is not a probability")));
            }
        }
        Ok(ErrorModel { p_z, p_mx })
    }

    /// Model whose net flip rate is `p` (all weight on Z errors).
    pub fn from_p_phys(p: f64) -> Result<Self> {
        Self::new(p, 0.0)
    }

    /// Probability that exactly one of the two flips happens.
    pub fn p_phys(&self) -> f64 {
        self.p_z + self.p_mx - self.p_z * self.p_mx
    }
}

/// Generator for one cycle: ChaCha8 keyed by `seed`, stream selected by `cycle_index`.
pub fn cycle_rng(seed: u64, cycle_index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(cycle_index);
    rng
}

/// Flips each eligible qubit independently with `p_phys`, drawing in ascending id order.
pub fn sample_errors(region: &SimplifiedRegion, model: &ErrorModel, seed: u64, cycle_index: u64) -> Vec<usize> {
    sample_from(&region.eligible, model.p_phys(), &mut cycle_rng(seed, cycle_index))
}

pub fn sample_from(eligible: &[usize], p: f64, rng: &mut impl Rng) -> Vec<usize> {
    eligible.iter().copied().filter(|_| rng.gen::<f64>() < p).collect()
}

/// Flipped detectors of the region.
pub fn extract_syndrome(region: &SimplifiedRegion, errors: &[usize]) -> Vec<usize> {
    region.syndrome_of(errors)
}

/// Flipped detectors given explicit detector X-supports.
pub fn syndrome_from_supports(supports: &[Vec<usize>], errors: &[usize]) -> Vec<usize> {
    let mut sorted = errors.to_vec();
    sorted.sort_unstable();
    supports
        .iter()
        .enumerate()
        .filter(|(_, s)| s.iter().filter(|q| sorted.binary_search(q).is_ok()).count() % 2 == 1)
        .map(|(i, _)| i)
        .collect()
}
