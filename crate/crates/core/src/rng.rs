//! Reproducible random streams and the distribution samplers the simulators
//! consume.
//!
//! Every Monte Carlo path owns a [`RngStream`] keyed by `(master_seed,
//! stream_id)`. The stream is a ChaCha8 keystream: the master seed selects the
//! key and the stream id selects the 64-bit nonce, so distinct ids give
//! independent sequences and replaying an id reproduces its draws no matter
//! which worker runs it.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma, Poisson, StandardNormal};

use crate::error::{Error, Result};

/// Upper 16 bits of a stream id name the purpose of the stream; the lower 48
/// bits index the path or draw within that purpose.
pub mod lanes {
    pub const PATHS: u16 = 0;
    pub const LIMIT_LAW: u16 = 1;
    pub const HITTING: u16 = 2;
    pub const EXCURSIONS: u16 = 3;
    pub const FUNCTIONALS: u16 = 4;
    pub const QUADRATURE: u16 = 5;
    pub const REFERENCE: u16 = 6;
}

const LANE_SHIFT: u32 = 48;
const INDEX_MASK: u64 = (1 << LANE_SHIFT) - 1;

/// Packs a lane tag and an index into a stream id. Lane 0 index `i` is simply
/// `i`, so path `i` of an ensemble owns stream id `i`.
pub fn stream_id(lane: u16, index: u64) -> u64 {
    debug_assert!(index <= INDEX_MASK, "stream index overflows 48 bits");
    ((lane as u64) << LANE_SHIFT) | (index & INDEX_MASK)
}

#[derive(Clone, Debug)]
pub struct RngStream {
    master_seed: u64,
    stream_id: u64,
    core: ChaCha8Rng,
}

impl RngStream {
    pub fn new(master_seed: u64, stream_id: u64) -> Self {
        let mut core = ChaCha8Rng::seed_from_u64(master_seed);
        core.set_stream(stream_id);
        Self {
            master_seed,
            stream_id,
            core,
        }
    }

    pub fn for_lane(master_seed: u64, lane: u16, index: u64) -> Self {
        Self::new(master_seed, stream_id(lane, index))
    }

    /// Reopens a stream at a previously observed [`position`](Self::position).
    pub fn at(master_seed: u64, stream_id: u64, position: u128) -> Self {
        let mut s = Self::new(master_seed, stream_id);
        s.core.set_word_pos(position);
        s
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    /// Number of 32-bit keystream words consumed so far.
    pub fn position(&self) -> u128 {
        self.core.get_word_pos()
    }

    pub fn next_u64(&mut self) -> u64 {
        self.core.next_u64()
    }

    /// Uniform on `[0, 1)`.
    pub fn sample_uniform(&mut self) -> f64 {
        self.core.random::<f64>()
    }

    pub fn sample_normal(&mut self) -> f64 {
        StandardNormal.sample(&mut self.core)
    }

    /// Gamma draw with the given shape and scale. Valid for any shape > 0,
    /// including the shape < 1 regime needed when δ < 2.
    pub fn sample_gamma(&mut self, shape: f64, scale: f64) -> Result<f64> {
        if !(shape > 0.0 && shape.is_finite()) || !(scale > 0.0 && scale.is_finite()) {
            return Err(Error::param(format!(
                "gamma requires shape > 0 and scale > 0, got shape={shape}, scale={scale}"
            )));
        }
        let dist = Gamma::new(shape, scale).map_err(|e| Error::param(e.to_string()))?;
        Ok(dist.sample(&mut self.core))
    }

    pub fn sample_poisson(&mut self, mean: f64) -> Result<u64> {
        if !(mean >= 0.0 && mean.is_finite()) {
            return Err(Error::param(format!(
                "poisson mean must be finite and >= 0, got {mean}"
            )));
        }
        if mean == 0.0 {
            return Ok(0);
        }
        let dist = Poisson::new(mean).map_err(|e| Error::param(e.to_string()))?;
        let k: f64 = dist.sample(&mut self.core);
        Ok(k as u64)
    }

    /// Noncentral chi-square via the Poisson-Gamma mixture
    /// `N ~ Poisson(noncentrality / 2)`, then `Gamma(dof / 2 + N, 2)`.
    /// One code path for every dof > 0.
    pub fn sample_noncentral_chisq(&mut self, dof: f64, noncentrality: f64) -> Result<f64> {
        if !(dof > 0.0 && dof.is_finite()) {
            return Err(Error::param(format!("dof must be > 0, got {dof}")));
        }
        if !(noncentrality >= 0.0 && noncentrality.is_finite()) {
            return Err(Error::param(format!(
                "noncentrality must be finite and >= 0, got {noncentrality}"
            )));
        }
        let n = self.sample_poisson(0.5 * noncentrality)?;
        self.sample_gamma(0.5 * dof + n as f64, 2.0)
    }
}

impl RngCore for RngStream {
    fn next_u32(&mut self) -> u32 {
        self.core.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.core.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.core.fill_bytes(dst)
    }
}
