//! Seedable pseudo-random source and the plain Monte Carlo sampler.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::points::PointSet;

const INV_2_POW_53: f64 = 1.0 / (1u64 << 53) as f64;

/// Deterministic uniform stream on `[0, 1)`.
///
/// Backed by ChaCha8, a counter-based generator, so a stream is fully
/// determined by its seed and portable across platforms. A stream is owned
/// by one task; parallel replicates each build their own.
#[derive(Debug, Clone)]
pub struct RandomStream {
    seed: u64,
    rng: ChaCha8Rng,
}

impl RandomStream {
    pub fn new(seed: u64) -> Self {
        Self { seed, rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    /// Stream for replicate `k` of an experiment seeded with `base_seed`.
    pub fn for_replicate(base_seed: u64, k: usize) -> Self {
        Self::new(base_seed.wrapping_add(k as u64))
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Next draw: the 53 high bits of a 64-bit output scaled by 2^-53.
    #[inline]
    pub fn next_f64(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * INV_2_POW_53
    }

    /// Unbiased integer in `0..bound`.
    #[inline]
    pub fn next_below(&mut self, bound: usize) -> usize {
        self.rng.random_range(0..bound)
    }

    pub fn fill(&mut self, buf: &mut [f64]) {
        for x in buf {
            *x = self.next_f64();
        }
    }
}

/// Shorthand for [`RandomStream::new`].
pub fn make_stream(seed: u64) -> RandomStream {
    RandomStream::new(seed)
}

/// A bijection on `{1, ..., N}`, stored as `mapping[i-1] = pi(i)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Permutation {
    mapping: Vec<u32>,
}

impl Permutation {
    pub fn len(&self) -> usize {
        self.mapping.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mapping.is_empty()
    }

    /// `pi(i)` for 1-based `i`.
    pub fn apply(&self, i: usize) -> usize {
        self.mapping[i - 1] as usize
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.mapping
    }
}

/// Points with every coordinate an independent draw from `stream`, row by row.
pub fn mc_point_set(stream: &mut RandomStream, dim: usize, count: usize) -> Result<PointSet> {
    if dim == 0 {
        return Err(Error::ZeroDimension);
    }
    if count == 0 {
        return Err(Error::ZeroCount);
    }
    let mut data = vec![0.0; dim * count];
    stream.fill(&mut data);
    Ok(PointSet::from_raw(dim, data))
}

/// Uniform random permutation of `{1, ..., N}` by Fisher-Yates shuffling.
pub fn random_permutation(stream: &mut RandomStream, count: usize) -> Result<Permutation> {
    if count == 0 {
        return Err(Error::ZeroCount);
    }
    let count = u32::try_from(count).map_err(|_| Error::ZeroCount)?;
    let mut mapping: Vec<u32> = (1..=count).collect();
    shuffle(stream, &mut mapping);
    Ok(Permutation { mapping })
}

pub(crate) fn shuffle(stream: &mut RandomStream, values: &mut [u32]) {
    for i in (1..values.len()).rev() {
        let j = stream.next_below(i + 1);
        values.swap(i, j);
    }
}
