//! Reproducible random sampling: uniform subsets of ℤ_N^d (without
//! replacement) and i.i.d. area-uniform points on S².
//!
//! Every draw is driven by a ChaCha20 stream seeded from a 64-bit seed.
//! Trial seeds are split from a master seed with [`derive_seed`], so a
//! Monte-Carlo run is reproducible regardless of how many threads execute it.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::error::{Error, Result};
use crate::spectral::unravel;

/// Generator recorded in every report.
pub const RNG_NAME: &str = "ChaCha20 (rand_chacha 0.9, seed_from_u64)";

pub fn rng_from_seed(seed: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed)
}

/// SplitMix64 finalizer.
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of stream `stream` under `master`: one SplitMix64 step from
/// `master + (stream + 1)·φ64`, where φ64 is the 64-bit golden-ratio increment.
pub fn derive_seed(master: u64, stream: u64) -> u64 {
    mix64(master.wrapping_add(stream.wrapping_add(1).wrapping_mul(0x9e37_79b9_7f4a_7c15)))
}

/// Observed subset of ℤ_N^d.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampleSet {
    dims: usize,
    side: usize,
    /// Sorted, distinct row-major indices.
    indices: Vec<usize>,
    seed: u64,
}

impl SampleSet {
    /// Builds a set from explicit indices (sorted and deduplicated on entry).
    pub fn from_indices(dims: usize, side: usize, mut indices: Vec<usize>, seed: u64) -> Result<Self> {
        let total = side.pow(dims as u32);
        indices.sort_unstable();
        indices.dedup();
        if indices.last().is_some_and(|&i| i >= total) {
            return Err(Error::Structural(format!("sample index outside ℤ_{side}^{dims}")));
        }
        Ok(Self { dims, side, indices, seed })
    }

    pub fn dims(&self) -> usize {
        self.dims
    }

    pub fn side(&self) -> usize {
        self.side
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn points(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        self.indices.iter().map(|&i| unravel(i, self.side, self.dims))
    }

    /// Restriction of full-grid values to the sample, in sample order.
    pub fn restrict<T: Copy>(&self, full: &[T]) -> Vec<T> {
        self.indices.iter().map(|&i| full[i]).collect()
    }
}

/// Uniform size-`k` subset of ℤ_N^d by a partial Fisher–Yates shuffle.
pub fn draw_subset(side: usize, dims: usize, k: usize, seed: u64) -> Result<SampleSet> {
    let total = side
        .checked_pow(dims as u32)
        .ok_or_else(|| Error::Structural("grid size overflows".into()))?;
    if k > total {
        return Err(Error::Domain(format!("cannot draw {k} distinct points from {total}")));
    }
    let mut rng = rng_from_seed(seed);
    let mut pool: Vec<usize> = (0..total).collect();
    for i in 0..k {
        let j = rng.random_range(i..total);
        pool.swap(i, j);
    }
    pool.truncate(k);
    SampleSet::from_indices(dims, side, pool, seed)
}

/// Point on S² in polar coordinates: θ ∈ [0, π] from the north pole, φ ∈ [0, 2π).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpherePoint {
    pub theta: f64,
    pub phi: f64,
}

impl SpherePoint {
    pub fn new(theta: f64, phi: f64) -> Self {
        Self { theta, phi }
    }

    pub fn cartesian(&self) -> [f64; 3] {
        let s = self.theta.sin();
        [s * self.phi.cos(), s * self.phi.sin(), self.theta.cos()]
    }
}

/// I.i.d. sample of sphere points; repetitions are allowed.
#[derive(Clone, Debug, PartialEq)]
pub struct SampleMultiset {
    points: Vec<SpherePoint>,
    seed: u64,
}

impl SampleMultiset {
    pub fn from_points(points: Vec<SpherePoint>, seed: u64) -> Self {
        Self { points, seed }
    }

    pub fn points(&self) -> &[SpherePoint] {
        &self.points
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// `q` independent area-uniform points: cos θ ~ U[−1, 1], φ ~ U[0, 2π).
pub fn draw_sphere_points(q: usize, seed: u64) -> SampleMultiset {
    let mut rng = rng_from_seed(seed);
    let points = (0..q)
        .map(|_| {
            let z: f64 = 2.0 * rng.random::<f64>() - 1.0;
            let phi: f64 = 2.0 * PI * rng.random::<f64>();
            SpherePoint::new(z.clamp(-1.0, 1.0).acos(), phi)
        })
        .collect();
    SampleMultiset { points, seed }
}

/// Unnormalized root-sum-of-squares over the sample (no `|X|^{-1/2}` factor).
pub fn empirical_norm(values: &[Complex64]) -> f64 {
    values.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
}

/// [`empirical_norm`] with a check that `values` is aligned with a sample of `expected` points.
pub fn empirical_norm_checked(values: &[Complex64], expected: usize) -> Result<f64> {
    if values.len() != expected {
        return Err(Error::Structural(format!(
            "{} values for a sample of {expected} points",
            values.len()
        )));
    }
    Ok(empirical_norm(values))
}
