//! Seeded random streams.
//!
//! Every stream is a xoshiro256++ generator seeded through splitmix64, keyed by
//! `(seed, index)` so that parallel and sequential sweeps draw identical numbers.

use rand::{Rng, SeedableRng};
use rand_distr::StandardNormal;
use rand_xoshiro::Xoshiro256PlusPlus;

use crate::point::Point;

pub type Stream = Xoshiro256PlusPlus;

pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn stream(seed: u64) -> Stream {
    Xoshiro256PlusPlus::seed_from_u64(seed)
}

/// Independent stream for sub-task `index` of a run seeded with `seed`.
pub fn substream(seed: u64, index: u64) -> Stream {
    Xoshiro256PlusPlus::seed_from_u64(splitmix64(seed) ^ splitmix64(index.wrapping_add(0x5851_F42D)))
}

/// Uniform direction on the unit sphere.
pub fn unit_vector<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Point {
    loop {
        let v: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
        if let Some(u) = Point::new(v).normalized() {
            return u;
        }
    }
}

pub fn gaussian<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Point {
    Point::new((0..dim).map(|_| rng.sample(StandardNormal)).collect())
}
