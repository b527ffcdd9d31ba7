//! Seeded random streams and standard normal variates.
//!
//! Every sample index gets its own ChaCha8 stream (`seed` as key, the index as
//! stream id), so a sample's draws do not depend on which worker handles it.
//! Normals come from the Box–Muller transform on 53-bit uniforms.

use std::f64::consts::TAU;

use rand::RngCore;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The generator for sample `index` under `seed`.
pub fn stream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Uniform on `(0, 1]`.
fn open_unit(rng: &mut impl RngCore) -> f64 {
    ((rng.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Standard normal variates, generated in Box–Muller pairs.
#[derive(Debug)]
pub struct Normals<R> {
    rng: R,
    spare: Option<f64>,
}

impl<R: RngCore> Normals<R> {
    pub fn new(rng: R) -> Self {
        Self { rng, spare: None }
    }

    pub fn next(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        let radius = (-2.0 * open_unit(&mut self.rng).ln()).sqrt();
        let angle = TAU * open_unit(&mut self.rng);
        self.spare = Some(radius * angle.sin());
        radius * angle.cos()
    }

    /// `count` vectors of length `dim`.
    pub fn vectors(&mut self, count: usize, dim: usize) -> Vec<Vec<f64>> {
        (0..count)
            .map(|_| (0..dim).map(|_| self.next()).collect())
            .collect()
    }
}

/// Normal variates for sample `index` under `seed`.
pub fn normals(seed: u64, index: u64) -> Normals<ChaCha8Rng> {
    Normals::new(stream(seed, index))
}
