//! Deterministic sub-seeding.
//!
//! All randomness flows from one master seed through per-task tags, so
//! independent tasks can run in any order without changing results.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::point::Point;

/// An RNG for the task identified by `tags`, derived from `master`.
///
/// The same `(master, tags)` always yields the same stream; different tags
/// yield statistically independent streams.
pub fn task_rng(master: u64, tags: &[u64]) -> ChaCha8Rng {
    let mut seed = [0u8; 32];
    seed[..8].copy_from_slice(&master.to_le_bytes());
    for (i, t) in tags.iter().enumerate() {
        let mut h = t.wrapping_mul(0x9e37_79b9_7f4a_7c15).rotate_left(31);
        h ^= (i as u64).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        let off = 8 + 8 * (i % 3);
        let mut chunk = [0u8; 8];
        chunk.copy_from_slice(&seed[off..off + 8]);
        let mixed = u64::from_le_bytes(chunk) ^ h;
        seed[off..off + 8].copy_from_slice(&mixed.to_le_bytes());
    }
    ChaCha8Rng::from_seed(seed)
}

/// A uniformly random unit direction in dimension `dim`.
pub fn unit_direction<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Point {
    loop {
        // Box-Muller-free rejection-safe Gaussian via central limit is too
        // crude; sum of 12 uniforms is fine for directions but rand has a
        // proper normal through the ziggurat in rand_distr. Keep the dep
        // surface small: Box-Muller by hand.
        let mut v = Vec::with_capacity(dim);
        let mut i = 0;
        while i < dim {
            let u1: f64 = rng.gen::<f64>().max(1e-300);
            let u2: f64 = rng.gen();
            let r = (-2.0 * u1.ln()).sqrt();
            v.push(r * (std::f64::consts::TAU * u2).cos());
            i += 1;
            if i < dim {
                v.push(r * (std::f64::consts::TAU * u2).sin());
                i += 1;
            }
        }
        let p = Point::new(v);
        let n = p.norm();
        if n > 1e-12 {
            return p.scale(1.0 / n);
        }
    }
}
