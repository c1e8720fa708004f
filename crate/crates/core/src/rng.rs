//! Seeded sampling. Every random draw in the crate goes through `Sampler`,
//! a PCG-64 (XSL-RR 128/64) stream, so a seed fixes every report exactly.

use rand::{RngExt, SeedableRng};
use rand_pcg::Pcg64;

pub struct Sampler(Pcg64);

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler(Pcg64::seed_from_u64(seed))
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        self.0.random_range(lo..hi)
    }

    pub fn int(&mut self, lo: i64, hi_inclusive: i64) -> i64 {
        self.0.random_range(lo..=hi_inclusive)
    }
}
