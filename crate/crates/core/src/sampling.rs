//! Seeded random draws shared by the suites and the Monte Carlo drivers.
//!
//! All randomness comes from ChaCha8 streams so that results are identical
//! across platforms and thread counts for a given seed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::ga::{UnitVector3, Vector3};

/// Draws with a norm below this are rejected before normalizing.
const MIN_DRAW_NORM: f64 = 1e-12;

/// A ChaCha8 generator on stream `stream` of `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Uniform direction on the sphere: a normalized triple of standard normals.
pub fn unit_vector<R: Rng + ?Sized>(rng: &mut R) -> UnitVector3 {
    loop {
        let v = Vector3::new(rng.sample(StandardNormal), rng.sample(StandardNormal), rng.sample(StandardNormal));
        if v.norm() >= MIN_DRAW_NORM {
            return UnitVector3::normalize(v).expect("finite nonzero draw");
        }
    }
}

/// Multivector with every coefficient uniform in `[-1, 1]`.
pub fn multivector<R: Rng + ?Sized>(rng: &mut R) -> crate::ga::Multivector {
    let mut c = [0.0; 8];
    for x in c.iter_mut() {
        *x = rng.random_range(-1.0..=1.0);
    }
    crate::ga::Multivector::from_coeffs(c)
}
