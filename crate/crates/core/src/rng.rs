//! Seeded random streams and Gaussian helpers.
//!
//! A master seed plus a sample index selects an independent ChaCha stream, so
//! sample `i` draws the same numbers whether samples run serially or in
//! parallel.

use num_complex::Complex;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;

use crate::linalg::{polar_right, ComplexMatrix};
use crate::scalar::Real;

pub type SampleRng = ChaCha20Rng;

/// Stream `index` of the generator keyed by `master`.
pub fn stream_rng(master: u64, index: u64) -> SampleRng {
    let mut rng = ChaCha20Rng::seed_from_u64(master);
    rng.set_stream(index);
    rng
}

/// Standard complex Gaussian: real and imaginary parts `N(0, 1/2)`.
pub fn complex_gaussian<T: Real>(rng: &mut impl Rng) -> Complex<T> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex::new(T::of(re * h), T::of(im * h))
}

/// Matrix of independent standard complex Gaussians.
pub fn ginibre<T: Real>(rows: usize, cols: usize, rng: &mut impl Rng) -> ComplexMatrix<T> {
    ComplexMatrix::from_fn(rows, cols, |_, _| complex_gaussian(rng))
}

/// Random unitary: unitary polar factor of a Ginibre matrix.
pub fn random_unitary<T: Real>(n: usize, rng: &mut impl Rng) -> ComplexMatrix<T> {
    let g = ginibre(n, n, rng);
    polar_right(&g).expect("square finite input").0
}

/// Uniform draw from `[0, 1]`.
pub fn unit_interval<T: Real>(rng: &mut impl Rng) -> T {
    T::of(rng.random_range(0.0..=1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a: u64 = stream_rng(5, 0).random();
        let b: u64 = stream_rng(5, 0).random();
        let c: u64 = stream_rng(5, 1).random();
        let d: u64 = stream_rng(6, 0).random();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_ne!(a, d);
    }

    #[test]
    fn random_unitary_is_unitary() {
        let mut rng = stream_rng(1, 2);
        let u: ComplexMatrix<f64> = random_unitary(6, &mut rng);
        assert!(u.unitarity_defect() < 1e-12);
    }
}
