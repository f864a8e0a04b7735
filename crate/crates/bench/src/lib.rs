//! Deterministic inputs for the benchmark kernels.

use std::sync::Arc;

use p1k_core::{FieldTag, GradedRing, Matrix, Scalar, SheafComplex};

/// splitmix64: fixed stream so benchmarks measure the same inputs each run.
fn mix(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E3779B97F4A7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

/// Dense square matrix with entries in [-4, 4].
pub fn dense_matrix(tag: FieldTag, n: usize, seed: u64) -> Matrix {
    let mut state = seed;
    Matrix::from_fn(tag, n, n, |_, _| Scalar::from_i64(tag, (mix(&mut state) % 9) as i64 - 4))
}

pub fn checkerboard() -> Arc<GradedRing> {
    GradedRing::checkerboard(FieldTag::Q).unwrap()
}

pub fn laurent() -> Arc<GradedRing> {
    GradedRing::laurent(FieldTag::Q).unwrap()
}

/// Mid-sized complex of twisting sheaves used by the hypercohomology kernel.
pub fn sample_complex(ring: &Arc<GradedRing>) -> SheafComplex {
    p1k_core::random_complex(ring, 3, 2, (-2, 2), 0xBE7C).unwrap()
}
